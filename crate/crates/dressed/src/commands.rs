//! The five subcommands. Each writes its files under the output directory,
//! prints a report, and returns whether every check passed.

use std::io::Write;
use std::path::{Path, PathBuf};

use dressed_core::analysis::{location_index, wehrl_entropy, IntervalRequest, SweepResult, WeightKind};
use dressed_core::coherent::GenericityMode;
use dressed_core::dressing::{sigma_eigenvalue, sigma_spectrum, Construction};
use dressed_core::games::{
    degrees_of_freedom, mobius_setfn, monotonic, shapley_mobius, shapley_permutation, shapley_subset, superadditive,
    Predicate, PERMUTATION_CAP,
};
use dressed_core::quantum::{q_point, shapley_of_operator};
use dressed_core::{CoherentFamily, DressedFamily, LabelSubset, Operator, PhaseSpace, StateSet, TotalSet};
use serde_json::{json, Value};
use thiserror::Error;

use crate::config::{ConfigError, OutputFormat, RunConfig};
use crate::io::{self, fmt_complex, fmt_real, matrix_csv, matrix_json, vector_json, FormatError, Polynomial};
use crate::reference::{self, LAMBDA_GRID, REFERENCE_LAMBDA, SIGMA1_EIGENVALUES};
use crate::tables::{self, Comparison, Tables, EIGENVALUE_TOL_FACTOR};
use crate::{parallel, verify};

#[derive(Debug, Error)]
pub enum CommandError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Core(#[from] dressed_core::Error),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("writing report: {0}")]
    Report(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CommandError>;

/// Tolerance on the three Shapley formulas agreeing in `game`.
pub const GAME_AGREEMENT_TOL: f64 = 1e-9;

pub fn family(cfg: &RunConfig) -> Result<CoherentFamily> {
    let space = PhaseSpace::new(cfg.d)?;
    Ok(CoherentFamily::new(&space, cfg.fiducial_vector()?)?)
}

fn write(cfg: &RunConfig, name: &str, text: &str) -> Result<PathBuf> {
    let path = cfg.out_dir.join(name);
    io::write_text(&path, text)?;
    Ok(path)
}

fn ext(cfg: &RunConfig) -> &'static str {
    match cfg.format {
        OutputFormat::Csv => "csv",
        OutputFormat::Json => "json",
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn quoted(s: impl std::fmt::Display) -> String {
    format!("\"{s}\"")
}

fn reals(xs: &[f64]) -> String {
    xs.iter().map(|x| fmt_real(*x)).collect::<Vec<_>>().join(",")
}

fn check_line(out: &mut impl Write, c: &verify::Check) -> Result<()> {
    writeln!(out, "  {c}")?;
    Ok(())
}

// ---- tables

fn weight_table(rows: &[tables::WeightRow], prefix: &str, format: OutputFormat) -> String {
    let n = rows.first().map_or(0, |r| r.values.len());
    match format {
        OutputFormat::Csv => {
            let mut s = String::from("operator");
            for j in 1..=n {
                s.push_str(&format!(",{prefix}({j})"));
            }
            s.push_str(",index\n");
            for r in rows {
                s.push_str(&format!("{},{},{}\n", r.name, reals(&r.values), quoted(&r.index)));
            }
            s
        }
        OutputFormat::Json => pretty(&Value::Array(
            rows.iter()
                .map(|r| json!({"operator": r.name, "values": r.values, "index": r.index.to_string()}))
                .collect(),
        )),
    }
}

pub fn sweep_table(sweep: &SweepResult, format: OutputFormat) -> String {
    let d = sweep.points.first().map_or(0, |p| p.eigenvalues.len());
    match format {
        OutputFormat::Csv => {
            let mut s = String::from("lambda");
            for k in 1..=d {
                s.push_str(&format!(",h{k}"));
            }
            s.push_str(",degeneracy,overlap,S index,Q index\n");
            for p in &sweep.points {
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    fmt_real(p.lambda),
                    reals(&p.eigenvalues),
                    p.ground_degeneracy,
                    fmt_real(p.overlap),
                    quoted(&p.s_index),
                    quoted(&p.q_index)
                ));
            }
            s
        }
        OutputFormat::Json => pretty(&json!({
            "reference_lambda": sweep.reference_lambda,
            "points": sweep.points.iter().map(|p| json!({
                "lambda": p.lambda,
                "eigenvalues": p.eigenvalues,
                "degeneracy": p.ground_degeneracy,
                "overlap": p.overlap,
                "ground": vector_json(&p.ground),
                "q": p.q,
                "s": p.s,
                "q_index": p.q_index.to_string(),
                "s_index": p.s_index.to_string(),
            })).collect::<Vec<_>>(),
            "intervals": intervals_json(sweep),
        })),
    }
}

fn intervals_json(sweep: &SweepResult) -> Value {
    Value::Array(
        sweep
            .intervals
            .iter()
            .map(|iv| {
                json!({
                    "n": iv.n,
                    "kind": iv.kind.to_string(),
                    "lambda_start": iv.lambda_start,
                    "lambda_end": iv.lambda_end,
                    "strict": iv.strict,
                    "leading": iv.leading,
                })
            })
            .collect(),
    )
}

pub fn intervals_csv(sweep: &SweepResult) -> String {
    let mut s = String::from("n,kind,lambda_start,lambda_end,strict,leading\n");
    for iv in &sweep.intervals {
        let lead = LocationIndexText(&iv.leading);
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            iv.n,
            iv.kind,
            fmt_real(iv.lambda_start),
            fmt_real(iv.lambda_end),
            iv.strict,
            quoted(lead)
        ));
    }
    s
}

struct LocationIndexText<'a>(&'a [Vec<usize>]);

impl std::fmt::Display for LocationIndexText<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|g| {
                let l: Vec<String> = g.iter().map(ToString::to_string).collect();
                if g.len() == 1 {
                    l[0].clone()
                } else {
                    format!("{{{}}}", l.join(","))
                }
            })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

fn report_comparison(out: &mut impl Write, cmp: &Comparison, tol: f64) -> Result<()> {
    for t in 1..=3u8 {
        writeln!(
            out,
            "table {t}: max |deviation| {:.3e} (tol {tol:.1e}{})",
            cmp.max_deviation[t as usize - 1],
            if t == 3 {
                format!(", eigenvalues {:.1e}", tol * EIGENVALUE_TOL_FACTOR)
            } else {
                String::new()
            }
        )?;
    }
    writeln!(out, "compared {} values and {} indices", cmp.numeric_cells, cmp.index_cells)?;
    if cmp.passed() {
        writeln!(out, "all cells match")?;
    } else {
        writeln!(out, "{} mismatched cells:", cmp.discrepancies.len())?;
        for d in &cmp.discrepancies {
            writeln!(out, "  {d}")?;
        }
    }
    Ok(())
}

pub fn cmd_tables(cfg: &RunConfig, out: &mut impl Write) -> Result<bool> {
    let fam = family(cfg)?;
    let dressed = parallel::dress_coherent(&fam, Construction::Covariance)?;
    let t: Tables = tables::compute(&fam, &dressed, cfg.tolerances.tie)?;
    let e = ext(cfg);
    let mut paths = vec![
        write(cfg, &format!("table1.{e}"), &weight_table(&t.shapley, "S", cfg.format))?,
        write(cfg, &format!("table2.{e}"), &weight_table(&t.q, "Q", cfg.format))?,
    ];
    if let Some(sw) = &t.sweep {
        paths.push(write(cfg, &format!("table3.{e}"), &sweep_table(sw, cfg.format))?);
    }
    for p in &paths {
        writeln!(out, "wrote {}", p.display())?;
    }
    if !cfg.has_golden_data() {
        writeln!(out, "no golden data for d = {} with this fiducial; nothing compared", cfg.d)?;
        return Ok(true);
    }
    let cmp = tables::compare(&t, cfg.tolerances.table_match);
    report_comparison(out, &cmp, cfg.tolerances.table_match)?;
    Ok(cmp.passed())
}

// ---- dress

#[derive(Clone, Debug, PartialEq)]
pub enum DressMode {
    Coherent { construction: Construction, verify: bool },
    TotalSet(PathBuf),
}

fn write_sigmas(cfg: &RunConfig, dressed: &DressedFamily) -> Result<Vec<PathBuf>> {
    match cfg.format {
        OutputFormat::Csv => dressed
            .sigmas()
            .iter()
            .enumerate()
            .map(|(k, s)| write(cfg, &format!("sigma_{}.csv", k + 1), &matrix_csv(s)))
            .collect(),
        OutputFormat::Json => {
            let v = json!({
                "dim": dressed.dim(),
                "sigmas": dressed.sigmas().iter().map(matrix_json).collect::<Vec<_>>(),
            });
            Ok(vec![write(cfg, "sigmas.json", &pretty(&v))?])
        }
    }
}

pub fn cmd_dress(cfg: &RunConfig, mode: &DressMode, out: &mut impl Write) -> Result<bool> {
    match mode {
        DressMode::Coherent { construction, verify } => dress_coherent(cfg, *construction, *verify, out),
        DressMode::TotalSet(path) => dress_total(cfg, path, out),
    }
}

fn dress_coherent(cfg: &RunConfig, construction: Construction, full: bool, out: &mut impl Write) -> Result<bool> {
    let fam = family(cfg)?;
    let dressed = parallel::dress_coherent(&fam, construction)?;
    let paths = write_sigmas(cfg, &dressed)?;
    writeln!(out, "wrote {} file(s) under {}", paths.len(), cfg.out_dir.display())?;
    let d = fam.dim();
    let spec = sigma_spectrum(dressed.sigma(1)?, fam.state(1))?;
    let mut eig = spec.eigenvalues.clone();
    eig.reverse();
    writeln!(out, "σ(1) eigenvalues: {}", reals(&eig))?;
    let expected = sigma_eigenvalue(d);
    writeln!(
        out,
        "⟨C;1|σ(1)|C;1⟩ = {} (closed form {}), eigenvector defect {:.3e}",
        fmt_real(spec.on_state),
        fmt_real(expected),
        spec.eigen_defect
    )?;
    let mut checks = vec![
        verify::Check::new("resolution (1/d) Σ σ(i)", dressed.resolution_residual(), verify::TOL_RESOLUTION),
        verify::Check::new(
            "σ(1) eigenvalue on |C;1⟩",
            (spec.on_state - expected).abs().max(spec.eigen_defect),
            verify::TOL_RESOLUTION,
        ),
    ];
    if full {
        checks = verify::coherent_invariants(&fam, &dressed, verify::Coverage::for_dim(d))?;
    }
    if cfg.has_golden_data() {
        let tol = cfg.tolerances.table_match;
        let dev = eig
            .iter()
            .zip(SIGMA1_EIGENVALUES)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        checks.push(verify::Check::new("σ(1) eigenvalues vs reference", dev, tol));
        let entries = dressed.sigma(1)?.max_abs_diff(&reference::sigma1());
        checks.push(verify::Check::new("σ(1) entries vs reference", entries, tol));
    }
    writeln!(out, "checks:")?;
    for c in &checks {
        check_line(out, c)?;
    }
    Ok(checks.iter().all(verify::Check::passed))
}

fn dress_total(cfg: &RunConfig, path: &Path, out: &mut impl Write) -> Result<bool> {
    let (dim, vectors) = io::read_total_set(path)?;
    if vectors.len() < dim {
        return Err(CommandError::Invalid(format!(
            "{} vectors cannot span H({dim}); a total set needs at least {dim}",
            vectors.len()
        )));
    }
    let ts = TotalSet::new(vectors)?;
    if !ts.is_generic() {
        let g = ts.genericity();
        return Err(CommandError::Invalid(format!(
            "total set is not generic: subset {} is linearly dependent",
            g.failures[0]
        )));
    }
    let dressed = parallel::dress_total(&ts)?;
    let paths = write_sigmas(cfg, &dressed)?;
    writeln!(out, "wrote {} file(s) under {}", paths.len(), cfg.out_dir.display())?;
    for (k, s) in dressed.sigmas().iter().enumerate() {
        let mut e = s.eigh()?.values;
        e.reverse();
        writeln!(out, "σ({}) eigenvalues: {}", k + 1, reals(&e))?;
    }
    let checks = verify::total_set_invariants(&dressed)?;
    writeln!(out, "checks:")?;
    for c in &checks {
        check_line(out, c)?;
    }
    Ok(checks.iter().all(verify::Check::passed))
}

// ---- game

fn subset_text(a: LabelSubset) -> String {
    if a.is_empty() {
        "{}".into()
    } else {
        a.to_string()
    }
}

fn predicate_text(p: &Predicate) -> String {
    match p.witness {
        None => "yes".into(),
        Some((a, b)) => format!("no (witness {} and {})", subset_text(a), subset_text(b)),
    }
}

pub fn cmd_game(cfg: &RunConfig, path: &Path, out: &mut impl Write) -> Result<bool> {
    let file = io::read_game(path)?;
    let v = file.game;
    let n = v.n();
    let values = v.values()?;
    let mobius = mobius_setfn(&v)?.values()?;
    let s_sub = shapley_subset(&v)?;
    let s_mob = shapley_mobius(&v)?;
    let s_perm = if n <= PERMUTATION_CAP {
        Some(shapley_permutation(&v)?)
    } else {
        None
    };
    let mut spread = s_sub.max_abs_diff(&s_mob);
    if let Some(p) = &s_perm {
        spread = spread.max(s_sub.max_abs_diff(p));
    }
    let sup = superadditive(&v)?;
    let mon = monotonic(&v)?;
    let ok = spread <= GAME_AGREEMENT_TOL;
    // coalitions in order of size, then bitmask
    let mut order: Vec<usize> = (1..values.len()).collect();
    order.sort_by_key(|&m| (m.count_ones(), m));
    let subset = |m: usize| LabelSubset::from_labels(&(0..n).filter(|j| m >> j & 1 == 1).map(|j| j + 1).collect::<Vec<_>>());
    match cfg.format {
        OutputFormat::Csv => {
            writeln!(out, "players: {n} ({} coalitions listed)", file.listed)?;
            writeln!(out, "coalition,v,mobius")?;
            for &m in &order {
                writeln!(out, "{},{},{}", quoted(subset(m)?), fmt_real(values[m]), fmt_real(mobius[m]))?;
            }
            writeln!(out, "shapley (subset):      {}", reals(&s_sub.0))?;
            writeln!(out, "shapley (mobius):      {}", reals(&s_mob.0))?;
            match &s_perm {
                Some(p) => writeln!(out, "shapley (permutation): {}", reals(&p.0))?,
                None => writeln!(out, "shapley (permutation): skipped, n > {PERMUTATION_CAP}")?,
            }
            writeln!(out, "max disagreement: {spread:.3e} (tol {GAME_AGREEMENT_TOL:.0e})")?;
            writeln!(out, "efficiency: Σ S = {} , v(N) = {}", fmt_real(s_sub.total()), fmt_real(v.grand()))?;
            writeln!(out, "superadditive: {}", predicate_text(&sup))?;
            writeln!(out, "monotonic: {}", predicate_text(&mon))?;
            writeln!(out, "free values below the grand coalition: {}", degrees_of_freedom(n, n))?;
        }
        OutputFormat::Json => {
            let coalitions = order
                .iter()
                .map(|&m| Ok(json!({"coalition": subset(m)?.to_vec(), "v": values[m], "mobius": mobius[m]})))
                .collect::<std::result::Result<Vec<_>, dressed_core::Error>>()?;
            let v = json!({
                "players": n,
                "listed": file.listed,
                "coalitions": coalitions,
                "shapley": {
                    "subset": s_sub.0,
                    "mobius": s_mob.0,
                    "permutation": s_perm.as_ref().map(|p| p.0.clone()),
                },
                "max_disagreement": spread,
                "superadditive": sup.holds,
                "monotonic": mon.holds,
                "degrees_of_freedom": degrees_of_freedom(n, n),
            });
            write!(out, "{}", pretty(&v))?;
        }
    }
    Ok(ok)
}

// ---- sweep

/// `a:b:step` or a comma-separated list.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Err(dressed_core::Error::InvalidArgument("empty λ grid".into()).into());
    }
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| CommandError::Invalid(format!("bad grid value {s:?}")))
    };
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [a, b, step] => {
            let (a, b, step) = (num(a)?, num(b)?, num(step)?);
            if !(step > 0.0) || b < a {
                return Err(CommandError::Invalid(format!("grid {spec:?} needs a <= b and step > 0")));
            }
            let count = ((b - a) / step + 1e-9).floor() as usize + 1;
            Ok((0..count).map(|k| a + k as f64 * step).collect())
        }
        [_] => spec.split(',').map(num).collect(),
        _ => Err(CommandError::Invalid(format!("grid {spec:?} is neither a:b:step nor a list"))),
    }
}

#[derive(Clone, Debug, Default)]
pub struct SweepArgs {
    pub hamiltonian: Option<PathBuf>,
    pub grid: Option<String>,
    pub reference: Option<f64>,
    /// Leading-entry counts for the interval search.
    pub top: Vec<usize>,
}

pub fn cmd_sweep(cfg: &RunConfig, args: &SweepArgs, out: &mut impl Write) -> Result<bool> {
    let fam = family(cfg)?;
    let poly = match &args.hamiltonian {
        Some(p) => io::read_hamiltonian(p)?,
        None => Polynomial {
            terms: reference::hamiltonian_terms().to_vec(),
        },
    };
    if poly.dim() != cfg.d {
        return Err(CommandError::Invalid(format!(
            "Hamiltonian acts on H({}) but d = {}",
            poly.dim(),
            cfg.d
        )));
    }
    let grid = match &args.grid {
        Some(g) => parse_grid(g)?,
        None => LAMBDA_GRID.to_vec(),
    };
    let reference_lambda = args.reference.unwrap_or(grid[0]);
    let tops = if args.top.is_empty() { vec![1] } else { args.top.clone() };
    let requests: Vec<IntervalRequest> = tops
        .iter()
        .flat_map(|&n| [WeightKind::Q, WeightKind::S].map(|kind| IntervalRequest { n, kind }))
        .collect();
    let dressed = parallel::dress_coherent(&fam, Construction::Covariance)?;
    let sweep = parallel::sweep(&fam, &dressed, |l| poly.at(l), &grid, reference_lambda, cfg.tolerances.tie, &requests)?;
    let mut paths = vec![write(cfg, &format!("sweep.{}", ext(cfg)), &sweep_table(&sweep, cfg.format))?];
    if cfg.format == OutputFormat::Csv {
        paths.push(write(cfg, "intervals.csv", &intervals_csv(&sweep))?);
    }
    for p in &paths {
        writeln!(out, "wrote {}", p.display())?;
    }
    writeln!(out, "{} points, reference λ = {reference_lambda}", sweep.points.len())?;
    for iv in &sweep.intervals {
        writeln!(
            out,
            "  top {} by {}: λ ∈ [{}, {}] leading {}{}",
            iv.n,
            iv.kind,
            iv.lambda_start,
            iv.lambda_end,
            LocationIndexText(&iv.leading),
            if iv.strict { "" } else { " (ties)" }
        )?;
    }
    let builtin = args.hamiltonian.is_none() && grid == LAMBDA_GRID && reference_lambda == REFERENCE_LAMBDA;
    if !(builtin && cfg.has_golden_data()) {
        return Ok(true);
    }
    let tables = Tables {
        shapley: Vec::new(),
        q: Vec::new(),
        sweep: Some(sweep),
    };
    let cmp = tables::compare(&tables, cfg.tolerances.table_match);
    writeln!(
        out,
        "reference sweep: max |deviation| {:.3e}, {} mismatched cells",
        cmp.max_deviation[2],
        cmp.discrepancies.len()
    )?;
    for d in &cmp.discrepancies {
        writeln!(out, "  {d}")?;
    }
    Ok(cmp.passed())
}

// ---- states

pub fn read_operator(path: &Path, d: usize) -> Result<Operator> {
    let text = io::read_text(path)?;
    let op = if path.extension().is_some_and(|e| e == "json") {
        let rows: Vec<Vec<io::Pair>> = serde_json::from_str(&text).map_err(|source| FormatError::Json {
            path: path.to_owned(),
            source,
        })?;
        let data = rows.iter().flatten().map(|p| io::from_pair(*p)).collect();
        Operator::from_row_major(rows.len(), data)?
    } else {
        io::parse_matrix_csv(&text)?
    };
    if op.dim() != d {
        return Err(CommandError::Invalid(format!("operator is {0}x{0} but d = {d}", op.dim())));
    }
    Ok(op)
}

pub fn cmd_states(cfg: &RunConfig, operator: Option<&Path>, out: &mut impl Write) -> Result<bool> {
    let fam = family(cfg)?;
    let space = fam.space();
    let n = fam.len();
    let text = match cfg.format {
        OutputFormat::Csv => {
            let mut s = String::from("label,alpha,beta");
            for m in 0..cfg.d {
                s.push_str(&format!(",c{m}"));
            }
            s.push('\n');
            for i in 1..=n {
                let p = space.unflat_index(i)?;
                let comps: Vec<String> = fam.state(i).iter().map(|z| fmt_complex(*z)).collect();
                s.push_str(&format!("{i},{},{},{}\n", p.alpha, p.beta, comps.join(",")));
            }
            s
        }
        OutputFormat::Json => {
            let states = (1..=n)
                .map(|i| {
                    let p = space.unflat_index(i)?;
                    Ok(json!({"label": i, "alpha": p.alpha, "beta": p.beta, "state": vector_json(fam.state(i))}))
                })
                .collect::<std::result::Result<Vec<_>, dressed_core::Error>>()?;
            pretty(&json!({"dim": cfg.d, "states": states}))
        }
    };
    writeln!(out, "wrote {}", write(cfg, &format!("states.{}", ext(cfg)), &text)?.display())?;
    writeln!(out, "resolution residual {:.3e}", fam.resolution_residual())?;
    let g = fam.genericity_check(GenericityMode::default_for(n, cfg.d));
    writeln!(
        out,
        "genericity: {} {} {}-subsets tested, min |det Gram| {:.3e}, {}",
        match g.mode {
            GenericityMode::Exhaustive => "all",
            GenericityMode::Sampled { .. } => "sampled",
        },
        g.tested,
        cfg.d,
        g.min_abs_det,
        if g.is_generic() {
            "generic".to_string()
        } else {
            format!("not generic, first dependent subset {}", g.failures[0])
        }
    )?;
    let mut ok = g.is_generic();
    if let Some(p) = operator {
        let theta = read_operator(p, cfg.d)?;
        theta.ensure_hermitian(cfg.tolerances.hermiticity, "operator")?;
        let dressed = parallel::dress_coherent(&fam, Construction::Covariance)?;
        let q = q_point(&fam, &theta)?;
        let s = shapley_of_operator(&dressed, &theta)?.0;
        let qi = location_index(&q, cfg.tolerances.tie)?;
        let si = location_index(&s, cfg.tolerances.tie)?;
        let body = match cfg.format {
            OutputFormat::Csv => {
                let mut t = String::from("label,Q,S,delta\n");
                for i in 0..n {
                    t.push_str(&format!("{},{},{},{}\n", i + 1, fmt_real(q[i]), fmt_real(s[i]), fmt_real(s[i] - q[i])));
                }
                t
            }
            OutputFormat::Json => pretty(&json!({
                "q": q, "s": s, "q_index": qi.to_string(), "s_index": si.to_string(),
            })),
        };
        writeln!(out, "wrote {}", write(cfg, &format!("weights.{}", ext(cfg)), &body)?.display())?;
        writeln!(out, "Q index {qi}")?;
        writeln!(out, "S index {si}")?;
        let tr = theta.trace().re;
        let sum_err = (q.iter().sum::<f64>() - tr).abs().max((s.iter().sum::<f64>() - tr).abs());
        let c = verify::Check::new("Σ Q = Σ S = Tr θ", sum_err, verify::TOL_SUM_RULE);
        check_line(out, &c)?;
        ok &= c.passed();
        if theta.is_density_matrix(cfg.tolerances.hermiticity) {
            writeln!(out, "Wehrl entropy {}", fmt_real(wehrl_entropy(&q)?))?;
        }
    }
    Ok(ok)
}
