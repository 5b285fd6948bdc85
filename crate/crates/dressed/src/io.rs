//! File formats: fiducials, total sets, games, Hamiltonians and the CSV /
//! JSON encodings of complex data.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use dressed_core::games::{SetFunction, DENSE_CAP};
use dressed_core::{Complex64, LabelSubset, Operator, Tolerances};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] dressed_core::Error),
}

pub type Result<T> = std::result::Result<T, FormatError>;

/// A complex number on disk: `[re, im]`.
pub type Pair = [f64; 2];

pub fn to_pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

pub fn from_pair(p: Pair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|source| FormatError::Io {
            path: dir.to_owned(),
            source,
        })?;
    }
    fs::write(path, text).map_err(|source| FormatError::Io {
        path: path.to_owned(),
        source,
    })
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|source| FormatError::Json {
        path: path.to_owned(),
        source,
    })
}

/// Either `[[re, im], ...]` or `{"coefficients": [[re, im], ...]}`.
#[derive(Deserialize)]
#[serde(untagged)]
enum FiducialFile {
    Bare(Vec<Pair>),
    Named { coefficients: Vec<Pair> },
}

pub fn read_fiducial(path: &Path) -> Result<Vec<Complex64>> {
    let coeffs = match read_json::<FiducialFile>(path)? {
        FiducialFile::Bare(c) | FiducialFile::Named { coefficients: c } => c,
    };
    Ok(coeffs.into_iter().map(from_pair).collect())
}

#[derive(Serialize, Deserialize)]
struct TotalSetFile {
    dim: usize,
    vectors: Vec<Vec<Pair>>,
}

/// `{"dim": d, "vectors": [[[re, im], ...], ...]}`.
pub fn read_total_set(path: &Path) -> Result<(usize, Vec<Vec<Complex64>>)> {
    let f: TotalSetFile = read_json(path)?;
    for (k, v) in f.vectors.iter().enumerate() {
        if v.len() != f.dim {
            return Err(FormatError::Invalid(format!(
                "vector {} has {} components, expected {}",
                k + 1,
                v.len(),
                f.dim
            )));
        }
    }
    let vectors = f
        .vectors
        .into_iter()
        .map(|v| v.into_iter().map(from_pair).collect())
        .collect();
    Ok((f.dim, vectors))
}

pub fn total_set_json(vectors: &[Vec<Complex64>]) -> String {
    let f = TotalSetFile {
        dim: vectors.first().map_or(0, Vec::len),
        vectors: vectors.iter().map(|v| v.iter().map(|z| to_pair(*z)).collect()).collect(),
    };
    serde_json::to_string_pretty(&f).expect("plain data serializes")
}

/// A cooperative game in text form, one coalition per line:
///
/// ```text
/// # workers
/// 1: 1
/// 1,2: 4
/// {1,2,3}: 8
/// ```
///
/// The ground set is `1..=n` with `n` the largest label seen, unless a
/// `players: n` line says otherwise. Coalitions not listed are worth 0.
#[derive(Clone, Debug)]
pub struct GameFile {
    pub game: SetFunction,
    pub listed: usize,
}

pub fn parse_game(text: &str) -> Result<GameFile> {
    let mut entries: Vec<(LabelSubset, f64, usize)> = Vec::new();
    let mut players: Option<usize> = None;
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let err = |msg: String| FormatError::Line { line: line_no, msg };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (lhs, rhs) = line
            .split_once(':')
            .ok_or_else(|| err(format!("expected `subset: value`, got {line:?}")))?;
        let lhs = lhs.trim();
        if lhs.eq_ignore_ascii_case("players") {
            let n = rhs.trim().parse().map_err(|_| err(format!("bad player count {:?}", rhs.trim())))?;
            players = Some(n);
            continue;
        }
        let value: f64 = rhs
            .trim()
            .parse()
            .map_err(|_| err(format!("bad value {:?}", rhs.trim())))?;
        if !value.is_finite() {
            return Err(err("value is not finite".into()));
        }
        let inner = lhs.trim_start_matches('{').trim_end_matches('}').trim();
        let labels = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .ok()
                    .filter(|&l| l >= 1)
                    .ok_or_else(|| err(format!("bad label {:?}", t.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        let subset = LabelSubset::from_labels(&labels).map_err(|e| err(e.to_string()))?;
        if let Some((_, _, first)) = entries.iter().find(|(s, _, _)| *s == subset) {
            return Err(err(format!("coalition {subset} already given on line {first}")));
        }
        entries.push((subset, value, line_no));
    }
    let max_label = entries.iter().map(|(s, _, _)| s.max_label()).max().unwrap_or(0);
    let n = players.unwrap_or(max_label);
    if let Some((s, _, line)) = entries.iter().find(|(s, _, _)| s.max_label() > n) {
        return Err(FormatError::Line {
            line: *line,
            msg: format!("coalition {s} exceeds {n} players"),
        });
    }
    if n == 0 {
        return Err(FormatError::Invalid("game has no players".into()));
    }
    if n > DENSE_CAP {
        return Err(FormatError::Invalid(format!("{n} players exceed the limit of {DENSE_CAP}")));
    }
    let mut values = vec![0.0; 1 << n];
    for (s, v, _) in &entries {
        values[s.index()] = *v;
    }
    let game = SetFunction::dense(n, values)?;
    Ok(GameFile {
        game,
        listed: entries.len(),
    })
}

pub fn read_game(path: &Path) -> Result<GameFile> {
    parse_game(&read_text(path)?)
}

/// `θ(λ) = Σ_k λ^k M_k`, with each `M_k` given as rows of `[re, im]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HamiltonianFile {
    pub dim: usize,
    pub terms: Vec<Vec<Vec<Pair>>>,
}

/// A polynomial family of Hermitian operators.
#[derive(Clone, Debug)]
pub struct Polynomial {
    pub terms: Vec<Operator>,
}

impl Polynomial {
    pub fn dim(&self) -> usize {
        self.terms[0].dim()
    }

    pub fn at(&self, lambda: f64) -> Operator {
        let mut acc = Operator::zeros(self.dim());
        let mut power = 1.0;
        for m in &self.terms {
            acc += &m.scale(power);
            power *= lambda;
        }
        acc
    }
}

pub fn polynomial_from_file(f: &HamiltonianFile) -> Result<Polynomial> {
    if f.terms.is_empty() {
        return Err(FormatError::Invalid("Hamiltonian has no terms".into()));
    }
    let tol = Tolerances::default().hermiticity;
    let terms = f
        .terms
        .iter()
        .enumerate()
        .map(|(k, rows)| {
            if rows.len() != f.dim || rows.iter().any(|r| r.len() != f.dim) {
                return Err(FormatError::Invalid(format!("term M_{k} is not {0}x{0}", f.dim)));
            }
            let data = rows.iter().flatten().map(|p| from_pair(*p)).collect();
            let m = Operator::from_row_major(f.dim, data)?;
            m.ensure_hermitian(tol, &format!("M_{k}"))?;
            Ok(m)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Polynomial { terms })
}

pub fn read_hamiltonian(path: &Path) -> Result<Polynomial> {
    polynomial_from_file(&read_json(path)?)
}

pub fn hamiltonian_json(p: &Polynomial) -> String {
    let d = p.dim();
    let f = HamiltonianFile {
        dim: d,
        terms: p
            .terms
            .iter()
            .map(|m| (0..d).map(|r| (0..d).map(|c| to_pair(m[(r, c)])).collect()).collect())
            .collect(),
    };
    serde_json::to_string_pretty(&f).expect("plain data serializes")
}

/// 17 significant digits in exponent form, enough to round-trip any f64.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// `re+imi` / `re-imi`.
pub fn fmt_complex(z: Complex64) -> String {
    let im = fmt_real(z.im);
    if im.starts_with('-') {
        format!("{}{}i", fmt_real(z.re), im)
    } else {
        format!("{}+{}i", fmt_real(z.re), im)
    }
}

pub fn parse_complex(s: &str) -> Result<Complex64> {
    let bad = || FormatError::Invalid(format!("bad complex number {s:?}"));
    let body = s.trim().strip_suffix('i').ok_or_else(bad)?;
    // the sign that starts the imaginary part is not the leading one and
    // not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'))
        .ok_or_else(bad)?;
    let re = body[..split].parse().map_err(|_| bad())?;
    let im = body[split..].trim_start_matches('+').parse().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

/// One row per matrix row, entries in `re+imi` form.
pub fn matrix_csv(m: &Operator) -> String {
    let d = m.dim();
    let mut out = String::new();
    for r in 0..d {
        let row: Vec<String> = (0..d).map(|c| fmt_complex(m[(r, c)])).collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

pub fn parse_matrix_csv(text: &str) -> Result<Operator> {
    let rows = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split(',').map(parse_complex).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let d = rows.len();
    if rows.iter().any(|r| r.len() != d) {
        return Err(FormatError::Invalid("matrix CSV is not square".into()));
    }
    Ok(Operator::from_row_major(d, rows.into_iter().flatten().collect())?)
}

/// `[[[re, im], ...], ...]`.
pub fn matrix_json(m: &Operator) -> serde_json::Value {
    let d = m.dim();
    let rows: Vec<Vec<Pair>> = (0..d).map(|r| (0..d).map(|c| to_pair(m[(r, c)])).collect()).collect();
    serde_json::to_value(rows).expect("plain data serializes")
}

pub fn vector_json(v: &[Complex64]) -> serde_json::Value {
    serde_json::to_value(v.iter().map(|z| to_pair(*z)).collect::<Vec<_>>()).expect("plain data serializes")
}
