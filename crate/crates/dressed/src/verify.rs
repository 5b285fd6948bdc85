//! Numerical invariant checks over a coherent family and its dressing.

use std::fmt;

use dressed_core::aggregation::{marginal_projector, mobius_operator, projector, verify_rank_resolutions};
use dressed_core::dressing::{sigma_eigenvalue, sigma_spectrum};
use dressed_core::quantum::{q_point, reconstruct_from_q, reconstruct_from_shapley, shapley_of_operator};
use dressed_core::{
    CoherentDensityFamily, CoherentFamily, Complex64, DressedFamily, LabelSubset, Operator, Result, StateSet,
};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::parallel;

/// A measured residual and the bound it must stay under.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tol: f64,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            value,
            tol,
        }
    }

    pub fn passed(&self) -> bool {
        self.value <= self.tol
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<40} {:.3e} (tol {:.0e})",
            if self.passed() { "ok  " } else { "FAIL" },
            self.name,
            self.value,
            self.tol
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coverage {
    /// Every subset, label and displacement.
    Exhaustive,
    /// `count` random draws per family of checks.
    Sampled { count: usize, seed: u64 },
}

impl Coverage {
    pub fn for_dim(d: usize) -> Self {
        if d <= 3 {
            Coverage::Exhaustive
        } else {
            Coverage::Sampled { count: 8, seed: 0x1f }
        }
    }
}

pub const TOL_RESOLUTION: f64 = 1e-10;
pub const TOL_COVARIANCE: f64 = 1e-10;
pub const TOL_COMMUTATOR: f64 = 1e-10;
pub const TOL_SUM_RULE: f64 = 1e-9;
pub const TOL_ROUND_TRIP: f64 = 1e-8;

fn random_hermitian(d: usize, rng: &mut impl Rng) -> Operator {
    let mut m = Operator::zeros(d);
    for r in 0..d {
        m[(r, r)] = Complex64::new(rng.gen_range(-2.0..2.0), 0.0);
        for c in r + 1..d {
            let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            m[(r, c)] = z;
            m[(c, r)] = z.conj();
        }
    }
    m
}

/// Subsets of `1..=n` of size `k` avoiding `avoid`: all of them, or a sample.
fn subsets(n: usize, k: usize, avoid: LabelSubset, coverage: Coverage, rng: &mut ChaCha8Rng) -> Vec<LabelSubset> {
    let pool = LabelSubset::full(n).difference(avoid);
    match coverage {
        Coverage::Exhaustive => pool.subsets_of_size(k).collect(),
        Coverage::Sampled { count, .. } => {
            let labels = pool.to_vec();
            (0..count)
                .map(|_| sample(rng, labels.len(), k).into_iter().map(|j| labels[j]).collect())
                .collect()
        }
    }
}

fn labels(n: usize, coverage: Coverage, rng: &mut ChaCha8Rng) -> Vec<usize> {
    match coverage {
        Coverage::Exhaustive => (1..=n).collect(),
        Coverage::Sampled { count, .. } => (0..count).map(|_| rng.gen_range(1..=n)).collect(),
    }
}

/// Runs the identity resolutions, covariance relations, commutator
/// identities, sum rules and reconstructions.
pub fn coherent_invariants(
    family: &CoherentFamily,
    dressed: &DressedFamily,
    coverage: Coverage,
) -> Result<Vec<Check>> {
    let space = family.space();
    let d = family.dim();
    let n = family.len();
    let id = Operator::identity(d);
    let seed = match coverage {
        Coverage::Exhaustive => 0,
        Coverage::Sampled { seed, .. } => seed,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let points: Vec<_> = space.points().collect();
    let shifts: Vec<_> = match coverage {
        Coverage::Exhaustive => points.clone(),
        Coverage::Sampled { count, .. } => (0..count).map(|_| points[rng.gen_range(0..n)]).collect(),
    };

    // coherent projectors
    let mut acc = Operator::zeros(d);
    for i in 1..=n {
        acc += &Operator::rank_one_projector(family.state(i));
    }
    out.push(Check::new("resolution (1/d) Σ Π(i)", acc.scale(1.0 / d as f64).distance(&id), TOL_RESOLUTION));
    let mut worst: f64 = 0.0;
    for &q in &shifts {
        let dq = space.displacement(q)?;
        for i in 1..=n {
            let j = space.translate_label(i, q)?;
            let moved = Operator::rank_one_projector(family.state(i)).conjugate_by(&dq);
            worst = worst.max(moved.distance(&Operator::rank_one_projector(family.state(j))));
        }
    }
    out.push(Check::new("closure D Π(i) D†", worst, TOL_COVARIANCE));

    // coherent density matrices from a mixed fiducial
    let r0 = &Operator::rank_one_projector(family.fiducial().coeffs()).scale(0.6) + &id.scale(0.4 / d as f64);
    let rfam = CoherentDensityFamily::new(space, r0)?;
    out.push(Check::new("resolution (1/d) Σ R(i)", rfam.resolution_residual(), TOL_RESOLUTION));
    let mut worst: f64 = 0.0;
    for &q in &shifts {
        let dq = space.displacement(q)?;
        for i in labels(n, coverage, &mut rng) {
            let j = space.translate_label(i, q)?;
            worst = worst.max(rfam.member(i)?.conjugate_by(&dq).distance(rfam.member(j)?));
        }
    }
    out.push(Check::new("closure D R(i) D†", worst, TOL_COVARIANCE));

    // rank-k projectors
    let (mut translates, mut cardinality, mut closure): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for k in 1..d {
        let list = subsets(n, k, LabelSubset::EMPTY, coverage, &mut rng);
        for (t, a) in list.iter().enumerate() {
            let r = verify_rank_resolutions(family, *a)?;
            translates = translates.max(r.translates);
            // the cardinality sum does not depend on A
            if t == 0 {
                cardinality = cardinality.max(r.cardinality);
            }
            let q = shifts[t % shifts.len()];
            let moved = projector(family, *a)?.matrix.conjugate_by(&space.displacement(q)?);
            let target = projector(family, space.translate_subset(*a, q)?)?.matrix;
            closure = closure.max(moved.distance(&target));
        }
    }
    out.push(Check::new("resolution Σ_translates Π(A+p)", translates, TOL_RESOLUTION));
    out.push(Check::new("resolution Σ_{|A|=k} Π(A)", cardinality, TOL_RESOLUTION));
    out.push(Check::new("closure D Π(A) D†", closure, TOL_COVARIANCE));

    // marginal projectors
    let (mut res, mut cov): (f64, f64) = (0.0, 0.0);
    for i in labels(n, coverage, &mut rng) {
        for k in 0..d {
            for a in subsets(n, k, LabelSubset::singleton(i), coverage, &mut rng) {
                let mut acc = Operator::zeros(d);
                let base = marginal_projector(family, i, a)?;
                for (t, &q) in points.iter().enumerate() {
                    let j = space.translate_label(i, q)?;
                    let b = space.translate_subset(a, q)?;
                    let m = marginal_projector(family, j, b)?;
                    if t == 1 {
                        cov = cov.max(base.conjugate_by(&space.displacement(q)?).distance(&m));
                    }
                    acc += &m;
                }
                res = res.max(acc.scale(1.0 / d as f64).distance(&id));
            }
        }
    }
    out.push(Check::new("resolution (1/d) Σ ϖ(i+p|A+p)", res, TOL_RESOLUTION));
    out.push(Check::new("closure D ϖ(i|A) D†", cov, TOL_COVARIANCE));

    // commutators
    let p = |i: usize| Operator::rank_one_projector(family.state(i));
    let (mut c2, mut c3): (f64, f64) = (0.0, 0.0);
    for pair in subsets(n, 2, LabelSubset::EMPTY, coverage, &mut rng) {
        let v = pair.to_vec();
        let (i, j) = (v[0], v[1]);
        let lhs = p(i).commutator(&p(j));
        let rhs = &mobius_operator(family, pair)? * &(&p(i) - &p(j));
        c2 = c2.max(lhs.distance(&rhs));
    }
    let triples = match coverage {
        Coverage::Exhaustive if n > 40 => Coverage::Sampled { count: 40, seed },
        c => c,
    };
    for t in subsets(n, 3, LabelSubset::EMPTY, triples, &mut rng) {
        let v = t.to_vec();
        let (i, j, k) = (v[0], v[1], v[2]);
        let lhs = p(i).commutator(&p(k)).commutator(&p(j));
        let dm = mobius_operator(family, t)?;
        let diff = &p(i) - &p(k);
        let rhs = &(&(&p(j) * &dm) * &diff) + &(&(&diff * &dm) * &p(j));
        c3 = c3.max(lhs.distance(&rhs));
    }
    out.push(Check::new("commutator [Π(i),Π(j)]", c2, TOL_COMMUTATOR));
    out.push(Check::new("commutator [[Π(i),Π(k)],Π(j)]", c3, TOL_COMMUTATOR));

    // dressed states
    out.push(Check::new("resolution (1/d) Σ σ(i)", dressed.resolution_residual(), TOL_RESOLUTION));
    let trace_err = dressed
        .sigmas()
        .iter()
        .map(|s| (s.trace().re - 1.0).abs())
        .fold(0.0, f64::max);
    out.push(Check::new("Tr σ(i) = 1", trace_err, TOL_RESOLUTION));
    let psd = dressed
        .sigmas()
        .iter()
        .map(|s| s.eigh().map(|e| (-e.values[0]).max(0.0)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    out.push(Check::new("σ(i) positive", psd, TOL_RESOLUTION));
    let mut cov: f64 = 0.0;
    let direct_labels = match coverage {
        Coverage::Exhaustive => (1..=n).collect(),
        Coverage::Sampled { .. } => vec![1 + rng.gen_range(1..n)],
    };
    for i in direct_labels {
        let direct = parallel::sigma(family, i)?;
        cov = cov.max(direct.distance(dressed.sigma(i)?));
    }
    out.push(Check::new("covariance σ(i) = D σ(1) D†", cov, TOL_COVARIANCE));
    let mut eig: f64 = 0.0;
    for i in labels(n, coverage, &mut rng) {
        let s = sigma_spectrum(dressed.sigma(i)?, family.state(i))?;
        eig = eig.max(s.eigen_defect).max((s.on_state - sigma_eigenvalue(d)).abs());
    }
    out.push(Check::new("σ(i)|C;i⟩ = 𝔢 |C;i⟩", eig, TOL_RESOLUTION));

    // operator weights
    let (mut eff, mut lin, mut rq, mut rs): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    let trials = match coverage {
        Coverage::Exhaustive => 16,
        Coverage::Sampled { count, .. } => count,
    };
    for _ in 0..trials {
        let t1 = random_hermitian(d, &mut rng);
        let t2 = random_hermitian(d, &mut rng);
        let (l1, l2) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let mix = &t1.scale(l1) + &t2.scale(l2);
        let tr = t1.trace().re;
        let s1 = shapley_of_operator(dressed, &t1)?;
        let q1 = q_point(family, &t1)?;
        eff = eff.max((s1.total() - tr).abs()).max((q1.iter().sum::<f64>() - tr).abs());
        let s2 = shapley_of_operator(dressed, &t2)?;
        let sm = shapley_of_operator(dressed, &mix)?;
        let q2 = q_point(family, &t2)?;
        let qm = q_point(family, &mix)?;
        for i in 0..n {
            lin = lin
                .max((sm.0[i] - l1 * s1.0[i] - l2 * s2.0[i]).abs())
                .max((qm[i] - l1 * q1[i] - l2 * q2[i]).abs());
        }
        rq = rq.max(reconstruct_from_q(family, &q1)?.max_abs_diff(&t1));
        rs = rs.max(reconstruct_from_shapley(dressed, s1.values())?.max_abs_diff(&t1));
    }
    out.push(Check::new("efficiency Σ S = Σ Q = Tr θ", eff, TOL_SUM_RULE));
    out.push(Check::new("linearity of S and Q", lin, TOL_SUM_RULE));
    out.push(Check::new("round trip θ → Q → θ", rq, TOL_ROUND_TRIP));
    out.push(Check::new("round trip θ → S → θ", rs, TOL_ROUND_TRIP));
    Ok(out)
}

/// Resolution, trace and positivity of a dressed total set.
pub fn total_set_invariants(dressed: &DressedFamily) -> Result<Vec<Check>> {
    let trace_err = dressed
        .sigmas()
        .iter()
        .map(|s| (s.trace().re - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(vec![
        Check::new("resolution (d/N) Σ σ(i)", dressed.resolution_residual(), TOL_RESOLUTION),
        Check::new("Tr σ(i) = 1", trace_err, TOL_RESOLUTION),
        Check::new(
            "σ(i) positive",
            if dressed.all_density_matrices(TOL_RESOLUTION) { 0.0 } else { 1.0 },
            TOL_RESOLUTION,
        ),
    ])
}
