//! Q-functions and Shapley values of Hermitian operators, the games they
//! define, and reconstruction of operators from either.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::aggregation::{check_subset, projector_matrix, ProjectorMemo, StateSet};
use crate::coherent::CoherentFamily;
use crate::dressing::DressedFamily;
use crate::error::{Error, Result};
use crate::games::{Permutation, SetFunction, ShapleyVector};
use crate::operator::{Operator, Tolerances};
use crate::phase_space::PhasePoint;
use crate::real::{design_matrix, from_coords, least_squares, lu_solve, to_coords};
use crate::subsets::{FixedCardinality, LabelSubset};

/// Deviation above which a set function is not a Q-function.
pub const PHYSICAL_TOL: f64 = 1e-7;
/// Random larger subsets checked by [`is_physical_q`].
pub const PHYSICAL_SAMPLES: usize = 100;
const SOLVE_REL_TOL: f64 = 1e-12;

fn check_theta(d: usize, theta: &Operator) -> Result<()> {
    if theta.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: theta.dim(),
        });
    }
    theta.ensure_hermitian(Tolerances::default().hermiticity, "θ")
}

/// `Q(i|θ) = (1/d)⟨C;i|θ|C;i⟩` for every label.
pub fn q_point<S: StateSet + ?Sized>(set: &S, theta: &Operator) -> Result<Vec<f64>> {
    let d = set.dim();
    check_theta(d, theta)?;
    Ok((1..=set.len())
        .map(|i| {
            let c = set.state(i);
            theta.sandwich(c, c).re / d as f64
        })
        .collect())
}

/// `Q(A|θ) = (1/d) Tr[Π(A) θ]`.
pub fn q_subset<S: StateSet + ?Sized>(set: &S, a: LabelSubset, theta: &Operator) -> Result<f64> {
    let d = set.dim();
    check_theta(d, theta)?;
    check_subset(set, a)?;
    Ok(projector_matrix(set, a)?.trace_product(theta).re / d as f64)
}

/// The game `v(A) = Tr[Π(A) θ] = d Q(A|θ)`, evaluated lazily through a
/// shared projector memo. Subsets of at least `d` states take the tail
/// value `Tr θ`. A projector failure evaluates to NaN.
pub fn characteristic_from_operator<S>(memo: Arc<ProjectorMemo<S>>, theta: &Operator) -> Result<SetFunction>
where
    S: StateSet + Send + Sync + 'static,
{
    let set = memo.set();
    let (d, n) = (set.dim(), set.len());
    check_theta(d, theta)?;
    let trace = theta.trace().re;
    let theta = theta.clone();
    let rule = move |a: LabelSubset| match memo.get(a) {
        Ok(p) => p.trace_product(&theta).re,
        Err(_) => f64::NAN,
    };
    Ok(SetFunction::from_rule(n, rule).with_tail(d, trace))
}

/// Convenience wrapper owning a fresh memo over a coherent family.
pub fn coherent_game(family: &CoherentFamily, theta: &Operator) -> Result<SetFunction> {
    characteristic_from_operator(Arc::new(ProjectorMemo::new(family.clone())), theta)
}

/// `S(i|θ) = (d/N) Tr[θ σ(i)]`; for a coherent family `N = d²` and this is
/// `(1/d) Tr[θ σ(i)]`.
pub fn shapley_of_operator(dressed: &DressedFamily, theta: &Operator) -> Result<ShapleyVector> {
    let d = dressed.dim();
    check_theta(d, theta)?;
    let scale = d as f64 / dressed.len() as f64;
    Ok(ShapleyVector(
        dressed
            .sigmas()
            .iter()
            .map(|s| scale * s.trace_product(theta).re)
            .collect(),
    ))
}

fn square_solve(d: usize, rows: usize, values: &[f64], f: impl Fn(usize, &Operator) -> f64) -> Result<Operator> {
    if values.len() != rows {
        return Err(Error::DimensionMismatch {
            expected: rows,
            actual: values.len(),
        });
    }
    if rows != d * d {
        return Err(Error::InvalidArgument(format!(
            "{rows} values cannot determine a {d}x{d} Hermitian operator uniquely"
        )));
    }
    let a = design_matrix(d, rows, f);
    let x = lu_solve(&a, values, SOLVE_REL_TOL)?;
    Ok(from_coords(d, &x))
}

/// The Hermitian `θ` with the given point Q-values.
pub fn reconstruct_from_q<S: StateSet + ?Sized>(set: &S, q: &[f64]) -> Result<Operator> {
    let d = set.dim();
    square_solve(d, set.len(), q, |i, e| {
        let c = set.state(i + 1);
        e.sandwich(c, c).re / d as f64
    })
}

/// The Hermitian `θ` with the given Shapley values.
pub fn reconstruct_from_shapley(dressed: &DressedFamily, s: &[f64]) -> Result<Operator> {
    let d = dressed.dim();
    let scale = d as f64 / dressed.len() as f64;
    square_solve(d, dressed.len(), s, |i, e| scale * dressed.sigmas()[i].trace_product(e).re)
}

/// Least-squares fit of subset Q-values.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorFit {
    pub operator: Operator,
    /// Root-mean-square of `Q(A|θ) - value` over the samples.
    pub residual_rms: f64,
}

/// Fits `θ` minimizing `Σ (Q(A|θ) - value)²`.
pub fn fit_operator_from_subset_q<S: StateSet + ?Sized>(
    set: &S,
    samples: &[(LabelSubset, f64)],
) -> Result<OperatorFit> {
    let d = set.dim();
    if samples.len() < d * d {
        return Err(Error::Singular(format!(
            "{} samples for {} unknowns",
            samples.len(),
            d * d
        )));
    }
    let projectors = samples
        .iter()
        .map(|(a, _)| {
            check_subset(set, *a)?;
            projector_matrix(set, *a)
        })
        .collect::<Result<Vec<_>>>()?;
    let a = design_matrix(d, samples.len(), |i, e| projectors[i].trace_product(e).re / d as f64);
    let b: Vec<f64> = samples.iter().map(|(_, v)| *v).collect();
    let (x, residual) = least_squares(&a, &b, SOLVE_REL_TOL)?;
    Ok(OperatorFit {
        operator: from_coords(d, &x),
        residual_rms: residual / (samples.len() as f64).sqrt(),
    })
}

/// Outcome of [`is_physical_q`].
#[derive(Clone, Debug, PartialEq)]
pub struct Physicality {
    /// The operator reconstructed from the singleton values.
    pub operator: Operator,
    pub max_deviation: f64,
    pub worst_subset: Option<LabelSubset>,
    pub checked: usize,
}

impl Physicality {
    pub fn is_physical(&self) -> bool {
        self.max_deviation <= PHYSICAL_TOL
    }
}

/// Tests whether `q` is the Q-function of some Hermitian operator.
///
/// `θ` is reconstructed from the singletons; then every subset with at most
/// `min(d, 3)` elements and [`PHYSICAL_SAMPLES`] random larger ones are
/// compared against `Q(A|θ)`.
pub fn is_physical_q<S: StateSet + ?Sized>(set: &S, q: &SetFunction, seed: u64) -> Result<Physicality> {
    let n = set.len();
    if q.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: q.n(),
        });
    }
    let d = set.dim();
    let singles: Vec<f64> = (1..=n).map(|i| q.value(LabelSubset::singleton(i))).collect();
    let theta = reconstruct_from_q(set, &singles)?;
    let memo = ProjectorMemo::new(set);
    let mut report = Physicality {
        operator: theta.clone(),
        max_deviation: 0.0,
        worst_subset: None,
        checked: 0,
    };
    let mut check = |a: LabelSubset| -> Result<()> {
        let expected = memo.get(a)?.trace_product(&theta).re / d as f64;
        let dev = (expected - q.value(a)).abs();
        report.checked += 1;
        // NaN never compares greater, so test it explicitly
        if dev > report.max_deviation || dev.is_nan() {
            report.max_deviation = if dev.is_nan() { f64::INFINITY } else { dev };
            report.worst_subset = Some(a);
        }
        Ok(())
    };
    let small = d.min(3).min(n);
    let labels: Vec<usize> = (1..=n).collect();
    for k in 2..=small {
        for a in FixedCardinality::new(labels.clone(), k) {
            check(a)?;
        }
    }
    if small < n {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..PHYSICAL_SAMPLES {
            let k = rng.gen_range(small + 1..=n);
            let a: LabelSubset = sample(&mut rng, n, k).into_iter().map(|j| j + 1).collect();
            check(a)?;
        }
    }
    Ok(report)
}

/// The relabeling induced by a displacement: label of `p` goes to the label
/// of `p + shift`.
pub fn displacement_permutation(family: &CoherentFamily, shift: PhasePoint) -> Result<Permutation> {
    let space = family.space();
    let image = (1..=space.size())
        .map(|i| space.translate_label(i, shift))
        .collect::<Result<Vec<_>>>()?;
    Permutation::new(image)
}

/// Hermitian coordinates of `θ`, exposed for callers building their own
/// design matrices.
pub fn operator_coords(theta: &Operator) -> Vec<f64> {
    to_coords(theta)
}
