//! Shapley dressing of projectors into density matrices: `τ(i|k)`, `σ(i)`
//! and the total-set generalization.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use crate::aggregation::{
    check_label, check_subset, marginal_projector, orthogonalize, projector_matrix,
    ProjectorMemo, StateSet,
};
use crate::coherent::{genericity_of_states, CoherentFamily, GenericityMode, GenericityReport};
use crate::error::{Error, Result};
use crate::operator::{inner, norm_sqr, Operator, Tolerances, Vector};
use crate::subsets::{binomial, factorial, subset_mobius, FixedCardinality, LabelSubset};
use crate::sum::MatrixAccumulator;

/// `𝔢 = Σ_{k=0}^{d-1} (d-k)/(d²-k)`, the eigenvalue of `σ(i)` on `|C;i⟩`.
pub fn sigma_eigenvalue(d: usize) -> f64 {
    let d2 = (d * d) as f64;
    (0..d).map(|k| (d - k) as f64 / (d2 - k as f64)).sum()
}

/// `𝔢(k) = (d² - dk)/(d² - k)`, the eigenvalue of `τ(i|k)` on `|C;i⟩`.
pub fn tau_eigenvalue(d: usize, k: usize) -> f64 {
    if k >= d {
        return 0.0;
    }
    let d2 = (d * d) as f64;
    (d2 - (d * k) as f64) / (d2 - k as f64)
}

fn others<S: StateSet + ?Sized>(set: &S, i: usize) -> Vec<usize> {
    (1..=set.len()).filter(|&j| j != i).collect()
}

/// `τ(i|k) = C(N-1, k)⁻¹ Σ_{|A| = k, i ∉ A} ϖ(i|A)` by Gram solves, `N` the
/// number of states. Zero for `k >= d`.
pub fn tau<S: StateSet + ?Sized>(set: &S, i: usize, k: usize) -> Result<Operator> {
    check_label(set, i)?;
    let d = set.dim();
    let n = set.len();
    if k >= d || k > n - 1 {
        return Ok(Operator::zeros(d));
    }
    let mut acc = MatrixAccumulator::new(d);
    let w = 1.0 / binomial(n - 1, k);
    for a in FixedCardinality::new(others(set, i), k) {
        acc.add_entries(marginal_projector(set, i, a)?.as_slice(), w);
    }
    Operator::from_row_major(d, acc.finish())
}

/// `τ(i|0), ..., τ(i|d-1)` from one Gram–Schmidt traversal.
pub fn tau_all<S: StateSet + ?Sized>(set: &S, i: usize) -> Result<Vec<Operator>> {
    let n = set.len();
    let sums = marginal_sums(set, i, set.dim() - 1)?;
    Ok(sums
        .into_iter()
        .enumerate()
        .map(|(k, s)| {
            if k > n - 1 {
                s
            } else {
                s.scale(1.0 / binomial(n - 1, k))
            }
        })
        .collect())
}

/// Per-cardinality sums `Σ_{|A| = k} ϖ(i|A)` for `k = 0..=max_card`.
///
/// Subsets are visited depth-first with an incrementally orthonormalized
/// basis of `span(A)`, so each `ϖ(i|A)` costs one projection. The result
/// is the sum of [`marginal_sums_branch`] over the branches in increasing
/// order, which keeps parallel and serial evaluations bitwise equal.
pub fn marginal_sums<S: StateSet + ?Sized>(
    set: &S,
    i: usize,
    max_card: usize,
) -> Result<Vec<Operator>> {
    check_label(set, i)?;
    check_subset(set, LabelSubset::EMPTY)?;
    let d = set.dim();
    let mut out = vec![Operator::zeros(d); max_card + 1];
    out[0] = Operator::rank_one_projector(set.state(i));
    for first in others(set, i) {
        let part = marginal_sums_branch(set, i, first, max_card)?;
        for (o, p) in out.iter_mut().zip(&part) {
            *o += p;
        }
    }
    Ok(out)
}

/// The part of [`marginal_sums`] from subsets whose smallest label is
/// `first`. Entry 0 is always zero.
pub fn marginal_sums_branch<S: StateSet + ?Sized>(
    set: &S,
    i: usize,
    first: usize,
    max_card: usize,
) -> Result<Vec<Operator>> {
    check_label(set, i)?;
    check_label(set, first)?;
    if first == i {
        return Err(Error::InvalidArgument(format!("branch label {first} equals i")));
    }
    let d = set.dim();
    let max_card = max_card.min(d - 1);
    let pool: Vec<usize> = others(set, i).into_iter().filter(|&j| j > first).collect();
    let mut walk = Walk {
        set,
        i,
        pool,
        max_card,
        tol: set.tolerances(),
        acc: (0..=max_card).map(|_| MatrixAccumulator::new(d)).collect(),
        basis: Vec::with_capacity(max_card),
        residuals: Vec::with_capacity(max_card + 1),
        subset: LabelSubset::EMPTY,
    };
    let mut r0 = set.state(i).to_vec();
    let n0 = norm_sqr(&r0).sqrt();
    for z in r0.iter_mut() {
        *z /= n0;
    }
    walk.residuals.push(r0);
    if max_card >= 1 {
        walk.step(first)?;
        if max_card >= 2 {
            walk.visit(0)?;
        }
        walk.pop();
    }
    walk.acc
        .iter()
        .map(|a| Operator::from_row_major(d, a.finish_hermitian()))
        .collect()
}

struct Walk<'a, S: ?Sized> {
    set: &'a S,
    i: usize,
    pool: Vec<usize>,
    max_card: usize,
    tol: Tolerances,
    acc: Vec<MatrixAccumulator>,
    basis: Vec<Vector>,
    residuals: Vec<Vector>,
    subset: LabelSubset,
}

impl<S: StateSet + ?Sized> Walk<'_, S> {
    /// Adds `j` to `A`, accumulates `ϖ(i|A)` and keeps the basis pushed.
    fn step(&mut self, j: usize) -> Result<()> {
        let subset = self.subset.with(j);
        let mut e = orthogonalize(self.set.state(j), &self.basis);
        let ne = norm_sqr(&e);
        if !(ne > self.tol.conditioning) {
            return Err(Error::Conditioning {
                subset,
                min_eigenvalue: ne,
            });
        }
        let s = 1.0 / ne.sqrt();
        for z in e.iter_mut() {
            *z *= s;
        }
        let prev = self.residuals.last().expect("residual stack is never empty");
        let mut r = prev.clone();
        for _ in 0..2 {
            let c = inner(&e, &r);
            for (x, y) in r.iter_mut().zip(&e) {
                *x -= c * y;
            }
        }
        let nr = norm_sqr(&r);
        if !(nr > self.tol.conditioning) {
            return Err(Error::Conditioning {
                subset: subset.with(self.i),
                min_eigenvalue: nr,
            });
        }
        self.acc[subset.len()].add_outer_upper(&r, 1.0 / nr);
        self.basis.push(e);
        self.residuals.push(r);
        self.subset = subset;
        Ok(())
    }

    fn pop(&mut self) {
        self.basis.pop();
        self.residuals.pop();
        let top = self.subset.max_label();
        self.subset = self.subset.without(top);
    }

    fn visit(&mut self, start: usize) -> Result<()> {
        for idx in start..self.pool.len() {
            let j = self.pool[idx];
            self.step(j)?;
            if self.basis.len() < self.max_card {
                self.visit(idx + 1)?;
            }
            self.pop();
        }
        Ok(())
    }
}

/// `σ = (1/d) Σ_k C(N-1, k)⁻¹ S_k` from per-cardinality marginal sums.
pub fn sigma_from_marginal_sums(d: usize, n: usize, sums: &[Operator]) -> Result<Operator> {
    let mut acc = MatrixAccumulator::new(d);
    for (k, s) in sums.iter().enumerate().take(d.min(n)) {
        acc.add_entries(s.as_slice(), 1.0 / (d as f64 * binomial(n - 1, k)));
    }
    Operator::from_row_major(d, acc.finish()).map(|m| m.hermitian_part())
}

/// How the subset sum behind `σ(i)` evaluates each `ϖ(i|A)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SubsetEvaluation {
    /// Depth-first incremental Gram–Schmidt.
    #[default]
    GramSchmidt,
    /// `Π(A ∪ {i}) - Π(A)` with memoized Gram-solve projectors.
    GramSolve,
}

/// `σ(i) = (1/d) Σ_{A ⊆ Ω∖{i}, |A| < d} C(N-1, |A|)⁻¹ ϖ(i|A)`.
pub fn sigma_subset<S: StateSet + ?Sized>(set: &S, i: usize) -> Result<Operator> {
    sigma_subset_with(set, i, SubsetEvaluation::GramSchmidt)
}

pub fn sigma_subset_with<S: StateSet + ?Sized>(
    set: &S,
    i: usize,
    eval: SubsetEvaluation,
) -> Result<Operator> {
    check_label(set, i)?;
    let d = set.dim();
    let n = set.len();
    let sums = match eval {
        SubsetEvaluation::GramSchmidt => marginal_sums(set, i, d - 1)?,
        SubsetEvaluation::GramSolve => {
            let memo = ProjectorMemo::new(set);
            let pool = others(set, i);
            (0..d.min(n))
                .map(|k| {
                    let mut acc = MatrixAccumulator::new(d);
                    for a in FixedCardinality::new(pool.clone(), k) {
                        let with = memo.get(a.with(i))?;
                        let without = memo.get(a)?;
                        acc.add_entries((&*with - &*without).as_slice(), 1.0);
                    }
                    Operator::from_row_major(d, acc.finish())
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    sigma_from_marginal_sums(d, n, &sums)
}

/// Largest number of states for the full-lattice Möbius form.
pub const SIGMA_MOBIUS_CAP: usize = 12;

/// `σ(i) = (N/d) Σ_{A ∋ i} 𝔇(A)/|A|` over the whole subset lattice.
pub fn sigma_mobius<S: StateSet + ?Sized>(set: &S, i: usize) -> Result<Operator> {
    check_label(set, i)?;
    let d = set.dim();
    let n = set.len();
    if n > SIGMA_MOBIUS_CAP {
        return Err(Error::TooLarge {
            what: "Möbius form of σ",
            size: n,
            cap: SIGMA_MOBIUS_CAP,
        });
    }
    let mut lattice = (0..1u128 << n)
        .map(|bits| projector_matrix(set, LabelSubset::from_bits(bits)))
        .collect::<Result<Vec<_>>>()?;
    subset_mobius(&mut lattice);
    let mut acc = MatrixAccumulator::new(d);
    let scale = n as f64 / d as f64;
    for (bits, m) in lattice.iter().enumerate() {
        let a = LabelSubset::from_bits(bits as u128);
        if a.contains(i) {
            acc.add_entries(m.as_slice(), scale / a.len() as f64);
        }
    }
    Operator::from_row_major(d, acc.finish()).map(|m| m.hermitian_part())
}

/// Largest label set for the permutation form.
pub const SIGMA_PERMUTATION_CAP: usize = 9;

/// `d` times the average over all orderings of `labels` of
/// `ϖ(i | predecessors of i)`, with `Π` supplied by `projector`.
///
/// Orderings sharing a predecessor set `A` are grouped with multiplicity
/// `|A|! (|N| - |A| - 1)!`. On the full label set of a coherent family this
/// is `σ(i)`.
pub fn sigma_permutation(
    d: usize,
    labels: LabelSubset,
    i: usize,
    mut projector: impl FnMut(LabelSubset) -> Result<Operator>,
) -> Result<Operator> {
    let n = labels.len();
    if !labels.contains(i) {
        return Err(Error::InvalidArgument(format!("label {i} not in {labels}")));
    }
    if n > SIGMA_PERMUTATION_CAP {
        return Err(Error::TooLarge {
            what: "permutation form of σ",
            size: n,
            cap: SIGMA_PERMUTATION_CAP,
        });
    }
    let total = factorial(n);
    let mut acc = MatrixAccumulator::new(d);
    for a in labels.without(i).subsets() {
        let k = a.len();
        let weight = factorial(k) * factorial(n - k - 1) / total;
        let with = projector(a.with(i))?;
        let without = projector(a)?;
        acc.add_entries((&with - &without).as_slice(), d as f64 * weight);
    }
    Operator::from_row_major(d, acc.finish()).map(|m| m.hermitian_part())
}

/// A total set: `n >= d` normalized vectors in `H(d)` spanning the space.
#[derive(Clone, Debug, PartialEq)]
pub struct TotalSet {
    d: usize,
    vectors: Vec<Vector>,
    genericity: GenericityReport,
}

impl TotalSet {
    pub fn new(vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        let d = vectors.first().map_or(0, Vec::len);
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        if vectors.len() < d {
            return Err(Error::InvalidArgument(format!(
                "a total set in H({d}) needs at least {d} vectors, got {}",
                vectors.len()
            )));
        }
        if vectors.len() > crate::subsets::MAX_LABEL {
            return Err(Error::TooLarge {
                what: "total set",
                size: vectors.len(),
                cap: crate::subsets::MAX_LABEL,
            });
        }
        let mut out = Vec::with_capacity(vectors.len());
        for v in vectors {
            if v.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    actual: v.len(),
                });
            }
            if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::InvalidArgument("non-finite vector entry".into()));
            }
            let n = norm_sqr(&v).sqrt();
            if !(n > 0.0) {
                return Err(Error::InvalidArgument("zero vector in total set".into()));
            }
            out.push(v.into_iter().map(|z| z / n).collect());
        }
        let genericity = genericity_of_states(&out, d, GenericityMode::default_for(out.len(), d));
        Ok(TotalSet {
            d,
            vectors: out,
            genericity,
        })
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    /// Every `d`-subset linearly independent.
    pub fn is_generic(&self) -> bool {
        self.genericity.is_generic()
    }

    pub fn genericity(&self) -> &GenericityReport {
        &self.genericity
    }
}

impl StateSet for TotalSet {
    fn dim(&self) -> usize {
        self.d
    }

    fn len(&self) -> usize {
        self.vectors.len()
    }

    fn state(&self, label: usize) -> &[Complex64] {
        &self.vectors[label - 1]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    /// `σ(1)` by subset sum, the rest by displacement covariance.
    Covariance,
    /// Every `σ(i)` by its own subset sum.
    Direct,
    /// Subset sums over a total set.
    TotalSet,
}

/// The dressed density matrices `σ(1), ..., σ(N)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DressedFamily {
    d: usize,
    sigmas: Vec<Operator>,
    construction: Construction,
}

impl DressedFamily {
    pub fn coherent(family: &CoherentFamily, construction: Construction) -> Result<Self> {
        match construction {
            Construction::Covariance => {
                let s1 = sigma_subset(family, 1)?;
                Self::from_covariance(family, &s1)
            }
            Construction::Direct => {
                let sigmas = (1..=family.len())
                    .map(|i| sigma_subset(family, i))
                    .collect::<Result<Vec<_>>>()?;
                Self::from_sigmas(family.dim(), sigmas, Construction::Direct)
            }
            Construction::TotalSet => Err(Error::InvalidArgument(
                "total-set construction on a coherent family".into(),
            )),
        }
    }

    /// `σ(α,β) = D(α,β) σ(1) D†(α,β)`.
    pub fn from_covariance(family: &CoherentFamily, sigma_origin: &Operator) -> Result<Self> {
        let space = family.space();
        let sigmas = space
            .points()
            .map(|p| Ok(sigma_origin.conjugate_by(&space.displacement(p)?).hermitian_part()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_sigmas(space.dim(), sigmas, Construction::Covariance)
    }

    /// Wraps precomputed `σ(i)` (all `d x d`).
    pub fn from_sigmas(d: usize, sigmas: Vec<Operator>, construction: Construction) -> Result<Self> {
        if sigmas.len() < d {
            return Err(Error::InvalidArgument(format!(
                "{} dressed states for d = {d}",
                sigmas.len()
            )));
        }
        if let Some(s) = sigmas.iter().find(|s| s.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: s.dim(),
            });
        }
        Ok(DressedFamily {
            d,
            sigmas,
            construction,
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.sigmas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigmas.is_empty()
    }

    pub fn construction(&self) -> Construction {
        self.construction
    }

    pub fn sigmas(&self) -> &[Operator] {
        &self.sigmas
    }

    pub fn sigma(&self, label: usize) -> Result<&Operator> {
        if label == 0 || label > self.sigmas.len() {
            return Err(Error::LabelOutOfRange {
                label,
                max: self.sigmas.len(),
            });
        }
        Ok(&self.sigmas[label - 1])
    }

    /// Frobenius residual of `(d/N) Σ σ(i) - 1`.
    pub fn resolution_residual(&self) -> f64 {
        let d = self.d;
        let mut acc = MatrixAccumulator::new(d);
        let w = d as f64 / self.sigmas.len() as f64;
        for s in &self.sigmas {
            acc.add_entries(s.as_slice(), w);
        }
        Operator::from_row_major(d, acc.finish())
            .map(|m| m.distance(&Operator::identity(d)))
            .unwrap_or(f64::INFINITY)
    }

    /// All `σ(i)` Hermitian, unit trace and positive within `tol`.
    pub fn all_density_matrices(&self, tol: f64) -> bool {
        self.sigmas.iter().all(|s| s.is_density_matrix(tol))
    }
}

/// Dresses a total set: `σ(i) = (1/d) Σ_{A ⊆ N∖{i}, |A| < d} C(n-1, |A|)⁻¹ ϖ(i|A)`,
/// which resolves the identity as `(d/n) Σ σ(i) = 1`.
pub fn dress_total_set(ts: &TotalSet) -> Result<DressedFamily> {
    let sigmas = (1..=ts.len())
        .map(|i| sigma_subset(ts, i))
        .collect::<Result<Vec<_>>>()?;
    DressedFamily::from_sigmas(ts.dim(), sigmas, Construction::TotalSet)
}

/// Spectrum of `σ(i)` and how far `|i⟩` is from being an eigenvector.
#[derive(Clone, Debug, PartialEq)]
pub struct SigmaSpectrum {
    pub eigenvalues: Vec<f64>,
    /// `⟨i|σ(i)|i⟩` for the normalized state `|i⟩`.
    pub on_state: f64,
    /// `‖σ(i)|i⟩ - ⟨i|σ(i)|i⟩ |i⟩‖`, zero when `|i⟩` is an eigenvector.
    pub eigen_defect: f64,
}

pub fn sigma_spectrum(sigma: &Operator, state: &[Complex64]) -> Result<SigmaSpectrum> {
    let es = sigma.eigh()?;
    let v = sigma.apply(state);
    let on_state = inner(state, &v).re;
    let eigen_defect = v
        .iter()
        .zip(state)
        .map(|(a, b)| (a - b * on_state).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok(SigmaSpectrum {
        eigenvalues: es.values,
        on_state,
        eigen_defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherent::FiducialVector;
    use crate::phase_space::PhaseSpace;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn fam() -> CoherentFamily {
        CoherentFamily::new(&PhaseSpace::new(3).unwrap(), FiducialVector::preset()).unwrap()
    }

    #[test]
    fn closed_forms() {
        assert!((sigma_eigenvalue(3) - (1.0 / 3.0 + 0.25 + 1.0 / 7.0)).abs() < 1e-15);
        assert!((tau_eigenvalue(3, 1) - 0.75).abs() < 1e-15);
        assert_eq!(tau_eigenvalue(3, 0), 1.0);
        assert_eq!(tau_eigenvalue(3, 3), 0.0);
    }

    #[test]
    fn tau_basics() {
        let f = fam();
        let t0 = tau(&f, 1, 0).unwrap();
        assert!(t0.distance(&Operator::rank_one_projector(f.state(1))) < 1e-14);
        assert!(tau(&f, 1, 3).unwrap().is_zero(0.0));
        let all = tau_all(&f, 1).unwrap();
        for k in 0..3 {
            let direct = tau(&f, 1, k).unwrap();
            assert!(all[k].distance(&direct) < 1e-12, "k = {k}");
            assert!(direct.is_density_matrix(1e-9));
            let v = direct.apply(f.state(1));
            let e = tau_eigenvalue(3, k);
            for (a, b) in v.iter().zip(f.state(1)) {
                assert!((a - b * e).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn sigma_one_matches_worked_example() {
        let f = fam();
        let s = sigma_subset(&f, 1).unwrap();
        let expect = [
            [c(0.162, 0.0), c(-0.040, -0.038), c(0.049, 0.117)],
            [c(-0.040, 0.038), c(0.210, 0.0), c(-0.164, -0.065)],
            [c(0.049, -0.117), c(-0.164, 0.065), c(0.628, 0.0)],
        ];
        for r in 0..3 {
            for col in 0..3 {
                assert!((s[(r, col)] - expect[r][col]).norm() < 2e-3, "({r},{col}) = {}", s[(r, col)]);
            }
        }
        let spec = sigma_spectrum(&s, f.state(1)).unwrap();
        for (a, b) in spec.eigenvalues.iter().zip([0.125, 0.149, 0.726]) {
            assert!((a - b).abs() < 2e-3);
        }
        assert!((spec.on_state - sigma_eigenvalue(3)).abs() < 1e-9);
        assert!(spec.eigen_defect < 1e-9);
    }

    #[test]
    fn evaluation_strategies_agree() {
        let f = fam();
        for i in [1, 5, 9] {
            let a = sigma_subset_with(&f, i, SubsetEvaluation::GramSchmidt).unwrap();
            let b = sigma_subset_with(&f, i, SubsetEvaluation::GramSolve).unwrap();
            assert!(a.distance(&b) < 1e-10);
        }
    }

    #[test]
    fn branches_partition_the_sum() {
        let f = fam();
        let full = marginal_sums(&f, 2, 2).unwrap();
        let mut manual = vec![Operator::zeros(3); 3];
        manual[0] = Operator::rank_one_projector(f.state(2));
        for first in (1..=9).filter(|&j| j != 2) {
            for (m, p) in manual.iter_mut().zip(marginal_sums_branch(&f, 2, first, 2).unwrap()) {
                *m += &p;
            }
        }
        assert_eq!(full, manual);
        assert!(marginal_sums_branch(&f, 2, 2, 2).is_err());
        // 8 singletons and 28 pairs, each a trace-one projector
        assert!((full[1].trace().re - 8.0).abs() < 1e-10);
        assert!((full[2].trace().re - 28.0).abs() < 1e-10);
    }

    #[test]
    fn three_forms_agree() {
        let f = fam();
        let memo = ProjectorMemo::new(&f);
        for i in 1..=9 {
            let s = sigma_subset(&f, i).unwrap();
            let m = sigma_mobius(&f, i).unwrap();
            let p = sigma_permutation(3, LabelSubset::full(9), i, |a| Ok((*memo.get(a)?).clone()))
                .unwrap();
            assert!(s.distance(&m) < 1e-8, "label {i}");
            assert!(s.distance(&p) < 1e-8, "label {i}");
        }
    }

    #[test]
    fn permutation_small_label_sets() {
        let f = fam();
        let p = |a: LabelSubset| projector_matrix(&f, a);
        let one = sigma_permutation(3, LabelSubset::singleton(4), 4, p).unwrap();
        assert!(one.distance(&Operator::rank_one_projector(f.state(4)).scale(3.0)) < 1e-12);
        let two = sigma_permutation(3, LabelSubset::from_labels(&[1, 2]).unwrap(), 1, p).unwrap();
        let w = marginal_projector(&f, 1, LabelSubset::singleton(2)).unwrap();
        let expect = (&Operator::rank_one_projector(f.state(1)) + &w).scale(1.5);
        assert!(two.distance(&expect) < 1e-12);
        assert!(sigma_permutation(3, LabelSubset::full(10), 1, p).is_err());
        assert!(sigma_permutation(3, LabelSubset::singleton(2), 1, p).is_err());
    }

    #[test]
    fn coherent_family_properties() {
        let f = fam();
        let cov = DressedFamily::coherent(&f, Construction::Covariance).unwrap();
        let dir = DressedFamily::coherent(&f, Construction::Direct).unwrap();
        assert_eq!(cov.len(), 9);
        for (a, b) in cov.sigmas().iter().zip(dir.sigmas()) {
            assert!(a.distance(b) < 1e-9);
        }
        assert!(cov.resolution_residual() < 1e-9);
        assert!(cov.all_density_matrices(1e-9));
        for i in 1..=9 {
            let p = Operator::rank_one_projector(f.state(i));
            let s = cov.sigma(i).unwrap();
            assert!(s.commutator(&p).frobenius_norm() < 1e-9);
            assert!((s * &p).distance(&p.scale(sigma_eigenvalue(3))) < 1e-9);
        }
        assert!(cov.sigma(10).is_err());
        assert!(DressedFamily::coherent(&f, Construction::TotalSet).is_err());
    }

    #[test]
    fn total_set_examples() {
        let s5 = 1.0 / 5f64.sqrt();
        let ts = TotalSet::new(vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(s5, 0.0), c(2.0 * s5, 0.0)]])
            .unwrap();
        let dressed = dress_total_set(&ts).unwrap();
        let e1 = Operator::from_rows(&[&[c(0.9, 0.0), c(-0.2, 0.0)], &[c(-0.2, 0.0), c(0.1, 0.0)]])
            .unwrap();
        let e2 = Operator::from_rows(&[&[c(0.1, 0.0), c(0.2, 0.0)], &[c(0.2, 0.0), c(0.9, 0.0)]])
            .unwrap();
        assert!(dressed.sigma(1).unwrap().max_abs_diff(&e1) < 1e-12);
        assert!(dressed.sigma(2).unwrap().max_abs_diff(&e2) < 1e-12);
        assert!(dressed.resolution_residual() < 1e-12);

        let ts = TotalSet::new(vec![
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(s5, 0.0), c(2.0 * s5, 0.0)],
        ])
        .unwrap();
        assert!(ts.is_generic());
        let dressed = dress_total_set(&ts).unwrap();
        let expect = [
            [[19.0, -2.0], [-2.0, 1.0]],
            [[4.0, -2.0], [-2.0, 16.0]],
            [[7.0, 4.0], [4.0, 13.0]],
        ];
        for (i, e) in expect.iter().enumerate() {
            let m = Operator::from_rows(&[
                &[c(e[0][0] / 20.0, 0.0), c(e[0][1] / 20.0, 0.0)],
                &[c(e[1][0] / 20.0, 0.0), c(e[1][1] / 20.0, 0.0)],
            ])
            .unwrap();
            assert!(dressed.sigma(i + 1).unwrap().max_abs_diff(&m) < 1e-12, "σ({})", i + 1);
        }
        assert!(dressed.resolution_residual() < 1e-12);
    }

    #[test]
    fn orthonormal_basis_is_fixed() {
        let ts = TotalSet::new(vec![
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        ])
        .unwrap();
        let dressed = dress_total_set(&ts).unwrap();
        for i in 1..=3 {
            let p = Operator::rank_one_projector(ts.state(i));
            assert!(dressed.sigma(i).unwrap().distance(&p) < 1e-12);
        }
        for b in [LabelSubset::from_labels(&[1, 2]).unwrap(), LabelSubset::full(3)] {
            assert!(crate::aggregation::mobius_operator(&ts, b).unwrap().is_zero(1e-12));
        }
    }

    #[test]
    fn total_set_validation() {
        assert!(TotalSet::new(vec![vec![c(1.0, 0.0), c(0.0, 0.0)]]).is_err());
        assert!(TotalSet::new(vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0); 2]]).is_err());
        assert!(TotalSet::new(vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(1.0, 0.0)]]).is_err());
        let dup = TotalSet::new(vec![
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 1.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
        ])
        .unwrap();
        assert!(!dup.is_generic());
        assert!(matches!(dress_total_set(&dup), Err(Error::Conditioning { .. })));
    }
}
