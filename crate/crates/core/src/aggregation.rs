//! Projectors onto aggregations of states: `Π(A)`, `ϖ(i|A)` and the
//! Möbius operators `𝔇(B)`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use spin::Mutex;

use crate::coherent::CoherentFamily;
use crate::error::{Error, Result};
use crate::operator::{inner, norm_sqr, solve_hermitian_labeled, Operator, Tolerances, Vector};
use crate::phase_space::PhaseSpace;
use crate::subsets::{binomial, LabelSubset, MAX_LABEL};
use crate::sum::MatrixAccumulator;

/// An indexed collection of normalized states in `H(d)`, labelled
/// `1..=len`.
pub trait StateSet {
    fn dim(&self) -> usize;

    fn len(&self) -> usize;

    /// The state with a 1-based `label`. Panics when out of range.
    fn state(&self, label: usize) -> &[Complex64];

    fn overlap(&self, i: usize, j: usize) -> Complex64 {
        inner(self.state(i), self.state(j))
    }

    fn tolerances(&self) -> Tolerances {
        Tolerances::default()
    }

    fn labels(&self) -> LabelSubset {
        LabelSubset::full(self.len())
    }
}

impl<S: StateSet + ?Sized> StateSet for &S {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn len(&self) -> usize {
        (**self).len()
    }
    fn state(&self, label: usize) -> &[Complex64] {
        (**self).state(label)
    }
    fn overlap(&self, i: usize, j: usize) -> Complex64 {
        (**self).overlap(i, j)
    }
    fn tolerances(&self) -> Tolerances {
        (**self).tolerances()
    }
}

impl<S: StateSet + ?Sized> StateSet for Arc<S> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn len(&self) -> usize {
        (**self).len()
    }
    fn state(&self, label: usize) -> &[Complex64] {
        (**self).state(label)
    }
    fn overlap(&self, i: usize, j: usize) -> Complex64 {
        (**self).overlap(i, j)
    }
    fn tolerances(&self) -> Tolerances {
        (**self).tolerances()
    }
}

pub(crate) fn check_label<S: StateSet + ?Sized>(set: &S, label: usize) -> Result<()> {
    if label == 0 || label > set.len() {
        return Err(Error::LabelOutOfRange {
            label,
            max: set.len(),
        });
    }
    Ok(())
}

pub(crate) fn check_subset<S: StateSet + ?Sized>(set: &S, a: LabelSubset) -> Result<()> {
    if set.len() > MAX_LABEL {
        return Err(Error::TooLarge {
            what: "label set",
            size: set.len(),
            cap: MAX_LABEL,
        });
    }
    if a.max_label() > set.len() {
        return Err(Error::LabelOutOfRange {
            label: a.max_label(),
            max: set.len(),
        });
    }
    Ok(())
}

/// `Π(A)` with its subset and rank `min(|A|, d)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AggregateProjector {
    pub subset: LabelSubset,
    pub matrix: Operator,
    pub rank: usize,
}

/// Orthogonal projector onto the span of the states in `A`.
///
/// `Π(∅) = 0`, and `Π(A) = 1` as soon as `|A| >= d`. Otherwise
/// `Π(A) = Σ_ij G_ij(A) |i⟩⟨j|` with `G(A)` the inverse Gram matrix.
pub fn projector<S: StateSet + ?Sized>(set: &S, a: LabelSubset) -> Result<AggregateProjector> {
    let matrix = projector_matrix(set, a)?;
    Ok(AggregateProjector {
        subset: a,
        matrix,
        rank: a.len().min(set.dim()),
    })
}

pub(crate) fn projector_matrix<S: StateSet + ?Sized>(set: &S, a: LabelSubset) -> Result<Operator> {
    check_subset(set, a)?;
    let d = set.dim();
    let k = a.len();
    if k == 0 {
        return Ok(Operator::zeros(d));
    }
    if k >= d {
        return Ok(Operator::identity(d));
    }
    let labels = a.to_vec();
    if k == 1 {
        return Ok(Operator::rank_one_projector(set.state(labels[0])));
    }
    let mut g = Operator::zeros(k);
    for (r, &i) in labels.iter().enumerate() {
        for (c, &j) in labels.iter().enumerate() {
            g[(r, c)] = set.overlap(i, j);
        }
    }
    let unit: Vec<Vector> = (0..k)
        .map(|c| {
            let mut e = vec![Complex64::new(0.0, 0.0); k];
            e[c] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();
    let ginv = solve_hermitian_labeled(&g, &unit, a, set.tolerances())?;
    // Π = M G M† with M the d × k matrix of states; ginv[c] is column c of G
    let mut mg = vec![Complex64::new(0.0, 0.0); d * k];
    for (c, col) in ginv.iter().enumerate() {
        for (r, &i) in labels.iter().enumerate() {
            let s = set.state(i);
            for m in 0..d {
                mg[m * k + c] += s[m] * col[r];
            }
        }
    }
    let mut out = Operator::zeros(d);
    for m in 0..d {
        for n in 0..d {
            let mut z = Complex64::new(0.0, 0.0);
            for (c, &j) in labels.iter().enumerate() {
                z += mg[m * k + c] * set.state(j)[n].conj();
            }
            out[(m, n)] = z;
        }
    }
    Ok(out.hermitian_part())
}

/// Thread-safe memo of `Π(A)`. Only subsets with `|A| < d` are stored;
/// larger ones share one identity operator.
pub struct ProjectorMemo<S> {
    set: S,
    cache: Mutex<BTreeMap<u128, Arc<Operator>>>,
    identity: Arc<Operator>,
}

impl<S: StateSet> ProjectorMemo<S> {
    pub fn new(set: S) -> Self {
        let identity = Arc::new(Operator::identity(set.dim()));
        ProjectorMemo {
            set,
            cache: Mutex::new(BTreeMap::new()),
            identity,
        }
    }

    pub fn set(&self) -> &S {
        &self.set
    }

    pub fn get(&self, a: LabelSubset) -> Result<Arc<Operator>> {
        if a.len() >= self.set.dim() {
            check_subset(&self.set, a)?;
            return Ok(self.identity.clone());
        }
        if let Some(p) = self.cache.lock().get(&a.bits()) {
            return Ok(p.clone());
        }
        let p = Arc::new(projector_matrix(&self.set, a)?);
        Ok(self.cache.lock().entry(a.bits()).or_insert(p).clone())
    }

    /// Number of stored projectors.
    pub fn cached(&self) -> usize {
        self.cache.lock().len()
    }

    pub fn mobius(&self, b: LabelSubset) -> Result<Operator> {
        mobius_with(self.set.dim(), b, |a| Ok((*self.get(a)?).clone()))
    }
}

impl<S: StateSet + core::fmt::Debug> core::fmt::Debug for ProjectorMemo<S> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("ProjectorMemo")
            .field("set", &self.set)
            .field("cached", &self.cached())
            .finish()
    }
}

/// `ϖ(i|A) = Π(A ∪ {i}) - Π(A)`; zero once `|A| >= d`.
pub fn marginal_projector<S: StateSet + ?Sized>(
    set: &S,
    i: usize,
    a: LabelSubset,
) -> Result<Operator> {
    check_marginal(set, i, a)?;
    if a.len() >= set.dim() {
        return Ok(Operator::zeros(set.dim()));
    }
    let with = projector_matrix(set, a.with(i))?;
    let without = projector_matrix(set, a)?;
    Ok(&with - &without)
}

fn check_marginal<S: StateSet + ?Sized>(set: &S, i: usize, a: LabelSubset) -> Result<()> {
    check_label(set, i)?;
    check_subset(set, a)?;
    if a.contains(i) {
        return Err(Error::InvalidArgument(format!("label {i} belongs to {a}")));
    }
    Ok(())
}

/// `ϖ(i|A)` as the normalized projector onto the component of `|i⟩`
/// orthogonal to the span of `A`, built by Gram–Schmidt.
pub fn marginal_projector_gram_schmidt<S: StateSet + ?Sized>(
    set: &S,
    i: usize,
    a: LabelSubset,
) -> Result<Operator> {
    check_marginal(set, i, a)?;
    let d = set.dim();
    if a.len() >= d {
        return Ok(Operator::zeros(d));
    }
    let tol = set.tolerances().conditioning;
    let mut basis: Vec<Vector> = Vec::with_capacity(a.len());
    for j in a.iter() {
        let e = orthogonalize(set.state(j), &basis);
        let n = norm_sqr(&e);
        if !(n > tol) {
            return Err(Error::Conditioning {
                subset: a,
                min_eigenvalue: n,
            });
        }
        let s = 1.0 / n.sqrt();
        basis.push(e.into_iter().map(|z| z * s).collect());
    }
    let r = orthogonalize(set.state(i), &basis);
    let n = norm_sqr(&r);
    if !(n > tol) {
        return Err(Error::Conditioning {
            subset: a.with(i),
            min_eigenvalue: n,
        });
    }
    Ok(Operator::rank_one_projector(&r))
}

/// Twice-applied modified Gram–Schmidt against an orthonormal `basis`.
pub(crate) fn orthogonalize(v: &[Complex64], basis: &[Vector]) -> Vector {
    let mut r = v.to_vec();
    for _ in 0..2 {
        for e in basis {
            let c = inner(e, &r);
            for (x, y) in r.iter_mut().zip(e) {
                *x -= c * y;
            }
        }
    }
    r
}

/// Largest `|B|` accepted by the Möbius operator.
pub const MOBIUS_CAP: usize = 20;

/// `𝔇(B) = Σ_{A ⊆ B} (-1)^{|B|-|A|} Π(A)`.
pub fn mobius_operator<S: StateSet + ?Sized>(set: &S, b: LabelSubset) -> Result<Operator> {
    check_subset(set, b)?;
    mobius_with(set.dim(), b, |a| projector_matrix(set, a))
}

pub(crate) fn mobius_with(
    d: usize,
    b: LabelSubset,
    mut proj: impl FnMut(LabelSubset) -> Result<Operator>,
) -> Result<Operator> {
    let nb = b.len();
    if nb == 0 {
        return Err(Error::InvalidArgument("Möbius operator of the empty set".into()));
    }
    if nb > MOBIUS_CAP {
        return Err(Error::TooLarge {
            what: "Möbius operator",
            size: nb,
            cap: MOBIUS_CAP,
        });
    }
    let mut acc = MatrixAccumulator::new(d);
    for a in b.subsets() {
        let k = a.len();
        if k == 0 || k >= d {
            continue;
        }
        let sign = if (nb - k) % 2 == 0 { 1.0 } else { -1.0 };
        acc.add_entries(proj(a)?.as_slice(), sign);
    }
    // every A ⊆ B with |A| >= d contributes the identity
    let mut id_coeff = 0.0;
    for k in d..=nb {
        let sign = if (nb - k) % 2 == 0 { 1.0 } else { -1.0 };
        id_coeff += sign * binomial(nb, k);
    }
    let mut out = Operator::from_row_major(d, acc.finish())?;
    for m in 0..d {
        out[(m, m)] += id_coeff;
    }
    Ok(out)
}

/// Frobenius residuals of the two rank-`|A|` resolutions of the identity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RankResolutionReport {
    /// `(1/(d|A|)) Σ_{γ,δ} Π[A + (γ,δ)] - 1`.
    pub translates: f64,
    /// `(1/d) C(d²-1, k-1)⁻¹ Σ_{|B| = k} Π(B) - 1` with `k = |A|`.
    pub cardinality: f64,
}

pub fn verify_rank_resolutions(
    family: &CoherentFamily,
    a: LabelSubset,
) -> Result<RankResolutionReport> {
    let space: &PhaseSpace = family.space();
    let d = space.dim();
    let k = a.len();
    if k == 0 || k >= d {
        return Err(Error::InvalidArgument(format!(
            "rank resolutions need 0 < |A| < d, got |A| = {k}"
        )));
    }
    check_subset(family, a)?;
    let id = Operator::identity(d);
    let mut acc = MatrixAccumulator::new(d);
    for p in space.points() {
        let shifted = space.translate_subset(a, p)?;
        acc.add_entries(projector_matrix(family, shifted)?.as_slice(), 1.0 / (d * k) as f64);
    }
    let translates = Operator::from_row_major(d, acc.finish())?.distance(&id);
    let n = space.size();
    let coeff = 1.0 / (d as f64 * binomial(n - 1, k - 1));
    let mut acc = MatrixAccumulator::new(d);
    for b in LabelSubset::full(n).subsets_of_size(k) {
        acc.add_entries(projector_matrix(family, b)?.as_slice(), coeff);
    }
    let cardinality = Operator::from_row_major(d, acc.finish())?.distance(&id);
    Ok(RankResolutionReport {
        translates,
        cardinality,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherent::FiducialVector;

    fn fam() -> CoherentFamily {
        CoherentFamily::new(&PhaseSpace::new(3).unwrap(), FiducialVector::preset()).unwrap()
    }

    fn set(labels: &[usize]) -> LabelSubset {
        LabelSubset::from_labels(labels).unwrap()
    }

    #[test]
    fn small_projectors() {
        let f = fam();
        let p1 = projector(&f, set(&[1])).unwrap();
        assert_eq!(p1.rank, 1);
        assert!(p1.matrix.distance(&Operator::rank_one_projector(f.state(1))) < 1e-14);
        let full = projector(&f, set(&[2, 5, 7])).unwrap();
        assert_eq!(full.matrix, Operator::identity(3));
        assert_eq!(full.rank, 3);
        assert!(projector(&f, LabelSubset::EMPTY).unwrap().matrix.is_zero(0.0));
        assert!(matches!(
            projector(&f, set(&[10])),
            Err(Error::LabelOutOfRange { label: 10, max: 9 })
        ));
    }

    #[test]
    fn pair_projector() {
        let f = fam();
        let p = projector(&f, set(&[1, 2])).unwrap();
        assert_eq!(p.rank, 2);
        let m = &p.matrix;
        assert!((m.trace().re - 2.0).abs() < 1e-9);
        assert!((m * m).distance(m) < 1e-9);
        assert!(m.is_hermitian(1e-12));
        for k in [1, 2] {
            let v = m.apply(f.state(k));
            for (a, b) in v.iter().zip(f.state(k)) {
                assert!((a - b).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn degenerate_family_reports_subset() {
        let space = PhaseSpace::new(3).unwrap();
        let pos = CoherentFamily::new(&space, FiducialVector::basis(3, 0).unwrap()).unwrap();
        // |C;1⟩ and |C;4⟩ are both |X;0⟩ up to phase
        let err = projector(&pos, set(&[1, 4])).unwrap_err();
        assert!(matches!(err, Error::Conditioning { subset, .. } if subset == set(&[1, 4])));
    }

    #[test]
    fn marginal_forms_agree() {
        let f = fam();
        for i in 1..=9 {
            assert!(marginal_projector(&f, i, LabelSubset::EMPTY)
                .unwrap()
                .distance(&Operator::rank_one_projector(f.state(i)))
                < 1e-14);
            for j in (1..=9).filter(|&j| j != i) {
                let a = LabelSubset::singleton(j);
                let diff = marginal_projector(&f, i, a).unwrap();
                let gs = marginal_projector_gram_schmidt(&f, i, a).unwrap();
                assert!(diff.distance(&gs) < 1e-9);
                assert!((diff.trace().re - 1.0).abs() < 1e-9);
            }
        }
        let a = set(&[2, 3, 4]);
        assert!(marginal_projector(&f, 1, a).unwrap().is_zero(0.0));
        assert!(marginal_projector_gram_schmidt(&f, 1, a).unwrap().is_zero(0.0));
        assert!(marginal_projector(&f, 2, a).is_err());
    }

    #[test]
    fn memo_matches_direct() {
        let f = fam();
        let memo = ProjectorMemo::new(&f);
        for a in LabelSubset::full(9).subsets().take(100) {
            let m = memo.get(a).unwrap();
            assert!(m.distance(&projector(&f, a).unwrap().matrix) < 1e-14);
        }
        let before = memo.cached();
        memo.get(set(&[1, 2])).unwrap();
        assert_eq!(memo.cached(), before);
        assert!(before <= 1 + 9 + 36);
    }

    #[test]
    fn mobius_small_cases() {
        let f = fam();
        let p = |l: &[usize]| projector(&f, set(l)).unwrap().matrix;
        assert!(mobius_operator(&f, set(&[3])).unwrap().distance(&p(&[3])) < 1e-14);
        let d12 = mobius_operator(&f, set(&[1, 2])).unwrap();
        let expect = &(&p(&[1, 2]) - &p(&[1])) - &p(&[2]);
        assert!(d12.distance(&expect) < 1e-12);
        assert!(mobius_operator(&f, LabelSubset::EMPTY).is_err());
        let big = LabelSubset::full(21);
        assert!(matches!(
            mobius_with(3, big, |_| Ok(Operator::zeros(3))),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn mobius_inverts() {
        let f = fam();
        let b = set(&[1, 3, 5, 8]);
        let mut sum = Operator::zeros(3);
        for a in b.subsets().filter(|a| !a.is_empty()) {
            sum += &mobius_operator(&f, a).unwrap();
        }
        assert!(sum.distance(&Operator::identity(3)) < 1e-9);
        let memo = ProjectorMemo::new(&f);
        assert!(memo.mobius(b).unwrap().distance(&mobius_operator(&f, b).unwrap()) < 1e-12);
    }

    #[test]
    fn rank_resolutions() {
        let f = fam();
        for a in [set(&[1]), set(&[1, 2]), set(&[4, 9])] {
            let rep = verify_rank_resolutions(&f, a).unwrap();
            assert!(rep.translates < 1e-10, "{a}: {rep:?}");
            assert!(rep.cardinality < 1e-10, "{a}: {rep:?}");
        }
        assert!(verify_rank_resolutions(&f, set(&[1, 2, 3])).is_err());
    }
}
