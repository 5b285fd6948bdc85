//! Fiducial vectors, coherent families and coherent density matrices.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::aggregation::StateSet;
use crate::error::{Error, Result};
use crate::operator::{inner, norm_sqr, Operator, Tolerances, Vector};
use crate::phase_space::PhaseSpace;
use crate::subsets::{binomial, FixedCardinality, LabelSubset};
use crate::sum::MatrixAccumulator;

/// Gram determinants at or below this count as linear dependence.
pub const GENERICITY_DET_TOL: f64 = 1e-10;

const RESOLUTION_WARN: f64 = 1e-10;
const RESOLUTION_FAIL: f64 = 1e-6;

/// Normalized seed state `η` in the position basis.
#[derive(Clone, Debug, PartialEq)]
pub struct FiducialVector {
    coeffs: Vector,
}

impl FiducialVector {
    /// Normalizes `coeffs`. Zero or non-finite input is rejected.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidDimension(coeffs.len()));
        }
        if coeffs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite fiducial coefficient".into()));
        }
        let n = norm_sqr(&coeffs).sqrt();
        if !(n > 0.0) {
            return Err(Error::InvalidArgument("zero fiducial vector".into()));
        }
        Ok(FiducialVector {
            coeffs: coeffs.into_iter().map(|z| z / n).collect(),
        })
    }

    /// The d = 3 fiducial `(a, b, c)` with `a = 0.169(1+i)`, `b = -0.338`,
    /// `c = 0.845 - 0.338i`, renormalized.
    pub fn preset() -> Self {
        FiducialVector::new(vec![
            Complex64::new(0.169, 0.169),
            Complex64::new(-0.338, 0.0),
            Complex64::new(0.845, -0.338),
        ])
        .expect("preset is non-zero")
    }

    /// Position eigenstate `|X;m⟩` (non-generic).
    pub fn basis(d: usize, m: usize) -> Result<Self> {
        if m >= d {
            return Err(Error::InvalidArgument(format!("basis index {m} >= d = {d}")));
        }
        let mut v = vec![Complex64::new(0.0, 0.0); d];
        v[m] = Complex64::new(1.0, 0.0);
        FiducialVector::new(v)
    }

    /// Haar-random unit vector. Generic with probability one.
    pub fn random<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<Self> {
        let v = (0..d)
            .map(|_| {
                let (a, b) = gaussian_pair(rng);
                Complex64::new(a, b)
            })
            .collect();
        FiducialVector::new(v)
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }
}

pub(crate) fn gaussian_pair<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen::<f64>();
    let r = (-2.0 * u1.ln()).sqrt();
    (r * (2.0 * PI * u2).cos(), r * (2.0 * PI * u2).sin())
}

/// The `d²` coherent states `|C;α,β⟩ = D(α,β)|η⟩` with their full Gram
/// matrix.
#[derive(Clone, Debug)]
pub struct CoherentFamily {
    space: PhaseSpace,
    fiducial: FiducialVector,
    states: Vec<Vector>,
    gram: Vec<Complex64>,
    resolution_residual: f64,
    tolerances: Tolerances,
}

impl CoherentFamily {
    pub fn new(space: &PhaseSpace, fiducial: FiducialVector) -> Result<Self> {
        Self::with_tolerances(space, fiducial, Tolerances::default())
    }

    pub fn with_tolerances(
        space: &PhaseSpace,
        fiducial: FiducialVector,
        tolerances: Tolerances,
    ) -> Result<Self> {
        space.require_odd()?;
        let d = space.dim();
        if fiducial.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: fiducial.dim(),
            });
        }
        let states = space
            .points()
            .map(|p| space.displace_vector(p, fiducial.coeffs()))
            .collect::<Result<Vec<_>>>()?;
        let n = states.len();
        let mut gram = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in i..n {
                let z = inner(&states[i], &states[j]);
                gram[i * n + j] = z;
                gram[j * n + i] = z.conj();
            }
        }
        let mut acc = MatrixAccumulator::new(d);
        for s in &states {
            acc.add_outer(s, 1.0 / d as f64);
        }
        let sum = Operator::from_row_major(d, acc.finish())?;
        let resolution_residual = sum.distance(&Operator::identity(d));
        if resolution_residual > RESOLUTION_FAIL {
            return Err(Error::ContractViolation(format!(
                "coherent states fail to resolve the identity (residual {resolution_residual:e})"
            )));
        }
        Ok(CoherentFamily {
            space: space.clone(),
            fiducial,
            states,
            gram,
            resolution_residual,
            tolerances,
        })
    }

    pub fn space(&self) -> &PhaseSpace {
        &self.space
    }

    pub fn fiducial(&self) -> &FiducialVector {
        &self.fiducial
    }

    pub fn states(&self) -> &[Vector] {
        &self.states
    }

    /// Frobenius residual of `(1/d) Σ |C;i⟩⟨C;i| - 1`.
    pub fn resolution_residual(&self) -> f64 {
        self.resolution_residual
    }

    /// True when the resolution residual is above `1e-10` (but still
    /// acceptable).
    pub fn resolution_warning(&self) -> bool {
        self.resolution_residual > RESOLUTION_WARN
    }

    /// `⟨C;i|C;j⟩` for 1-based labels.
    pub fn gram_entry(&self, i: usize, j: usize) -> Complex64 {
        self.gram[(i - 1) * self.states.len() + (j - 1)]
    }

    /// `g(A)`, the Gram submatrix of `A` in increasing label order.
    pub fn gram_submatrix(&self, a: LabelSubset) -> Result<Operator> {
        crate::aggregation::check_subset(self, a)?;
        let labels = a.to_vec();
        let data = labels
            .iter()
            .flat_map(|&i| labels.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.gram_entry(i, j))
            .collect();
        Operator::from_row_major(labels.len(), data)
    }

    /// Coefficients `s(α,β) = (1/d)⟨C;α,β|s⟩` with `Σ s(α,β)|C;α,β⟩ = s`.
    pub fn expand_state(&self, s: &[Complex64]) -> Result<Vec<Complex64>> {
        let d = self.space.dim();
        if s.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: s.len(),
            });
        }
        Ok(self
            .states
            .iter()
            .map(|c| inner(c, s) / d as f64)
            .collect())
    }

    pub fn genericity_check(&self, mode: GenericityMode) -> GenericityReport {
        genericity_of_states(&self.states, self.space.dim(), mode)
    }
}

impl StateSet for CoherentFamily {
    fn dim(&self) -> usize {
        self.space.dim()
    }

    fn len(&self) -> usize {
        self.states.len()
    }

    fn state(&self, label: usize) -> &[Complex64] {
        &self.states[label - 1]
    }

    fn overlap(&self, i: usize, j: usize) -> Complex64 {
        self.gram_entry(i, j)
    }

    fn tolerances(&self) -> Tolerances {
        self.tolerances
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenericityMode {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

impl GenericityMode {
    /// Exhaustive when there are at most `10⁶` d-subsets, else `10⁴`
    /// random ones.
    pub fn default_for(n_states: usize, d: usize) -> Self {
        if binomial(n_states, d) <= 1e6 {
            GenericityMode::Exhaustive
        } else {
            GenericityMode::Sampled {
                count: 10_000,
                seed: 0x5eed,
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenericityReport {
    pub mode: GenericityMode,
    pub tested: usize,
    pub failures: Vec<LabelSubset>,
    pub min_abs_det: f64,
}

impl GenericityReport {
    pub fn is_generic(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that `d`-subsets of `states` are linearly independent through
/// their Gram determinants.
pub fn genericity_of_states(states: &[Vector], d: usize, mode: GenericityMode) -> GenericityReport {
    let n = states.len();
    let mut report = GenericityReport {
        mode,
        tested: 0,
        failures: Vec::new(),
        min_abs_det: f64::INFINITY,
    };
    if n < d {
        return report;
    }
    let test = |labels: &[usize], report: &mut GenericityReport| {
        let k = labels.len();
        let mut g = vec![Complex64::new(0.0, 0.0); k * k];
        for (r, &i) in labels.iter().enumerate() {
            for (c, &j) in labels.iter().enumerate() {
                g[r * k + c] = inner(&states[i - 1], &states[j - 1]);
            }
        }
        let det = Operator::from_row_major(k, g)
            .map(|m| m.determinant().norm())
            .unwrap_or(0.0);
        report.tested += 1;
        report.min_abs_det = report.min_abs_det.min(det);
        if !(det > GENERICITY_DET_TOL) {
            report.failures.push(labels.iter().copied().collect());
        }
    };
    match mode {
        GenericityMode::Exhaustive => {
            for labels in FixedCardinality::new((1..=n).collect(), d) {
                test(&labels.to_vec(), &mut report);
            }
        }
        GenericityMode::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..count {
                let mut labels: Vec<usize> =
                    index::sample(&mut rng, n, d).into_iter().map(|k| k + 1).collect();
                labels.sort_unstable();
                test(&labels, &mut report);
            }
        }
    }
    report
}

/// `R(α,β) = D(α,β) R₀ D†(α,β)` for a fiducial density matrix `R₀`.
#[derive(Clone, Debug)]
pub struct CoherentDensityFamily {
    space: PhaseSpace,
    fiducial_matrix: Operator,
    members: Vec<Operator>,
}

impl CoherentDensityFamily {
    pub fn new(space: &PhaseSpace, r0: Operator) -> Result<Self> {
        space.require_odd()?;
        let d = space.dim();
        if r0.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: r0.dim(),
            });
        }
        let tol = Tolerances::default();
        if !r0.is_density_matrix(tol.psd) {
            return Err(Error::ContractViolation(
                "fiducial matrix is not a density matrix".into(),
            ));
        }
        let members = space
            .points()
            .map(|p| Ok(r0.conjugate_by(&space.displacement(p)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(CoherentDensityFamily {
            space: space.clone(),
            fiducial_matrix: r0,
            members,
        })
    }

    pub fn space(&self) -> &PhaseSpace {
        &self.space
    }

    pub fn fiducial_matrix(&self) -> &Operator {
        &self.fiducial_matrix
    }

    pub fn members(&self) -> &[Operator] {
        &self.members
    }

    /// `R(i)` for a 1-based label.
    pub fn member(&self, label: usize) -> Result<&Operator> {
        self.space.unflat_index(label)?;
        Ok(&self.members[label - 1])
    }

    /// Frobenius residual of `(1/d) Σ R(α,β) - 1`.
    pub fn resolution_residual(&self) -> f64 {
        let d = self.space.dim();
        let mut acc = MatrixAccumulator::new(d);
        for m in &self.members {
            acc.add_entries(m.as_slice(), 1.0 / d as f64);
        }
        Operator::from_row_major(d, acc.finish())
            .map(|s| s.distance(&Operator::identity(d)))
            .unwrap_or(f64::INFINITY)
    }

    /// `Q_R(α,β|θ) = (1/d) Tr[R(α,β) θ]`.
    pub fn q_values(&self, theta: &Operator) -> Result<Vec<f64>> {
        let d = self.space.dim();
        if theta.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: theta.dim(),
            });
        }
        theta.ensure_hermitian(Tolerances::default().hermiticity, "θ")?;
        Ok(self
            .members
            .iter()
            .map(|r| r.trace_product(theta).re / d as f64)
            .collect())
    }
}

/// Result of the genericity test for a fiducial density matrix: distinct
/// eigenvalues, and each eigenvector a generic fiducial vector.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityGenericity {
    pub eigenvalues: Vec<f64>,
    pub min_gap: f64,
    pub eigenvectors: Vec<GenericityReport>,
}

impl DensityGenericity {
    pub fn is_generic(&self, gap_tol: f64) -> bool {
        self.min_gap > gap_tol && self.eigenvectors.iter().all(GenericityReport::is_generic)
    }
}

pub fn density_fiducial_genericity(
    space: &PhaseSpace,
    r0: &Operator,
    mode: GenericityMode,
) -> Result<DensityGenericity> {
    let es = r0.eigh()?;
    let min_gap = es
        .values
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    let eigenvectors = es
        .vectors
        .iter()
        .map(|v| {
            let family = CoherentFamily::new(space, FiducialVector::new(v.clone())?)?;
            Ok(family.genericity_check(mode))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DensityGenericity {
        eigenvalues: es.values,
        min_gap,
        eigenvectors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::vec::Vec;

    fn fam() -> CoherentFamily {
        CoherentFamily::new(&PhaseSpace::new(3).unwrap(), FiducialVector::preset()).unwrap()
    }

    #[test]
    fn preset_is_normalized() {
        let f = FiducialVector::preset();
        assert!((norm_sqr(f.coeffs()) - 1.0).abs() < 1e-14);
        assert!((f.coeffs()[1].re + 0.338 / 0.99987f64.sqrt()).abs() < 1e-4);
    }

    #[test]
    fn rejects_bad_fiducials() {
        assert!(FiducialVector::new(vec![Complex64::new(0.0, 0.0); 3]).is_err());
        assert!(FiducialVector::new(vec![Complex64::new(f64::NAN, 0.0); 3]).is_err());
        let even = PhaseSpace::new(4).unwrap();
        let f = FiducialVector::basis(4, 0).unwrap();
        assert_eq!(
            CoherentFamily::new(&even, f).unwrap_err(),
            Error::DisplacementUnavailable(4)
        );
        let space = PhaseSpace::new(3).unwrap();
        assert!(matches!(
            CoherentFamily::new(&space, FiducialVector::basis(5, 0).unwrap()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn family_invariants() {
        let f = fam();
        assert!(f.resolution_residual() < 1e-10);
        assert!(!f.resolution_warning());
        let space = f.space().clone();
        for p in space.points() {
            let label = space.flat_index(p).unwrap();
            let d = space.displacement(p).unwrap();
            let expect = d.apply(f.fiducial().coeffs());
            for (a, b) in expect.iter().zip(f.state(label)) {
                assert!((a - b).norm() < 1e-12);
            }
            assert!((f.gram_entry(label, label) - 1.0).norm() < 1e-12);
        }
        for i in 1..=9 {
            for j in 1..=9 {
                assert!((f.gram_entry(i, j) - f.gram_entry(j, i).conj()).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn table_two_first_row() {
        let f = fam();
        let q: Vec<f64> = (1..=9).map(|i| f.state(i)[0].norm_sqr() / 3.0).collect();
        let expected = [0.019, 0.276, 0.038];
        for (i, v) in q.iter().enumerate() {
            assert!((v - expected[i % 3]).abs() < 2e-3, "Q({}) = {v}", i + 1);
        }
    }

    #[test]
    fn genericity() {
        let f = fam();
        let rep = f.genericity_check(GenericityMode::Exhaustive);
        assert_eq!(rep.tested, 84);
        assert!(rep.is_generic());
        let space = PhaseSpace::new(3).unwrap();
        let pos = CoherentFamily::new(&space, FiducialVector::basis(3, 0).unwrap()).unwrap();
        let rep = pos.genericity_check(GenericityMode::Exhaustive);
        assert!(!rep.is_generic());
        let sampled = pos.genericity_check(GenericityMode::Sampled { count: 10, seed: 3 });
        assert_eq!(sampled.tested, 10);
        for s in &sampled.failures {
            assert!(rep.failures.contains(s));
        }
        assert_eq!(GenericityMode::default_for(9, 3), GenericityMode::Exhaustive);
        assert_eq!(GenericityMode::default_for(25, 5), GenericityMode::Exhaustive);
        assert!(matches!(
            GenericityMode::default_for(49, 7),
            GenericityMode::Sampled { count: 10_000, .. }
        ));
    }

    #[test]
    fn expansion() {
        let f = fam();
        let zero = f.expand_state(&[Complex64::new(0.0, 0.0); 3]).unwrap();
        assert!(zero.iter().all(|z| z.norm() == 0.0));
        let s = f.state(4).to_vec();
        let c = f.expand_state(&s).unwrap();
        let mut back = vec![Complex64::new(0.0, 0.0); 3];
        for (ci, st) in c.iter().zip(f.states()) {
            for (b, x) in back.iter_mut().zip(st) {
                *b += ci * x;
            }
        }
        for (a, b) in back.iter().zip(&s) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn density_family() {
        let space = PhaseSpace::new(3).unwrap();
        let f = fam();
        let pure = Operator::rank_one_projector(f.fiducial().coeffs());
        let df = CoherentDensityFamily::new(&space, pure).unwrap();
        for i in 1..=9 {
            let p = Operator::rank_one_projector(f.state(i));
            assert!(df.member(i).unwrap().distance(&p) < 1e-12);
        }
        assert!(df.resolution_residual() < 1e-10);
        let mixed = CoherentDensityFamily::new(&space, Operator::identity(3).scale(1.0 / 3.0)).unwrap();
        for m in mixed.members() {
            assert!(m.distance(&Operator::identity(3).scale(1.0 / 3.0)) < 1e-12);
        }
        let q = mixed.q_values(&Operator::identity(3)).unwrap();
        assert!(q.iter().all(|v| (v - 1.0 / 3.0).abs() < 1e-12));
        assert!(CoherentDensityFamily::new(&space, Operator::identity(3)).is_err());
    }

    #[test]
    fn density_genericity() {
        let space = PhaseSpace::new(3).unwrap();
        let f = fam();
        let p = Operator::rank_one_projector(f.fiducial().coeffs());
        let r0 = &p.scale(0.7) + &Operator::identity(3).scale(0.1);
        let rep = density_fiducial_genericity(&space, &r0, GenericityMode::Exhaustive).unwrap();
        // two eigenvalues coincide at 0.1
        assert!(!rep.is_generic(1e-9));
        let diag = Operator::diagonal(&[0.2, 0.3, 0.5]);
        let rep = density_fiducial_genericity(&space, &diag, GenericityMode::Exhaustive).unwrap();
        assert!(rep.min_gap > 0.09);
        assert!(!rep.is_generic(1e-9));
    }
}
