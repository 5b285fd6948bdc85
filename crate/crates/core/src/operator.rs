//! Dense complex operators on `H(d)` in the position basis.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, AddAssign, Index, IndexMut, Mul, Sub, SubAssign};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use crate::error::{Error, Result};
use crate::subsets::LabelSubset;

pub type Vector = Vec<Complex64>;

/// Numerical thresholds shared across the crate. The defaults suit `d <= 9`
/// in double precision.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub hermiticity: f64,
    /// Lower bound on eigenvalues still counted as non-negative (as `-psd`).
    pub psd: f64,
    pub residual: f64,
    /// Relative eigenvalue floor below which a Gram matrix counts as singular.
    pub conditioning: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            hermiticity: 1e-10,
            psd: 1e-10,
            residual: 1e-9,
            conditioning: 1e-10,
        }
    }
}

#[derive(Clone, PartialEq)]
pub struct Operator {
    dim: usize,
    data: Vec<Complex64>,
}

impl core::fmt::Debug for Operator {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        writeln!(f, "Operator({}x{})", self.dim, self.dim)?;
        for r in 0..self.dim {
            f.write_str("  [")?;
            for c in 0..self.dim {
                let z = self[(r, c)];
                write!(f, " {:+.6}{:+.6}i", z.re, z.im)?;
            }
            f.write_str(" ]\n")?;
        }
        Ok(())
    }
}

impl Operator {
    pub fn zeros(dim: usize) -> Self {
        Operator {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Operator::zeros(dim);
        for k in 0..dim {
            m[(k, k)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Operator::zeros(values.len());
        for (k, &v) in values.iter().enumerate() {
            m[(k, k)] = Complex64::new(v, 0.0);
        }
        m
    }

    /// Row-major entries; `data.len()` must be a perfect square.
    pub fn from_row_major(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::ContractViolation("non-finite operator entry".into()));
        }
        Ok(Operator { dim, data })
    }

    pub fn from_rows(rows: &[&[Complex64]]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Operator::from_row_major(dim, data)
    }

    /// `|u⟩⟨v|`.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        let dim = u.len();
        let mut m = Operator::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                m[(r, c)] = u[r] * v[c].conj();
            }
        }
        m
    }

    /// `|u⟩⟨u| / ⟨u|u⟩`.
    pub fn rank_one_projector(u: &[Complex64]) -> Self {
        let n2 = norm_sqr(u);
        Operator::outer(u, u).scale(1.0 / n2)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|k| self[(k, k)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Operator::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                m[(c, r)] = self[(r, c)].conj();
            }
        }
        m
    }

    #[must_use]
    pub fn scale(&self, s: f64) -> Self {
        Operator {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    #[must_use]
    pub fn scale_complex(&self, s: Complex64) -> Self {
        Operator {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn distance(&self, other: &Operator) -> f64 {
        debug_assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.dim {
            for c in r..self.dim {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn ensure_hermitian(&self, tol: f64, what: &str) -> Result<()> {
        let defect = self.hermiticity_defect();
        if defect > tol {
            return Err(Error::ContractViolation(format!(
                "{what} is not Hermitian (defect {defect:e})"
            )));
        }
        Ok(())
    }

    /// `(θ + θ†) / 2`.
    #[must_use]
    pub fn hermitian_part(&self) -> Self {
        (self + &self.adjoint()).scale(0.5)
    }

    pub fn apply(&self, v: &[Complex64]) -> Vector {
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self[(r, c)] * v[c]).sum())
            .collect()
    }

    /// `⟨u|θ|v⟩`.
    pub fn sandwich(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        inner(u, &self.apply(v))
    }

    /// `Tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &Operator) -> Complex64 {
        let d = self.dim;
        let mut acc = Complex64::new(0.0, 0.0);
        for r in 0..d {
            for c in 0..d {
                acc += self[(r, c)] * other[(c, r)];
            }
        }
        acc
    }

    pub fn commutator(&self, other: &Operator) -> Operator {
        &(self * other) - &(other * self)
    }

    #[must_use]
    pub fn pow(&self, mut e: usize) -> Operator {
        let mut base = self.clone();
        let mut acc = Operator::identity(self.dim);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `U ρ U†`.
    pub fn conjugate_by(&self, u: &Operator) -> Operator {
        &(u * self) * &u.adjoint()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.frobenius_norm() <= tol
    }

    /// Hermitian eigendecomposition, ascending eigenvalues.
    pub fn eigh(&self) -> Result<EigenSystem> {
        self.eigh_with(Tolerances::default())
    }

    pub fn eigh_with(&self, tol: Tolerances) -> Result<EigenSystem> {
        let scale = self.frobenius_norm().max(1.0);
        self.ensure_hermitian(tol.hermiticity * scale, "eigh input")?;
        Ok(jacobi_eigh(self))
    }

    pub fn is_density_matrix(&self, tol: f64) -> bool {
        if !self.is_hermitian(tol.max(1e-12)) {
            return false;
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return false;
        }
        match self.eigh() {
            Ok(es) => es.values[0] >= -tol,
            Err(_) => false,
        }
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn determinant(&self) -> Complex64 {
        let n = self.dim;
        let mut m = self.data.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&a, &b| m[a * n + col].norm().total_cmp(&m[b * n + col].norm()))
                .unwrap_or(col);
            if m[piv * n + col].norm() == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if piv != col {
                for c in 0..n {
                    m.swap(piv * n + c, col * n + c);
                }
                det = -det;
            }
            let p = m[col * n + col];
            det *= p;
            for r in col + 1..n {
                let f = m[r * n + col] / p;
                for c in col..n {
                    let v = m[col * n + c];
                    m[r * n + c] -= f * v;
                }
            }
        }
        det
    }
}

impl Index<(usize, usize)> for Operator {
    type Output = Complex64;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for Operator {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.dim + c]
    }
}

impl<'a> Add<&'a Operator> for &'a Operator {
    type Output = Operator;

    fn add(self, rhs: &Operator) -> Operator {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a Operator> for &'a Operator {
    type Output = Operator;

    fn sub(self, rhs: &Operator) -> Operator {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a> AddAssign<&'a Operator> for Operator {
    fn add_assign(&mut self, rhs: &Operator) {
        assert_eq!(self.dim, rhs.dim, "operator dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl<'a> SubAssign<&'a Operator> for Operator {
    fn sub_assign(&mut self, rhs: &Operator) {
        assert_eq!(self.dim, rhs.dim, "operator dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a -= b;
        }
    }
}

impl<'a> Mul<&'a Operator> for &'a Operator {
    type Output = Operator;

    fn mul(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "operator dimension mismatch");
        let d = self.dim;
        let mut out = Operator::zeros(d);
        for r in 0..d {
            for k in 0..d {
                let a = self.data[r * d + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for c in 0..d {
                    out.data[r * d + c] += a * rhs.data[k * d + c];
                }
            }
        }
        out
    }
}

/// Eigenvalues ascending; column `k` of `vectors` belongs to `values[k]`.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    /// Column-major: `vectors[k]` is the k-th eigenvector.
    pub vectors: Vec<Vector>,
}

impl EigenSystem {
    pub fn reconstruct(&self) -> Operator {
        let d = self.values.len();
        let mut out = Operator::zeros(d);
        for (lam, v) in self.values.iter().zip(&self.vectors) {
            out += &Operator::outer(v, v).scale(*lam);
        }
        out
    }
}

/// `⟨u|v⟩`.
#[inline]
pub fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

#[inline]
pub fn norm_sqr(u: &[Complex64]) -> f64 {
    u.iter().map(|z| z.norm_sqr()).sum()
}

pub fn normalized(u: &[Complex64]) -> Vector {
    let n = norm_sqr(u).sqrt();
    u.iter().map(|z| z / n).collect()
}

/// Multiplies `v` by a phase so that its largest-magnitude component is
/// real and positive. Ties go to the lowest index.
pub fn fix_phase(v: &mut [Complex64]) {
    let mut best = 0;
    let mut best_mag = -1.0;
    for (k, z) in v.iter().enumerate() {
        let m = z.norm();
        if m > best_mag * (1.0 + 1e-12) {
            best = k;
            best_mag = m;
        }
    }
    if best_mag <= 0.0 {
        return;
    }
    let phase = v[best].conj() / best_mag;
    for z in v.iter_mut() {
        *z *= phase;
    }
}

/// Cyclic complex Jacobi. Each rotation first removes the phase of the
/// pivot, then applies a real Givens rotation to the resulting real block.
fn jacobi_eigh(op: &Operator) -> EigenSystem {
    let d = op.dim;
    let mut a = op.hermitian_part();
    let mut v = Operator::identity(d);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);

    for _sweep in 0..100 {
        let off: f64 = (0..d)
            .flat_map(|r| (0..d).filter(move |&c| c != r).map(move |c| (r, c)))
            .map(|(r, c)| a[(r, c)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..d {
            for q in p + 1..d {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= 1e-300 {
                    continue;
                }
                let phase = apq / r; // e^{iφ}
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = 0.5 * (2.0 * r).atan2(aqq - app);
                let (s, c) = theta.sin_cos();
                // V = diag(1, e^{-iφ}) · [[c, s], [-s, c]]
                let vpp = Complex64::new(c, 0.0);
                let vpq = Complex64::new(s, 0.0);
                let vqp = -phase.conj() * s;
                let vqq = phase.conj() * c;
                // columns: A <- A V
                for k in 0..d {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * vpp + akq * vqp;
                    a[(k, q)] = akp * vpq + akq * vqq;
                }
                // rows: A <- V† A
                for k in 0..d {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = vpp.conj() * apk + vqp.conj() * aqk;
                    a[(q, k)] = vpq.conj() * apk + vqq.conj() * aqk;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
                for k in 0..d {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * vpp + vkq * vqp;
                    v[(k, q)] = vkp * vpq + vkq * vqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&x, &y| a[(x, x)].re.total_cmp(&a[(y, y)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = order
        .iter()
        .map(|&k| {
            let mut col: Vector = (0..d).map(|r| v[(r, k)]).collect();
            fix_phase(&mut col);
            col
        })
        .collect();
    EigenSystem { values, vectors }
}

/// Solves `M X = rhs` for Hermitian positive-definite `M`; `rhs` holds the
/// columns of `X`'s right-hand side. Fails with the smallest eigenvalue
/// when `M` is singular or indefinite relative to its largest eigenvalue.
pub fn solve_hermitian(m: &Operator, rhs: &[Vector]) -> Result<Vec<Vector>> {
    solve_hermitian_labeled(m, rhs, LabelSubset::EMPTY, Tolerances::default())
}

pub(crate) fn solve_hermitian_labeled(
    m: &Operator,
    rhs: &[Vector],
    subset: LabelSubset,
    tol: Tolerances,
) -> Result<Vec<Vector>> {
    let es = m.eigh_with(tol)?;
    let max = es.values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let min = es.values[0];
    if !(min > tol.conditioning * max) {
        return Err(Error::Conditioning {
            subset,
            min_eigenvalue: min,
        });
    }
    Ok(rhs
        .iter()
        .map(|b| {
            let mut x = vec![Complex64::new(0.0, 0.0); m.dim()];
            for (lam, v) in es.values.iter().zip(&es.vectors) {
                let coeff = inner(v, b) / *lam;
                for (xi, vi) in x.iter_mut().zip(v) {
                    *xi += coeff * vi;
                }
            }
            x
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    pub(crate) fn theta4() -> Operator {
        Operator::from_rows(&[
            &[c(3.0, 0.0), c(1.0, -1.0), c(-2.0, 0.0)],
            &[c(1.0, 1.0), c(5.0, 0.0), c(2.0, -1.0)],
            &[c(-2.0, 0.0), c(2.0, 1.0), c(4.0, 0.0)],
        ])
        .unwrap()
    }

    #[test]
    fn eigh_identity_and_diagonal() {
        let es = Operator::identity(3).eigh().unwrap();
        assert_eq!(es.values, vec![1.0, 1.0, 1.0]);
        let es = Operator::diagonal(&[3.0, 1.0, 2.0]).eigh().unwrap();
        assert_eq!(es.values, vec![1.0, 2.0, 3.0]);
        assert!((es.vectors[0][1] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((es.vectors[2][0] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn eigh_theta4_trace() {
        let t4 = theta4();
        let es = t4.eigh().unwrap();
        let sum: f64 = es.values.iter().sum();
        assert!((sum - 12.0).abs() < 1e-9);
        assert!(es.reconstruct().distance(&t4) < 1e-9);
        for (lam, v) in es.values.iter().zip(&es.vectors) {
            let av = t4.apply(v);
            let err: f64 = av
                .iter()
                .zip(v)
                .map(|(a, b)| (a - b * *lam).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(err < 1e-9);
        }
    }

    #[test]
    fn eigh_rejects_non_hermitian() {
        let m = Operator::from_rows(&[&[c(1.0, 0.0), c(1.0, 0.0)], &[c(0.0, 0.0), c(1.0, 0.0)]])
            .unwrap();
        assert!(matches!(m.eigh(), Err(Error::ContractViolation(_))));
    }

    #[test]
    fn solve_trivial_systems() {
        let rhs = vec![vec![c(1.0, 2.0), c(-1.0, 0.5), c(0.0, 3.0)]];
        let x = solve_hermitian(&Operator::identity(3), &rhs).unwrap();
        for (a, b) in x[0].iter().zip(&rhs[0]) {
            assert!((a - b).norm() < 1e-14);
        }
        let m = Operator::diagonal(&[2.0, 4.0]);
        let x = solve_hermitian(&m, &[vec![c(1.0, 0.0), c(1.0, 0.0)]]).unwrap();
        assert!((x[0][0] - c(0.5, 0.0)).norm() < 1e-14);
        assert!((x[0][1] - c(0.25, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn solve_reports_singular() {
        let m = Operator::diagonal(&[1.0, 0.0]);
        match solve_hermitian(&m, &[vec![c(1.0, 0.0), c(0.0, 0.0)]]) {
            Err(Error::Conditioning { min_eigenvalue, .. }) => assert_eq!(min_eigenvalue, 0.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn density_matrix_checks() {
        assert!(Operator::identity(3).scale(1.0 / 3.0).is_density_matrix(1e-9));
        assert!(!Operator::diagonal(&[1.0, -0.0001, 0.0001]).is_density_matrix(1e-6));
        assert!(!Operator::identity(2).is_density_matrix(1e-9));
    }

    fn arb_hermitian(d: usize) -> impl Strategy<Value = Operator> {
        proptest::collection::vec(-1.0f64..1.0, 2 * d * d).prop_map(move |xs| {
            let mut m = Operator::zeros(d);
            for r in 0..d {
                for cc in 0..d {
                    m[(r, cc)] = c(xs[2 * (r * d + cc)], xs[2 * (r * d + cc) + 1]);
                }
            }
            m.hermitian_part()
        })
    }

    proptest! {
        #[test]
        fn eigh_reconstructs(m in arb_hermitian(5)) {
            let es = m.eigh().unwrap();
            prop_assert!(es.reconstruct().distance(&m) < 1e-9);
            prop_assert!((es.values.iter().sum::<f64>() - m.trace().re).abs() < 1e-9);
            for w in es.values.windows(2) {
                prop_assert!(w[0] <= w[1]);
            }
            for (i, u) in es.vectors.iter().enumerate() {
                for (j, w) in es.vectors.iter().enumerate() {
                    let g = inner(u, w);
                    let target = if i == j { 1.0 } else { 0.0 };
                    prop_assert!((g - c(target, 0.0)).norm() < 1e-10);
                }
            }
        }

        #[test]
        fn solve_random_positive_definite(m in arb_hermitian(5), b in proptest::collection::vec(-1.0f64..1.0, 10)) {
            // shift into the positive-definite cone
            let pd = &(&m * &m) + &Operator::identity(5).scale(0.1);
            let rhs: Vector = (0..5).map(|k| c(b[2 * k], b[2 * k + 1])).collect();
            let x = solve_hermitian(&pd, &[rhs.clone()]).unwrap();
            let back = pd.apply(&x[0]);
            let res: f64 = back.iter().zip(&rhs).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
            prop_assert!(res <= 1e-9 * norm_sqr(&rhs).sqrt().max(1.0));
        }
    }
}
