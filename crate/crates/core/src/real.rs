//! Real dense solves used to recover Hermitian operators from their
//! phase-space weights.
//!
//! A Hermitian `θ` on `H(d)` is a real vector of `d²` coordinates: the
//! diagonal entries, then `Re θ_mn` and `Im θ_mn` for `m < n`. Every weight
//! in the crate (`Q`, Shapley values, subset `Q`) is real-linear in `θ`, so
//! recovering `θ` from weights is a real linear system.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use crate::error::{Error, Result};
use crate::operator::Operator;

/// Row-major real matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct RealMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RealMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            data.extend(row);
        }
        RealMatrix {
            rows: r,
            cols: c,
            data,
        }
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    fn at_mut(&mut self, r: usize, c: usize) -> &mut f64 {
        &mut self.data[r * self.cols + c]
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.at(r, c) * x[c]).sum())
            .collect()
    }
}

/// Number of real coordinates of a Hermitian `d x d` operator.
pub fn hermitian_coords(d: usize) -> usize {
    d * d
}

/// The `k`-th Hermitian basis element in the coordinate order above.
pub fn hermitian_basis(d: usize, k: usize) -> Operator {
    let mut m = Operator::zeros(d);
    if k < d {
        m[(k, k)] = Complex64::new(1.0, 0.0);
        return m;
    }
    let (m_idx, n_idx, imaginary) = off_diagonal_slot(d, k - d);
    if imaginary {
        m[(m_idx, n_idx)] = Complex64::new(0.0, 1.0);
        m[(n_idx, m_idx)] = Complex64::new(0.0, -1.0);
    } else {
        m[(m_idx, n_idx)] = Complex64::new(1.0, 0.0);
        m[(n_idx, m_idx)] = Complex64::new(1.0, 0.0);
    }
    m
}

fn off_diagonal_slot(d: usize, j: usize) -> (usize, usize, bool) {
    let pair = j / 2;
    let mut count = 0;
    for m in 0..d {
        for n in m + 1..d {
            if count == pair {
                return (m, n, j % 2 == 1);
            }
            count += 1;
        }
    }
    unreachable!("coordinate {j} out of range for d = {d}")
}

/// Coordinates of a Hermitian operator (its Hermitian part, strictly).
pub fn to_coords(theta: &Operator) -> Vec<f64> {
    let d = theta.dim();
    let mut out = Vec::with_capacity(d * d);
    for k in 0..d {
        out.push(theta[(k, k)].re);
    }
    for m in 0..d {
        for n in m + 1..d {
            let z = (theta[(m, n)] + theta[(n, m)].conj()) * 0.5;
            out.push(z.re);
            out.push(z.im);
        }
    }
    out
}

pub fn from_coords(d: usize, x: &[f64]) -> Operator {
    let mut m = Operator::zeros(d);
    for k in 0..d {
        m[(k, k)] = Complex64::new(x[k], 0.0);
    }
    let mut j = d;
    for r in 0..d {
        for c in r + 1..d {
            let z = Complex64::new(x[j], x[j + 1]);
            m[(r, c)] = z;
            m[(c, r)] = z.conj();
            j += 2;
        }
    }
    m
}

/// Design matrix of a real-linear functional family on Hermitian operators:
/// row `i` is `(f_i(E_0), ..., f_i(E_{d²-1}))` for the basis `E_k`.
pub fn design_matrix(d: usize, rows: usize, f: impl Fn(usize, &Operator) -> f64) -> RealMatrix {
    let n = hermitian_coords(d);
    let basis: Vec<Operator> = (0..n).map(|k| hermitian_basis(d, k)).collect();
    let mut m = RealMatrix::zeros(rows, n);
    for i in 0..rows {
        for (k, e) in basis.iter().enumerate() {
            *m.at_mut(i, k) = f(i, e);
        }
    }
    m
}

/// Square solve by LU with partial pivoting. Pivots below
/// `rel_tol · max|a|` count as singular.
pub fn lu_solve(a: &RealMatrix, b: &[f64], rel_tol: f64) -> Result<Vec<f64>> {
    if a.rows != a.cols || b.len() != a.rows {
        return Err(Error::DimensionMismatch {
            expected: a.rows,
            actual: b.len(),
        });
    }
    let n = a.rows;
    let mut m = a.clone();
    let mut x = b.to_vec();
    let scale = m.data.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    for col in 0..n {
        let (piv, piv_abs) = (col..n)
            .map(|r| (r, m.at(r, col).abs()))
            .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if !(piv_abs > rel_tol * scale) {
            return Err(Error::Singular(format!(
                "pivot {piv_abs:e} in column {col} (scale {scale:e})"
            )));
        }
        if piv != col {
            for c in 0..n {
                m.data.swap(piv * n + c, col * n + c);
            }
            x.swap(piv, col);
        }
        let p = m.at(col, col);
        for r in col + 1..n {
            let f = m.at(r, col) / p;
            if f == 0.0 {
                continue;
            }
            for c in col..n {
                let v = m.at(col, c);
                *m.at_mut(r, c) -= f * v;
            }
            x[r] -= f * x[col];
        }
    }
    for r in (0..n).rev() {
        let mut acc = x[r];
        for c in r + 1..n {
            acc -= m.at(r, c) * x[c];
        }
        x[r] = acc / m.at(r, r);
    }
    Ok(x)
}

/// Least-squares solve of `a x ≈ b` by Householder QR (`rows >= cols`).
/// Returns the minimiser and the Euclidean residual norm.
pub fn least_squares(a: &RealMatrix, b: &[f64], rel_tol: f64) -> Result<(Vec<f64>, f64)> {
    let (rows, cols) = (a.rows, a.cols);
    if b.len() != rows {
        return Err(Error::DimensionMismatch {
            expected: rows,
            actual: b.len(),
        });
    }
    if rows < cols {
        return Err(Error::Singular(format!(
            "underdetermined design: {rows} equations for {cols} unknowns"
        )));
    }
    let mut r = a.clone();
    let mut y = b.to_vec();
    let scale = r.data.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    for k in 0..cols {
        let norm = (k..rows).map(|i| r.at(i, k).powi(2)).sum::<f64>().sqrt();
        if !(norm > rel_tol * scale * (rows as f64).sqrt()) {
            return Err(Error::Singular(format!(
                "rank-deficient design at column {k} (norm {norm:e})"
            )));
        }
        let alpha = if r.at(k, k) > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k..rows).map(|i| r.at(i, k)).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|t| t * t).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for c in k..cols {
            let dot: f64 = (k..rows).map(|i| v[i - k] * r.at(i, c)).sum();
            let f = 2.0 * dot / vnorm2;
            for i in k..rows {
                *r.at_mut(i, c) -= f * v[i - k];
            }
        }
        let dot: f64 = (k..rows).map(|i| v[i - k] * y[i]).sum();
        let f = 2.0 * dot / vnorm2;
        for i in k..rows {
            y[i] -= f * v[i - k];
        }
    }
    let mut x = vec![0.0; cols];
    for k in (0..cols).rev() {
        let mut acc = y[k];
        for c in k + 1..cols {
            acc -= r.at(k, c) * x[c];
        }
        x[k] = acc / r.at(k, k);
    }
    let residual = y[cols..].iter().map(|t| t * t).sum::<f64>().sqrt();
    Ok((x, residual))
}
