//! Neumaier-compensated accumulation, for sums whose order is fixed but long.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    #[inline]
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

pub(crate) fn compensated_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = Compensated::default();
    for x in xs {
        acc.add(x);
    }
    acc.value()
}

/// Entrywise compensated accumulator for a square complex matrix.
#[derive(Clone, Debug)]
pub(crate) struct MatrixAccumulator {
    dim: usize,
    re: Vec<Compensated>,
    im: Vec<Compensated>,
}

impl MatrixAccumulator {
    pub(crate) fn new(dim: usize) -> Self {
        MatrixAccumulator {
            dim,
            re: vec![Compensated::default(); dim * dim],
            im: vec![Compensated::default(); dim * dim],
        }
    }

    pub(crate) fn add_entries(&mut self, entries: &[Complex64], scale: f64) {
        for (k, z) in entries.iter().enumerate() {
            self.re[k].add(z.re * scale);
            self.im[k].add(z.im * scale);
        }
    }

    /// Adds `scale · |u⟩⟨u|`.
    #[inline]
    pub(crate) fn add_outer(&mut self, u: &[Complex64], scale: f64) {
        let d = self.dim;
        for r in 0..d {
            let ur = u[r] * scale;
            for c in 0..d {
                let z = ur * u[c].conj();
                self.re[r * d + c].add(z.re);
                self.im[r * d + c].add(z.im);
            }
        }
    }

    /// Adds `scale · |u⟩⟨u|` to the upper triangle only; pair with
    /// [`finish_hermitian`](Self::finish_hermitian).
    #[inline]
    pub(crate) fn add_outer_upper(&mut self, u: &[Complex64], scale: f64) {
        let d = self.dim;
        for r in 0..d {
            let ur = u[r] * scale;
            for c in r..d {
                let z = ur * u[c].conj();
                self.re[r * d + c].add(z.re);
                self.im[r * d + c].add(z.im);
            }
        }
    }

    pub(crate) fn finish_hermitian(&self) -> Vec<Complex64> {
        let d = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); d * d];
        for r in 0..d {
            out[r * d + r] = Complex64::new(self.re[r * d + r].value(), 0.0);
            for c in r + 1..d {
                let z = Complex64::new(self.re[r * d + c].value(), self.im[r * d + c].value());
                out[r * d + c] = z;
                out[c * d + r] = z.conj();
            }
        }
        out
    }

    pub(crate) fn finish(&self) -> Vec<Complex64> {
        self.re
            .iter()
            .zip(&self.im)
            .map(|(r, i)| Complex64::new(r.value(), i.value()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensation_recovers_small_terms() {
        let mut xs = vec![1e16, 1.0, -1e16];
        xs.extend(core::iter::repeat(1e-3).take(1000));
        let naive: f64 = xs.iter().sum();
        let comp = compensated_sum(xs.iter().copied());
        assert!((comp - 2.0).abs() < 1e-12, "{comp}");
        assert!((naive - 2.0).abs() > 0.5);
    }
}
