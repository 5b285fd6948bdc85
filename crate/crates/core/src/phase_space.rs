//! `Z(d) x Z(d)` arithmetic and the Heisenberg–Weyl operators.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use crate::error::{Error, Result};
use crate::operator::Operator;
use crate::subsets::{LabelSubset, MAX_LABEL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhasePoint {
    pub alpha: usize,
    pub beta: usize,
}

impl PhasePoint {
    pub const ORIGIN: PhasePoint = PhasePoint { alpha: 0, beta: 0 };

    pub fn new(alpha: usize, beta: usize) -> Self {
        PhasePoint { alpha, beta }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseSpace {
    d: usize,
    half_inverse: Option<usize>,
}

impl PhaseSpace {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        let half_inverse = (d % 2 == 1).then_some(d.div_ceil(2));
        Ok(PhaseSpace { d, half_inverse })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Number of phase-space points (labels), `d²`.
    pub fn size(&self) -> usize {
        self.d * self.d
    }

    /// `2⁻¹ mod d`; only odd `d` has one.
    pub fn half_inverse(&self) -> Option<usize> {
        self.half_inverse
    }

    pub fn has_displacements(&self) -> bool {
        self.half_inverse.is_some()
    }

    pub(crate) fn require_odd(&self) -> Result<usize> {
        self.half_inverse
            .ok_or(Error::DisplacementUnavailable(self.d))
    }

    /// All labels `{1, ..., d²}` as a subset. Needs `d² <= 128`.
    pub fn omega_set(&self) -> LabelSubset {
        LabelSubset::full(self.size())
    }

    /// `exp(2πi a / d)`, `a` taken mod `d`.
    pub fn omega(&self, a: i64) -> Complex64 {
        let r = a.rem_euclid(self.d as i64);
        Complex64::from_polar(1.0, 2.0 * PI * r as f64 / self.d as f64)
    }

    /// Finite Fourier transform, `F[n][m] = d^{-1/2} ω(n m)`.
    pub fn fourier(&self) -> Operator {
        let d = self.d;
        let s = 1.0 / (d as f64).sqrt();
        let mut f = Operator::zeros(d);
        for n in 0..d {
            for m in 0..d {
                f[(n, m)] = self.omega((n * m) as i64) * s;
            }
        }
        f
    }

    /// `(Z, X)`: `Z = diag(ω(m))`, `X |m⟩ = |m + 1⟩`.
    pub fn clock_shift(&self) -> (Operator, Operator) {
        let d = self.d;
        let mut z = Operator::zeros(d);
        let mut x = Operator::zeros(d);
        for m in 0..d {
            z[(m, m)] = self.omega(m as i64);
            x[((m + 1) % d, m)] = Complex64::new(1.0, 0.0);
        }
        (z, x)
    }

    /// `D(α, β) = Z^α X^β ω(-2⁻¹ α β)`.
    pub fn displacement(&self, p: PhasePoint) -> Result<Operator> {
        let h = self.require_odd()?;
        let d = self.d;
        let (a, b) = (p.alpha % d, p.beta % d);
        // (Z^a X^b)[r][c] = ω(a r) δ(r, c + b)
        let phase = self.omega(-((h * a % d * b % d) as i64));
        let mut out = Operator::zeros(d);
        for c in 0..d {
            let r = (c + b) % d;
            out[(r, c)] = self.omega((a * r) as i64) * phase;
        }
        Ok(out)
    }

    /// `D(α, β)|v⟩` without materialising the operator.
    pub fn displace_vector(&self, p: PhasePoint, v: &[Complex64]) -> Result<Vec<Complex64>> {
        let h = self.require_odd()?;
        let d = self.d;
        let (a, b) = (p.alpha % d, p.beta % d);
        let phase = self.omega(-((h * a % d * b % d) as i64));
        let mut out = alloc::vec![Complex64::new(0.0, 0.0); d];
        for (c, vc) in v.iter().enumerate() {
            let r = (c + b) % d;
            out[r] = self.omega((a * r) as i64) * phase * vc;
        }
        Ok(out)
    }

    /// `(α, β) -> α d + β + 1`.
    pub fn flat_index(&self, p: PhasePoint) -> Result<usize> {
        if p.alpha >= self.d || p.beta >= self.d {
            return Err(Error::InvalidArgument(alloc::format!(
                "phase point ({}, {}) outside Z({})²",
                p.alpha,
                p.beta,
                self.d
            )));
        }
        Ok(p.alpha * self.d + p.beta + 1)
    }

    pub fn unflat_index(&self, label: usize) -> Result<PhasePoint> {
        if label == 0 || label > self.size() {
            return Err(Error::LabelOutOfRange {
                label,
                max: self.size(),
            });
        }
        let k = label - 1;
        Ok(PhasePoint::new(k / self.d, k % self.d))
    }

    pub fn add_points(&self, p: PhasePoint, q: PhasePoint) -> PhasePoint {
        PhasePoint::new((p.alpha + q.alpha) % self.d, (p.beta + q.beta) % self.d)
    }

    /// Label of `point(label) + shift`.
    pub fn translate_label(&self, label: usize, shift: PhasePoint) -> Result<usize> {
        let p = self.unflat_index(label)?;
        self.flat_index(self.add_points(p, shift))
    }

    /// `A + (γ, δ)`.
    pub fn translate_subset(&self, a: LabelSubset, shift: PhasePoint) -> Result<LabelSubset> {
        if self.size() > MAX_LABEL {
            return Err(Error::TooLarge {
                what: "phase space labels",
                size: self.size(),
                cap: MAX_LABEL,
            });
        }
        let mut out = LabelSubset::EMPTY;
        for l in a.iter() {
            out = out.with(self.translate_label(l, shift)?);
        }
        Ok(out)
    }

    pub fn points(&self) -> impl Iterator<Item = PhasePoint> + '_ {
        (0..self.d).flat_map(move |a| (0..self.d).map(move |b| PhasePoint::new(a, b)))
    }
}
