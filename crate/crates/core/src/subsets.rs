//! Label subsets as bitmasks, fixed-cardinality enumeration and the fast
//! zeta/Möbius transforms over the subset lattice.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{AddAssign, SubAssign};

use crate::error::{Error, Result};

/// Largest label a [`LabelSubset`] can hold.
pub const MAX_LABEL: usize = 128;

/// A set of 1-based labels. Bit `i - 1` stands for label `i`, so subsets are
/// canonical by construction and iterate in increasing label order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LabelSubset(u128);

impl LabelSubset {
    pub const EMPTY: LabelSubset = LabelSubset(0);

    pub const fn from_bits(bits: u128) -> Self {
        LabelSubset(bits)
    }

    pub const fn bits(self) -> u128 {
        self.0
    }

    /// `{1, ..., n}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_LABEL);
        if n == MAX_LABEL {
            LabelSubset(u128::MAX)
        } else {
            LabelSubset((1u128 << n) - 1)
        }
    }

    pub fn singleton(label: usize) -> Self {
        assert!((1..=MAX_LABEL).contains(&label), "label {label} out of range");
        LabelSubset(1u128 << (label - 1))
    }

    pub fn from_labels(labels: &[usize]) -> Result<Self> {
        let mut s = LabelSubset::EMPTY;
        for &l in labels {
            if l == 0 || l > MAX_LABEL {
                return Err(Error::LabelOutOfRange {
                    label: l,
                    max: MAX_LABEL,
                });
            }
            s = s.with(l);
        }
        Ok(s)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, label: usize) -> bool {
        label >= 1 && label <= MAX_LABEL && self.0 & (1u128 << (label - 1)) != 0
    }

    #[must_use]
    pub fn with(self, label: usize) -> Self {
        LabelSubset(self.0 | LabelSubset::singleton(label).0)
    }

    #[must_use]
    pub fn without(self, label: usize) -> Self {
        LabelSubset(self.0 & !LabelSubset::singleton(label).0)
    }

    #[must_use]
    pub fn union(self, other: Self) -> Self {
        LabelSubset(self.0 | other.0)
    }

    #[must_use]
    pub fn intersection(self, other: Self) -> Self {
        LabelSubset(self.0 & other.0)
    }

    #[must_use]
    pub fn difference(self, other: Self) -> Self {
        LabelSubset(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    /// Largest label present, 0 for the empty set.
    pub fn max_label(self) -> usize {
        128 - self.0.leading_zeros() as usize
    }

    pub fn iter(self) -> LabelIter {
        LabelIter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Every subset of `self`, the empty set included, in increasing bit order.
    pub fn subsets(self) -> SubmaskIter {
        SubmaskIter {
            mask: self.0,
            next: Some(0),
        }
    }

    /// Subsets of `self` with exactly `k` elements, in colex order.
    pub fn subsets_of_size(self, k: usize) -> FixedCardinality {
        FixedCardinality::new(self.to_vec(), k)
    }

    /// Dense-table index for subsets of `{1, ..., n}` with `n <= 64`.
    pub fn index(self) -> usize {
        debug_assert!(self.0 >> 64 == 0);
        self.0 as usize
    }
}

impl fmt::Display for LabelSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, l) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for LabelSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromIterator<usize> for LabelSubset {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter().fold(LabelSubset::EMPTY, LabelSubset::with)
    }
}

pub struct LabelIter(u128);

impl Iterator for LabelIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let t = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(t + 1)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for LabelIter {}

pub struct SubmaskIter {
    mask: u128,
    next: Option<u128>,
}

impl Iterator for SubmaskIter {
    type Item = LabelSubset;

    fn next(&mut self) -> Option<LabelSubset> {
        let cur = self.next?;
        // increment restricted to the bits of `mask`
        let succ = (cur | !self.mask).wrapping_add(1) & self.mask;
        self.next = if succ == 0 { None } else { Some(succ) };
        Some(LabelSubset(cur))
    }
}

/// k-subsets of a fixed universe of labels, colex order.
///
/// Positions inside the universe are tracked with Gosper's hack, so the
/// universe can hold up to 127 labels for any `k`.
pub struct FixedCardinality {
    universe: Vec<usize>,
    k: usize,
    state: Option<u128>,
}

impl FixedCardinality {
    pub fn new(universe: Vec<usize>, k: usize) -> Self {
        let n = universe.len();
        assert!(n < 128, "universe too large for fixed-cardinality enumeration");
        let state = if k > n {
            None
        } else if k == 0 {
            Some(0)
        } else {
            Some((1u128 << k) - 1)
        };
        FixedCardinality { universe, k, state }
    }
}

impl Iterator for FixedCardinality {
    type Item = LabelSubset;

    fn next(&mut self) -> Option<LabelSubset> {
        let cur = self.state?;
        let mut out = LabelSubset::EMPTY;
        let mut bits = cur;
        while bits != 0 {
            let t = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            out = out.with(self.universe[t]);
        }
        self.state = if self.k == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            let nxt = (((r ^ cur) >> 2) / c) | r;
            if nxt >> self.universe.len() != 0 {
                None
            } else {
                Some(nxt)
            }
        };
        Some(out)
    }
}

/// `C(n, k)` as f64 (exact for the sizes used here).
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for j in 0..k {
        acc = acc * (n - j) as f64 / (j + 1) as f64;
    }
    // products of this form are integers; undo accumulated rounding
    libm_round(acc)
}

/// `C(n, k)` as an exact integer.
pub fn binomial_u128(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc * (n - j) as u128 / (j + 1) as u128;
    }
    acc
}

fn libm_round(x: f64) -> f64 {
    num_traits::Float::round(x)
}

/// `n!` as f64.
pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// In place: `xs[B] <- Σ_{A ⊆ B} xs[A]` (inverse Möbius / zeta transform).
pub fn subset_zeta<T: Clone + for<'a> AddAssign<&'a T>>(xs: &mut [T]) {
    kronecker_pass(xs, |lo, hi| *hi += lo);
}

/// In place: `xs[B] <- Σ_{A ⊆ B} (-1)^{|B|-|A|} xs[A]` (Möbius transform).
pub fn subset_mobius<T: Clone + for<'a> SubAssign<&'a T>>(xs: &mut [T]) {
    kronecker_pass(xs, |lo, hi| *hi -= lo);
}

fn kronecker_pass<T>(xs: &mut [T], mut op: impl FnMut(&T, &mut T)) {
    let n = xs.len();
    assert!(n.is_power_of_two(), "transform length must be a power of two");
    let mut half = 1;
    while half < n {
        for block in xs.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (l, h) in lo.iter().zip(hi.iter_mut()) {
                op(l, h);
            }
        }
        half *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn display_and_iteration() {
        let s = LabelSubset::from_labels(&[3, 1, 9]).unwrap();
        assert_eq!(s.to_vec(), vec![1, 3, 9]);
        assert_eq!(alloc::format!("{s}"), "{1,3,9}");
        assert_eq!(s.len(), 3);
        assert_eq!(s.max_label(), 9);
        assert!(LabelSubset::from_labels(&[0]).is_err());
    }

    #[test]
    fn fixed_cardinality_counts() {
        for n in 0..10usize {
            for k in 0..=n + 1 {
                let universe: Vec<usize> = (1..=n).collect();
                let all: Vec<_> = FixedCardinality::new(universe, k).collect();
                assert_eq!(all.len() as u128, binomial_u128(n, k), "n={n} k={k}");
                assert!(all.iter().all(|s| s.len() == k));
                let mut dedup = all.clone();
                dedup.sort();
                dedup.dedup();
                assert_eq!(dedup.len(), all.len());
            }
        }
    }

    #[test]
    fn fixed_cardinality_over_sparse_universe() {
        let u = LabelSubset::from_labels(&[2, 5, 7, 11]).unwrap();
        let pairs: Vec<_> = u.subsets_of_size(2).collect();
        assert_eq!(pairs.len(), 6);
        assert!(pairs.iter().all(|p| p.is_subset_of(u)));
        // colex: {2,5} {2,7} {5,7} {2,11} ...
        assert_eq!(pairs[0].to_vec(), vec![2, 5]);
        assert_eq!(pairs[2].to_vec(), vec![5, 7]);
    }

    #[test]
    fn submasks() {
        let u = LabelSubset::from_labels(&[1, 4, 6]).unwrap();
        let subs: Vec<_> = u.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert_eq!(subs[0], LabelSubset::EMPTY);
        assert!(subs.iter().all(|s| s.is_subset_of(u)));
        assert_eq!(LabelSubset::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(8, 2), 28.0);
        assert_eq!(binomial(48, 6), 12_271_512.0);
        assert_eq!(binomial_u128(81, 9), 260_887_834_350);
        assert_eq!(binomial(3, 5), 0.0);
    }

    proptest! {
        #[test]
        fn zeta_mobius_round_trip(values in proptest::collection::vec(-10.0f64..10.0, 64)) {
            let mut xs = values.clone();
            subset_zeta(&mut xs);
            subset_mobius(&mut xs);
            for (a, b) in xs.iter().zip(&values) {
                prop_assert!((a - b).abs() < 1e-10);
            }
        }

        #[test]
        fn zeta_matches_brute_force(values in proptest::collection::vec(-5.0f64..5.0, 32)) {
            let mut xs = values.clone();
            subset_zeta(&mut xs);
            for b in 0..32usize {
                let direct: f64 = (0..32usize).filter(|a| a & !b == 0).map(|a| values[a]).sum();
                prop_assert!((xs[b] - direct).abs() < 1e-9);
            }
        }
    }
}
