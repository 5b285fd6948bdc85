//! Cooperative games: characteristic functions, Möbius transforms, the
//! three Shapley formulas and structural predicates.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::subsets::{binomial, factorial, subset_mobius, subset_zeta, FixedCardinality, LabelSubset};
use crate::sum::{compensated_sum, Compensated};

/// Largest ground set for dense tables and fast transforms.
pub const DENSE_CAP: usize = 24;
/// Largest ground set for literal permutation enumeration.
pub const PERMUTATION_CAP: usize = 9;

pub type Rule = Arc<dyn Fn(LabelSubset) -> f64 + Send + Sync>;

/// A real function on subsets of `{1, ..., n}` with `v(∅) = 0`.
#[derive(Clone)]
pub enum SetFunction {
    /// `values[A.index()]` for every subset.
    Dense { n: usize, values: Vec<f64> },
    /// Evaluated on demand. When `tail` is `Some((t, c))`, every subset
    /// with at least `t` elements has value `c`.
    Rule {
        n: usize,
        rule: Rule,
        tail: Option<(usize, f64)>,
    },
}

impl fmt::Debug for SetFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetFunction::Dense { n, values } => {
                f.debug_struct("Dense").field("n", n).field("values", values).finish()
            }
            SetFunction::Rule { n, tail, .. } => {
                f.debug_struct("Rule").field("n", n).field("tail", tail).finish()
            }
        }
    }
}

fn dense_cap(n: usize) -> Result<()> {
    if n > DENSE_CAP {
        return Err(Error::TooLarge {
            what: "dense set function",
            size: n,
            cap: DENSE_CAP,
        });
    }
    Ok(())
}

impl SetFunction {
    /// Dense table indexed by subset bitmask; `values[0]` must be zero.
    pub fn dense(n: usize, values: Vec<f64>) -> Result<Self> {
        dense_cap(n)?;
        if values.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                actual: values.len(),
            });
        }
        if values[0] != 0.0 {
            return Err(Error::InvalidArgument(format!(
                "v(∅) must be 0, got {}",
                values[0]
            )));
        }
        Ok(SetFunction::Dense { n, values })
    }

    /// Tabulates `f` on every subset (`f(∅)` is ignored).
    pub fn tabulate(n: usize, f: impl Fn(LabelSubset) -> f64) -> Result<Self> {
        dense_cap(n)?;
        let values = (0..1u128 << n)
            .map(|b| if b == 0 { 0.0 } else { f(LabelSubset::from_bits(b)) })
            .collect();
        Ok(SetFunction::Dense { n, values })
    }

    pub fn from_rule(n: usize, rule: impl Fn(LabelSubset) -> f64 + Send + Sync + 'static) -> Self {
        SetFunction::Rule {
            n,
            rule: Arc::new(rule),
            tail: None,
        }
    }

    /// Declares that subsets of size `>= from` all have `value`. The rule
    /// is no longer consulted there.
    #[must_use]
    pub fn with_tail(self, from: usize, value: f64) -> Self {
        match self {
            SetFunction::Rule { n, rule, .. } => SetFunction::Rule {
                n,
                rule,
                tail: Some((from, value)),
            },
            dense => dense,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            SetFunction::Dense { n, .. } | SetFunction::Rule { n, .. } => *n,
        }
    }

    pub fn ground(&self) -> LabelSubset {
        LabelSubset::full(self.n())
    }

    pub fn tail(&self) -> Option<(usize, f64)> {
        match self {
            SetFunction::Dense { .. } => None,
            SetFunction::Rule { tail, .. } => *tail,
        }
    }

    pub fn value(&self, a: LabelSubset) -> f64 {
        if a.is_empty() {
            return 0.0;
        }
        debug_assert!(a.max_label() <= self.n());
        match self {
            SetFunction::Dense { values, .. } => values[a.index()],
            SetFunction::Rule { rule, tail, .. } => match tail {
                Some((t, c)) if a.len() >= *t => *c,
                _ => rule(a),
            },
        }
    }

    /// `v(N)`.
    pub fn grand(&self) -> f64 {
        self.value(self.ground())
    }

    pub fn to_dense(&self) -> Result<SetFunction> {
        match self {
            SetFunction::Dense { .. } => Ok(self.clone()),
            SetFunction::Rule { n, .. } => SetFunction::tabulate(*n, |a| self.value(a)),
        }
    }

    pub fn values(&self) -> Result<Vec<f64>> {
        match self.to_dense()? {
            SetFunction::Dense { values, .. } => Ok(values),
            SetFunction::Rule { .. } => unreachable!(),
        }
    }
}

/// Per-player values `S(1), ..., S(n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShapleyVector(pub Vec<f64>);

impl ShapleyVector {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// `S(label)`, 1-based.
    pub fn get(&self, label: usize) -> f64 {
        self.0[label - 1]
    }

    pub fn total(&self) -> f64 {
        compensated_sum(self.0.iter().copied())
    }

    pub fn max_abs_diff(&self, other: &ShapleyVector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// `𝔡(B) = Σ_{A ⊆ B} (-1)^{|B|-|A|} v(A)` as a dense table.
pub fn mobius_setfn(v: &SetFunction) -> Result<SetFunction> {
    let mut values = v.values()?;
    subset_mobius(&mut values);
    SetFunction::dense(v.n(), values)
}

/// `v(A) = Σ_{B ⊆ A} 𝔡(B)`.
pub fn inverse_mobius_setfn(d: &SetFunction) -> Result<SetFunction> {
    let mut values = d.values()?;
    subset_zeta(&mut values);
    SetFunction::dense(d.n(), values)
}

/// `S(i) = Σ_{A ⊆ N∖{i}} |A|!(n-|A|-1)!/n! [v(A ∪ {i}) - v(A)]`.
///
/// With a declared tail from size `t`, only `|A| < t` contributes, which
/// keeps the sum polynomial for large `n`.
pub fn shapley_subset(v: &SetFunction) -> Result<ShapleyVector> {
    let n = v.n();
    if n == 0 {
        return Ok(ShapleyVector(Vec::new()));
    }
    let weights: Vec<f64> = (0..n).map(|k| 1.0 / (n as f64 * binomial(n - 1, k))).collect();
    let max_card = match v.tail() {
        Some((t, _)) => t.min(n),
        None => {
            dense_cap(n)?;
            n
        }
    };
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        let rest: Vec<usize> = (1..=n).filter(|&j| j != i).collect();
        let mut acc = Compensated::default();
        for k in 0..max_card.min(n) {
            for a in FixedCardinality::new(rest.clone(), k) {
                acc.add(weights[k] * (v.value(a.with(i)) - v.value(a)));
            }
        }
        out.push(acc.value());
    }
    Ok(ShapleyVector(out))
}

/// Average over all `n!` orderings of each player's marginal contribution,
/// enumerated literally (Heap's algorithm).
pub fn shapley_permutation(v: &SetFunction) -> Result<ShapleyVector> {
    let n = v.n();
    if n > PERMUTATION_CAP {
        return Err(Error::TooLarge {
            what: "permutation Shapley formula",
            size: n,
            cap: PERMUTATION_CAP,
        });
    }
    let table = v.values()?;
    let mut acc = vec![Compensated::default(); n];
    let mut order: Vec<usize> = (0..n).collect();
    let mut visit = |order: &[usize]| {
        let mut mask = 0usize;
        let mut prev = 0.0;
        for &p in order {
            mask |= 1 << p;
            let cur = table[mask];
            acc[p].add(cur - prev);
            prev = cur;
        }
    };
    // iterative Heap's algorithm
    let mut c = vec![0usize; n];
    visit(&order);
    let mut k = 1;
    while k < n {
        if c[k] < k {
            if k % 2 == 0 {
                order.swap(0, k);
            } else {
                order.swap(c[k], k);
            }
            visit(&order);
            c[k] += 1;
            k = 1;
        } else {
            c[k] = 0;
            k += 1;
        }
    }
    let total = factorial(n);
    Ok(ShapleyVector(acc.iter().map(|a| a.value() / total).collect()))
}

/// `S(i) = Σ_{B ∋ i} 𝔡(B)/|B|`: each dividend split equally.
pub fn shapley_mobius(v: &SetFunction) -> Result<ShapleyVector> {
    let n = v.n();
    let dividends = mobius_setfn(v)?.values()?;
    let mut acc = vec![Compensated::default(); n];
    for (bits, dv) in dividends.iter().enumerate().skip(1) {
        let b = LabelSubset::from_bits(bits as u128);
        let share = dv / b.len() as f64;
        for i in b.iter() {
            acc[i - 1].add(share);
        }
    }
    Ok(ShapleyVector(acc.iter().map(Compensated::value).collect()))
}

/// The unanimity game `𝔙_A(B) = 1` iff `A ⊆ B`.
pub fn basis_game(n: usize, a: LabelSubset) -> Result<SetFunction> {
    if a.is_empty() {
        return Err(Error::InvalidArgument("basis game of the empty set".into()));
    }
    if a.max_label() > n {
        return Err(Error::LabelOutOfRange {
            label: a.max_label(),
            max: n,
        });
    }
    Ok(SetFunction::from_rule(n, move |b| {
        if a.is_subset_of(b) {
            1.0
        } else {
            0.0
        }
    }))
}

/// Outcome of a structural check, with a violating pair when it fails.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Predicate {
    pub holds: bool,
    pub witness: Option<(LabelSubset, LabelSubset)>,
}

impl Predicate {
    fn holds() -> Self {
        Predicate {
            holds: true,
            witness: None,
        }
    }

    fn fails(a: LabelSubset, b: LabelSubset) -> Self {
        Predicate {
            holds: false,
            witness: Some((a, b)),
        }
    }
}

const PREDICATE_TOL: f64 = 1e-12;

/// `A ∩ B = ∅ → v(A) + v(B) <= v(A ∪ B)`; the witness is the disjoint pair.
pub fn superadditive(v: &SetFunction) -> Result<Predicate> {
    let table = v.values()?;
    let full = (1usize << v.n()) - 1;
    for a in 1..=full {
        let rest = full & !a;
        // each unordered pair once: b ranges over submasks of rest above a
        let mut b = rest;
        while b > 0 {
            if b > a && table[a] + table[b] > table[a | b] + PREDICATE_TOL {
                return Ok(Predicate::fails(
                    LabelSubset::from_bits(a as u128),
                    LabelSubset::from_bits(b as u128),
                ));
            }
            b = (b - 1) & rest;
        }
    }
    Ok(Predicate::holds())
}

/// `A ⊆ B → v(A) <= v(B)`, checked on covering pairs `B = A ∪ {j}`.
pub fn monotonic(v: &SetFunction) -> Result<Predicate> {
    let table = v.values()?;
    let n = v.n();
    for a in 0..table.len() {
        for j in 0..n {
            let b = a | (1 << j);
            if b != a && table[a] > table[b] + PREDICATE_TOL {
                return Ok(Predicate::fails(
                    LabelSubset::from_bits(a as u128),
                    LabelSubset::from_bits(b as u128),
                ));
            }
        }
    }
    Ok(Predicate::holds())
}

/// Whether all subsets with at least `from` elements share one value
/// (within `tol`); returns that value. A declared tail is trusted.
pub fn tail_constant(v: &SetFunction, from: usize, tol: f64) -> Result<Option<f64>> {
    if let Some((t, c)) = v.tail() {
        if t <= from {
            return Ok(Some(c));
        }
    }
    let n = v.n();
    if from > n {
        return Ok(None);
    }
    let reference = v.value(FixedCardinality::new((1..=n).collect(), from)
        .next()
        .unwrap_or(LabelSubset::EMPTY));
    for k in from..=n {
        for a in FixedCardinality::new((1..=n).collect(), k) {
            if (v.value(a) - reference).abs() > tol {
                return Ok(None);
            }
        }
    }
    if from == 0 && reference != 0.0 {
        return Ok(None);
    }
    Ok(Some(reference))
}

/// Free values of a game whose subsets of size `>= t` are fixed:
/// `Σ_{k=1}^{t-1} C(n, k)`.
pub fn degrees_of_freedom(n: usize, t: usize) -> f64 {
    (1..t.min(n + 1)).map(|k| binomial(n, k)).sum()
}

/// A bijection of `{1, ..., n}`: label `i` goes to `image[i - 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &v in &image {
            if v == 0 || v > n || seen[v - 1] {
                return Err(Error::InvalidArgument(format!(
                    "{image:?} is not a permutation of 1..={n}"
                )));
            }
            seen[v - 1] = true;
        }
        Ok(Permutation { image })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (1..=n).collect(),
        }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut image: Vec<usize> = (1..=n).collect();
        image.shuffle(rng);
        Permutation { image }
    }

    pub fn n(&self) -> usize {
        self.image.len()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(k, &v)| v == k + 1)
    }

    pub fn apply(&self, label: usize) -> usize {
        self.image[label - 1]
    }

    pub fn apply_subset(&self, a: LabelSubset) -> LabelSubset {
        a.iter().map(|i| self.apply(i)).collect()
    }

    #[must_use]
    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.n()];
        for (k, &v) in self.image.iter().enumerate() {
            inv[v - 1] = k + 1;
        }
        Permutation { image: inv }
    }
}

/// `v_π(π(A)) = v(A)`, i.e. `v_π(B) = v(π⁻¹(B))`. Tails carry over.
pub fn permute_setfn(v: &SetFunction, pi: &Permutation) -> Result<SetFunction> {
    if pi.n() != v.n() {
        return Err(Error::DimensionMismatch {
            expected: v.n(),
            actual: pi.n(),
        });
    }
    let inv = pi.inverse();
    match v {
        SetFunction::Dense { n, .. } => {
            SetFunction::tabulate(*n, |b| v.value(inv.apply_subset(b)))
        }
        SetFunction::Rule { n, tail, .. } => {
            let inner = v.clone();
            let f = SetFunction::from_rule(*n, move |b| inner.value(inv.apply_subset(b)));
            Ok(match tail {
                Some((t, c)) => f.with_tail(*t, *c),
                None => f,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn s(l: &[usize]) -> LabelSubset {
        LabelSubset::from_labels(l).unwrap()
    }

    /// Three workers: alone they earn 1, 0, 2; pairs {1,2}: 4, {1,3}: 3,
    /// {2,3}: 6; all three: 8.
    fn workers() -> SetFunction {
        let mut values = vec![0.0; 8];
        for (labels, v) in [
            (&[1][..], 1.0),
            (&[2], 0.0),
            (&[3], 2.0),
            (&[1, 2], 4.0),
            (&[1, 3], 3.0),
            (&[2, 3], 6.0),
            (&[1, 2, 3], 8.0),
        ] {
            values[s(labels).index()] = v;
        }
        SetFunction::dense(3, values).unwrap()
    }

    fn random_game(n: usize, rng: &mut ChaCha8Rng) -> SetFunction {
        let values = (0..1usize << n)
            .map(|b| if b == 0 { 0.0 } else { rng.gen_range(-5.0..5.0) })
            .collect();
        SetFunction::dense(n, values).unwrap()
    }

    #[test]
    fn workers_mobius_and_shapley() {
        let v = workers();
        let m = mobius_setfn(&v).unwrap();
        let expect = [
            (&[1][..], 1.0),
            (&[2], 0.0),
            (&[3], 2.0),
            (&[1, 2], 3.0),
            (&[1, 3], 0.0),
            (&[2, 3], 4.0),
            (&[1, 2, 3], -2.0),
        ];
        for (labels, e) in expect {
            assert!((m.value(s(labels)) - e).abs() < 1e-12);
        }
        let target = [11.0 / 6.0, 17.0 / 6.0, 10.0 / 3.0];
        for sv in [
            shapley_subset(&v).unwrap(),
            shapley_permutation(&v).unwrap(),
            shapley_mobius(&v).unwrap(),
        ] {
            for (a, b) in sv.values().iter().zip(target) {
                assert!((a - b).abs() < 1e-12);
            }
            assert!((sv.total() - 8.0).abs() < 1e-12);
        }
        assert!(superadditive(&v).unwrap().holds);
        assert!(monotonic(&v).unwrap().holds);
    }

    #[test]
    fn workers_expand_in_basis_games() {
        let v = workers();
        let m = mobius_setfn(&v).unwrap();
        for b in LabelSubset::full(3).subsets() {
            let mut acc = 0.0;
            for c in LabelSubset::full(3).subsets().filter(|c| !c.is_empty()) {
                acc += m.value(c) * basis_game(3, c).unwrap().value(b);
            }
            assert!((acc - v.value(b)).abs() < 1e-10);
        }
    }

    #[test]
    fn basis_games() {
        let g = basis_game(4, s(&[1])).unwrap();
        assert_eq!(g.value(s(&[1, 3])), 1.0);
        let g = basis_game(4, s(&[1, 2])).unwrap();
        assert_eq!(g.value(s(&[1])), 0.0);
        let sv = shapley_subset(&g).unwrap();
        assert_eq!(sv.values(), &[0.5, 0.5, 0.0, 0.0]);
        assert!(basis_game(4, LabelSubset::EMPTY).is_err());
        assert!(basis_game(2, s(&[3])).is_err());
    }

    #[test]
    fn additive_games() {
        let w = [0.5, -1.0, 2.0, 3.5];
        let v = SetFunction::tabulate(4, |a| a.iter().map(|i| w[i - 1]).sum()).unwrap();
        let m = mobius_setfn(&v).unwrap();
        for b in LabelSubset::full(4).subsets().filter(|b| b.len() >= 2) {
            assert!(m.value(b).abs() < 1e-12);
        }
        let sv = shapley_mobius(&v).unwrap();
        for (a, b) in sv.values().iter().zip(w) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn tails_truncate_the_subset_sum() {
        // value 7 on every subset of size >= 2, 1 on the three singletons
        let v = SetFunction::from_rule(3, |a| if a.len() >= 2 { 7.0 } else { 1.0 }).with_tail(2, 7.0);
        let dense = v.to_dense().unwrap();
        let a = shapley_subset(&v).unwrap();
        let b = shapley_subset(&dense).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-12);
        assert_eq!(tail_constant(&dense, 2, 1e-12).unwrap(), Some(7.0));
        assert_eq!(tail_constant(&dense, 1, 1e-12).unwrap(), None);
        assert_eq!(degrees_of_freedom(9, 3), 9.0 + 36.0);
    }

    #[test]
    fn predicate_witnesses() {
        let mut values = vec![0.0; 4];
        values[s(&[1]).index()] = 2.0;
        values[s(&[2]).index()] = 2.0;
        values[s(&[1, 2]).index()] = 1.0;
        let v = SetFunction::dense(2, values).unwrap();
        let p = superadditive(&v).unwrap();
        assert!(!p.holds);
        assert_eq!(p.witness, Some((s(&[1]), s(&[2]))));
        let p = monotonic(&v).unwrap();
        assert!(!p.holds);
        assert_eq!(p.witness.unwrap().0.len() + 1, p.witness.unwrap().1.len());
    }

    #[test]
    fn dense_validation() {
        assert!(SetFunction::dense(2, vec![1.0, 0.0, 0.0, 0.0]).is_err());
        assert!(SetFunction::dense(2, vec![0.0; 3]).is_err());
        assert!(SetFunction::dense(25, vec![]).is_err());
        assert!(shapley_permutation(&SetFunction::from_rule(10, |_| 0.0)).is_err());
    }

    #[test]
    fn permutations() {
        assert!(Permutation::new(vec![1, 1, 2]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
        let p = Permutation::new(vec![2, 3, 1]).unwrap();
        assert_eq!(p.inverse().image(), &[3, 1, 2]);
        assert_eq!(p.apply_subset(s(&[1, 2])), s(&[2, 3]));
        assert!(Permutation::identity(4).is_identity());
        let v = workers();
        let vp = permute_setfn(&v, &p).unwrap();
        assert_eq!(vp.value(s(&[2, 3])), v.value(s(&[1, 2])));
    }

    #[test]
    fn agreement_on_random_games() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=6 {
            let v = random_game(n, &mut rng);
            let a = shapley_subset(&v).unwrap();
            let b = shapley_permutation(&v).unwrap();
            let c = shapley_mobius(&v).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-9);
            assert!(a.max_abs_diff(&c) < 1e-9);
            assert!((a.total() - v.grand()).abs() < 1e-9);
        }
    }

    proptest! {
        #[test]
        fn mobius_round_trip(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let v = random_game(6, &mut rng);
            let back = inverse_mobius_setfn(&mobius_setfn(&v).unwrap()).unwrap();
            for (a, b) in v.values().unwrap().iter().zip(back.values().unwrap()) {
                prop_assert!((a - b).abs() < 1e-10);
            }
        }

        #[test]
        fn shapley_is_symmetric(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let v = random_game(5, &mut rng);
            let pi = Permutation::random(5, &mut rng);
            let sv = shapley_subset(&v).unwrap();
            let sp = shapley_subset(&permute_setfn(&v, &pi).unwrap()).unwrap();
            for i in 1..=5 {
                prop_assert!((sp.get(pi.apply(i)) - sv.get(i)).abs() < 1e-12);
            }
        }

        #[test]
        fn shapley_is_linear(seed in any::<u64>(), l1 in -3.0f64..3.0, l2 in -3.0f64..3.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let v1 = random_game(4, &mut rng);
            let v2 = random_game(4, &mut rng);
            let t1 = v1.values().unwrap();
            let t2 = v2.values().unwrap();
            let mix = SetFunction::dense(4, t1.iter().zip(&t2).map(|(a, b)| l1 * a + l2 * b).collect()).unwrap();
            let s1 = shapley_mobius(&v1).unwrap();
            let s2 = shapley_mobius(&v2).unwrap();
            let sm = shapley_mobius(&mix).unwrap();
            for i in 1..=4 {
                prop_assert!((sm.get(i) - l1 * s1.get(i) - l2 * s2.get(i)).abs() < 1e-9);
            }
        }
    }
}
