//! Where an operator lives in phase space: location indices,
//! comonotonicity, coupling-constant sweeps and Wehrl entropy.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::aggregation::StateSet;
use crate::dressing::DressedFamily;
use crate::error::{Error, Result};
use crate::operator::{fix_phase, inner, EigenSystem, Operator, Tolerances, Vector};
use crate::quantum::{q_point, shapley_of_operator};
use crate::subsets::LabelSubset;

/// Default absolute tie tolerance for location indices.
pub const DEFAULT_TIE_TOL: f64 = 1e-9;
/// Eigenvalues closer than this fraction of the spectral range count as
/// degenerate.
pub const DEGENERACY_REL_TOL: f64 = 1e-8;
const ENTROPY_CLAMP: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WeightKind {
    Q,
    S,
}

impl fmt::Display for WeightKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeightKind::Q => "Q",
            WeightKind::S => "S",
        })
    }
}

/// Labels in order of decreasing weight; tied labels share a group.
/// Labels inside a group are kept ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocationIndex {
    groups: Vec<Vec<usize>>,
}

impl LocationIndex {
    /// Groups are taken as given; each is sorted and empties are dropped.
    pub fn from_groups(groups: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = LabelSubset::EMPTY;
        let mut out = Vec::with_capacity(groups.len());
        for mut g in groups {
            g.sort_unstable();
            for &l in &g {
                if l == 0 || seen.contains(l) {
                    return Err(Error::InvalidArgument(format!(
                        "label {l} invalid or repeated in location index"
                    )));
                }
                seen = seen.with(l);
            }
            if !g.is_empty() {
                out.push(g);
            }
        }
        Ok(LocationIndex { groups: out })
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn labels(&self) -> LabelSubset {
        self.groups.iter().flatten().copied().collect()
    }

    pub fn flatten(&self) -> Vec<usize> {
        self.groups.iter().flatten().copied().collect()
    }

    /// Drops every label outside `keep`, and any group left empty.
    #[must_use]
    pub fn restrict(&self, keep: LabelSubset) -> Self {
        LocationIndex {
            groups: self
                .groups
                .iter()
                .map(|g| g.iter().copied().filter(|&l| keep.contains(l)).collect::<Vec<_>>())
                .filter(|g| !g.is_empty())
                .collect(),
        }
    }

    /// The leading `n` labels when none of them is tied with anything.
    pub fn strict_top(&self, n: usize) -> Option<Vec<usize>> {
        let mut out = Vec::with_capacity(n);
        for g in &self.groups {
            if out.len() == n {
                break;
            }
            if g.len() != 1 {
                return None;
            }
            out.push(g[0]);
        }
        (out.len() == n).then_some(out)
    }

    /// The groups that cover the first `n` positions.
    pub fn leading_groups(&self, n: usize) -> &[Vec<usize>] {
        let mut covered = 0;
        let mut k = 0;
        while k < self.groups.len() && covered < n {
            covered += self.groups[k].len();
            k += 1;
        }
        &self.groups[..k]
    }
}

impl fmt::Display for LocationIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, g) in self.groups.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            if g.len() == 1 {
                write!(f, "{}", g[0])?;
            } else {
                f.write_str("{")?;
                for (j, l) in g.iter().enumerate() {
                    if j > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{l}")?;
                }
                f.write_str("}")?;
            }
        }
        f.write_str(")")
    }
}

impl FromStr for LocationIndex {
    type Err = Error;

    /// Parses `(6,{3,9},4)`; whitespace is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::InvalidArgument(format!("location index {s:?}: {why}"));
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let body = t
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| bad("expected parentheses"))?;
        let mut groups = Vec::new();
        let mut rest = body;
        while !rest.is_empty() {
            let (group, tail) = if let Some(r) = rest.strip_prefix('{') {
                let end = r.find('}').ok_or_else(|| bad("unclosed brace"))?;
                (&r[..end], &r[end + 1..])
            } else {
                let end = rest.find(',').unwrap_or(rest.len());
                (&rest[..end], &rest[end..])
            };
            let labels = group
                .split(',')
                .map(|x| x.parse::<usize>().map_err(|_| bad("bad label")))
                .collect::<Result<Vec<_>>>()?;
            groups.push(labels);
            rest = match tail.strip_prefix(',') {
                Some(r) if !r.is_empty() => r,
                Some(_) => return Err(bad("trailing comma")),
                None if tail.is_empty() => tail,
                None => return Err(bad("expected comma")),
            };
        }
        LocationIndex::from_groups(groups)
    }
}

/// Orders labels `1..=len` by decreasing weight. Neighbours in that order
/// within `tie_tol` are merged, so a group is a chain of near ties.
pub fn location_index(weights: &[f64], tie_tol: f64) -> Result<LocationIndex> {
    if let Some(k) = weights.iter().position(|w| !w.is_finite()) {
        return Err(Error::InvalidArgument(format!("weight of label {} is not finite", k + 1)));
    }
    let mut order: Vec<usize> = (0..weights.len()).collect();
    // stable: equal weights stay in label order
    order.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut prev = f64::NAN;
    for k in order {
        match groups.last_mut() {
            Some(g) if prev - weights[k] <= tie_tol => g.push(k + 1),
            _ => groups.push(vec![k + 1]),
        }
        prev = weights[k];
    }
    LocationIndex::from_groups(groups)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comonotonicity {
    Comonotonic,
    NotComonotonic,
    /// A leading entry is tied in one of the two indices.
    Indeterminate,
}

/// `(n, ·)`-comonotonicity: both indices lead with the same `n` labels.
pub fn comonotonic(w1: &[f64], w2: &[f64], n: usize, tie_tol: f64) -> Result<Comonotonicity> {
    if w1.len() != w2.len() {
        return Err(Error::DimensionMismatch {
            expected: w1.len(),
            actual: w2.len(),
        });
    }
    if n == 0 || n > w1.len() {
        return Err(Error::InvalidArgument(format!("n = {n} outside 1..={}", w1.len())));
    }
    let a = location_index(w1, tie_tol)?;
    let b = location_index(w2, tie_tol)?;
    Ok(compare_tops(&a, &b, n))
}

fn compare_tops(a: &LocationIndex, b: &LocationIndex, n: usize) -> Comonotonicity {
    match (a.strict_top(n), b.strict_top(n)) {
        (Some(x), Some(y)) if x == y => Comonotonicity::Comonotonic,
        (Some(_), Some(_)) => Comonotonicity::NotComonotonic,
        _ => Comonotonicity::Indeterminate,
    }
}

/// Everything computed at one coupling constant.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    pub lambda: f64,
    pub eigenvalues: Vec<f64>,
    /// Phase-fixed ground vector.
    pub ground: Vector,
    pub ground_degeneracy: usize,
    /// `‖P_ground(λ) g(ref)‖`.
    pub overlap: f64,
    pub q: Vec<f64>,
    pub s: Vec<f64>,
    pub q_index: LocationIndex,
    pub s_index: LocationIndex,
}

impl SweepPoint {
    pub fn weights(&self, kind: WeightKind) -> &[f64] {
        match kind {
            WeightKind::Q => &self.q,
            WeightKind::S => &self.s,
        }
    }

    pub fn index(&self, kind: WeightKind) -> &LocationIndex {
        match kind {
            WeightKind::Q => &self.q_index,
            WeightKind::S => &self.s_index,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntervalRequest {
    pub n: usize,
    pub kind: WeightKind,
}

/// A maximal run of grid points `start..=end` sharing their leading groups.
#[derive(Clone, Debug, PartialEq)]
pub struct ComonotonicityInterval {
    pub n: usize,
    pub kind: WeightKind,
    pub start: usize,
    pub end: usize,
    pub lambda_start: f64,
    pub lambda_end: f64,
    /// Every point in the run has untied leading entries, so the run is a
    /// comonotonicity interval in the strict sense.
    pub strict: bool,
    pub leading: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub reference_lambda: f64,
    pub points: Vec<SweepPoint>,
    pub intervals: Vec<ComonotonicityInterval>,
}

/// Ground eigenvectors of the reference Hamiltonian.
#[derive(Clone, Debug)]
pub struct GroundReference {
    pub lambda: f64,
    pub ground: Vector,
}

fn eigensystem_at(theta: &Operator, lambda: f64) -> Result<EigenSystem> {
    if !theta.is_hermitian(Tolerances::default().hermiticity) {
        return Err(Error::ContractViolation(format!(
            "θ(λ) is not Hermitian at λ = {lambda} (defect {:.3e})",
            theta.hermiticity_defect()
        )));
    }
    theta.eigh()
}

fn ground_degeneracy(values: &[f64]) -> usize {
    let lo = values[0];
    let range = values[values.len() - 1] - lo;
    let thr = DEGENERACY_REL_TOL * range;
    values.iter().take_while(|&&v| v - lo <= thr).count()
}

fn phased(v: &[Complex64]) -> Vector {
    let mut g = v.to_vec();
    fix_phase(&mut g);
    g
}

impl GroundReference {
    pub fn new(theta: &Operator, lambda: f64) -> Result<Self> {
        let es = eigensystem_at(theta, lambda)?;
        Ok(GroundReference {
            lambda,
            ground: phased(&es.vectors[0]),
        })
    }
}

/// Evaluates one grid point.
pub fn sweep_point<S: StateSet + ?Sized>(
    family: &S,
    dressed: &DressedFamily,
    theta: &Operator,
    lambda: f64,
    reference: &GroundReference,
    tie_tol: f64,
) -> Result<SweepPoint> {
    let es = eigensystem_at(theta, lambda)?;
    let deg = ground_degeneracy(&es.values);
    let overlap = es.vectors[..deg]
        .iter()
        .map(|v| inner(v, &reference.ground).norm_sqr())
        .sum::<f64>()
        .sqrt()
        .min(1.0);
    let q = q_point(family, theta)?;
    let s = shapley_of_operator(dressed, theta)?.0;
    Ok(SweepPoint {
        lambda,
        q_index: location_index(&q, tie_tol)?,
        s_index: location_index(&s, tie_tol)?,
        ground: phased(&es.vectors[0]),
        ground_degeneracy: deg,
        eigenvalues: es.values,
        overlap,
        q,
        s,
    })
}

/// Maximal runs of consecutive points with equal leading groups.
pub fn comonotonicity_intervals(points: &[SweepPoint], requests: &[IntervalRequest]) -> Vec<ComonotonicityInterval> {
    let mut out = Vec::new();
    for req in requests {
        let mut start = 0;
        while start < points.len() {
            let lead = points[start].index(req.kind).leading_groups(req.n);
            let mut end = start;
            while end + 1 < points.len() && points[end + 1].index(req.kind).leading_groups(req.n) == lead {
                end += 1;
            }
            out.push(ComonotonicityInterval {
                n: req.n,
                kind: req.kind,
                start,
                end,
                lambda_start: points[start].lambda,
                lambda_end: points[end].lambda,
                strict: lead.len() == req.n.min(points[start].index(req.kind).len())
                    && lead.iter().all(|g| g.len() == 1),
                leading: lead.to_vec(),
            });
            start = end + 1;
        }
    }
    out
}

/// Sequential sweep over `grid`.
pub fn sweep<S: StateSet + ?Sized>(
    family: &S,
    dressed: &DressedFamily,
    rule: impl Fn(f64) -> Operator,
    grid: &[f64],
    reference_lambda: f64,
    tie_tol: f64,
    requests: &[IntervalRequest],
) -> Result<SweepResult> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("empty λ grid".into()));
    }
    let reference = GroundReference::new(&rule(reference_lambda), reference_lambda)?;
    let points = grid
        .iter()
        .map(|&l| sweep_point(family, dressed, &rule(l), l, &reference, tie_tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        reference_lambda,
        intervals: comonotonicity_intervals(&points, requests),
        points,
    })
}

/// `-Σ w ln w` with `0 ln 0 = 0`. Entries down to `-1e-12` are clamped.
pub fn wehrl_entropy(weights: &[f64]) -> Result<f64> {
    let mut acc = 0.0;
    for (k, &w) in weights.iter().enumerate() {
        if !(w >= -ENTROPY_CLAMP) {
            return Err(Error::ContractViolation(format!(
                "negative weight {w} at label {}",
                k + 1
            )));
        }
        if w > 0.0 {
            acc -= w * w.ln();
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherent::{CoherentFamily, FiducialVector};
    use crate::dressing::Construction;
    use crate::phase_space::PhaseSpace;
    use proptest::prelude::*;
    use std::string::ToString;
    use std::sync::OnceLock;

    fn fam() -> &'static CoherentFamily {
        static F: OnceLock<CoherentFamily> = OnceLock::new();
        F.get_or_init(|| {
            CoherentFamily::new(&PhaseSpace::new(3).unwrap(), FiducialVector::preset()).unwrap()
        })
    }

    fn dressed() -> &'static DressedFamily {
        static D: OnceLock<DressedFamily> = OnceLock::new();
        D.get_or_init(|| DressedFamily::coherent(fam(), Construction::Covariance).unwrap())
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn hamiltonian(l: f64) -> Operator {
        Operator::from_rows(&[
            &[c(11.0 + 2.0 * l, 0.0), c(1.0 - l, -(1.0 - 2.0 * l)), c(3.0 * l, 0.0)],
            &[c(1.0 - l, 1.0 - 2.0 * l), c(8.0 + 4.0 * l, 0.0), c(-l, 0.0)],
            &[c(3.0 * l, 0.0), c(-l, 0.0), c(13.0, 0.0)],
        ])
        .unwrap()
    }

    #[test]
    fn display_and_parse() {
        let li = LocationIndex::from_groups(vec![vec![6], vec![9, 3], vec![4]]).unwrap();
        assert_eq!(li.to_string(), "(6,{3,9},4)");
        let back: LocationIndex = "( 6, {9,3} ,4)".parse().unwrap();
        assert_eq!(back, li);
        for bad in ["6,3", "(6,,3)", "(6,{3,9)", "(6,6)", "(6,)", "(x)"] {
            assert!(bad.parse::<LocationIndex>().is_err(), "{bad}");
        }
        assert_eq!("()".parse::<LocationIndex>().unwrap().len(), 0);
    }

    #[test]
    fn indices_and_ties() {
        let li = location_index(&[0.1, 0.5, 0.1 + 1e-12, 0.3], 1e-9).unwrap();
        assert_eq!(li.to_string(), "(2,4,{1,3})");
        let li = location_index(&[1.0; 4], 1e-9).unwrap();
        assert_eq!(li.groups().len(), 1);
        // chains merge transitively
        let li = location_index(&[0.0, 0.6e-9, 1.2e-9], 1e-9).unwrap();
        assert_eq!(li.groups().len(), 1);
        assert!(location_index(&[f64::NAN], 1e-9).is_err());
        let li: LocationIndex = "(4,2,7,1,5,8,9,3,6)".parse().unwrap();
        let keep = LabelSubset::full(9).without(6);
        assert_eq!(li.restrict(keep).to_string(), "(4,2,7,1,5,8,9,3)");
        assert_eq!(li.strict_top(2), Some(vec![4, 2]));
    }

    #[test]
    fn theta1_q_index() {
        let x0 = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let t = Operator::rank_one_projector(&x0);
        let q = q_point(fam(), &t).unwrap();
        assert_eq!(location_index(&q, 1e-9).unwrap().to_string(), "({2,5,8},{3,6,9},{1,4,7})");
    }

    #[test]
    fn comonotonicity() {
        let a = [0.5, 0.2, 0.1];
        assert_eq!(comonotonic(&a, &a, 2, 1e-9).unwrap(), Comonotonicity::Comonotonic);
        assert_eq!(
            comonotonic(&a, &[0.2, 0.5, 0.1], 1, 1e-9).unwrap(),
            Comonotonicity::NotComonotonic
        );
        assert_eq!(
            comonotonic(&a, &[0.5, 0.5, 0.1], 1, 1e-9).unwrap(),
            Comonotonicity::Indeterminate
        );
        assert!(comonotonic(&a, &a, 0, 1e-9).is_err());
        let q = |l| q_point(fam(), &hamiltonian(l)).unwrap();
        assert_eq!(comonotonic(&q(-0.75), &q(-0.5), 1, 1e-9).unwrap(), Comonotonicity::Comonotonic);
        assert_eq!(comonotonic(&q(0.0), &q(0.25), 1, 1e-9).unwrap(), Comonotonicity::NotComonotonic);
    }

    #[test]
    fn hamiltonian_sweep() {
        let grid = [-0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75];
        let req = [IntervalRequest { n: 1, kind: WeightKind::Q }];
        let r = sweep(fam(), dressed(), hamiltonian, &grid, -0.75, 1e-9, &req).unwrap();
        let overlaps = [1.0, 0.998, 0.993, 0.978, 0.943, 0.838, 0.535];
        for (p, o) in r.points.iter().zip(overlaps) {
            assert!((p.overlap - o).abs() < 2e-3, "{} {}", p.lambda, p.overlap);
        }
        let h = &r.points[0].eigenvalues;
        for (a, b) in h.iter().zip([3.21, 10.02, 14.25]) {
            assert!((a - b).abs() < 1e-2);
        }
        assert_eq!(r.points[0].q_index.to_string(), "(4,2,7,1,5,8,9,3,6)");
        assert_eq!(r.points[6].s_index.to_string(), "(8,1,7,5,6,4,9,2,3)");
        // leading Q label: 4, 4, 7, 7, 1, 1, 8
        let runs: Vec<_> = r.intervals.iter().map(|i| (i.start, i.end, i.leading[0][0])).collect();
        assert_eq!(runs, vec![(0, 1, 4), (2, 3, 7), (4, 5, 1), (6, 6, 8)]);
        assert!(r.intervals.iter().all(|i| i.strict));
        let again = sweep(fam(), dressed(), hamiltonian, &grid, -0.75, 1e-9, &req).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn degenerate_ground_space_sweep() {
        let x0 = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let p = Operator::rank_one_projector(&x0);
        let rule = |l: f64| &Operator::identity(3) + &p.scale(l);
        let grid = [-0.5, 0.5];
        let req = [IntervalRequest { n: 3, kind: WeightKind::S }];
        let r = sweep(fam(), dressed(), rule, &grid, -0.5, 1e-9, &req).unwrap();
        assert_eq!(r.points[0].q_index.to_string(), "({1,4,7},{3,6,9},{2,5,8})");
        assert_eq!(r.points[1].q_index.to_string(), "({2,5,8},{3,6,9},{1,4,7})");
        assert_eq!(r.points[0].s_index.to_string(), "({1,4,7},{3,6,9},{2,5,8})");
        assert_eq!(r.points[1].s_index.to_string(), "({2,5,8},{3,6,9},{1,4,7})");
        assert_eq!(r.points[1].ground_degeneracy, 2);
        // the reference ground state |X;0⟩ is orthogonal to the λ > 0 ground space
        assert!(r.points[1].overlap < 1e-10);
        assert_eq!(r.intervals.len(), 2);
        assert!(!r.intervals[0].strict);
    }

    #[test]
    fn constant_rule() {
        let grid = [0.0, 1.0, 2.0];
        let req = [IntervalRequest { n: 1, kind: WeightKind::Q }];
        let r = sweep(fam(), dressed(), |_| Operator::identity(3), &grid, 0.0, 1e-9, &req).unwrap();
        assert!(r.points.iter().all(|p| (p.overlap - 1.0).abs() < 1e-12));
        assert_eq!(r.intervals.len(), 1);
        assert_eq!((r.intervals[0].start, r.intervals[0].end), (0, 2));
        assert!(sweep(fam(), dressed(), |_| Operator::identity(3), &[], 0.0, 1e-9, &req).is_err());
        let mut bad = Operator::identity(3);
        bad[(0, 2)] = c(1.0, 0.0);
        let e = sweep(fam(), dressed(), |_| bad.clone(), &grid, 0.0, 1e-9, &req).unwrap_err();
        assert!(e.to_string().contains("λ = 0"));
    }

    #[test]
    fn entropy() {
        assert!((wehrl_entropy(&[1.0 / 9.0; 9]).unwrap() - 9f64.ln()).abs() < 1e-12);
        assert_eq!(wehrl_entropy(&[1.0, 0.0, -1e-13]).unwrap(), 0.0);
        assert!(wehrl_entropy(&[1.0, -1e-6]).is_err());
        assert!(wehrl_entropy(&[f64::NAN]).is_err());
        let mut q = q_point(fam(), &Operator::rank_one_projector(fam().state(6))).unwrap();
        let e = wehrl_entropy(&q).unwrap();
        q.reverse();
        q.swap(0, 4);
        assert!((wehrl_entropy(&q).unwrap() - e).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn index_is_permutation_equivariant(w in proptest::collection::vec(-1.0f64..1.0, 9), seed in any::<u64>()) {
            use rand::{seq::SliceRandom, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut perm: Vec<usize> = (0..9).collect();
            perm.shuffle(&mut rng);
            // permuted[perm[k]] = w[k]: label k+1 moves to perm[k]+1
            let mut permuted = vec![0.0; 9];
            for k in 0..9 {
                permuted[perm[k]] = w[k];
            }
            let a = location_index(&w, 1e-9).unwrap();
            let b = location_index(&permuted, 1e-9).unwrap();
            let mapped = LocationIndex::from_groups(
                a.groups().iter().map(|g| g.iter().map(|l| perm[l - 1] + 1).collect()).collect(),
            ).unwrap();
            prop_assert_eq!(mapped, b);
        }

        #[test]
        fn comonotonicity_is_symmetric_and_transitive(
            a in proptest::collection::vec(0.0f64..1.0, 6),
            b in proptest::collection::vec(0.0f64..1.0, 6),
            c in proptest::collection::vec(0.0f64..1.0, 6),
            n in 1usize..4,
        ) {
            let ab = comonotonic(&a, &b, n, 1e-9).unwrap();
            prop_assert_eq!(ab, comonotonic(&b, &a, n, 1e-9).unwrap());
            let bc = comonotonic(&b, &c, n, 1e-9).unwrap();
            if ab == Comonotonicity::Comonotonic && bc == Comonotonicity::Comonotonic {
                prop_assert_eq!(comonotonic(&a, &c, n, 1e-9).unwrap(), Comonotonicity::Comonotonic);
            }
        }
    }

    #[test]
    fn tied_middle_vector_is_indeterminate() {
        // a leads with 1, c with 2, and b ties them: no chain through b
        let a = [0.9, 0.1, 0.0];
        let b = [0.5, 0.5, 0.0];
        let c = [0.1, 0.9, 0.0];
        assert_eq!(comonotonic(&a, &b, 1, 1e-9).unwrap(), Comonotonicity::Indeterminate);
        assert_eq!(comonotonic(&b, &c, 1, 1e-9).unwrap(), Comonotonicity::Indeterminate);
        assert_eq!(comonotonic(&a, &c, 1, 1e-9).unwrap(), Comonotonicity::NotComonotonic);
    }
}
