//! Rayon-parallel versions of the expensive loops. Results are assembled
//! in a fixed order, so they are bitwise equal to the serial ones.

use dressed_core::analysis::{comonotonicity_intervals, sweep_point, GroundReference, IntervalRequest, SweepResult};
use dressed_core::dressing::{dress_total_set, marginal_sums_branch, sigma_from_marginal_sums, Construction};
use dressed_core::{CoherentFamily, DressedFamily, Error, Operator, Result, StateSet, TotalSet};
use rayon::prelude::*;

/// `σ(i)` with the first-label branches of the subset walk in parallel.
pub fn sigma<S: StateSet + Sync + ?Sized>(set: &S, i: usize) -> Result<Operator> {
    let (d, n) = (set.dim(), set.len());
    if i == 0 || i > n {
        return Err(Error::LabelOutOfRange { label: i, max: n });
    }
    let max_card = d - 1;
    let parts = (1..=n)
        .into_par_iter()
        .filter(|&j| j != i)
        .map(|first| marginal_sums_branch(set, i, first, max_card))
        .collect::<Result<Vec<_>>>()?;
    let mut sums = vec![Operator::zeros(d); max_card + 1];
    sums[0] = Operator::rank_one_projector(set.state(i));
    for part in &parts {
        for (s, p) in sums.iter_mut().zip(part) {
            *s += p;
        }
    }
    sigma_from_marginal_sums(d, n, &sums)
}

pub fn dress_coherent(family: &CoherentFamily, construction: Construction) -> Result<DressedFamily> {
    match construction {
        Construction::Covariance => DressedFamily::from_covariance(family, &sigma(family, 1)?),
        Construction::Direct => {
            let sigmas = (1..=family.len())
                .into_par_iter()
                .map(|i| sigma(family, i))
                .collect::<Result<Vec<_>>>()?;
            DressedFamily::from_sigmas(family.dim(), sigmas, Construction::Direct)
        }
        Construction::TotalSet => DressedFamily::coherent(family, construction),
    }
}

pub fn dress_total(ts: &TotalSet) -> Result<DressedFamily> {
    if ts.len() < 64 {
        return dress_total_set(ts);
    }
    let sigmas = (1..=ts.len())
        .into_par_iter()
        .map(|i| sigma(ts, i))
        .collect::<Result<Vec<_>>>()?;
    DressedFamily::from_sigmas(ts.dim(), sigmas, Construction::TotalSet)
}

/// Grid points evaluated in parallel, assembled in grid order.
pub fn sweep<S, F>(
    family: &S,
    dressed: &DressedFamily,
    rule: F,
    grid: &[f64],
    reference_lambda: f64,
    tie_tol: f64,
    requests: &[IntervalRequest],
) -> Result<SweepResult>
where
    S: StateSet + Sync + ?Sized,
    F: Fn(f64) -> Operator + Sync,
{
    if grid.is_empty() {
        return Err(Error::InvalidArgument("empty λ grid".into()));
    }
    let reference = GroundReference::new(&rule(reference_lambda), reference_lambda)?;
    let points = grid
        .par_iter()
        .map(|&l| sweep_point(family, dressed, &rule(l), l, &reference, tie_tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        reference_lambda,
        intervals: comonotonicity_intervals(&points, requests),
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use dressed_core::dressing::sigma_subset;
    use dressed_core::{FiducialVector, PhaseSpace};

    #[test]
    fn parallel_equals_serial() {
        let f = CoherentFamily::new(&PhaseSpace::new(3).unwrap(), FiducialVector::preset()).unwrap();
        for i in [1, 5, 9] {
            assert_eq!(sigma(&f, i).unwrap(), sigma_subset(&f, i).unwrap());
        }
        let a = dress_coherent(&f, Construction::Direct).unwrap();
        let b = DressedFamily::coherent(&f, Construction::Direct).unwrap();
        assert_eq!(a, b);
        assert!(sigma(&f, 10).is_err());
    }
}
