use rand::seq::SliceRandom;
use rayon::prelude::*;

use super::Prepared;
use crate::error::{Error, Result};
use crate::scores::ScoreFamily;
use crate::simulate::rng::stream_rng;

const MIN_PERMUTATIONS: usize = 99;

fn monte_carlo_pvalue(prep: &Prepared, permutations: usize, seed: u64) -> Result<f64> {
    if permutations < MIN_PERMUTATIONS {
        return Err(Error::Argument(format!(
            "need at least {MIN_PERMUTATIONS} permutations, got {permutations}"
        )));
    }
    let observed = prep.wald_of(&prep.base);
    // Relative slack so that ties with the observed value count as exceedances
    // despite summation-order rounding.
    let threshold = observed * (1.0 - 1e-12);
    let exceed: usize = (0..permutations)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream_rng(seed, b as u64);
            let mut cols = prep.base.clone();
            for c in &mut cols {
                c.shuffle(&mut rng);
            }
            usize::from(prep.wald_of(&cols) >= threshold)
        })
        .sum();
    Ok((1 + exceed) as f64 / (permutations + 1) as f64)
}

/// Permutation p-value of the Wald statistic for independence; each column is
/// permuted separately. Permutation `b` draws from stream `b` of `seed`.
pub fn permutation_pvalue_independence(
    columns: &[Vec<f64>],
    families: &[ScoreFamily],
    pmax: usize,
    permutations: usize,
    seed: u64,
) -> Result<f64> {
    let prep = Prepared::independence(columns, families, pmax)?;
    monte_carlo_pvalue(&prep, permutations, seed)
}

/// Permutation p-value of the serial Wald statistic; the whole series is permuted.
pub fn permutation_pvalue_randomness(
    series: &[f64],
    d: usize,
    family: ScoreFamily,
    pmax: usize,
    permutations: usize,
    seed: u64,
) -> Result<f64> {
    let prep = Prepared::randomness(series, d, family, pmax)?;
    monte_carlo_pvalue(&prep, permutations, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_given_seed() {
        let x: Vec<f64> = (0..50).map(|i| ((i * 17) % 23) as f64).collect();
        let y: Vec<f64> = (0..50).map(|i| ((i * 5) % 9) as f64).collect();
        let cols = vec![x, y];
        let a =
            permutation_pvalue_independence(&cols, &[ScoreFamily::Spearman], 2, 199, 7).unwrap();
        let b =
            permutation_pvalue_independence(&cols, &[ScoreFamily::Spearman], 2, 199, 7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn comonotone_columns_reject() {
        let x: Vec<f64> = (0..60).map(|i| (i as f64).sin() * 10.0).collect();
        let y: Vec<f64> = x.iter().map(|v| v * 2.0 + 1.0).collect();
        let p = permutation_pvalue_independence(&[x, y], &[ScoreFamily::VanDerWaerden], 2, 199, 1)
            .unwrap();
        assert!(p <= 3.0 / 200.0, "p = {p}");
    }

    #[test]
    fn too_few_permutations() {
        let s: Vec<f64> = (0..20).map(f64::from).collect();
        assert!(permutation_pvalue_randomness(&s, 2, ScoreFamily::Spearman, 2, 50, 0).is_err());
    }
}
