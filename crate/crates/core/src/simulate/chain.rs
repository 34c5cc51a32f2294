use rand::Rng;

use super::copula::CopulaModel;
use super::margins::MarginSpec;
use super::rng::open_unit;
use crate::error::{Error, Result};

/// Half-width of the uniform perturbation added after each tent-map fold.
const TENT_JITTER: f64 = 1e-10;
const U_MIN: f64 = 1e-16;
const U_MAX: f64 = 1.0 - f64::EPSILON / 2.0;

/// A stationary sample U₁, …, Uₙ of the chain with transition copula `model`.
///
/// The first `order` values are iid uniform, which is the stationary law of
/// the starting block for every supported model.
pub fn sample_uniforms<R: Rng + ?Sized>(
    model: &CopulaModel,
    n: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if n < 10 {
        return Err(Error::Argument(format!(
            "series length must be >= 10, got {n}"
        )));
    }
    let order = model.order();
    let mut u: Vec<f64> = (0..order).map(|_| open_unit(rng)).collect();
    u.reserve(n - order);
    let mut history = vec![0.0; order];
    for t in order..n {
        for (lag, h) in history.iter_mut().enumerate() {
            *h = u[t - 1 - lag];
        }
        let w = open_unit(rng);
        let mut next = model.conditional_inverse(&history, w)?;
        if let CopulaModel::TentMap = model {
            // Exact doubling exhausts the mantissa within ~50 steps.
            next += (2.0 * w - 1.0) * TENT_JITTER;
        }
        u.push(next.clamp(U_MIN, U_MAX));
    }
    Ok(u)
}

/// A stationary series with copula chain `model` and marginal law `margin`.
pub fn sample_series<R: Rng + ?Sized>(
    model: &CopulaModel,
    margin: &MarginSpec,
    n: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let u = sample_uniforms(model, n, rng)?;
    Ok(u.into_iter()
        .map(|v| margin.quantile_unchecked(v))
        .collect())
}
