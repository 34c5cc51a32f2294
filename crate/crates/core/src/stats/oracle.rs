//! Direct evaluations of the Möbius process and of γ_A as an integral of it.
//! These are slow reference routes used to check the closed-form statistics.

use super::subsets::members;
use crate::dist::normal::normal_cdf;
use crate::empirical::{jump_kernel_bounds, EmpiricalMargin, SerialFrame};
use crate::error::{Error, Result};
use crate::scores::ScoreFamily;

/// Per-row `(F(x−), F(x))` columns of a multivariate sample.
pub fn nonserial_bounds(margins: &[EmpiricalMargin]) -> Vec<Vec<(f64, f64)>> {
    margins.iter().map(|m| m.obs_bounds().to_vec()).collect()
}

/// Lag columns of bounds for a series: column `lag` at row t is the bound of `Y_{t−lag}`.
pub fn serial_bounds(margin: &EmpiricalMargin, d: usize) -> Result<Vec<Vec<(f64, f64)>>> {
    let frame = SerialFrame::new(margin.n(), d)?;
    let b = margin.obs_bounds();
    Ok((0..d)
        .map(|lag| (0..frame.n()).map(|t| b[frame.index(t, lag)]).collect())
        .collect())
}

fn selected(columns: &[Vec<(f64, f64)>], mask: u32) -> Result<Vec<&[(f64, f64)]>> {
    let cols: Vec<&[(f64, f64)]> = members(mask)
        .into_iter()
        .map(|j| {
            columns
                .get(j - 1)
                .map(Vec::as_slice)
                .ok_or_else(|| Error::Argument(format!("subset refers to missing column {j}")))
        })
        .collect::<Result<_>>()?;
    let n = cols.first().map_or(0, |c| c.len());
    if n == 0 || cols.iter().any(|c| c.len() != n) {
        return Err(Error::Argument("bounds columns empty or misaligned".into()));
    }
    Ok(cols)
}

/// `n⁻¹ Σ_rows Π_{j∈A} [J_j(row, u_j) − u_j]`, the Möbius component of the
/// empirical multilinear copula process divided by √n.
pub fn mobius_process_eval(columns: &[Vec<(f64, f64)>], mask: u32, u: &[f64]) -> Result<f64> {
    if u.iter().any(|x| !(0.0..=1.0).contains(x)) {
        return Err(Error::Domain("evaluation point outside [0,1]^d".into()));
    }
    let cols = selected(columns, mask)?;
    let idx = members(mask);
    if idx.iter().any(|&j| j > u.len()) {
        return Err(Error::Argument(
            "evaluation point has too few coordinates".into(),
        ));
    }
    let n = cols[0].len();
    let total: f64 = (0..n)
        .map(|row| {
            cols.iter()
                .zip(&idx)
                .map(|(c, &j)| {
                    let (a, b) = c[row];
                    jump_kernel_bounds(a, b, u[j - 1]) - u[j - 1]
                })
                .product::<f64>()
        })
        .sum();
    Ok(total / n as f64)
}

/// Integration window in score units, the score cdf on it, and whether that
/// cdf is decreasing (Savage scores are −log u).
fn score_axis(family: ScoreFamily) -> (f64, f64, fn(f64) -> f64, bool) {
    match family {
        ScoreFamily::Spearman => (0.0, 1.0, |x| x, false),
        ScoreFamily::BlestSquared => (0.0, 1.0, |x| x.sqrt(), false),
        ScoreFamily::VanDerWaerden => (-8.5, 8.5, normal_cdf, false),
        ScoreFamily::Savage => (0.0, 40.0, |x| (-x).exp(), true),
    }
}

/// `∫ [J(x_i, K(x)) − K(x)] dx` for one observation, by the midpoint rule on a
/// grid that is uniform in score units.
fn integrated_deviation(a: f64, b: f64, family: ScoreFamily, grid: usize) -> f64 {
    let (lo, hi, cdf, decreasing) = score_axis(family);
    let h = (hi - lo) / grid as f64;
    let mut total = 0.0;
    for k in 0..grid {
        let u = cdf(lo + (k as f64 + 0.5) * h);
        total += jump_kernel_bounds(a, b, u) - u;
    }
    let integral = total * h;
    // Integrating over the score axis runs u from 1 down to 0 when the
    // score cdf is decreasing.
    if decreasing {
        -integral
    } else {
        integral
    }
}

/// γ_A computed as `(−1)^{|A|} ∫ n⁻¹ Σ_rows Π_{j∈A} [J_j − K_j] dx`.
///
/// The integrand is a sum over rows of products of one-dimensional factors, so
/// the |A|-dimensional integral is evaluated factor by factor.
pub fn gamma_via_integral(
    columns: &[Vec<(f64, f64)>],
    mask: u32,
    families: &[ScoreFamily],
    grid_size: usize,
) -> Result<f64> {
    if grid_size < 100 {
        return Err(Error::Argument(format!(
            "grid_size must be >= 100, got {grid_size}"
        )));
    }
    let cols = selected(columns, mask)?;
    let idx = members(mask);
    let fams: Vec<ScoreFamily> = idx
        .iter()
        .map(|&j| match families.len() {
            1 => Ok(families[0]),
            _ => families
                .get(j - 1)
                .copied()
                .ok_or_else(|| Error::Argument(format!("no score family for column {j}"))),
        })
        .collect::<Result<_>>()?;
    let n = cols[0].len();
    let mut cache = std::collections::HashMap::new();
    let mut total = 0.0;
    for row in 0..n {
        let mut prod = 1.0;
        for (c, fam) in cols.iter().zip(&fams) {
            let (a, b) = c[row];
            let key = (a.to_bits(), b.to_bits(), *fam);
            let v = *cache
                .entry(key)
                .or_insert_with(|| integrated_deviation(a, b, *fam, grid_size));
            prod *= v;
        }
        total += prod;
    }
    let sign = if idx.len().is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * total / n as f64)
}
