//! Combinations of standardized subset statistics.

use serde::Serialize;

use crate::dist::normal::{chi2_sf, normal_sf};
use crate::error::{Error, Result};

/// Smallest per-subset p-value entering the Fisher combination.
pub const FISHER_PVALUE_FLOOR: f64 = 1e-300;

/// A combined statistic with its chi-square reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Combined {
    pub stat: f64,
    pub df: usize,
    pub pvalue: f64,
}

/// Fisher combination; `clamped` is set when some per-subset p-value hit the floor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FisherCombined {
    pub stat: f64,
    pub df: usize,
    pub pvalue: f64,
    pub clamped: bool,
}

/// Wald statistic `n Σ r_A²` with one degree of freedom per subset.
pub fn wald_statistic(rs: &[f64], n: usize) -> Result<(f64, usize)> {
    if rs.is_empty() {
        return Err(Error::Argument("no subset statistics to combine".into()));
    }
    let stat = n as f64 * rs.iter().map(|r| r * r).sum::<f64>();
    Ok((stat, rs.len()))
}

pub(crate) fn wald_combined(rs: &[f64], n: usize) -> Result<Combined> {
    let (stat, df) = wald_statistic(rs, n)?;
    Ok(Combined {
        stat,
        df,
        pvalue: chi2_sf(stat, df)?,
    })
}

/// Fisher-type combination `−2 Σ log{2 − 2Φ(√n |r_A|)}`, referred to a
/// chi-square with twice as many degrees of freedom as subsets.
pub fn fisher_combination(rs: &[f64], n: usize) -> Result<FisherCombined> {
    if rs.is_empty() {
        return Err(Error::Argument("no subset statistics to combine".into()));
    }
    let sqrt_n = (n as f64).sqrt();
    let mut clamped = false;
    let mut stat = 0.0;
    for r in rs {
        let mut p = 2.0 * normal_sf(sqrt_n * r.abs());
        if p < FISHER_PVALUE_FLOOR {
            p = FISHER_PVALUE_FLOOR;
            clamped = true;
        }
        stat -= 2.0 * p.min(1.0).ln();
    }
    let df = 2 * rs.len();
    Ok(FisherCombined {
        stat,
        df,
        pvalue: chi2_sf(stat, df)?,
        clamped,
    })
}
