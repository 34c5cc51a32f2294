//! Möbius subset statistics and the tests built on them.
//!
//! For every subset A the statistic γ_A is the average over rows of the
//! product of centered tie-aware scores of the members of A. Standardizing
//! by the score standard deviations gives r_A, and `√n r_A` is
//! asymptotically standard normal and independent across subsets under the
//! null hypothesis.

mod combine;
mod dependogram;
mod oracle;
mod permutation;
mod report;
mod subsets;

pub use combine::{
    fisher_combination, wald_statistic, Combined, FisherCombined, FISHER_PVALUE_FLOOR,
};
pub use dependogram::{dependogram, Correction, DependogramPoint};
pub use oracle::{gamma_via_integral, mobius_process_eval, nonserial_bounds, serial_bounds};
pub use permutation::{permutation_pvalue_independence, permutation_pvalue_randomness};
pub use report::{SubsetStat, TestReport};
pub use subsets::{label, members, SubsetFamily, MAX_DIM};

use crate::empirical::{EmpiricalMargin, SerialFrame};
use crate::error::{Error, Result};
use crate::scores::ScoreFamily;

/// `n⁻¹ Σ_rows Π_{j∈A} columns[j][row]` over centered score columns aligned by row.
pub fn gamma_stat(columns: &[&[f64]], mask: u32) -> Result<f64> {
    let selected: Vec<&[f64]> = subsets::members(mask)
        .into_iter()
        .map(|j| {
            columns
                .get(j - 1)
                .copied()
                .ok_or_else(|| Error::Argument(format!("subset refers to missing column {j}")))
        })
        .collect::<Result<_>>()?;
    if selected.len() < 2 {
        return Err(Error::Argument(
            "subset must have at least 2 members".into(),
        ));
    }
    let n = selected[0].len();
    if selected.iter().any(|c| c.len() != n) {
        return Err(Error::Argument("columns have different lengths".into()));
    }
    if n == 0 {
        return Err(Error::Argument("empty columns".into()));
    }
    Ok(product_mean(&selected, n))
}

fn product_mean(selected: &[&[f64]], n: usize) -> f64 {
    let mut total = 0.0;
    for row in 0..n {
        total += selected.iter().map(|c| c[row]).product::<f64>();
    }
    total / n as f64
}

/// `r_A = γ_A / Π_{j∈A} √s²_j`. Zero variance in a member column is an error.
pub fn standardized(gamma: f64, s2_per_column: &[f64], mask: u32) -> Result<f64> {
    let mut denom = 1.0;
    for j in subsets::members(mask) {
        let s2 = *s2_per_column
            .get(j - 1)
            .ok_or_else(|| Error::Argument(format!("no variance for column {j}")))?;
        if s2 <= 0.0 {
            return Err(Error::Degenerate { column: j });
        }
        denom *= s2.sqrt();
    }
    Ok(gamma / denom)
}

/// Centered score columns ready for subset statistics.
#[derive(Debug, Clone)]
pub(crate) struct Prepared {
    pub serial: bool,
    pub n: usize,
    pub families: Vec<ScoreFamily>,
    /// Non-serial: one column per variable. Serial: the single scored series.
    pub base: Vec<Vec<f64>>,
    /// Variance per subset coordinate (the serial value repeated d times).
    pub s2: Vec<f64>,
    pub subsets: SubsetFamily,
}

impl Prepared {
    pub fn independence(
        columns: &[Vec<f64>],
        families: &[ScoreFamily],
        pmax: usize,
    ) -> Result<Self> {
        let d = columns.len();
        if d < 2 {
            return Err(Error::Input(format!("need at least 2 columns, got {d}")));
        }
        let families = broadcast_families(families, d)?;
        let n = columns[0].len();
        if columns.iter().any(|c| c.len() != n) {
            return Err(Error::Input("columns have different lengths".into()));
        }
        if n < 2 {
            return Err(Error::Input(format!(
                "need at least 2 observations, got {n}"
            )));
        }
        let subsets = SubsetFamily::new(d, pmax, false)?;
        let mut base = Vec::with_capacity(d);
        let mut s2 = Vec::with_capacity(d);
        for (j, (col, fam)) in columns.iter().zip(&families).enumerate() {
            let margin = EmpiricalMargin::new(col)
                .map_err(|e| Error::Input(format!("column {}: {e}", j + 1)))?;
            if margin.is_constant() {
                return Err(Error::Degenerate { column: j + 1 });
            }
            let scored = margin.score(*fam)?;
            s2.push(scored.s2);
            base.push(scored.centered);
        }
        Ok(Prepared {
            serial: false,
            n,
            families,
            base,
            s2,
            subsets,
        })
    }

    pub fn randomness(series: &[f64], d: usize, family: ScoreFamily, pmax: usize) -> Result<Self> {
        let n = series.len();
        SerialFrame::new(n, d)?;
        let subsets = SubsetFamily::new(d, pmax, true)?;
        let margin = EmpiricalMargin::new(series)?;
        if margin.is_constant() {
            return Err(Error::Degenerate { column: 1 });
        }
        let scored = margin.score(family)?;
        Ok(Prepared {
            serial: true,
            n,
            families: vec![family],
            base: vec![scored.centered],
            s2: vec![scored.s2; d],
            subsets,
        })
    }

    pub fn d(&self) -> usize {
        self.subsets.d()
    }

    /// Columns indexed by subset coordinate: the variables themselves, or the
    /// circular lags of the series.
    pub fn coordinate_columns(&self, base: &[Vec<f64>]) -> Vec<Vec<f64>> {
        if self.serial {
            lag_columns(&base[0], self.d())
        } else {
            base.to_vec()
        }
    }

    /// Per-subset (γ, r) for the given base columns (possibly permuted).
    pub fn gammas_and_rs(&self, base: &[Vec<f64>]) -> Vec<(f64, f64)> {
        let cols = self.coordinate_columns(base);
        self.subsets
            .masks()
            .iter()
            .map(|&mask| {
                let selected: Vec<&[f64]> = subsets::members(mask)
                    .into_iter()
                    .map(|j| cols[j - 1].as_slice())
                    .collect();
                let gamma = product_mean(&selected, self.n);
                let denom: f64 = subsets::members(mask)
                    .into_iter()
                    .map(|j| self.s2[j - 1].sqrt())
                    .product();
                (gamma, gamma / denom)
            })
            .collect()
    }

    pub fn wald_of(&self, base: &[Vec<f64>]) -> f64 {
        let ss: f64 = self.gammas_and_rs(base).iter().map(|(_, r)| r * r).sum();
        self.n as f64 * ss
    }

    pub fn report(&self) -> Result<TestReport> {
        let stats = self.gammas_and_rs(&self.base);
        let subsets: Vec<SubsetStat> = self
            .subsets
            .masks()
            .iter()
            .zip(&stats)
            .map(|(&mask, &(gamma, r))| SubsetStat::new(mask, gamma, r, self.n))
            .collect();
        let rs: Vec<f64> = stats.iter().map(|s| s.1).collect();
        let s2_per_column = if self.serial {
            vec![self.s2[0]]
        } else {
            self.s2.clone()
        };
        Ok(TestReport {
            serial: self.serial,
            n: self.n,
            d: self.d(),
            pmax: self.subsets.pmax(),
            families: self.families.clone(),
            subsets,
            wald: combine::wald_combined(&rs, self.n)?,
            fisher: fisher_combination(&rs, self.n)?,
            s2_per_column,
        })
    }
}

fn broadcast_families(families: &[ScoreFamily], d: usize) -> Result<Vec<ScoreFamily>> {
    match families.len() {
        1 => Ok(vec![families[0]; d]),
        k if k == d => Ok(families.to_vec()),
        k => Err(Error::Argument(format!(
            "expected 1 or {d} score families, got {k}"
        ))),
    }
}

/// Circular lag columns: column `lag` holds `c[(t − lag) mod n]` at row t.
pub(crate) fn lag_columns(centered: &[f64], d: usize) -> Vec<Vec<f64>> {
    let n = centered.len();
    (0..d)
        .map(|lag| (0..n).map(|t| centered[(t + n - lag) % n]).collect())
        .collect()
}

/// Test of mutual independence of the columns of an iid sample.
///
/// `columns[j]` holds the n observations of variable j + 1. `families` holds
/// either one score family per column or a single family used for all.
pub fn test_independence(
    columns: &[Vec<f64>],
    families: &[ScoreFamily],
    pmax: usize,
) -> Result<TestReport> {
    Prepared::independence(columns, families, pmax)?.report()
}

/// Test of randomness of a stationary series through its `d` circular lags.
pub fn test_randomness(
    series: &[f64],
    d: usize,
    family: ScoreFamily,
    pmax: usize,
) -> Result<TestReport> {
    Prepared::randomness(series, d, family, pmax)?.report()
}
