use serde::Serialize;

use super::combine::{Combined, FisherCombined};
use super::subsets::{label, members};
use crate::scores::ScoreFamily;

/// Statistics attached to one subset A.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsetStat {
    #[serde(skip)]
    pub mask: u32,
    /// One-based columns (non-serial) or lags + 1 (serial) in A.
    #[serde(rename = "lags_or_cols")]
    pub members: Vec<usize>,
    pub gamma: f64,
    pub r: f64,
    pub sqrt_n_r: f64,
}

impl SubsetStat {
    pub(crate) fn new(mask: u32, gamma: f64, r: f64, n: usize) -> Self {
        SubsetStat {
            mask,
            members: members(mask),
            gamma,
            r,
            sqrt_n_r: (n as f64).sqrt() * r,
        }
    }

    pub fn label(&self) -> String {
        label(self.mask)
    }
}

/// Outcome of a test of independence or randomness.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestReport {
    pub serial: bool,
    pub n: usize,
    pub d: usize,
    pub pmax: usize,
    #[serde(rename = "family")]
    pub families: Vec<ScoreFamily>,
    pub subsets: Vec<SubsetStat>,
    pub wald: Combined,
    pub fisher: FisherCombined,
    /// Score variance estimate per column (one entry in the serial case).
    #[serde(rename = "s2")]
    pub s2_per_column: Vec<f64>,
}

impl TestReport {
    /// Chi-square p-value of the Wald statistic.
    pub fn pvalue(&self) -> f64 {
        self.wald.pvalue
    }

    pub fn rs(&self) -> Vec<f64> {
        self.subsets.iter().map(|s| s.r).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}
