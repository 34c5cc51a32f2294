use serde::Serialize;

use super::report::TestReport;
use crate::dist::normal::normal_quantile;
use crate::error::{Error, Result};

/// Multiple-testing adjustment for the dependogram critical line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Correction {
    #[default]
    Bonferroni,
    Sidak,
}

/// One bar of a dependogram.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DependogramPoint {
    pub label: String,
    pub members: Vec<usize>,
    pub sqrt_n_r: f64,
    pub critical: f64,
    pub exceeds: bool,
}

/// `√n r_A` for every subset against a two-sided critical value adjusted
/// over the m subsets of the report.
pub fn dependogram(
    report: &TestReport,
    alpha: f64,
    correction: Correction,
) -> Result<Vec<DependogramPoint>> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Argument(format!(
            "alpha must be in (0,1), got {alpha}"
        )));
    }
    let m = report.subsets.len().max(1) as f64;
    let per_test = match correction {
        Correction::Bonferroni => alpha / m,
        Correction::Sidak => 1.0 - (1.0 - alpha).powf(1.0 / m),
    };
    let critical = normal_quantile(1.0 - per_test / 2.0)?;
    Ok(report
        .subsets
        .iter()
        .map(|s| DependogramPoint {
            label: s.label(),
            members: s.members.clone(),
            sqrt_n_r: s.sqrt_n_r,
            critical,
            exceeds: s.sqrt_n_r.abs() > critical,
        })
        .collect())
}
