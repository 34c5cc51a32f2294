//! Monte Carlo power study of the serial tests.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::chi2_sf;
use crate::error::{Error, Result};
use crate::scores::ScoreFamily;
use crate::simulate::rng::{derive_seed, stream_rng};
use crate::simulate::{sample_series, CopulaModel, MarginSpec};
use crate::stats::Prepared;

/// The bundled desk-scale configuration.
pub const DESK_CONFIG: &str = include_str!("../configs/paper_tables_desk.cfg");

/// A chain model together with the token it was given as (e.g. `clayton:tau=0.1`).
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub label: String,
    pub model: CopulaModel,
}

impl ModelSpec {
    /// Parses `kind` or `kind:key=value`.
    pub fn parse(token: &str) -> Result<Self> {
        let token = token.trim();
        let (kind, strength) = match token.split_once(':') {
            Some((k, s)) => (k, Some(s)),
            None => (token, None),
        };
        Ok(ModelSpec {
            label: token.to_ascii_lowercase(),
            model: CopulaModel::parse(kind, strength)?,
        })
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    models: Vec<String>,
    margins: Vec<String>,
    n: Vec<usize>,
    replications: usize,
    #[serde(default = "default_alpha")]
    alpha: f64,
    #[serde(default = "default_d")]
    d: usize,
    #[serde(default = "default_families")]
    families: Vec<ScoreFamily>,
    pmax: Option<Vec<usize>>,
    #[serde(default)]
    seed: u64,
}

fn default_alpha() -> f64 {
    0.05
}

fn default_d() -> usize {
    5
}

fn default_families() -> Vec<ScoreFamily> {
    vec![
        ScoreFamily::Spearman,
        ScoreFamily::VanDerWaerden,
        ScoreFamily::Savage,
    ]
}

#[derive(Debug, Clone)]
pub struct PowerStudyConfig {
    pub models: Vec<ModelSpec>,
    pub margins: Vec<MarginSpec>,
    pub n_values: Vec<usize>,
    pub replications: usize,
    pub alpha: f64,
    pub d: usize,
    pub families: Vec<ScoreFamily>,
    pub pmax: Vec<usize>,
    pub seed: u64,
}

impl PowerStudyConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let cfg = PowerStudyConfig {
            models: raw
                .models
                .iter()
                .map(|m| ModelSpec::parse(m))
                .collect::<Result<_>>()
                .map_err(|e| Error::Config(e.to_string()))?,
            margins: raw
                .margins
                .iter()
                .map(|m| MarginSpec::parse(m))
                .collect::<Result<_>>()
                .map_err(|e| Error::Config(e.to_string()))?,
            n_values: raw.n,
            replications: raw.replications,
            alpha: raw.alpha,
            d: raw.d,
            families: raw.families,
            pmax: raw.pmax.unwrap_or_else(|| vec![2, raw.d]),
            seed: raw.seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        PowerStudyConfig::from_toml_str(&text)
    }

    pub fn desk() -> Self {
        PowerStudyConfig::from_toml_str(DESK_CONFIG).expect("bundled config is valid")
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.replications < 1 {
            return fail("replications must be >= 1".into());
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return fail(format!("alpha must be in (0,1), got {}", self.alpha));
        }
        if self.models.is_empty() || self.margins.is_empty() || self.n_values.is_empty() {
            return fail("models, margins and n must be non-empty".into());
        }
        if self.families.is_empty() || self.pmax.is_empty() {
            return fail("families and pmax must be non-empty".into());
        }
        if !(2..=crate::stats::MAX_DIM).contains(&self.d) {
            return fail(format!(
                "d must be in 2..={}, got {}",
                crate::stats::MAX_DIM,
                self.d
            ));
        }
        if let Some(p) = self.pmax.iter().find(|&&p| !(2..=self.d).contains(&p)) {
            return fail(format!("pmax {p} outside 2..={}", self.d));
        }
        if let Some(n) = self.n_values.iter().find(|&&n| n < 10 || n < self.d) {
            return fail(format!("series length {n} is too short"));
        }
        Ok(())
    }
}

/// Rejection rate of one test in one cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerRow {
    pub model: String,
    pub margin: String,
    pub n: usize,
    pub family: ScoreFamily,
    pub pmax: usize,
    pub rejections: usize,
    pub replications: usize,
    pub reject_pct: f64,
    /// Binomial standard error of `reject_pct`, in points.
    pub se_pct: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerTable {
    pub rows: Vec<PowerRow>,
}

impl PowerTable {
    pub fn find(
        &self,
        model: &str,
        margin: &str,
        n: usize,
        family: ScoreFamily,
        pmax: usize,
    ) -> Option<&PowerRow> {
        self.rows.iter().find(|r| {
            r.model == model
                && r.margin == margin
                && r.n == n
                && r.family == family
                && r.pmax == pmax
        })
    }

    /// Percentages to one decimal, followed by the counts and full-precision values.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "model,margin,n,family,pmax,reject_pct,se_pct,rejections,replications,reject_pct_full,se_pct_full\n",
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{:.1},{:.1},{},{},{},{}",
                r.model,
                r.margin,
                r.n,
                r.family,
                r.pmax,
                r.reject_pct,
                r.se_pct,
                r.rejections,
                r.replications,
                r.reject_pct,
                r.se_pct
            );
        }
        out
    }
}

/// Rejection flags of one simulated series, ordered by (family, pmax).
fn replicate(cfg: &PowerStudyConfig, series: &[f64]) -> Result<Vec<bool>> {
    let pmax_top = *cfg.pmax.iter().max().expect("validated");
    let mut flags = Vec::with_capacity(cfg.families.len() * cfg.pmax.len());
    for &family in &cfg.families {
        let prepared = match Prepared::randomness(series, cfg.d, family, pmax_top) {
            Ok(p) => p,
            // A constant series carries no evidence against randomness.
            Err(Error::Degenerate { .. }) => {
                flags.extend(std::iter::repeat_n(false, cfg.pmax.len()));
                continue;
            }
            Err(e) => return Err(e),
        };
        let stats = prepared.gammas_and_rs(&prepared.base);
        for &p in &cfg.pmax {
            let (mut ss, mut df) = (0.0, 0);
            for (&mask, &(_, r)) in prepared.subsets.masks().iter().zip(&stats) {
                if mask.count_ones() as usize <= p {
                    ss += r * r;
                    df += 1;
                }
            }
            flags.push(chi2_sf(series.len() as f64 * ss, df)? < cfg.alpha);
        }
    }
    Ok(flags)
}

/// Runs every (model, margin, n) cell.
///
/// Cell seeds are derived from the master seed and the cell label, and
/// replication k uses stream k of the cell seed, so the table does not depend
/// on the number of threads.
pub fn run_power_study(cfg: &PowerStudyConfig) -> Result<PowerTable> {
    cfg.validate()?;
    let mut rows = Vec::new();
    for spec in &cfg.models {
        for margin in &cfg.margins {
            for &n in &cfg.n_values {
                let cell = format!("{}|{}|{}", spec.label, margin, n);
                let cell_seed = derive_seed(cfg.seed, &cell);
                let flags: Vec<Vec<bool>> = (0..cfg.replications as u64)
                    .into_par_iter()
                    .map(|k| {
                        let mut rng = stream_rng(cell_seed, k);
                        let series = sample_series(&spec.model, margin, n, &mut rng)?;
                        replicate(cfg, &series)
                    })
                    .collect::<Result<_>>()
                    .map_err(|e| Error::Study {
                        cell: cell.clone(),
                        message: e.to_string(),
                    })?;
                let mut idx = 0;
                for &family in &cfg.families {
                    for &pmax in &cfg.pmax {
                        let rejections = flags.iter().filter(|f| f[idx]).count();
                        let big_n = cfg.replications as f64;
                        let rate = 100.0 * rejections as f64 / big_n;
                        rows.push(PowerRow {
                            model: spec.label.clone(),
                            margin: margin.token().to_string(),
                            n,
                            family,
                            pmax,
                            rejections,
                            replications: cfg.replications,
                            reject_pct: rate,
                            se_pct: (rate * (100.0 - rate) / big_n).sqrt(),
                        });
                        idx += 1;
                    }
                }
            }
        }
    }
    Ok(PowerTable { rows })
}
