//! Score families and the tie-aware score function.
//!
//! A score family is a distribution K with finite variance; observations are
//! scored through its quantile K⁻¹. When the empirical cdf jumps at a point x,
//! the score is the average of K⁻¹ over the probability interval
//! `(G(x−), G(x)]`, obtained from the integrated quantile
//! `L_K(u) = ∫₀ᵘ K⁻¹(v) dv`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dist::normal::{normal_pdf, normal_quantile_unchecked};
use crate::error::{Error, Result};

/// Below this interval width the ratio form of the averaged score loses
/// precision, and the quantile at the midpoint is used instead.
const RATIO_MIN_WIDTH: f64 = 1e-14;

/// A score distribution K.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScoreFamily {
    /// Uniform scores, K⁻¹(u) = u.
    Spearman,
    /// Normal scores, K⁻¹(u) = Φ⁻¹(u).
    #[serde(rename = "vdw")]
    VanDerWaerden,
    /// Savage (exponential) scores, K⁻¹(u) = −log u.
    Savage,
    /// Squared uniform scores, K⁻¹(u) = u² (modified Blest).
    #[serde(rename = "blest")]
    BlestSquared,
}

impl ScoreFamily {
    pub const ALL: [ScoreFamily; 4] = [
        ScoreFamily::Spearman,
        ScoreFamily::VanDerWaerden,
        ScoreFamily::Savage,
        ScoreFamily::BlestSquared,
    ];

    /// Mean μ of K.
    pub fn mean(self) -> f64 {
        match self {
            ScoreFamily::Spearman => 0.5,
            ScoreFamily::VanDerWaerden => 0.0,
            ScoreFamily::Savage => 1.0,
            ScoreFamily::BlestSquared => 1.0 / 3.0,
        }
    }

    /// Variance σ² of K.
    pub fn variance(self) -> f64 {
        match self {
            ScoreFamily::Spearman => 1.0 / 12.0,
            ScoreFamily::VanDerWaerden => 1.0,
            ScoreFamily::Savage => 1.0,
            ScoreFamily::BlestSquared => 4.0 / 45.0,
        }
    }

    /// Short token used on the command line and in reports.
    pub fn token(self) -> &'static str {
        match self {
            ScoreFamily::Spearman => "spearman",
            ScoreFamily::VanDerWaerden => "vdw",
            ScoreFamily::Savage => "savage",
            ScoreFamily::BlestSquared => "blest",
        }
    }

    fn is_bounded(self) -> bool {
        matches!(self, ScoreFamily::Spearman | ScoreFamily::BlestSquared)
    }

    /// The score quantile K⁻¹(u).
    ///
    /// Normal and Savage scores are unbounded at the endpoints and need
    /// `0 < u < 1`; the bounded families accept the closed interval.
    pub fn quantile(self, u: f64) -> Result<f64> {
        let in_range = if self.is_bounded() {
            (0.0..=1.0).contains(&u)
        } else {
            u > 0.0 && u < 1.0
        };
        if !in_range {
            return Err(Error::Domain(format!(
                "{} quantile is undefined at u = {u}",
                self.token()
            )));
        }
        Ok(self.quantile_unchecked(u))
    }

    pub(crate) fn quantile_unchecked(self, u: f64) -> f64 {
        match self {
            ScoreFamily::Spearman => u,
            ScoreFamily::VanDerWaerden => normal_quantile_unchecked(u),
            ScoreFamily::Savage => -u.ln(),
            ScoreFamily::BlestSquared => u * u,
        }
    }

    /// The integrated quantile L_K(u) = ∫₀ᵘ K⁻¹(v) dv on `[0, 1]`.
    pub fn lintegral(self, u: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::Domain(format!(
                "lintegral needs u in [0,1], got {u}"
            )));
        }
        Ok(self.lintegral_unchecked(u))
    }

    fn lintegral_unchecked(self, u: f64) -> f64 {
        match self {
            ScoreFamily::Spearman => 0.5 * u * u,
            ScoreFamily::VanDerWaerden => {
                if u == 0.0 || u == 1.0 {
                    0.0
                } else {
                    -normal_pdf(normal_quantile_unchecked(u))
                }
            }
            ScoreFamily::Savage => {
                if u == 0.0 {
                    0.0
                } else {
                    u - u * u.ln()
                }
            }
            ScoreFamily::BlestSquared => u * u * u / 3.0,
        }
    }

    /// Tie-aware score for a point whose cdf jumps from `a = G(x−)` to `b = G(x)`.
    ///
    /// Equals K⁻¹(a) at a continuity point (`a == b`) and
    /// `(L_K(b) − L_K(a)) / (b − a)` otherwise.
    pub fn score_at(self, a: f64, b: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
            return Err(Error::Domain(format!(
                "score bounds ({a}, {b}) outside [0,1]"
            )));
        }
        if a > b {
            return Err(Error::Argument(format!(
                "score bounds out of order: {a} > {b}"
            )));
        }
        let width = b - a;
        if width > RATIO_MIN_WIDTH {
            return Ok(self.score_unchecked(a, b));
        }
        self.quantile(0.5 * (a + b))
    }

    /// `score_at` for bounds already known to satisfy `0 ≤ a < b ≤ 1`, `b − a ≥ 1/n`.
    pub(crate) fn score_unchecked(self, a: f64, b: f64) -> f64 {
        match self {
            // Closed forms avoid the cancellation in the ratio.
            ScoreFamily::Spearman => 0.5 * (a + b),
            ScoreFamily::BlestSquared => (a * a + a * b + b * b) / 3.0,
            _ => (self.lintegral_unchecked(b) - self.lintegral_unchecked(a)) / (b - a),
        }
    }

    /// Suggested score for a dependence family, following its local-power ranking:
    /// normal scores for the Gaussian copula, uniform scores for FGM and Frank,
    /// Savage scores for Clayton.
    pub fn recommend_for(copula: &str) -> Option<ScoreFamily> {
        match copula.to_ascii_lowercase().as_str() {
            "gaussian" | "normal" => Some(ScoreFamily::VanDerWaerden),
            "fgm" | "frank" => Some(ScoreFamily::Spearman),
            "clayton" => Some(ScoreFamily::Savage),
            _ => None,
        }
    }
}

impl fmt::Display for ScoreFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for ScoreFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "spearman" => Ok(ScoreFamily::Spearman),
            "vdw" | "vanderwaerden" | "van-der-waerden" => Ok(ScoreFamily::VanDerWaerden),
            "savage" => Ok(ScoreFamily::Savage),
            "blest" => Ok(ScoreFamily::BlestSquared),
            other => Err(Error::Input(format!(
                "unknown score family '{other}' (expected spearman|vdw|savage|blest)"
            ))),
        }
    }
}
