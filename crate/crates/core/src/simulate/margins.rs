use std::fmt;
use std::sync::OnceLock;

use crate::dist::normal::{normal_cdf, normal_quantile_unchecked};
use crate::dist::{Atom, TheoreticalMargin};
use crate::error::{Error, Result};

/// Cumulative tables stop once the remaining tail is below this.
const TAIL: f64 = 1e-15;
/// Range of F6 values kept as explicit atoms (±7 standard deviations); the
/// remaining tails are narrower than the score routines can resolve as atoms.
const F6_ATOM_RANGE: i64 = 1400;
/// F7 atoms beyond this value are treated as continuous in `to_theoretical`.
const F7_ATOM_MAX: u64 = 100_000;

/// The seven margins of the power study, or a user-supplied distribution.
#[derive(Debug, Clone)]
pub enum MarginSpec {
    /// Bernoulli(0.8).
    F1,
    /// Poisson(6).
    F2,
    /// Negative binomial, `P(k) = C(k+r−1, k) p^r (1−p)^k` with r = 1.5, p = 0.2.
    F3,
    /// 0 with probability 0.1, otherwise Poisson(10).
    F4,
    /// 0 with probability 0.1, otherwise standard normal.
    F5,
    /// `floor(200 Z)` for standard normal Z.
    F6,
    /// Discrete Pareto, `F(k) = 1 − 1/(k+1)` on k ≥ 1.
    F7,
    Custom(TheoreticalMargin),
}

fn cumulative(first: f64, ratio: impl Fn(usize) -> f64) -> Vec<f64> {
    let mut cum = vec![first];
    let mut p = first;
    let mut k = 0;
    while 1.0 - cum[k] > TAIL && k < 10_000 {
        p *= ratio(k);
        let next = cum[k] + p;
        if next <= cum[k] {
            break;
        }
        cum.push(next);
        k += 1;
    }
    cum
}

fn poisson_table(lambda: f64) -> Vec<f64> {
    cumulative((-lambda).exp(), |k| lambda / (k + 1) as f64)
}

fn table(which: usize) -> &'static [f64] {
    static TABLES: [OnceLock<Vec<f64>>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    TABLES[which].get_or_init(|| match which {
        0 => poisson_table(6.0),
        1 => {
            let (r, p) = (1.5, 0.2);
            cumulative(f64::powf(p, r), |k| {
                (k as f64 + r) / (k + 1) as f64 * (1.0 - p)
            })
        }
        _ => poisson_table(10.0)
            .into_iter()
            .map(|c| 0.1 + 0.9 * c)
            .collect(),
    })
}

/// Smallest k with `cum[k] ≥ u`; the last entry absorbs the truncated tail.
fn invert(cum: &[f64], u: f64) -> f64 {
    cum.partition_point(|&c| c < u).min(cum.len() - 1) as f64
}

fn f5_quantile(u: f64) -> f64 {
    if u <= 0.45 {
        normal_quantile_unchecked(u / 0.9)
    } else if u <= 0.55 {
        0.0
    } else {
        normal_quantile_unchecked((u - 0.1) / 0.9)
    }
}

fn f6_quantile(u: f64) -> f64 {
    (200.0 * normal_quantile_unchecked(u)).floor()
}

fn f7_quantile(u: f64) -> f64 {
    let cdf = |k: f64| 1.0 - 1.0 / (k + 1.0);
    let mut k = (u / (1.0 - u)).ceil().max(1.0);
    while cdf(k) < u {
        k += 1.0;
    }
    while k > 1.0 && cdf(k - 1.0) >= u {
        k -= 1.0;
    }
    k
}

fn table_atoms(cum: &[f64]) -> Vec<Atom> {
    let mut lo = 0.0;
    cum.iter()
        .enumerate()
        .map(|(k, &c)| {
            let hi = if k + 1 == cum.len() { 1.0 } else { c };
            let a = Atom {
                value: k as f64,
                lo,
                hi,
            };
            lo = hi;
            a
        })
        .collect()
}

impl MarginSpec {
    pub const ALL: [MarginSpec; 7] = [
        MarginSpec::F1,
        MarginSpec::F2,
        MarginSpec::F3,
        MarginSpec::F4,
        MarginSpec::F5,
        MarginSpec::F6,
        MarginSpec::F7,
    ];

    pub fn parse(token: &str) -> Result<Self> {
        match token.trim().to_ascii_lowercase().as_str() {
            "f1" => Ok(MarginSpec::F1),
            "f2" => Ok(MarginSpec::F2),
            "f3" => Ok(MarginSpec::F3),
            "f4" => Ok(MarginSpec::F4),
            "f5" => Ok(MarginSpec::F5),
            "f6" => Ok(MarginSpec::F6),
            "f7" => Ok(MarginSpec::F7),
            other => Err(Error::Input(format!(
                "unknown margin '{other}' (expected f1..f7)"
            ))),
        }
    }

    pub fn token(&self) -> &'static str {
        match self {
            MarginSpec::F1 => "f1",
            MarginSpec::F2 => "f2",
            MarginSpec::F3 => "f3",
            MarginSpec::F4 => "f4",
            MarginSpec::F5 => "f5",
            MarginSpec::F6 => "f6",
            MarginSpec::F7 => "f7",
            MarginSpec::Custom(_) => "custom",
        }
    }

    /// Generalized inverse `inf{x : F(x) ≥ u}` for u in (0,1).
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::Domain(format!(
                "margin quantile needs 0 < u < 1, got {u}"
            )));
        }
        Ok(self.quantile_unchecked(u))
    }

    pub(crate) fn quantile_unchecked(&self, u: f64) -> f64 {
        match self {
            MarginSpec::F1 => {
                if u <= 0.2 {
                    0.0
                } else {
                    1.0
                }
            }
            MarginSpec::F2 => invert(table(0), u),
            MarginSpec::F3 => invert(table(1), u),
            MarginSpec::F4 => invert(table(2), u),
            MarginSpec::F5 => f5_quantile(u),
            MarginSpec::F6 => f6_quantile(u),
            MarginSpec::F7 => f7_quantile(u),
            MarginSpec::Custom(m) => m.quantile(u),
        }
    }

    /// Atom-plus-quantile description used by the efficiency calculators.
    ///
    /// Infinite-support margins are truncated where the neglected mass is
    /// far below any reported precision.
    pub fn to_theoretical(&self) -> Result<TheoreticalMargin> {
        match self {
            MarginSpec::F1 => TheoreticalMargin::bernoulli(0.8),
            MarginSpec::F2 => {
                TheoreticalMargin::new(table_atoms(table(0)), |u| invert(table(0), u))
            }
            MarginSpec::F3 => {
                TheoreticalMargin::new(table_atoms(table(1)), |u| invert(table(1), u))
            }
            MarginSpec::F4 => {
                TheoreticalMargin::new(table_atoms(table(2)), |u| invert(table(2), u))
            }
            MarginSpec::F5 => TheoreticalMargin::new(
                vec![Atom {
                    value: 0.0,
                    lo: 0.45,
                    hi: 0.55,
                }],
                f5_quantile,
            ),
            MarginSpec::F6 => {
                let atoms = (-F6_ATOM_RANGE..F6_ATOM_RANGE)
                    .map(|k| Atom {
                        value: k as f64,
                        lo: normal_cdf(k as f64 / 200.0),
                        hi: normal_cdf((k + 1) as f64 / 200.0),
                    })
                    .filter(|a| a.hi > a.lo)
                    .collect();
                TheoreticalMargin::new(atoms, f6_quantile)
            }
            MarginSpec::F7 => {
                let atoms = (1..=F7_ATOM_MAX)
                    .map(|k| Atom {
                        value: k as f64,
                        lo: 1.0 - 1.0 / k as f64,
                        hi: 1.0 - 1.0 / (k + 1) as f64,
                    })
                    .collect();
                TheoreticalMargin::new(atoms, f7_quantile)
            }
            MarginSpec::Custom(m) => Ok(m.clone()),
        }
    }
}

impl fmt::Display for MarginSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}
