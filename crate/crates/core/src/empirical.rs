//! Empirical margins with left limits, per-observation scores and circular serial frames.

use crate::error::{Error, Result};
use crate::scores::ScoreFamily;

/// Empirical cdf of one sample, keeping the left limit and jump at every observation.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMargin {
    distinct_values: Vec<f64>,
    cum_probs: Vec<f64>,
    obs_bounds: Vec<(f64, f64)>,
}

impl EmpiricalMargin {
    /// Groups the sample by exact value (with −0 folded onto +0) and records
    /// `(F_n(x−), F_n(x))` for every observation.
    pub fn new(sample: &[f64]) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::Input("empty sample".into()));
        }
        if let Some(i) = sample.iter().position(|x| x.is_nan()) {
            return Err(Error::Input(format!("NaN at position {i}")));
        }
        let n = sample.len();
        let canon = |x: f64| if x == 0.0 { 0.0 } else { x };
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| canon(sample[i]).total_cmp(&canon(sample[j])));

        let nf = n as f64;
        let mut distinct_values = Vec::new();
        let mut cum_probs = Vec::new();
        let mut obs_bounds = vec![(0.0, 0.0); n];
        let mut start = 0;
        while start < n {
            let value = canon(sample[order[start]]);
            let mut end = start + 1;
            while end < n && canon(sample[order[end]]) == value {
                end += 1;
            }
            let bounds = (start as f64 / nf, end as f64 / nf);
            for &i in &order[start..end] {
                obs_bounds[i] = bounds;
            }
            distinct_values.push(value);
            cum_probs.push(bounds.1);
            start = end;
        }
        Ok(EmpiricalMargin {
            distinct_values,
            cum_probs,
            obs_bounds,
        })
    }

    pub fn n(&self) -> usize {
        self.obs_bounds.len()
    }

    /// Ascending distinct values.
    pub fn distinct_values(&self) -> &[f64] {
        &self.distinct_values
    }

    /// F_n at each distinct value; the last entry is exactly 1.
    pub fn cum_probs(&self) -> &[f64] {
        &self.cum_probs
    }

    /// `(F_n(X_i−), F_n(X_i))` for each observation in input order.
    pub fn obs_bounds(&self) -> &[(f64, f64)] {
        &self.obs_bounds
    }

    /// True when every observation carries the same value.
    pub fn is_constant(&self) -> bool {
        self.distinct_values.len() == 1
    }

    /// Multilinear kernel of observation `i` at level `u`: 0 below the jump,
    /// 1 above it and linear across it.
    pub fn jump_kernel(&self, i: usize, u: f64) -> Result<f64> {
        let &(a, b) = self
            .obs_bounds
            .get(i)
            .ok_or_else(|| Error::Argument(format!("observation {i} out of range")))?;
        Ok(jump_kernel_bounds(a, b, u))
    }

    /// Scores every observation with `family` and estimates the score variance.
    pub fn score(&self, family: ScoreFamily) -> Result<ScoredColumn> {
        if self.n() < 2 {
            return Err(Error::Argument(
                "scoring needs at least 2 observations".into(),
            ));
        }
        let mu = family.mean();
        let values: Vec<f64> = self
            .obs_bounds
            .iter()
            .map(|&(a, b)| family.score_unchecked(a, b))
            .collect();
        let centered: Vec<f64> = values.iter().map(|v| v - mu).collect();
        let s2 = centered.iter().map(|c| c * c).sum::<f64>() / self.n() as f64;
        Ok(ScoredColumn {
            family,
            values,
            centered,
            s2,
        })
    }
}

pub(crate) fn jump_kernel_bounds(a: f64, b: f64, u: f64) -> f64 {
    if u <= a {
        0.0
    } else if u >= b {
        1.0
    } else {
        (u - a) / (b - a)
    }
}

/// Tie-aware scores of one sample against its own empirical margin.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredColumn {
    pub family: ScoreFamily,
    /// Score of each observation, in input order.
    pub values: Vec<f64>,
    /// `values − μ`.
    pub centered: Vec<f64>,
    /// Mean of `centered²`.
    pub s2: f64,
}

impl ScoredColumn {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Index table of the lagged vectors `(Y_t, Y_{t−1}, …, Y_{t+1−d})` of a
/// circularly extended series (`Y_{t+n} = Y_t`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SerialFrame {
    n: usize,
    d: usize,
}

impl SerialFrame {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::Argument(format!(
                "embedding dimension must be >= 2, got {d}"
            )));
        }
        if d > n {
            return Err(Error::Argument(format!(
                "embedding dimension {d} exceeds series length {n}"
            )));
        }
        Ok(SerialFrame { n, d })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Zero-based index of the observation in row `t`, lag `lag` (both zero-based).
    #[inline]
    pub fn index(&self, t: usize, lag: usize) -> usize {
        debug_assert!(t < self.n && lag < self.d);
        (t + self.n - lag) % self.n
    }

    /// Row `t` as zero-based indices, lag 0 first.
    pub fn row(&self, t: usize) -> Vec<usize> {
        (0..self.d).map(|lag| self.index(t, lag)).collect()
    }
}
