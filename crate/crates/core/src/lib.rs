//! Copula-based tests of independence and randomness for data with arbitrary margins.
//!
//! Ties are handled through the multilinear extension of the empirical copula:
//! each observation is scored by the average of a score quantile K⁻¹ over its
//! probability jump. Subset statistics γ_A indexed by the Möbius decomposition
//! are standardized and combined into chi-square (Wald) or Fisher statistics.
//!
//! ```
//! use mlcop::{test_independence, ScoreFamily};
//!
//! let x = vec![0.0, 1.0, 1.0, 2.0, 0.0, 2.0, 1.0, 0.0];
//! let y = vec![1.0, 1.0, 2.0, 2.0, 0.0, 2.0, 1.0, 0.0];
//! let report = test_independence(&[x, y], &[ScoreFamily::Spearman], 2).unwrap();
//! assert_eq!(report.wald.df, 1);
//! ```

// Guards written as `!(x > 0.0)` also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dist;
pub mod empirical;
pub mod error;
pub mod power;
pub mod scores;
pub mod simulate;
pub mod stats;

mod quadrature;

pub use empirical::{EmpiricalMargin, ScoredColumn, SerialFrame};
pub use error::{Error, Result};
pub use scores::ScoreFamily;
pub use stats::{test_independence, test_randomness, TestReport};
