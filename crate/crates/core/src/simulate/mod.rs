//! Stationary copula-driven series with discrete, continuous and mixed margins.

mod chain;
mod copula;
mod margins;
pub mod rng;

pub use chain::{sample_series, sample_uniforms};
pub use copula::{tau_to_param, CopulaKind, CopulaModel};
pub use margins::MarginSpec;
