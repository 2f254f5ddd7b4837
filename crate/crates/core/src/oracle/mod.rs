//! Independent numerical references and adversarial searches.
//!
//! - [`convex_roof_upper`]: ensemble search giving an upper bound on the
//!   concurrence of any state (exact on pure states).
//! - [`fuzz_inequality`]: checks `bound <= concurrence` on random states.
//! - [`optimize_basis`]: maximizes the two-qubit X bound over local bases.

mod basis;
mod fuzz;
mod roof;
pub mod simplex;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use basis::{local_unitary, optimize_basis, BasisOptimum};
pub use fuzz::{
    fuzz_inequality, FuzzConfig, FuzzReport, Reference, EXACT_TOLERANCE, ORACLE_TOLERANCE,
};
pub use roof::{
    convex_roof_upper, convex_roof_with, default_ensemble_size, weighted_concurrence, ConvexRoof,
    DecompositionCandidate, Isometry, RoofStatus,
};

/// Search settings shared by the convex-roof and basis optimizers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    /// Independent starts; the first always starts from the unrotated input.
    pub restarts: usize,
    /// Simplex iterations per restart.
    pub max_iters: usize,
    /// Improvements at or below this are treated as convergence.
    pub tol: f64,
    pub seed: u64,
    /// Convex roof only: ensemble size `m`; defaults to `min(r^2, 8)` (at least `r`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ensemble_size: Option<usize>,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            restarts: 10,
            max_iters: 2000,
            tol: 1e-12,
            seed: 0,
            ensemble_size: None,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::OutOfRange {
                name: "restarts",
                value: 0.0,
                range: "[1, inf)",
            });
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::OutOfRange {
                name: "tol",
                value: self.tol,
                range: "(0, inf)",
            });
        }
        Ok(())
    }
}
