use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{convex_roof_upper, OptimizerConfig, RoofStatus};
use crate::highdim::{generalized_lower_bound, pair_bound_oriented, pair_witnesses};
use crate::linalg::{rng_for, sample_random_density_with, DensityMatrix, Dims};
use crate::two_qubit::{wootters_concurrence, x_concurrence, x_decompose};
use crate::Result;

/// Allowed excess of the bound over an exact reference.
pub const EXACT_TOLERANCE: f64 = 1e-10;
/// Allowed excess of the bound over a numerical convex-roof value.
pub const ORACLE_TOLERANCE: f64 = 5e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub trials: usize,
    pub dims: Dims,
    pub seed: u64,
    /// Fixed rank for every sample; otherwise trial `t` uses rank `1 + t mod (dA dB)`.
    pub rank: Option<usize>,
    /// Convex-roof settings for dimensions without a closed form.
    pub oracle: OptimizerConfig,
}

impl FuzzConfig {
    pub fn new(trials: usize, dims: Dims, seed: u64) -> Self {
        FuzzConfig {
            trials,
            dims,
            seed,
            rank: None,
            oracle: OptimizerConfig {
                restarts: 1,
                max_iters: 400,
                ..OptimizerConfig::default()
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reference {
    /// Wootters formula on two qubits.
    Wootters,
    /// Numerical convex roof; exact on rank-one samples.
    ConvexRoof,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub trials: usize,
    pub dim_a: usize,
    pub dim_b: usize,
    pub seed: u64,
    pub reference: Reference,
    /// Samples with `bound > reference + tolerance`.
    pub violations: usize,
    /// Largest `reference - bound`.
    pub max_gap: f64,
    /// Smallest `reference - bound`; negative only within tolerance unless violated.
    pub min_slack: f64,
    /// Rank-one samples where every signed pair value was compared against
    /// the pure-state concurrence, `|C_pair| <= C`.
    pub pure_checks: usize,
    pub pure_violations: usize,
    /// Samples whose reference is exact (Wootters or rank one).
    pub exact_references: usize,
}

struct Outcome {
    slack: f64,
    violated: bool,
    exact: bool,
    pure: Option<bool>,
}

fn trial(cfg: &FuzzConfig, t: usize) -> Result<Outcome> {
    let mut rng = rng_for(cfg.seed, t as u64);
    let n = cfg.dims.total();
    let rank = cfg.rank.unwrap_or(1 + t % n);
    let q = sample_random_density_with(cfg.dims, rank, &mut rng)?;

    let two_qubit = cfg.dims == Dims::TWO_QUBITS;
    let (bound, signed) = if two_qubit {
        let r = x_concurrence(&x_decompose(&q)?.0);
        (r.bound, vec![r.c1, r.c2])
    } else {
        let g = generalized_lower_bound(&q);
        (g.bound, signed_pairs(&q)?)
    };
    let (reference, exact) = if two_qubit {
        (wootters_concurrence(&q)?, true)
    } else {
        let mut oracle = cfg.oracle;
        oracle.seed = cfg.oracle.seed ^ (t as u64);
        let roof = convex_roof_upper(&q, &oracle)?;
        (roof.value, roof.status == RoofStatus::Exact)
    };
    let tolerance = if exact {
        EXACT_TOLERANCE
    } else {
        ORACLE_TOLERANCE
    };
    let pure = (rank == 1).then(|| {
        signed
            .iter()
            .all(|c| c.abs() <= reference + EXACT_TOLERANCE)
    });
    Ok(Outcome {
        slack: reference - bound,
        violated: bound > reference + tolerance,
        exact,
        pure,
    })
}

fn signed_pairs(q: &DensityMatrix) -> Result<Vec<f64>> {
    pair_witnesses(q)
        .map(|w| pair_bound_oriented(q, w.pair, w.orientation))
        .collect()
}

/// Samples random states and counts violations of `bound <= concurrence`.
///
/// Each trial owns the RNG stream `(seed, trial)`, so the report does not
/// depend on how trials are scheduled.
pub fn fuzz_inequality(cfg: &FuzzConfig) -> Result<FuzzReport> {
    let outcomes: Vec<Outcome> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| trial(cfg, t))
        .collect::<Result<_>>()?;
    let mut report = FuzzReport {
        trials: cfg.trials,
        dim_a: cfg.dims.a,
        dim_b: cfg.dims.b,
        seed: cfg.seed,
        reference: if cfg.dims == Dims::TWO_QUBITS {
            Reference::Wootters
        } else {
            Reference::ConvexRoof
        },
        violations: 0,
        max_gap: f64::NEG_INFINITY,
        min_slack: f64::INFINITY,
        pure_checks: 0,
        pure_violations: 0,
        exact_references: 0,
    };
    for o in outcomes {
        report.violations += o.violated as usize;
        report.max_gap = report.max_gap.max(o.slack);
        report.min_slack = report.min_slack.min(o.slack);
        report.exact_references += o.exact as usize;
        if let Some(ok) = o.pure {
            report.pure_checks += 1;
            report.pure_violations += (!ok) as usize;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_qubit_fuzz_is_clean() {
        let r = fuzz_inequality(&FuzzConfig::new(2000, Dims::TWO_QUBITS, 42)).unwrap();
        assert_eq!(r.violations, 0);
        assert_eq!(r.pure_checks, 500);
        assert_eq!(r.pure_violations, 0);
        assert_eq!(r.exact_references, 2000);
        assert!(r.min_slack >= -EXACT_TOLERANCE);
    }

    #[test]
    fn rank_one_restriction() {
        let mut cfg = FuzzConfig::new(100, Dims::TWO_QUBITS, 3);
        cfg.rank = Some(1);
        let r = fuzz_inequality(&cfg).unwrap();
        assert_eq!(
            (r.pure_checks, r.pure_violations, r.violations),
            (100, 0, 0)
        );
    }

    #[test]
    fn three_by_three_against_oracle() {
        let r = fuzz_inequality(&FuzzConfig::new(27, Dims::new(3, 3).unwrap(), 7)).unwrap();
        assert_eq!(r.violations, 0);
        assert_eq!(r.reference, Reference::ConvexRoof);
        assert_eq!(r.exact_references, 3);
        assert_eq!(r.pure_violations, 0);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let cfg = FuzzConfig::new(300, Dims::TWO_QUBITS, 9);
        let a = serde_json::to_string(&fuzz_inequality(&cfg).unwrap()).unwrap();
        let b = serde_json::to_string(&fuzz_inequality(&cfg).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
