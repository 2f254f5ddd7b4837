use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::simplex::polish;
use super::OptimizerConfig;
use crate::linalg::{c64, conjugate_by_local_unitary, rng_for, CMatrix, DensityMatrix, Tolerances};
use crate::two_qubit::{wootters_concurrence, x_concurrence, x_decompose, BOUND_EXACT_TOLERANCE};
use crate::{Error, Result};

/// Best X bound found over local bases `uA (x) uB`.
#[derive(Debug, Clone, Serialize)]
pub struct BasisOptimum {
    /// Bound in the input basis.
    pub original_bound: f64,
    pub best_bound: f64,
    /// Wootters concurrence; basis independent.
    pub exact: f64,
    /// ZYZ Euler angles of `uA` then `uB`.
    pub angles: [f64; 6],
    #[serde(skip)]
    pub ua: CMatrix,
    #[serde(skip)]
    pub ub: CMatrix,
}

impl BasisOptimum {
    /// `exact - best_bound`.
    pub fn gap(&self) -> f64 {
        self.exact - self.best_bound
    }
}

/// `Rz(a) Ry(b) Rz(c)`; global phase dropped since it cancels under conjugation.
pub fn local_unitary(a: f64, b: f64, c: f64) -> CMatrix {
    let (cb, sb) = ((b / 2.0).cos(), (b / 2.0).sin());
    let e = |t: f64| c64::from_polar(1.0, t);
    CMatrix::from_row_slice(
        2,
        2,
        &[
            e(-(a + c) / 2.0) * cb,
            -e(-(a - c) / 2.0) * sb,
            e((a - c) / 2.0) * sb,
            e((a + c) / 2.0) * cb,
        ],
    )
}

fn unitaries(x: &[f64]) -> (CMatrix, CMatrix) {
    (
        local_unitary(x[0], x[1], x[2]),
        local_unitary(x[3], x[4], x[5]),
    )
}

/// Signed `max{C1, C2}` in the rotated basis; unlike the clipped bound it
/// still slopes where both are negative.
fn signed_bound(q: &DensityMatrix, x: &[f64], tol: &Tolerances) -> f64 {
    let (ua, ub) = unitaries(x);
    let rotated =
        conjugate_by_local_unitary(q, &ua, &ub, tol).expect("Euler rotations are unitary");
    let (core, _) = x_decompose(&rotated).expect("two-qubit input");
    let r = x_concurrence(&core);
    r.c1.max(r.c2)
}

/// Maximizes the X bound of `(uA (x) uB) Q (uA (x) uB)^dagger` over local
/// unitaries, six Euler angles in all. The first restart starts at the
/// identity, so the result is never below the input basis's bound.
pub fn optimize_basis(q: &DensityMatrix, cfg: &OptimizerConfig) -> Result<BasisOptimum> {
    cfg.validate()?;
    q.dims().require(2, 2)?;
    let tol = Tolerances::default();
    let exact = wootters_concurrence(q)?;
    let original = x_concurrence(&x_decompose(q)?.0).bound;

    let runs: Vec<(f64, Vec<f64>)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|restart| {
            let x0: Vec<f64> = if restart == 0 {
                vec![0.0; 6]
            } else {
                let mut rng = rng_for(cfg.seed, restart as u64);
                (0..6)
                    .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
                    .collect()
            };
            let run = polish(
                |x| -signed_bound(q, x, &tol),
                x0,
                cfg.max_iters,
                cfg.tol,
                0.5,
            );
            log::debug!("basis restart {restart}: bound {:.12}", -run.0);
            run
        })
        .collect();
    let (value, x) = runs
        .into_iter()
        .fold((f64::INFINITY, Vec::new()), |acc, run| {
            if run.0 < acc.0 {
                run
            } else {
                acc
            }
        });

    let best_bound = (-value).max(original).max(0.0);
    if best_bound > exact + BOUND_EXACT_TOLERANCE {
        return Err(Error::Invariant(format!(
            "rotated X bound {best_bound} exceeds concurrence {exact}"
        )));
    }
    let (ua, ub) = unitaries(&x);
    let mut angles = [0.0; 6];
    angles.copy_from_slice(&x);
    Ok(BasisOptimum {
        original_bound: original,
        best_bound,
        exact,
        angles,
        ua,
        ub,
    })
}
