//! Concurrence bounds beyond two qubits.
//!
//! For a `dA x dB` state and every choice `i < j` (A) and `k < l` (B), the
//! quantity `2(|Q_{ik,jl}| - sqrt(Q_{il,il} Q_{jk,jk}))` is a lower bound on
//! the I-concurrence. The largest one, clipped at zero, is reported by
//! [`generalized_lower_bound`].

use serde::{Deserialize, Serialize};

use crate::linalg::{partial_trace_b, DensityMatrix, PureState};
use crate::{Error, Result};

/// Indices `i < j` on subsystem A and `k < l` on subsystem B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PairIndex {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
}

impl PairIndex {
    pub fn new(i: usize, j: usize, k: usize, l: usize) -> Self {
        PairIndex { i, j, k, l }
    }

    fn check(&self, q: &DensityMatrix) -> Result<()> {
        let d = q.dims();
        if self.i < self.j && self.j < d.a && self.k < self.l && self.l < d.b {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                i: self.i,
                j: self.j,
                k: self.k,
                l: self.l,
                dim_a: d.a,
                dim_b: d.b,
            })
        }
    }
}

/// Which coherence of a pair is compared against which populations.
///
/// `Direct` uses `|Q_{ik,jl}|` against `Q_{il,il} Q_{jk,jk}`; `Mirrored` swaps
/// the roles of `k` and `l`. On two qubits these are `C1` and `C2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Direct,
    Mirrored,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PairWitness {
    pub pair: PairIndex,
    pub orientation: Orientation,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralizedBound {
    /// `max{0, best}`.
    pub bound: f64,
    /// Largest signed pair value; `-inf` when there are no pairs.
    pub best: f64,
    /// First pair (in `(i, j, k, l, orientation)` order) attaining `best`.
    pub argmax: Option<PairWitness>,
}

/// Both closed forms of the pure-state I-concurrence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IConcurrenceForms {
    /// `sqrt(2 (1 - Tr[rho_A^2]))`.
    pub purity: f64,
    /// `2 sqrt(sum_{i<j, k<l} |a_ik a_jl - a_il a_jk|^2)`.
    pub minors: f64,
}

pub fn i_concurrence_forms(psi: &PureState) -> IConcurrenceForms {
    let reduced = partial_trace_b(&psi.projector());
    let purity: f64 = reduced.iter().map(|z| z.norm_sqr()).sum();
    let d = psi.dims();
    let mut sum = 0.0;
    for i in 0..d.a {
        for j in i + 1..d.a {
            for k in 0..d.b {
                for l in k + 1..d.b {
                    let minor = psi.amp(i, k) * psi.amp(j, l) - psi.amp(i, l) * psi.amp(j, k);
                    sum += minor.norm_sqr();
                }
            }
        }
    }
    IConcurrenceForms {
        purity: (2.0 * (1.0 - purity)).max(0.0).sqrt(),
        minors: 2.0 * sum.sqrt(),
    }
}

/// I-concurrence of a pure state of any local dimensions.
///
/// Uses the 2x2-minor form: near product states the purity form loses
/// about half its digits to cancellation under the square root.
pub fn i_concurrence_pure(psi: &PureState) -> f64 {
    i_concurrence_forms(psi).minors
}

/// `2(|Q_{ik,jl}| - sqrt(Q_{il,il} Q_{jk,jk}))`, signed.
pub fn pair_bound(q: &DensityMatrix, p: PairIndex) -> Result<f64> {
    pair_bound_oriented(q, p, Orientation::Direct)
}

pub fn pair_bound_oriented(
    q: &DensityMatrix,
    p: PairIndex,
    orientation: Orientation,
) -> Result<f64> {
    p.check(q)?;
    Ok(pair_value(q, p, orientation))
}

fn pair_value(q: &DensityMatrix, p: PairIndex, orientation: Orientation) -> f64 {
    let PairIndex { i, j, k, l } = p;
    let (k, l) = match orientation {
        Orientation::Direct => (k, l),
        Orientation::Mirrored => (l, k),
    };
    let coherence = q.element(i, k, j, l).norm();
    let populations = q.population(i, l) * q.population(j, k);
    2.0 * (coherence - populations.max(0.0).sqrt())
}

/// All pair witnesses of `q`'s dimensions in `(i, j, k, l, orientation)` order.
pub fn pair_witnesses(q: &DensityMatrix) -> impl Iterator<Item = PairWitness> {
    let d = q.dims();
    (0..d.a).flat_map(move |i| {
        (i + 1..d.a).flat_map(move |j| {
            (0..d.b).flat_map(move |k| {
                (k + 1..d.b).flat_map(move |l| {
                    [Orientation::Direct, Orientation::Mirrored]
                        .into_iter()
                        .map(move |orientation| PairWitness {
                            pair: PairIndex { i, j, k, l },
                            orientation,
                        })
                })
            })
        })
    })
}

/// `max{0, C_{ik,jl}}` over every pair and both orientations.
pub fn generalized_lower_bound(q: &DensityMatrix) -> GeneralizedBound {
    let mut best = f64::NEG_INFINITY;
    let mut argmax = None;
    for w in pair_witnesses(q) {
        let v = pair_value(q, w.pair, w.orientation);
        if v > best {
            best = v;
            argmax = Some(w);
        }
    }
    GeneralizedBound {
        bound: best.max(0.0),
        best,
        argmax,
    }
}
