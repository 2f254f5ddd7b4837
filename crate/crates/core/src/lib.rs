//! Lower bounds on the concurrence of bipartite quantum states.
//!
//! The central quantity is the concurrence of the *X part* of a density
//! matrix: keep the diagonal and anti-diagonal of a two-qubit state, drop the
//! rest, and the concurrence of what remains never exceeds the concurrence of
//! the full state. It needs only three matrix elements and no diagonalization.
//!
//! Modules:
//! - [`linalg`]: dense complex matrices, state validation, partial trace,
//!   random state sampling and local unitary conjugation.
//! - [`two_qubit`]: X/O split, the `C1`/`C2` bound, pure-state and Wootters
//!   concurrence.
//! - [`highdim`]: I-concurrence of pure states and the pairwise bound for
//!   arbitrary `dA x dB` states.
//! - [`reference_states`]: isotropic, Werner and other closed-form families.
//! - [`oracle`]: numerical convex roof, inequality fuzzing, and local basis
//!   optimization of the X bound.
//! - [`io`]: the JSON density-matrix file format.
//! - [`cli`]: the `xbound` command-line tool.

pub mod cli;
pub mod error;
pub mod highdim;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod reference_states;
pub mod two_qubit;

pub use error::{Error, Result};
pub use linalg::{c64, CMatrix, DensityMatrix, Dims, PureState, Tolerances};
