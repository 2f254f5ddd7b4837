//! State families with closed-form concurrence, used as golden references.

use serde::{Deserialize, Serialize};

use crate::linalg::{c64, CMatrix, CVector, DensityMatrix, Dims, PureState};
use crate::{Error, Result};

/// The `U (x) U*` invariant isotropic family on `d x d`:
/// `Q_F = (1 - F)/(d^2 - 1) (I - |psi+><psi+|) + F |psi+><psi+|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsotropicState {
    d: usize,
    fidelity: f64,
}

impl IsotropicState {
    pub fn new(d: usize, fidelity: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimensions {
                dim_a: d,
                dim_b: d,
                reason: "isotropic states need d >= 2",
            });
        }
        if !(0.0..=1.0).contains(&fidelity) {
            return Err(Error::OutOfRange {
                name: "F",
                value: fidelity,
                range: "[0, 1]",
            });
        }
        Ok(IsotropicState { d, fidelity })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn fidelity(&self) -> f64 {
        self.fidelity
    }

    /// Weight of every basis direction orthogonal to `|psi+>`.
    pub fn background(&self) -> f64 {
        (1.0 - self.fidelity) / (self.d * self.d - 1) as f64
    }
}

/// `|psi+> = d^{-1/2} sum_i |i,i>`.
pub fn max_entangled(d: usize) -> Result<PureState> {
    let dims = Dims::new(d, d)?;
    let mut v = CVector::zeros(d * d);
    let amp = c64::new(1.0 / (d as f64).sqrt(), 0.0);
    for i in 0..d {
        v[dims.index(i, i)] = amp;
    }
    PureState::normalized(dims, v)
}

pub fn isotropic_matrix(s: &IsotropicState) -> DensityMatrix {
    let d = s.d;
    let dims = Dims { a: d, b: d };
    let a = s.background();
    // a I + (F - a)/d sum_{i,j} |ii><jj|
    let coherence = (s.fidelity - a) / d as f64;
    let mut m = CMatrix::identity(d * d, d * d).scale(a);
    for i in 0..d {
        for j in 0..d {
            m[(dims.index(i, i), dims.index(j, j))] += c64::new(coherence, 0.0);
        }
    }
    DensityMatrix::from_parts_unchecked(m, dims)
}

/// `max{0, sqrt(2d/(d-1)) (F - 1/d)}`; zero exactly on the separable range
/// `F <= 1/d`.
pub fn isotropic_exact_concurrence(s: &IsotropicState) -> f64 {
    let d = s.d as f64;
    ((2.0 * d / (d - 1.0)).sqrt() * (s.fidelity - 1.0 / d)).max(0.0)
}

/// Closed form of the pairwise X bound on the isotropic family,
/// `max{0, 2/(d-1) (F - 1/d)}`.
pub fn isotropic_bound_closed_form(s: &IsotropicState) -> f64 {
    let d = s.d as f64;
    (2.0 / (d - 1.0) * (s.fidelity - 1.0 / d)).max(0.0)
}

/// `(|00> + |11>)/sqrt 2`.
pub fn bell_phi_plus() -> PureState {
    max_entangled(2).expect("d = 2 is valid")
}

/// `(|01> - |10>)/sqrt 2`.
pub fn singlet() -> PureState {
    let h = 0.5f64.sqrt();
    let v = CVector::from_vec(vec![
        c64::new(0.0, 0.0),
        c64::new(h, 0.0),
        c64::new(-h, 0.0),
        c64::new(0.0, 0.0),
    ]);
    PureState::normalized(Dims::TWO_QUBITS, v).expect("nonzero vector")
}

/// Amplitudes `(1/2, 1/sqrt 3, 1/sqrt 6, 1/2)`. Its projector is not X-form,
/// yet its X bound equals its concurrence.
pub fn chi_state() -> PureState {
    let v = CVector::from_vec(vec![
        c64::new(0.5, 0.0),
        c64::new(1.0 / 3f64.sqrt(), 0.0),
        c64::new(1.0 / 6f64.sqrt(), 0.0),
        c64::new(0.5, 0.0),
    ]);
    PureState::normalized(Dims::TWO_QUBITS, v).expect("nonzero vector")
}

/// `p |psi-><psi-| + (1 - p) I/4`, concurrence `max{0, (3p - 1)/2}`.
pub fn werner_state(p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange {
            name: "p",
            value: p,
            range: "[0, 1]",
        });
    }
    let m = singlet().projector().into_matrix().scale(p)
        + CMatrix::identity(4, 4).scale((1.0 - p) / 4.0);
    Ok(DensityMatrix::from_parts_unchecked(m, Dims::TWO_QUBITS))
}

pub fn werner_concurrence(p: f64) -> f64 {
    ((3.0 * p - 1.0) / 2.0).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::highdim::generalized_lower_bound;
    use crate::linalg::{max_abs_diff, validate_density, Tolerances};
    use crate::two_qubit::{pure_concurrence, wootters_concurrence, x_decompose, x_lower_bound};

    fn fidelity_of(q: &DensityMatrix, d: usize) -> f64 {
        let psi = max_entangled(d).unwrap();
        let v = psi.amplitudes();
        (v.adjoint() * q.matrix() * v)[(0, 0)].re
    }

    #[test]
    fn isotropic_at_unit_fidelity_is_bell() {
        let q = isotropic_matrix(&IsotropicState::new(2, 1.0).unwrap());
        assert!(max_abs_diff(q.matrix(), bell_phi_plus().projector().matrix()) < 1e-15);
    }

    #[test]
    fn isotropic_at_one_over_d_squared_is_maximally_mixed() {
        let q = isotropic_matrix(&IsotropicState::new(3, 1.0 / 9.0).unwrap());
        let mixed = DensityMatrix::maximally_mixed(Dims::new(3, 3).unwrap());
        assert!(max_abs_diff(q.matrix(), mixed.matrix()) < 1e-15);
    }

    #[test]
    fn isotropic_matrices_are_valid_with_requested_fidelity() {
        for d in 2..6 {
            for n in 0..=20 {
                let f = n as f64 / 20.0;
                let q = isotropic_matrix(&IsotropicState::new(d, f).unwrap());
                let q = validate_density(
                    q.into_matrix(),
                    Dims::new(d, d).unwrap(),
                    &Tolerances::default(),
                )
                .unwrap();
                assert!((fidelity_of(&q, d) - f).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn isotropic_parameter_checks() {
        assert!(matches!(
            IsotropicState::new(1, 0.5),
            Err(Error::InvalidDimensions { .. })
        ));
        assert!(matches!(
            IsotropicState::new(3, 1.2),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            IsotropicState::new(3, -0.1),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn isotropic_closed_forms() {
        let s = IsotropicState::new(3, 1.0).unwrap();
        assert!((isotropic_exact_concurrence(&s) - 2.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((isotropic_bound_closed_form(&s) - 2.0 / 3.0).abs() < 1e-15);
        for f in [0.0, 0.1, 0.2, 1.0 / 3.0] {
            let s = IsotropicState::new(3, f).unwrap();
            assert_eq!(isotropic_exact_concurrence(&s), 0.0);
            assert_eq!(isotropic_bound_closed_form(&s), 0.0);
        }
        let s = IsotropicState::new(2, 1.0).unwrap();
        assert!((isotropic_exact_concurrence(&s) - 1.0).abs() < 1e-15);
        assert!((isotropic_bound_closed_form(&s) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn two_qubit_isotropic_matches_wootters() {
        for n in 0..=20 {
            let s = IsotropicState::new(2, n as f64 / 20.0).unwrap();
            let exact = wootters_concurrence(&isotropic_matrix(&s)).unwrap();
            assert!((exact - isotropic_exact_concurrence(&s)).abs() < 1e-10);
        }
    }

    #[test]
    fn matrix_level_bound_matches_closed_form() {
        for d in 2..5 {
            for n in 0..=20 {
                let s = IsotropicState::new(d, n as f64 * 0.05).unwrap();
                let g = generalized_lower_bound(&isotropic_matrix(&s));
                assert!((g.bound - isotropic_bound_closed_form(&s)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn chi_state_properties() {
        let chi = chi_state();
        assert!((chi.amplitudes().norm() - 1.0).abs() < 1e-15);
        let c = 0.5 - 2f64.sqrt() / 3.0;
        assert!((pure_concurrence(&chi).unwrap() - c).abs() < 1e-15);
        let q = chi.projector();
        let (_, o) = x_decompose(&q).unwrap();
        assert!((o[(0, 1)].norm() - 1.0 / (2.0 * 3f64.sqrt())).abs() < 1e-15);
        let r = x_lower_bound(&q).unwrap();
        assert!((r.bound - r.exact.unwrap()).abs() < 1e-12);
    }

    #[test]
    fn werner_family() {
        for (p, expected) in [
            (1.0, 1.0),
            (1.0 / 3.0, 0.0),
            (0.8, 0.7),
            (0.0, 0.0),
            (0.5, 0.25),
        ] {
            let q = werner_state(p).unwrap();
            let r = x_lower_bound(&q).unwrap();
            assert!(
                (r.bound - expected).abs() < 1e-10,
                "p={p}: bound {}",
                r.bound
            );
            assert!(
                (r.exact.unwrap() - expected).abs() < 1e-10,
                "p={p}: exact {:?}",
                r.exact
            );
            assert!((werner_concurrence(p) - expected).abs() < 1e-15);
        }
        assert!(matches!(werner_state(1.5), Err(Error::OutOfRange { .. })));
    }
}
