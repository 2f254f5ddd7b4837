//! Two-qubit concurrence and its X-matrix lower bound.
//!
//! Any two-qubit state splits as `Q = X + O`, where `X` keeps the diagonal and
//! the anti-diagonal coherences `Q14`, `Q23` and `O` holds everything else.
//! The concurrence of `X` alone,
//!
//! ```text
//! C(X) = max{0, C1, C2},  C1 = 2(|Q14| - sqrt(Q22 Q33)),  C2 = 2(|Q23| - sqrt(Q11 Q44)),
//! ```
//!
//! is a lower bound on the concurrence of `Q` in every product basis.

use serde::{Deserialize, Serialize};

use crate::linalg::{c64, hermitian_eigen, kron, sigma_y, CMatrix, DensityMatrix, Dims, PureState};
use crate::{Error, Result};

/// Tolerance on `bound <= exact` when both are attached to a [`BoundReport`].
pub const BOUND_EXACT_TOLERANCE: f64 = 1e-10;

/// Headroom for the positivity check on an [`XCore`].
const XCORE_PSD_TOLERANCE: f64 = 1e-8;

/// The seven independent entries of a two-qubit X matrix (the conjugates of
/// `q14` and `q23` are implied).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XCore {
    pub d11: f64,
    pub d22: f64,
    pub d33: f64,
    pub d44: f64,
    pub q14: c64,
    pub q23: c64,
}

impl XCore {
    pub fn trace(&self) -> f64 {
        self.d11 + self.d22 + self.d33 + self.d44
    }

    /// How far the coherences exceed what positivity of `X` allows; `<= 0`
    /// for a physical X state.
    pub fn positivity_excess(&self) -> f64 {
        let outer = self.q14.norm() - (self.d11 * self.d44).max(0.0).sqrt();
        let inner = self.q23.norm() - (self.d22 * self.d33).max(0.0).sqrt();
        outer.max(inner)
    }

    pub fn is_physical(&self, tol: f64) -> bool {
        self.d11 >= -tol
            && self.d22 >= -tol
            && self.d33 >= -tol
            && self.d44 >= -tol
            && self.positivity_excess() <= tol
    }

    /// The full 4x4 X matrix.
    pub fn to_matrix(&self) -> CMatrix {
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = c64::new(self.d11, 0.0);
        m[(1, 1)] = c64::new(self.d22, 0.0);
        m[(2, 2)] = c64::new(self.d33, 0.0);
        m[(3, 3)] = c64::new(self.d44, 0.0);
        m[(0, 3)] = self.q14;
        m[(3, 0)] = self.q14.conj();
        m[(1, 2)] = self.q23;
        m[(2, 1)] = self.q23.conj();
        m
    }

    /// The X matrix as a validated density matrix.
    pub fn to_density(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(self.to_matrix(), Dims::TWO_QUBITS)
    }
}

/// `C1`, `C2` (signed), the bound `max{0, C1, C2}`, and the exact concurrence
/// when one is known.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub c1: f64,
    pub c2: f64,
    pub bound: f64,
    pub exact: Option<f64>,
}

impl BoundReport {
    /// Gap `exact - bound`, when the exact value is known.
    pub fn slack(&self) -> Option<f64> {
        self.exact.map(|e| e - self.bound)
    }
}

/// Splits `q` into its X core and the O remainder.
pub fn x_decompose(q: &DensityMatrix) -> Result<(XCore, CMatrix)> {
    q.dims().require(2, 2)?;
    let m = q.matrix();
    let core = XCore {
        d11: m[(0, 0)].re,
        d22: m[(1, 1)].re,
        d33: m[(2, 2)].re,
        d44: m[(3, 3)].re,
        q14: m[(0, 3)],
        q23: m[(1, 2)],
    };
    if !core.is_physical(XCORE_PSD_TOLERANCE) {
        // The X part of a valid state is a valid state; only noise gets here.
        log::warn!(
            "X core positivity off by {:e}; upstream roundoff",
            core.positivity_excess()
        );
    }
    let mut o = m.clone();
    for (r, c) in [
        (0, 0),
        (1, 1),
        (2, 2),
        (3, 3),
        (0, 3),
        (3, 0),
        (1, 2),
        (2, 1),
    ] {
        o[(r, c)] = c64::new(0.0, 0.0);
    }
    Ok((core, o))
}

/// `C1`, `C2` and `C(X)` of an X core.
pub fn x_concurrence(x: &XCore) -> BoundReport {
    let c1 = 2.0 * (x.q14.norm() - (x.d22 * x.d33).max(0.0).sqrt());
    let c2 = 2.0 * (x.q23.norm() - (x.d11 * x.d44).max(0.0).sqrt());
    BoundReport {
        c1,
        c2,
        bound: 0.0f64.max(c1).max(c2),
        exact: None,
    }
}

/// `2 |alpha delta - beta gamma|` for `|psi> = (alpha, beta, gamma, delta)`.
pub fn pure_concurrence(psi: &PureState) -> Result<f64> {
    psi.dims().require(2, 2)?;
    let a = psi.amplitudes();
    Ok(2.0 * (a[0] * a[3] - a[1] * a[2]).norm())
}

/// The spin-flipped state `(sy (x) sy) Q* (sy (x) sy)`.
pub fn spin_flip(q: &DensityMatrix) -> Result<CMatrix> {
    q.dims().require(2, 2)?;
    let yy = kron(&sigma_y(), &sigma_y());
    Ok(&yy * q.matrix().conjugate() * &yy)
}

/// Square roots of the eigenvalues of `Q Q~`, in decreasing order.
///
/// With `Q = W W^dagger` these are the singular values of the complex
/// symmetric matrix `W^T (sy (x) sy) W`. Taking singular values directly keeps
/// them accurate to machine precision in absolute terms; square roots of
/// eigenvalues of `Q Q~` lose half the digits on rank-deficient states.
pub fn wootters_lambdas(q: &DensityMatrix) -> Result<[f64; 4]> {
    q.dims().require(2, 2)?;
    let (values, vectors) = hermitian_eigen(q.matrix());
    let factor = CMatrix::from_fn(4, 4, |r, c| vectors[(r, c)] * values[c].max(0.0).sqrt());
    let yy = kron(&sigma_y(), &sigma_y());
    let tau = factor.transpose() * yy * &factor;
    let mut sv: Vec<f64> = tau.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let mut out = [0.0; 4];
    out.copy_from_slice(&sv[..4]);
    Ok(out)
}

/// Exact two-qubit concurrence `max{0, l1 - l2 - l3 - l4}`.
pub fn wootters_concurrence(q: &DensityMatrix) -> Result<f64> {
    let l = wootters_lambdas(q)?;
    Ok((l[0] - l[1] - l[2] - l[3]).clamp(0.0, 1.0))
}

/// The X-matrix bound of `q` together with its exact concurrence.
///
/// Fails with [`Error::Invariant`] if the bound exceeds the exact value by
/// more than [`BOUND_EXACT_TOLERANCE`].
pub fn x_lower_bound(q: &DensityMatrix) -> Result<BoundReport> {
    let (core, _) = x_decompose(q)?;
    let mut report = x_concurrence(&core);
    let exact = wootters_concurrence(q)?;
    if report.bound > exact + BOUND_EXACT_TOLERANCE {
        return Err(Error::Invariant(format!(
            "X bound {} exceeds exact concurrence {}",
            report.bound, exact
        )));
    }
    report.exact = Some(exact);
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Entangled,
    Inconclusive,
}

/// Result of certifying from the three elements `|Q14|`, `Q22`, `Q33`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElementCertificate {
    pub c1: f64,
    pub verdict: Verdict,
}

/// Entanglement test from `|Q14|`, `Q22` and `Q33` alone: the state is
/// entangled whenever `C1 > 0`. A non-positive `C1` proves nothing.
pub fn certify_from_elements(q14_abs: f64, d22: f64, d33: f64) -> Result<ElementCertificate> {
    if !(q14_abs.is_finite() && q14_abs >= 0.0) {
        return Err(Error::OutOfRange {
            name: "|Q14|",
            value: q14_abs,
            range: "[0, inf)",
        });
    }
    for (name, v) in [("Q22", d22), ("Q33", d33)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::OutOfRange {
                name,
                value: v,
                range: "[0, 1]",
            });
        }
    }
    let c1 = 2.0 * (q14_abs - (d22 * d33).sqrt());
    let verdict = if c1 > 0.0 {
        Verdict::Entangled
    } else {
        Verdict::Inconclusive
    };
    Ok(ElementCertificate { c1, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{
        conjugate_by_local_unitary, max_abs_diff, rng_for, sample_haar_unitary,
        sample_random_density, CVector, Tolerances,
    };

    fn amps(v: [f64; 4]) -> PureState {
        let v = CVector::from_iterator(4, v.iter().map(|&x| c64::new(x, 0.0)));
        PureState::new(Dims::TWO_QUBITS, v, &Tolerances::default()).unwrap()
    }

    fn bell() -> PureState {
        let h = 0.5f64.sqrt();
        amps([h, 0.0, 0.0, h])
    }

    fn chi() -> PureState {
        amps([0.5, 1.0 / 3f64.sqrt(), 1.0 / 6f64.sqrt(), 0.5])
    }

    // 2(1/4 - 1/sqrt(18)) = 1/2 - sqrt(2)/3
    fn chi_concurrence() -> f64 {
        0.5 - 2f64.sqrt() / 3.0
    }

    #[test]
    fn bell_decomposes_into_pure_x() {
        let (core, o) = x_decompose(&bell().projector()).unwrap();
        assert!((core.d11 - 0.5).abs() < 1e-15 && (core.d44 - 0.5).abs() < 1e-15);
        assert!(core.d22.abs() < 1e-15 && core.d33.abs() < 1e-15);
        assert!((core.q14 - c64::new(0.5, 0.0)).norm() < 1e-15);
        assert!(core.q23.norm() < 1e-15);
        assert!(o.iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn chi_core_entries() {
        let (core, o) = x_decompose(&chi().projector()).unwrap();
        assert!((core.d11 - 0.25).abs() < 1e-15);
        assert!((core.d22 - 1.0 / 3.0).abs() < 1e-15);
        assert!((core.d33 - 1.0 / 6.0).abs() < 1e-15);
        assert!((core.d44 - 0.25).abs() < 1e-15);
        assert!((core.q14.norm() - 0.25).abs() < 1e-15);
        assert!((core.q23.norm() - 1.0 / 18f64.sqrt()).abs() < 1e-15);
        // O_12 = alpha beta = 1/(2 sqrt 3)
        assert!((o[(0, 1)].norm() - 1.0 / (2.0 * 3f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn maximally_mixed_core() {
        let (core, o) = x_decompose(&DensityMatrix::maximally_mixed(Dims::TWO_QUBITS)).unwrap();
        for d in [core.d11, core.d22, core.d33, core.d44] {
            assert_eq!(d, 0.25);
        }
        assert_eq!(core.q14.norm() + core.q23.norm(), 0.0);
        assert!(o.iter().all(|z| z.norm() == 0.0));
        let r = x_concurrence(&core);
        assert_eq!((r.c1, r.c2, r.bound), (-0.5, -0.5, 0.0));
    }

    #[test]
    fn reconstruction_is_bitwise_exact() {
        for seed in 0..50 {
            let q = sample_random_density(Dims::TWO_QUBITS, 1 + (seed as usize % 4), seed).unwrap();
            let (core, o) = x_decompose(&q).unwrap();
            let back = core.to_matrix() + o;
            assert_eq!(&back, q.matrix());
        }
    }

    #[test]
    fn x_concurrence_examples() {
        let r = x_concurrence(&x_decompose(&bell().projector()).unwrap().0);
        assert!(
            (r.c1 - 1.0).abs() < 1e-15
                && (r.c2 + 1.0).abs() < 1e-15
                && (r.bound - 1.0).abs() < 1e-15
        );
        let r = x_concurrence(&x_decompose(&chi().projector()).unwrap().0);
        assert!((r.c1 - chi_concurrence()).abs() < 1e-15);
        assert!((r.bound - 0.028_595_479_208_968_3).abs() < 1e-12);
    }

    #[test]
    fn pure_concurrence_examples() {
        assert!((pure_concurrence(&bell()).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(
            pure_concurrence(&PureState::basis(Dims::TWO_QUBITS, 0, 0)).unwrap(),
            0.0
        );
        assert!((pure_concurrence(&chi()).unwrap() - chi_concurrence()).abs() < 1e-15);
        let qutrit = PureState::basis(Dims::new(3, 2).unwrap(), 0, 0);
        assert!(matches!(
            pure_concurrence(&qutrit),
            Err(Error::WrongDimensions { .. })
        ));
    }

    #[test]
    fn wootters_examples() {
        assert!((wootters_concurrence(&bell().projector()).unwrap() - 1.0).abs() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(Dims::TWO_QUBITS);
        assert_eq!(wootters_concurrence(&mixed).unwrap(), 0.0);
        // Werner p = 0.8: (3p - 1)/2
        let h = 0.5f64.sqrt();
        let singlet = amps([0.0, h, -h, 0.0]).projector();
        let m = singlet.matrix().scale(0.8) + mixed.matrix().scale(0.2);
        let w = DensityMatrix::new(m, Dims::TWO_QUBITS).unwrap();
        assert!((wootters_concurrence(&w).unwrap() - 0.7).abs() < 1e-12);
    }

    #[test]
    fn wootters_matches_pure_formula_on_projectors() {
        let mut rng = rng_for(21, 0);
        for _ in 0..200 {
            let psi = crate::linalg::sample_haar_pure_with(Dims::TWO_QUBITS, &mut rng).unwrap();
            let exact = wootters_concurrence(&psi.projector()).unwrap();
            assert!((exact - pure_concurrence(&psi).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn lambdas_agree_with_hermitian_sandwich() {
        use crate::linalg::psd_sqrt;
        for seed in 0..100 {
            let q = sample_random_density(Dims::TWO_QUBITS, 2 + seed as usize % 3, seed).unwrap();
            let root = psd_sqrt(q.matrix());
            let sandwich = &root * spin_flip(&q).unwrap() * &root;
            let (values, _) = hermitian_eigen(&sandwich);
            let lambdas = wootters_lambdas(&q).unwrap();
            for (l, v) in lambdas.iter().zip(values.iter().rev()) {
                assert!((l - v.max(0.0).sqrt()).abs() < 1e-7, "{l} vs {v}");
            }
        }
    }

    #[test]
    fn chi_bound_is_tight_without_x_form() {
        let r = x_lower_bound(&chi().projector()).unwrap();
        assert!((r.bound - chi_concurrence()).abs() < 1e-12);
        assert!((r.exact.unwrap() - chi_concurrence()).abs() < 1e-12);
    }

    #[test]
    fn wootters_is_local_unitary_invariant_but_bound_is_not() {
        let mut rng = rng_for(5, 0);
        let tol = Tolerances::default();
        for seed in 0..50 {
            let q = sample_random_density(Dims::TWO_QUBITS, 1 + seed as usize % 4, seed).unwrap();
            let ua = sample_haar_unitary(2, &mut rng);
            let ub = sample_haar_unitary(2, &mut rng);
            let r = conjugate_by_local_unitary(&q, &ua, &ub, &tol).unwrap();
            let (a, b) = (
                wootters_concurrence(&q).unwrap(),
                wootters_concurrence(&r).unwrap(),
            );
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
        // Hadamard on A spreads the Bell state evenly over all four amplitudes,
        // which zeroes both C1 and C2.
        let s = 0.5f64.sqrt();
        let hadamard = CMatrix::from_row_slice(
            2,
            2,
            &[
                c64::new(s, 0.0),
                c64::new(s, 0.0),
                c64::new(s, 0.0),
                c64::new(-s, 0.0),
            ],
        );
        let rotated = conjugate_by_local_unitary(
            &bell().projector(),
            &hadamard,
            &crate::linalg::identity(2),
            &tol,
        )
        .unwrap();
        let r = x_lower_bound(&rotated).unwrap();
        assert!(r.bound.abs() < 1e-12, "bound {}", r.bound);
        assert!((r.exact.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn embedded_core_roundtrips() {
        let (core, _) = x_decompose(&chi().projector()).unwrap();
        let x = core.to_density().unwrap();
        assert!(max_abs_diff(&x_decompose(&x).unwrap().0.to_matrix(), &core.to_matrix()) == 0.0);
    }

    #[test]
    fn certify_examples() {
        let c = certify_from_elements(0.5, 0.0, 0.0).unwrap();
        assert_eq!((c.c1, c.verdict), (1.0, Verdict::Entangled));
        let c = certify_from_elements(0.1, 0.25, 0.25).unwrap();
        assert!((c.c1 + 0.3).abs() < 1e-15);
        assert_eq!(c.verdict, Verdict::Inconclusive);
        let c = certify_from_elements(0.25, 1.0 / 3.0, 1.0 / 6.0).unwrap();
        assert!((c.c1 - chi_concurrence()).abs() < 1e-15);
        assert_eq!(c.verdict, Verdict::Entangled);
        assert!(matches!(
            certify_from_elements(-0.1, 0.1, 0.1),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            certify_from_elements(0.1, 1.5, 0.1),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            certify_from_elements(0.1, 0.1, f64::NAN),
            Err(Error::OutOfRange { .. })
        ));
    }
}
