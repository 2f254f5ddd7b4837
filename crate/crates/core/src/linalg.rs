//! Dense complex linear algebra over a bipartite product basis.
//!
//! Basis states `|i,k>` (A index `i`, B index `k`) are stored at flat index
//! `i * dim_b + k`, so for two qubits the order is `|00>, |01>, |10>, |11>`
//! and the two-qubit element `Q14` is entry `(0, 3)`.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use nalgebra::Complex;

#[allow(non_camel_case_types)]
pub type c64 = Complex<f64>;
pub type CMatrix = DMatrix<c64>;
pub type CVector = DVector<c64>;

/// Local dimensions of a bipartite system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dims {
    pub a: usize,
    pub b: usize,
}

impl Dims {
    pub const TWO_QUBITS: Dims = Dims { a: 2, b: 2 };

    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == 0 || b == 0 {
            return Err(Error::InvalidDimensions {
                dim_a: a,
                dim_b: b,
                reason: "local dimensions must be at least 1",
            });
        }
        Ok(Dims { a, b })
    }

    /// Dimension of the joint space.
    pub fn total(&self) -> usize {
        self.a * self.b
    }

    #[inline]
    pub fn index(&self, i: usize, k: usize) -> usize {
        i * self.b + k
    }

    pub(crate) fn require(&self, a: usize, b: usize) -> Result<()> {
        if self.a != a || self.b != b {
            return Err(Error::WrongDimensions {
                expected_a: a,
                expected_b: b,
                dim_a: self.a,
                dim_b: self.b,
            });
        }
        Ok(())
    }
}

/// Acceptance thresholds for state validation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub hermitian: f64,
    pub trace: f64,
    pub psd: f64,
    pub norm: f64,
    pub unitary: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            hermitian: 1e-8,
            trace: 1e-8,
            psd: 1e-8,
            norm: 1e-10,
            unitary: 1e-8,
        }
    }
}

impl Tolerances {
    /// Every threshold set to `tol`.
    pub fn uniform(tol: f64) -> Self {
        Tolerances {
            hermitian: tol,
            trace: tol,
            psd: tol,
            norm: tol,
            unitary: tol,
        }
    }
}

/// A validated density matrix: Hermitian, unit trace and positive
/// semidefinite, each within the [`Tolerances`] it was checked against.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Dims,
    mat: CMatrix,
}

impl DensityMatrix {
    /// Validates `mat` as a state on `dims` with the default tolerances.
    pub fn new(mat: CMatrix, dims: Dims) -> Result<Self> {
        validate_density(mat, dims, &Tolerances::default())
    }

    /// Skips validation. Callers guarantee the invariants hold by construction.
    pub(crate) fn from_parts_unchecked(mat: CMatrix, dims: Dims) -> Self {
        debug_assert_eq!(mat.nrows(), dims.total());
        DensityMatrix { dims, mat }
    }

    pub fn maximally_mixed(dims: Dims) -> Self {
        let n = dims.total();
        let mat = CMatrix::identity(n, n) * c64::new(1.0 / n as f64, 0.0);
        DensityMatrix { dims, mat }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    /// `<i,k| Q |j,l>`.
    #[inline]
    pub fn element(&self, i: usize, k: usize, j: usize, l: usize) -> c64 {
        self.mat[(self.dims.index(i, k), self.dims.index(j, l))]
    }

    /// Real part of the diagonal element `<i,k| Q |i,k>`.
    #[inline]
    pub fn population(&self, i: usize, k: usize) -> f64 {
        let n = self.dims.index(i, k);
        self.mat[(n, n)].re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigen(&self.mat).0
    }

    pub fn trace(&self) -> f64 {
        self.mat.diagonal().iter().map(|z| z.re).sum()
    }

    /// Number of eigenvalues above `cutoff`.
    pub fn rank(&self, cutoff: f64) -> usize {
        self.eigenvalues().iter().filter(|&&v| v > cutoff).count()
    }
}

/// A normalized pure state with amplitudes `a_{ik}` in the product basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Dims,
    amps: CVector,
}

impl PureState {
    /// Checks the length and the norm against `tol.norm`.
    pub fn new(dims: Dims, amps: CVector, tol: &Tolerances) -> Result<Self> {
        check_len(amps.len(), dims)?;
        check_finite_vec(&amps)?;
        let residual = (amps.norm() - 1.0).abs();
        if residual > tol.norm {
            return Err(Error::NotNormalized {
                residual,
                tolerance: tol.norm,
            });
        }
        Ok(PureState { dims, amps })
    }

    /// Rescales `amps` to unit norm.
    pub fn normalized(dims: Dims, amps: CVector) -> Result<Self> {
        check_len(amps.len(), dims)?;
        check_finite_vec(&amps)?;
        let norm = amps.norm();
        if norm == 0.0 {
            return Err(Error::NotNormalized {
                residual: 1.0,
                tolerance: 0.0,
            });
        }
        Ok(PureState {
            dims,
            amps: amps.unscale(norm),
        })
    }

    /// Product state `|i> (x) |k>`.
    pub fn basis(dims: Dims, i: usize, k: usize) -> Self {
        let mut amps = CVector::zeros(dims.total());
        amps[dims.index(i, k)] = c64::new(1.0, 0.0);
        PureState { dims, amps }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amps
    }

    #[inline]
    pub fn amp(&self, i: usize, k: usize) -> c64 {
        self.amps[self.dims.index(i, k)]
    }

    /// The `dim_a x dim_b` coefficient matrix `A[(i, k)] = a_{ik}`.
    pub fn coefficients(&self) -> CMatrix {
        CMatrix::from_fn(self.dims.a, self.dims.b, |i, k| self.amp(i, k))
    }

    /// `|psi><psi|` as a density matrix.
    pub fn projector(&self) -> DensityMatrix {
        let mat = &self.amps * self.amps.adjoint();
        DensityMatrix {
            dims: self.dims,
            mat: hermitize(&mat),
        }
    }
}

fn check_len(len: usize, dims: Dims) -> Result<()> {
    if len != dims.total() {
        return Err(Error::ShapeMismatch {
            rows: len,
            cols: 1,
            expected: dims.total(),
            dim_a: dims.a,
            dim_b: dims.b,
        });
    }
    Ok(())
}

fn check_finite_vec(v: &CVector) -> Result<()> {
    match v
        .iter()
        .position(|z| !(z.re.is_finite() && z.im.is_finite()))
    {
        Some(row) => Err(Error::NonFinite { row, col: 0 }),
        None => Ok(()),
    }
}

/// Checks the density-matrix invariants and wraps `m` on success.
pub fn validate_density(m: CMatrix, dims: Dims, tol: &Tolerances) -> Result<DensityMatrix> {
    let n = dims.total();
    if dims.a == 0 || dims.b == 0 {
        return Err(Error::InvalidDimensions {
            dim_a: dims.a,
            dim_b: dims.b,
            reason: "local dimensions must be at least 1",
        });
    }
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::ShapeMismatch {
            rows: m.nrows(),
            cols: m.ncols(),
            expected: n,
            dim_a: dims.a,
            dim_b: dims.b,
        });
    }
    for c in 0..n {
        for r in 0..n {
            let z = m[(r, c)];
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::NonFinite { row: r, col: c });
            }
        }
    }
    let residual = hermitian_residual(&m);
    if residual > tol.hermitian {
        return Err(Error::NotHermitian {
            residual,
            tolerance: tol.hermitian,
        });
    }
    let trace: c64 = m.trace();
    let residual = (trace - c64::new(1.0, 0.0)).norm();
    if residual > tol.trace {
        return Err(Error::TraceNotOne {
            residual,
            tolerance: tol.trace,
        });
    }
    let min_eigenvalue = hermitian_eigen(&m).0[0];
    if min_eigenvalue < -tol.psd {
        return Err(Error::NotPositive {
            min_eigenvalue,
            tolerance: tol.psd,
        });
    }
    Ok(DensityMatrix { dims, mat: m })
}

/// `max |M - M^dagger|` over entries.
pub fn hermitian_residual(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for r in 0..n {
        for c in r..n {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

/// `(M + M^dagger) / 2`.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).unscale(2.0)
}

/// Eigen-decomposition of the Hermitian part of `m`, eigenvalues ascending,
/// eigenvectors as the matching columns.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = hermitize(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    (values, vectors)
}

/// Square root of a positive semidefinite matrix; negative eigenvalues from
/// roundoff are clipped to zero.
pub fn psd_sqrt(m: &CMatrix) -> CMatrix {
    let (values, vectors) = hermitian_eigen(m);
    let roots = CVector::from_iterator(
        values.len(),
        values.iter().map(|&v| c64::new(v.max(0.0).sqrt(), 0.0)),
    );
    let scaled = CMatrix::from_fn(vectors.nrows(), vectors.ncols(), |r, c| {
        vectors[(r, c)] * roots[c]
    });
    &scaled * vectors.adjoint()
}

/// Kronecker product `a (x) b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// `max |U^dagger U - I|` over entries.
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    if u.nrows() != u.ncols() {
        return f64::INFINITY;
    }
    let prod = u.adjoint() * u;
    let n = u.nrows();
    let mut worst = 0.0f64;
    for r in 0..n {
        for c in 0..n {
            let target = if r == c { 1.0 } else { 0.0 };
            worst = worst.max((prod[(r, c)] - c64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// Reduced state of subsystem A, `Tr_B[Q]`.
pub fn partial_trace_b(q: &DensityMatrix) -> CMatrix {
    let d = q.dims;
    CMatrix::from_fn(d.a, d.a, |i, j| {
        (0..d.b).map(|k| q.element(i, k, j, k)).sum()
    })
}

/// Reduced state of subsystem B, `Tr_A[Q]`.
pub fn partial_trace_a(q: &DensityMatrix) -> CMatrix {
    let d = q.dims;
    CMatrix::from_fn(d.b, d.b, |k, l| {
        (0..d.a).map(|i| q.element(i, k, i, l)).sum()
    })
}

/// `(uA (x) uB) Q (uA (x) uB)^dagger`.
pub fn conjugate_by_local_unitary(
    q: &DensityMatrix,
    ua: &CMatrix,
    ub: &CMatrix,
    tol: &Tolerances,
) -> Result<DensityMatrix> {
    let d = q.dims;
    for (u, n) in [(ua, d.a), (ub, d.b)] {
        if u.nrows() != n || u.ncols() != n {
            return Err(Error::ShapeMismatch {
                rows: u.nrows(),
                cols: u.ncols(),
                expected: n,
                dim_a: d.a,
                dim_b: d.b,
            });
        }
        let residual = unitarity_residual(u);
        if residual > tol.unitary {
            return Err(Error::NotUnitary {
                residual,
                tolerance: tol.unitary,
            });
        }
    }
    let u = kron(ua, ub);
    let mat = &u * &q.mat * u.adjoint();
    Ok(DensityMatrix {
        dims: d,
        mat: hermitize(&mat),
    })
}

/// Deterministic generator for `(seed, stream)`; distinct streams are
/// independent, which lets parallel work items own their randomness.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One standard complex Gaussian: real and imaginary parts i.i.d. `N(0, 1)`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> c64 {
    c64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    // Fill column by column so the draw order is fixed by the storage order.
    let mut g = CMatrix::zeros(rows, cols);
    for c in 0..cols {
        for r in 0..rows {
            g[(r, c)] = complex_gaussian(rng);
        }
    }
    g
}

/// Random mixed state `G G^dagger / Tr(G G^dagger)` with `G` a
/// `(dA dB) x rank` Ginibre matrix.
pub fn sample_random_density(dims: Dims, rank: usize, seed: u64) -> Result<DensityMatrix> {
    sample_random_density_with(dims, rank, &mut rng_for(seed, 0))
}

pub fn sample_random_density_with<R: Rng + ?Sized>(
    dims: Dims,
    rank: usize,
    rng: &mut R,
) -> Result<DensityMatrix> {
    let dims = Dims::new(dims.a, dims.b)?;
    let n = dims.total();
    if rank == 0 || rank > n {
        return Err(Error::InvalidRank { rank, max: n });
    }
    let g = ginibre(n, rank, rng);
    let gg = &g * g.adjoint();
    let trace = gg.trace().re;
    Ok(DensityMatrix {
        dims,
        mat: hermitize(&gg.unscale(trace)),
    })
}

/// Haar-random pure state: a normalized complex Gaussian vector.
pub fn sample_haar_pure(dims: Dims, seed: u64) -> Result<PureState> {
    sample_haar_pure_with(dims, &mut rng_for(seed, 0))
}

pub fn sample_haar_pure_with<R: Rng + ?Sized>(dims: Dims, rng: &mut R) -> Result<PureState> {
    let dims = Dims::new(dims.a, dims.b)?;
    let amps = CVector::from_iterator(
        dims.total(),
        (0..dims.total()).map(|_| complex_gaussian(rng)),
    );
    PureState::normalized(dims, amps)
}

/// Haar-random `n x n` unitary via QR of a Ginibre matrix with the phases of
/// `R`'s diagonal folded back into `Q`.
pub fn sample_haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let qr = ginibre(n, n, rng).qr();
    let (q, r) = (qr.q(), qr.r());
    CMatrix::from_fn(n, n, |row, col| {
        let d = r[(col, col)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            c64::new(1.0, 0.0)
        };
        q[(row, col)] * phase
    })
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn sigma_x() -> CMatrix {
    let (o, z) = (c64::new(1.0, 0.0), c64::new(0.0, 0.0));
    CMatrix::from_row_slice(2, 2, &[z, o, o, z])
}

pub fn sigma_y() -> CMatrix {
    let (i, z) = (c64::new(0.0, 1.0), c64::new(0.0, 0.0));
    CMatrix::from_row_slice(2, 2, &[z, -i, i, z])
}

pub fn sigma_z() -> CMatrix {
    let (o, z) = (c64::new(1.0, 0.0), c64::new(0.0, 0.0));
    CMatrix::from_row_slice(2, 2, &[o, z, z, -o])
}

/// Largest entry-wise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
