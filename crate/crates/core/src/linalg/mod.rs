//! Dense complex linear algebra for small operator matrices.
//!
//! Everything in the crate runs on `ComplexMatrix` (row-major
//! `ndarray::Array2<Complex64>`). Matrices stay tiny (hard cap 64×64, 8×8 in
//! practice), so the eigensolvers below are written for robustness rather
//! than scale: cyclic Jacobi for Hermitian problems and a shifted QR
//! iteration for general spectra.

mod basis;
mod eig;

pub use basis::complete_orthonormal_basis;
pub use eig::{general_eigenvalues, hermitian_eig, psd_sqrt, singular_values, HermitianEig};

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix, the universal numerical carrier.
pub type ComplexMatrix = Array2<Complex64>;

/// Dense complex vector.
pub type ComplexVector = Array1<Complex64>;

/// Largest matrix side this crate is designed for.
pub const MAX_DIM: usize = 64;

/// Numerical tolerances, fixed globally. Matrices are at most 8×8 in the
/// protocols, so double precision leaves a wide margin around each threshold.
pub mod tol {
    /// Hermiticity, unitarity, completeness and orthonormality checks.
    pub const STRUCTURE: f64 = 1e-10;
    /// Reconstruction identities (V·Λ·V† = A, R·R = A, channel round trips).
    pub const RECONSTRUCTION: f64 = 1e-9;
    /// Eigenvalues above this floor count as nonnegative and are clamped to 0.
    pub const EIG_FLOOR: f64 = -1e-10;
    /// PSD square root rejects spectra below this.
    pub const PSD_REJECT: f64 = -1e-8;
    /// Selective-measurement probabilities at or below this are null outcomes.
    pub const NULL_PROBABILITY: f64 = 1e-12;
    /// Imaginary parts below this are discarded where a real spectrum is expected.
    pub const IM_DISCARD: f64 = 1e-8;
    /// Gram-Schmidt completion drops candidates whose residual norm is below this.
    pub const BASIS_RESIDUAL: f64 = 1e-8;
    /// |λ| below this in a product spectrum is treated as an exact zero.
    /// Guards the √λ step in the spin-flip measure: the square root would
    /// amplify O(1e-16) eigenvalue noise to O(1e-8).
    pub const SPECTRUM_FLOOR: f64 = 1e-13;
}

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// n×n identity.
pub fn identity(n: usize) -> ComplexMatrix {
    Array2::eye(n)
}

/// Real matrix promoted to complex storage.
pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> ComplexMatrix {
    assert_eq!(entries.len(), rows * cols);
    Array2::from_shape_vec(
        (rows, cols),
        entries.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
    )
    .expect("shape checked above")
}

/// Conjugate transpose.
pub fn dagger(m: &ComplexMatrix) -> ComplexMatrix {
    m.t().mapv(|z| z.conj())
}

/// Trace of a square matrix.
pub fn trace(m: &ComplexMatrix) -> Complex64 {
    m.diag().sum()
}

/// Largest entry magnitude.
pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entrywise deviation between two matrices of equal shape.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    debug_assert_eq!(a.dim(), b.dim());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Frobenius norm.
pub fn frobenius_norm(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// True when every entry is finite.
pub fn all_finite(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Max |m − m†| over all entries; 0 for an exactly Hermitian matrix.
pub fn hermiticity_deviation(m: &ComplexMatrix) -> f64 {
    let n = m.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in 0..=i {
            dev = dev.max((m[[i, j]] - m[[j, i]].conj()).norm());
        }
    }
    dev
}

/// (m + m†)/2 — removes sub-tolerance asymmetry before Hermitian routines.
pub(crate) fn hermitize(m: &ComplexMatrix) -> ComplexMatrix {
    (m + &dagger(m)).mapv(|z| z * 0.5)
}

/// Max |U†U − I|.
pub fn unitarity_residual(u: &ComplexMatrix) -> f64 {
    let n = u.ncols();
    max_abs_diff(&dagger(u).dot(u), &identity(n))
}

pub(crate) fn check_square(m: &ComplexMatrix, what: &str) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "{what} requires a square matrix, got {}×{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m.nrows())
}

/// Kronecker product a ⊗ b. The left factor indexes the slow (most
/// significant) subsystem: row (i, k) of the product is i·b.rows + k.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::from_elem((ar * br, ac * bc), ZERO);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[[i, j]];
            if aij == ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[[i * br + k, j * bc + l]] = aij * b[[k, l]];
                }
            }
        }
    }
    out
}

/// Partial trace over the second (fast) subsystem of a bipartite operator on
/// a space of dimension `dim_first · dim_second`. Preserves the total trace.
pub fn partial_trace_second(
    m: &ComplexMatrix,
    dim_first: usize,
    dim_second: usize,
) -> Result<ComplexMatrix> {
    let n = check_square(m, "partial_trace_second")?;
    if n != dim_first * dim_second {
        return Err(Error::DimensionMismatch(format!(
            "matrix side {n} does not factor as {dim_first}·{dim_second}"
        )));
    }
    let mut out = Array2::from_elem((dim_first, dim_first), ZERO);
    for i in 0..dim_first {
        for j in 0..dim_first {
            let mut sum = ZERO;
            for k in 0..dim_second {
                sum += m[[i * dim_second + k, j * dim_second + k]];
            }
            out[[i, j]] = sum;
        }
    }
    Ok(out)
}

/// Pauli X.
pub fn pauli_x() -> ComplexMatrix {
    from_real(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

/// Pauli Y.
pub fn pauli_y() -> ComplexMatrix {
    let mut m = Array2::from_elem((2, 2), ZERO);
    m[[0, 1]] = Complex64::new(0.0, -1.0);
    m[[1, 0]] = Complex64::new(0.0, 1.0);
    m
}

/// Pauli Z.
pub fn pauli_z() -> ComplexMatrix {
    from_real(2, 2, &[1.0, 0.0, 0.0, -1.0])
}

/// σ_i for i in x, y, z order.
pub fn pauli(index: usize) -> ComplexMatrix {
    match index {
        0 => pauli_x(),
        1 => pauli_y(),
        2 => pauli_z(),
        _ => panic!("pauli index must be 0, 1 or 2"),
    }
}
