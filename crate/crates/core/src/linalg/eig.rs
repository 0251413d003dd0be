//! Eigendecompositions for small dense complex matrices.
//!
//! Hermitian problems use a cyclic complex Jacobi iteration (monotone
//! convergence, orthonormal eigenvectors by construction). General spectra
//! use Householder reduction to Hessenberg form followed by an explicitly
//! shifted QR iteration with Wilkinson shifts.

use ndarray::Array2;
use num_complex::Complex64;

use super::{
    all_finite, check_square, dagger, hermiticity_deviation, hermitize, max_abs, tol, ComplexMatrix,
    MAX_DIM, ONE, ZERO,
};
use crate::error::{Error, Result};

/// Result of a Hermitian eigendecomposition. Eigenvalues are sorted in
/// descending order; column k of `eigenvectors` belongs to `eigenvalues[k]`.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

const MAX_JACOBI_SWEEPS: usize = 100;

/// Eigendecomposition of a Hermitian matrix.
///
/// The input must be Hermitian within `tol::STRUCTURE`; sub-tolerance
/// asymmetry is symmetrized away before iterating.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEig> {
    let n = check_dims(m)?;
    let dev = hermiticity_deviation(m);
    if dev > tol::STRUCTURE {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let mut a = hermitize(m);
    let mut v = Array2::eye(n);
    let scale = max_abs(&a).max(1.0);
    let target = scale * 1e-15;

    let mut converged = false;
    for _ in 0..MAX_JACOBI_SWEEPS {
        let mut off: f64 = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[[p, q]].norm());
            }
        }
        if off <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        // One more check: the sweep loop above may exit with work done in the
        // final sweep that already reached the target.
        let mut off: f64 = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[[p, q]].norm());
            }
        }
        if off > target {
            return Err(Error::ConvergenceFailure {
                iterations: MAX_JACOBI_SWEEPS,
            });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[[i, i]].re).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));

    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut eigenvectors = Array2::from_elem((n, n), ZERO);
    for (dst, &src) in order.iter().enumerate() {
        for row in 0..n {
            eigenvectors[[row, dst]] = v[[row, src]];
        }
    }
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
    })
}

/// One complex Jacobi rotation zeroing a[p, q] (and a[q, p]).
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let beta = a[[p, q]];
    let abs_b = beta.norm();
    if abs_b == 0.0 {
        return;
    }
    let phase = beta / abs_b; // e^{iφ}
    let alpha = a[[p, p]].re;
    let gamma = a[[q, q]].re;
    let theta = 0.5 * (2.0 * abs_b).atan2(alpha - gamma);
    let (s, c) = theta.sin_cos();
    let n = a.nrows();

    // A ← J† A J with J the (p,q)-plane rotation diag-embedded unitary.
    for j in 0..n {
        let apj = a[[p, j]];
        let aqj = a[[q, j]];
        a[[p, j]] = apj * c + aqj * (phase * s);
        a[[q, j]] = -apj * (phase.conj() * s) + aqj * c;
    }
    for i in 0..n {
        let aip = a[[i, p]];
        let aiq = a[[i, q]];
        a[[i, p]] = aip * c + aiq * (phase.conj() * s);
        a[[i, q]] = -aip * (phase * s) + aiq * c;
    }
    // Closed forms for the rotated 2×2 block keep the zeros exact.
    let app = c * c * alpha + 2.0 * c * s * abs_b + s * s * gamma;
    let aqq = s * s * alpha - 2.0 * c * s * abs_b + c * c * gamma;
    a[[p, p]] = Complex64::new(app, 0.0);
    a[[q, q]] = Complex64::new(aqq, 0.0);
    a[[p, q]] = ZERO;
    a[[q, p]] = ZERO;

    for i in 0..n {
        let vip = v[[i, p]];
        let viq = v[[i, q]];
        v[[i, p]] = vip * c + viq * (phase.conj() * s);
        v[[i, q]] = -vip * (phase * s) + viq * c;
    }
}

/// Eigenvalue multiset of a general square complex matrix.
///
/// The product of the returned values matches det(m) and their sum matches
/// trace(m) to the accuracy of the QR iteration.
pub fn general_eigenvalues(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let n = check_dims(m)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![m[[0, 0]]]);
    }
    let scale = max_abs(m);
    if scale == 0.0 {
        return Ok(vec![ZERO; n]);
    }

    let mut h = m.clone();
    hessenberg(&mut h);

    let mut eigs = Vec::with_capacity(n);
    let mut hi = n - 1;
    let mut iters = 0usize;
    let mut stagnation = 0usize;
    let max_iters = 100 * n;
    loop {
        // Declare negligible subdiagonals zero.
        for k in 1..=hi {
            let floor = f64::EPSILON * (h[[k - 1, k - 1]].norm() + h[[k, k]].norm()).max(scale);
            if h[[k, k - 1]].norm() <= floor {
                h[[k, k - 1]] = ZERO;
            }
        }
        if hi == 0 || h[[hi, hi - 1]] == ZERO {
            eigs.push(h[[hi, hi]]);
            if hi == 0 {
                break;
            }
            hi -= 1;
            stagnation = 0;
            continue;
        }
        let mut lo = hi;
        while lo > 0 && h[[lo, lo - 1]] != ZERO {
            lo -= 1;
        }
        if hi - lo == 1 {
            let (l1, l2) = eig2(h[[lo, lo]], h[[lo, hi]], h[[hi, lo]], h[[hi, hi]]);
            eigs.push(l2);
            eigs.push(l1);
            if lo == 0 {
                break;
            }
            hi = lo - 1;
            stagnation = 0;
            continue;
        }

        iters += 1;
        stagnation += 1;
        if iters > max_iters {
            return Err(Error::ConvergenceFailure { iterations: iters });
        }
        let mu = if stagnation % 16 == 0 {
            // Exceptional shift to break rare symmetric stalls.
            h[[hi, hi]] + Complex64::new(0.75 * h[[hi, hi - 1]].norm(), 0.0)
        } else {
            wilkinson_shift(
                h[[hi - 1, hi - 1]],
                h[[hi - 1, hi]],
                h[[hi, hi - 1]],
                h[[hi, hi]],
            )
        };
        qr_step(&mut h, lo, hi, mu);
    }
    Ok(eigs)
}

/// Eigenvalues of [[a, b], [c, d]].
fn eig2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr - det * 4.0).sqrt();
    let l1 = (tr + disc) * 0.5;
    let l2 = (tr - disc) * 0.5;
    (l1, l2)
}

/// Eigenvalue of the trailing 2×2 block closest to its bottom-right entry.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let (l1, l2) = eig2(a, b, c, d);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// In-place Householder reduction to upper Hessenberg form.
fn hessenberg(h: &mut ComplexMatrix) {
    let n = h.nrows();
    for k in 0..n.saturating_sub(2) {
        let mut norm_x_sq = 0.0;
        for i in (k + 1)..n {
            norm_x_sq += h[[i, k]].norm_sqr();
        }
        let norm_x = norm_x_sq.sqrt();
        if norm_x < 1e-300 {
            continue;
        }
        let x0 = h[[k + 1, k]];
        let phase = if x0.norm() == 0.0 { ONE } else { x0 / x0.norm() };
        let alpha = -phase * norm_x;
        let mut v: Vec<Complex64> = ((k + 1)..n).map(|i| h[[i, k]]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 < 1e-300 {
            continue;
        }
        let inv = 2.0 / vnorm2;
        // Left reflection: rows k+1.. of columns k..
        for j in k..n {
            let mut dot = ZERO;
            for i in (k + 1)..n {
                dot += v[i - (k + 1)].conj() * h[[i, j]];
            }
            let f = dot * inv;
            for i in (k + 1)..n {
                let w = v[i - (k + 1)] * f;
                h[[i, j]] -= w;
            }
        }
        // Right reflection: columns k+1.. of every row.
        for i in 0..n {
            let mut dot = ZERO;
            for j in (k + 1)..n {
                dot += h[[i, j]] * v[j - (k + 1)];
            }
            let f = dot * inv;
            for j in (k + 1)..n {
                let w = f * v[j - (k + 1)].conj();
                h[[i, j]] -= w;
            }
        }
        h[[k + 1, k]] = alpha;
        for i in (k + 2)..n {
            h[[i, k]] = ZERO;
        }
    }
}

/// Givens pair (c real, s complex) with [[c, s], [-s̄, c]]·(f, g)ᵀ = (r, 0)ᵀ.
fn givens(f: Complex64, g: Complex64) -> (f64, Complex64) {
    let gn = g.norm();
    if gn == 0.0 {
        return (1.0, ZERO);
    }
    let fnm = f.norm();
    let r = (fnm * fnm + gn * gn).sqrt();
    if fnm == 0.0 {
        return (0.0, g.conj() / gn);
    }
    let c = fnm / r;
    let s = (f / fnm) * g.conj() / r;
    (c, s)
}

/// One explicit shifted QR step on the active block [lo, hi] of a Hessenberg
/// matrix: H ← Q†(H − μI)Q + μI.
fn qr_step(h: &mut ComplexMatrix, lo: usize, hi: usize, mu: Complex64) {
    for k in lo..=hi {
        h[[k, k]] -= mu;
    }
    let mut rots = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let (c, s) = givens(h[[k, k]], h[[k + 1, k]]);
        rots.push((c, s));
        for j in k..=hi {
            let x = h[[k, j]];
            let y = h[[k + 1, j]];
            h[[k, j]] = x * c + y * s;
            h[[k + 1, j]] = -x * s.conj() + y * c;
        }
        h[[k + 1, k]] = ZERO;
    }
    for (idx, &(c, s)) in rots.iter().enumerate() {
        let k = lo + idx;
        let row_end = hi.min(k + 1);
        for i in lo..=row_end {
            let x = h[[i, k]];
            let y = h[[i, k + 1]];
            h[[i, k]] = x * c + y * s.conj();
            h[[i, k + 1]] = -x * s + y * c;
        }
    }
    for k in lo..=hi {
        h[[k, k]] += mu;
    }
}

/// Principal square root of a Hermitian positive-semidefinite matrix.
///
/// Eigenvalues in [`tol::PSD_REJECT`], 0) are clamped to zero; anything more
/// negative is rejected as an invalid PSD input.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(m)?;
    if let Some(&min) = eig.eigenvalues.last() {
        if min < tol::PSD_REJECT {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
    }
    let n = m.nrows();
    let mut root = Array2::from_elem((n, n), ZERO);
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        let s = lambda.max(0.0).sqrt();
        if s == 0.0 {
            continue;
        }
        for i in 0..n {
            let vi = eig.eigenvectors[[i, k]];
            for j in 0..n {
                root[[i, j]] += vi * eig.eigenvectors[[j, k]].conj() * s;
            }
        }
    }
    Ok(hermitize(&root))
}

/// Singular values in descending order (length min(rows, cols)).
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let (rows, cols) = m.dim();
    let k = rows.min(cols);
    if k == 0 {
        return Vec::new();
    }
    let gram = hermitize(&dagger(m).dot(m));
    let eig = hermitian_eig(&gram).expect("cyclic Jacobi converges on Hermitian input");
    eig.eigenvalues
        .iter()
        .take(k)
        .map(|&l| l.max(0.0).sqrt())
        .collect()
}

fn check_dims(m: &ComplexMatrix) -> Result<usize> {
    let n = check_square(m, "eigendecomposition")?;
    if n > MAX_DIM {
        return Err(Error::DimensionMismatch(format!(
            "matrix side {n} exceeds supported maximum {MAX_DIM}"
        )));
    }
    if !all_finite(m) {
        return Err(Error::NonFiniteEntry);
    }
    Ok(n)
}
