//! Orthonormal basis completion by deterministic Gram-Schmidt extension.

use ndarray::Array1;
use num_complex::Complex64;

use super::{tol, ComplexVector, ZERO};
use crate::error::{Error, Result};

fn inner(a: &ComplexVector, b: &ComplexVector) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &ComplexVector) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Extend a set of pairwise orthonormal vectors to a full orthonormal basis
/// of their ambient space.
///
/// The inputs are returned unchanged at the front of the result. Completion
/// is deterministic: standard-basis vectors are tried in index order,
/// projected against everything accepted so far, and discarded when the
/// residual norm falls below [`tol::BASIS_RESIDUAL`].
pub fn complete_orthonormal_basis(partial: &[ComplexVector]) -> Result<Vec<ComplexVector>> {
    let n = match partial.first() {
        Some(v) => v.len(),
        None => {
            return Err(Error::DimensionMismatch(
                "basis completion needs at least one input vector".into(),
            ))
        }
    };
    if partial.len() > n {
        return Err(Error::DimensionMismatch(format!(
            "{} input vectors exceed dimension {n}",
            partial.len()
        )));
    }
    let mut gram_dev: f64 = 0.0;
    for (i, v) in partial.iter().enumerate() {
        if v.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "input vector {i} has length {} != {n}",
                v.len()
            )));
        }
        for (j, w) in partial.iter().enumerate() {
            let expected = if i == j { 1.0 } else { 0.0 };
            gram_dev = gram_dev.max((inner(v, w) - expected).norm());
        }
    }
    if gram_dev > tol::STRUCTURE {
        return Err(Error::NotOrthonormal {
            deviation: gram_dev,
        });
    }

    let mut basis: Vec<ComplexVector> = partial.to_vec();
    for idx in 0..n {
        if basis.len() == n {
            break;
        }
        let mut candidate = Array1::from_elem(n, ZERO);
        candidate[idx] = Complex64::new(1.0, 0.0);
        // Two projection passes keep the completion orthogonal to working
        // precision even when a candidate is nearly inside the span.
        for _ in 0..2 {
            for v in &basis {
                let overlap = inner(v, &candidate);
                for (c, vi) in candidate.iter_mut().zip(v.iter()) {
                    *c -= overlap * vi;
                }
            }
        }
        let residual = norm(&candidate);
        if residual < tol::BASIS_RESIDUAL {
            continue;
        }
        basis.push(candidate.mapv(|z| z / residual));
    }
    if basis.len() != n {
        return Err(Error::CompletionFailure {
            accepted: basis.len(),
            needed: n,
        });
    }
    Ok(basis)
}
