//! Seeded random inputs shared by the integration suites.

use ndarray::Array2;
use num_complex::Complex64;
use qprotect::linalg::{dagger, hermitian_eig, trace, ComplexMatrix};
use qprotect::{KrausChannel, QubitPairState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn symmetric_unit(r: &mut ChaCha8Rng) -> f64 {
    r.random::<f64>() * 2.0 - 1.0
}

pub fn random_complex(r: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    Array2::from_shape_fn((n, n), |_| {
        Complex64::new(symmetric_unit(r), symmetric_unit(r))
    })
}

fn hermitize(m: &ComplexMatrix) -> ComplexMatrix {
    (m + &dagger(m)).mapv(|z| z * 0.5)
}

pub fn random_density(r: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let g = random_complex(r, n);
    let m = hermitize(&g.dot(&dagger(&g)));
    let t = trace(&m).re;
    m.mapv(|z| z / t)
}

pub fn random_state(r: &mut ChaCha8Rng) -> QubitPairState {
    QubitPairState::new(random_density(r, 4)).expect("normalized Gram matrix is a state")
}

/// Random qubit channel with `n_ops` Kraus operators (whitened random
/// matrices, so completeness holds by construction).
pub fn random_kraus_channel(r: &mut ChaCha8Rng, n_ops: usize) -> KrausChannel {
    let gs: Vec<ComplexMatrix> = (0..n_ops).map(|_| random_complex(r, 2)).collect();
    let mut total = Array2::from_elem((2, 2), Complex64::new(0.0, 0.0));
    for g in &gs {
        total = total + dagger(g).dot(g);
    }
    let eig = hermitian_eig(&hermitize(&total)).expect("Gram sum is Hermitian");
    let mut inv_root = Array2::from_elem((2, 2), Complex64::new(0.0, 0.0));
    for (k, &l) in eig.eigenvalues.iter().enumerate() {
        let f = Complex64::new(1.0 / l.sqrt(), 0.0);
        for i in 0..2 {
            for j in 0..2 {
                inv_root[[i, j]] += eig.eigenvectors[[i, k]] * eig.eigenvectors[[j, k]].conj() * f;
            }
        }
    }
    let ops = gs.into_iter().map(|g| g.dot(&inv_root)).collect();
    KrausChannel::new(ops, "random").expect("whitened operators are complete")
}

/// Σ K ρ K† evaluated directly, the oracle side of dilation round trips.
pub fn kraus_sum(ops: &[ComplexMatrix], rho: &ComplexMatrix) -> ComplexMatrix {
    let d = rho.nrows();
    let mut out = Array2::from_elem((d, d), Complex64::new(0.0, 0.0));
    for op in ops {
        out = out + op.dot(rho).dot(&dagger(op));
    }
    out
}
