//! Correlation measures: concurrence and the two-setting steering functional.
//!
//! Concurrence follows the spin-flip construction: with
//! ρ̃ = (σy⊗σy)·ρ*·(σy⊗σy) and λ₁ ≥ … ≥ λ₄ the eigenvalues of ρ·ρ̃,
//!
//!   C(ρ) = max(√λ₁ − √λ₂ − √λ₃ − √λ₄, 0).
//!
//! Steering is certified through the CHSH-type functional in which B
//! measures σ_z and σ_x while A's dichotomic observables a₀·σ, a₁·σ are
//! optimized over:
//!
//!   S(ρ) = max_{a₀,a₁} √(⟨(A₀+A₁)B₀⟩² + ⟨(A₀+A₁)B₁⟩²)
//!                    + √(⟨(A₀−A₁)B₀⟩² + ⟨(A₀−A₁)B₁⟩²),
//!
//! with ⟨A B⟩ = aᵀT b for the Pauli correlation matrix T. Values above 2
//! witness steerability; the quantum maximum is 2√2. The analytic reduction
//! evaluates S as twice the Frobenius norm of the 3×2 matrix [T e_z, T e_x];
//! [`steering_value_oracle`] maximizes the functional directly over a
//! spherical grid and is the independent check the reduction is gated on.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{general_eigenvalues, pauli_y, tensor, tol, ComplexMatrix};
use crate::state::{correlation_data, QubitPairState};

/// Classical bound of the steering functional.
pub const STEERING_BOUND: f64 = 2.0;

/// Quantum maximum of the steering functional, 2√2.
pub const STEERING_MAX: f64 = 2.0 * std::f64::consts::SQRT_2;

/// Convention for the spin-flipped matrix entering the concurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpinFlip {
    /// ρ̃ = (σy⊗σy)·ρ*·(σy⊗σy): the standard definition.
    #[default]
    Conjugated,
    /// ρ̃ = (σy⊗σy)·ρ·(σy⊗σy), without conjugation. Coincides with
    /// `Conjugated` for states that are real in the computational basis.
    Unconjugated,
}

/// Concurrence with the standard (conjugated) spin flip.
pub fn concurrence(state: &QubitPairState) -> Result<f64> {
    concurrence_with(state, SpinFlip::Conjugated)
}

/// Concurrence under an explicit spin-flip convention.
pub fn concurrence_with(state: &QubitPairState, convention: SpinFlip) -> Result<f64> {
    let rho = state.matrix();
    let yy = tensor(&pauli_y(), &pauli_y());
    let flipped: ComplexMatrix = match convention {
        SpinFlip::Conjugated => rho.mapv(|z| z.conj()),
        SpinFlip::Unconjugated => rho.clone(),
    };
    let rho_tilde = yy.dot(&flipped).dot(&yy);
    let eigenvalues = general_eigenvalues(&rho.dot(&rho_tilde))?;

    let mut lambdas = [0.0f64; 4];
    for (slot, z) in lambdas.iter_mut().zip(eigenvalues) {
        if z.im.abs() > tol::IM_DISCARD {
            return Err(Error::ComplexSpectrum { imaginary: z.im });
        }
        // The √λ step would blow eigenvalue noise on exact zeros up to ~1e-8,
        // so the floor snaps them to zero before clamping.
        let mut x = z.re;
        if x.abs() < tol::SPECTRUM_FLOOR {
            x = 0.0;
        }
        *slot = x.max(0.0);
    }
    lambdas.sort_by(|a, b| b.total_cmp(a));
    let roots: Vec<f64> = lambdas.iter().map(|l| l.sqrt()).collect();
    Ok((roots[0] - roots[1] - roots[2] - roots[3]).max(0.0))
}

/// Result of the steering maximization.
#[derive(Debug, Clone, Serialize)]
pub struct SteeringResult {
    /// Maximized functional value in [0, 2√2].
    pub value: f64,
    /// Whether the value exceeds the classical bound 2.
    pub violates: bool,
    /// Bloch vector of A's first optimal observable.
    pub optimal_a0: [f64; 3],
    /// Bloch vector of A's second optimal observable.
    pub optimal_a1: [f64; 3],
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Functional value at fixed observables a₀, a₁ against columns t_z, t_x.
fn functional(a0: [f64; 3], a1: [f64; 3], tz: [f64; 3], tx: [f64; 3]) -> f64 {
    let u = [a0[0] + a1[0], a0[1] + a1[1], a0[2] + a1[2]];
    let v = [a0[0] - a1[0], a0[1] - a1[1], a0[2] - a1[2]];
    f64::hypot(dot3(u, tz), dot3(u, tx)) + f64::hypot(dot3(v, tz), dot3(v, tx))
}

/// Analytic maximum of the steering functional with optimal observables.
pub fn steering_value(state: &QubitPairState) -> SteeringResult {
    let data = correlation_data(state);
    let t = &data.t_matrix;
    let tz = [t[0][2], t[1][2], t[2][2]];
    let tx = [t[0][0], t[1][0], t[2][0]];

    // Singular structure of the 3×2 matrix [t_z t_x] through its 2×2 Gram
    // matrix; the functional maximum is 2·√(s₁² + s₂²).
    let a = dot3(tz, tz);
    let b = dot3(tz, tx);
    let c = dot3(tx, tx);
    let mean = 0.5 * (a + c);
    let delta = f64::hypot(0.5 * (a - c), b);
    let l1 = (mean + delta).max(0.0);
    let l2 = (mean - delta).max(0.0);
    let s1 = l1.sqrt();
    let s2 = l2.sqrt();
    let value = 2.0 * f64::hypot(s1, s2);

    const DEGENERATE: f64 = 1e-12;
    let (optimal_a0, optimal_a1) = if s1 < DEGENERATE {
        // Zero correlation block: any observables attain the (zero) maximum.
        ([0.0, 0.0, 1.0], [1.0, 0.0, 0.0])
    } else {
        // Right singular vector for s₁, then the left vectors u_i = M v_i/s_i.
        let v1 = if b.abs() > 1e-300 {
            normalize2([b, l1 - a])
        } else if a >= c {
            [1.0, 0.0]
        } else {
            [0.0, 1.0]
        };
        let u1 = normalize3([
            (tz[0] * v1[0] + tx[0] * v1[1]) / s1,
            (tz[1] * v1[0] + tx[1] * v1[1]) / s1,
            (tz[2] * v1[0] + tx[2] * v1[1]) / s1,
        ]);
        if s2 < DEGENERATE {
            (u1, u1)
        } else {
            let v2 = [-v1[1], v1[0]];
            let u2 = normalize3([
                (tz[0] * v2[0] + tx[0] * v2[1]) / s2,
                (tz[1] * v2[0] + tx[1] * v2[1]) / s2,
                (tz[2] * v2[0] + tx[2] * v2[1]) / s2,
            ]);
            let (sin_t, cos_t) = (s2 / f64::hypot(s1, s2), s1 / f64::hypot(s1, s2));
            let a0 = normalize3([
                cos_t * u1[0] + sin_t * u2[0],
                cos_t * u1[1] + sin_t * u2[1],
                cos_t * u1[2] + sin_t * u2[2],
            ]);
            let a1 = normalize3([
                cos_t * u1[0] - sin_t * u2[0],
                cos_t * u1[1] - sin_t * u2[1],
                cos_t * u1[2] - sin_t * u2[2],
            ]);
            (a0, a1)
        }
    };

    SteeringResult {
        value,
        violates: value > STEERING_BOUND + 1e-12,
        optimal_a0,
        optimal_a1,
    }
}

fn normalize2(v: [f64; 2]) -> [f64; 2] {
    let n = f64::hypot(v[0], v[1]);
    [v[0] / n, v[1] / n]
}

fn normalize3(v: [f64; 3]) -> [f64; 3] {
    let n = dot3(v, v).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

fn unit_from_angles(theta: f64, phi: f64) -> [f64; 3] {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [st * cp, st * sp, ct]
}

/// Brute-force maximization of the steering functional.
///
/// Both observables are parametrized by spherical angles on a
/// `grid_density`² grid, the best grid pair is refined by coordinate ascent
/// with step halving down to 1e-7. The result is a lower bound on the true
/// maximum that converges to [`steering_value`] as the grid grows.
pub fn steering_value_oracle(state: &QubitPairState, grid_density: usize) -> Result<f64> {
    if grid_density < 24 {
        return Err(Error::InvalidParameter {
            name: "grid_density",
            value: grid_density as f64,
            expected: "at least 24",
        });
    }
    let data = correlation_data(state);
    let t = &data.t_matrix;
    let tz = [t[0][2], t[1][2], t[2][2]];
    let tx = [t[0][0], t[1][0], t[2][0]];

    let g = grid_density;
    let mut angles = Vec::with_capacity(g * g);
    let mut projections = Vec::with_capacity(g * g);
    for it in 0..g {
        let theta = std::f64::consts::PI * it as f64 / (g - 1) as f64;
        for ip in 0..g {
            let phi = 2.0 * std::f64::consts::PI * ip as f64 / g as f64;
            let a = unit_from_angles(theta, phi);
            angles.push((theta, phi));
            projections.push((dot3(a, tz), dot3(a, tx)));
        }
    }

    let mut best = f64::NEG_INFINITY;
    let mut best_pair = (0usize, 0usize);
    for i in 0..projections.len() {
        let (pz, px) = projections[i];
        // The functional is symmetric in (a₀, a₁); scan j ≥ i.
        for (j, &(qz, qx)) in projections.iter().enumerate().skip(i) {
            let val = f64::hypot(pz + qz, px + qx) + f64::hypot(pz - qz, px - qx);
            if val > best {
                best = val;
                best_pair = (i, j);
            }
        }
    }

    let mut coords = [
        angles[best_pair.0].0,
        angles[best_pair.0].1,
        angles[best_pair.1].0,
        angles[best_pair.1].1,
    ];
    let eval = |c: &[f64; 4]| {
        functional(
            unit_from_angles(c[0], c[1]),
            unit_from_angles(c[2], c[3]),
            tz,
            tx,
        )
    };
    let mut current = eval(&coords);
    let mut step = std::f64::consts::PI / g as f64;
    while step > 1e-7 {
        let mut improved = false;
        for k in 0..4 {
            for sign in [1.0, -1.0] {
                let mut trial = coords;
                trial[k] += sign * step;
                let val = eval(&trial);
                if val > current {
                    coords = trial;
                    current = val;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Ok(current.max(best))
}
