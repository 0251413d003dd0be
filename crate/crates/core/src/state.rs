//! Validated two-qubit density operators and the initial pure-state families.
//!
//! Computational basis order is |00⟩, |01⟩, |10⟩, |11⟩ with qubit A on the
//! slow (left) tensor factor. Pauli indices are ordered (x, y, z).

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    all_finite, hermitian_eig, hermiticity_deviation, identity, pauli, tensor, tol, trace,
    ComplexMatrix, ZERO,
};

/// Validated 4×4 density operator of the bipartite system AB.
///
/// Invariants enforced at construction: Hermitian within `tol::STRUCTURE`,
/// unit trace within `tol::STRUCTURE`, and positive semidefinite with
/// eigenvalues above `tol::EIG_FLOOR`.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitPairState {
    matrix: ComplexMatrix,
}

impl QubitPairState {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.dim() != (4, 4) {
            return Err(Error::DimensionMismatch(format!(
                "two-qubit state must be 4×4, got {}×{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if !all_finite(&matrix) {
            return Err(Error::NonFiniteEntry);
        }
        let dev = hermiticity_deviation(&matrix);
        if dev > tol::STRUCTURE {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let tr = trace(&matrix);
        if (tr.re - 1.0).abs() > tol::STRUCTURE || tr.im.abs() > tol::STRUCTURE {
            return Err(Error::NotUnitTrace { trace: tr.re });
        }
        let eig = hermitian_eig(&matrix)?;
        let min = *eig
            .eigenvalues
            .last()
            .expect("4×4 spectrum is never empty");
        if min < tol::EIG_FLOOR {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
        Ok(Self { matrix })
    }

    /// Density matrix of a normalized pure state |ψ⟩⟨ψ|.
    pub fn from_pure(ket: &[Complex64; 4]) -> Result<Self> {
        let mut matrix = Array2::from_elem((4, 4), ZERO);
        for i in 0..4 {
            for j in 0..4 {
                matrix[[i, j]] = ket[i] * ket[j].conj();
            }
        }
        Self::new(matrix)
    }

    pub fn maximally_mixed() -> Self {
        Self {
            matrix: identity(4).mapv(|z| z * 0.25),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// tr(ρ²); 1 for pure states.
    pub fn purity(&self) -> f64 {
        trace(&self.matrix.dot(&self.matrix)).re
    }
}

/// Sign of the superposition in the pure-state families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            other => Err(Error::InvalidConfig(format!(
                "sign must be '+' or '-', got '{other}'"
            ))),
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// The two initial pure-state families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateFamily {
    /// α|01⟩ ± β|10⟩
    Antiparallel,
    /// α|00⟩ ± β|11⟩
    Parallel,
}

impl std::str::FromStr for StateFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "antiparallel" => Ok(StateFamily::Antiparallel),
            "parallel" => Ok(StateFamily::Parallel),
            other => Err(Error::InvalidConfig(format!(
                "state family must be 'antiparallel' or 'parallel', got '{other}'"
            ))),
        }
    }
}

impl std::fmt::Display for StateFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StateFamily::Antiparallel => "antiparallel",
            StateFamily::Parallel => "parallel",
        })
    }
}

fn check_alpha(alpha: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) || !alpha.is_finite() {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            expected: "[0, 1]",
        });
    }
    Ok((1.0 - alpha * alpha).sqrt())
}

/// Pure anti-parallel state α|01⟩ ± β|10⟩ with β = √(1−α²).
pub fn antiparallel_state(alpha: f64, sign: Sign) -> Result<QubitPairState> {
    let beta = check_alpha(alpha)?;
    QubitPairState::from_pure(&[
        ZERO,
        Complex64::new(alpha, 0.0),
        Complex64::new(sign.factor() * beta, 0.0),
        ZERO,
    ])
}

/// Pure parallel state α|00⟩ ± β|11⟩ with β = √(1−α²).
pub fn parallel_state(alpha: f64, sign: Sign) -> Result<QubitPairState> {
    let beta = check_alpha(alpha)?;
    QubitPairState::from_pure(&[
        Complex64::new(alpha, 0.0),
        ZERO,
        ZERO,
        Complex64::new(sign.factor() * beta, 0.0),
    ])
}

pub fn family_state(family: StateFamily, sign: Sign, alpha: f64) -> Result<QubitPairState> {
    match family {
        StateFamily::Antiparallel => antiparallel_state(alpha, sign),
        StateFamily::Parallel => parallel_state(alpha, sign),
    }
}

/// Pauli correlation matrix T_ij = ⟨σ_i ⊗ σ_j⟩ and the local Bloch vectors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationData {
    pub t_matrix: [[f64; 3]; 3],
    pub a_vector: [f64; 3],
    pub b_vector: [f64; 3],
}

/// Pauli expectation data of a state. Every entry of a valid state is real
/// up to numerical residue and lies in [−1, 1].
pub fn correlation_data(state: &QubitPairState) -> CorrelationData {
    let rho = state.matrix();
    let expect = |op: &ComplexMatrix| -> f64 {
        let val = trace(&rho.dot(op));
        debug_assert!(val.im.abs() < tol::STRUCTURE);
        val.re
    };
    let mut t_matrix = [[0.0; 3]; 3];
    let mut a_vector = [0.0; 3];
    let mut b_vector = [0.0; 3];
    let eye = identity(2);
    for i in 0..3 {
        a_vector[i] = expect(&tensor(&pauli(i), &eye));
        b_vector[i] = expect(&tensor(&eye, &pauli(i)));
        for j in 0..3 {
            t_matrix[i][j] = expect(&tensor(&pauli(i), &pauli(j)));
        }
    }
    CorrelationData {
        t_matrix,
        a_vector,
        b_vector,
    }
}
