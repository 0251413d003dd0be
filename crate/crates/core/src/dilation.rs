//! Unitary dilations of Kraus channels and inverse-channel extraction.
//!
//! Index conventions, used everywhere below: the joint system⊗ancilla basis
//! is ordered with the system index slow and the ancilla index fast, so the
//! joint row (α, i) sits at α·M + i for system dimension d and ancilla
//! dimension M. The ancilla starts in its first basis vector (index 0).
//! A dilation U realizes its channel as
//!
//!   N(ρ) = Tr_anc[ U (ρ ⊗ |0⟩⟨0|_anc) U† ],
//!
//! equivalently through the extracted operators L_i = ⟨i|_anc U |0⟩_anc.
//! The channel of the inverse evolution U† has Kraus operators
//! J_i[l, k] = conj(U[(k, 0), (l, i)]).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::KrausChannel;
use crate::error::{Error, Result};
use crate::linalg::{
    complete_orthonormal_basis, dagger, from_real, hermitize, partial_trace_second, psd_sqrt,
    tensor, tol, unitarity_residual, ComplexMatrix, ComplexVector, ZERO,
};

/// dM×dM unitary together with its factorization shape and the ancilla
/// input index.
#[derive(Debug, Clone)]
pub struct UnitaryDilation {
    matrix: ComplexMatrix,
    system_dim: usize,
    ancilla_dim: usize,
    ancilla_init: usize,
}

impl UnitaryDilation {
    pub fn new(
        matrix: ComplexMatrix,
        system_dim: usize,
        ancilla_dim: usize,
        ancilla_init: usize,
    ) -> Result<Self> {
        let n = system_dim * ancilla_dim;
        if matrix.dim() != (n, n) {
            return Err(Error::DimensionMismatch(format!(
                "dilation must be {n}×{n} for d = {system_dim}, M = {ancilla_dim}"
            )));
        }
        if ancilla_init >= ancilla_dim {
            return Err(Error::DimensionMismatch(format!(
                "ancilla input index {ancilla_init} outside dimension {ancilla_dim}"
            )));
        }
        let residual = unitarity_residual(&matrix);
        if residual > tol::STRUCTURE {
            return Err(Error::NotUnitary { residual });
        }
        let dilation = Self {
            matrix,
            system_dim,
            ancilla_dim,
            ancilla_init,
        };
        let extracted = KrausChannel::new(dilation.kraus_operators(), "extracted")?;
        debug_assert!(extracted.completeness_residual() <= tol::STRUCTURE);
        Ok(dilation)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn system_dim(&self) -> usize {
        self.system_dim
    }

    pub fn ancilla_dim(&self) -> usize {
        self.ancilla_dim
    }

    pub fn ancilla_init(&self) -> usize {
        self.ancilla_init
    }

    pub fn unitarity_residual(&self) -> f64 {
        unitarity_residual(&self.matrix)
    }

    /// Operators L_i = ⟨i|_anc U |init⟩_anc of the realized channel.
    pub fn kraus_operators(&self) -> Vec<ComplexMatrix> {
        let (d, m) = (self.system_dim, self.ancilla_dim);
        (0..m)
            .map(|i| {
                let mut op = ComplexMatrix::from_elem((d, d), ZERO);
                for alpha in 0..d {
                    for beta in 0..d {
                        op[[alpha, beta]] =
                            self.matrix[[alpha * m + i, beta * m + self.ancilla_init]];
                    }
                }
                op
            })
            .collect()
    }

    /// Channel action Tr_anc[U (ρ ⊗ |init⟩⟨init|) U†] on a system operator.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.apply_matrix(&self.matrix, rho)
    }

    /// Channel of the inverse evolution: Tr_anc[U† (ρ ⊗ |init⟩⟨init|) U].
    pub fn apply_inverse(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.apply_matrix(&dagger(&self.matrix), rho)
    }

    fn apply_matrix(&self, u: &ComplexMatrix, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        let (d, m) = (self.system_dim, self.ancilla_dim);
        if rho.dim() != (d, d) {
            return Err(Error::DimensionMismatch(format!(
                "system operator must be {d}×{d}"
            )));
        }
        let mut anc = ComplexMatrix::from_elem((m, m), ZERO);
        anc[[self.ancilla_init, self.ancilla_init]] = Complex64::new(1.0, 0.0);
        let joint = u.dot(&tensor(rho, &anc)).dot(&dagger(u));
        partial_trace_second(&joint, d, m)
    }
}

/// Build a unitary dilation of a Kraus channel.
///
/// The d columns at joint index (β, 0) are fixed by the channel,
/// c_β[(α, i)] = ⟨α|K_i|β⟩; the remaining columns come from deterministic
/// Gram-Schmidt completion (so the result is one of the many valid
/// dilations, not a canonical one).
pub fn build_dilation(channel: &KrausChannel) -> Result<UnitaryDilation> {
    let d = channel.dim();
    let m = channel.operators().len();
    let n = d * m;
    let fixed: Vec<ComplexVector> = (0..d)
        .map(|beta| {
            let mut col = ComplexVector::from_elem(n, ZERO);
            for (i, op) in channel.operators().iter().enumerate() {
                for alpha in 0..d {
                    col[alpha * m + i] = op[[alpha, beta]];
                }
            }
            col
        })
        .collect();
    let basis = complete_orthonormal_basis(&fixed)?;

    let mut matrix = ComplexMatrix::from_elem((n, n), ZERO);
    let mut completion = basis[d..].iter();
    for col in 0..n {
        let source = if col % m == 0 {
            &basis[col / m]
        } else {
            completion
                .next()
                .expect("completion yields exactly n - d vectors")
        };
        for row in 0..n {
            matrix[[row, col]] = source[row];
        }
    }
    UnitaryDilation::new(matrix, d, m, 0)
}

/// Kraus operators of the channel generated by the inverse evolution U†,
/// in ancilla-index order: J_i[l, k] = conj(U[(k, 0), (l, i)]).
pub fn inverse_channel_kraus(dilation: &UnitaryDilation) -> Result<KrausChannel> {
    let (d, m) = (dilation.system_dim(), dilation.ancilla_dim());
    let init = dilation.ancilla_init();
    let u = dilation.matrix();
    let operators: Vec<ComplexMatrix> = (0..m)
        .map(|i| {
            let mut op = ComplexMatrix::from_elem((d, d), ZERO);
            for l in 0..d {
                for k in 0..d {
                    op[[l, k]] = u[[k * m + init, l * m + i]].conj();
                }
            }
            op
        })
        .collect();
    KrausChannel::new(operators, "inverse")
}

/// POVM elements M_i = (J_i†J_i)^{1/2} of an inverse-channel Kraus set.
/// Completeness Σ M_i†M_i = I is inherited from the input set.
pub fn povm_elements(inverse: &KrausChannel) -> Result<Vec<ComplexMatrix>> {
    inverse
        .operators()
        .iter()
        .map(|j| psd_sqrt(&hermitize(&dagger(j).dot(j))))
        .collect()
}

fn check_gadc_params(nu: f64, eta: f64) -> Result<()> {
    for (name, value) in [("nu", nu), ("eta", eta)] {
        if !(0.0..=1.0).contains(&value) || !value.is_finite() {
            return Err(Error::InvalidParameter {
                name,
                value,
                expected: "[0, 1]",
            });
        }
    }
    Ok(())
}

fn check_denominator(name: &str, value: f64) -> Result<f64> {
    if value < 1e-12 {
        return Err(Error::SingularParameter(format!(
            "denominator {name} = {value:.3e} vanishes"
        )));
    }
    Ok(value.sqrt())
}

/// First reference dilation of the GADC: a fixed 8×8 closed form whose
/// ancilla-input columns carry the four GADC Kraus operators.
///
/// Entries are kept in their source closed form and verified numerically at
/// construction. Rejected when the shared denominator 1 − (1−ν)(1−η)
/// vanishes (ν = η = 0).
pub fn gadc_dilation_u1(nu: f64, eta: f64) -> Result<UnitaryDilation> {
    check_gadc_params(nu, eta)?;
    let nb = 1.0 - nu;
    let eb = 1.0 - eta;
    let d1 = check_denominator("1-(1-nu)(1-eta)", 1.0 - nb * eb)?;
    let s = f64::sqrt;
    #[rustfmt::skip]
    let rows: [[f64; 8]; 8] = [
        [s(nu),       0.0,       -s(nb * eta) / d1, 0.0,           0.0,          0.0,           0.0,          -s(nu * nb * eb) / d1],
        [0.0,         s(eta),    0.0,               0.0,           s(nu * eb),   0.0,           -s(nb * eb),  0.0],
        [s(nb * eta), 0.0,       s(nu) / d1,        0.0,           0.0,          0.0,           0.0,          -nb * s(eta * eb) / d1],
        [0.0,         0.0,       0.0,               s(eta*nb + nu), 0.0,         -s(nb * eb),   0.0,          0.0],
        [0.0,         -s(eb),    0.0,               0.0,           s(nu * eta),  0.0,           -s(nb * eta), 0.0],
        [0.0,         0.0,       0.0,               s(nb * eb),    0.0,          s(eta*nb + nu), 0.0,         0.0],
        [0.0,         0.0,       0.0,               0.0,           s(nb),        0.0,           s(nu),        0.0],
        [s(nb * eb),  0.0,       0.0,               0.0,           0.0,          0.0,           0.0,          (eta*nb + nu) / d1],
    ];
    UnitaryDilation::new(matrix_from_rows(&rows), 2, 4, 0)
}

/// Second reference dilation of the GADC; a different basis completion with
/// the same ancilla-input columns.
///
/// One family of entries divides by √(1 − (1−ν)), which simplifies to √ν but
/// is kept in source form; ν = 0 is rejected as singular, as is the
/// denominator 1 − η(1−ν) (η = 1, ν = 0).
pub fn gadc_dilation_u2(nu: f64, eta: f64) -> Result<UnitaryDilation> {
    check_gadc_params(nu, eta)?;
    let nb = 1.0 - nu;
    let eb = 1.0 - eta;
    let d1 = check_denominator("1-eta(1-nu)", 1.0 - eta * nb)?;
    let d2 = check_denominator("1-(1-nu)", 1.0 - nb)?;
    let s = f64::sqrt;
    #[rustfmt::skip]
    let rows: [[f64; 8]; 8] = [
        [s(nu),       0.0,               -s(eta * nb) * s(nu) / d1, 0.0,            0.0,          0.0,            0.0,              -s(eb * nb) / d1],
        [0.0,         s(eta * nu) / d2,  0.0,                       0.0,            s(eb * nu),   0.0,            -s(nb) * s(eb),   0.0],
        [s(eta * nb), 0.0,               d1,                        0.0,            0.0,          0.0,            0.0,              0.0],
        [0.0,         0.0,               0.0,                       s(eta*nb + nu), 0.0,          -s(eb * nb),    0.0,              0.0],
        [0.0,         -s(eb * nu) / d2,  0.0,                       0.0,            s(eta * nu),  0.0,            -s(nb) * s(eta),  0.0],
        [0.0,         0.0,               0.0,                       s(eb * nb),     0.0,          s(eta*nb + nu), 0.0,              0.0],
        [0.0,         0.0,               0.0,                       0.0,            s(nb),        0.0,            s(nu),            0.0],
        [s(eb * nb),  0.0,               -nb * s(eta * eb) / d1,    0.0,            0.0,          0.0,            0.0,              s(nu) / d1],
    ];
    UnitaryDilation::new(matrix_from_rows(&rows), 2, 4, 0)
}

/// Closed-form inverse-channel Kraus set belonging to [`gadc_dilation_u1`].
///
/// This is the reference four-operator list; [`inverse_channel_kraus`] on the
/// dilation itself yields the same multiset in ancilla-index order (the
/// middle two operators trade places).
pub fn gadc_inverse_set_u1(nu: f64, eta: f64) -> Result<KrausChannel> {
    check_gadc_params(nu, eta)?;
    let den = check_denominator("eta+nu-nu*eta", eta + nu - nu * eta)?;
    let s = f64::sqrt;
    let j1 = from_real(2, 2, &[s(nu), 0.0, 0.0, s(eta * nu)]);
    let j2 = from_real(
        2,
        2,
        &[
            -s(eta - eta * nu) / den,
            0.0,
            0.0,
            -s(eta - eta * nu),
        ],
    );
    let j3 = from_real(2, 2, &[0.0, -s(1.0 - eta), 0.0, 0.0]);
    let j4 = from_real(
        2,
        2,
        &[
            0.0,
            0.0,
            -s((1.0 - eta) * (1.0 - nu) * nu) / den,
            0.0,
        ],
    );
    KrausChannel::new(vec![j1, j2, j3, j4], "gadc-inverse-u1")
}

/// Closed-form inverse-channel Kraus set belonging to [`gadc_dilation_u2`].
pub fn gadc_inverse_set_u2(nu: f64, eta: f64) -> Result<KrausChannel> {
    check_gadc_params(nu, eta)?;
    let den = check_denominator("1-eta(1-nu)", 1.0 - eta * (1.0 - nu))?;
    let s = f64::sqrt;
    let j1 = from_real(2, 2, &[s(nu), 0.0, 0.0, s(eta * nu)]);
    let j2 = from_real(
        2,
        2,
        &[
            -s(nu) * s(eta - eta * nu) / den,
            0.0,
            0.0,
            -s(eta) * s(1.0 - nu),
        ],
    );
    let j3 = from_real(2, 2, &[0.0, -s(1.0 - eta), 0.0, 0.0]);
    let j4 = from_real(
        2,
        2,
        &[
            0.0,
            0.0,
            -s((1.0 - eta) * (1.0 - nu)) / den,
            0.0,
        ],
    );
    KrausChannel::new(vec![j1, j2, j3, j4], "gadc-inverse-u2")
}

/// Which reference dilation (or the generic construction) to inspect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DilationTarget {
    U1,
    U2,
    Built,
}

impl std::str::FromStr for DilationTarget {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "u1" => Ok(DilationTarget::U1),
            "u2" => Ok(DilationTarget::U2),
            "built" => Ok(DilationTarget::Built),
            other => Err(Error::InvalidConfig(format!(
                "dilation target must be 'u1', 'u2' or 'built', got '{other}'"
            ))),
        }
    }
}

impl std::fmt::Display for DilationTarget {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DilationTarget::U1 => "u1",
            DilationTarget::U2 => "u2",
            DilationTarget::Built => "built",
        })
    }
}

fn matrix_from_rows(rows: &[[f64; 8]; 8]) -> ComplexMatrix {
    let mut m = ComplexMatrix::from_elem((8, 8), ZERO);
    for (i, row) in rows.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            m[[i, j]] = Complex64::new(x, 0.0);
        }
    }
    m
}
