//! Kraus-operator channels and their one-sided / selective application.
//!
//! The generalized amplitude damping channel (GADC) models dissipation into
//! a finite-temperature bath: ν mixes the two damping directions
//! (temperature), η is the rate of dissipation. ν = 1 reduces it to the
//! ordinary amplitude damping channel.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    all_finite, dagger, from_real, hermitian_eig, hermitize, identity, max_abs_diff, tensor, tol,
    trace, ComplexMatrix,
};
use crate::state::QubitPairState;

/// Ordered set of Kraus operators with verified completeness Σ K†K = I.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    operators: Vec<ComplexMatrix>,
    label: String,
}

impl KrausChannel {
    pub fn new(operators: Vec<ComplexMatrix>, label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        let first = operators.first().ok_or_else(|| {
            Error::DimensionMismatch(format!("channel '{label}' has no Kraus operators"))
        })?;
        let d = first.nrows();
        if first.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "channel '{label}' has a non-square Kraus operator"
            )));
        }
        for op in &operators {
            if op.dim() != (d, d) {
                return Err(Error::DimensionMismatch(format!(
                    "channel '{label}' mixes Kraus operator shapes"
                )));
            }
            if !all_finite(op) {
                return Err(Error::NonFiniteEntry);
            }
        }
        let channel = Self { operators, label };
        let residual = channel.completeness_residual();
        if residual > tol::STRUCTURE {
            return Err(Error::IncompleteChannel { residual });
        }
        Ok(channel)
    }

    /// The trivial channel with the single Kraus operator I₂.
    pub fn identity_channel() -> Self {
        Self {
            operators: vec![identity(2)],
            label: "identity".into(),
        }
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.operators[0].nrows()
    }

    /// Max |Σ K†K − I|.
    pub fn completeness_residual(&self) -> f64 {
        let d = self.dim();
        let mut sum = ComplexMatrix::from_elem((d, d), Complex64::new(0.0, 0.0));
        for op in &self.operators {
            sum = sum + dagger(op).dot(op);
        }
        max_abs_diff(&sum, &identity(d))
    }
}

fn check_unit_range(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) || !value.is_finite() {
        return Err(Error::InvalidParameter {
            name,
            value,
            expected: "[0, 1]",
        });
    }
    Ok(())
}

fn check_strength(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..1.0).contains(&value) || !value.is_finite() {
        return Err(Error::InvalidParameter {
            name,
            value,
            expected: "[0, 1)",
        });
    }
    Ok(())
}

/// Generalized amplitude damping channel with mixing ν and dissipation η.
///
/// The four operators, in order:
///   K₁ = √ν·diag(1, √η),       K₂ = √ν·(√(1−η) at (0,1)),
///   K₃ = √(1−ν)·diag(√η, 1),   K₄ = √(1−ν)·(√(1−η) at (1,0)).
pub fn gadc(nu: f64, eta: f64) -> Result<KrausChannel> {
    check_unit_range("nu", nu)?;
    check_unit_range("eta", eta)?;
    let sn = nu.sqrt();
    let snb = (1.0 - nu).sqrt();
    let se = eta.sqrt();
    let seb = (1.0 - eta).sqrt();
    let k1 = from_real(2, 2, &[sn, 0.0, 0.0, sn * se]);
    let k2 = from_real(2, 2, &[0.0, sn * seb, 0.0, 0.0]);
    let k3 = from_real(2, 2, &[snb * se, 0.0, 0.0, snb]);
    let k4 = from_real(2, 2, &[0.0, 0.0, snb * seb, 0.0]);
    KrausChannel::new(vec![k1, k2, k3, k4], "gadc")
}

/// No-detection weak measurement operator W₀ = diag(1, √(1−w)).
///
/// Requires w < 1 so the operator stays invertible; the discarded detection
/// branch is [`weak_detection_operator`].
pub fn weak_measurement_operator(w: f64) -> Result<ComplexMatrix> {
    check_strength("w", w)?;
    Ok(from_real(2, 2, &[1.0, 0.0, 0.0, (1.0 - w).sqrt()]))
}

/// Detection branch W₁ = diag(0, √w); completes W₀†W₀ + W₁†W₁ = I.
pub fn weak_detection_operator(w: f64) -> Result<ComplexMatrix> {
    check_unit_range("w", w)?;
    Ok(from_real(2, 2, &[0.0, 0.0, 0.0, w.sqrt()]))
}

/// Reverse weak measurement operator R₀ = diag(√(1−r), 1).
pub fn reversal_operator(r: f64) -> Result<ComplexMatrix> {
    check_strength("r", r)?;
    Ok(from_real(2, 2, &[(1.0 - r).sqrt(), 0.0, 0.0, 1.0]))
}

/// Which qubit a one-sided operation acts on. The protocols use B (the
/// second, fast tensor factor) throughout; A exists for experimentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Side {
    A,
    #[default]
    B,
}

fn embed(op: &ComplexMatrix, side: Side) -> ComplexMatrix {
    match side {
        Side::A => tensor(op, &identity(2)),
        Side::B => tensor(&identity(2), op),
    }
}

/// Non-selective channel action on qubit B: Σ (1 ⊗ K) ρ (1 ⊗ K†).
pub fn apply_one_sided(channel: &KrausChannel, state: &QubitPairState) -> QubitPairState {
    apply_one_sided_on(channel, state, Side::B)
}

pub fn apply_one_sided_on(
    channel: &KrausChannel,
    state: &QubitPairState,
    side: Side,
) -> QubitPairState {
    let mut out = ComplexMatrix::from_elem((4, 4), Complex64::new(0.0, 0.0));
    for op in channel.operators() {
        let full = embed(op, side);
        out = out + full.dot(state.matrix()).dot(&dagger(&full));
    }
    QubitPairState::new(hermitize(&out))
        .expect("CPTP action on a valid state yields a valid state")
}

/// One branch of a selective measurement: its heralding probability and,
/// unless the branch is null, the renormalized post-measurement state.
#[derive(Debug, Clone)]
pub struct SelectiveOutcome {
    pub probability: f64,
    pub operator_index: usize,
    pub state: Option<QubitPairState>,
}

impl SelectiveOutcome {
    /// Branch with probability at or below `tol::NULL_PROBABILITY` carries no state.
    pub fn is_null(&self) -> bool {
        self.state.is_none()
    }
}

/// Selective application of a single measurement operator on qubit B.
///
/// The operator must satisfy M†M ≤ I. The outcome probability is
/// tr[(1 ⊗ M) ρ (1 ⊗ M†)]; the branch state is that matrix renormalized.
pub fn apply_selective(
    op: &ComplexMatrix,
    state: &QubitPairState,
    operator_index: usize,
) -> Result<SelectiveOutcome> {
    apply_selective_on(op, state, operator_index, Side::B)
}

pub fn apply_selective_on(
    op: &ComplexMatrix,
    state: &QubitPairState,
    operator_index: usize,
    side: Side,
) -> Result<SelectiveOutcome> {
    if op.dim() != (2, 2) {
        return Err(Error::DimensionMismatch(
            "measurement operator must be 2×2".into(),
        ));
    }
    let gram = hermitize(&dagger(op).dot(op));
    let max_eig = hermitian_eig(&gram)?.eigenvalues[0];
    if max_eig > 1.0 + tol::STRUCTURE {
        return Err(Error::InvalidMeasurementOperator {
            max_eigenvalue: max_eig,
        });
    }
    let full = embed(op, side);
    let unnormalized = full.dot(state.matrix()).dot(&dagger(&full));
    let probability = trace(&unnormalized).re;
    debug_assert!((-tol::STRUCTURE..=1.0 + tol::STRUCTURE).contains(&probability));
    let state = if probability > tol::NULL_PROBABILITY {
        Some(QubitPairState::new(hermitize(
            &unnormalized.mapv(|z| z / probability),
        ))?)
    } else {
        None
    };
    Ok(SelectiveOutcome {
        probability,
        operator_index,
        state,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;
    use crate::state::{parallel_state, Sign};

    const INV_SQRT2: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn gadc_reduces_to_adc_at_nu_one() {
        let ch = gadc(1.0, 0.4).unwrap();
        assert_eq!(max_abs(&ch.operators()[2]), 0.0);
        assert_eq!(max_abs(&ch.operators()[3]), 0.0);
    }

    #[test]
    fn gadc_is_identity_at_nu_eta_one() {
        let ch = gadc(1.0, 1.0).unwrap();
        assert!(max_abs_diff(&ch.operators()[0], &identity(2)) == 0.0);
        for op in &ch.operators()[1..] {
            assert_eq!(max_abs(op), 0.0);
        }
    }

    #[test]
    fn gadc_completeness_across_grid() {
        for i in 0..=4 {
            for j in 0..=4 {
                let ch = gadc(i as f64 / 4.0, j as f64 / 4.0).unwrap();
                assert!(ch.completeness_residual() < 1e-15);
            }
        }
    }

    #[test]
    fn gadc_rejects_out_of_range() {
        assert!(gadc(1.2, 0.5).is_err());
        assert!(gadc(0.5, -0.1).is_err());
    }

    #[test]
    fn full_damping_sends_b_to_ground() {
        let ch = gadc(1.0, 0.0).unwrap();
        let state = parallel_state(0.43, Sign::Plus).unwrap();
        let out = apply_one_sided(&ch, &state);
        // reduced state of B: trace out the slow (A) index by hand
        let rho = out.matrix();
        let mut reduced = [[Complex64::new(0.0, 0.0); 2]; 2];
        for k in 0..2 {
            for l in 0..2 {
                reduced[k][l] = rho[[k, l]] + rho[[2 + k, 2 + l]];
            }
        }
        assert!((reduced[0][0].re - 1.0).abs() < 1e-12);
        assert!(reduced[1][1].norm() < 1e-12);
    }

    #[test]
    fn weak_operators_arithmetic() {
        let w0 = weak_measurement_operator(0.75).unwrap();
        assert!(max_abs_diff(&w0, &from_real(2, 2, &[1.0, 0.0, 0.0, 0.5])) == 0.0);
        assert!(max_abs_diff(&weak_measurement_operator(0.0).unwrap(), &identity(2)) == 0.0);
        let r0 = reversal_operator(0.19).unwrap();
        assert!(max_abs_diff(&r0, &from_real(2, 2, &[0.9, 0.0, 0.0, 1.0])) < 1e-15);
        assert!(max_abs_diff(&reversal_operator(0.0).unwrap(), &identity(2)) == 0.0);
    }

    #[test]
    fn weak_operators_complete() {
        for w in [0.0, 0.2, 0.61, 0.999] {
            let w0 = weak_measurement_operator(w).unwrap();
            let w1 = weak_detection_operator(w).unwrap();
            let sum = dagger(&w0).dot(&w0) + dagger(&w1).dot(&w1);
            assert!(max_abs_diff(&sum, &identity(2)) < 1e-15);
        }
    }

    #[test]
    fn strength_one_is_rejected() {
        assert!(weak_measurement_operator(1.0).is_err());
        assert!(reversal_operator(1.0).is_err());
    }

    #[test]
    fn identity_channel_is_noop() {
        let state = parallel_state(0.7, Sign::Minus).unwrap();
        let out = apply_one_sided(&KrausChannel::identity_channel(), &state);
        assert!(max_abs_diff(out.matrix(), state.matrix()) < 1e-12);
    }

    #[test]
    fn full_damping_of_bell_state() {
        // gadc(1, 0) on |φ+⟩ → (|00⟩⟨00| + |10⟩⟨10|)/2
        let bell = parallel_state(INV_SQRT2, Sign::Plus).unwrap();
        let out = apply_one_sided(&gadc(1.0, 0.0).unwrap(), &bell);
        let mut want = ComplexMatrix::from_elem((4, 4), Complex64::new(0.0, 0.0));
        want[[0, 0]] = Complex64::new(0.5, 0.0);
        want[[2, 2]] = Complex64::new(0.5, 0.0);
        assert!(max_abs_diff(out.matrix(), &want) < 1e-12);
    }

    #[test]
    fn one_sided_preserves_trace() {
        let state = parallel_state(0.6, Sign::Plus).unwrap();
        for (nu, eta) in [(0.2, 0.9), (0.7, 0.3), (0.5, 0.5)] {
            let out = apply_one_sided(&gadc(nu, eta).unwrap(), &state);
            assert!((trace(out.matrix()).re - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn selective_identity_keeps_state() {
        let state = parallel_state(0.6, Sign::Plus).unwrap();
        let outcome = apply_selective(&identity(2), &state, 0).unwrap();
        assert!((outcome.probability - 1.0).abs() < 1e-12);
        assert!(max_abs_diff(outcome.state.unwrap().matrix(), state.matrix()) < 1e-12);
    }

    #[test]
    fn selective_weak_on_bell_probability() {
        // W₀(w = 1/2) on |φ+⟩: probability (1 + (1−w))/2 = 3/4.
        let bell = parallel_state(INV_SQRT2, Sign::Plus).unwrap();
        let w0 = weak_measurement_operator(0.5).unwrap();
        let outcome = apply_selective(&w0, &bell, 0).unwrap();
        assert!((outcome.probability - 0.75).abs() < 1e-12);
    }

    #[test]
    fn selective_detection_projects_to_product() {
        // W₁(w) on |φ+⟩: probability w/2, post state |11⟩⟨11|.
        let w = 0.3;
        let bell = parallel_state(INV_SQRT2, Sign::Plus).unwrap();
        let w1 = weak_detection_operator(w).unwrap();
        let outcome = apply_selective(&w1, &bell, 1).unwrap();
        assert!((outcome.probability - w / 2.0).abs() < 1e-12);
        let post = outcome.state.unwrap();
        assert!((post.matrix()[[3, 3]].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn selective_null_branch_is_flagged() {
        // W₁ detects only |1⟩_B; on |00⟩ the branch is null.
        let state = parallel_state(1.0, Sign::Plus).unwrap();
        let w1 = weak_detection_operator(0.4).unwrap();
        let outcome = apply_selective(&w1, &state, 1).unwrap();
        assert!(outcome.is_null());
        assert!(outcome.probability.abs() <= 1e-12);
    }

    #[test]
    fn selective_rejects_amplifying_operator() {
        let op = from_real(2, 2, &[1.3, 0.0, 0.0, 0.2]);
        assert!(matches!(
            apply_selective(&op, &QubitPairState::maximally_mixed(), 0),
            Err(Error::InvalidMeasurementOperator { .. })
        ));
    }

    #[test]
    fn selective_probabilities_complete() {
        let state = parallel_state(0.83, Sign::Minus).unwrap();
        for w in [0.1, 0.5, 0.9] {
            let w0 = weak_measurement_operator(w).unwrap();
            let w1 = weak_detection_operator(w).unwrap();
            let p0 = apply_selective(&w0, &state, 0).unwrap().probability;
            let p1 = apply_selective(&w1, &state, 1).unwrap().probability;
            assert!((p0 + p1 - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn side_a_acts_on_first_qubit() {
        let state = parallel_state(1.0, Sign::Plus).unwrap(); // |00⟩
        let flip = crate::linalg::pauli_x();
        let out = apply_selective_on(&flip, &state, 0, Side::A).unwrap();
        let post = out.state.unwrap();
        assert!((post.matrix()[[2, 2]].re - 1.0).abs() < 1e-12); // |10⟩
    }
}
