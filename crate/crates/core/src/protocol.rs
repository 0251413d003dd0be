//! The protection pipelines, each acting on qubit B of the pair.
//!
//! * `baseline` — the unprotected reference: GADC only.
//! * `weak_protocol` — weak measurement W₀(w), then GADC, then reversal
//!   R₀(r); both filters are selective, so the result is heralded with a
//!   success probability.
//! * `povm_case_one` — selective POVM element (J_i†J_i)^{1/2} applied
//!   *before* the GADC, one branch per element.
//! * `povm_case_two` — GADC first, the selective POVM element *after*.
//!
//! Selective branches trade success probability for correlation, so every
//! result carries its probability next to the measures.

use crate::channel::{
    apply_one_sided, apply_selective, gadc, reversal_operator, weak_measurement_operator,
    KrausChannel,
};
use crate::dilation::povm_elements;
use crate::error::Result;
use crate::measures::{concurrence, steering_value};
use crate::state::QubitPairState;

/// One protocol outcome: the branch state (absent for null branches), its
/// heralding probability, and the correlation measures of the state.
#[derive(Debug, Clone)]
pub struct ProtocolResult {
    pub label: String,
    /// Outcome index for branching protocols; `None` for deterministic or
    /// single-branch pipelines.
    pub branch: Option<usize>,
    pub success_probability: f64,
    pub state: Option<QubitPairState>,
    pub concurrence: Option<f64>,
    pub steering: Option<f64>,
}

impl ProtocolResult {
    fn from_state(
        label: impl Into<String>,
        branch: Option<usize>,
        success_probability: f64,
        state: QubitPairState,
    ) -> Result<Self> {
        let concurrence = concurrence(&state)?;
        let steering = steering_value(&state).value;
        Ok(Self {
            label: label.into(),
            branch,
            success_probability,
            state: Some(state),
            concurrence: Some(concurrence),
            steering: Some(steering),
        })
    }

    fn null(label: impl Into<String>, branch: Option<usize>, success_probability: f64) -> Self {
        Self {
            label: label.into(),
            branch,
            success_probability,
            state: None,
            concurrence: None,
            steering: None,
        }
    }

    pub fn is_null(&self) -> bool {
        self.state.is_none()
    }
}

/// Unprotected reference: one-sided GADC on B, deterministic.
pub fn baseline(state: &QubitPairState, nu: f64, eta: f64) -> Result<ProtocolResult> {
    let damped = apply_one_sided(&gadc(nu, eta)?, state);
    ProtocolResult::from_state("baseline", None, 1.0, damped)
}

/// Weak-measurement protection: selective W₀(w), GADC, selective R₀(r).
///
/// The success probability is the product of the two filter probabilities
/// (the channel in between is deterministic). Both probabilities are
/// bounded below by 1−w and 1−r, so the branch is never null for valid
/// strengths.
pub fn weak_protocol(
    state: &QubitPairState,
    nu: f64,
    eta: f64,
    w: f64,
    r: f64,
) -> Result<ProtocolResult> {
    let w0 = weak_measurement_operator(w)?;
    let r0 = reversal_operator(r)?;
    let channel = gadc(nu, eta)?;

    let filtered = apply_selective(&w0, state, 0)?;
    let Some(pre_state) = filtered.state else {
        return Ok(ProtocolResult::null("weak", None, filtered.probability));
    };
    let damped = apply_one_sided(&channel, &pre_state);
    let reversed = apply_selective(&r0, &damped, 0)?;
    let probability = filtered.probability * reversed.probability;
    match reversed.state {
        Some(out) => ProtocolResult::from_state("weak", None, probability, out),
        None => Ok(ProtocolResult::null("weak", None, probability)),
    }
}

/// Selective POVM before the noise: for every element M_i = (J_i†J_i)^{1/2},
/// filter ρ with 1 ⊗ M_i, renormalize, then apply the GADC. Branch
/// probabilities sum to one by completeness of the element set.
pub fn povm_case_one(
    state: &QubitPairState,
    nu: f64,
    eta: f64,
    inverse_set: &KrausChannel,
) -> Result<Vec<ProtocolResult>> {
    let label = format!("{}-case1", inverse_set.label());
    let channel = gadc(nu, eta)?;
    let elements = povm_elements(inverse_set)?;
    let mut results = Vec::with_capacity(elements.len());
    for (index, element) in elements.iter().enumerate() {
        let outcome = apply_selective(element, state, index)?;
        let result = match outcome.state {
            Some(filtered) => {
                let damped = apply_one_sided(&channel, &filtered);
                ProtocolResult::from_state(&label, Some(index), outcome.probability, damped)?
            }
            None => ProtocolResult::null(&label, Some(index), outcome.probability),
        };
        results.push(result);
    }
    Ok(results)
}

/// Selective POVM after the noise: apply the GADC once, then filter the
/// damped state with each element and renormalize.
pub fn povm_case_two(
    state: &QubitPairState,
    nu: f64,
    eta: f64,
    inverse_set: &KrausChannel,
) -> Result<Vec<ProtocolResult>> {
    let label = format!("{}-case2", inverse_set.label());
    let damped = apply_one_sided(&gadc(nu, eta)?, state);
    let elements = povm_elements(inverse_set)?;
    let mut results = Vec::with_capacity(elements.len());
    for (index, element) in elements.iter().enumerate() {
        let outcome = apply_selective(element, &damped, index)?;
        let result = match outcome.state {
            Some(filtered) => {
                ProtocolResult::from_state(&label, Some(index), outcome.probability, filtered)?
            }
            None => ProtocolResult::null(&label, Some(index), outcome.probability),
        };
        results.push(result);
    }
    Ok(results)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dilation::{gadc_inverse_set_u1, gadc_inverse_set_u2};
    use crate::linalg::max_abs_diff;
    use crate::measures::STEERING_MAX;
    use crate::state::{antiparallel_state, parallel_state, Sign};
    use crate::testutil::{random_density4, rng};

    const INV_SQRT2: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn baseline_is_deterministic_and_identity_at_corner() {
        let state = antiparallel_state(0.7, Sign::Plus).unwrap();
        let result = baseline(&state, 1.0, 1.0).unwrap();
        assert_eq!(result.success_probability, 1.0);
        assert!(max_abs_diff(result.state.as_ref().unwrap().matrix(), state.matrix()) < 1e-12);
        let c_in = crate::measures::concurrence(&state).unwrap();
        assert!((result.concurrence.unwrap() - c_in).abs() < 1e-12);
    }

    #[test]
    fn baseline_full_damping_kills_correlations() {
        let bell = parallel_state(INV_SQRT2, Sign::Plus).unwrap();
        let result = baseline(&bell, 1.0, 0.0).unwrap();
        assert!(result.concurrence.unwrap() < 1e-10);
        assert!(result.steering.unwrap() <= 2.0 + 1e-12);
    }

    #[test]
    fn weak_protocol_with_zero_strengths_is_baseline() {
        let state = parallel_state(0.6, Sign::Minus).unwrap();
        let (nu, eta) = (0.55, 0.4);
        let base = baseline(&state, nu, eta).unwrap();
        let weak = weak_protocol(&state, nu, eta, 0.0, 0.0).unwrap();
        assert!((weak.success_probability - 1.0).abs() < 1e-12);
        assert!(
            max_abs_diff(
                weak.state.as_ref().unwrap().matrix(),
                base.state.as_ref().unwrap().matrix()
            ) < 1e-12
        );
        assert!((weak.concurrence.unwrap() - base.concurrence.unwrap()).abs() < 1e-12);
        assert!((weak.steering.unwrap() - base.steering.unwrap()).abs() < 1e-12);
    }

    #[test]
    fn weak_protocol_rebalances_filtered_amplitudes() {
        // With a noiseless channel the pipeline is pure filtering:
        // α√(1−r) = β√(1−w) restores a maximally entangled state, with
        // success probability α²(1−r) + β²(1−w).
        let (alpha, beta) = (0.6, 0.8);
        let (w, r) = (0.55, 0.2); // (1−r) = (1−w)·β²/α²
        let state = parallel_state(alpha, Sign::Plus).unwrap();
        let result = weak_protocol(&state, 1.0, 1.0, w, r).unwrap();
        assert!((result.concurrence.unwrap() - 1.0).abs() < 1e-10);
        let expected_p = alpha * alpha * (1.0 - r) + beta * beta * (1.0 - w);
        assert!((result.success_probability - expected_p).abs() < 1e-12);
        assert!((result.steering.unwrap() - STEERING_MAX).abs() < 1e-9);
    }

    #[test]
    fn weak_protocol_can_beat_baseline() {
        // A point from the improvement region: protection recovers
        // concurrence the bare channel loses.
        let state = antiparallel_state(0.95, Sign::Plus).unwrap();
        let (nu, eta, w, r) = (0.1, 0.1, 0.7, 0.1);
        let base = baseline(&state, nu, eta).unwrap();
        let weak = weak_protocol(&state, nu, eta, w, r).unwrap();
        assert!(weak.concurrence.unwrap() > base.concurrence.unwrap() + 0.01);
        assert!(weak.success_probability > 0.0);
    }

    #[test]
    fn povm_cases_with_identity_set_reduce_to_baseline() {
        let state = antiparallel_state(0.8, Sign::Plus).unwrap();
        let (nu, eta) = (0.3, 0.7);
        let base = baseline(&state, nu, eta).unwrap();
        let identity_set = KrausChannel::identity_channel();
        for case in [povm_case_one, povm_case_two] {
            let results = case(&state, nu, eta, &identity_set).unwrap();
            assert_eq!(results.len(), 1);
            let only = &results[0];
            assert!((only.success_probability - 1.0).abs() < 1e-12);
            assert!(
                max_abs_diff(
                    only.state.as_ref().unwrap().matrix(),
                    base.state.as_ref().unwrap().matrix()
                ) < 1e-12
            );
        }
    }

    #[test]
    fn povm_branch_probabilities_sum_to_one() {
        let mut r = rng(59);
        for _ in 0..5 {
            let state = random_density4(&mut r);
            for (nu, eta) in [(0.4, 0.6), (0.75, 0.2)] {
                for set in [
                    gadc_inverse_set_u1(nu, eta).unwrap(),
                    gadc_inverse_set_u2(nu, eta).unwrap(),
                ] {
                    for case in [povm_case_one, povm_case_two] {
                        let results = case(&state, nu, eta, &set).unwrap();
                        assert_eq!(results.len(), 4);
                        let total: f64 =
                            results.iter().map(|b| b.success_probability).sum();
                        assert!((total - 1.0).abs() < 1e-10, "total = {total}");
                    }
                }
            }
        }
    }

    #[test]
    fn fully_damped_state_stays_separable_in_every_branch() {
        // ν = 1, η = 0 leaves a separable damped state; selective local
        // filtering cannot create entanglement out of it.
        let bell = parallel_state(INV_SQRT2, Sign::Plus).unwrap();
        let set = gadc_inverse_set_u1(1.0, 0.0).unwrap();
        for branch in povm_case_two(&bell, 1.0, 0.0, &set).unwrap() {
            if let Some(c) = branch.concurrence {
                assert!(c < 1e-9, "branch {:?} got c = {c}", branch.branch);
            }
        }
    }

    #[test]
    fn separable_inputs_stay_separable_under_all_protocols() {
        let product = parallel_state(1.0, Sign::Plus).unwrap();
        let (nu, eta) = (0.5, 0.5);
        assert!(baseline(&product, nu, eta).unwrap().concurrence.unwrap() < 1e-9);
        assert!(
            weak_protocol(&product, nu, eta, 0.4, 0.3)
                .unwrap()
                .concurrence
                .unwrap()
                < 1e-9
        );
        let set = gadc_inverse_set_u1(nu, eta).unwrap();
        for case in [povm_case_one, povm_case_two] {
            for branch in case(&product, nu, eta, &set).unwrap() {
                if let Some(c) = branch.concurrence {
                    assert!(c < 1e-9);
                }
            }
        }
    }

    #[test]
    fn measures_stay_within_bounds_and_match_states() {
        let mut r = rng(61);
        for _ in 0..5 {
            let state = random_density4(&mut r);
            let (nu, eta) = (0.35, 0.65);
            let set = gadc_inverse_set_u2(nu, eta).unwrap();
            let mut all = vec![baseline(&state, nu, eta).unwrap()];
            all.push(weak_protocol(&state, nu, eta, 0.25, 0.45).unwrap());
            all.extend(povm_case_one(&state, nu, eta, &set).unwrap());
            all.extend(povm_case_two(&state, nu, eta, &set).unwrap());
            for result in all {
                if let Some(state) = &result.state {
                    let c = result.concurrence.unwrap();
                    let s = result.steering.unwrap();
                    assert!((0.0..=1.0 + 1e-12).contains(&c));
                    assert!((0.0..=STEERING_MAX + 1e-12).contains(&s));
                    // stored measures are exactly the measures of the state
                    assert!((crate::measures::concurrence(state).unwrap() - c).abs() < 1e-12);
                    assert!((steering_value(state).value - s).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn protocols_are_bitwise_deterministic() {
        let state = antiparallel_state(0.62, Sign::Plus).unwrap();
        let set = gadc_inverse_set_u1(0.3, 0.55).unwrap();
        let a = povm_case_one(&state, 0.3, 0.55, &set).unwrap();
        let b = povm_case_one(&state, 0.3, 0.55, &set).unwrap();
        for (x, y) in a.iter().zip(b.iter()) {
            assert_eq!(x.success_probability.to_bits(), y.success_probability.to_bits());
            assert_eq!(
                x.concurrence.map(f64::to_bits),
                y.concurrence.map(f64::to_bits)
            );
            assert_eq!(x.steering.map(f64::to_bits), y.steering.map(f64::to_bits));
        }
    }
}
