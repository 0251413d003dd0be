//! Cross-module invariants on randomized inputs.

mod common;

use common::{random_kraus_channel, random_state, rng};
use qprotect::linalg::{dagger, identity, max_abs_diff, tensor, trace, ComplexMatrix};
use qprotect::{
    apply_one_sided, apply_selective, concurrence, gadc, gadc_dilation_u1, gadc_dilation_u2,
    inverse_channel_kraus, povm_elements, weak_protocol,
};
use rand::Rng;

fn kraus_sum_on_b(ops: &[ComplexMatrix], rho: &ComplexMatrix) -> ComplexMatrix {
    let eye = identity(2);
    let mut out = ComplexMatrix::from_elem((4, 4), num_complex::Complex64::new(0.0, 0.0));
    for op in ops {
        let full = tensor(&eye, op);
        out = out + full.dot(rho).dot(&dagger(&full));
    }
    out
}

#[test]
fn reference_dilations_agree_with_one_sided_action() {
    let mut r = rng(127);
    for (nu, eta) in [(0.25, 0.75), (0.6, 0.4)] {
        let channel = gadc(nu, eta).unwrap();
        for dilation in [
            gadc_dilation_u1(nu, eta).unwrap(),
            gadc_dilation_u2(nu, eta).unwrap(),
        ] {
            for _ in 0..5 {
                let state = random_state(&mut r);
                let damped = apply_one_sided(&channel, &state);
                let via_ops = kraus_sum_on_b(&dilation.kraus_operators(), state.matrix());
                assert!(max_abs_diff(damped.matrix(), &via_ops) <= 1e-10);
            }
        }
    }
}

#[test]
fn cptp_preservation_across_random_channels() {
    let mut r = rng(131);
    for _ in 0..25 {
        let n_ops = 2 + (r.random::<u32>() % 3) as usize;
        let channel = random_kraus_channel(&mut r, n_ops);
        let state = random_state(&mut r);
        // QubitPairState validation inside apply_one_sided certifies
        // Hermiticity and positivity; the trace stays one.
        let out = apply_one_sided(&channel, &state);
        assert!((trace(out.matrix()).re - 1.0).abs() <= 1e-10);
    }
}

#[test]
fn entanglement_monotone_under_random_channels() {
    let mut r = rng(137);
    for _ in 0..50 {
        let n_ops = 2 + (r.random::<u32>() % 3) as usize;
        let channel = random_kraus_channel(&mut r, n_ops);
        let state = random_state(&mut r);
        let before = concurrence(&state).unwrap();
        let after = concurrence(&apply_one_sided(&channel, &state)).unwrap();
        assert!(
            after <= before + 1e-9,
            "local channel increased concurrence: {before} -> {after}"
        );
    }
}

#[test]
fn weak_protocol_success_probability_lower_bound() {
    // Each filter keeps at least the weight of its untouched level:
    // p ≥ (1−w)(1−r).
    let mut r = rng(139);
    for _ in 0..20 {
        let state = random_state(&mut r);
        let (nu, eta) = (r.random::<f64>(), r.random::<f64>());
        let (w, rev) = (r.random::<f64>() * 0.95, r.random::<f64>() * 0.95);
        let result = weak_protocol(&state, nu, eta, w, rev).unwrap();
        assert!(result.success_probability >= (1.0 - w) * (1.0 - rev) - 1e-12);
        assert!(!result.is_null());
    }
}

#[test]
fn selective_povm_probabilities_complete_for_extracted_sets() {
    let mut r = rng(149);
    for (nu, eta) in [(0.2, 0.9), (0.85, 0.35)] {
        for dilation in [
            gadc_dilation_u1(nu, eta).unwrap(),
            gadc_dilation_u2(nu, eta).unwrap(),
        ] {
            let inverse = inverse_channel_kraus(&dilation).unwrap();
            let elements = povm_elements(&inverse).unwrap();
            for _ in 0..5 {
                let state = random_state(&mut r);
                let total: f64 = elements
                    .iter()
                    .enumerate()
                    .map(|(i, m)| apply_selective(m, &state, i).unwrap().probability)
                    .sum();
                assert!((total - 1.0).abs() <= 1e-10);
            }
        }
    }
}

#[test]
fn povm_elements_square_back_to_gram_matrices() {
    for (nu, eta) in [(0.4, 0.4), (0.7, 0.15)] {
        let inverse = qprotect::gadc_inverse_set_u1(nu, eta).unwrap();
        let elements = povm_elements(&inverse).unwrap();
        for (j, m) in inverse.operators().iter().zip(elements.iter()) {
            let gram = dagger(j).dot(j);
            assert!(max_abs_diff(&m.dot(m), &gram) <= 1e-12);
        }
    }
}
