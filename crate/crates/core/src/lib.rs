//! Simulator for two-qubit quantum correlations under generalized amplitude
//! damping, with two families of protection protocols.
//!
//! The crate models a qubit pair AB whose B side passes through a
//! generalized amplitude damping channel (GADC). It quantifies the damage
//! with two measures — concurrence for entanglement and a two-setting
//! CHSH-type functional for steering — and implements two ways of fighting
//! it:
//!
//! * weak measurement before the noise plus a reversal filter after it,
//! * selective POVMs built from the Kraus operators of the channel generated
//!   by the inverse of a unitary dilation of the GADC.
//!
//! Both protections are heralded: they succeed with a probability that is
//! reported alongside the recovered correlations. The [`sweep`] module runs
//! parameter grids over the protocols and writes deterministic CSV;
//! [`report`] produces dilation-verification and state-inspection reports.

pub mod channel;
pub mod dilation;
pub mod error;
pub mod linalg;
pub mod measures;
pub mod protocol;
pub mod report;
pub mod state;
pub mod sweep;

pub use channel::{
    apply_one_sided, apply_selective, gadc, reversal_operator, weak_detection_operator,
    weak_measurement_operator, KrausChannel, SelectiveOutcome, Side,
};
pub use dilation::{
    build_dilation, gadc_dilation_u1, gadc_dilation_u2, gadc_inverse_set_u1, gadc_inverse_set_u2,
    inverse_channel_kraus, povm_elements, DilationTarget, UnitaryDilation,
};
pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use measures::{
    concurrence, concurrence_with, steering_value, steering_value_oracle, SpinFlip,
    SteeringResult, STEERING_BOUND, STEERING_MAX,
};
pub use protocol::{baseline, povm_case_one, povm_case_two, weak_protocol, ProtocolResult};
pub use report::{dilation_verify, state_report, DilationReport, StateReport};
pub use state::{
    antiparallel_state, correlation_data, family_state, parallel_state, CorrelationData,
    QubitPairState, Sign, StateFamily,
};
pub use sweep::{run_sweep, run_sweep_to_path, GridSpec, SweepConfig, SweepProtocol};
