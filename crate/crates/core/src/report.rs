//! Structured verification and inspection reports for the CLI and demo.

use serde::Serialize;

use crate::channel::gadc;
use crate::dilation::{build_dilation, gadc_dilation_u1, gadc_dilation_u2, inverse_channel_kraus,
    DilationTarget, UnitaryDilation};
use crate::error::Result;
use crate::linalg::max_abs_diff;
use crate::measures::{concurrence_with, steering_value, SpinFlip, SteeringResult};
use crate::state::{correlation_data, family_state, CorrelationData, Sign, StateFamily};

/// Residual threshold for a passing verification report.
pub const REPORT_THRESHOLD: f64 = 1e-8;

/// Numerical health report of a unitary dilation at fixed (ν, η).
#[derive(Debug, Clone, Serialize)]
pub struct DilationReport {
    pub target: String,
    pub nu: f64,
    pub eta: f64,
    /// max |U†U − I| over all entries.
    pub unitarity_residual: f64,
    /// | ‖column‖ − 1 | per column.
    pub column_norm_deviations: Vec<f64>,
    /// Largest off-diagonal Gram-matrix magnitude between columns.
    pub gram_offdiagonal_max: f64,
    /// max |L_i − K_i| between extracted and reference GADC operators.
    pub kraus_extraction_residual: f64,
    /// max |Σ J†J − I| for the inverse-channel Kraus set.
    pub inverse_completeness_residual: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl DilationReport {
    pub fn max_residual(&self) -> f64 {
        self.column_norm_deviations
            .iter()
            .copied()
            .fold(0.0f64, f64::max)
            .max(self.unitarity_residual)
            .max(self.gram_offdiagonal_max)
            .max(self.kraus_extraction_residual)
            .max(self.inverse_completeness_residual)
    }
}

/// Verify a dilation of the GADC at (ν, η) and report every residual.
pub fn dilation_verify(target: DilationTarget, nu: f64, eta: f64) -> Result<DilationReport> {
    let dilation: UnitaryDilation = match target {
        DilationTarget::U1 => gadc_dilation_u1(nu, eta)?,
        DilationTarget::U2 => gadc_dilation_u2(nu, eta)?,
        DilationTarget::Built => build_dilation(&gadc(nu, eta)?)?,
    };
    let u = dilation.matrix();
    let n = u.nrows();

    let mut column_norm_deviations = Vec::with_capacity(n);
    let mut gram_offdiagonal_max: f64 = 0.0;
    for i in 0..n {
        let mut norm_sq = 0.0;
        for row in 0..n {
            norm_sq += u[[row, i]].norm_sqr();
        }
        column_norm_deviations.push((norm_sq.sqrt() - 1.0).abs());
        for j in (i + 1)..n {
            let mut inner = num_complex::Complex64::new(0.0, 0.0);
            for row in 0..n {
                inner += u[[row, i]].conj() * u[[row, j]];
            }
            gram_offdiagonal_max = gram_offdiagonal_max.max(inner.norm());
        }
    }

    let reference = gadc(nu, eta)?;
    let kraus_extraction_residual = dilation
        .kraus_operators()
        .iter()
        .zip(reference.operators())
        .map(|(l, k)| max_abs_diff(l, k))
        .fold(0.0f64, f64::max);

    let inverse = inverse_channel_kraus(&dilation)?;
    let inverse_completeness_residual = inverse.completeness_residual();

    let mut report = DilationReport {
        target: target.to_string(),
        nu,
        eta,
        unitarity_residual: dilation.unitarity_residual(),
        column_norm_deviations,
        gram_offdiagonal_max,
        kraus_extraction_residual,
        inverse_completeness_residual,
        threshold: REPORT_THRESHOLD,
        passed: false,
    };
    report.passed = report.max_residual() <= REPORT_THRESHOLD;
    Ok(report)
}

impl std::fmt::Display for DilationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "dilation {} at nu = {}, eta = {}",
            self.target, self.nu, self.eta
        )?;
        writeln!(f, "  unitarity residual        {:.3e}", self.unitarity_residual)?;
        let worst_col = self
            .column_norm_deviations
            .iter()
            .copied()
            .fold(0.0f64, f64::max);
        writeln!(f, "  column-norm deviation max {worst_col:.3e}")?;
        for (i, dev) in self.column_norm_deviations.iter().enumerate() {
            writeln!(f, "    column {i}: {dev:.3e}")?;
        }
        writeln!(f, "  Gram off-diagonal max     {:.3e}", self.gram_offdiagonal_max)?;
        writeln!(
            f,
            "  Kraus extraction residual {:.3e}",
            self.kraus_extraction_residual
        )?;
        writeln!(
            f,
            "  inverse completeness      {:.3e}",
            self.inverse_completeness_residual
        )?;
        write!(
            f,
            "  verdict: {} (threshold {:.1e})",
            if self.passed { "PASS" } else { "FAIL" },
            self.threshold
        )
    }
}

/// Inspection report of one family state: density matrix, measures and the
/// correlation data behind them.
#[derive(Debug, Clone, Serialize)]
pub struct StateReport {
    pub family: String,
    pub sign: String,
    pub alpha: f64,
    /// Density matrix entries as (re, im) pairs in row-major order.
    pub matrix: Vec<Vec<(f64, f64)>>,
    pub concurrence: f64,
    pub steering: SteeringResult,
    pub correlation: CorrelationData,
}

pub fn state_report(
    family: StateFamily,
    sign: Sign,
    alpha: f64,
    spin_flip: SpinFlip,
) -> Result<StateReport> {
    let state = family_state(family, sign, alpha)?;
    let matrix = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| {
                    let z = state.matrix()[[i, j]];
                    (z.re, z.im)
                })
                .collect()
        })
        .collect();
    Ok(StateReport {
        family: family.to_string(),
        sign: sign.to_string(),
        alpha,
        matrix,
        concurrence: concurrence_with(&state, spin_flip)?,
        steering: steering_value(&state),
        correlation: correlation_data(&state),
    })
}

impl std::fmt::Display for StateReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "state: {} ({}), alpha = {}",
            self.family, self.sign, self.alpha
        )?;
        writeln!(f, "density matrix (re, im):")?;
        for row in &self.matrix {
            let cells: Vec<String> = row
                .iter()
                .map(|(re, im)| format!("({re:+.6}, {im:+.6})"))
                .collect();
            writeln!(f, "  {}", cells.join("  "))?;
        }
        writeln!(f, "concurrence: {:.12}", self.concurrence)?;
        writeln!(
            f,
            "steering: {:.12} ({})",
            self.steering.value,
            if self.steering.violates {
                "violates the classical bound 2"
            } else {
                "within the classical bound"
            }
        )?;
        writeln!(
            f,
            "optimal A observables: a0 = [{:+.6}, {:+.6}, {:+.6}], a1 = [{:+.6}, {:+.6}, {:+.6}]",
            self.steering.optimal_a0[0],
            self.steering.optimal_a0[1],
            self.steering.optimal_a0[2],
            self.steering.optimal_a1[0],
            self.steering.optimal_a1[1],
            self.steering.optimal_a1[2],
        )?;
        writeln!(f, "correlation matrix T (rows x,y,z):")?;
        for row in &self.correlation.t_matrix {
            writeln!(f, "  [{:+.6}, {:+.6}, {:+.6}]", row[0], row[1], row[2])?;
        }
        write!(
            f,
            "local Bloch vectors: a = [{:+.6}, {:+.6}, {:+.6}], b = [{:+.6}, {:+.6}, {:+.6}]",
            self.correlation.a_vector[0],
            self.correlation.a_vector[1],
            self.correlation.a_vector[2],
            self.correlation.b_vector[0],
            self.correlation.b_vector[1],
            self.correlation.b_vector[2],
        )
    }
}
