//! Parameter-grid sweeps over the protocols with deterministic CSV output.
//!
//! A sweep is specified by a [`SweepConfig`]: a state family, a protocol and
//! five parameter grids. Every grid point yields one CSV row per protocol
//! branch, emitted in nested grid order (α outermost, then ν, η, w, r, then
//! branch). Floats are printed with 12 significant digits, so re-running the
//! same config produces byte-identical output.

use std::io::Write;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::dilation::{gadc_inverse_set_u1, gadc_inverse_set_u2};
use crate::error::{Error, Result};
use crate::protocol::{baseline, povm_case_one, povm_case_two, weak_protocol, ProtocolResult};
use crate::state::{family_state, Sign, StateFamily};

/// Protocol selector for sweeps. The `povmN` prefixes pick the inverse-set
/// family (the two reference dilations); `case1` filters before the noise,
/// `case2` after.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepProtocol {
    #[serde(rename = "baseline")]
    Baseline,
    #[serde(rename = "weak")]
    Weak,
    #[serde(rename = "povm1-case1")]
    Povm1Case1,
    #[serde(rename = "povm1-case2")]
    Povm1Case2,
    #[serde(rename = "povm2-case1")]
    Povm2Case1,
    #[serde(rename = "povm2-case2")]
    Povm2Case2,
}

impl SweepProtocol {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepProtocol::Baseline => "baseline",
            SweepProtocol::Weak => "weak",
            SweepProtocol::Povm1Case1 => "povm1-case1",
            SweepProtocol::Povm1Case2 => "povm1-case2",
            SweepProtocol::Povm2Case1 => "povm2-case1",
            SweepProtocol::Povm2Case2 => "povm2-case2",
        }
    }

    pub const ALL: [SweepProtocol; 6] = [
        SweepProtocol::Baseline,
        SweepProtocol::Weak,
        SweepProtocol::Povm1Case1,
        SweepProtocol::Povm1Case2,
        SweepProtocol::Povm2Case1,
        SweepProtocol::Povm2Case2,
    ];
}

impl std::str::FromStr for SweepProtocol {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SweepProtocol::ALL
            .iter()
            .copied()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| {
                Error::InvalidConfig(format!(
                    "unknown protocol '{s}' (expected one of: baseline, weak, povm1-case1, \
                     povm1-case2, povm2-case1, povm2-case2)"
                ))
            })
    }
}

impl std::fmt::Display for SweepProtocol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Grid of parameter values: either an explicit list or an inclusive linear
/// range with a point count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    List(Vec<f64>),
    Range { start: f64, stop: f64, count: usize },
}

impl GridSpec {
    pub fn single(value: f64) -> Self {
        GridSpec::List(vec![value])
    }

    pub fn values(&self) -> Result<Vec<f64>> {
        match self {
            GridSpec::List(values) => {
                if values.is_empty() {
                    return Err(Error::InvalidConfig("grid list is empty".into()));
                }
                Ok(values.clone())
            }
            GridSpec::Range { start, stop, count } => {
                if *count == 0 {
                    return Err(Error::InvalidConfig("grid count must be positive".into()));
                }
                if *count == 1 {
                    return Ok(vec![*start]);
                }
                let step = (stop - start) / (*count as f64 - 1.0);
                Ok((0..*count).map(|i| start + step * i as f64).collect())
            }
        }
    }
}

impl std::str::FromStr for GridSpec {
    type Err = Error;

    /// `start:stop:count` for ranges, otherwise a comma-separated list.
    fn from_str(s: &str) -> Result<Self> {
        let parse = |piece: &str| -> Result<f64> {
            piece.trim().parse::<f64>().map_err(|_| {
                Error::InvalidConfig(format!("cannot parse '{piece}' as a number"))
            })
        };
        if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            if parts.len() != 3 {
                return Err(Error::InvalidConfig(format!(
                    "range grid must be start:stop:count, got '{s}'"
                )));
            }
            let count = parts[2].trim().parse::<usize>().map_err(|_| {
                Error::InvalidConfig(format!("cannot parse '{}' as a count", parts[2]))
            })?;
            Ok(GridSpec::Range {
                start: parse(parts[0])?,
                stop: parse(parts[1])?,
                count,
            })
        } else {
            let values = s.split(',').map(parse).collect::<Result<Vec<f64>>>()?;
            Ok(GridSpec::List(values))
        }
    }
}

/// Full sweep specification. All keys are optional in a config file; the
/// defaults sweep α across [0, 1] for the baseline protocol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub state_family: StateFamily,
    pub sign: Sign,
    pub protocol: SweepProtocol,
    pub alpha: GridSpec,
    pub nu: GridSpec,
    pub eta: GridSpec,
    pub w: GridSpec,
    pub r: GridSpec,
    pub output: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            state_family: StateFamily::Antiparallel,
            sign: Sign::Plus,
            protocol: SweepProtocol::Baseline,
            alpha: GridSpec::Range {
                start: 0.0,
                stop: 1.0,
                count: 41,
            },
            nu: GridSpec::single(0.5),
            eta: GridSpec::single(0.5),
            w: GridSpec::single(0.0),
            r: GridSpec::single(0.0),
            output: None,
        }
    }
}

struct ExpandedGrids {
    alpha: Vec<f64>,
    nu: Vec<f64>,
    eta: Vec<f64>,
    w: Vec<f64>,
    r: Vec<f64>,
}

fn check_grid(name: &str, values: &[f64], upper_open: bool) -> Result<()> {
    for &v in values {
        let ok = if upper_open {
            (0.0..1.0).contains(&v)
        } else {
            (0.0..=1.0).contains(&v)
        };
        if !ok || !v.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "grid '{name}' value {v} outside {}",
                if upper_open { "[0, 1)" } else { "[0, 1]" }
            )));
        }
    }
    Ok(())
}

impl SweepConfig {
    fn expand(&self) -> Result<ExpandedGrids> {
        let grids = ExpandedGrids {
            alpha: self.alpha.values()?,
            nu: self.nu.values()?,
            eta: self.eta.values()?,
            w: self.w.values()?,
            r: self.r.values()?,
        };
        check_grid("alpha", &grids.alpha, false)?;
        check_grid("nu", &grids.nu, false)?;
        check_grid("eta", &grids.eta, false)?;
        check_grid("w", &grids.w, true)?;
        check_grid("r", &grids.r, true)?;
        // POVM protocols derive their inverse set from (ν, η); reject grids
        // containing singular combinations up front so no partial file is
        // written.
        match self.protocol {
            SweepProtocol::Povm1Case1 | SweepProtocol::Povm1Case2 => {
                for &nu in &grids.nu {
                    for &eta in &grids.eta {
                        gadc_inverse_set_u1(nu, eta)?;
                    }
                }
            }
            SweepProtocol::Povm2Case1 | SweepProtocol::Povm2Case2 => {
                for &nu in &grids.nu {
                    for &eta in &grids.eta {
                        gadc_inverse_set_u2(nu, eta)?;
                    }
                }
            }
            _ => {}
        }
        Ok(grids)
    }
}

pub const CSV_HEADER: &str = "alpha,nu,eta,w,r,protocol,branch,success_prob,concurrence_base,\
                              concurrence_prot,steering_base,steering_prot,improved_concurrence,\
                              improved_steering";

/// Strict margin above the baseline before a row is flagged as improved;
/// filters float noise on exactly-equal branches.
const IMPROVEMENT_EPS: f64 = 1e-12;

/// Print a float with 12 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.11e}")
}

/// Run a sweep and write CSV rows to `out`. Returns the number of data rows.
pub fn run_sweep<W: Write>(config: &SweepConfig, out: &mut W) -> Result<usize> {
    let grids = config.expand()?;
    writeln!(out, "{CSV_HEADER}")?;
    let mut rows = 0usize;
    for &alpha in &grids.alpha {
        let state = family_state(config.state_family, config.sign, alpha)?;
        for &nu in &grids.nu {
            for &eta in &grids.eta {
                let base = baseline(&state, nu, eta)?;
                let base_c = base.concurrence.expect("baseline is deterministic");
                let base_s = base.steering.expect("baseline is deterministic");
                for &w in &grids.w {
                    for &r in &grids.r {
                        let branches: Vec<ProtocolResult> = match config.protocol {
                            SweepProtocol::Baseline => vec![baseline(&state, nu, eta)?],
                            SweepProtocol::Weak => {
                                vec![weak_protocol(&state, nu, eta, w, r)?]
                            }
                            SweepProtocol::Povm1Case1 => {
                                povm_case_one(&state, nu, eta, &gadc_inverse_set_u1(nu, eta)?)?
                            }
                            SweepProtocol::Povm1Case2 => {
                                povm_case_two(&state, nu, eta, &gadc_inverse_set_u1(nu, eta)?)?
                            }
                            SweepProtocol::Povm2Case1 => {
                                povm_case_one(&state, nu, eta, &gadc_inverse_set_u2(nu, eta)?)?
                            }
                            SweepProtocol::Povm2Case2 => {
                                povm_case_two(&state, nu, eta, &gadc_inverse_set_u2(nu, eta)?)?
                            }
                        };
                        for branch in &branches {
                            write_row(
                                out,
                                &[alpha, nu, eta, w, r],
                                config.protocol,
                                branch,
                                base_c,
                                base_s,
                            )?;
                            rows += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(rows)
}

/// Run a sweep into the config's output path (or the given override).
pub fn run_sweep_to_path(config: &SweepConfig, path_override: Option<&PathBuf>) -> Result<usize> {
    let path = path_override.or(config.output.as_ref()).ok_or_else(|| {
        Error::InvalidConfig("no output path: set 'output' in the config or pass --output".into())
    })?;
    let file = std::fs::File::create(path)?;
    let mut writer = std::io::BufWriter::new(file);
    let rows = run_sweep(config, &mut writer)?;
    writer.flush()?;
    Ok(rows)
}

fn write_row<W: Write>(
    out: &mut W,
    params: &[f64; 5],
    protocol: SweepProtocol,
    branch: &ProtocolResult,
    base_c: f64,
    base_s: f64,
) -> Result<()> {
    let branch_field = branch
        .branch
        .map(|i| i.to_string())
        .unwrap_or_default();
    let (prot_c, prot_s, improved_c, improved_s) = match (branch.concurrence, branch.steering) {
        (Some(c), Some(s)) => (
            fmt_float(c),
            fmt_float(s),
            u8::from(c > base_c + IMPROVEMENT_EPS),
            u8::from(s > base_s + IMPROVEMENT_EPS),
        ),
        _ => (String::new(), String::new(), 0, 0),
    };
    writeln!(
        out,
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        fmt_float(params[0]),
        fmt_float(params[1]),
        fmt_float(params[2]),
        fmt_float(params[3]),
        fmt_float(params[4]),
        protocol,
        branch_field,
        fmt_float(branch.success_probability),
        fmt_float(base_c),
        prot_c,
        fmt_float(base_s),
        prot_s,
        improved_c,
        improved_s,
    )?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_spec_parses_ranges_and_lists() {
        let range: GridSpec = "0.1:0.9:5".parse().unwrap();
        let got = range.values().unwrap();
        for (g, want) in got.iter().zip([0.1, 0.3, 0.5, 0.7, 0.9]) {
            assert!((g - want).abs() < 1e-12);
        }
        let list: GridSpec = "0.25, 0.5".parse().unwrap();
        assert_eq!(list.values().unwrap(), vec![0.25, 0.5]);
        let single: GridSpec = "0.7".parse().unwrap();
        assert_eq!(single.values().unwrap(), vec![0.7]);
        assert!("1:2".parse::<GridSpec>().is_err());
        assert!("a,b".parse::<GridSpec>().is_err());
    }

    #[test]
    fn grid_spec_rejects_empty() {
        assert!(GridSpec::List(vec![]).values().is_err());
        assert!(GridSpec::Range {
            start: 0.0,
            stop: 1.0,
            count: 0
        }
        .values()
        .is_err());
    }

    #[test]
    fn config_rejects_out_of_range_grids() {
        let config = SweepConfig {
            w: GridSpec::single(1.0), // w must stay below 1
            protocol: SweepProtocol::Weak,
            ..SweepConfig::default()
        };
        let mut sink = Vec::new();
        assert!(run_sweep(&config, &mut sink).is_err());
    }

    #[test]
    fn povm_sweep_rejects_singular_parameter_grid() {
        let config = SweepConfig {
            protocol: SweepProtocol::Povm1Case1,
            nu: GridSpec::single(0.0),
            eta: GridSpec::single(0.0),
            ..SweepConfig::default()
        };
        let mut sink = Vec::new();
        assert!(matches!(
            run_sweep(&config, &mut sink),
            Err(Error::SingularParameter(_))
        ));
        // nothing written on failure
        assert!(sink.is_empty());
    }

    #[test]
    fn weak_sweep_with_zero_strengths_never_improves() {
        let config = SweepConfig {
            protocol: SweepProtocol::Weak,
            alpha: GridSpec::single(0.6),
            nu: GridSpec::single(0.4),
            eta: GridSpec::single(0.8),
            ..SweepConfig::default()
        };
        let mut buffer = Vec::new();
        let rows = run_sweep(&config, &mut buffer).unwrap();
        assert_eq!(rows, 1);
        let text = String::from_utf8(buffer).unwrap();
        let line = text.lines().nth(1).unwrap();
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 14);
        // protected equals base to the printed precision, flags are 0
        assert_eq!(fields[8], fields[9]);
        assert_eq!(fields[10], fields[11]);
        assert_eq!(fields[12], "0");
        assert_eq!(fields[13], "0");
    }

    #[test]
    fn baseline_sweep_matches_pure_state_formula() {
        let config = SweepConfig {
            protocol: SweepProtocol::Baseline,
            alpha: GridSpec::Range {
                start: 0.1,
                stop: 0.9,
                count: 9
            },
            nu: GridSpec::single(1.0),
            eta: GridSpec::single(1.0),
            ..SweepConfig::default()
        };
        let mut buffer = Vec::new();
        run_sweep(&config, &mut buffer).unwrap();
        let text = String::from_utf8(buffer).unwrap();
        for (i, line) in text.lines().skip(1).enumerate() {
            let fields: Vec<&str> = line.split(',').collect();
            let alpha = 0.1 + 0.1 * i as f64;
            let expected = 2.0 * alpha * (1.0 - alpha * alpha).sqrt();
            let got: f64 = fields[8].parse().unwrap();
            assert!((got - expected).abs() < 1e-10, "alpha {alpha}");
        }
    }

    #[test]
    fn povm_sweep_emits_four_branches_per_point() {
        let config = SweepConfig {
            protocol: SweepProtocol::Povm2Case2,
            alpha: GridSpec::List(vec![0.3, 0.7]),
            nu: GridSpec::single(0.5),
            eta: GridSpec::List(vec![0.4, 0.6]),
            ..SweepConfig::default()
        };
        let mut buffer = Vec::new();
        let rows = run_sweep(&config, &mut buffer).unwrap();
        assert_eq!(rows, 2 * 2 * 4);
        let text = String::from_utf8(buffer).unwrap();
        assert_eq!(text.lines().count(), 1 + rows);
    }

    #[test]
    fn sweeps_are_byte_identical() {
        let config = SweepConfig {
            protocol: SweepProtocol::Povm1Case2,
            alpha: GridSpec::Range {
                start: 0.0,
                stop: 1.0,
                count: 7
            },
            nu: GridSpec::single(0.35),
            eta: GridSpec::single(0.65),
            ..SweepConfig::default()
        };
        let mut first = Vec::new();
        let mut second = Vec::new();
        run_sweep(&config, &mut first).unwrap();
        run_sweep(&config, &mut second).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn float_formatting_has_twelve_significant_digits() {
        assert_eq!(fmt_float(0.96), "9.60000000000e-1");
        assert_eq!(fmt_float(1.0), "1.00000000000e0");
        assert_eq!(fmt_float(0.0), "0.00000000000e0");
    }

    #[test]
    fn protocol_strings_round_trip() {
        for protocol in SweepProtocol::ALL {
            let parsed: SweepProtocol = protocol.as_str().parse().unwrap();
            assert_eq!(parsed, protocol);
        }
        assert!("povm3-case1".parse::<SweepProtocol>().is_err());
    }
}
