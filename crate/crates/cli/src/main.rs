//! `qprotect` — sweeps, dilation checks and state reports from the shell.
//!
//! Exit codes: 0 on success, 1 on invalid input, 2 when a numerical
//! verification fails.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qprotect::sweep::{run_sweep_to_path, GridSpec, SweepConfig};
use qprotect::{
    dilation_verify, state_report, DilationTarget, Error, Sign, SpinFlip, StateFamily,
};

#[derive(Parser)]
#[command(
    name = "qprotect",
    version,
    about = "Two-qubit correlation protection under generalized amplitude damping",
    disable_version_flag = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a parameter-grid sweep over a protocol and write CSV rows.
    Sweep(SweepArgs),
    /// Numerically verify a unitary dilation and print its residuals.
    DilationVerify(DilationArgs),
    /// Inspect one initial state: density matrix, measures, correlations.
    StateReport(StateArgs),
    /// Print the version.
    Version,
}

#[derive(Args)]
struct SweepArgs {
    /// TOML config file; flags below override individual keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// State family: antiparallel | parallel.
    #[arg(long)]
    state_family: Option<String>,
    /// Superposition sign: + | -.
    #[arg(long, allow_hyphen_values = true)]
    sign: Option<String>,
    /// Protocol: baseline | weak | povm1-case1 | povm1-case2 | povm2-case1 | povm2-case2.
    #[arg(long)]
    protocol: Option<String>,
    /// Grid: comma list "0.1,0.5" or range "start:stop:count".
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    nu: Option<String>,
    #[arg(long)]
    eta: Option<String>,
    #[arg(long)]
    w: Option<String>,
    #[arg(long)]
    r: Option<String>,
    /// Output CSV path (overrides the config key).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DilationArgs {
    /// Which dilation: u1 | u2 | built.
    #[arg(long)]
    which: String,
    #[arg(long)]
    nu: f64,
    #[arg(long)]
    eta: f64,
    /// Emit the report as JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct StateArgs {
    /// State family: antiparallel | parallel.
    #[arg(long)]
    family: String,
    /// Superposition sign: + | -.
    #[arg(long, default_value = "+", allow_hyphen_values = true)]
    sign: String,
    #[arg(long)]
    alpha: f64,
    /// Spin-flip convention for the concurrence: conjugated | unconjugated.
    #[arg(long, default_value = "conjugated")]
    spin_flip: String,
    /// Emit the report as JSON instead of text.
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(if err.is_numerical() { 2 } else { 1 })
        }
    }
}

fn run(cli: Cli) -> qprotect::Result<ExitCode> {
    match cli.command {
        Command::Sweep(args) => {
            let config = build_config(&args)?;
            let rows = run_sweep_to_path(&config, args.output.as_ref())?;
            let path = args
                .output
                .as_ref()
                .or(config.output.as_ref())
                .expect("run_sweep_to_path validated the path");
            println!("wrote {rows} rows to {}", path.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::DilationVerify(args) => {
            let target: DilationTarget = args.which.parse()?;
            let report = dilation_verify(target, args.nu, args.eta)?;
            if args.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report)
                        .expect("report serialization is infallible")
                );
            } else {
                println!("{report}");
            }
            Ok(if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
        Command::StateReport(args) => {
            let family: StateFamily = args.family.parse()?;
            let sign: Sign = args.sign.parse()?;
            let spin_flip = match args.spin_flip.as_str() {
                "conjugated" => SpinFlip::Conjugated,
                "unconjugated" => SpinFlip::Unconjugated,
                other => {
                    return Err(Error::InvalidConfig(format!(
                        "spin-flip must be 'conjugated' or 'unconjugated', got '{other}'"
                    )))
                }
            };
            let report = state_report(family, sign, args.alpha, spin_flip)?;
            if args.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report)
                        .expect("report serialization is infallible")
                );
            } else {
                println!("{report}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Version => {
            println!("qprotect {}", env!("CARGO_PKG_VERSION"));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn build_config(args: &SweepArgs) -> qprotect::Result<SweepConfig> {
    let mut config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            toml::from_str(&text)
                .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?
        }
        None => SweepConfig::default(),
    };
    if let Some(v) = &args.state_family {
        config.state_family = v.parse()?;
    }
    if let Some(v) = &args.sign {
        config.sign = v.parse()?;
    }
    if let Some(v) = &args.protocol {
        config.protocol = v.parse()?;
    }
    for (flag, slot) in [
        (&args.alpha, &mut config.alpha),
        (&args.nu, &mut config.nu),
        (&args.eta, &mut config.eta),
        (&args.w, &mut config.w),
        (&args.r, &mut config.r),
    ] {
        if let Some(text) = flag {
            *slot = text.parse::<GridSpec>()?;
        }
    }
    Ok(config)
}
