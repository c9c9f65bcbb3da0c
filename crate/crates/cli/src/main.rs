use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};
use magnomech_cli::check::{run_battery, CheckResult};
use magnomech_cli::config::{parse_config, ParsedConfig, SweepSpec};
use magnomech_cli::preset::{preset, PRESET_NAMES};
use magnomech_cli::report::{evaluate_point, render_report};
use magnomech_cli::sweep::{run_sweep, write_csv};

/// Exit codes: 0 success, 1 validation error, 2 numeric failure,
/// 3 instability at a point evaluation.
const EXIT_VALIDATION: u8 = 1;
const EXIT_NUMERIC: u8 = 2;
const EXIT_UNSTABLE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "magnomech",
    version,
    about = "Steady-state entropy production and correlations of a driven \
             photon-magnon-phonon system"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a single parameter point and print a report
    Point {
        /// Path to a key = value configuration file
        config: PathBuf,
    },
    /// Run a parameter sweep and write the CSV table
    Sweep {
        /// Path to a configuration file with a sweep section
        config: PathBuf,
        /// Evaluate grid points sequentially instead of in parallel
        #[arg(long)]
        serial: bool,
    },
    /// Run a bundled sweep preset and write its CSV table
    Preset {
        /// Preset name (fig2a..fig2d, fig3a, fig3b, fig4a..fig4c)
        name: String,
        /// Output path; defaults to NAME.csv
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the cavity detuning [units of omega_b]
        #[arg(long = "delta-a")]
        delta_a: Option<f64>,
        /// Evaluate grid points sequentially instead of in parallel
        #[arg(long)]
        serial: bool,
    },
    /// Run the self-check battery on a point configuration
    Check {
        /// Path to a key = value configuration file
        config: PathBuf,
    },
    /// List the available preset names
    Presets,
}

fn numeric_exit(err: &magnomech::Error) -> u8 {
    match err {
        magnomech::Error::InvalidParameter { .. } => EXIT_VALIDATION,
        _ => EXIT_NUMERIC,
    }
}

fn read_config(path: &Path) -> Result<ParsedConfig, u8> {
    let text = fs::read_to_string(path).map_err(|err| {
        eprintln!("error: cannot read {}: {err}", path.display());
        EXIT_VALIDATION
    })?;
    parse_config(&text).map_err(|err| {
        eprintln!("error: {}: {err}", path.display());
        EXIT_VALIDATION
    })
}

fn timestamp() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn emit_sweep(spec: &SweepSpec, out_path: Option<&Path>, serial: bool) -> Result<(), u8> {
    // Open the sink before doing any work so an unwritable path fails fast.
    let mut sink: Box<dyn Write> = match out_path {
        Some(path) => Box::new(fs::File::create(path).map_err(|err| {
            eprintln!("error: cannot write {}: {err}", path.display());
            EXIT_VALIDATION
        })?),
        None => Box::new(std::io::stdout().lock()),
    };
    let table = run_sweep(spec, !serial).map_err(|err| {
        eprintln!("error: sweep failed: {err}");
        numeric_exit(&err)
    })?;
    write_csv(&mut sink, &table, timestamp()).map_err(|err| {
        eprintln!("error: writing table: {err}");
        EXIT_NUMERIC
    })?;
    if let Some(path) = out_path {
        eprintln!("wrote {} rows to {}", table.rows.len(), path.display());
    }
    Ok(())
}

fn cmd_point(config: &Path) -> Result<(), u8> {
    let params = match read_config(config)? {
        ParsedConfig::Point(params) => params,
        ParsedConfig::Sweep(_) => {
            eprintln!(
                "error: {} holds a sweep; use the sweep subcommand",
                config.display()
            );
            return Err(EXIT_VALIDATION);
        }
    };
    let report = evaluate_point(&params).map_err(|err| {
        eprintln!("error: {err}");
        numeric_exit(&err)
    })?;
    print!("{}", render_report(&params, &report));
    if !report.stable {
        return Err(EXIT_UNSTABLE);
    }
    Ok(())
}

fn cmd_sweep(config: &Path, serial: bool) -> Result<(), u8> {
    let spec = match read_config(config)? {
        ParsedConfig::Sweep(spec) => spec,
        ParsedConfig::Point(_) => {
            eprintln!(
                "error: {} holds a single point; use the point subcommand \
                 or add a sweep section",
                config.display()
            );
            return Err(EXIT_VALIDATION);
        }
    };
    emit_sweep(&spec, spec.output.as_deref(), serial)
}

fn cmd_preset(
    name: &str,
    out: Option<PathBuf>,
    delta_a: Option<f64>,
    serial: bool,
) -> Result<(), u8> {
    let mut spec = preset(name).map_err(|err| {
        eprintln!("error: {err}");
        EXIT_VALIDATION
    })?;
    if let Some(delta_a) = delta_a {
        spec.base.delta_a = delta_a;
    }
    let path = out.unwrap_or_else(|| PathBuf::from(format!("{name}.csv")));
    emit_sweep(&spec, Some(&path), serial)
}

fn cmd_check(config: &Path) -> Result<(), u8> {
    let params = match read_config(config)? {
        ParsedConfig::Point(params) => params,
        ParsedConfig::Sweep(spec) => spec.base,
    };
    let result = run_battery(&params).map_err(|err| {
        eprintln!("error: {err}");
        numeric_exit(&err)
    })?;
    match result {
        CheckResult::Unstable {
            spectral_abscissa,
            stability_cross_check,
        } => {
            println!(
                "{} stability-cross-check: {}",
                if stability_cross_check.passed {
                    "PASS"
                } else {
                    "FAIL"
                },
                stability_cross_check.detail
            );
            println!("point is unstable (spectral abscissa {spectral_abscissa:.3e}); no steady state to check");
            Err(EXIT_UNSTABLE)
        }
        CheckResult::Ran(outcomes) => {
            let mut all_passed = true;
            for check in &outcomes {
                println!(
                    "{} {}: {}",
                    if check.passed { "PASS" } else { "FAIL" },
                    check.name,
                    check.detail
                );
                all_passed &= check.passed;
            }
            if all_passed {
                Ok(())
            } else {
                Err(EXIT_NUMERIC)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() {
                EXIT_VALIDATION
            } else {
                0 // --help / --version
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };

    let result = match cli.command {
        Command::Point { config } => cmd_point(&config),
        Command::Sweep { config, serial } => cmd_sweep(&config, serial),
        Command::Preset {
            name,
            out,
            delta_a,
            serial,
        } => cmd_preset(&name, out, delta_a, serial),
        Command::Check { config } => cmd_check(&config),
        Command::Presets => {
            for name in PRESET_NAMES {
                println!("{name}");
            }
            Ok(())
        }
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => ExitCode::from(code),
    }
}
