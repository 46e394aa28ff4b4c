use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use deltaspec_cli::*;

#[derive(Parser)]
#[command(
    name = "deltaspec",
    version,
    about = "Spectral analysis of 2D/3D Schrödinger operators with point interactions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArg {
    /// Path to the JSON job file.
    config: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Self-adjointness and nonnegativity report for the boundary pair.
    Check {
        #[command(flatten)]
        config: ConfigArg,
    },
    /// Bound states, essential spectrum, and the 3D negative-eigenvalue count.
    Spectrum {
        #[command(flatten)]
        config: ConfigArg,
        /// Override the upper end of the s = sqrt(|z|) scan.
        #[arg(long = "s-max")]
        s_max: Option<f64>,
        /// Override the number of scan nodes.
        #[arg(long)]
        grid: Option<usize>,
        /// Escalate numerical warnings to exit code 3.
        #[arg(long)]
        strict: bool,
    },
    /// On-shell scattering matrices at the given energies.
    Scattering {
        #[command(flatten)]
        config: ConfigArg,
        /// Comma-separated list of positive energies.
        #[arg(long)]
        energies: String,
    },
    /// Krein resolvent kernel values at point pairs.
    Resolvent {
        #[command(flatten)]
        config: ConfigArg,
        /// Spectral parameter as re,im.
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        /// JSON file with an array of [x, x'] coordinate pairs.
        #[arg(long)]
        points: PathBuf,
        /// Emit CSV instead of the JSON envelope.
        #[arg(long)]
        csv: bool,
    },
    /// Gerschgorin sufficient conditions for the diagonal family.
    Gerschgorin {
        #[command(flatten)]
        config: ConfigArg,
        /// Comma-separated 1-based center indices forming the set K.
        #[arg(long, default_value = "")]
        k: String,
    },
    /// Weyl matrix at a point, or a table over the negative axis.
    Weyl {
        #[command(flatten)]
        config: ConfigArg,
        /// Spectral parameter as re,im (mutually exclusive with --table).
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        /// Table request as s_min,s_max,steps.
        #[arg(long)]
        table: Option<String>,
        /// Emit CSV instead of the JSON envelope (table mode only).
        #[arg(long)]
        csv: bool,
    },
}

fn run() -> Result<(ResultEnvelope, Option<String>, bool), CliError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Check { config } => {
            let job = JobConfig::from_path(&config.config)?;
            Ok((cmd_check(&job)?, None, false))
        }
        Command::Spectrum {
            config,
            s_max,
            grid,
            strict,
        } => {
            let job = JobConfig::from_path(&config.config)?;
            Ok((cmd_spectrum(&job, s_max, grid)?, None, strict))
        }
        Command::Scattering { config, energies } => {
            let job = JobConfig::from_path(&config.config)?;
            let xs = parse_f64_list(&energies)?;
            Ok((cmd_scattering(&job, &xs)?, None, false))
        }
        Command::Resolvent {
            config,
            z,
            points,
            csv,
        } => {
            let job = JobConfig::from_path(&config.config)?;
            let z = parse_complex(&z)?;
            let pairs = parse_points_file(&points)?;
            let env = cmd_resolvent(&job, z, &pairs)?;
            let csv_text = if csv {
                Some(resolvent_csv(&env.results).ok_or_else(|| CliError {
                    code: 1,
                    message: "internal: CSV conversion failed".into(),
                })?)
            } else {
                None
            };
            Ok((env, csv_text, false))
        }
        Command::Gerschgorin { config, k } => {
            let job = JobConfig::from_path(&config.config)?;
            let ks = parse_f64_list(&k)?;
            let k_idx: Vec<usize> = ks.iter().map(|&v| v as usize).collect();
            Ok((cmd_gerschgorin(&job, &k_idx)?, None, false))
        }
        Command::Weyl {
            config,
            z,
            table,
            csv,
        } => {
            let job = JobConfig::from_path(&config.config)?;
            let request = match (z, table) {
                (Some(z), None) => WeylRequest::At(parse_complex(&z)?),
                (None, Some(t)) => {
                    let parts = parse_f64_list(&t)?;
                    if parts.len() != 3 {
                        return Err(CliError::config(
                            "table: expected s_min,s_max,steps",
                        ));
                    }
                    WeylRequest::Table {
                        s_min: parts[0],
                        s_max: parts[1],
                        steps: parts[2] as usize,
                    }
                }
                _ => {
                    return Err(CliError::config(
                        "weyl: exactly one of --z or --table is required",
                    ))
                }
            };
            let env = cmd_weyl(&job, &request)?;
            let csv_text = if csv {
                Some(weyl_table_csv(&env.results).ok_or_else(|| CliError::config(
                    "csv output applies to --table mode",
                ))?)
            } else {
                None
            };
            Ok((env, csv_text, false))
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok((env, csv, strict)) => {
            if let Some(text) = csv {
                print!("{text}");
            } else {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&env).expect("envelope serializes")
                );
            }
            if strict && !env.warnings.is_empty() {
                for w in &env.warnings {
                    eprintln!("warning: {w}");
                }
                return ExitCode::from(EXIT_STRICT_WARNING as u8);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
