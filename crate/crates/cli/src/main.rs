use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use mwsense_cli::commands::{self, CliError, Grid, EXIT_FIXTURE_FAILED, EXIT_NOT_CONVERGED};
use mwsense_cli::config::{parse_config, Format, RunConfig};
use mwsense_cli::output::Report;

#[derive(Parser, Debug)]
#[command(name = "mwsense", version, about = "Single-photon microwave sensing with a trapped condensate")]
struct Cli {
    /// TOML run configuration; built-in defaults when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write one file per table into this directory instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Quadrature override such as `rel_tol=1e-8`; may be repeated.
    #[arg(long = "tol-override", global = true, value_name = "KEY=VAL")]
    tol_override: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Line parameters of the resonator.
    CpwInfo,
    /// Single-photon field on a grid (μm; START:STOP:N or a single value).
    FieldMap {
        /// Default 0:b:11.
        #[arg(long, allow_hyphen_values = true)]
        x: Option<Grid>,
        /// Negative values lie in air, positive ones in the substrate.
        #[arg(long, allow_hyphen_values = true, default_value = "-50:-1:11")]
        y: Grid,
        /// Default L/2.
        #[arg(long, allow_hyphen_values = true)]
        z: Option<Grid>,
    },
    /// Mode volume, closed form and numeric.
    ModeVolume,
    /// Single-photon field amplitude by both routes and at the cloud.
    Bmax,
    /// Spectral resolution function over detuning and position.
    DfuncSweep {
        /// ω − Δ over 2π, in kHz.
        #[arg(long, allow_hyphen_values = true, default_value = "-20:20:9")]
        detuning_khz: Grid,
        /// Lateral distance from the cloud axis, μm.
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        r: Grid,
        /// Vertical position relative to the cloud centre, μm.
        #[arg(long, allow_hyphen_values = true, default_value = "-65")]
        y: Grid,
    },
    /// Outcoupled atoms per unit time in the detection volume.
    AtomRate,
    /// Compare computed quantities with the published values.
    ReproducePaper {
        /// Exit with a failure code if any checked value is out of tolerance.
        #[arg(long)]
        strict: bool,
    },
    /// Atom rate over a range of one configuration parameter.
    Sweep {
        /// One of d, N0, a, center_depth, height, lateral_radius,
        /// frequency_ghz, Q, b_offset_mt, b_x_nt.
        #[arg(long)]
        param: String,
        /// Comma-separated values in configuration units.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "range")]
        values: Vec<f64>,
        /// START:STOP:N.
        #[arg(long, allow_hyphen_values = true)]
        range: Option<Grid>,
    },
}

fn load_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| CliError::usage(format!("cannot read {}: {e}", p.display())))?;
            parse_config(&text)?
        }
        None => RunConfig::default(),
    };
    for o in &cli.tol_override {
        cfg.apply_tol_override(o)?;
    }
    if let Some(d) = &cli.out {
        cfg.output.dir = Some(d.to_string_lossy().into_owned());
    }
    match cli.format {
        Some(FormatArg::Csv) => cfg.output.format = Format::Csv,
        Some(FormatArg::Json) => cfg.output.format = Format::Json,
        None => {}
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Report plus the exit code it should end with.
fn run(cli: &Cli, cfg: &RunConfig) -> Result<(Report, i32), CliError> {
    let report = match &cli.command {
        Command::CpwInfo => commands::cpw_info(cfg)?,
        Command::FieldMap { x, y, z } => commands::field_map(cfg, *x, *y, *z)?,
        Command::ModeVolume => commands::mode_volume_cmd(cfg)?,
        Command::Bmax => commands::bmax(cfg)?,
        Command::DfuncSweep { detuning_khz, r, y } => commands::dfunc_sweep(cfg, *detuning_khz, *r, *y)?,
        Command::AtomRate => {
            let r = commands::atom_rate_cmd(cfg)?;
            let converged = r.values.iter().any(|(n, v, _)| n == "converged" && *v == true.into());
            let code = if converged { 0 } else { EXIT_NOT_CONVERGED };
            return Ok((r, code));
        }
        Command::ReproducePaper { strict } => {
            let (r, pass) = commands::reproduce_paper(cfg)?;
            let code = if *strict && !pass { EXIT_FIXTURE_FAILED } else { 0 };
            return Ok((r, code));
        }
        Command::Sweep { param, values, range } => {
            let values = match range {
                Some(g) => g.values(),
                None => values.clone(),
            };
            if values.is_empty() {
                return Err(CliError::usage("sweep needs --values or --range"));
            }
            commands::sweep(cfg, param, &values)?
        }
    };
    Ok((report, 0))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("{}", CliError::usage(format!("thread pool: {e}")).to_json());
            return ExitCode::from(2);
        }
    }
    let result = load_config(&cli).and_then(|cfg| run(&cli, &cfg).map(|r| (cfg, r)));
    match result {
        Ok((cfg, (report, code))) => {
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            if let Err(e) = report.emit(&cfg, &mut lock).and_then(|_| lock.flush()) {
                eprintln!("{}", CliError::new("io", e.to_string(), 1).to_json());
                return ExitCode::from(1);
            }
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code as u8)
        }
    }
}
