//! Command-line front end. `main` parses and prints; everything else lives
//! here so it can be exercised in-process.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::config::{defaults, resolve, Command, ConfigPatch};
use crate::error::Result;
use crate::figures::{run_figures, Figure};

#[derive(Debug, Parser)]
#[command(name = "logkdv-lab", version, about = "Numerical experiments for the log-KdV equation")]
pub struct Cli {
    /// TOML file with any ExperimentConfig fields; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub action: Action,
}

#[derive(Debug, Subcommand)]
pub enum Action {
    /// Eigenvalues of the half-line problem.
    Spectrum(ConfigPatch),
    /// Eigenfunctions in k and x.
    Modes(ConfigPatch),
    /// Algebraic decay exponents of the modes in x.
    DecayFit(ConfigPatch),
    /// Implicit evolution of the linearized equation.
    EvolveLinear(ConfigPatch),
    /// Split-step evolution of the regularized equation.
    EvolveNonlinear(ConfigPatch),
    /// Modal coefficients of initial data.
    Project(ConfigPatch),
    /// Regularized flows for a decreasing list of ε.
    EpsStudy(ConfigPatch),
    /// Runs the command named in the config file.
    Run(ConfigPatch),
    /// Writes the data behind a figure; `all` runs every bundle.
    Figure {
        #[arg(value_enum)]
        name: FigureArg,
        #[arg(long, short = 'o')]
        output_dir: Option<PathBuf>,
    },
    /// Prints the defaults for a command as TOML.
    Defaults {
        #[arg(value_enum)]
        command: Command,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FigureArg {
    Fig1,
    Fig2,
    Fig3,
    All,
}

/// What a successful invocation produced.
#[derive(Debug, Default)]
pub struct Report {
    /// Directories written, one per run or figure bundle.
    pub outputs: Vec<PathBuf>,
    pub warnings: Vec<String>,
    /// Text for standard output (the `defaults` listing).
    pub text: Option<String>,
}

/// Runs one invocation. `env_output_dir` is the value of
/// [`OUTPUT_DIR_ENV`](crate::OUTPUT_DIR_ENV), passed in so tests stay
/// independent of the process environment.
pub fn execute(cli: Cli, env_output_dir: Option<PathBuf>) -> Result<Report> {
    let file = cli.config.as_deref().map(ConfigPatch::from_toml_file).transpose()?;
    let (command, flags) = match cli.action {
        Action::Spectrum(p) => (Some(Command::Spectrum), p),
        Action::Modes(p) => (Some(Command::Modes), p),
        Action::DecayFit(p) => (Some(Command::DecayFit), p),
        Action::EvolveLinear(p) => (Some(Command::EvolveLinear), p),
        Action::EvolveNonlinear(p) => (Some(Command::EvolveNonlinear), p),
        Action::Project(p) => (Some(Command::Project), p),
        Action::EpsStudy(p) => (Some(Command::EpsStudy), p),
        Action::Run(p) => (None, p),
        Action::Figure { name, output_dir } => {
            let figures = match name {
                FigureArg::Fig1 => vec![Figure::Fig1],
                FigureArg::Fig2 => vec![Figure::Fig2],
                FigureArg::Fig3 => vec![Figure::Fig3],
                FigureArg::All => Figure::ALL.to_vec(),
            };
            let root = output_dir
                .or_else(|| file.as_ref().and_then(|f| f.output_dir.clone()))
                .or(env_output_dir)
                .unwrap_or_else(|| defaults(Command::Spectrum).output_dir);
            let mut report = Report::default();
            for (dir, warnings) in run_figures(&figures, &root)? {
                report.outputs.push(dir);
                report.warnings.extend(warnings);
            }
            return Ok(report);
        }
        Action::Defaults { command } => {
            return Ok(Report {
                text: Some(defaults(command).to_toml()),
                ..Report::default()
            })
        }
    };
    let config = resolve(command, file.as_ref(), &flags, env_output_dir)?;
    let warnings = crate::run(&config)?;
    Ok(Report {
        outputs: vec![config.output_dir],
        warnings,
        text: None,
    })
}
