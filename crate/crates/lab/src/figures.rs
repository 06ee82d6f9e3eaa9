//! Pre-registered parameter sets for the three figures.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use logkdv_core::spectrum::sign_changes;
use serde::Serialize;

use crate::commands::{plus_modes, run_into};
use crate::config::{defaults, Command, DataKind, ExperimentConfig};
use crate::error::Result;
use crate::output::OutputSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    /// The first three eigenfunctions in k.
    Fig1,
    /// Odd data, α = 0.1.
    Fig2,
    /// Even data, α = 0.25.
    Fig3,
}

impl Figure {
    pub const ALL: [Figure; 3] = [Figure::Fig1, Figure::Fig2, Figure::Fig3];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
        }
    }

    /// The configuration behind the figure, drawn from the defaults table.
    pub fn config(self, root: &Path) -> ExperimentConfig {
        let output_dir = root.join(self.name());
        match self {
            Figure::Fig1 => ExperimentConfig {
                n_modes: 3,
                output_dir,
                ..defaults(Command::Spectrum)
            },
            Figure::Fig2 => ExperimentConfig {
                kind: DataKind::Odd,
                alpha: 0.1,
                output_dir,
                ..defaults(Command::EvolveLinear)
            },
            Figure::Fig3 => ExperimentConfig {
                kind: DataKind::Even,
                alpha: 0.25,
                output_dir,
                ..defaults(Command::EvolveLinear)
            },
        }
    }
}

#[derive(Serialize)]
struct EigenDoc {
    #[serde(rename = "E")]
    e: Vec<f64>,
    omega: Vec<f64>,
    zeros: Vec<usize>,
}

fn eigenfunctions(config: &ExperimentConfig, out: &mut OutputSet) -> Result<Vec<String>> {
    let modes = plus_modes(config)?;
    let grid = *modes[0].uhat.grid();
    let header: Vec<String> = std::iter::once("k".to_string())
        .chain(modes.iter().map(|m| format!("uhat_{}", m.index)))
        .collect();
    let rows: Vec<Vec<f64>> = (0..grid.len())
        .map(|j| std::iter::once(grid.point(j)).chain(modes.iter().map(|m| m.uhat.values()[j])).collect())
        .collect();
    out.csv_table("uhat.csv", &header, &rows)?;
    out.json(
        "eigen.json",
        &EigenDoc {
            e: modes.iter().map(|m| m.eigenvalue).collect(),
            omega: modes.iter().map(|m| m.omega).collect(),
            zeros: modes.iter().map(|m| sign_changes(m.uhat.values())).collect(),
        },
    )?;
    Ok(Vec::new())
}

fn bundle(figure: Figure, root: &Path) -> Result<(OutputSet, ExperimentConfig, Vec<String>)> {
    let config = figure.config(root);
    config.validate()?;
    let mut out = OutputSet::create(&config.output_dir)?;
    let warnings = match figure {
        Figure::Fig1 => eigenfunctions(&config, &mut out)?,
        _ => run_into(&config, &mut out)?,
    };
    Ok((out, config, warnings))
}

/// Writes each requested bundle to `root/<name>`, running them
/// concurrently. Nothing is kept unless every bundle succeeds.
pub fn run_figures(figures: &[Figure], root: &Path) -> Result<Vec<(PathBuf, Vec<String>)>> {
    let results: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = figures.iter().map(|&f| s.spawn(move || bundle(f, root))).collect();
        handles.into_iter().map(|h| h.join().expect("figure run panicked")).collect()
    });
    let done: Vec<_> = results.into_iter().collect::<Result<_>>()?;
    let mut report = Vec::with_capacity(done.len());
    for (out, config, warnings) in done {
        out.finish(&config)?;
        report.push((config.output_dir, warnings));
    }
    Ok(report)
}
