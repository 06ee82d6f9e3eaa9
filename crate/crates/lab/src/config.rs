//! Experiment configuration, the versioned defaults table and validation.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use logkdv_core::linevolve::{step_count, InitialKind, MAX_DT};
use logkdv_core::nonlin::validate_eps_list;
use logkdv_core::spectrum::{MAX_MODES, MIN_K_MAX};
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// Bumped whenever a value in [`defaults`] changes.
pub const DEFAULTS_VERSION: u32 = 1;

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "LOGKDV_OUTPUT_DIR";

const DEFAULT_OUTPUT_DIR: &str = "logkdv-output";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Spectrum,
    Modes,
    DecayFit,
    EvolveLinear,
    EvolveNonlinear,
    Project,
    EpsStudy,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Spectrum,
        Command::Modes,
        Command::DecayFit,
        Command::EvolveLinear,
        Command::EvolveNonlinear,
        Command::Project,
        Command::EpsStudy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Modes => "modes",
            Command::DecayFit => "decay-fit",
            Command::EvolveLinear => "evolve-linear",
            Command::EvolveNonlinear => "evolve-nonlinear",
            Command::Project => "project",
            Command::EpsStudy => "eps-study",
        }
    }

    fn is_nonlinear(self) -> bool {
        matches!(self, Command::EvolveNonlinear | Command::EpsStudy)
    }
}

/// Initial profile. `soliton` is `e^c v_G(x - shift)` and only feeds the
/// nonlinear commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum DataKind {
    Odd,
    Even,
    Gaussian,
    Kernel,
    Soliton,
}

impl DataKind {
    pub fn linear(self) -> Option<InitialKind> {
        match self {
            DataKind::Odd => Some(InitialKind::Odd),
            DataKind::Even => Some(InitialKind::Even),
            DataKind::Gaussian => Some(InitialKind::Gaussian),
            DataKind::Kernel => Some(InitialKind::Kernel),
            DataKind::Soliton => None,
        }
    }
}

/// A fully resolved experiment. Every field has a value; which ones matter
/// depends on `command`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Command,
    /// Half-width of the periodic box `[-L, L)`.
    #[serde(alias = "L")]
    pub length: f64,
    pub n: usize,
    pub k_max: f64,
    pub n_k: usize,
    pub dt: f64,
    pub t_final: f64,
    pub alpha: f64,
    pub c: f64,
    pub shift: f64,
    pub eps: f64,
    pub eps_list: Vec<f64>,
    pub m: u8,
    pub n_modes: usize,
    pub record_every: usize,
    pub kind: DataKind,
    pub fit_window: [f64; 2],
    pub output_dir: PathBuf,
}

/// Version 1 of the defaults table.
pub fn defaults(command: Command) -> ExperimentConfig {
    let mut c = ExperimentConfig {
        command,
        length: 40.0,
        n: 4096,
        k_max: 12.0,
        n_k: 4000,
        dt: 1e-3,
        t_final: 5.0,
        alpha: 0.1,
        c: 0.0,
        shift: 0.0,
        eps: 1e-3,
        eps_list: vec![1e-1, 1e-2, 1e-3],
        m: 2,
        n_modes: 3,
        record_every: 10,
        kind: DataKind::Odd,
        fit_window: [20.0, 60.0],
        output_dir: PathBuf::from(DEFAULT_OUTPUT_DIR),
    };
    match command {
        // n = 0 plus twenty modes per branch.
        Command::Project => c.n_modes = 21,
        Command::EvolveNonlinear => {
            c.n = 2048;
            c.dt = 1e-4;
            c.t_final = 1.0;
            c.kind = DataKind::Gaussian;
            c.record_every = 100;
        }
        Command::EpsStudy => {
            c.n = 2048;
            c.dt = 1e-4;
            c.t_final = 0.5;
            c.kind = DataKind::Gaussian;
            c.record_every = 1000;
        }
        _ => {}
    }
    c
}

/// Optional overrides, shared by the config file and the command line.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct ConfigPatch {
    #[arg(skip)]
    pub command: Option<Command>,
    /// Half-width L of the periodic box [-L, L).
    #[arg(long, short = 'L')]
    #[serde(alias = "L")]
    pub length: Option<f64>,
    /// Number of x grid points.
    #[arg(long, short = 'n')]
    pub n: Option<usize>,
    #[arg(long)]
    pub k_max: Option<f64>,
    /// Number of k grid points.
    #[arg(long)]
    pub n_k: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub dt: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t_final: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Soliton speed.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    /// Soliton position at t = 0.
    #[arg(long, allow_hyphen_values = true)]
    pub shift: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub eps: Option<f64>,
    /// Comma-separated, strictly decreasing.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub eps_list: Option<Vec<f64>>,
    /// Smoothness order of the regularization (1 or 2).
    #[arg(long, short = 'm')]
    pub m: Option<u8>,
    #[arg(long)]
    pub n_modes: Option<usize>,
    #[arg(long)]
    pub record_every: Option<usize>,
    #[arg(long, value_enum)]
    pub kind: Option<DataKind>,
    /// Two comma-separated bounds.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub fit_window: Option<Vec<f64>>,
    #[arg(long, short = 'o')]
    pub output_dir: Option<PathBuf>,
}

impl ConfigPatch {
    pub fn from_toml_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::Config {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })?;
        toml::from_str(&text).map_err(|e| LabError::Config {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })
    }

    fn apply(&self, c: &mut ExperimentConfig) -> Result<()> {
        macro_rules! take {
            ($($f:ident),*) => { $( if let Some(v) = &self.$f { c.$f = v.clone(); } )* };
        }
        take!(length, n, k_max, n_k, dt, t_final, alpha, c, shift, eps, eps_list, m, n_modes, record_every, kind, output_dir);
        if let Some(w) = &self.fit_window {
            c.fit_window = <[f64; 2]>::try_from(w.as_slice())
                .map_err(|_| LabError::usage("fit_window", format!("needs exactly two bounds, got {}", w.len())))?;
        }
        Ok(())
    }
}

/// Layers the defaults for the command, the output directory from the
/// environment, the config file and the command-line flags, in increasing
/// priority, then validates.
pub fn resolve(
    command: Option<Command>,
    file: Option<&ConfigPatch>,
    flags: &ConfigPatch,
    env_output_dir: Option<PathBuf>,
) -> Result<ExperimentConfig> {
    let file_command = file.and_then(|f| f.command);
    let command = match (command, file_command) {
        (Some(a), Some(b)) if a != b => {
            return Err(LabError::usage(
                "command",
                format!("config file names `{}` but `{}` was requested", b.name(), a.name()),
            ))
        }
        (Some(a), _) | (None, Some(a)) => a,
        (None, None) => return Err(LabError::usage("command", "no command given on the command line or in the config file")),
    };
    let mut config = defaults(command);
    if let Some(dir) = env_output_dir {
        config.output_dir = dir;
    }
    if let Some(f) = file {
        f.apply(&mut config)?;
    }
    flags.apply(&mut config)?;
    config.validate()?;
    Ok(config)
}

fn finite(field: &'static str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(LabError::usage(field, format!("must be finite, got {v}")))
    }
}

fn positive(field: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(LabError::usage(field, format!("must be positive and finite, got {v}")))
    }
}

impl ExperimentConfig {
    /// Checks every parameter against the preconditions of the operation it
    /// feeds. The error names the first offending field.
    pub fn validate(&self) -> Result<()> {
        let cmd = self.command;
        positive("length", self.length)?;
        if self.n < 16 {
            return Err(LabError::usage("n", format!("must be at least 16, got {}", self.n)));
        }
        if cmd.is_nonlinear() && !self.n.is_power_of_two() {
            return Err(LabError::usage("n", format!("nonlinear runs need a power of two, got {}", self.n)));
        }
        if !(self.k_max >= MIN_K_MAX && self.k_max.is_finite()) {
            return Err(LabError::usage("k_max", format!("must be finite and at least {MIN_K_MAX}, got {}", self.k_max)));
        }
        if self.n_modes == 0 || self.n_modes > MAX_MODES {
            return Err(LabError::usage("n_modes", format!("must lie in 1..={MAX_MODES}, got {}", self.n_modes)));
        }
        if self.n_k < 16 || self.n_k < 2 * self.n_modes {
            return Err(LabError::usage(
                "n_k",
                format!("must be at least max(16, 2 n_modes) = {}, got {}", (2 * self.n_modes).max(16), self.n_k),
            ));
        }
        positive("dt", self.dt)?;
        if !cmd.is_nonlinear() && self.dt > MAX_DT {
            return Err(LabError::usage("dt", format!("must not exceed {MAX_DT}, got {}", self.dt)));
        }
        positive("t_final", self.t_final)?;
        let steps = step_count(self.dt, self.t_final).map_err(|e| LabError::usage("t_final", e.to_string()))?;
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(LabError::usage("alpha", format!("must be finite and non-negative, got {}", self.alpha)));
        }
        finite("c", self.c)?;
        finite("shift", self.shift)?;
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(LabError::usage("eps", format!("must lie in (0, 1), got {}", self.eps)));
        }
        validate_eps_list(&self.eps_list).map_err(|e| LabError::usage("eps_list", e.to_string()))?;
        if let Some(bad) = self.eps_list.iter().find(|e| **e >= 1.0) {
            return Err(LabError::usage("eps_list", format!("entries must lie in (0, 1), got {bad}")));
        }
        if !matches!(self.m, 1 | 2) {
            return Err(LabError::usage("m", format!("must be 1 or 2, got {}", self.m)));
        }
        if self.record_every == 0 {
            return Err(LabError::usage("record_every", "must be at least 1"));
        }
        if matches!(cmd, Command::EvolveLinear | Command::EvolveNonlinear) && steps % (2 * self.record_every) != 0 {
            return Err(LabError::usage(
                "record_every",
                format!("the midpoint profile needs {steps} steps to be a multiple of 2 x {}", self.record_every),
            ));
        }
        if self.kind == DataKind::Soliton && !cmd.is_nonlinear() {
            return Err(LabError::usage("kind", format!("`soliton` only feeds nonlinear commands, not `{}`", cmd.name())));
        }
        let [lo, hi] = self.fit_window;
        if !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return Err(LabError::usage("fit_window", format!("needs 0 < lo < hi, got [{lo}, {hi}]")));
        }
        if self.output_dir.as_os_str().is_empty() {
            return Err(LabError::usage("output_dir", "must not be empty"));
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    #[test]
    fn every_default_validates() {
        for cmd in Command::ALL {
            defaults(cmd).validate().unwrap();
        }
    }

    #[test]
    fn flags_beat_file_beat_env() {
        let file = ConfigPatch {
            command: Some(Command::EvolveLinear),
            alpha: Some(0.25),
            output_dir: Some("from-file".into()),
            ..Default::default()
        };
        let flags = ConfigPatch {
            kind: Some(DataKind::Even),
            output_dir: Some("from-flag".into()),
            ..Default::default()
        };
        let c = resolve(None, Some(&file), &flags, Some("from-env".into())).unwrap();
        assert_eq!((c.alpha, c.kind), (0.25, DataKind::Even));
        assert_eq!(c.output_dir, PathBuf::from("from-flag"));
        let c = resolve(Some(Command::EvolveLinear), None, &ConfigPatch::default(), Some("from-env".into())).unwrap();
        assert_eq!(c.output_dir, PathBuf::from("from-env"));
    }

    #[test]
    fn conflicting_commands_are_rejected() {
        let file = ConfigPatch {
            command: Some(Command::Spectrum),
            ..Default::default()
        };
        let err = resolve(Some(Command::Modes), Some(&file), &ConfigPatch::default(), None).unwrap_err();
        assert!(matches!(err, LabError::Usage { field: "command", .. }));
    }

    #[test]
    fn toml_round_trip() {
        let c = defaults(Command::EpsStudy);
        let back: ExperimentConfig = toml::from_str(&c.to_toml()).unwrap();
        assert_eq!(back, c);
        let patch: ConfigPatch = toml::from_str("command = \"evolve-linear\"\nL = 30.0\nfit_window = [10.0, 50.0]").unwrap();
        assert_eq!(patch.length, Some(30.0));
        assert!(toml::from_str::<ConfigPatch>("bogus = 1").is_err());
    }

    #[test]
    fn midpoint_profile_needs_a_matching_cadence() {
        let mut c = defaults(Command::EvolveLinear);
        c.record_every = 3;
        assert!(matches!(c.validate(), Err(LabError::Usage { field: "record_every", .. })));
    }

    /// One field set to a value outside its precondition.
    #[derive(Debug, Clone)]
    enum Bad {
        Length(f64),
        N(usize),
        KMax(f64),
        NModes(usize),
        Dt(f64),
        TFinal(f64),
        Alpha(f64),
        Eps(f64),
        EpsList(Vec<f64>),
        M(u8),
        RecordEvery,
        FitWindow(f64, f64),
    }

    fn non_positive() -> impl Strategy<Value = f64> {
        prop_oneof![Just(0.0), Just(f64::NAN), Just(f64::INFINITY), Just(f64::NEG_INFINITY), -1e6..0.0f64]
    }

    fn bad() -> impl Strategy<Value = Bad> {
        prop_oneof![
            non_positive().prop_map(Bad::Length),
            (0usize..16).prop_map(Bad::N),
            prop_oneof![Just(f64::NAN), -10.0..7.99f64].prop_map(Bad::KMax),
            prop_oneof![Just(0usize), 65usize..1000].prop_map(Bad::NModes),
            prop_oneof![non_positive(), 0.011..10.0f64].prop_map(Bad::Dt),
            non_positive().prop_map(Bad::TFinal),
            prop_oneof![Just(f64::NAN), -100.0..-1e-9f64].prop_map(Bad::Alpha),
            prop_oneof![non_positive(), 1.0..1e3f64].prop_map(Bad::Eps),
            prop_oneof![
                Just(vec![]),
                (1e-6..0.9f64).prop_map(|e| vec![e, e]),
                (1e-6..0.4f64).prop_map(|e| vec![e, 2.0 * e]),
                (1e-6..0.9f64).prop_map(|e| vec![e, -e]),
            ]
            .prop_map(Bad::EpsList),
            prop_oneof![Just(0u8), 3u8..=255].prop_map(Bad::M),
            Just(Bad::RecordEvery),
            prop_oneof![(-10.0..0.0f64, 1.0..10.0f64), (5.0..10.0f64, 0.0..5.0f64)].prop_map(|(a, b)| Bad::FitWindow(a, b)),
        ]
    }

    fn patch(bad: &Bad) -> (ConfigPatch, &'static str) {
        let mut p = ConfigPatch::default();
        let field = match bad.clone() {
            Bad::Length(v) => {
                p.length = Some(v);
                "length"
            }
            Bad::N(v) => {
                p.n = Some(v);
                "n"
            }
            Bad::KMax(v) => {
                p.k_max = Some(v);
                "k_max"
            }
            Bad::NModes(v) => {
                p.n_modes = Some(v);
                "n_modes"
            }
            Bad::Dt(v) => {
                p.dt = Some(v);
                "dt"
            }
            Bad::TFinal(v) => {
                p.t_final = Some(v);
                "t_final"
            }
            Bad::Alpha(v) => {
                p.alpha = Some(v);
                "alpha"
            }
            Bad::Eps(v) => {
                p.eps = Some(v);
                "eps"
            }
            Bad::EpsList(v) => {
                p.eps_list = Some(v);
                "eps_list"
            }
            Bad::M(v) => {
                p.m = Some(v);
                "m"
            }
            Bad::RecordEvery => {
                p.record_every = Some(0);
                "record_every"
            }
            Bad::FitWindow(a, b) => {
                p.fit_window = Some(vec![a, b]);
                "fit_window"
            }
        };
        (p, field)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn invalid_values_are_rejected_by_field(bad in bad()) {
            let (p, field) = patch(&bad);
            // dt above the implicit-scheme bound is legal for nonlinear runs.
            let command = if field == "dt" { Command::EvolveLinear } else { Command::EpsStudy };
            match resolve(Some(command), None, &p, None) {
                Err(LabError::Usage { field: got, .. }) => prop_assert_eq!(got, field),
                other => prop_assert!(false, "expected a usage error for {}, got {:?}", field, other),
            }
        }

        #[test]
        fn valid_configs_round_trip_through_toml(
            cmd in proptest::sample::select(Command::ALL.to_vec()),
            alpha in 0.0..5.0f64,
            c in -1.0..1.0f64,
            eps in 1e-6..0.5f64,
        ) {
            let config = ExperimentConfig { alpha, c, eps, ..defaults(cmd) };
            prop_assert!(config.validate().is_ok());
            let back: ExperimentConfig = toml::from_str(&config.to_toml()).unwrap();
            prop_assert_eq!(back, config);
        }
    }
}
