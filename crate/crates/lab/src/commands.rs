//! One runner per command. Each writes into an [`OutputSet`] and returns the
//! warnings it raised.

use logkdv_core::linevolve::{evolve_linear, make_initial_data};
use logkdv_core::modal::{ec_modal, project, ModeBasis};
use logkdv_core::nonlin::{evolve_nonlinear, soliton, EpsReport, EpsRun, RegularizedNonlinearity, Smoothness, Warning};
use logkdv_core::numgrid::{build_schrodinger_l, Branch, Grid, RealField};
use logkdv_core::spectrum::{fit_decay_exponent, mode_to_physical, reflect, sign_changes, solve_half_line, EigenMode, Part};
use logkdv_core::{linevolve, Complex64};
use serde::Serialize;

use crate::config::{Command, ExperimentConfig};
use crate::error::{Context, Result};
use crate::output::{Maybe, OutputSet};

/// Fields above this level near the box edge trigger a warning.
pub const BOUNDARY_LEVEL: f64 = 1e-8;
/// Width of the edge band, as a fraction of `L`.
pub const BOUNDARY_BAND: f64 = 0.05;
/// The far field starts at `|x| = (1 - FAR_FIELD_BAND) L`.
pub const FAR_FIELD_BAND: f64 = 0.125;
/// Sample spacing in x for decay fits.
pub const DECAY_SPACING: f64 = 0.125;

/// Runs `config` into its output directory and writes the manifest.
pub fn run(config: &ExperimentConfig) -> Result<Vec<String>> {
    config.validate()?;
    let mut out = OutputSet::create(&config.output_dir)?;
    let warnings = run_into(config, &mut out)?;
    out.finish(config)?;
    Ok(warnings)
}

/// Runs `config` into an existing output set without finishing it.
pub fn run_into(config: &ExperimentConfig, out: &mut OutputSet) -> Result<Vec<String>> {
    match config.command {
        Command::Spectrum => spectrum(config, out),
        Command::Modes => modes(config, out),
        Command::DecayFit => decay_fit(config, out),
        Command::EvolveLinear => linear(config, out),
        Command::EvolveNonlinear => nonlinear(config, out),
        Command::Project => projection(config, out),
        Command::EpsStudy => eps_study(config, out),
    }
}

fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::Plus => "plus",
        Branch::Minus => "minus",
    }
}

fn x_grid(config: &ExperimentConfig) -> Result<Grid> {
    Grid::periodic(config.length, config.n).context("numgrid")
}

pub(crate) fn plus_modes(config: &ExperimentConfig) -> Result<Vec<EigenMode>> {
    solve_half_line(config.k_max, config.n_k, config.n_modes, Branch::Plus).context("spectrum")
}

#[derive(Serialize)]
struct EigenSummary {
    branch: &'static str,
    n: usize,
    #[serde(rename = "E")]
    e: f64,
    omega: f64,
    zeros: usize,
}

#[derive(Serialize)]
struct SpectrumDoc {
    k_max: f64,
    n_k: usize,
    modes: Vec<EigenSummary>,
}

fn spectrum(config: &ExperimentConfig, out: &mut OutputSet) -> Result<Vec<String>> {
    let plus = plus_modes(config)?;
    let modes = plus
        .iter()
        .flat_map(|m| [m.clone(), reflect(m)])
        .map(|m| EigenSummary {
            branch: branch_name(m.branch),
            n: m.index,
            e: m.eigenvalue,
            omega: m.omega,
            zeros: sign_changes(m.uhat.values()),
        })
        .collect();
    out.json(
        "spectrum.json",
        &SpectrumDoc {
            k_max: config.k_max,
            n_k: config.n_k,
            modes,
        },
    )?;
    Ok(Vec::new())
}

#[derive(Serialize)]
struct ModeDoc {
    branch: &'static str,
    n: usize,
    #[serde(rename = "E")]
    e: f64,
    omega: f64,
    k: Vec<f64>,
    uhat: Vec<f64>,
    x: Vec<f64>,
    u_re: Vec<f64>,
    u_im: Vec<f64>,
}

fn modes(config: &ExperimentConfig, out: &mut OutputSet) -> Result<Vec<String>> {
    let x = x_grid(config)?.points();
    let mut docs = Vec::new();
    for mut m in plus_modes(config)? {
        mode_to_physical(&mut m, &x).context("spectrum")?;
        let minus = reflect(&m);
        for mode in [m, minus] {
            let sign = mode.branch.sign();
            let grid = mode.uhat.grid();
            let u = &mode.physical.as_ref().expect("attached above").u;
            docs.push(ModeDoc {
                branch: branch_name(mode.branch),
                n: mode.index,
                e: mode.eigenvalue,
                omega: mode.omega,
                k: (0..grid.len()).map(|j| sign * grid.point(j)).collect(),
                uhat: mode.uhat.values().to_vec(),
                x: x.clone(),
                u_re: u.iter().map(|z| z.re).collect(),
                u_im: u.iter().map(|z| z.im).collect(),
            });
        }
    }
    out.json("modes.json", &docs)?;
    Ok(Vec::new())
}

#[derive(Serialize)]
#[serde(untagged)]
enum FitOutcome {
    Fit { exponent: f64, super_algebraic: bool },
    Failed { error: String },
}

#[derive(Serialize)]
struct DecayDoc {
    window: [f64; 2],
    modes: Vec<DecayEntry>,
}

#[derive(Serialize)]
struct DecayEntry {
    n: usize,
    #[serde(rename = "E")]
    e: f64,
    real: FitOutcome,
    imag: FitOutcome,
}

fn decay_fit(config: &ExperimentConfig, out: &mut OutputSet) -> Result<Vec<String>> {
    let [lo, hi] = config.fit_window;
    let count = (hi / DECAY_SPACING).floor() as usize + 1;
    let x: Vec<f64> = (0..count).map(|j| j as f64 * DECAY_SPACING).collect();
    let mut entries = Vec::new();
    for mut m in plus_modes(config)? {
        let u: Vec<Complex64> = mode_to_physical(&mut m, &x).context("spectrum")?.to_vec();
        let fit = |part| match fit_decay_exponent(&x, &u, (lo, hi), part) {
            Ok(f) => FitOutcome::Fit {
                exponent: f.exponent,
                super_algebraic: f.super_algebraic,
            },
            Err(e) => FitOutcome::Failed { error: e.to_string() },
        };
        entries.push(DecayEntry {
            n: m.index,
            e: m.eigenvalue,
            real: fit(Part::Real),
            imag: fit(Part::Imag),
        });
    }
    out.json(
        "decay.json",
        &DecayDoc {
            window: config.fit_window,
            modes: entries,
        },
    )?;
    Ok(Vec::new())
}

fn initial_data(config: &ExperimentConfig, grid: &Grid, warnings: &mut Vec<String>) -> Result<RealField> {
    match config.kind.linear() {
        Some(kind) => make_initial_data(kind, config.alpha, grid).context("linevolve"),
        None => {
            let (v, w) = soliton(config.c, config.shift, grid, config.t_final).context("nonlin")?;
            warnings.extend(w.map(describe));
            Ok(v)
        }
    }
}

fn describe(w: Warning) -> String {
    match w {
        Warning::Cfl { step, number } => format!("CFL number {number:.3} exceeds 1 at step {step}"),
        Warning::NearBoundary { reach, limit } => {
            format!("soliton reaches |x| = {reach} within the horizon, beyond L/2 = {limit}")
        }
    }
}

/// Largest `|u|` over `|x| ≥ (1 - band) L`.
pub fn edge_max(u: &RealField, band: f64) -> f64 {
    let g = u.grid();
    let edge = (1.0 - band) * g.extent();
    u.values()
        .iter()
        .enumerate()
        .filter(|(j, _)| g.point(*j).abs() >= edge)
        .fold(0.0, |m, (_, v)| m.max(v.abs()))
}

/// Number of interior local extrema of a series.
pub fn local_extrema(series: &[f64]) -> usize {
    series
        .windows(3)
        .filter(|w| (w[1] - w[0]) * (w[2] - w[1]) < 0.0)
        .count()
}

#[derive(Serialize)]
struct ProfileRow {
    t: f64,
    x: f64,
    u: f64,
}

/// Profiles at `t = 0, t_f/2, t_f`, named by their nominal times.
fn write_profiles(out: &mut OutputSet, snapshots: &[RealField], config: &ExperimentConfig, steps: usize) -> Result<()> {
    let half = steps / 2 / config.record_every;
    let picks = [(0.0, &snapshots[0]), (0.5, &snapshots[half]), (1.0, snapshots.last().expect("non-empty"))];
    for (fraction, s) in picks {
        let g = s.grid();
        let rows = s.values().iter().enumerate().map(|(j, &u)| ProfileRow {
            t: s.time(),
            x: g.point(j),
            u,
        });
        out.csv(&format!("profile_t{}.csv", fraction * config.t_final), rows)?;
    }
    Ok(())
}

fn boundary_check(snapshots: &[RealField], warnings: &mut Vec<String>) -> f64 {
    let mut worst = 0.0_f64;
    let mut warned = false;
    for s in snapshots {
        let m = edge_max(s, BOUNDARY_BAND);
        worst = worst.max(m);
        if m > BOUNDARY_LEVEL && !warned {
            warned = true;
            warnings.push(format!(
                "field reaches {m:.3e} within {}% of the box edge at t = {}",
                BOUNDARY_BAND * 100.0,
                s.time()
            ));
        }
    }
    worst
}

#[derive(Serialize)]
struct DiagnosticsRow {
    t: f64,
    l2: f64,
    ec: f64,
    xbar: Maybe,
    sigma: Maybe,
}

#[derive(Serialize)]
struct LinearSummary {
    steps: usize,
    max_step_energy_drift: f64,
    sigma_max: Option<f64>,
    sigma_extrema: usize,
    boundary_max: f64,
    far_field_max: f64,
    warnings: Vec<String>,
}

fn linear(config: &ExperimentConfig, out: &mut OutputSet) -> Result<Vec<String>> {
    let grid = x_grid(config)?;
    let mut warnings = Vec::new();
    let u0 = initial_data(config, &grid, &mut warnings)?;
    let steps = linevolve::step_count(config.dt, config.t_final).context("linevolve")?;
    let tr = evolve_linear(&u0, config.dt, config.t_final, config.record_every).context("linevolve")?;
    out.csv(
        "diagnostics.csv",
        tr.diagnostics.iter().map(|d| DiagnosticsRow {
            t: d.t,
            l2: d.l2,
            ec: d.ec,
            xbar: Maybe(d.xbar),
            sigma: Maybe(d.sigma),
        }),
    )?;
    write_profiles(out, &tr.snapshots, config, steps)?;
    let sigma: Vec<f64> = tr.diagnostics.iter().filter_map(|d| d.sigma).collect();
    let boundary_max = boundary_check(&tr.snapshots, &mut warnings);
    let far_field_max = tr.snapshots.iter().map(|s| edge_max(s, FAR_FIELD_BAND)).fold(0.0, f64::max);
    out.json(
        "summary.json",
        &LinearSummary {
            steps,
            max_step_energy_drift: tr.max_step_energy_drift,
            sigma_max: sigma.iter().copied().reduce(f64::max),
            sigma_extrema: local_extrema(&sigma),
            boundary_max,
            far_field_max,
            warnings: warnings.clone(),
        },
    )?;
    Ok(warnings)
}

#[derive(Serialize)]
struct FunctionalsRow {
    t: f64,
    #[serde(rename = "P")]
    p: f64,
    #[serde(rename = "E_eps")]
    e_eps: Maybe,
    #[serde(rename = "E_log")]
    e_log: f64,
    h1: f64,
}

#[derive(Serialize)]
struct NonlinearSummary {
    steps: usize,
    p_drift: f64,
    e_drift: f64,
    h1_max: f64,
    boundary_max: f64,
    warnings: Vec<String>,
}

fn regularization(config: &ExperimentConfig, eps: f64) -> Result<RegularizedNonlinearity> {
    let m = Smoothness::from_order(config.m).context("nonlin")?;
    RegularizedNonlinearity::new(eps, m).context("nonlin")
}

fn nonlinear(config: &ExperimentConfig, out: &mut OutputSet) -> Result<Vec<String>> {
    let grid = x_grid(config)?;
    let mut warnings = Vec::new();
    let v0 = initial_data(config, &grid, &mut warnings)?;
    let reg = regularization(config, config.eps)?;
    let steps = linevolve::step_count(config.dt, config.t_final).context("nonlin")?;
    let tr = evolve_nonlinear(&v0, &reg, config.dt, config.t_final, config.record_every).context("nonlin")?;
    warnings.extend(tr.warnings.iter().copied().map(describe));
    out.csv(
        "functionals.csv",
        tr.functionals.iter().map(|f| FunctionalsRow {
            t: f.t,
            p: f.p,
            e_eps: Maybe(f.e_eps),
            e_log: f.e_log,
            h1: f.h1,
        }),
    )?;
    write_profiles(out, &tr.snapshots, config, steps)?;
    let boundary_max = boundary_check(&tr.snapshots, &mut warnings);
    out.json(
        "summary.json",
        &NonlinearSummary {
            steps,
            p_drift: tr.p_drift,
            e_drift: tr.e_drift,
            h1_max: tr.functionals.iter().map(|f| f.h1).fold(0.0, f64::max),
            boundary_max,
            warnings: warnings.clone(),
        },
    )?;
    Ok(warnings)
}

#[derive(Serialize)]
struct CoefficientDoc {
    b: f64,
    a0: f64,
    modes: Vec<CoefficientEntry>,
}

#[derive(Serialize)]
struct CoefficientEntry {
    n: usize,
    re_plus: f64,
    im_plus: f64,
    re_minus: f64,
    im_minus: f64,
    omega: f64,
}

#[derive(Serialize)]
struct ProjectionSummary {
    data_norm: f64,
    conjugacy_defect: f64,
    ec_quadrature: f64,
    ec_modal: Option<f64>,
    ec_modal_error: Option<String>,
}

fn projection(config: &ExperimentConfig, out: &mut OutputSet) -> Result<Vec<String>> {
    let grid = x_grid(config)?;
    let mut warnings = Vec::new();
    let u0 = initial_data(config, &grid, &mut warnings)?;
    let basis = ModeBasis::from_plus(plus_modes(config)?).context("modal")?;
    let c = project(&u0, &basis).context("modal")?;
    let modes = basis
        .plus()
        .iter()
        .zip(c.a_plus.iter().zip(&c.a_minus))
        .map(|(m, (p, q))| CoefficientEntry {
            n: m.index,
            re_plus: p.re,
            im_plus: p.im,
            re_minus: q.re,
            im_minus: q.im,
            omega: m.omega,
        })
        .collect();
    out.json("coefficients.json", &CoefficientDoc { b: c.b, a0: c.a0, modes })?;
    let l_d = build_schrodinger_l(&grid).context("numgrid")?;
    let modal = ec_modal(&c, &basis.omegas());
    out.json(
        "summary.json",
        &ProjectionSummary {
            data_norm: c.data_norm,
            conjugacy_defect: c.conjugacy_defect(),
            ec_quadrature: linevolve::diagnostics(&u0, &l_d).ec,
            ec_modal: modal.as_ref().ok().copied(),
            ec_modal_error: modal.err().map(|e| e.to_string()),
        },
    )?;
    Ok(warnings)
}

#[derive(Serialize)]
#[serde(untagged)]
enum EpsOutcome {
    Ok { eps: f64, p_drift: f64, e_drift: f64 },
    Failed { eps: f64, error: String },
}

#[derive(Serialize)]
struct EpsDoc {
    eps: Vec<f64>,
    runs: Vec<EpsOutcome>,
    distances: Vec<Vec<Option<f64>>>,
    successive: Vec<Option<f64>>,
}

fn eps_study(config: &ExperimentConfig, out: &mut OutputSet) -> Result<Vec<String>> {
    let grid = x_grid(config)?;
    let mut warnings = Vec::new();
    let v0 = initial_data(config, &grid, &mut warnings)?;
    let m = Smoothness::from_order(config.m).context("nonlin")?;
    let runs: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = config
            .eps_list
            .iter()
            .map(|&eps| {
                let v0 = &v0;
                s.spawn(move || EpsRun::execute(v0, eps, m, config.dt, config.t_final, config.record_every))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("eps run panicked")).collect()
    });
    let report = EpsReport::from_runs(config.eps_list.clone(), runs);
    let doc = EpsDoc {
        eps: report.eps.clone(),
        runs: report
            .runs
            .iter()
            .zip(&report.eps)
            .map(|(r, &eps)| match r {
                Ok(run) => EpsOutcome::Ok {
                    eps,
                    p_drift: run.p_drift,
                    e_drift: run.e_drift,
                },
                Err(e) => EpsOutcome::Failed { eps, error: e.to_string() },
            })
            .collect(),
        distances: report.distances.clone(),
        successive: report.successive(),
    };
    out.json("eps_study.json", &doc)?;
    let finished: Vec<&EpsRun> = report.runs.iter().filter_map(|r| r.as_ref().ok()).collect();
    let header: Vec<String> = core::iter::once("x".to_string())
        .chain(finished.iter().map(|r| format!("eps={}", r.eps)))
        .collect();
    let rows: Vec<Vec<f64>> = (0..grid.len())
        .map(|j| {
            core::iter::once(grid.point(j))
                .chain(finished.iter().map(|r| r.final_state.values()[j]))
                .collect()
        })
        .collect();
    out.csv_table("final_states.csv", &header, &rows)?;
    for (r, eps) in report.runs.iter().zip(&report.eps) {
        if let Err(e) = r {
            warnings.push(format!("eps = {eps}: {e}"));
        }
    }
    Ok(warnings)
}
