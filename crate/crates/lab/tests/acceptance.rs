//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::path::{Path, PathBuf};
use std::process::Command as Process;
use std::time::Instant;

use logkdv_core::linevolve::{evolve_linear, make_initial_data, diagnostics, InitialKind, LinearStepper};
use logkdv_core::modal::{ec_modal, project, reconstruct, ModeBasis};
use logkdv_core::nonlin::{evolve_nonlinear, functionals, peak_position, soliton, w_log, RegularizedNonlinearity, Smoothness};
use logkdv_core::numgrid::{build_schrodinger_l, fourier_quadrature, Branch, Grid, RealField};
use logkdv_core::spectrum::{fit_decay_exponent, gram_matrix, mode_to_physical, sign_changes, solve_half_line, Part};
use logkdv_core::{gaussian_wave, gaussian_wave_dx, Complex64};
use logkdv_lab::{run_figures, Figure};

const K_MAX: f64 = 12.0;
const N_K: usize = 4000;
const REFERENCE_E1: f64 = 5.4109;
const REFERENCE_E2: f64 = 12.3080;
const EIGEN_REL: f64 = 1e-2;
const E0_ABS: f64 = 1e-4;
const SPECTRUM_SECONDS: f64 = 30.0;
const ZERO_MODE_L2: f64 = 1e-3;
const GLUED_REL: f64 = 1e-6;
const GRAM_DEFECT: f64 = 1e-6;
const REAL_DECAY: (f64, f64) = (1.7, 2.3);
const IMAG_DECAY: (f64, f64) = (2.6, 3.4);
const FIT_WINDOW: (f64, f64) = (20.0, 60.0);
const STEP_EC_DRIFT: f64 = 1e-10;
const REVERSIBILITY: f64 = 1e-9;
const KERNEL_DRIFT: f64 = 1e-2;
const SECULAR: f64 = 1e-2;
const SIGMA_MAX: f64 = 15.0;
const FAR_FIELD: f64 = 1e-4;
const CROSS_ORACLE: f64 = 5e-2;
const EC_MODAL: f64 = 5e-2;
const P_DRIFT: f64 = 1e-4;
const E_DRIFT: f64 = 1e-3;
const HALVING_RATIO: f64 = 4.0;
const SOLITON_SHAPE: f64 = 2e-2;
const SOLITON_PEAK: f64 = 5e-2;
const ENERGY_GAP: f64 = 1e-4;

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn rel_l2(a: &[f64], b: &[f64]) -> f64 {
    let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
    (d / b.iter().map(|y| y * y).sum::<f64>()).sqrt()
}

fn x_line() -> Grid {
    Grid::periodic(40.0, 4096).unwrap()
}

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("logkdv-acceptance-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

fn eigenvalues() -> Outcome {
    let start = Instant::now();
    let modes = solve_half_line(K_MAX, N_K, 3, Branch::Plus).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let e: Vec<f64> = modes.iter().map(|m| m.eigenvalue).collect();
    let r1 = (e[1] / REFERENCE_E1 - 1.0).abs();
    let r2 = (e[2] / REFERENCE_E2 - 1.0).abs();
    let ok = e[0].abs() < E0_ABS && r1 < EIGEN_REL && r2 < EIGEN_REL && secs < SPECTRUM_SECONDS;
    (ok, format!("E0 = {:.2e}, E1 = {:.5} ({r1:.1e} off), E2 = {:.5} ({r2:.1e} off), {secs:.2} s", e[0], e[1], e[2]))
}

fn exact_zero_mode() -> Outcome {
    let mode = &solve_half_line(K_MAX, N_K, 1, Branch::Plus).unwrap()[0];
    let g = *mode.vhat.grid();
    let exact: Vec<f64> = (0..g.len()).map(|j| g.point(j).sqrt() * (-g.point(j).powi(2)).exp()).collect();
    let norm = (g.spacing() * exact.iter().map(|v| v * v).sum::<f64>()).sqrt();
    let exact: Vec<f64> = exact.iter().map(|v| v / norm).collect();
    let mode_err = rel_l2(mode.vhat.values(), &exact);

    let samples = RealField::from_fn(g, 0.0, |k| k * (-k * k).exp()).unwrap();
    let x: Vec<f64> = (0..=800).map(|j| -10.0 + 0.025 * j as f64).collect();
    let plus = fourier_quadrature(&samples, Branch::Plus, &x).unwrap();
    let minus = fourier_quadrature(&samples, Branch::Minus, &x).unwrap();
    let c = 1.0 / (2.0 * 2f64.sqrt());
    let want: Vec<Complex64> = x.iter().map(|&x| Complex64::new(0.0, c * x * (-x * x / 4.0).exp())).collect();
    let peak = want.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
    let glued_err = plus
        .iter()
        .zip(&minus)
        .zip(&want)
        .map(|((p, q), w)| (p - q - w).norm())
        .fold(0.0, f64::max)
        / peak;
    (
        mode_err < ZERO_MODE_L2 && glued_err < GLUED_REL,
        format!("mode L2 error {mode_err:.2e}, glued transform sup error {glued_err:.2e}"),
    )
}

fn nodal_and_gram() -> Outcome {
    let modes = solve_half_line(K_MAX, N_K, 10, Branch::Plus).unwrap();
    let zeros: Vec<usize> = modes.iter().map(|m| sign_changes(m.uhat.values())).collect();
    let g = gram_matrix(&modes);
    let mut defect = 0.0_f64;
    for (i, row) in g.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            defect = defect.max((v - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    let ok = zeros.iter().enumerate().all(|(n, &z)| z == n) && defect < GRAM_DEFECT;
    (ok, format!("zeros {zeros:?}, Gram defect {defect:.2e}"))
}

fn decay_exponents() -> Outcome {
    let x: Vec<f64> = (0..=480).map(|j| 0.125 * j as f64).collect();
    let mut ok = true;
    let mut detail = Vec::new();
    for mut m in solve_half_line(K_MAX, N_K, 3, Branch::Plus).unwrap().into_iter().skip(1) {
        let u = mode_to_physical(&mut m, &x).unwrap().to_vec();
        let re = fit_decay_exponent(&x, &u, FIT_WINDOW, Part::Real).unwrap().exponent;
        let im = fit_decay_exponent(&x, &u, FIT_WINDOW, Part::Imag).unwrap().exponent;
        ok &= (REAL_DECAY.0..=REAL_DECAY.1).contains(&re) && (IMAG_DECAY.0..=IMAG_DECAY.1).contains(&im);
        detail.push(format!("mode {}: re {re:.3}, im {im:.3}", m.index));
    }
    (ok, detail.join("; "))
}

fn energy_conservation() -> Outcome {
    let g = x_line();
    let stepper = LinearStepper::new(&g, 1e-3).unwrap();
    let mut u = make_initial_data(InitialKind::Odd, 0.1, &g).unwrap().into_values();
    let mut e = stepper.energy(&u);
    let mut drift = 0.0_f64;
    for _ in 0..5000 {
        stepper.step(&mut u);
        let next = stepper.energy(&u);
        drift = drift.max((next - e).abs() / e.abs());
        e = next;
    }
    let u0 = make_initial_data(InitialKind::Odd, 0.1, &g).unwrap().into_values();
    let back = LinearStepper::new(&g, -1e-3).unwrap();
    let mut w = u0.clone();
    for _ in 0..100 {
        stepper.step(&mut w);
    }
    for _ in 0..100 {
        back.step(&mut w);
    }
    let rev = rel_l2(&w, &u0);
    (
        drift < STEP_EC_DRIFT && rev < REVERSIBILITY,
        format!("max per-step Ec drift {drift:.2e}, reversibility {rev:.2e}"),
    )
}

fn jordan_block() -> Outcome {
    let g = x_line();
    let kernel = RealField::from_fn(g, 0.0, gaussian_wave_dx).unwrap();
    let tr = evolve_linear(&kernel, 1e-3, 5.0, 100).unwrap();
    let stationary = tr.snapshots.iter().map(|s| rel_l2(s.values(), kernel.values())).fold(0.0, f64::max);
    let vg = RealField::from_fn(g, 0.0, gaussian_wave).unwrap();
    let tr = evolve_linear(&vg, 1e-3, 1.0, 1000).unwrap();
    let want: Vec<f64> = g.points().iter().map(|&x| gaussian_wave(x) - gaussian_wave_dx(x)).collect();
    let u1 = tr.snapshots.last().unwrap().values();
    let d: f64 = u1.iter().zip(&want).map(|(a, b)| (a - b).powi(2)).sum();
    let secular = (d / vg.values().iter().map(|v| v * v).sum::<f64>()).sqrt();
    (
        stationary < KERNEL_DRIFT && secular < SECULAR,
        format!("kernel drift {stationary:.2e}, secular error {secular:.2e}"),
    )
}

fn summary(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap()
}

fn figure_dynamics() -> Outcome {
    let root = scratch("dynamics");
    let bundles = run_figures(&[Figure::Fig2, Figure::Fig3], &root).unwrap();
    let mut ok = true;
    let mut detail = Vec::new();
    for (dir, _) in &bundles {
        let s = summary(dir);
        let extrema = s["sigma_extrema"].as_u64().unwrap();
        let sigma = s["sigma_max"].as_f64().unwrap();
        let far = s["far_field_max"].as_f64().unwrap();
        ok &= extrema >= 2 && sigma < SIGMA_MAX && far < FAR_FIELD;
        detail.push(format!(
            "{}: {extrema} extrema, max sigma {sigma:.3}, max |u| on |x| >= 35 {far:.2e}",
            dir.file_name().unwrap().to_string_lossy()
        ));
    }
    let _ = std::fs::remove_dir_all(&root);
    (ok, detail.join("; "))
}

fn cross_oracle() -> Outcome {
    let g = x_line();
    let u0 = make_initial_data(InitialKind::Odd, 0.1, &g).unwrap();
    let mut basis = ModeBasis::from_plus(solve_half_line(K_MAX, N_K, 21, Branch::Plus).unwrap()).unwrap();
    let x = g.points();
    basis.attach_physical(&x).unwrap();
    let c = project(&u0, &basis).unwrap();
    let tr = evolve_linear(&u0, 1e-3, 5.0, 5000).unwrap();
    let modal = reconstruct(&c, &basis, 5.0, &x).unwrap();
    let err = rel_l2(&modal, tr.snapshots.last().unwrap().values());
    let ec = diagnostics(&u0, &build_schrodinger_l(&g).unwrap()).ec;
    let em = ec_modal(&c, &basis.omegas()).unwrap();
    let ec_err = (em / ec - 1.0).abs();
    (
        err < CROSS_ORACLE && ec_err < EC_MODAL,
        format!("t = 5 reconstruction error {err:.3e}, ec_modal {em:.5} vs Ec {ec:.5} ({ec_err:.1e})"),
    )
}

fn nonlinear_conservation() -> Outcome {
    let g = Grid::periodic(40.0, 2048).unwrap();
    let reg = RegularizedNonlinearity::new(1e-3, Smoothness::C2).unwrap();
    let vg = RealField::from_fn(g, 0.0, gaussian_wave).unwrap();
    let tr = evolve_nonlinear(&vg, &reg, 1e-4, 1.0, 100).unwrap();
    let humps = RealField::from_fn(g, 0.0, |x| gaussian_wave(x + 2.0) + 0.5 * gaussian_wave(x - 3.0)).unwrap();
    let coarse = evolve_nonlinear(&humps, &reg, 1e-4, 1.0, 100).unwrap().p_drift;
    let fine = evolve_nonlinear(&humps, &reg, 5e-5, 1.0, 200).unwrap().p_drift;
    let ratio = coarse / fine;
    (
        tr.p_drift < P_DRIFT && tr.e_drift < E_DRIFT && ratio >= HALVING_RATIO,
        format!(
            "P drift {:.2e}, E drift {:.2e}; halving dt: {coarse:.2e} -> {fine:.2e}, ratio {ratio:.3} (order {:.3})",
            tr.p_drift,
            tr.e_drift,
            ratio.log2()
        ),
    )
}

fn soliton_kinematics() -> Outcome {
    let g = Grid::periodic(40.0, 2048).unwrap();
    let reg = RegularizedNonlinearity::new(1e-3, Smoothness::C2).unwrap();
    let (still, _) = soliton(0.0, 0.0, &g, 1.0).unwrap();
    let tr = evolve_nonlinear(&still, &reg, 1e-4, 1.0, 100).unwrap();
    let drift = tr.snapshots.iter().map(|s| rel_l2(s.values(), still.values())).fold(0.0, f64::max);
    let (moving, _) = soliton(0.25, 0.0, &g, 1.0).unwrap();
    let tr = evolve_nonlinear(&moving, &reg, 1e-4, 1.0, 10_000).unwrap();
    let end = tr.snapshots.last().unwrap();
    let peak = peak_position(end);
    let want: Vec<f64> = g.points().iter().map(|&x| 0.25f64.exp() * gaussian_wave(x - 0.25)).collect();
    let shape = rel_l2(end.values(), &want);
    (
        drift < SOLITON_SHAPE && (peak - 0.25).abs() < SOLITON_PEAK && shape < SOLITON_SHAPE,
        format!("c = 0 drift {drift:.2e}; c = 0.25 peak at {peak:.4}, shape error {shape:.2e}"),
    )
}

/// Composite Simpson rule on `[a, b]`.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n).map(|j| f(a + j as f64 * h) * if j % 2 == 1 { 4.0 } else { 2.0 }).sum();
    (f(a) + inner + f(b)) * h / 3.0
}

fn regularization() -> Outcome {
    let mut matching = 0.0_f64;
    for m in [Smoothness::C1, Smoothness::C2] {
        for eps in [1e-1, 1e-2, 1e-3] {
            let reg = RegularizedNonlinearity::new(eps, m).unwrap();
            let want = eps * eps.ln();
            matching = matching.max((reg.polynomial(eps) - want).abs() / want.abs());
        }
    }
    // W_ε(v) = ∫₀^v f_ε, integrated numerically across the branch point.
    let mut offset = 0.0_f64;
    for eps in [1e-1, 1e-2] {
        let reg = RegularizedNonlinearity::new(eps, Smoothness::C2).unwrap();
        for v in [0.5, 2.0] {
            let w = simpson(|s| reg.f(s), 0.0, eps, 2000) + simpson(|s| reg.f(s), eps, v, 20_000);
            offset = offset.max(((w - w_log(v)) / (eps * eps / 12.0) - 1.0).abs());
        }
    }
    let vg = RealField::from_fn(Grid::periodic(40.0, 2048).unwrap(), 0.0, gaussian_wave).unwrap();
    let gaps: Vec<f64> = [1e-1, 1e-2, 1e-3]
        .iter()
        .map(|&eps| {
            let reg = RegularizedNonlinearity::new(eps, Smoothness::C2).unwrap();
            let rec = functionals(&vg, Some(&reg)).unwrap();
            (rec.e_eps.unwrap() - rec.e_log).abs()
        })
        .collect();
    let ok = matching < 1e-14 && offset < 1e-6 && gaps.windows(2).all(|w| w[1] < w[0]) && gaps[2] < ENERGY_GAP;
    (
        ok,
        format!("p_eps(eps) mismatch {matching:.1e}, (W_eps - W)/(eps^2/12) - 1 = {offset:.1e}, energy gaps {}", gaps.iter().map(|g| format!("{g:.2e}")).collect::<Vec<_>>().join(" > ")),
    )
}

fn data_files(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut files = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else if path.file_name().unwrap() != "manifest.json" {
                let bytes = std::fs::read(&path).unwrap();
                files.push((path.strip_prefix(dir).unwrap().to_path_buf(), bytes));
            }
        }
    }
    files.sort();
    files
}

fn determinism() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_logkdv-lab");
    let (a, b) = (scratch("det-a"), scratch("det-b"));
    for dir in [&a, &b] {
        let status = Process::new(exe).args(["figure", "all", "-o"]).arg(dir).output().unwrap();
        if !status.status.success() {
            return (false, format!("figure run failed: {}", String::from_utf8_lossy(&status.stderr)));
        }
    }
    let (fa, fb) = (data_files(&a), data_files(&b));
    let identical = fa == fb;
    let count = fa.len();
    let _ = std::fs::remove_dir_all(&a);
    let _ = std::fs::remove_dir_all(&b);
    (identical && count > 0, format!("{count} data files across fig1-fig3, byte-identical: {identical}"))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("eigenvalue regression", eigenvalues),
        ("exact zero mode", exact_zero_mode),
        ("nodal counts and orthonormality", nodal_and_gram),
        ("decay exponents", decay_exponents),
        ("discrete Ec conservation", energy_conservation),
        ("Jordan-block dynamics", jordan_block),
        ("figure 2/3 dynamics", figure_dynamics),
        ("spectral vs time-stepper", cross_oracle),
        ("nonlinear conservation", nonlinear_conservation),
        ("soliton kinematics", soliton_kinematics),
        ("regularization identities", regularization),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (ok, detail) = check();
        failed += usize::from(!ok);
        println!("{} criterion {:>2} {name}: {detail}", if ok { "PASS" } else { "FAIL" }, i + 1);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
