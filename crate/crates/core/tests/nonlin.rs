use logkdv_core::nonlin::*;
use logkdv_core::numgrid::*;
use logkdv_core::{gaussian_wave, Error};

fn grid() -> Grid {
    Grid::periodic(40.0, 2048).unwrap()
}

fn rel_l2(a: &[f64], b: &[f64]) -> f64 {
    let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
    (d / b.iter().map(|y| y * y).sum::<f64>()).sqrt()
}

fn reg() -> RegularizedNonlinearity {
    RegularizedNonlinearity::new(1e-3, Smoothness::C2).unwrap()
}

#[test]
fn gaussian_mass_functional() {
    let g = grid();
    let v = RealField::from_fn(g, 0.0, gaussian_wave).unwrap();
    let rec = functionals(&v, None).unwrap();
    let exact = 0.5 * core::f64::consts::E * (2.0 * core::f64::consts::PI).sqrt();
    assert!((rec.p - exact).abs() < 1e-10);
    assert!(rec.e_eps.is_none());
    let zero = functionals(&RealField::zeros(g), Some(&reg())).unwrap();
    assert_eq!((zero.p, zero.e_eps, zero.e_log, zero.h1), (0.0, Some(0.0), 0.0, 0.0));
}

#[test]
fn regularized_energy_approaches_the_log_energy() {
    let v = RealField::from_fn(grid(), 0.0, gaussian_wave).unwrap();
    let mut last = f64::INFINITY;
    for eps in [1e-1, 1e-2, 1e-3] {
        let r = RegularizedNonlinearity::new(eps, Smoothness::C2).unwrap();
        let rec = functionals(&v, Some(&r)).unwrap();
        let gap = (rec.e_eps.unwrap() - rec.e_log).abs();
        assert!(gap < last);
        last = gap;
    }
    assert!(last < 1e-4, "{last}");
}

#[test]
fn solitons_travel_at_their_speed() {
    let g = grid();
    for c in [0.0, 0.25, 0.5] {
        let (v0, warn) = soliton(c, 0.0, &g, 1.0).unwrap();
        assert!(warn.is_none());
        let tr = evolve_nonlinear(&v0, &reg(), 1e-4, 1.0, 10_000).unwrap();
        let end = tr.snapshots.last().unwrap();
        assert!((peak_position(end) - c).abs() < 0.05, "c = {c}: {}", peak_position(end));
        let exact: Vec<f64> = g.points().iter().map(|&x| c.exp() * gaussian_wave(x - c)).collect();
        let err = rel_l2(end.values(), &exact);
        assert!(err < 2e-2, "c = {c}: {err}");
        assert!(tr.warnings.is_empty());
    }
}

#[test]
fn stationary_wave_stays_close_at_every_record() {
    let v0 = RealField::from_fn(grid(), 0.0, gaussian_wave).unwrap();
    let tr = evolve_nonlinear(&v0, &reg(), 1e-4, 1.0, 1000).unwrap();
    assert_eq!(tr.snapshots.len(), 11);
    for s in &tr.snapshots {
        assert!(rel_l2(s.values(), v0.values()) < 2e-2);
    }
    assert!(tr.p_drift < 1e-4 && tr.e_drift < 1e-3);
    let h1_0 = tr.functionals[0].h1;
    assert!(tr.functionals.iter().all(|f| f.h1.is_finite() && f.h1 < 2.0 * h1_0));
}

#[test]
fn mass_drift_is_second_order_in_dt() {
    let g = grid();
    let v0 = RealField::from_fn(g, 0.0, |x| gaussian_wave(x + 2.0) + 0.5 * gaussian_wave(x - 3.0)).unwrap();
    let coarse = evolve_nonlinear(&v0, &reg(), 1e-4, 1.0, 100).unwrap();
    let fine = evolve_nonlinear(&v0, &reg(), 5e-5, 1.0, 200).unwrap();
    assert!(coarse.p_drift < 1e-4);
    assert!(coarse.p_drift / fine.p_drift >= 4.0, "{}", coarse.p_drift / fine.p_drift);
}

#[test]
fn eps_sweep_forms_a_cauchy_sequence() {
    let v0 = RealField::from_fn(grid(), 0.0, gaussian_wave).unwrap();
    let report = eps_convergence(&v0, &[1e-1, 1e-2, 1e-3], Smoothness::C2, 1e-4, 0.5, 1000).unwrap();
    let d: Vec<f64> = report.successive().into_iter().map(Option::unwrap).collect();
    assert!(d[1] < d[0], "{d:?}");
    for run in &report.runs {
        let run = run.as_ref().unwrap();
        assert!(run.p_drift < 1e-4 && run.e_drift < 1e-3);
    }
    assert!(report.distances[0][0].unwrap() == 0.0);
}

#[test]
fn rejects_bad_steps_and_lists() {
    let v0 = RealField::from_fn(grid(), 0.0, gaussian_wave).unwrap();
    assert!(matches!(evolve_nonlinear(&v0, &reg(), -1e-4, 1.0, 1), Err(Error::InvalidArgument { name: "dt", .. })));
    assert!(eps_convergence(&v0, &[1e-3, 1e-2], Smoothness::C2, 1e-4, 0.1, 1).is_err());
}
