use logkdv_core::numgrid::{Branch, Grid, RealField};
use logkdv_core::spectrum::*;
use logkdv_core::Complex64;

fn default_modes(n: usize) -> Vec<EigenMode> {
    solve_half_line(12.0, 4000, n, Branch::Plus).unwrap()
}

#[test]
fn bisection_agrees_with_implicit_ql() {
    let grid = Grid::half_line(12.0, 4000).unwrap();
    let t = half_line_matrix(&grid);
    let ql = t.eigenvalues_ql().unwrap();
    for (n, m) in default_modes(6).iter().enumerate() {
        assert!((ql[n] - m.eigenvalue).abs() < 1e-6 * (1.0 + ql[n].abs()), "{n}: {} vs {}", ql[n], m.eigenvalue);
    }
}

#[test]
fn exact_zero_mode() {
    let m = &default_modes(1)[0];
    assert!(m.eigenvalue.abs() < 1e-4);
    let g = m.vhat.grid();
    let exact: Vec<f64> = (0..g.len()).map(|j| {
        let k = g.point(j);
        k.sqrt() * (-k * k).exp()
    }).collect();
    let dot: f64 = exact.iter().zip(m.vhat.values()).map(|(a, b)| a * b).sum();
    let nn: f64 = exact.iter().map(|a| a * a).sum();
    let c = dot / nn;
    let err: f64 = exact.iter().zip(m.vhat.values()).map(|(a, b)| (c * a - b).powi(2)).sum::<f64>().sqrt();
    assert!(err / (c * c * nn).sqrt() < 1e-3);
}

#[test]
fn orthonormality_and_nodal_counts_for_ten_modes() {
    let modes = default_modes(10);
    let g = gram_matrix(&modes);
    for (i, row) in g.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((v - want).abs() < 1e-6, "G[{i}][{j}] = {v}");
        }
    }
    for m in &modes {
        assert_eq!(sign_changes(m.vhat.values()), m.index);
    }
}

#[test]
fn origin_limit_is_finite_and_positive() {
    for m in default_modes(4) {
        let u = m.uhat.values();
        let g = m.uhat.grid();
        let r: Vec<f64> = (0..3).map(|j| u[j] / g.point(j)).collect();
        assert!(r.iter().all(|&v| v > 0.0));
        // û/k = 1 - Ek/2 + …, so consecutive ratios drift by about E h / 2.
        let tol = (m.eigenvalue.abs() + 1.0) * 2.0 * g.spacing();
        assert!((r[2] / r[0] - 1.0).abs() < tol, "{r:?}");
    }
}

/// Max relative misfit of `û` against `c · û₁` on `(0, k_hi]`, with `c`
/// fitted by least squares.
fn frobenius_misfit(m: &EigenMode, k_hi: f64) -> f64 {
    let g = m.uhat.grid();
    let pts: Vec<(f64, f64)> = (0..g.len())
        .map(|j| (g.point(j), m.uhat.values()[j]))
        .filter(|(k, _)| *k <= k_hi)
        .collect();
    let series: Vec<f64> = pts.iter().map(|(k, _)| frobenius_u1(m.eigenvalue, *k, 3).unwrap()).collect();
    let c = pts.iter().zip(&series).map(|((_, u), s)| u * s).sum::<f64>()
        / series.iter().map(|s| s * s).sum::<f64>();
    pts.iter()
        .zip(&series)
        .map(|((_, u), s)| ((u - c * s) / u).abs())
        .fold(0.0, f64::max)
}

#[test]
fn near_origin_agrees_with_frobenius_series() {
    let modes = default_modes(4);
    // The series stops at k³; its first omitted term limits the window
    // for the higher modes.
    assert!(frobenius_misfit(&modes[1], 0.1) < 1e-2);
    for m in &modes[1..4] {
        let e = frobenius_misfit(m, 0.03);
        assert!(e < 1e-2, "mode {}: {e}", m.index);
    }
}

#[test]
fn tail_follows_wkb_asymptotics() {
    // With g = û / (k e^{-k²}), k² (log g)′ → E/4 as k → ∞.
    for m in &default_modes(4)[1..4] {
        let g = m.uhat.grid();
        let h = g.spacing();
        let u = m.uhat.values();
        let lg = |j: usize| {
            let k = g.point(j);
            (u[j] / (k * (-k * k).exp())).abs().ln()
        };
        for j in (0..g.len() - 1).filter(|&j| (3.5..=4.5).contains(&g.point(j))) {
            let k = g.point(j);
            let slope = k * k * (lg(j + 1) - lg(j - 1)) / (2.0 * h);
            let want = m.eigenvalue / 4.0;
            assert!((slope / want - 1.0).abs() < 0.05, "mode {} k={k}: {slope} vs {want}", m.index);
        }
    }
}

#[test]
fn eigenvalue_converges_at_second_order() {
    let e = |n| solve_half_line(12.0, n, 2, Branch::Plus).unwrap()[1].eigenvalue;
    let (a, b, c) = (e(1000), e(2000), e(4000));
    let ratio = (a - b) / (b - c);
    assert!((ratio - 4.0).abs() < 0.2, "{ratio}");
}

#[test]
fn physical_modes_decay_algebraically() {
    let x: Vec<f64> = (0..=480).map(|i| 0.125 * i as f64).collect();
    let mut modes = default_modes(3);
    for m in &mut modes[1..3] {
        let u = mode_to_physical(m, &x).unwrap().to_vec();
        let re = fit_decay_exponent(&x, &u, (20.0, 60.0), Part::Real).unwrap();
        let im = fit_decay_exponent(&x, &u, (20.0, 60.0), Part::Imag).unwrap();
        assert!((1.7..=2.3).contains(&re.exponent), "mode {} re {}", m.index, re.exponent);
        assert!((2.6..=3.4).contains(&im.exponent), "mode {} im {}", m.index, im.exponent);
        assert!(u.iter().zip(&x).any(|(z, &x)| x > 20.0 && z.re.abs() > 1e-6));
    }
}

#[test]
fn computed_zero_mode_glues_to_hermite_function() {
    let mut p = default_modes(1).remove(0);
    let x: Vec<f64> = (0..=200).map(|i| -10.0 + 0.1 * i as f64).collect();
    let up = mode_to_physical(&mut p, &x).unwrap().to_vec();
    let mut m = reflect(&p);
    let um = mode_to_physical(&mut m, &x).unwrap().to_vec();
    for (a, b) in up.iter().zip(&um) {
        assert!((a.conj() - b).norm() < 1e-15);
    }
    let glued: Vec<Complex64> = up.iter().zip(&um).map(|(a, b)| a - b).collect();
    let shape: Vec<f64> = x.iter().map(|&x| x * (-x * x / 4.0).exp()).collect();
    let c = glued.iter().zip(&shape).map(|(z, s)| z.im * s).sum::<f64>() / shape.iter().map(|s| s * s).sum::<f64>();
    let err = glued.iter().zip(&shape).map(|(z, s)| (z - Complex64::new(0.0, c * s)).norm()).fold(0.0, f64::max);
    assert!(err / c.abs() < 1e-3, "{}", err / c.abs());
}

#[test]
fn truncation_rejected_for_undecayed_input() {
    let g = Grid::half_line(8.0, 800).unwrap();
    let slow = RealField::from_fn(g, 0.0, |k| k * (-0.1 * k * k).exp()).unwrap();
    let mut mode = default_modes(1).remove(0);
    mode.uhat = slow;
    assert!(mode_to_physical(&mut mode, &[0.0]).is_err());
}
