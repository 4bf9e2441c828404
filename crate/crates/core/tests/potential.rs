use std::f64::consts::PI;

use levy_kato::levy::{family, LaplaceExponent, LaplaceFamily, ProcessSpec};
use levy_kato::potential::{potential_density, subordinator_weight, transition_density, truncated_potential, truncated_potential_with, TruncMethod};
use levy_kato::util::{linspace, trapezoid};
use levy_kato::Error;
use serde_json::json;

fn fam(name: &str, p: serde_json::Value) -> ProcessSpec {
    family(name, &p).unwrap()
}

fn brownian() -> ProcessSpec {
    fam("brownian", json!({}))
}

#[test]
fn gaussian_transition_density() {
    let p = transition_density(&brownian(), 1.0, &[0.0, 1.0, 2.5]).unwrap();
    for (x, v) in p.grid.iter().zip(&p.values) {
        let want = (-x * x / 4.0).exp() / (4.0 * PI).sqrt();
        assert!((v - want).abs() < 1e-6, "x={x}: {v} vs {want}");
    }
}

#[test]
fn transition_densities_are_probability_densities() {
    for (spec, w) in [(brownian(), 12.0), (fam("stable", json!({"alpha": 1.5})), 60.0), (fam("dyadic", json!({"alpha": 1.5})), 40.0)] {
        // Mirrored so that grid[i] = −grid[n−1−i] bit for bit.
        let half = linspace(0.0, w, 2401);
        let grid: Vec<f64> = half.iter().rev().map(|x| -x).chain(half.iter().skip(1).copied()).collect();
        let p = transition_density(&spec, 1.0, &grid).unwrap();
        // Stable 1.5 leaves about 1e-3 of its mass outside ±60.
        assert!((p.mass_estimate - 1.0).abs() < 5e-3, "{spec:?}: {}", p.mass_estimate);
        let n = grid.len();
        for i in 0..n / 2 {
            assert_eq!(p.values[i], p.values[n - 1 - i]);
        }
    }
}

#[test]
fn chapman_kolmogorov() {
    let spec = fam("stable", json!({"alpha": 1.5}));
    let ys = linspace(-60.0, 60.0, 12001);
    for &(s, t, x) in &[(0.3, 0.7, 0.4), (0.5, 0.5, -1.2), (1.0, 0.25, 2.0)] {
        let ps = transition_density(&spec, s, &ys).unwrap();
        let shifted: Vec<f64> = ys.iter().rev().map(|y| x - y).collect();
        let pt = transition_density(&spec, t, &shifted).unwrap();
        let prod: Vec<f64> = ps.values.iter().zip(pt.values.iter().rev()).map(|(a, b)| a * b).collect();
        let conv = trapezoid(&ys, &prod);
        let direct = transition_density(&spec, s + t, &[x]).unwrap().values[0];
        assert!((conv - direct).abs() < 1e-3, "s={s} t={t} x={x}: {conv} vs {direct}");
    }
}

#[test]
fn brownian_resolvent_oracle() {
    let grid = linspace(-8.0, 8.0, 4001);
    let g = potential_density(&brownian(), 1.0, &grid).unwrap();
    let err = g.grid.iter().zip(&g.values).map(|(x, v)| (v - 0.5 * (-x.abs()).exp()).abs()).fold(0.0, f64::max);
    assert!(err < 1e-5, "max error {err}");
    assert!((g.values[2000] - 0.5).abs() < 1e-6);
}

#[test]
fn resolvent_mass_is_one_over_lambda() {
    for lambda in [0.5, 1.0, 2.0] {
        // e^{-√λ|x|}/(2√λ) leaves mass e^{-√λ·w}/λ outside [−w, w].
        let w = 40.0;
        let grid = linspace(-w, w, 16001);
        let g = potential_density(&brownian(), lambda, &grid).unwrap();
        assert!((g.mass_estimate - 1.0 / lambda).abs() < 1e-4, "λ={lambda}: {}", g.mass_estimate);
    }
}

#[test]
fn truncated_brownian_at_origin() {
    let g = truncated_potential(&brownian(), 0.0, 1.0, &[0.0]).unwrap();
    assert!((g.values[0] - 1.0 / PI.sqrt()).abs() < 1e-4, "{}", g.values[0]);
}

#[test]
fn truncated_mass_and_monotonicity() {
    let grid = linspace(-30.0, 30.0, 6001);
    let spec = fam("stable", json!({"alpha": 1.5}));
    let mut prev: Option<Vec<f64>> = None;
    for t in [0.25, 0.5, 1.0] {
        let g = truncated_potential(&brownian(), 0.0, t, &grid).unwrap();
        assert!((g.mass_estimate - t).abs() < 1e-4, "t={t}: {}", g.mass_estimate);
        let s = truncated_potential(&spec, 0.0, t, &[-1.0, -0.1, 0.3, 2.0]).unwrap();
        if let Some(p) = &prev {
            for (a, b) in s.values.iter().zip(p) {
                assert!(*a >= *b - 1e-9);
            }
        }
        prev = Some(s.values);
    }
}

#[test]
fn discount_sandwich_pointwise() {
    let xs = [-2.0, -0.5, 0.25, 1.0, 3.0];
    for spec in [brownian(), fam("stable", json!({"alpha": 1.5}))] {
        let (lambda, t) = (1.5, 0.8);
        let g0 = truncated_potential(&spec, 0.0, t, &xs).unwrap();
        let gl = truncated_potential(&spec, lambda, t, &xs).unwrap();
        let ginf = potential_density(&spec, lambda, &xs).unwrap();
        for i in 0..xs.len() {
            assert!((-lambda * t).exp() * g0.values[i] <= gl.values[i] + 1e-9);
            assert!(gl.values[i] <= g0.values[i] + 1e-9);
            assert!(gl.values[i] <= ginf.values[i] + 1e-9);
        }
    }
}

#[test]
fn time_quadrature_and_fourier_routes_agree() {
    let xs = [-1.5, -0.2, 0.05, 0.7, 2.0];
    for spec in [brownian(), fam("stable", json!({"alpha": 1.5}))] {
        let a = truncated_potential_with(&spec, 1.0, 0.7, &xs, TruncMethod::Auto).unwrap();
        let b = truncated_potential_with(&spec, 1.0, 0.7, &xs, TruncMethod::Fourier).unwrap();
        for (u, v) in a.values.iter().zip(&b.values) {
            assert!((u - v).abs() < 1e-6 * u.max(1.0), "{u} vs {v}");
        }
    }
}

#[test]
fn density_routes_reject_the_wrong_cases() {
    assert!(matches!(potential_density(&fam("cp", json!({})), 1.0, &[0.5]), Err(Error::AtomAtOrigin)));
    assert!(matches!(potential_density(&fam("stable", json!({"alpha": 0.5})), 1.0, &[0.5]), Err(Error::CaseAViolation)));
    assert!(matches!(transition_density(&brownian(), 1.0, &[]), Err(Error::EmptyGrid)));
}

#[test]
fn stable_subordinator_weight_against_exact_potential() {
    let phi = LaplaceExponent::stable(0.5, 1.0);
    let grid: Vec<f64> = (0..=200).map(|i| 10f64.powf(-2.0 + i as f64 / 100.0)).collect();
    let w = subordinator_weight(&phi, &grid).unwrap();
    let ratios: Vec<f64> = grid.iter().zip(&w.values).map(|(z, v)| v / (z.powf(-0.5) / PI.sqrt())).collect();
    let want = 0.5 * PI.sqrt();
    for r in &ratios {
        assert!((r - want).abs() < 0.01 * want, "{r}");
    }
    for (z, v) in grid.iter().zip(&w.values) {
        assert!((v - 0.5 * z.powf(-0.5)).abs() < 1e-12 * v);
    }
}

#[test]
fn log_subordinator_weight() {
    let phi = LaplaceExponent::new(LaplaceFamily::Log { alpha: 1.0 });
    let grid: Vec<f64> = (1..=60).map(|i| 10f64.powf(-i as f64 / 10.0)).rev().collect();
    let w = subordinator_weight(&phi, &grid).unwrap();
    for (z, v) in grid.iter().zip(&w.values) {
        let u = 1.0 / z;
        let exact = 1.0 / ((1.0 + u) * z * z * u.ln_1p().powi(2));
        assert!((v - exact).abs() < 1e-10 * exact, "z={z}");
    }
    // Asymptotically 1/(z ln²(1/z)).
    let z = grid[0];
    let asym = 1.0 / (z * (1.0 / z).ln().powi(2));
    assert!((w.values[0] / asym - 1.0).abs() < 0.01);
}
