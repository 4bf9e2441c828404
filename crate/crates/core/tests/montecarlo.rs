use levy_kato::kato::Potential;
use levy_kato::levy::{family, parse_spec, ProcessSpec};
use levy_kato::montecarlo::{
    estimate_space_functional, estimate_space_profile, estimate_time_functional, validate_sampler, PathSampler, SamplerConfig, SmallJumps,
};
use levy_kato::potential::truncated_potential;
use levy_kato::util::{linspace, trapezoid};
use levy_kato::Error;
use serde_json::json;
use statrs::function::erf::erf;

fn fam(name: &str, p: serde_json::Value) -> ProcessSpec {
    family(name, &p).unwrap()
}

fn sampler(spec: &ProcessSpec) -> PathSampler {
    PathSampler::new(spec, &SamplerConfig::default()).unwrap()
}

fn unit() -> Potential {
    Potential::Indicator { lo: 0.0, hi: 1.0, value: 1.0 }
}

/// ∫₀¹ P(0 ≤ B_u ≤ 1) du for variance 2u, by composite Simpson in s = √u.
fn brownian_unit_occupation() -> f64 {
    // u = s², du = 2s ds; P = erf(1/(2√u))/2.
    let f = |s: f64| if s == 0.0 { 0.0 } else { s * erf(0.5 / s) };
    let n = 20_000;
    let h = 1.0 / n as f64;
    let mut acc = f(0.0) + f(1.0);
    for i in 1..n {
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
    }
    acc * h / 3.0
}

#[test]
fn constant_potential_is_exact() {
    for spec in [fam("brownian", json!({})), fam("cp", json!({})), fam("stable", json!({"alpha": 0.5}))] {
        let e = estimate_time_functional(&sampler(&spec), &Potential::Constant { value: 1.0 }, 0.0, 1.5, 100, 50).unwrap();
        assert!((e.value - 1.5).abs() < 1e-12 && e.std_error < 1e-12);
    }
}

#[test]
fn compound_poisson_holding_time() {
    let q = Potential::Indicator { lo: -0.5, hi: 0.5, value: 1.0 };
    let e = estimate_time_functional(&sampler(&fam("cp", json!({"rate": 1.0}))), &q, 0.0, 1.0, 100_000, 1000).unwrap();
    let exact = 1.0 - (-1.0f64).exp();
    assert!(e.covers(exact), "{e:?} vs {exact}");
}

#[test]
fn brownian_unit_interval_against_quadrature() {
    let exact = brownian_unit_occupation();
    // The same number from the kernel module: ∫₀¹ G⁰_1(z) dz.
    let zs = linspace(0.0, 1.0, 2001);
    let g = truncated_potential(&fam("brownian", json!({})), 0.0, 1.0, &zs).unwrap();
    let kernel = trapezoid(&zs, &g.values);
    assert!((kernel - exact).abs() < 1e-5, "{kernel} vs {exact}");
    let e = estimate_time_functional(&sampler(&fam("brownian", json!({}))), &unit(), 0.0, 1.0, 100_000, 1000).unwrap();
    assert!(e.covers(exact), "{e:?} vs {exact}");
}

#[test]
fn discounted_mass_of_constant() {
    let lambda = 2.0;
    let e = estimate_space_functional(&sampler(&fam("brownian", json!({}))), &Potential::Constant { value: 1.0 }, 0.0, lambda, f64::INFINITY, None, 50).unwrap();
    let exact = (1.0 - (-lambda * e.horizon).exp()) / lambda;
    // Left Riemann sum of e^{-λu}: relative bias about λδ/2.
    assert!((e.value - exact).abs() < lambda * e.dt * exact, "{e:?} vs {exact}");
}

#[test]
fn short_fixed_horizon_is_rejected() {
    let r = estimate_space_functional(&sampler(&fam("brownian", json!({}))), &Potential::Constant { value: 1.0 }, 0.0, 1.0, f64::INFINITY, Some(1.0), 20);
    assert!(matches!(r, Err(Error::HorizonTooShort { .. })));
}

#[test]
fn comb_block_keeps_the_space_profile_up() {
    let x = 6.0 + 2f64.powi(-7);
    // Block 6 alone: 2^6 ∫ e^{-|y−x|}/2 over the block centred at x.
    let floor = 64.0 * (1.0 - (-1.0f64 / 128.0).exp());
    let radii = [0.1, 0.05, 0.02];
    let est = estimate_space_profile(&sampler(&fam("brownian", json!({}))), &Potential::comb(), x, 1.0, &radii, Some(10.0), 400).unwrap();
    for e in &est {
        assert!(e.value + 3.0 * e.std_error >= floor, "{e:?} vs {floor}");
        assert!(e.value >= 0.5 * floor);
    }
}

#[test]
fn compound_poisson_space_floor() {
    // Unit jumps never come back within r < 1, so the value is ∫e^{-(λ+1)u}du = 1/(λ+1).
    let lambda = 1.0;
    let s = sampler(&fam("cp", json!({"rate": 1.0})));
    let est = estimate_space_profile(&s, &Potential::Constant { value: 1.0 }, 0.0, lambda, &[0.5, 0.2], None, 5000).unwrap();
    for e in &est {
        let exact = 1.0 / (lambda + 1.0);
        assert!((e.value - exact).abs() < 3.0 * e.std_error + lambda * e.dt, "{e:?}");
    }
}

#[test]
fn ecf_validation_of_samplers() {
    let specs = [
        fam("brownian", json!({})),
        fam("cp", json!({"rate": 2.0, "jump": {"law": "normal", "mean": 0.5, "sd": 1.0}})),
        fam("stable", json!({"alpha": 0.5})),
        fam("stable", json!({"alpha": 1.5})),
        fam("stable_subordinator", json!({"alpha": 0.5})),
        fam("shifted_stable_sub", json!({"alpha": 0.5, "m": 1.0})),
        fam("dyadic", json!({"alpha": 1.5})),
        parse_spec(r#"{"kind":"triplet","gamma":1,"nu":[{"type":"power","coeff":1,"alpha":0.5,"upper":1,"side":"positive"}]}"#).unwrap(),
    ];
    for spec in specs {
        let s = sampler(&spec);
        let r = validate_sampler(&s, 1.0, 100_000);
        assert!(r.is_ok(), "{spec:?}: {r:?}");
    }
}

#[test]
fn ecf_negative_control() {
    let cfg = SamplerConfig { exact_stable: false, eps_j: Some(0.5), small_jumps: SmallJumps::Drop, ..SamplerConfig::default() };
    let s = PathSampler::new(&fam("stable", json!({"alpha": 1.5})), &cfg).unwrap();
    assert!(matches!(validate_sampler(&s, 1.0, 100_000), Err(Error::SamplerMismatch(_))));
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let s = sampler(&fam("stable", json!({"alpha": 1.5})));
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| estimate_time_functional(&s, &unit(), 0.2, 1.0, 3000, 200).unwrap())
    };
    let a = serde_json::to_string(&run(1)).unwrap();
    let b = serde_json::to_string(&run(4)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn translation_invariance() {
    // Starting at x under q equals starting at 0 under q(· + x).
    let s = sampler(&fam("stable", json!({"alpha": 1.5})));
    let x = 0.7;
    let moved_start = estimate_time_functional(&s, &unit(), x, 1.0, 20_000, 200).unwrap();
    let moved_q = Potential::Indicator { lo: -x, hi: 1.0 - x, value: 1.0 };
    let at_origin = estimate_time_functional(&s, &moved_q, 0.0, 1.0, 20_000, 200).unwrap();
    let se = moved_start.std_error.hypot(at_origin.std_error);
    assert!((moved_start.value - at_origin.value).abs() < 3.0 * se, "{moved_start:?} vs {at_origin:?}");
}

#[test]
fn halving_the_step_moves_less_than_three_se() {
    for spec in [fam("brownian", json!({})), fam("stable", json!({"alpha": 1.5})), fam("cp", json!({}))] {
        let s = sampler(&spec);
        let coarse = estimate_time_functional(&s, &unit(), 0.0, 1.0, 20_000, 500).unwrap();
        let fine = estimate_time_functional(&s, &unit(), 0.0, 1.0, 20_000, 1000).unwrap();
        let se = coarse.std_error.max(fine.std_error);
        assert!((coarse.value - fine.value).abs() < 3.0 * se, "{spec:?}: {coarse:?} vs {fine:?}");
    }
}

#[test]
fn coverage_over_repeated_seeds() {
    let exact = brownian_unit_occupation();
    let spec = fam("brownian", json!({}));
    let mut hits = 0;
    for seed in 0..20u64 {
        let s = PathSampler::new(&spec, &SamplerConfig { seed, ..SamplerConfig::default() }).unwrap();
        let e = estimate_time_functional(&s, &unit(), 0.0, 1.0, 5000, 1000).unwrap();
        hits += e.covers(exact) as usize;
    }
    assert!(hits >= 19, "{hits}/20 intervals cover the quadrature value");
}
