use levy_kato::levy::{
    check_scaling, drift_gamma0, eval_psi, family, parse_spec, LaplaceExponent, LevyTriplet, MeasurePart, ProcessSpec, ScalingKind, ScalingOutcome, Side,
};
use proptest::prelude::*;
use serde_json::json;

fn fam(name: &str, p: serde_json::Value) -> ProcessSpec {
    family(name, &p).unwrap()
}

/// Term-by-term sum over atoms ±2^n, n ∈ [−400, 400]; no Taylor block, no tail bound.
fn brute_dyadic(xi: f64, alpha: f64) -> f64 {
    (-400..=400)
        .map(|n| {
            let s = 2f64.powi(n);
            let f = if s <= 1.0 { s.powf(-alpha) } else { (1.0 - s).exp() / s };
            // 2sin²(y/2) keeps precision where 1 − cos(y) cancels.
            4.0 * f * (0.5 * xi * s).sin().powi(2)
        })
        .sum()
}

#[test]
fn brownian_and_stable_closed_forms() {
    let b = eval_psi(&fam("brownian", json!({})), &[2.0]).unwrap();
    assert!((b.re - 4.0).abs() < 1e-12 && b.im == 0.0);
    let s = eval_psi(&fam("stable", json!({"alpha": 0.5})), &[4.0]).unwrap();
    assert!((s.re - 2.0).abs() < 1e-12 && s.im.abs() < 1e-12);
}

#[test]
fn dyadic_series_matches_brute_force_and_is_comparable() {
    let spec = fam("dyadic", json!({"m": 1, "beta": 1, "delta": 1, "alpha": 1.0}));
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for k in -40..=40 {
        let xi = 2f64.powf(k as f64 / 4.0 + 0.1);
        let got = eval_psi(&spec, &[xi]).unwrap().re;
        let want = brute_dyadic(xi, 1.0);
        assert!((got - want).abs() <= 1e-9 * want, "ξ={xi}: {got} vs {want}");
        let ratio = got / (xi * xi).min(xi);
        lo = lo.min(ratio);
        hi = hi.max(ratio);
    }
    // Comparable: the ratio stays in a fixed band over 20 octaves.
    assert!(lo > 0.3 && hi < 10.0, "ratio band [{lo}, {hi}]");
}

#[test]
fn gamma0_examples() {
    let atom = ProcessSpec::Triplet(LevyTriplet::one_dim(0.0, 0.0, vec![MeasurePart::Atoms { atoms: vec![levy_kato::levy::Atom { at: vec![1.0], mass: 1.0 }] }]));
    assert_eq!(drift_gamma0(&atom).unwrap(), vec![0.0]);

    let fv = parse_spec(r#"{"kind":"triplet","gamma":1,"nu":[{"type":"power","coeff":1,"alpha":0.5,"upper":1,"side":"positive"}]}"#).unwrap();
    let g = drift_gamma0(&fv).unwrap();
    assert!((g[0] + 1.0).abs() < 1e-8, "γ₀ = {}", g[0]);

    assert!(drift_gamma0(&fam("stable", json!({"alpha": 1.5}))).is_none());
}

#[test]
fn scaling_witnesses_and_refutation() {
    let grid: Vec<f64> = (0..40).map(|i| 10f64.powf(-2.0 + i as f64 * 0.1)).collect();
    match check_scaling(|u| u.sqrt(), ScalingKind::Wlsc, 0.5, 0.0, &grid, 1e4).unwrap() {
        ScalingOutcome::Witness(w) => assert!((w.constant - 1.0).abs() < 1e-12),
        r => panic!("{r:?}"),
    }
    let phi = LaplaceExponent::stable(0.5, 1.0);
    let f = |u: f64| phi.deriv(u) / phi.eval(u).powi(2);
    match check_scaling(f, ScalingKind::Wusc, -1.5, 0.0, &grid, 1e4).unwrap() {
        ScalingOutcome::Witness(w) => assert!((w.constant - 1.0).abs() < 1e-9),
        r => panic!("{r:?}"),
    }
    let big: Vec<f64> = (0..20).map(|i| 2.0 * 10f64.powf(i as f64 * 0.2)).collect();
    assert!(matches!(check_scaling(|u: f64| u.ln_1p(), ScalingKind::Wlsc, 0.5, 1.0, &big, 1e6).unwrap(), ScalingOutcome::Refuted { .. }));
}

#[test]
fn schema_round_trip() {
    for s in [
        fam("brownian", json!({})),
        fam("cp", json!({"rate": 2.0})),
        fam("stable_subordinator", json!({"alpha": 0.5})),
        fam("dyadic", json!({"alpha": 0.75})),
    ] {
        let text = serde_json::to_string(&s).unwrap();
        let back: ProcessSpec = serde_json::from_str(&text).unwrap();
        for xi in [0.3, 1.0, 7.0] {
            assert_eq!(s.psi1(xi), back.psi1(xi));
        }
    }
}

/// A random one-dimensional triplet built from the supported measure parts.
fn arb_spec() -> impl Strategy<Value = ProcessSpec> {
    (
        -2.0..2.0f64,
        0.0..1.5f64,
        0.1..1.9f64,
        0.0..2.0f64,
        prop_oneof![Just(Side::Both), Just(Side::Positive), Just(Side::Negative)],
        0.05..3.0f64,
        0.1..2.5f64,
    )
        .prop_map(|(gamma, a, alpha, coeff, side, rate, at)| {
            let nu = vec![
                MeasurePart::Power { coeff, alpha, lower: 0.0, upper: f64::INFINITY, temper: 0.5, side },
                MeasurePart::Atoms { atoms: vec![levy_kato::levy::Atom { at: vec![at], mass: rate }] },
            ];
            ProcessSpec::Triplet(LevyTriplet::one_dim(gamma, a, nu))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exponent_is_hermitian_with_nonnegative_real_part(spec in arb_spec(), xi in -30.0..30.0f64) {
        let p = eval_psi(&spec, &[xi]).unwrap();
        let m = eval_psi(&spec, &[-xi]).unwrap();
        let scale = p.norm().max(1.0);
        prop_assert!(p.re >= -1e-9 * scale);
        prop_assert!((p - m.conj()).norm() <= 1e-7 * scale);
        prop_assert!(eval_psi(&spec, &[0.0]).unwrap().norm() < 1e-12);
    }

    #[test]
    fn symmetric_measures_give_real_exponents(alpha in 0.1..1.9f64, coeff in 0.1..2.0f64, xi in -20.0..20.0f64) {
        let nu = vec![MeasurePart::Power { coeff, alpha, lower: 0.0, upper: f64::INFINITY, temper: 1.0, side: Side::Both }];
        let spec = ProcessSpec::Triplet(LevyTriplet::one_dim(0.0, 0.0, nu));
        let p = eval_psi(&spec, &[xi]).unwrap();
        prop_assert!(p.im.abs() <= 1e-9 * p.re.abs().max(1.0));
    }
}
