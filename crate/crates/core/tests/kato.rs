use levy_kato::classify::{classify, RegularityConfig};
use levy_kato::kato::closed::{lebesgue_profile, subordinator_profile, uniform_l1};
use levy_kato::kato::inequalities::{doubling_check, harnack_check, sandwich_check, unimodal_bound_check, unimodal_lower_constant};
use levy_kato::kato::radial::aizenman_simon_weights;
use levy_kato::kato::{closed_form_characterization, verdict, ConditionConfig, ConditionId, Evaluator, KatoVerdict, Limit, Potential, PowerSide};
use levy_kato::kato::Membership::{In, Out};
use levy_kato::kato::VerdictConfig;
use levy_kato::levy::{family, LaplaceExponent, ProcessSpec};
use serde_json::json;

fn fam(name: &str, p: serde_json::Value) -> ProcessSpec {
    family(name, &p).unwrap()
}

fn power(p: f64, side: PowerSide) -> Potential {
    Potential::Power { center: 0.0, exponent: p, radius: 1.0, side, coeff: 1.0 }
}

fn cfg() -> ConditionConfig {
    ConditionConfig::default()
}

#[test]
fn constant_potential_time_profile_is_linear() {
    let q = Potential::Constant { value: 2.5 };
    for spec in [fam("brownian", json!({})), fam("stable", json!({"alpha": 0.5})), fam("cp", json!({}))] {
        let ev = Evaluator::new(&spec, &cfg()).unwrap();
        let p = ev.time_condition(&q).unwrap();
        for pt in &p.points {
            assert!((pt.value - 2.5 * pt.param).abs() < 1e-4 * pt.param, "{spec:?} {pt:?}");
        }
        assert_eq!(p.limit, Limit::Zero);
        let ts = ev.timespace_condition(&q).unwrap();
        for pt in &ts.points {
            assert!(pt.value <= 2.5 * pt.param * (1.0 + 1e-6));
        }
    }
}

#[test]
fn compound_poisson_bounded_time_profile() {
    let ev = Evaluator::new(&fam("cp", json!({"rate": 1.0})), &cfg()).unwrap();
    // P_u|q| ≤ M gives ≤ Mt for any bounded q.
    let wide = Potential::Indicator { lo: -0.5, hi: 0.5, value: 3.0 };
    for pt in &ev.time_condition(&wide).unwrap().points {
        assert!(pt.value <= 3.0 * pt.param * (1.0 + 1e-9), "{pt:?}");
    }
    // Narrower than the unit jump: the path leaves at the first jump and never returns.
    let narrow = Potential::Indicator { lo: -0.4, hi: 0.4, value: 3.0 };
    for pt in &ev.time_condition(&narrow).unwrap().points {
        let exact = 3.0 * (1.0 - (-pt.param).exp());
        assert!((pt.value - exact).abs() < 1e-9, "{pt:?} vs {exact}");
    }
}

#[test]
fn bounded_q_space_profile_under_brownian() {
    // ∫_{B(0,r)} e^{-|z|}/2 dz = 1 − e^{-r}.
    let q = Potential::Indicator { lo: -3.0, hi: 3.0, value: 1.0 };
    let ev = Evaluator::new(&fam("brownian", json!({})), &cfg()).unwrap();
    let p = ev.space_condition(&q, 1.0).unwrap();
    for pt in &p.points {
        let bound = 1.0 - (-pt.param).exp();
        assert!(pt.value <= bound * (1.0 + 1e-6), "{pt:?} vs {bound}");
        assert!(pt.value >= 0.99 * bound);
    }
    assert_eq!(p.limit, Limit::Zero);
}

#[test]
fn inverse_sqrt_space_profile_bound() {
    let ev = Evaluator::new(&fam("brownian", json!({})), &cfg()).unwrap();
    let p = ev.space_condition(&power(0.5, PowerSide::Both), 1.0).unwrap();
    for pt in &p.points {
        // G(0)·2·2√r with G(0) = 1/2.
        assert!(pt.value <= 2.0 * pt.param.sqrt() * (1.0 + 1e-6), "{pt:?}");
    }
    assert_eq!(p.limit, Limit::Zero);
}

#[test]
fn comb_truncated_space_at_zero_discount() {
    let ev = Evaluator::new(&fam("brownian", json!({})), &cfg()).unwrap();
    let p = ev.trunc_space_condition(&Potential::comb(), 0.0, 1.0).unwrap();
    assert_eq!(p.limit, Limit::Positive, "{}", p.reason);
}

#[test]
fn lebesgue_profile_of_log_singularity() {
    let q = Potential::Log { center: 0.0, radius: 0.5, coeff: 1.0 };
    let p = lebesgue_profile(&q, &cfg());
    for pt in &p.points {
        let r = pt.param;
        let exact = 2.0 * r * (1.0 + (1.0 / r).ln());
        assert!((pt.value - exact).abs() < 1e-6 * exact, "{pt:?} vs {exact}");
    }
    assert_eq!(p.holds(), Some(true));
    assert_eq!(uniform_l1(&Potential::comb(), &cfg()).holds(), Some(true));
}

#[test]
fn drift_case_log_singularity_in_both() {
    let spec = fam("stable_subordinator", json!({"alpha": 0.5, "drift": 1.0}));
    let class = classify(&spec, 1.0, &RegularityConfig::default()).unwrap();
    let q = Potential::Log { center: 0.0, radius: 0.5, coeff: 1.0 };
    let r = closed_form_characterization(&q, &class, &spec, &cfg());
    assert_eq!((r.membership_k, r.membership_calk), (In, In));
}

#[test]
fn stable_subordinator_weight_criterion() {
    let phi = LaplaceExponent::stable(0.5, 1.0);
    for (p, want) in [(0.25, Some(true)), (0.75, Some(false))] {
        let prof = subordinator_profile(&power(p, PowerSide::Right), &phi, &cfg());
        assert_eq!(prof.holds(), want, "p={p}: {}", prof.reason);
        if p < 0.5 {
            for pt in &prof.points {
                // w = z^{-1/2}/2, so the profile is half of ∫₀^r z^{-p}z^{-1/2}dz.
                let oracle = pt.param.powf(0.5 - p) / (0.5 - p);
                assert!((pt.value - 0.5 * oracle).abs() < 1e-4 * oracle);
            }
        }
    }
}

#[test]
fn aizenman_simon_three_dimensions() {
    let ball = Potential::Indicator { lo: -1.0, hi: 1.0, value: 1.0 };
    let p = aizenman_simon_weights(&ball, 3, &cfg()).unwrap();
    for pt in &p.points {
        let exact = 2.0 * std::f64::consts::PI * pt.param;
        assert!((pt.value - exact).abs() < 1e-6 * exact, "{pt:?}");
    }
    assert_eq!(p.holds(), Some(true));
    let sing = aizenman_simon_weights(&power(2.0, PowerSide::Both), 3, &cfg()).unwrap();
    assert_eq!(sing.holds(), Some(false));
    assert!(aizenman_simon_weights(&ball, 1, &cfg()).is_err());
}

fn run(q: &Potential, spec: &ProcessSpec) -> KatoVerdict {
    verdict(q, spec, &VerdictConfig::default()).unwrap()
}

#[test]
fn compound_poisson_classes() {
    let cp = fam("cp", json!({}));
    let v = run(&Potential::Constant { value: 1.0 }, &cp);
    assert_eq!((v.membership_k, v.membership_calk), (In, Out));
    let v = run(&Potential::Constant { value: 0.0 }, &cp);
    assert_eq!((v.membership_k, v.membership_calk), (In, In));
    let v = run(&power(0.5, PowerSide::Both), &cp);
    assert_eq!(v.membership_k, Out);
}

#[test]
fn lattice_holds_and_verdict_serializes() {
    let cases = [
        (Potential::comb(), fam("brownian", json!({}))),
        (Potential::Constant { value: 1.0 }, fam("stable", json!({"alpha": 0.5}))),
        (power(0.5, PowerSide::Both), fam("brownian", json!({}))),
    ];
    for (q, spec) in cases {
        let v = run(&q, &spec);
        assert!(v.lattice_violations.is_empty(), "{:?}", v.lattice_violations);
        if v.membership_calk == In {
            assert_eq!(v.membership_k, In);
        }
        if v.profile(ConditionId::UniformL1).and_then(|p| p.holds()) == Some(false) {
            assert_eq!(v.membership_k, Out);
        }
        let back: KatoVerdict = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(back, v);
    }
}

#[test]
fn unimodal_bound_brownian_3d() {
    let b3 = fam("brownian", json!({"dimension": 3}));
    let ball = Potential::Indicator { lo: -1.0, hi: 1.0, value: 1.0 };
    let r = unimodal_bound_check(&ball, &b3, 0.1, 0.5, f64::INFINITY).unwrap();
    assert!(r.holds && r.slack >= 0.0, "{r:?}");
    let cauchy3 = fam("stable", json!({"alpha": 1.0, "dimension": 3}));
    let (c, time, ballv) = unimodal_lower_constant(&ball, &cauchy3, 0.1).unwrap();
    assert!(c > 0.0 && time > 0.0 && ballv > 0.0);
    assert!(unimodal_bound_check(&ball, &fam("brownian", json!({})), 0.1, 0.5, f64::INFINITY).is_err());
}

#[test]
fn sandwich_and_doubling_on_brownian() {
    let ev = Evaluator::new(&fam("brownian", json!({})), &cfg()).unwrap();
    let q = Potential::Indicator { lo: 0.0, hi: 1.0, value: 1.0 };
    for (lambda, t) in [(1.0, 1.0), (2.0, 3.0)] {
        for r in sandwich_check(&ev, &q, lambda, t).unwrap() {
            assert!(r.holds, "{r:?}");
        }
    }
    let d = doubling_check(&ev, &q, 1.0, 1.0, 0.2).unwrap();
    assert!(d.holds, "{d:?}");
}

#[test]
fn harnack_on_case_c_kernels() {
    for spec in [fam("brownian", json!({})), fam("stable", json!({"alpha": 1.5}))] {
        let r = harnack_check(&spec, 1.0).unwrap();
        assert!(r.holds, "{r:?}");
    }
    assert!(harnack_check(&fam("stable", json!({"alpha": 0.5})), 1.0).is_err());
}
