//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use levy_kato::classify::{classify, Label, RegularityConfig};
use levy_kato::kato::closed::subordinator_profile;
use levy_kato::kato::inequalities::{harnack_check, sandwich_check, unimodal_bound_check};
use levy_kato::kato::battery::{cases, run_battery};
use levy_kato::kato::{verdict, ConditionConfig, ConditionId, Evaluator, Membership, Potential, PowerSide, VerdictConfig};
use levy_kato::levy::{family, parse_spec, LaplaceExponent, ProcessSpec};
use levy_kato::montecarlo::{estimate_time_functional, validate_sampler, PathSampler, SamplerConfig, SmallJumps};
use levy_kato::potential::{potential_density, subordinator_weight, truncated_potential};
use levy_kato::util::linspace;
use serde_json::json;
use statrs::function::erf::erf;

type Outcome = Result<String, String>;

fn fam(name: &str, p: serde_json::Value) -> ProcessSpec {
    family(name, &p).unwrap()
}

fn check(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, budget: Duration) -> Result<(), String> {
    let took = start.elapsed();
    check(took <= budget, format!("took {took:.1?}, budget {budget:?}"))
}

fn classification() -> Outcome {
    let start = Instant::now();
    let cfg = RegularityConfig::default();
    let cases = [
        (fam("brownian", json!({})), Label::C),
        (fam("stable", json!({"alpha": 0.5})), Label::A),
        (fam("stable", json!({"alpha": 1.0})), Label::A),
        (fam("stable", json!({"alpha": 1.5})), Label::C),
        (fam("cp", json!({})), Label::CompoundPoisson),
        (parse_spec(r#"{"kind":"triplet","gamma":1,"nu":[{"type":"power","coeff":1,"alpha":0.5,"upper":1,"side":"positive"}]}"#).unwrap(), Label::B),
        (fam("dyadic", json!({"alpha": 1.5})), Label::C),
        (fam("dyadic", json!({"alpha": 0.75})), Label::A),
    ];
    for (spec, want) in &cases {
        let got = classify(spec, 1.0, &cfg).map_err(|e| e.to_string())?.label;
        check(got == *want, format!("{spec:?}: {got:?}, expected {want:?}"))?;
    }
    let st = parse_spec(r#"{"kind":"space_time","x":{"kind":"family","family":"brownian"}}"#).unwrap();
    let l = classify(&st, 1.0, &cfg).map_err(|e| e.to_string())?.label;
    check(!l.zero_regular(), format!("space-time labelled {l:?}"))?;
    within(start, Duration::from_secs(10))?;
    Ok(format!("{} specs plus space-time in {:.1?}", cases.len(), start.elapsed()))
}

fn kernels() -> Outcome {
    let start = Instant::now();
    let brownian = fam("brownian", json!({}));
    let grid = linspace(-8.0, 8.0, 4001);
    let g = potential_density(&brownian, 1.0, &grid).map_err(|e| e.to_string())?;
    let err = g.grid.iter().zip(&g.values).map(|(x, v)| (v - 0.5 * (-x.abs()).exp()).abs()).fold(0.0, f64::max);
    check(err < 1e-5, format!("G¹ max error {err:e}"))?;
    for lambda in [0.5, 1.0, 2.0] {
        let g = potential_density(&brownian, lambda, &linspace(-40.0, 40.0, 16001)).map_err(|e| e.to_string())?;
        check((g.mass_estimate - 1.0 / lambda).abs() < 1e-4, format!("mass at λ={lambda}: {}", g.mass_estimate))?;
    }
    let g0 = truncated_potential(&brownian, 0.0, 1.0, &[0.0]).map_err(|e| e.to_string())?.values[0];
    check((g0 - 1.0 / PI.sqrt()).abs() < 1e-4, format!("G⁰_1(0) = {g0}"))?;
    let zs: Vec<f64> = (0..=40).map(|i| 10f64.powf(-2.0 + i as f64 / 20.0)).collect();
    let w = subordinator_weight(&LaplaceExponent::stable(0.5, 1.0), &zs).map_err(|e| e.to_string())?;
    for (z, v) in zs.iter().zip(&w.values) {
        // u(z) = z^{-1/2}/Γ(1/2) against the weight, ratio Γ(1/2)/2.
        let ratio = v / (z.powf(-0.5) / PI.sqrt());
        check((ratio - 0.5 * PI.sqrt()).abs() < 0.01 * ratio, format!("weight ratio {ratio} at z={z}"))?;
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("max |G¹ − e^{{-|x|}}/2| = {err:.1e} in {:.1?}", start.elapsed()))
}

/// Largest single-block mass inside B(x, r) with x at the block centre.
fn comb_block_floor(r: f64) -> f64 {
    (1..=60).filter(|&k| 2f64.powi(-k) < r).map(|k| 2f64.powi(k) * (1.0 - (-(2f64.powi(-k - 1))).exp())).fold(0.0, f64::max)
}

fn comb() -> Outcome {
    let start = Instant::now();
    let spec = fam("brownian", json!({}));
    let q = Potential::comb();
    let ev = Evaluator::new(&spec, &ConditionConfig::default()).map_err(|e| e.to_string())?;
    let time = ev.time_condition(&q).map_err(|e| e.to_string())?;
    let mut pts = time.points.clone();
    pts.sort_by(|a, b| b.param.total_cmp(&a.param));
    for w in pts.windows(2) {
        check(w[1].value < w[0].value, format!("time profile not decreasing: {:?} then {:?}", w[0], w[1]))?;
    }
    let space = ev.space_condition(&q, 1.0).map_err(|e| e.to_string())?;
    for p in &space.points {
        let floor = comb_block_floor(p.param);
        check(p.value >= 0.5 * floor, format!("space value {} at r={} below half of {floor}", p.value, p.param))?;
    }
    let v = verdict(&q, &spec, &VerdictConfig::default()).map_err(|e| e.to_string())?;
    check((v.membership_k, v.membership_calk) == (Membership::In, Membership::Out), format!("verdict {:?}/{:?}", v.membership_k, v.membership_calk))?;
    within(start, Duration::from_secs(120))?;
    let smallest = space.points.iter().map(|p| p.value).fold(f64::INFINITY, f64::min);
    Ok(format!("time profile decreasing, space profile ≥ {smallest:.3}, 𝕂 In / 𝒦 Out in {:.1?}", start.elapsed()))
}

fn battery() -> Outcome {
    let start = Instant::now();
    let report = run_battery(&VerdictConfig::default(), None).map_err(|e| e.to_string())?;
    let pairs = report.rows.len() + report.space_time.len();
    check(report.violation_count() == 0, format!("{} identity violations", report.violation_count()))?;
    check(report.mismatch_count() == 0, format!("{} ground-truth mismatches", report.mismatch_count()))?;
    check(pairs >= 12, format!("only {pairs} pairs"))?;
    // Label B has no Kato row; criterion 1 covers it.
    for l in [Label::CompoundPoisson, Label::A, Label::C, Label::Aprime, Label::Bprime, Label::Cprime, Label::DGt1H0] {
        check(report.labels_covered.contains(&l), format!("label {l:?} not covered"))?;
    }
    for c in ConditionId::all() {
        check(report.conditions_covered.contains(&c), format!("condition {c:?} not covered"))?;
    }
    Ok(format!("{pairs} pairs, 0 violations, {} labels in {:.1?}", report.labels_covered.len(), start.elapsed()))
}

/// ∫₀¹ P(0 ≤ B_u ≤ 1) du, Simpson in s = √u.
fn brownian_unit_occupation() -> f64 {
    let f = |s: f64| if s == 0.0 { 0.0 } else { s * erf(0.5 / s) };
    let n = 20_000;
    let h = 1.0 / n as f64;
    let inner: f64 = (1..n).map(|i| if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h)).sum();
    (f(0.0) + f(1.0) + inner) * h / 3.0
}

fn monte_carlo() -> Outcome {
    let n = 100_000;
    let cfg = SamplerConfig::default();
    let unit = Potential::Indicator { lo: 0.0, hi: 1.0, value: 1.0 };
    let oracles = [
        ("q≡1", fam("stable", json!({"alpha": 1.5})), Potential::Constant { value: 1.0 }, 1.0),
        ("cp holding", fam("cp", json!({"rate": 1.0})), Potential::Indicator { lo: -0.5, hi: 0.5, value: 1.0 }, 1.0 - (-1.0f64).exp()),
        ("brownian [0,1]", fam("brownian", json!({})), unit, brownian_unit_occupation()),
    ];
    let mut notes = Vec::new();
    for (name, spec, q, exact) in &oracles {
        let start = Instant::now();
        let s = PathSampler::new(spec, &cfg).map_err(|e| e.to_string())?;
        let e = estimate_time_functional(&s, q, 0.0, 1.0, n, 1000).map_err(|e| e.to_string())?;
        check(e.covers(*exact), format!("{name}: {} ± {} misses {exact}", e.value, e.std_error))?;
        within(start, Duration::from_secs(60)).map_err(|m| format!("{name}: {m}"))?;
        notes.push(format!("{name} {:.4}±{:.4}", e.value, e.std_error));
    }
    let exact = [
        fam("brownian", json!({})),
        fam("cp", json!({})),
        fam("stable", json!({"alpha": 0.5})),
        fam("stable", json!({"alpha": 1.5})),
        fam("stable_subordinator", json!({"alpha": 0.5})),
    ];
    for spec in exact {
        let s = PathSampler::new(&spec, &cfg).map_err(|e| e.to_string())?;
        validate_sampler(&s, 1.0, n).map_err(|e| format!("ECF on {spec:?}: {e}"))?;
    }
    let bad = SamplerConfig { exact_stable: false, eps_j: Some(0.5), small_jumps: SmallJumps::Drop, ..cfg };
    let s = PathSampler::new(&fam("stable", json!({"alpha": 1.5})), &bad).map_err(|e| e.to_string())?;
    check(validate_sampler(&s, 1.0, n).is_err(), "negative control passed the ECF test")?;
    Ok(format!("{}; ECF ok on the exact samplers; negative control rejected", notes.join(", ")))
}

fn inequalities() -> Outcome {
    let start = Instant::now();
    let (mut unimodal, mut sandwich, mut harnack) = (0, 0, 0);
    let mut harnack_done: Vec<String> = Vec::new();
    for case in cases() {
        let spec = &case.spec;
        // Each check refuses the instances it does not apply to.
        if let Ok(r) = unimodal_bound_check(&case.q, spec, 0.1, 0.5, f64::INFINITY) {
            check(r.holds && r.slack >= 0.0, format!("{}: {r:?}", case.name))?;
            unimodal += 1;
        }
        if let Ok(ev) = Evaluator::new(spec, &ConditionConfig::default()) {
            for (lambda, t) in [(1.0, 1.0), (2.0, 3.0)] {
                if let Ok(pair) = sandwich_check(&ev, &case.q, lambda, t) {
                    for r in pair {
                        check(r.holds && r.slack >= 0.0, format!("{}: {r:?}", case.name))?;
                    }
                    sandwich += 1;
                }
            }
        }
        let key = format!("{spec:?}");
        if !harnack_done.contains(&key) {
            harnack_done.push(key);
            if let Ok(r) = harnack_check(spec, 1.0) {
                check(r.holds, format!("Harnack on {}: {r:?}", case.name))?;
                harnack += 1;
            }
        }
    }
    check(unimodal > 0 && sandwich > 0 && harnack > 0, format!("applicable instances: unimodal {unimodal}, sandwich {sandwich}, Harnack {harnack}"))?;
    Ok(format!("unimodal bound on {unimodal}, sandwich on {sandwich}, Harnack on {harnack} instances in {:.1?}", start.elapsed()))
}

fn subordinator() -> Outcome {
    let spec = fam("stable_subordinator", json!({"alpha": 0.5}));
    let phi = LaplaceExponent::stable(0.5, 1.0);
    let cfg = ConditionConfig::default();
    for (p, want) in [(0.25, Membership::In), (0.75, Membership::Out)] {
        let q = Potential::Power { center: 0.0, exponent: p, radius: 1.0, side: PowerSide::Right, coeff: 1.0 };
        let v = verdict(&q, &spec, &VerdictConfig::default()).map_err(|e| e.to_string())?;
        check(v.membership_k == want, format!("p={p}: 𝕂 {:?}", v.membership_k))?;
        let prof = subordinator_profile(&q, &phi, &cfg);
        if p < 0.5 {
            for pt in &prof.points {
                // Weight z^{-1/2}/2, so the profile is half of ∫₀^r z^{-p}z^{-1/2}dz.
                let oracle = pt.param.powf(0.5 - p) / (0.5 - p);
                check((pt.value - 0.5 * oracle).abs() < 1e-4 * oracle, format!("p={p} r={}: {} vs {}", pt.param, pt.value, 0.5 * oracle))?;
            }
        } else {
            check(prof.holds() == Some(false), format!("p={p}: weight criterion {:?}", prof.holds()))?;
        }
    }
    Ok("z^{-1/4} In, z^{-3/4} Out, profile matches the integral".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("classification", classification),
        ("kernel oracles", kernels),
        ("comb separates the classes", comb),
        ("battery", battery),
        ("monte carlo", monte_carlo),
        ("inequalities", inequalities),
        ("subordinator weights", subordinator),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
