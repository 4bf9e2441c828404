//! Built-in ground-truth suite: (spec, q) pairs with known memberships, the
//! equivalences that must hold between numeric conditions, and the
//! space-time embedding demo.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::conditions::{ConditionConfig, ConditionId};
use super::limit::Limit;
use super::q::{Potential, PowerSide};
use super::spacetime::{space_time_demo, SpaceTimeReport};
use super::{verdict, KatoVerdict, Membership, VerdictConfig};
use crate::classify::Label;
use crate::levy::{family, spec_from_value, ProcessSpec, SCHEMA_VERSION};
use crate::Result;

#[derive(Debug, Clone)]
pub struct BatteryCase {
    pub name: &'static str,
    pub spec: ProcessSpec,
    pub q: Potential,
    pub expected_k: Membership,
    pub expected_calk: Membership,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatteryRow {
    pub name: String,
    pub label: Label,
    pub expected_k: Membership,
    pub expected_calk: Membership,
    pub verdict: KatoVerdict,
    /// Verdict equals the ground truth.
    pub matches: bool,
    /// Broken equivalences between numeric conditions, plus lattice violations.
    pub violations: Vec<String>,
    /// Numeric profiles that came out Inconclusive.
    pub undecided: Vec<String>,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceTimeRow {
    pub name: String,
    pub expected: Membership,
    pub report: SpaceTimeReport,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatteryReport {
    pub schema_version: u32,
    pub rows: Vec<BatteryRow>,
    pub space_time: Vec<SpaceTimeRow>,
    pub labels_covered: Vec<Label>,
    pub conditions_covered: Vec<ConditionId>,
}

impl BatteryReport {
    pub fn violation_count(&self) -> usize {
        self.rows.iter().map(|r| r.violations.len()).sum::<usize>() + self.space_time.iter().filter(|r| !r.report.agree).count()
    }

    pub fn mismatch_count(&self) -> usize {
        self.rows.iter().filter(|r| !r.matches).count() + self.space_time.iter().filter(|r| !r.matches).count()
    }

    pub fn all_passed(&self) -> bool {
        self.violation_count() == 0 && self.mismatch_count() == 0
    }
}

fn power(exponent: f64, side: PowerSide) -> Potential {
    Potential::Power { center: 0.0, exponent, radius: 1.0, side, coeff: 1.0 }
}

fn one() -> Potential {
    Potential::Constant { value: 1.0 }
}

fn fam(name: &str, p: serde_json::Value) -> ProcessSpec {
    family(name, &p).expect("battery spec")
}

pub fn cases() -> Vec<BatteryCase> {
    use Membership::{In, Out};
    let brownian = fam("brownian", json!({}));
    let stable_half = fam("stable", json!({"alpha": 0.5}));
    let cauchy = fam("stable", json!({"alpha": 1.0}));
    let stable_15 = fam("stable", json!({"alpha": 1.5}));
    let drift_sub = fam("stable_subordinator", json!({"alpha": 0.5, "drift": 1.0}));
    let sub_half = fam("stable_subordinator", json!({"alpha": 0.5}));
    let cp = fam("cp", json!({"rate": 1.0}));
    let dyadic = fam("dyadic", json!({"m": 1.0, "beta": 1.0, "delta": 1.0, "alpha": 1.5}));
    let log_q = Potential::Log { center: 0.0, radius: 0.5, coeff: 1.0 };
    let unit = Potential::Indicator { lo: 0.0, hi: 1.0, value: 1.0 };
    let ball = Potential::Indicator { lo: -1.0, hi: 1.0, value: 1.0 };
    let product = |z: serde_json::Value| {
        spec_from_value(&json!({"kind": "product", "dimension": 2, "direction": [1, 0], "y": [{"at": [0, 1], "mass": 1}], "z": z})).expect("product spec")
    };
    let c = |name, spec: &ProcessSpec, q: Potential, k, calk| BatteryCase { name, spec: spec.clone(), q, expected_k: k, expected_calk: calk };
    vec![
        c("brownian+comb", &brownian, Potential::comb(), In, Out),
        c("brownian+one", &brownian, one(), In, In),
        c("brownian+inv_sqrt", &brownian, power(0.5, PowerSide::Both), In, In),
        c("brownian+indicator", &brownian, unit.clone(), In, In),
        c("stable0.5+comb", &stable_half, Potential::comb(), Out, Out),
        c("stable0.5+one", &stable_half, one(), In, In),
        c("cauchy+comb", &cauchy, Potential::comb(), Out, Out),
        c("stable1.5+comb", &stable_15, Potential::comb(), In, Out),
        c("stable1.5+log", &stable_15, log_q.clone(), In, In),
        c("drift_subordinator+comb", &drift_sub, Potential::comb(), Out, Out),
        c("drift_subordinator+log", &drift_sub, log_q, In, In),
        c("cp+one", &cp, one(), In, Out),
        c("cp+indicator", &cp, unit, In, Out),
        c("dyadic(1.5)+comb", &dyadic, Potential::comb(), In, Out),
        c("stable_sub0.5+z^-1/4", &sub_half, power(0.25, PowerSide::Right), In, In),
        c("stable_sub0.5+z^-3/4", &sub_half, power(0.75, PowerSide::Right), Out, Out),
        c("product(brownian)+comb", &product(json!({"kind": "family", "family": "brownian"})), Potential::comb(), In, Out),
        c("product(stable0.5)+one", &product(json!({"kind": "family", "family": "stable", "alpha": 0.5})), one(), In, In),
        c(
            "space_time(cp)+one",
            &spec_from_value(&json!({"kind": "space_time", "x": {"kind": "family", "family": "cp"}})).expect("space-time spec"),
            one(),
            In,
            In,
        ),
        c("brownian3d+ball", &fam("brownian", json!({"dimension": 3})), ball.clone(), In, In),
        c("brownian3d+|x|^-2", &fam("brownian", json!({"dimension": 3})), power(2.0, PowerSide::Both), Out, Out),
        c("brownian2d+ball", &fam("brownian", json!({"dimension": 2})), ball, In, In),
        c("cauchy3d+|x|^-1/2", &fam("stable", json!({"alpha": 1.0, "dimension": 3})), power(0.5, PowerSide::Both), In, In),
    ]
}

fn decision(l: Limit) -> &'static str {
    match l {
        Limit::Zero => "holds",
        Limit::Positive => "fails",
        Limit::Inconclusive => "inconclusive",
    }
}

/// Equivalences between numeric profiles on one verdict.
pub fn identity_violations(v: &KatoVerdict) -> (Vec<String>, Vec<String>) {
    let mut bad: Vec<String> = v.lattice_violations.clone();
    let mut undecided = Vec::new();
    let describe = |p: &super::Profile| format!("{:?}(λ={:?}, t={:?})", p.condition, p.lambda, p.t);
    let group = |ids: &[ConditionId]| v.profiles.iter().filter(|p| ids.contains(&p.condition)).collect::<Vec<_>>();
    for ids in [
        &[ConditionId::TimeSmall, ConditionId::TimeSpace, ConditionId::DiscountedTime, ConditionId::LargeLambda][..],
        &[ConditionId::SpaceSmall, ConditionId::TruncSpace][..],
    ] {
        let ps = group(ids);
        for p in &ps {
            if p.limit == Limit::Inconclusive {
                undecided.push(format!("{}: {}", describe(p), p.reason));
            }
        }
        let decided: Vec<_> = ps.iter().filter(|p| p.limit != Limit::Inconclusive).collect();
        if let Some(first) = decided.first() {
            for p in &decided[1..] {
                if p.limit != first.limit {
                    bad.push(format!("{} {} but {} {}", describe(first), decision(first.limit), describe(p), decision(p.limit)));
                }
            }
        }
    }
    if !v.membership_k.decided() || !v.membership_calk.decided() {
        undecided.push(format!("verdict 𝕂 {:?} / 𝒦 {:?}", v.membership_k, v.membership_calk));
    }
    (bad, undecided)
}

/// Runs every case whose name contains `filter` (all when None).
pub fn run_battery(cfg: &VerdictConfig, filter: Option<&str>) -> Result<BatteryReport> {
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    let mut conditions = Vec::new();
    for case in cases() {
        if let Some(f) = filter {
            if !case.name.contains(f) {
                continue;
            }
        }
        let start = Instant::now();
        let v = verdict(&case.q, &case.spec, cfg)?;
        let (violations, undecided) = identity_violations(&v);
        if !labels.contains(&v.label) {
            labels.push(v.label);
        }
        for p in &v.profiles {
            if !conditions.contains(&p.condition) {
                conditions.push(p.condition);
            }
        }
        rows.push(BatteryRow {
            name: case.name.into(),
            label: v.label,
            expected_k: case.expected_k,
            expected_calk: case.expected_calk,
            matches: v.membership_k == case.expected_k && v.membership_calk == case.expected_calk,
            verdict: v,
            violations,
            undecided,
            seconds: start.elapsed().as_secs_f64(),
        });
    }
    let mut space_time = Vec::new();
    if filter.map_or(true, |f| "space_time_demo".contains(f) || f.contains("space_time")) {
        for (name, p, expected) in [("f=|s|^-1/2", 0.5, Membership::In), ("f=|s|^-1", 1.0, Membership::Out)] {
            let report = space_time_demo(&power(p, PowerSide::Both), &cfg.numeric);
            let got = Membership::from_holds(report.whole_line.holds());
            space_time.push(SpaceTimeRow { name: name.into(), expected, matches: got == expected && report.agree, report });
        }
    }
    Ok(BatteryReport { schema_version: SCHEMA_VERSION, rows, space_time, labels_covered: labels, conditions_covered: conditions })
}

/// Default configuration for battery runs.
pub fn battery_config() -> VerdictConfig {
    VerdictConfig { numeric: ConditionConfig::default(), ..VerdictConfig::default() }
}
