//! Kato-class membership: numeric time and space conditions, closed-form
//! characterisations per case, and a consolidated verdict.

pub mod battery;
pub mod closed;
pub mod conditions;
pub mod inequalities;
pub mod limit;
pub mod pairing;
pub mod q;
pub mod radial;
pub mod spacetime;
pub mod sup;

use serde::{Deserialize, Serialize};

pub use closed::{closed_form_characterization, ClosedFormResult};
pub use conditions::{ConditionConfig, ConditionId, Evaluator, KatoClass, Profile, ProfilePoint};
pub use limit::{Limit, LimitRule};
pub use pairing::{pairing, PairKernel};
pub use q::{Potential, PowerSide};
pub use sup::{sup_pairing, SupConfig, SupResult, SupStatus};

use crate::classify::{classify, Classification, Label, RegularityConfig};
use crate::levy::{ProcessSpec, SCHEMA_VERSION};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Membership {
    In,
    Out,
    Inconclusive,
}

impl Membership {
    pub fn from_holds(h: Option<bool>) -> Membership {
        match h {
            Some(true) => Membership::In,
            Some(false) => Membership::Out,
            None => Membership::Inconclusive,
        }
    }

    pub fn decided(self) -> bool {
        self != Membership::Inconclusive
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictConfig {
    pub conditions: Vec<ConditionId>,
    pub numeric: ConditionConfig,
    /// Discount used for the classification.
    pub classify_lambda: f64,
}

impl Default for VerdictConfig {
    fn default() -> Self {
        VerdictConfig { conditions: ConditionId::all().to_vec(), numeric: ConditionConfig::default(), classify_lambda: 1.0 }
    }
}

/// A numeric profile that disagrees with the final membership of its class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub condition: ConditionId,
    pub lambda: Option<f64>,
    #[serde(default, with = "crate::util::opt_float")]
    pub t: Option<f64>,
    pub decision: Limit,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KatoVerdict {
    pub schema_version: u32,
    pub label: Label,
    pub profiles: Vec<Profile>,
    pub membership_k: Membership,
    pub membership_calk: Membership,
    pub characterization_used: String,
    /// Whether 𝒦 = 𝕂 is expected for this label (0 not regular for itself).
    pub classes_expected_equal: bool,
    pub cross_checks: Vec<CrossCheck>,
    pub lattice_violations: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl KatoVerdict {
    pub fn definitive(&self) -> bool {
        self.membership_k.decided() && self.membership_calk.decided()
    }

    pub fn profile(&self, id: ConditionId) -> Option<&Profile> {
        self.profiles.iter().find(|p| p.condition == id)
    }
}

/// The numeric stand-in spec for a label: the spec itself in d = 1, Z for products.
fn numeric_spec(spec: &ProcessSpec) -> Option<&ProcessSpec> {
    match spec {
        ProcessSpec::Product(p) => Some(&p.z),
        s if s.dim() == 1 => Some(s),
        _ => None,
    }
}

/// Classify, dispatch to the closed forms, run numeric profiles, and check the
/// consistency lattice 𝒦 ⊆ 𝕂 ⊆ uniform L¹.
pub fn verdict(q: &Potential, spec: &ProcessSpec, cfg: &VerdictConfig) -> Result<KatoVerdict> {
    q.validate()?;
    let class = classify(spec, cfg.classify_lambda, &RegularityConfig::default())?;
    verdict_with_class(q, spec, &class, cfg)
}

pub fn verdict_with_class(q: &Potential, spec: &ProcessSpec, class: &Classification, cfg: &VerdictConfig) -> Result<KatoVerdict> {
    let mut notes = Vec::new();
    let closed = if cfg.conditions.contains(&ConditionId::ClosedForm) || cfg.conditions.contains(&ConditionId::UniformL1) || class.label == Label::CompoundPoisson {
        Some(closed_form_characterization(q, class, spec, &cfg.numeric))
    } else {
        None
    };
    let mut profiles: Vec<Profile> = closed.as_ref().map(|c| c.profiles.clone()).unwrap_or_default();
    let mut k = closed.as_ref().map(|c| c.membership_k).unwrap_or(Membership::Inconclusive);
    let mut calk = closed.as_ref().map(|c| c.membership_calk).unwrap_or(Membership::Inconclusive);
    let mut used = closed.as_ref().map(|c| c.justification.clone()).unwrap_or_default();

    let numeric_ids: Vec<ConditionId> = cfg.conditions.iter().copied().filter(|c| !matches!(c, ConditionId::ClosedForm | ConditionId::UniformL1)).collect();
    let mut numeric = Vec::new();
    if class.label == Label::DGt1H0 {
        match radial::radial_profile(q, spec, &cfg.numeric) {
            Ok(p) => {
                let m = Membership::from_holds(p.holds());
                if !k.decided() {
                    k = m;
                    calk = m;
                    used = format!("d > 1 under (H0): 𝒦 = 𝕂 via the radial {} weight", radial::weight_name(spec).unwrap_or("potential"));
                }
                profiles.push(p);
            }
            Err(e) => notes.push(format!("radial weights unavailable: {e}")),
        }
    } else if !numeric_ids.is_empty() {
        if let Some(s1) = numeric_spec(spec) {
            let ev = Evaluator::new(s1, &cfg.numeric)?;
            numeric = ev.run(q, &numeric_ids)?;
        } else {
            notes.push("no one-dimensional kernel for this spec; numeric conditions skipped".into());
        }
    }

    // Numeric decisions fill what the closed forms leave open.
    let time = numeric.iter().find(|p| p.condition == ConditionId::TimeSmall).map(|p| Membership::from_holds(p.holds()));
    let space = numeric
        .iter()
        .filter(|p| p.condition == ConditionId::SpaceSmall)
        .min_by(|a, b| (a.lambda.unwrap_or(1.0) - 1.0).abs().partial_cmp(&(b.lambda.unwrap_or(1.0) - 1.0).abs()).unwrap())
        .map(|p| Membership::from_holds(p.holds()));
    if !k.decided() || !calk.decided() {
        let coincide = class.classes_coincide();
        let (mut nk, mut nc) = (time.unwrap_or(Membership::Inconclusive), space.unwrap_or(Membership::Inconclusive));
        if coincide {
            if !nk.decided() {
                nk = nc;
            }
            if !nc.decided() {
                nc = nk;
            }
        }
        if !k.decided() {
            k = nk;
        }
        if !calk.decided() {
            calk = nc;
        }
        let how = if numeric.is_empty() { "no numeric conditions were run" } else { "numeric: 𝕂 from the time condition, 𝒦 from the space condition" };
        used = if used.is_empty() { how.to_string() } else { format!("{used}; {how}") };
    }

    let cross_checks = numeric
        .iter()
        .filter(|p| p.limit != Limit::Inconclusive)
        .map(|p| {
            let target = match p.condition.class() {
                KatoClass::Time => k,
                _ => calk,
            };
            let holds = p.limit == Limit::Zero;
            let agrees = match target {
                Membership::In => holds,
                Membership::Out => !holds,
                Membership::Inconclusive => true,
            };
            CrossCheck { condition: p.condition, lambda: p.lambda, t: p.t, decision: p.limit, agrees }
        })
        .collect();
    profiles.extend(numeric);

    let mut violations = Vec::new();
    if calk == Membership::In && k == Membership::Out {
        violations.push("𝒦 In but 𝕂 Out".into());
    }
    if let Some(u) = profiles.iter().find(|p| p.condition == ConditionId::UniformL1) {
        if k == Membership::In && u.holds() == Some(false) && class.label != Label::CompoundPoisson {
            violations.push("𝕂 In but q is not uniformly locally integrable".into());
        }
    }
    if class.classes_coincide() && k.decided() && calk.decided() && k != calk {
        violations.push(format!("label {} forces 𝒦 = 𝕂, got 𝕂 {:?} / 𝒦 {:?}", class.label.as_str(), k, calk));
    }
    if class.label == Label::CompoundPoisson {
        if calk == Membership::In && !q.is_zero() {
            violations.push("compound Poisson with q ≠ 0 in 𝒦".into());
        }
        if (k == Membership::In) != q.bounded() {
            violations.push("compound Poisson: 𝕂 must be exactly the bounded functions".into());
        }
    }

    Ok(KatoVerdict {
        schema_version: SCHEMA_VERSION,
        label: class.label,
        profiles,
        membership_k: k,
        membership_calk: calk,
        characterization_used: used,
        classes_expected_equal: class.classes_coincide(),
        cross_checks,
        lattice_violations: violations,
        notes,
    })
}
