//! Case-by-case characterisations that need no process kernel.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::conditions::{ConditionId, ConditionConfig, Profile};
use super::pairing::{pairing, window, PairKernel};
use super::q::Potential;
use super::sup::{sup_of, sup_pairing, SupStatus};
use super::Membership;
use crate::classify::{Classification, Label};
use crate::levy::{LaplaceExponent, ProcessSpec};
use crate::potential::{KernelTable, TableConfig};

/// Outcome of the closed-form dispatch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormResult {
    pub membership_k: Membership,
    pub membership_calk: Membership,
    pub justification: String,
    pub profiles: Vec<Profile>,
}

/// r ↦ sup_x ∫_{B(x,r)}|q| (one-dimensional Lebesgue measure).
pub fn lebesgue_profile(q: &Potential, cfg: &ConditionConfig) -> Profile {
    let rs = cfg.r_grid.clone();
    let sups = rs.iter().map(|&r| sup_pairing(q, &PairKernel::Lebesgue, r, &cfg.sup)).collect();
    Profile::from_sups(ConditionId::ClosedForm, "r", None, None, &rs, sups, &cfg.limit)
}

/// sup_x ∫_{B(x,1)}|q| as a one-point profile; the condition "holds" when finite.
pub fn uniform_l1(q: &Potential, cfg: &ConditionConfig) -> Profile {
    let s = sup_pairing(q, &PairKernel::Lebesgue, 1.0, &cfg.sup);
    let mut p = Profile::from_sups(ConditionId::UniformL1, "r", None, None, &[1.0], vec![s.clone()], &cfg.limit);
    let (limit, reason) = if s.value.is_infinite() || s.status == SupStatus::Divergent {
        (super::limit::Limit::Positive, "sup of unit-ball integrals is infinite".to_string())
    } else if s.status == SupStatus::Exhausted {
        (super::limit::Limit::Inconclusive, "search exhausted".to_string())
    } else {
        (super::limit::Limit::Zero, format!("sup of unit-ball integrals = {:.4e}", s.value))
    };
    // Here "Zero" encodes "finite", so `holds()` reads as "q is uniformly locally integrable".
    p.limit = limit;
    p.reason = reason;
    p
}

/// w(z) = φ′(1/z)/(z²φ(1/z)²) on (0, 1] as a one-sided table.
pub fn weight_kernel(phi: &LaplaceExponent) -> PairKernel {
    let phi = phi.clone();
    let w = move |z: f64| {
        if z > 0.0 && z <= 1.0 {
            let u = 1.0 / z;
            let f = phi.eval(u);
            phi.deriv(u) / (z * z * f * f)
        } else {
            0.0
        }
    };
    let cfg = TableConfig { z_min: 1e-8, z_max: 1.0, per_decade: 40 };
    PairKernel::Table(Arc::new(KernelTable::from_fn(w, f64::NAN, &cfg)))
}

/// r ↦ sup_x ∫_x^{x+r}|q(z)|w(z−x)dz, the subordinator criterion for 𝕂.
pub fn subordinator_profile(q: &Potential, phi: &LaplaceExponent, cfg: &ConditionConfig) -> Profile {
    let k = weight_kernel(phi);
    let rs = cfg.r_grid.clone();
    let sups = rs
        .iter()
        .map(|&r| sup_of(|x| window(q, &k, x, 0.0, r), q, r, &cfg.sup))
        .collect();
    Profile::from_sups(ConditionId::ClosedForm, "r", None, None, &rs, sups, &cfg.limit)
}

fn from_holds(h: Option<bool>) -> Membership {
    match h {
        Some(true) => Membership::In,
        Some(false) => Membership::Out,
        None => Membership::Inconclusive,
    }
}

/// Closed-form dispatch on the classification label. Case A without a
/// subordinator structure returns Inconclusive: it is decided numerically.
/// For primed labels q is read along V.
pub fn closed_form_characterization(q: &Potential, class: &Classification, spec: &ProcessSpec, cfg: &ConditionConfig) -> ClosedFormResult {
    let along = match class.label {
        Label::Aprime | Label::Bprime | Label::Cprime => " along V",
        _ => "",
    };
    match class.label {
        Label::CompoundPoisson => {
            let calk = if q.is_zero() { Membership::In } else { Membership::Out };
            let k = if q.bounded() { Membership::In } else { Membership::Out };
            ClosedFormResult {
                membership_k: k,
                membership_calk: calk,
                justification: "compound Poisson: 𝒦 = {0}, 𝕂 = bounded functions".into(),
                profiles: vec![uniform_l1(q, cfg)],
            }
        }
        Label::B | Label::Bprime => {
            let l = lebesgue_profile(q, cfg);
            let m = from_holds(l.holds());
            ClosedFormResult {
                membership_k: m,
                membership_calk: m,
                justification: format!("case B{along}: both classes are {{lim_r sup_x ∫_B(x,r)|q| = 0}}"),
                profiles: vec![l, uniform_l1(q, cfg)],
            }
        }
        Label::C | Label::Cprime => {
            let l = lebesgue_profile(q, cfg);
            let u = uniform_l1(q, cfg);
            ClosedFormResult {
                membership_k: from_holds(u.holds()),
                membership_calk: from_holds(l.holds()),
                justification: format!("case C{along}: 𝒦 by the Lebesgue criterion, 𝕂 = uniformly locally integrable"),
                profiles: vec![l, u],
            }
        }
        Label::A | Label::Aprime => {
            let u = uniform_l1(q, cfg);
            if let Some(phi) = spec.subordinator() {
                if phi.has_zero_drift() && phi.is_unbounded() && phi.deriv(1.0).is_finite() {
                    let p = subordinator_profile(q, phi, cfg);
                    let m = from_holds(p.holds());
                    return ClosedFormResult {
                        membership_k: m,
                        membership_calk: m,
                        justification: "subordinator: 𝕂 = 𝒦 via the weight φ′(1/z)/(z²φ(1/z)²)".into(),
                        profiles: vec![p, u],
                    };
                }
            }
            ClosedFormResult {
                membership_k: Membership::Inconclusive,
                membership_calk: Membership::Inconclusive,
                justification: format!("case A{along}: 𝒦 = 𝕂, decided by the numeric conditions"),
                profiles: vec![u],
            }
        }
        Label::DGt1H0 => ClosedFormResult {
            membership_k: Membership::Inconclusive,
            membership_calk: Membership::Inconclusive,
            justification: "d > 1 under (H0): 𝒦 = 𝕂, decided by radial weights".into(),
            profiles: vec![],
        },
    }
}

/// Convenience for tests: ∫_{B(x,r)}|q|.
pub fn ball_integral(q: &Potential, x: f64, r: f64) -> f64 {
    pairing(q, &PairKernel::Lebesgue, x, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kato::q::PowerSide;

    #[test]
    fn subordinator_weight_threshold() {
        let phi = LaplaceExponent::stable(0.5, 1.0);
        let cfg = ConditionConfig::default();
        let q = |p: f64| Potential::Power { center: 0.0, exponent: p, radius: 1.0, side: PowerSide::Right, coeff: 1.0 };
        let p = subordinator_profile(&q(0.25), &phi, &cfg);
        // ∫₀^r z^{-1/4}·z^{-1/2}/2 dz = 2r^{1/4}
        for pt in &p.points {
            let exact = 2.0 * pt.param.powf(0.25);
            assert!((pt.value - exact).abs() < 1e-4 * exact, "{pt:?} vs {exact}");
        }
        assert_eq!(p.holds(), Some(true));
        assert_eq!(subordinator_profile(&q(0.75), &phi, &cfg).holds(), Some(false));
    }

    #[test]
    fn comb_fails_lebesgue_but_is_uniformly_integrable() {
        let cfg = ConditionConfig::default();
        assert_eq!(lebesgue_profile(&Potential::comb(), &cfg).holds(), Some(false));
        let u = uniform_l1(&Potential::comb(), &cfg);
        assert_eq!(u.holds(), Some(true));
        // A window of length 2 covers at most blocks k and k+1 and 3/4 of block k−1.
        assert!((u.points[0].value - 2.75).abs() < 1e-3, "{:?}", u.points[0]);
    }
}
