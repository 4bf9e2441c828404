//! Time-dependent potentials q(s, x) = f(s)g(x) through the space-time process
//! (t, X_t) with X Brownian (ψ = ξ²) and g = 1_{[−1,1]}.
//!
//! Whole-line form: sup_{s,x} ∫₀^t |f(s+u)| P(|x + X_u| ≤ 1) du → 0 as t → 0.
//! Ball form: sup_{s,x} ∫₀^r |f(s+u)| P(|X_u| < r) du → 0 as r → 0 (for r ≤ 1
//! the ball around x lies in the support of g at x = 0).
//! In both, x = 0 maximises because g and the Gaussian law are symmetric decreasing.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use statrs::function::erf::erf;

use super::conditions::{ConditionConfig, ConditionId, Profile};
use super::limit::Limit;
use super::pairing::{window, PairKernel};
use super::q::Potential;
use super::sup::sup_of;
use crate::potential::{KernelTable, TableConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceTimeReport {
    pub whole_line: Profile,
    pub ball: Profile,
    pub agree: bool,
}

/// P(|B_u| < a) for ψ = ξ² (variance 2u).
fn stay(a: f64, u: f64) -> f64 {
    if u <= 0.0 { 1.0 } else { erf(a / (2.0 * u.sqrt())) }
}

fn time_kernel(horizon: f64, radius: f64) -> PairKernel {
    let cfg = TableConfig { z_min: 1e-8 * horizon, z_max: horizon, per_decade: 40 };
    let k = move |u: f64| if u >= 0.0 && u <= horizon { stay(radius, u) } else { 0.0 };
    PairKernel::Table(Arc::new(KernelTable::from_fn(k, f64::NAN, &cfg)))
}

pub fn space_time_demo(f: &Potential, cfg: &ConditionConfig) -> SpaceTimeReport {
    let ts = cfg.t_grid.clone();
    let sups = ts
        .iter()
        .map(|&t| {
            let k = time_kernel(t, 1.0);
            sup_of(|s| window(f, &k, s, 0.0, t), f, t, &cfg.sup)
        })
        .collect();
    let whole_line = Profile::from_sups(ConditionId::TimeSmall, "t", Some(0.0), None, &ts, sups, &cfg.limit);
    let rs = cfg.r_grid.clone();
    let sups = rs
        .iter()
        .map(|&r| {
            let k = time_kernel(r, r);
            sup_of(|s| window(f, &k, s, 0.0, r), f, r, &cfg.sup)
        })
        .collect();
    let ball = Profile::from_sups(ConditionId::TimeSpace, "r", Some(0.0), None, &rs, sups, &cfg.limit);
    let agree = whole_line.limit == ball.limit && whole_line.limit != Limit::Inconclusive;
    SpaceTimeReport { whole_line, ball, agree }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kato::q::PowerSide;

    fn f(p: f64) -> Potential {
        Potential::Power { center: 0.0, exponent: p, radius: 1.0, side: PowerSide::Both, coeff: 1.0 }
    }

    #[test]
    fn inverse_square_root_in_time_is_kato() {
        let r = space_time_demo(&f(0.5), &ConditionConfig::default());
        assert!(r.agree);
        assert_eq!(r.whole_line.limit, Limit::Zero);
        // Upper bound: sup_s ∫₀^t |s+u|^{-1/2} du = 2√(2t) at s = −t/2.
        for p in &r.whole_line.points {
            assert!(p.value <= 2.0 * (2.0 * p.param).sqrt() * (1.0 + 1e-6), "{p:?}");
        }
    }

    #[test]
    fn inverse_time_is_not() {
        let r = space_time_demo(&f(1.0), &ConditionConfig::default());
        assert!(r.agree);
        assert_eq!(r.ball.limit, Limit::Positive);
    }
}
