//! Numerical checks of inequalities between the Kato functionals: the
//! unimodal upper bound and its lower companion in d = 3, the resolvent
//! sandwich, ball doubling, and the Harnack bound on case-C kernels.

use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use super::conditions::Evaluator;
use super::pairing::{pairing, window, PairKernel};
use super::q::{Potential, PowerSide};
use super::sup::{sup_of, sup_pairing};
use crate::classify::{classify, hitting_transform, Label, RegularityConfig};
use crate::levy::{psi_star_inverse, sphere_area, ProcessSpec};
use crate::potential::potential_density;
use crate::quad::{integrate_singular_ends, Tol};
use crate::util::linspace;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub name: String,
    pub instance: String,
    pub lhs: f64,
    pub rhs: f64,
    /// rhs − lhs (nonnegative when the inequality holds).
    pub slack: f64,
    pub holds: bool,
}

impl InequalityReport {
    fn new(name: &str, instance: String, lhs: f64, rhs: f64) -> Self {
        // ∞ ≤ ∞ holds in the extended reals and is tight.
        let slack = if lhs == f64::INFINITY && rhs == f64::INFINITY { 0.0 } else { rhs - lhs };
        // Both sides carry ~1e-8 relative quadrature error.
        let tol = if lhs.is_finite() && rhs.is_finite() { 1e-7 * rhs.abs().max(lhs.abs()) } else { 0.0 };
        let holds = slack >= -tol;
        InequalityReport { name: name.into(), instance, lhs, rhs, slack, holds }
    }
}

/// Closed-form isotropic laws in d = 3 with ψ(ξ) = c|ξ|^α, α ∈ {1, 2}.
#[derive(Debug, Clone, Copy)]
pub struct Unimodal3 {
    pub alpha: f64,
    pub c: f64,
}

impl Unimodal3 {
    pub fn from_spec(spec: &ProcessSpec) -> Result<Unimodal3> {
        let alpha = super::radial::isotropic_index(spec).ok_or_else(|| Error::NotUnimodal("need an isotropic Brownian or stable spec".into()))?;
        if spec.dim() != 3 || !(alpha == 2.0 || alpha == 1.0) {
            return Err(Error::NotUnimodal("closed forms exist for d = 3 Brownian motion and Cauchy process".into()));
        }
        let c = spec.psi(&[1.0, 0.0, 0.0]).re;
        Ok(Unimodal3 { alpha, c })
    }

    /// G_t(ρ) = ∫₀^t p(u, ρ) du, t ≤ ∞.
    pub fn green(&self, t: f64, rho: f64) -> f64 {
        let c = self.c;
        if self.alpha == 2.0 {
            let g = 1.0 / (4.0 * PI * c * rho);
            if t.is_infinite() { g } else { g * erfc(rho / (4.0 * c * t).sqrt()) }
        } else {
            let g = 1.0 / (2.0 * PI * PI * c);
            if t.is_infinite() { g / (rho * rho) } else { g * (1.0 / (rho * rho) - 1.0 / ((c * t).powi(2) + rho * rho)) }
        }
    }

    /// Exponent of G near 0 (−1 for Brownian, −2 for Cauchy).
    fn green_exponent(&self) -> f64 {
        self.alpha - 3.0
    }
}

fn symmetric_decreasing(q: &Potential) -> bool {
    matches!(q, Potential::Indicator { lo, .. } if *lo <= 0.0)
        || matches!(q, Potential::Power { center, exponent, side, .. } if *center == 0.0 && *exponent >= 0.0 && *side != PowerSide::Left)
}

/// |S²|∫₀^R q₁(ρ)g(ρ)ρ²dρ: the x = 0 value, which is the supremum for
/// symmetric decreasing q and radially decreasing g.
fn centered(q: &Potential, g: impl Fn(f64) -> f64, g_exp: f64, radius: f64) -> f64 {
    let q_exp = q.singularities().iter().filter(|s| s.at == 0.0).map(|s| -s.exponent).fold(0.0, f64::min);
    if q_exp + g_exp + 2.0 <= -1.0 + 1e-9 {
        return f64::INFINITY;
    }
    let (_, hi) = q.support().unwrap_or((0.0, f64::INFINITY));
    let top = radius.min(hi);
    let tol = Tol::new(1e-14, 1e-9);
    sphere_area(3) * integrate_singular_ends(|rho| q.eval(rho) * g(rho) * rho * rho, 0.0, top, true, false, tol).value
}

/// sup_x∫₀^tP_u|q| ≤ (1 + t/(|B(0,1/2)|r^dG_{t0}(r)))·sup_x∫_{B(x,r)}|q|G_{t0} in d = 3.
pub fn unimodal_bound_check(q: &Potential, spec: &ProcessSpec, t: f64, r: f64, t0: f64) -> Result<InequalityReport> {
    let u = Unimodal3::from_spec(spec)?;
    if !symmetric_decreasing(q) {
        return Err(Error::InvalidPotential("the bound check needs a radially decreasing q centred at 0".into()));
    }
    let lhs = centered(q, |rho| u.green(t, rho), u.green_exponent(), f64::INFINITY);
    let ball = centered(q, |rho| u.green(t0, rho), u.green_exponent(), r);
    let half_ball = 4.0 / 3.0 * PI * 0.125;
    let rhs = (1.0 + t / (half_ball * r.powi(3) * u.green(t0, r))) * ball;
    Ok(InequalityReport::new("unimodal upper bound", format!("α={} t={t} r={r} t0={t0}", u.alpha), lhs, rhs))
}

/// Lower bound c·sup_x∫_{B(x,r)}|q|G⁰ ≤ sup_x∫₀^tP_u|q| with r = 1/(ψ*)⁻(1/t);
/// returns the fitted constant c = time / ball.
pub fn unimodal_lower_constant(q: &Potential, spec: &ProcessSpec, t: f64) -> Result<(f64, f64, f64)> {
    let u = Unimodal3::from_spec(spec)?;
    if !symmetric_decreasing(q) {
        return Err(Error::InvalidPotential("the bound check needs a radially decreasing q centred at 0".into()));
    }
    let r = 1.0 / psi_star_inverse(spec, 1.0 / t);
    let time = centered(q, |rho| u.green(t, rho), u.green_exponent(), f64::INFINITY);
    let ball = centered(q, |rho| u.green(f64::INFINITY, rho), u.green_exponent(), r);
    Ok((time / ball, time, ball))
}

/// (1 − e^{-1})·sup G_t^λ|q| ≤ sup G⁰_{1/λ}|q| ≤ e·sup G_t^λ|q| for t ≥ 1/λ.
pub fn sandwich_check(ev: &Evaluator, q: &Potential, lambda: f64, t: f64) -> Result<[InequalityReport; 2]> {
    if !(t >= 1.0 / lambda) {
        return Err(Error::InvalidSpec("the sandwich needs t ≥ 1/λ".into()));
    }
    let s_lt = ev.whole_line_sup(q, lambda, t)?.value;
    let s_0 = ev.whole_line_sup(q, 0.0, 1.0 / lambda)?.value;
    let inst = format!("λ={lambda} t={t}");
    Ok([
        InequalityReport::new("sandwich lower", inst.clone(), (1.0 - (-1.0f64).exp()) * s_lt, s_0),
        InequalityReport::new("sandwich upper", inst, s_0, E * s_lt),
    ])
}

/// sup_{x,y}∫_{B(x,r)}|q|G_t^λ(y,dz) ≤ sup_x∫_{B(x,2r)}|q|G_t^λ(x,dz).
pub fn doubling_check(ev: &Evaluator, q: &Potential, lambda: f64, t: f64, r: f64) -> Result<InequalityReport> {
    let k = ev.kernel(lambda, t, ev.cfg.z_max_full)?;
    let rhs = sup_pairing(q, &k, 2.0 * r, &ev.cfg.sup).value;
    let lhs = if let PairKernel::Discrete(_) = k {
        // Atoms: shift the ball relative to the start point over a grid.
        let offsets = linspace(-2.0 * r, 2.0 * r, 33);
        offsets
            .iter()
            .map(|&o| sup_of(|y| discrete_ball(q, &k, y, y + o, r), q, 2.0 * r, &ev.cfg.sup).value)
            .fold(0.0, f64::max)
    } else {
        let offsets = linspace(-2.0 * r, 2.0 * r, 33);
        offsets
            .iter()
            .map(|&o| sup_of(|y| window(q, &k, y, o - r, o + r), q, 2.0 * r, &ev.cfg.sup).value)
            .fold(0.0, f64::max)
    };
    Ok(InequalityReport::new("ball doubling", format!("λ={lambda} t={t} r={r}"), lhs, rhs))
}

/// ∫_{B(x,r)}|q(z)|G(y, dz) for an atomic kernel started at y.
fn discrete_ball(q: &Potential, k: &PairKernel, y: f64, x: f64, r: f64) -> f64 {
    let PairKernel::Discrete(d) = k else { return pairing(q, k, y, r) };
    d.components
        .iter()
        .map(|c| match *c {
            crate::potential::Component::Atom { at, weight } => {
                let z = y + at;
                if (z - x).abs() < r { weight * q.eval(z) } else { 0.0 }
            }
            crate::potential::Component::Normal { .. } => 0.0,
        })
        .sum()
}

/// Case C: G^λ(x) ≤ M·G^λ(y) for |x − y| ≤ 1 with M = sup_{|z|≤1} 1/h^λ(z).
pub fn harnack_check(spec: &ProcessSpec, lambda: f64) -> Result<InequalityReport> {
    let class = classify(spec, lambda, &RegularityConfig::default())?;
    if class.label != Label::C {
        return Err(Error::WrongCase("the Harnack bound is checked on case-C kernels".into()));
    }
    let grid = linspace(-4.0, 4.0, 321);
    let g = potential_density(spec, lambda, &grid)?;
    let h = hitting_transform(&g, &class, None)?;
    let m = h.harnack_constant();
    let mut worst: f64 = 0.0;
    for (i, &x) in grid.iter().enumerate() {
        if x.abs() > 3.0 {
            continue;
        }
        for (j, &y) in grid.iter().enumerate() {
            if (x - y).abs() <= 1.0 + 1e-12 && g.values[j] > 0.0 {
                worst = worst.max(g.values[i] / g.values[j]);
            }
        }
    }
    Ok(InequalityReport::new("Harnack", format!("λ={lambda} M={m:.6}"), worst, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levy::family;
    use serde_json::json;

    #[test]
    fn infinite_sides() {
        let r = InequalityReport::new("x", String::new(), f64::INFINITY, f64::INFINITY);
        assert!(r.holds && r.slack == 0.0);
        assert!(!InequalityReport::new("x", String::new(), f64::INFINITY, 1.0).holds);
        assert!(InequalityReport::new("x", String::new(), 1.0, f64::INFINITY).holds);
    }

    #[test]
    fn green_functions_integrate_transition_laws() {
        // Brownian d=3 with ψ = |ξ|²: p(u,ρ) = (4πu)^{-3/2}e^{-ρ²/4u}
        let u = Unimodal3 { alpha: 2.0, c: 1.0 };
        let rho = 0.7;
        let direct = integrate_singular_ends(|s| (4.0 * PI * s).powf(-1.5) * (-rho * rho / (4.0 * s)).exp(), 0.0, 0.3, true, false, Tol::default()).value;
        assert!((u.green(0.3, rho) - direct).abs() < 1e-9 * direct);
        let u = Unimodal3 { alpha: 1.0, c: 1.0 };
        let direct = integrate_singular_ends(|s| s / (PI * PI * (s * s + rho * rho).powi(2)), 0.0, 0.3, false, false, Tol::default()).value;
        assert!((u.green(0.3, rho) - direct).abs() < 1e-9 * direct);
    }

    #[test]
    fn unit_ball_bound_in_three_dimensions() {
        let spec = family("brownian", &json!({"dimension": 3})).unwrap();
        let q = Potential::Indicator { lo: -1.0, hi: 1.0, value: 1.0 };
        let rep = unimodal_bound_check(&q, &spec, 0.1, 0.5, f64::INFINITY).unwrap();
        assert!(rep.holds, "{rep:?}");
        // Centered Newtonian ball integral r²/2 and |B(0,1/2)| = π/6.
        let ball = 0.125;
        let expected = (1.0 + 0.1 / (PI / 6.0 * 0.125 / (4.0 * PI * 0.5))) * ball;
        assert!((rep.rhs - expected).abs() < 1e-8 * expected, "{} vs {expected}", rep.rhs);
    }
}
