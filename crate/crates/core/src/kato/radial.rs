//! Radial weights in d ≥ 2: Aizenman–Simon for Brownian motion and the Riesz
//! kernel |z|^{α−d} for isotropic stable processes. Potentials are read
//! radially, q(x) = q₁(|x|).

use std::f64::consts::PI;

use super::conditions::{ConditionConfig, ConditionId, Profile};
use super::q::{Potential, PowerSide};
use super::sup::{SupResult, SupStatus};
use crate::levy::{sphere_area, MeasurePart, ProcessSpec};
use crate::quad::{integrate_singular_ends, integrate_with_breaks, Tol};
use crate::{Error, Result};

/// Singular weight w(ρ) of the Green function near 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialWeight {
    /// ln(1/ρ) for ρ < 1, 0 beyond (d = 2 Brownian).
    Log,
    /// ρ^{exponent} (2 − d for Brownian d ≥ 3, α − d for stable).
    Power(f64),
}

impl RadialWeight {
    pub fn eval(self, rho: f64) -> f64 {
        match self {
            RadialWeight::Log => if rho < 1.0 { -rho.ln() } else { 0.0 },
            RadialWeight::Power(e) => rho.powf(e),
        }
    }

    fn exponent(self) -> f64 {
        match self {
            RadialWeight::Log => 0.0,
            RadialWeight::Power(e) => e,
        }
    }
}

/// Isotropic structure of a d ≥ 2 spec: Some(α) with α = 2 for Brownian motion.
pub fn isotropic_index(spec: &ProcessSpec) -> Option<f64> {
    let ProcessSpec::Triplet(t) = spec else { return None };
    let d = t.dimension;
    if d < 2 || t.gamma.iter().any(|g| *g != 0.0) {
        return None;
    }
    let a0 = t.a[0][0];
    let isotropic_a = (0..d).all(|i| (0..d).all(|j| t.a[i][j] == if i == j { a0 } else { 0.0 }));
    if !isotropic_a {
        return None;
    }
    match (a0 > 0.0, t.nu.as_slice()) {
        (true, []) => Some(2.0),
        (false, [MeasurePart::Stable { alpha, .. }]) => Some(*alpha),
        _ => None,
    }
}

pub fn weight_for(spec: &ProcessSpec) -> Result<RadialWeight> {
    let d = spec.dim();
    let alpha = isotropic_index(spec).ok_or_else(|| Error::NotUnimodal("radial weights need isotropic Brownian or stable specs".into()))?;
    Ok(if alpha == 2.0 && d == 2 { RadialWeight::Log } else { RadialWeight::Power(alpha - d as f64) })
}

pub fn weight_name(spec: &ProcessSpec) -> Option<&'static str> {
    match (isotropic_index(spec)?, spec.dim()) {
        (a, _) if a == 2.0 => Some("Aizenman–Simon"),
        _ => Some("Riesz"),
    }
}

const TOL: Tol = Tol { abs: 1e-14, rel: 1e-8, max_panels: 2000 };

/// q₁ radially symmetric decreasing, so x = 0 maximises ∫ q(z)w(|z−x|)dz.
fn symmetric_decreasing(q: &Potential) -> bool {
    match q {
        Potential::Power { center, exponent, side, .. } => *center == 0.0 && *exponent >= 0.0 && *side != PowerSide::Left,
        Potential::Log { center, .. } => *center == 0.0,
        Potential::Indicator { lo, .. } => *lo <= 0.0,
        Potential::Constant { .. } => true,
        Potential::Sum { terms } => terms.iter().all(symmetric_decreasing),
        _ => false,
    }
}

/// Local exponent of q₁ at ρ = 0.
fn q_exponent_at_zero(q: &Potential) -> f64 {
    q.singularities().iter().filter(|s| s.at == 0.0).map(|s| -s.exponent).fold(0.0, f64::min)
}

/// ∫_{|z−x|<R} q₁(|z|) w(|z−x|) dz with |x| = s.
pub fn ball_weighted(q: &Potential, w: RadialWeight, d: usize, s: f64, radius: f64) -> f64 {
    if s == 0.0 {
        let exp = w.exponent() + (d as f64 - 1.0) + q_exponent_at_zero(q);
        if exp <= -1.0 + 1e-9 && q.eval(1e-12 * radius) > 0.0 {
            return f64::INFINITY;
        }
        let f = |rho: f64| w.eval(rho) * q.eval(rho) * rho.powi(d as i32 - 1);
        let breaks = q.breakpoints(0.0, radius);
        let mut pts = vec![0.0];
        pts.extend(breaks);
        pts.push(radius);
        let mut total = 0.0;
        for (i, p) in pts.windows(2).enumerate() {
            total += integrate_singular_ends(f, p[0], p[1], i == 0, false, TOL).value;
        }
        return sphere_area(d) * total;
    }
    // Shell of radius ρ around x: average of q₁ over the sphere via the polar angle.
    let sd2 = if d == 2 { 2.0 } else { sphere_area(d - 1) };
    let shell = |rho: f64| -> f64 {
        let g = |th: f64| q.eval((s * s + rho * rho + 2.0 * s * rho * th.cos()).max(0.0).sqrt()) * th.sin().powi(d as i32 - 2);
        let mut brk: Vec<f64> = q
            .breakpoints(0.0, s + rho + 1.0)
            .into_iter()
            .filter_map(|b| {
                let c = (b * b - s * s - rho * rho) / (2.0 * s * rho);
                (c > -1.0 && c < 1.0).then(|| c.acos())
            })
            .collect();
        brk.sort_by(|a, b| a.partial_cmp(b).unwrap());
        sd2 * integrate_with_breaks(g, 0.0, PI, &brk, TOL).value
    };
    let f = |rho: f64| w.eval(rho) * rho.powi(d as i32 - 1) * shell(rho);
    let mut total = 0.0;
    let mut pts = vec![0.0];
    pts.extend(q.breakpoints(0.0, 1e300).into_iter().flat_map(|b| [(b - s).abs(), b + s]).filter(|&p| p > 0.0 && p < radius));
    pts.push(radius);
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    for (i, p) in pts.windows(2).enumerate() {
        let sb = q.singularities().iter().any(|x| x.at == 0.0) && ((p[1] - s).abs() < 1e-14);
        let sa = i == 0 || (q.singularities().iter().any(|x| x.at == 0.0) && (p[0] - s).abs() < 1e-14);
        total += integrate_singular_ends(f, p[0], p[1], sa, sb, TOL).value;
    }
    total
}

/// sup over x of the weighted ball integral.
pub fn sup_ball_weighted(q: &Potential, w: RadialWeight, d: usize, radius: f64) -> SupResult {
    let at0 = ball_weighted(q, w, d, 0.0, radius);
    if at0.is_infinite() || symmetric_decreasing(q) {
        let status = if at0.is_infinite() { SupStatus::Divergent } else { SupStatus::Attained };
        return SupResult { value: at0, argmax: 0.0, status, blocks: vec![] };
    }
    let hi = q.support().map(|s| s.1.abs().max(s.0.abs())).unwrap_or(3.0) + radius;
    let mut best = (at0, 0.0);
    for i in 1..=40 {
        let s = hi * i as f64 / 40.0;
        let v = ball_weighted(q, w, d, s, radius);
        if v > best.0 {
            best = (v, s);
        }
    }
    SupResult { value: best.0, argmax: best.1, status: SupStatus::Attained, blocks: vec![] }
}

/// t ↦ sup_x ∫_{|z−x|<√t}|q(z)|w(|z−x|)dz for Brownian motion in d ≥ 2.
pub fn aizenman_simon_weights(q: &Potential, d: usize, cfg: &ConditionConfig) -> Result<Profile> {
    if d < 2 {
        return Err(Error::DimensionUnsupported("the d = 1 case is covered by the Lebesgue criteria".into()));
    }
    let w = if d == 2 { RadialWeight::Log } else { RadialWeight::Power(2.0 - d as f64) };
    let ts = cfg.t_grid.clone();
    let sups = ts.iter().map(|&t| sup_ball_weighted(q, w, d, t.sqrt())).collect();
    Ok(Profile::from_sups(ConditionId::ClosedForm, "t", None, None, &ts, sups, &cfg.limit))
}

/// Radial criterion for an isotropic d ≥ 2 spec (Brownian or stable).
pub fn radial_profile(q: &Potential, spec: &ProcessSpec, cfg: &ConditionConfig) -> Result<Profile> {
    let d = spec.dim();
    let w = weight_for(spec)?;
    if isotropic_index(spec) == Some(2.0) {
        return aizenman_simon_weights(q, d, cfg);
    }
    let rs = cfg.r_grid.clone();
    let sups = rs.iter().map(|&r| sup_ball_weighted(q, w, d, r)).collect();
    Ok(Profile::from_sups(ConditionId::ClosedForm, "r", None, None, &rs, sups, &cfg.limit))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_ball_newtonian_integral() {
        let q = Potential::Indicator { lo: -1.0, hi: 1.0, value: 1.0 };
        let cfg = ConditionConfig::default();
        let p = aizenman_simon_weights(&q, 3, &cfg).unwrap();
        for pt in &p.points {
            // ∫₀^{√t} ρ^{-1}·4πρ² dρ = 2πt
            assert!((pt.value - 2.0 * PI * pt.param).abs() < 1e-8, "{pt:?}");
        }
        assert_eq!(p.holds(), Some(true));
    }

    #[test]
    fn inverse_square_is_out_in_three_dimensions() {
        let q = Potential::Power { center: 0.0, exponent: 2.0, radius: 1.0, side: PowerSide::Both, coeff: 1.0 };
        let p = aizenman_simon_weights(&q, 3, &ConditionConfig::default()).unwrap();
        assert_eq!(p.holds(), Some(false));
    }

    #[test]
    fn off_center_shell_matches_direct_formula() {
        // Ball of radius 1 centred at distance s = 2, weight 1: |B(0,1) ∩ B(x,R)| for R = 1.5.
        let q = Potential::Indicator { lo: -1.0, hi: 1.0, value: 1.0 };
        let (r1, r2, s): (f64, f64, f64) = (1.0, 1.5, 2.0);
        let lens = PI * (r1 + r2 - s).powi(2) * (s * s + 2.0 * s * r2 - 3.0 * r2 * r2 + 2.0 * s * r1 + 6.0 * r1 * r2 - 3.0 * r1 * r1) / (12.0 * s);
        let v = ball_weighted(&q, RadialWeight::Power(0.0), 3, s, r2);
        assert!((v - lens).abs() < 1e-7 * lens, "{v} vs {lens}");
    }
}
