//! Dense two-sided tables of a kernel density on geometric nodes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::engine::{total_mass, Engine};
use crate::quad::{gk15, integrate_singular_ends, Tol};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableConfig {
    pub z_min: f64,
    pub z_max: f64,
    pub per_decade: usize,
}

impl Default for TableConfig {
    fn default() -> Self {
        TableConfig { z_min: 1e-8, z_max: 60.0, per_decade: 40 }
    }
}

/// A kernel density sampled at ±z_i with z_i geometric, interpolated as
/// ln G against ln|z| (cubic), with power-law extrapolation towards 0.
#[derive(Debug, Clone)]
pub struct KernelTable {
    pub lambda: f64,
    pub t: f64,
    lnz: Vec<f64>,
    /// ln G at +z_i and −z_i; −∞ where G vanishes.
    pos: Vec<f64>,
    neg: Vec<f64>,
    /// G(0), possibly infinite.
    pub at_zero: f64,
    /// Total mass of the kernel (analytic).
    pub total_mass: f64,
    /// Mass outside [−z_max, z_max].
    pub far_mass: f64,
    pub z_max: f64,
    pub max_error: f64,
}

impl KernelTable {
    pub fn build(engine: &Engine, lambda: f64, t: f64, cfg: &TableConfig) -> Result<KernelTable> {
        let nodes = geometric(cfg);
        let eval = |z: f64| engine.potential(lambda, t, z);
        let symmetric = engine.symmetric();
        let pos: Vec<_> = nodes.par_iter().map(|&z| eval(z)).collect::<Result<Vec<_>>>()?;
        let neg: Vec<_> = if symmetric {
            pos.clone()
        } else if engine.one_sided() == Some(1.0) {
            vec![crate::quad::QuadResult::zero(); nodes.len()]
        } else {
            nodes.par_iter().map(|&z| eval(-z)).collect::<Result<Vec<_>>>()?
        };
        let at_zero = eval(0.0)?.value;
        let max_error = pos.iter().chain(&neg).map(|r| r.error).fold(0.0, f64::max);
        let lnv = |v: &Vec<crate::quad::QuadResult>| v.iter().map(|r| ln_pos(r.value)).collect();
        Ok(Self::assemble(lambda, t, nodes, lnv(&pos), lnv(&neg), at_zero, total_mass(lambda, t), max_error))
    }

    /// Table of an explicit density `f` (used for oracles and weights).
    pub fn from_fn(f: impl Fn(f64) -> f64 + Sync, total: f64, cfg: &TableConfig) -> KernelTable {
        let nodes = geometric(cfg);
        let pos = nodes.iter().map(|&z| ln_pos(f(z))).collect();
        let neg = nodes.iter().map(|&z| ln_pos(f(-z))).collect();
        Self::assemble(f64::NAN, f64::NAN, nodes, pos, neg, f(0.0), total, 0.0)
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(lambda: f64, t: f64, nodes: Vec<f64>, pos: Vec<f64>, neg: Vec<f64>, at_zero: f64, total: f64, max_error: f64) -> KernelTable {
        let z_max = *nodes.last().unwrap();
        let mut k = KernelTable {
            lambda,
            t,
            lnz: nodes.iter().map(|z| z.ln()).collect(),
            pos,
            neg,
            at_zero,
            total_mass: total,
            far_mass: 0.0,
            z_max,
            max_error,
        };
        let inner = k.side_mass(true) + k.side_mass(false);
        k.far_mass = if total.is_finite() { (total - inner).max(0.0) } else { f64::INFINITY };
        k
    }

    pub fn z_min(&self) -> f64 {
        self.lnz[0].exp()
    }

    /// Exponent κ of G(z) ≈ C|z|^κ below the first node, fitted over a factor 2
    /// (one full period for log-periodic kernels).
    pub fn zero_exponent(&self, positive: bool) -> f64 {
        let v = if positive { &self.pos } else { &self.neg };
        let h = self.lnz[1] - self.lnz[0];
        let j = ((std::f64::consts::LN_2 / h).round() as usize).clamp(1, v.len() - 1);
        if !(v[0].is_finite() && v[j].is_finite()) {
            return f64::INFINITY;
        }
        (v[j] - v[0]) / (self.lnz[j] - self.lnz[0])
    }

    /// Whether the density blows up at 0.
    pub fn singular_at_zero(&self) -> bool {
        !self.at_zero.is_finite() || self.zero_exponent(true) < -1e-3 || self.zero_exponent(false) < -1e-3
    }

    pub fn eval(&self, z: f64) -> f64 {
        if z == 0.0 {
            return self.at_zero;
        }
        let v = if z > 0.0 { &self.pos } else { &self.neg };
        let az = z.abs();
        if az > self.z_max {
            return 0.0;
        }
        let lz = az.ln();
        let h = self.lnz[1] - self.lnz[0];
        if lz < self.lnz[0] {
            if !v[0].is_finite() {
                return 0.0;
            }
            let g0 = v[0].exp();
            if self.at_zero.is_finite() {
                // Continuous (or jump) at 0 with a finite limit: linear in z.
                let kappa = self.zero_exponent(z > 0.0);
                if kappa.abs() < 0.1 {
                    let z0 = self.lnz[0].exp();
                    let j = ((std::f64::consts::LN_2 / h).round() as usize).clamp(1, v.len() - 1);
                    let g1 = v[j].exp();
                    let z1 = self.lnz[j].exp();
                    let slope = (g1 - g0) / (z1 - z0);
                    return (g0 + slope * (az - z0)).max(0.0);
                }
            }
            return g0 * ((lz - self.lnz[0]) * self.zero_exponent(z > 0.0)).exp();
        }
        let s = (lz - self.lnz[0]) / h;
        let i = (s.floor() as usize).min(v.len() - 2);
        let f = s - i as f64;
        let (y0, y1) = (v[i], v[i + 1]);
        if !y0.is_finite() || !y1.is_finite() {
            let (a, b) = (y0.exp(), y1.exp());
            return a + (b - a) * f;
        }
        // Four-point Lagrange cubic on ln G where the stencil is finite.
        let (j0, ok) = if i > 0 && i + 2 < v.len() && v[i - 1].is_finite() && v[i + 2].is_finite() {
            (i - 1, true)
        } else {
            (i, false)
        };
        if !ok {
            return (y0 + (y1 - y0) * f).exp();
        }
        let x = s - j0 as f64;
        let (a, b, c, d) = (v[j0], v[j0 + 1], v[j0 + 2], v[j0 + 3]);
        let l = -a * (x - 1.0) * (x - 2.0) * (x - 3.0) / 6.0 + b * x * (x - 2.0) * (x - 3.0) / 2.0
            - c * x * (x - 1.0) * (x - 3.0) / 2.0
            + d * x * (x - 1.0) * (x - 2.0) / 6.0;
        l.exp()
    }

    /// ∫₀^{z_max} G(±z) dz on the interpolant.
    fn side_mass(&self, positive: bool) -> f64 {
        let sign = if positive { 1.0 } else { -1.0 };
        let z0 = self.lnz[0].exp();
        let head = integrate_singular_ends(|z| self.eval(sign * z), 0.0, z0, true, false, Tol::new(1e-16, 1e-8)).value;
        let mut f = |u: f64| {
            let z = u.exp();
            z * self.eval(sign * z)
        };
        let mut body = 0.0;
        for w in self.lnz.windows(2) {
            body += gk15(&mut f, w[0], w[1]).0;
        }
        head + body
    }

    /// ∫_a^b G(z) dz on the interpolant, a < b, both within the table.
    pub fn mass(&self, a: f64, b: f64) -> f64 {
        if a >= b {
            return 0.0;
        }
        let tol = Tol::new(1e-14, 1e-9);
        let sing = self.singular_at_zero();
        if a < 0.0 && b > 0.0 {
            return self.mass(a, 0.0) + self.mass(0.0, b);
        }
        let f = |z: f64| self.eval(z);
        integrate_singular_ends(f, a, b, sing && a == 0.0, sing && b == 0.0, tol).value
    }
}

fn geometric(cfg: &TableConfig) -> Vec<f64> {
    let decades = (cfg.z_max / cfg.z_min).log10();
    let n = (decades * cfg.per_decade as f64).ceil() as usize;
    (0..=n).map(|i| cfg.z_min * (cfg.z_max / cfg.z_min).powf(i as f64 / n as f64)).collect()
}

fn ln_pos(v: f64) -> f64 {
    if v > 0.0 { v.ln() } else { f64::NEG_INFINITY }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_laplace_kernel() {
        let t = KernelTable::from_fn(|z| (-z.abs()).exp() / 2.0, 1.0, &TableConfig::default());
        for &z in &[-7.3f64, -0.01, 1e-10, 3e-5, 0.77, 12.0] {
            let exact = (-z.abs()).exp() / 2.0;
            assert!((t.eval(z) - exact).abs() < 1e-5 * exact.max(1e-3), "z={z}: {} vs {exact}", t.eval(z));
        }
        assert!((t.far_mass - (-60.0f64).exp()).abs() < 1e-9);
        let m = t.mass(-1.0, 2.0);
        assert!((m - (1.0 - 0.5 * (-1.0f64).exp() - 0.5 * (-2.0f64).exp())).abs() < 1e-7, "{m}");
    }

    #[test]
    fn singular_power_kernel() {
        let t = KernelTable::from_fn(|z| if z > 0.0 { z.powf(-0.5) * (-z).exp() } else { 0.0 }, std::f64::consts::PI.sqrt(), &TableConfig::default());
        assert!(t.singular_at_zero());
        assert!((t.mass(0.0, 1e-6) - 2e-3).abs() < 1e-8);
        assert!(t.far_mass < 1e-6);
    }
}
