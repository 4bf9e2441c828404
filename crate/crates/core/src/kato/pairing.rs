//! The pairing P(x, r) = ∫_{|z|<r} |q(x+z)| K(dz) against a one-dimensional kernel.

use std::sync::Arc;

use statrs::distribution::{ContinuousCDF, Normal};

use super::q::Potential;
use crate::potential::{Component, DiscreteKernel, KernelTable};
use crate::quad::{integrate_singular_ends, Tol};

/// Kernels a potential can be paired with.
#[derive(Debug, Clone)]
pub enum PairKernel {
    Table(Arc<KernelTable>),
    Discrete(Arc<DiscreteKernel>),
    /// Lebesgue measure, K ≡ 1.
    Lebesgue,
}

const TOL: Tol = Tol { abs: 1e-13, rel: 1e-8, max_panels: 400 };

/// Exponent sums at or below this make the local integral diverge.
const DIVERGENT: f64 = -1.0 + 1e-9;

impl PairKernel {
    fn density(&self, z: f64) -> f64 {
        match self {
            PairKernel::Table(t) => t.eval(z),
            PairKernel::Lebesgue => 1.0,
            PairKernel::Discrete(_) => unreachable!("discrete kernels have no density"),
        }
    }

    /// Exponent κ of K(z) ≈ |z|^κ as z → 0 from one side, and whether K vanishes there.
    fn zero_behaviour(&self, right: bool) -> (f64, bool) {
        match self {
            PairKernel::Table(t) => {
                let probe = if right { t.z_min() } else { -t.z_min() };
                let k = t.zero_exponent(right);
                (if k.is_finite() { k } else { 0.0 }, t.eval(probe) == 0.0)
            }
            _ => (0.0, false),
        }
    }

    fn singular_at_zero(&self) -> bool {
        match self {
            PairKernel::Table(t) => t.singular_at_zero(),
            _ => false,
        }
    }

    /// Largest |z| with nonzero density represented explicitly.
    fn reach(&self) -> f64 {
        match self {
            PairKernel::Table(t) => t.z_max,
            _ => f64::INFINITY,
        }
    }

    fn far_mass(&self) -> f64 {
        match self {
            PairKernel::Table(t) => t.far_mass,
            _ => 0.0,
        }
    }

    pub fn total_mass(&self) -> f64 {
        match self {
            PairKernel::Table(t) => t.total_mass,
            PairKernel::Discrete(k) => k.total_mass,
            PairKernel::Lebesgue => f64::INFINITY,
        }
    }
}

/// ∫_{|z|<r} |q(x+z)| K(dz). Returns +∞ when a singularity of q meets a kernel
/// singularity (or a non-integrable one) with nonzero weight.
pub fn pairing(q: &Potential, k: &PairKernel, x: f64, r: f64) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    if let PairKernel::Discrete(d) = k {
        return discrete_pairing(q, d, x, r);
    }
    if q.is_constant() && r.is_infinite() {
        return q.eval(0.0) * k.total_mass();
    }
    if q.is_constant() && matches!(k, PairKernel::Lebesgue) {
        return q.eval(0.0) * 2.0 * r;
    }
    let reach = k.reach();
    let lo = -r.min(reach);
    let hi = r.min(reach);
    let mut value = window(q, k, x, lo, hi);
    if r > reach {
        value += q.far_density() * k.far_mass();
    }
    value
}

/// ∫_{lo}^{hi} |q(x+z)| K(z) dz for a kernel with a density.
pub fn window(q: &Potential, k: &PairKernel, x: f64, lo: f64, hi: f64) -> f64 {
    if !(hi > lo) {
        return 0.0;
    }
    let sings = q.singularities();
    let mut pts: Vec<f64> = vec![lo];
    pts.extend(q.breakpoints(x + lo, x + hi).into_iter().map(|p| p - x));
    if lo < 0.0 && hi > 0.0 {
        pts.push(0.0);
    }
    pts.extend(sings.iter().map(|s| s.at - x).filter(|&z| z > lo && z < hi));
    pts.push(hi);
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();

    let ksing = k.singular_at_zero();
    // Exponent of the integrand at a segment end `e`, approached from the inside.
    let end_info = |e: f64, from_right: bool| -> (bool, f64) {
        let mut exp = 0.0;
        let mut singular = false;
        for s in &sings {
            if (s.at - x - e).abs() <= 1e-15 * (1.0 + e.abs()) && s.on_side(from_right) {
                singular = true;
                exp -= s.exponent;
            }
        }
        if e == 0.0 {
            let (kappa, vanishes) = k.zero_behaviour(from_right);
            if vanishes {
                return (false, 0.0);
            }
            if ksing {
                singular = true;
            }
            exp += kappa;
        }
        (singular, exp)
    };

    let f = |z: f64| {
        let v = q.eval(x + z);
        if v == 0.0 { 0.0 } else { v * k.density(z) }
    };
    let mut total = 0.0;
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mid = 0.5 * (a + b);
        if q.eval(x + mid) == 0.0 && q.breakpoints(x + a, x + b).is_empty() && !touches_support(q, x + a, x + b) {
            continue;
        }
        let (sa, ea) = end_info(a, true);
        let (sb, eb) = end_info(b, false);
        if (sa && ea <= DIVERGENT && q.eval(x + a + 1e-12 * (b - a)) > 0.0) || (sb && eb <= DIVERGENT && q.eval(x + b - 1e-12 * (b - a)) > 0.0) {
            return f64::INFINITY;
        }
        let r = integrate_singular_ends(f, a, b, sa, sb, TOL);
        total += r.value;
    }
    total
}

/// Cheap check that q is not identically zero on (a, b).
fn touches_support(q: &Potential, a: f64, b: f64) -> bool {
    (1..8).any(|i| q.eval(a + (b - a) * i as f64 / 8.0) > 0.0)
}

fn discrete_pairing(q: &Potential, d: &DiscreteKernel, x: f64, r: f64) -> f64 {
    let mut total = 0.0;
    for c in &d.components {
        match *c {
            Component::Atom { at, weight } => {
                if at.abs() < r {
                    let v = q.eval(x + at);
                    if v > 0.0 {
                        total += weight * v;
                    }
                }
            }
            Component::Normal { mean, sd, weight } => {
                let n = Normal::new(mean, sd).unwrap();
                if q.is_constant() {
                    total += weight * q.eval(0.0) * if r.is_finite() { n.cdf(r) - n.cdf(-r) } else { 1.0 };
                    continue;
                }
                let lo = (mean - 12.0 * sd).max(-r);
                let hi = (mean + 12.0 * sd).min(r);
                if hi > lo {
                    let phi = move |z: f64| (-(z - mean).powi(2) / (2.0 * sd * sd)).exp() / (sd * (2.0 * std::f64::consts::PI).sqrt());
                    let table = KernelFn(phi);
                    total += weight * table.window(q, x, lo, hi);
                }
            }
        }
    }
    total
}

/// A smooth explicit density paired like a table.
struct KernelFn<F>(F);

impl<F: Fn(f64) -> f64 + Copy> KernelFn<F> {
    fn window(&self, q: &Potential, x: f64, lo: f64, hi: f64) -> f64 {
        let mut pts = vec![lo];
        pts.extend(q.breakpoints(x + lo, x + hi).into_iter().map(|p| p - x));
        pts.push(hi);
        let sings = q.singularities();
        let phi = self.0;
        let mut total = 0.0;
        for w in pts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let sa = sings.iter().any(|s| (s.at - x - a).abs() < 1e-15 && s.on_side(true));
            let sb = sings.iter().any(|s| (s.at - x - b).abs() < 1e-15 && s.on_side(false));
            let ea: f64 = sings.iter().filter(|s| (s.at - x - a).abs() < 1e-15 && s.on_side(true)).map(|s| -s.exponent).sum();
            let eb: f64 = sings.iter().filter(|s| (s.at - x - b).abs() < 1e-15 && s.on_side(false)).map(|s| -s.exponent).sum();
            if (sa && ea <= DIVERGENT) || (sb && eb <= DIVERGENT) {
                return f64::INFINITY;
            }
            total += integrate_singular_ends(|z| q.eval(x + z) * phi(z), a, b, sa, sb, TOL).value;
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::TableConfig;

    fn laplace() -> PairKernel {
        PairKernel::Table(Arc::new(KernelTable::from_fn(|z| (-z.abs()).exp() / 2.0, 1.0, &TableConfig { z_max: 40.0, ..TableConfig::default() })))
    }

    #[test]
    fn indicator_against_laplace() {
        let q = Potential::Indicator { lo: 0.0, hi: 1.0, value: 1.0 };
        // ∫₀¹ e^{-z}/2 dz
        let v = pairing(&q, &laplace(), 0.0, f64::INFINITY);
        assert!((v - 0.5 * (1.0 - (-1.0f64).exp())).abs() < 1e-7, "{v}");
        let v = pairing(&q, &laplace(), 0.0, 0.5);
        assert!((v - 0.5 * (1.0 - (-0.5f64).exp())).abs() < 1e-7, "{v}");
    }

    #[test]
    fn power_singularity_at_kernel_origin() {
        let q = Potential::Power { center: 0.0, exponent: 0.5, radius: 1.0, side: Default::default(), coeff: 1.0 };
        // 2∫₀^r z^{-1/2} dz = 4√r
        let v = pairing(&q, &PairKernel::Lebesgue, 0.0, 0.25);
        assert!((v - 2.0).abs() < 1e-7, "{v}");
        let q = Potential::Power { center: 0.0, exponent: 1.0, radius: 1.0, side: Default::default(), coeff: 1.0 };
        assert!(pairing(&q, &PairKernel::Lebesgue, 0.0, 0.25).is_infinite());
    }

    #[test]
    fn comb_block_mass() {
        let q = Potential::comb();
        for k in [3usize, 10, 25] {
            // Ball (k + w/2 ± 0.4) holds block k = (k, k + w) and nothing of block k − 1.
            let w = (-(k as f64)).exp2();
            let v = pairing(&q, &PairKernel::Lebesgue, k as f64 + 0.5 * w, 0.4);
            assert!((v - 1.0).abs() < 1e-8, "k={k}: {v}");
        }
    }
}
