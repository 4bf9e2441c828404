//! Unit-scale strictly stable densities p₁(y) used by the self-similar kernel route:
//! closed forms where they exist, otherwise a cached Fourier-inverted table.

use statrs::function::gamma::gamma;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use crate::levy::{StableKind, StableStructure};
use crate::quad::{invert, InvertOptions};

const Y0: f64 = 0.05;
const S_STEP: f64 = 0.01;
const Y_MAX: f64 = 1e4;

/// Table of ln p₁ at y = ±Y0·sinh(s).
#[derive(Debug)]
pub struct BaseTable {
    alpha: f64,
    kind: StableKind,
    pos: Vec<f64>,
    neg: Vec<f64>,
    /// Beyond this |y| the asymptotic series replaces the table on heavy sides.
    y_switch: f64,
}

fn node(i: usize) -> f64 {
    Y0 * (S_STEP * i as f64).sinh()
}

fn n_nodes() -> usize {
    ((Y_MAX / Y0).asinh() / S_STEP).ceil() as usize + 2
}

impl BaseTable {
    fn build(alpha: f64, kind: StableKind) -> BaseTable {
        let n = n_nodes();
        let y_switch = switch_point(alpha, kind);
        let opts = InvertOptions { rel: 1e-13, ..InvertOptions::default() };
        let f = move |xi: f64| (-StableStructure::psi1(kind, alpha, xi)).exp();
        let side = |sign: f64| -> Vec<f64> {
            (0..n)
                .map(|i| {
                    let y = sign * node(i);
                    if y.abs() > y_switch * 1.1 + 1.0 {
                        return f64::NEG_INFINITY;
                    }
                    let v = invert(&f, y, opts).value;
                    if v > 1e-300 { v.ln() } else { f64::NEG_INFINITY }
                })
                .collect()
        };
        let pos = side(1.0);
        let neg = match kind {
            StableKind::Symmetric => pos.clone(),
            StableKind::Positive if alpha < 1.0 => vec![f64::NEG_INFINITY; n],
            _ => side(-1.0),
        };
        let mut t = BaseTable { alpha, kind, pos, neg, y_switch };
        t.clean();
        t
    }

    /// Replace noise-dominated values on light (super-exponential) sides by −∞.
    fn clean(&mut self) {
        let peak = self.pos.iter().chain(&self.neg).cloned().fold(f64::NEG_INFINITY, f64::max);
        let floor = peak - 25.0;
        if self.kind == StableKind::Positive && self.alpha < 1.0 {
            // Towards 0+ the density vanishes faster than any power.
            let mut i = self.pos.iter().position(|&v| v > floor).unwrap_or(0);
            while i > 0 {
                i -= 1;
                self.pos[i] = f64::NEG_INFINITY;
            }
        }
        if self.kind == StableKind::Positive && self.alpha > 1.0 {
            // Left tail: cut at the first node below the noise floor.
            if let Some(i) = self.neg.iter().position(|&v| !(v > floor)) {
                for v in &mut self.neg[i..] {
                    *v = f64::NEG_INFINITY;
                }
            }
        }
    }

    fn interp(vals: &[f64], y: f64) -> f64 {
        let s = (y / Y0).asinh() / S_STEP;
        let i = s.floor() as usize;
        if i + 1 >= vals.len() {
            return f64::NEG_INFINITY;
        }
        let t = s - i as f64;
        let (y0, y1) = (vals[i], vals[i + 1]);
        if !y0.is_finite() || !y1.is_finite() {
            return if t < 0.5 { y0 } else { y1 };
        }
        if i == 0 || i + 2 >= vals.len() || !vals[i - 1].is_finite() || !vals[i + 2].is_finite() {
            return y0 + (y1 - y0) * t;
        }
        // Four-point Lagrange cubic.
        let x = t + 1.0;
        let (a, b, c, d) = (vals[i - 1], y0, y1, vals[i + 2]);
        -a * (x - 1.0) * (x - 2.0) * (x - 3.0) / 6.0 + b * x * (x - 2.0) * (x - 3.0) / 2.0 - c * x * (x - 1.0) * (x - 3.0) / 2.0
            + d * x * (x - 1.0) * (x - 2.0) / 6.0
    }

    /// Large-|y| expansion beyond the table.
    fn tail(&self, y: f64) -> f64 {
        let a = self.alpha;
        let ay = y.abs();
        match self.kind {
            StableKind::Symmetric => series(a, ay, |k| (PI * a * k / 2.0).sin(), 1.0, 4),
            StableKind::Positive | StableKind::Negative => {
                let right = (self.kind == StableKind::Positive) == (y > 0.0);
                if !right {
                    return 0.0;
                }
                if a < 1.0 {
                    series(a, ay, |k| (PI * a * k).sin(), -gamma(-a), 4)
                } else {
                    ay.powf(-1.0 - a)
                }
            }
            StableKind::DriftOnly => 0.0,
        }
    }

    pub fn eval(&self, y: f64) -> f64 {
        let heavy = match self.kind {
            StableKind::Symmetric => true,
            _ => y > 0.0,
        };
        if y.abs() >= Y_MAX || (heavy && y.abs() >= self.y_switch) {
            return self.tail(y);
        }
        let v = if y >= 0.0 { Self::interp(&self.pos, y) } else { Self::interp(&self.neg, -y) };
        if v.is_finite() { v.exp() } else { 0.0 }
    }
}

/// Smallest node where the truncated series agrees with itself to 1e-9.
fn switch_point(alpha: f64, kind: StableKind) -> f64 {
    if kind == StableKind::Positive && alpha > 1.0 {
        return Y_MAX;
    }
    let n = n_nodes();
    for i in 0..n {
        let y = node(i);
        if y < 2.0 {
            continue;
        }
        let a = alpha;
        let (full, c) = match kind {
            StableKind::Symmetric => (series(a, y, |k| (PI * a * k / 2.0).sin(), 1.0, 4), 1.0),
            _ => (series(a, y, |k| (PI * a * k).sin(), -gamma(-a), 4), -gamma(-a)),
        };
        // First omitted term without its oscillating factor bounds the truncation error.
        let omitted = gamma(5.0 * a + 1.0) / 120.0 * c.powi(5) * y.powf(-5.0 * a - 1.0) / PI;
        if full > 0.0 && omitted < 1e-9 * full {
            return y.min(Y_MAX);
        }
    }
    Y_MAX
}

/// (1/π) Σ_{k=1}^{terms} (−1)^{k+1}/k! Γ(αk+1) s(k) c^k y^{−αk−1}
fn series(a: f64, y: f64, s: impl Fn(f64) -> f64, c: f64, terms: i32) -> f64 {
    let mut sum = 0.0;
    let mut fact = 1.0;
    for k in 1..=terms {
        let kf = k as f64;
        fact *= kf;
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        sum += sign / fact * gamma(a * kf + 1.0) * s(kf) * c.powi(k) * y.powf(-a * kf - 1.0);
    }
    sum / PI
}

/// Unit-scale density of the strictly stable law with exponent ψ₁.
#[derive(Debug, Clone)]
pub enum BaseDensity {
    Gaussian,
    Cauchy,
    /// One-sided ½-stable with Lévy density z^{-3/2}: y^{-3/2} e^{-π/y}.
    Levy,
    Table(Arc<BaseTable>),
}

type Cache = Mutex<HashMap<(u64, u8), Arc<BaseTable>>>;

fn cache() -> &'static Cache {
    static C: OnceLock<Cache> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

impl BaseDensity {
    pub fn for_structure(s: &StableStructure) -> BaseDensity {
        let a = s.alpha;
        match s.kind {
            StableKind::Symmetric if a == 2.0 => BaseDensity::Gaussian,
            StableKind::Symmetric if a == 1.0 => BaseDensity::Cauchy,
            StableKind::Positive | StableKind::Negative if a == 0.5 => BaseDensity::Levy,
            kind => {
                // The negative kind reuses the positive table mirrored.
                let (k, tag) = match kind {
                    StableKind::Symmetric => (StableKind::Symmetric, 0u8),
                    _ => (StableKind::Positive, 1u8),
                };
                let key = (a.to_bits(), tag);
                let existing = cache().lock().unwrap().get(&key).cloned();
                let table = match existing {
                    Some(t) => t,
                    None => {
                        let t = Arc::new(BaseTable::build(a, k));
                        cache().lock().unwrap().insert(key, t.clone());
                        t
                    }
                };
                BaseDensity::Table(table)
            }
        }
    }

    /// p₁(y); `mirror` reflects one-sided laws onto the negative half-line.
    pub fn eval(&self, y: f64, mirror: bool) -> f64 {
        let y = if mirror { -y } else { y };
        match self {
            BaseDensity::Gaussian => (-y * y / 4.0).exp() / (4.0 * PI).sqrt(),
            BaseDensity::Cauchy => 1.0 / (PI * (1.0 + y * y)),
            BaseDensity::Levy => {
                if y <= 0.0 { 0.0 } else { y.powf(-1.5) * (-PI / y).exp() }
            }
            BaseDensity::Table(t) => t.eval(y),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_reproduces_cauchy_and_levy() {
        let t = BaseTable::build(1.0, StableKind::Symmetric);
        for &y in &[0.0f64, 0.3, 2.0, 40.0, 900.0, 2e4] {
            let exact = 1.0 / (PI * (1.0 + y * y));
            assert!((t.eval(y) - exact).abs() < 1e-7 * exact.max(1e-3), "y={y}: {} vs {exact}", t.eval(y));
        }
        let t = BaseTable::build(0.5, StableKind::Positive);
        for &y in &[0.1f64, 0.5, 3.0, 100.0, 5e3, 3e4] {
            let exact = y.powf(-1.5) * (-PI / y).exp();
            assert!((t.eval(y) - exact).abs() < 1e-7 * exact.max(1e-5), "y={y}: {} vs {exact}", t.eval(y));
        }
        assert_eq!(t.eval(-1.0), 0.0);
    }
}
