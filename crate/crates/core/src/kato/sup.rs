//! Supremum over x of a pairing, with candidates taken from the structure of q.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::pairing::{pairing, PairKernel};
use super::q::Potential;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SupStatus {
    /// Maximum found inside the search set.
    Attained,
    /// Per-block values of the comb settled.
    Converged,
    /// Some candidate is infinite, or the block values keep growing.
    Divergent,
    /// Still increasing at the edge of the search set: the value is a lower bound.
    Exhausted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupResult {
    #[serde(with = "crate::util::float")]
    pub value: f64,
    pub argmax: f64,
    pub status: SupStatus,
    /// (k, b_k) for comb searches.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub blocks: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SupConfig {
    pub grid_points: usize,
    pub golden_iters: usize,
    /// Blocks of the comb searched individually.
    pub comb_blocks: Vec<usize>,
    /// Half-width added around the support of q.
    pub window: f64,
    /// Dyadic steps towards each singular point.
    pub approach_steps: usize,
}

impl Default for SupConfig {
    fn default() -> Self {
        SupConfig {
            grid_points: 101,
            golden_iters: 20,
            comb_blocks: vec![1, 2, 3, 4, 5, 6, 8, 10, 12, 16, 20, 24, 28, 32, 36, 40],
            window: 3.0,
            approach_steps: 24,
        }
    }
}

/// Relative growth over the last four comb blocks that counts as divergence.
const COMB_GROWTH: f64 = 1.02;
const COMB_SETTLED: f64 = 1e-3;

/// sup_x ∫_{|z|<r} |q(x+z)| K(dz).
pub fn sup_pairing(q: &Potential, k: &PairKernel, r: f64, cfg: &SupConfig) -> SupResult {
    sup_of(|x| pairing(q, k, x, r), q, r, cfg)
}

/// Supremum of `f` over x using the candidate rules for `q`; `r` bounds how far
/// from the support of q a maximiser can sit.
pub fn sup_of<F: Fn(f64) -> f64 + Sync>(f: F, q: &Potential, r: f64, cfg: &SupConfig) -> SupResult {
    if q.is_constant() {
        return SupResult { value: f(0.0), argmax: 0.0, status: SupStatus::Attained, blocks: vec![] };
    }
    if let Some(k_max) = q.comb_k_max() {
        return comb_sup(&f, k_max, cfg);
    }
    let Some((lo, hi)) = q.support() else {
        return grid_sup(&f, -cfg.window, cfg.window, &[], cfg, true);
    };
    let reach = r.min(cfg.window);
    let mut extra = Vec::new();
    for s in q.singularities() {
        extra.push(s.at);
        let r0 = 0.5 * reach.min(1.0);
        for j in 0..cfg.approach_steps {
            let h = r0 * (-(j as f64)).exp2();
            extra.extend([s.at - h, s.at + h]);
        }
    }
    extra.extend([lo, hi]);
    grid_sup(&f, lo - reach, hi + reach, &extra, cfg, false)
}

fn grid_sup<F: Fn(f64) -> f64 + Sync>(f: &F, a: f64, b: f64, extra: &[f64], cfg: &SupConfig, open_window: bool) -> SupResult {
    let n = cfg.grid_points.max(3);
    let mut xs: Vec<f64> = (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect();
    xs.extend_from_slice(extra);
    xs.sort_by(|p, q| p.partial_cmp(q).unwrap());
    xs.dedup();
    let vals: Vec<f64> = xs.par_iter().map(|&x| f(x)).collect();
    if let Some(i) = vals.iter().position(|v| v.is_infinite()) {
        return SupResult { value: f64::INFINITY, argmax: xs[i], status: SupStatus::Divergent, blocks: vec![] };
    }
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&i, &j| vals[j].partial_cmp(&vals[i]).unwrap());
    let mut best = (vals[order[0]], xs[order[0]]);
    for &i in order.iter().take(3) {
        let l = xs[i.saturating_sub(1)];
        let h = xs[(i + 1).min(xs.len() - 1)];
        let (v, x) = golden(f, l, h, cfg.golden_iters);
        if v > best.0 {
            best = (v, x);
        }
    }
    let edge = best.1 <= xs[0] || best.1 >= *xs.last().unwrap();
    let status = if edge && open_window { SupStatus::Exhausted } else { SupStatus::Attained };
    SupResult { value: best.0, argmax: best.1, status, blocks: vec![] }
}

/// Golden-section maximisation on [a, b], returning the best point seen.
fn golden<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut best = if fc > fd { (fc, c) } else { (fd, d) };
    for _ in 0..iters {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
        for (v, x) in [(fc, c), (fd, d)] {
            if v > best.0 {
                best = (v, x);
            }
        }
    }
    best
}

fn comb_sup<F: Fn(f64) -> f64 + Sync>(f: &F, k_max: usize, cfg: &SupConfig) -> SupResult {
    let ks: Vec<usize> = cfg.comb_blocks.iter().copied().filter(|&k| k >= 1 && k <= k_max).collect();
    let per_block: Vec<(f64, f64)> = ks
        .par_iter()
        .map(|&k| {
            let kf = k as f64;
            let w = (-kf).exp2();
            let offsets = [-1.0, -0.5, -0.1, 0.0, 0.25, 0.5, 0.75, 1.0, 1.5];
            let pts: Vec<(f64, f64)> = offsets.iter().map(|s| {
                let x = kf + s * w;
                (f(x), x)
            }).collect();
            if let Some(p) = pts.iter().find(|p| p.0.is_infinite()) {
                return *p;
            }
            let i = (0..pts.len()).max_by(|&i, &j| pts[i].0.partial_cmp(&pts[j].0).unwrap()).unwrap();
            let l = pts[i.saturating_sub(1)].1;
            let h = pts[(i + 1).min(pts.len() - 1)].1;
            let g = golden(f, l, h, cfg.golden_iters);
            if g.0 > pts[i].0 { g } else { pts[i] }
        })
        .collect();
    let blocks: Vec<(usize, f64)> = ks.iter().copied().zip(per_block.iter().map(|p| p.0)).collect();
    let best = per_block.iter().fold(per_block[0], |m, p| if p.0 > m.0 { *p } else { m });
    if best.0.is_infinite() {
        return SupResult { value: f64::INFINITY, argmax: best.1, status: SupStatus::Divergent, blocks };
    }
    let n = per_block.len();
    let last = per_block[n - 1].0;
    let back = per_block[n.saturating_sub(5)].0;
    let prev = per_block[n.saturating_sub(2)].0;
    let increasing = per_block[n.saturating_sub(3)..].windows(2).all(|w| w[1].0 > w[0].0);
    let status = if increasing && last > COMB_GROWTH * back {
        SupStatus::Divergent
    } else if (last - prev).abs() <= COMB_SETTLED * last.abs().max(1e-300) || last < best.0 * (1.0 - COMB_SETTLED) {
        SupStatus::Converged
    } else {
        SupStatus::Exhausted
    };
    let value = if status == SupStatus::Divergent { f64::INFINITY } else { best.0 };
    SupResult { value, argmax: best.1, status, blocks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_peak() {
        let (v, x) = golden(&|x: f64| 1.0 - (x - 0.3).powi(2), -1.0, 2.0, 60);
        assert!((x - 0.3).abs() < 1e-6 && (v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lebesgue_sup_of_indicator() {
        let q = Potential::Indicator { lo: 0.0, hi: 1.0, value: 2.0 };
        let s = sup_pairing(&q, &PairKernel::Lebesgue, 0.25, &SupConfig::default());
        assert!((s.value - 1.0).abs() < 1e-8, "{s:?}");
        assert_eq!(s.status, SupStatus::Attained);
    }

    #[test]
    fn comb_lebesgue_sup_is_one_block() {
        let s = sup_pairing(&Potential::comb(), &PairKernel::Lebesgue, 0.05, &SupConfig::default());
        assert!((s.value - 1.0).abs() < 1e-6, "{s:?}");
        assert_eq!(s.status, SupStatus::Converged);
    }
}
