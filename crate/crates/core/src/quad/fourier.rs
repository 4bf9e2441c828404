//! Inversion of Fourier transforms of real densities:
//! (1/π) ∫₀^∞ Re(e^{-izξ} f(ξ)) dξ, i.e. (2π)^{-1} ∫_ℝ e^{-izξ} f(ξ) dξ when f(-ξ) = conj f(ξ).
//!
//! The half-line is split into a non-oscillatory head, integrated on geometric
//! panels, and an oscillatory tail cut into half-periods π/|z| whose partial sums
//! are accelerated by Wynn's epsilon algorithm.

use super::gk::{integrate, QuadResult, Tol};
use super::wynn::wynn_epsilon;
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy)]
pub struct InvertOptions {
    /// Relative accuracy target, measured against the natural scale sup|f|·ξ_half/π.
    pub rel: f64,
    /// Cap on half-period panels in the oscillatory tail.
    pub max_panels: usize,
    /// Cap on doubling panels when there is no oscillation to exploit.
    pub max_doublings: usize,
}

impl Default for InvertOptions {
    fn default() -> Self {
        InvertOptions { rel: 1e-11, max_panels: 600, max_doublings: 160 }
    }
}

/// Scale probe: (sup |f| seen, ξ where |f| first halves, ξ beyond which |f| is negligible).
fn probe<F: Fn(f64) -> Complex64>(f: &F) -> (f64, f64, Option<f64>) {
    let mut fmax: f64 = 0.0;
    let mut xi_half = None;
    let mut decay = None;
    let mut small_run = 0;
    let f0 = f(1e-300_f64.max(f64::MIN_POSITIVE)).norm();
    let base = f(2f64.powi(-60)).norm().max(f0);
    for k in -60..=80 {
        let xi = 2f64.powi(k);
        let v = f(xi).norm();
        if !v.is_finite() {
            continue;
        }
        fmax = fmax.max(v);
        if xi_half.is_none() && v < 0.5 * base {
            xi_half = Some(xi);
        }
        if v < 1e-18 * fmax.max(base) {
            small_run += 1;
            if small_run == 1 {
                decay = Some(xi);
            }
            if small_run >= 3 {
                break;
            }
        } else {
            small_run = 0;
            decay = None;
        }
    }
    let fmax = fmax.max(base);
    (fmax, xi_half.unwrap_or(2f64.powi(80)), if small_run >= 3 { decay } else { None })
}

/// (1/π)∫₀^∞ Re(e^{-izξ} f(ξ)) dξ.
pub fn invert<F: Fn(f64) -> Complex64>(f: F, z: f64, opts: InvertOptions) -> QuadResult {
    let (fmax, xi_half, decay) = probe(&f);
    let scale = fmax * xi_half / PI;
    let abs_tol = opts.rel * scale;
    let g = |xi: f64| -> f64 {
        let v = f(xi);
        if xi == 0.0 {
            return v.re;
        }
        let (s, c) = (z * xi).sin_cos();
        // Re((c - i s)(v.re + i v.im)) = c v.re + s v.im
        c * v.re + s * v.im
    };
    let end = decay.unwrap_or(f64::INFINITY);
    let period = if z != 0.0 { PI / z.abs() } else { f64::INFINITY };
    let head_end = end.min(period);

    // Geometric head: [0, xi_half·2^-40], then doublings up to head_end.
    let mut total = QuadResult::zero();
    let mut a = 0.0;
    let mut b = (xi_half * 2f64.powi(-40)).min(head_end);
    let panel_tol = Tol { abs: abs_tol / 16.0, rel: opts.rel * 0.1, max_panels: 400 };
    let mut partial: Vec<f64> = Vec::new();
    let mut doublings = 0;
    loop {
        let r = integrate(g, a, b, panel_tol);
        total = total.add(r);
        if b >= head_end {
            break;
        }
        a = b;
        b = (2.0 * b).min(head_end);
        if b.is_infinite() {
            b = 2.0 * a;
        }
        // Only the pure doubling regime (z == 0, slow decay) needs acceleration.
        if head_end.is_infinite() {
            partial.push(total.value);
            doublings += 1;
            if partial.len() >= 6 && a > xi_half * 64.0 {
                let (est, err) = wynn_epsilon(&partial[partial.len().saturating_sub(12)..]);
                let last_inc = (partial[partial.len() - 1] - partial[partial.len() - 2]).abs();
                if last_inc < abs_tol * 0.1 {
                    return finish(total, true);
                }
                if err < abs_tol && partial.len() >= 8 {
                    return finish(QuadResult { value: est, error: total.error + err, ..total }, true);
                }
            }
            if doublings > opts.max_doublings {
                let (est, err) = wynn_epsilon(&partial[partial.len().saturating_sub(12)..]);
                return finish(QuadResult { value: est, error: total.error + err, ..total }, false);
            }
        }
    }
    if head_end >= end {
        return finish(total, true);
    }

    // Oscillatory tail: half-period panels from `period` onwards.
    let mut sums: Vec<f64> = Vec::new();
    let mut k = 1usize;
    let mut running = total;
    let mut last_est = f64::NAN;
    let mut stable_hits = 0;
    while k <= opts.max_panels {
        let pa = period * k as f64;
        if pa >= end {
            return finish(running, true);
        }
        let pb = (pa + period).min(end);
        let r = integrate(g, pa, pb, panel_tol);
        running = running.add(r);
        sums.push(running.value);
        if r.value.abs() < abs_tol * 1e-3 && k > 3 {
            // Amplitude is gone (fast decay inside the decay probe's resolution).
            stable_hits += 1;
            if stable_hits >= 3 {
                return finish(running, true);
            }
        }
        if sums.len() >= 5 {
            let window = &sums[sums.len().saturating_sub(24)..];
            let (est, err) = wynn_epsilon(window);
            if last_est.is_finite() && (est - last_est).abs() < abs_tol && err < 10.0 * abs_tol {
                return finish(QuadResult { value: est, error: running.error + err, ..running }, true);
            }
            last_est = est;
        }
        k += 1;
    }
    let window = &sums[sums.len().saturating_sub(24)..];
    let (est, err) = wynn_epsilon(window);
    finish(QuadResult { value: est, error: running.error + err, ..running }, err < 100.0 * abs_tol)
}

fn finish(r: QuadResult, ok: bool) -> QuadResult {
    QuadResult { value: r.value / PI, error: r.error / PI, evals: r.evals, converged: r.converged && ok }
}
