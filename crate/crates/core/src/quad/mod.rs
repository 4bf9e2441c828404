//! Numerical integration: adaptive Gauss–Kronrod, series acceleration and
//! Fourier inversion of characteristic-function-type transforms.

mod fourier;
mod gk;
mod wynn;

pub use fourier::{invert, InvertOptions};
pub use gk::{gk15, integrate, integrate_singular_ends, integrate_with_breaks, QuadResult, Tol};
pub use wynn::wynn_epsilon;

/// Integral of `f` over `(0, b]` in the logarithmic variable, for integrands
/// behaving like a power `z^beta` (beta > -1) near zero. Below `z_lo` the
/// integrand is extrapolated as a pure power fitted at `z_lo`.
pub fn integrate_log0<F: FnMut(f64) -> f64>(mut f: F, z_lo: f64, b: f64, tol: Tol) -> QuadResult {
    if b <= 0.0 {
        return QuadResult::zero();
    }
    let lo = z_lo.min(b * 0.5);
    let (s0, s1) = (lo.ln(), b.ln());
    let n = ((s1 - s0) / 1.5).ceil().max(1.0) as usize;
    let breaks: Vec<f64> = (1..n).map(|i| s0 + (s1 - s0) * i as f64 / n as f64).collect();
    let body = integrate_with_breaks(|s| { let z = s.exp(); f(z) * z }, s0, s1, &breaks, tol);
    // Power-law remainder on (0, lo].
    let f1 = f(lo);
    let f2 = f(lo * 2.0);
    let rem = if f1 > 0.0 && f2 > 0.0 {
        let beta = (f2 / f1).ln() / std::f64::consts::LN_2;
        if beta > -1.0 { f1 * lo / (1.0 + beta) } else { f64::INFINITY }
    } else {
        f1.abs() * lo
    };
    body.add(QuadResult { value: rem, error: 0.1 * rem.abs(), evals: 2, converged: rem.is_finite() })
}
