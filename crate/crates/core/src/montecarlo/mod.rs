//! Path simulation and Monte Carlo estimates of occupation functionals.
//!
//! Each path draws from its own ChaCha8 stream (seed, path index), and the
//! per-path values are summed in index order, so results do not depend on
//! the thread count.

pub mod sampler;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use sampler::{PathSampler, SamplerConfig, SmallJumps, Truncation};

use crate::kato::Potential;
use crate::levy::{psi_star_inverse, ProcessSpec, SCHEMA_VERSION};
use crate::{Error, Result};

/// Empirical characteristic function against e^{-tψ}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EcfReport {
    pub t: f64,
    pub n_paths: usize,
    pub xi: Vec<f64>,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MCEstimate {
    pub schema_version: u32,
    pub value: f64,
    pub std_error: f64,
    pub n_paths: usize,
    pub dt: f64,
    pub steps: usize,
    pub horizon: f64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<Truncation>,
}

impl MCEstimate {
    /// value ± 3·SE.
    pub fn interval(&self) -> (f64, f64) {
        (self.value - 3.0 * self.std_error, self.value + 3.0 * self.std_error)
    }

    pub fn covers(&self, x: f64) -> bool {
        let (lo, hi) = self.interval();
        lo <= x && x <= hi
    }
}

/// A function of the simulated state: X for one-dimensional specs, (s, X) for
/// the space-time process.
pub trait Observable: Sync {
    fn eval(&self, state: &[f64]) -> f64;
}

/// |q| at the spatial coordinate (the last one).
impl Observable for Potential {
    fn eval(&self, state: &[f64]) -> f64 {
        Potential::eval(self, state[state.len() - 1])
    }
}

/// |f(s)|·|g(x)| on the space-time state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Product {
    pub f: Potential,
    pub g: Potential,
}

impl Observable for Product {
    fn eval(&self, state: &[f64]) -> f64 {
        let v = self.f.eval(state[0]);
        if v == 0.0 { 0.0 } else { v * self.g.eval(state[state.len() - 1]) }
    }
}

fn start_state(s: &PathSampler, x: f64) -> Vec<f64> {
    if s.space_time { vec![0.0, x] } else { vec![x] }
}

/// Mean and standard error, summed in index order.
fn summarize(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = if values.len() > 1 { values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    (mean, (var / n).sqrt())
}

fn check_paths(n_paths: usize) -> Result<()> {
    if n_paths < 2 {
        return Err(Error::InvalidSpec("need at least two paths".into()));
    }
    Ok(())
}

/// E^x ∫₀^t |q(X_u)| du by the left Riemann sum δ Σ_{k<n} |q|(X_{kδ}), δ = t/steps.
pub fn estimate_time_functional(s: &PathSampler, q: &dyn Observable, x: f64, t: f64, n_paths: usize, steps: usize) -> Result<MCEstimate> {
    check_paths(n_paths)?;
    if !(t > 0.0 && t.is_finite()) || steps == 0 {
        return Err(Error::InvalidSpec(format!("need finite t > 0 and steps ≥ 1, got t={t}, steps={steps}")));
    }
    let dt = t / steps as f64;
    let start = start_state(s, x);
    let values: Vec<f64> = (0..n_paths as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = s.rng(i);
            let mut acc = 0.0;
            s.walk(&start, dt, steps, &mut rng, |_, st| acc += q.eval(st));
            acc * dt
        })
        .collect();
    let (value, std_error) = summarize(&values);
    Ok(MCEstimate {
        schema_version: SCHEMA_VERSION,
        value,
        std_error,
        n_paths,
        dt,
        steps,
        horizon: t,
        seed: s.seed,
        lambda: None,
        radius: None,
        truncation: s.truncation.clone(),
    })
}

/// E^x Σ_k δ e^{-λkδ} 1_{|X_{kδ} − x| < r} |q|(X_{kδ}) for every r in `radii` on the
/// same paths, with δ = min(T/1000, r_min²/16).
///
/// With `horizon = None`, T starts at 10/λ and doubles until e^{−λT}/λ is below
/// 1% of the smallest estimate. A fixed horizon that fails that test is an error.
pub fn estimate_space_profile(
    s: &PathSampler,
    q: &dyn Observable,
    x: f64,
    lambda: f64,
    radii: &[f64],
    horizon: Option<f64>,
    n_paths: usize,
) -> Result<Vec<MCEstimate>> {
    check_paths(n_paths)?;
    if !(lambda > 0.0) || radii.is_empty() || radii.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::InvalidSpec("need λ > 0 and positive radii".into()));
    }
    let mut t = horizon.unwrap_or(10.0 / lambda);
    for attempt in 0..8 {
        let est = space_once(s, q, x, lambda, radii, t, n_paths);
        let floor = est.iter().map(|e| e.value).fold(f64::INFINITY, f64::min);
        let tail = (-lambda * t).exp() / lambda;
        if tail < 0.01 * floor {
            return Ok(est);
        }
        if horizon.is_some() || attempt == 7 {
            return Err(Error::HorizonTooShort { tail, value: floor });
        }
        t *= 2.0;
    }
    unreachable!()
}

pub fn estimate_space_functional(
    s: &PathSampler,
    q: &dyn Observable,
    x: f64,
    lambda: f64,
    r: f64,
    horizon: Option<f64>,
    n_paths: usize,
) -> Result<MCEstimate> {
    Ok(estimate_space_profile(s, q, x, lambda, &[r], horizon, n_paths)?.remove(0))
}

fn space_once(s: &PathSampler, q: &dyn Observable, x: f64, lambda: f64, radii: &[f64], t: f64, n_paths: usize) -> Vec<MCEstimate> {
    let r_min = radii.iter().cloned().fold(f64::INFINITY, f64::min);
    let dt = (t / 1000.0).min(if r_min.is_finite() { r_min * r_min / 16.0 } else { f64::INFINITY });
    let steps = (t / dt).ceil() as usize;
    let start = start_state(s, x);
    let decay = (-lambda * dt).exp();
    let per_path: Vec<Vec<f64>> = (0..n_paths as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = s.rng(i);
            let mut acc = vec![0.0; radii.len()];
            let mut w = dt;
            s.walk(&start, dt, steps, &mut rng, |_, st| {
                let d = (st[st.len() - 1] - x).abs();
                if d < r_max(radii) {
                    let v = q.eval(st);
                    if v != 0.0 {
                        for (a, r) in acc.iter_mut().zip(radii) {
                            if d < *r {
                                *a += w * v;
                            }
                        }
                    }
                }
                w *= decay;
            });
            acc
        })
        .collect();
    radii
        .iter()
        .enumerate()
        .map(|(j, &r)| {
            let col: Vec<f64> = per_path.iter().map(|v| v[j]).collect();
            let (value, std_error) = summarize(&col);
            MCEstimate {
                schema_version: SCHEMA_VERSION,
                value,
                std_error,
                n_paths,
                dt,
                steps,
                horizon: t,
                seed: s.seed,
                lambda: Some(lambda),
                radius: Some(r),
                truncation: s.truncation.clone(),
            }
        })
        .collect()
}

fn r_max(radii: &[f64]) -> f64 {
    radii.iter().cloned().fold(0.0, f64::max)
}

/// Compares (1/n)Σe^{iξX_t} with e^{−tψ(ξ)} at 16 frequencies ξ_j = j·s/8, where
/// tψ*(s) = 1. Deviations beyond 4/√n give [`Error::SamplerMismatch`].
pub fn validate_sampler(s: &PathSampler, t: f64, n_paths: usize) -> Result<EcfReport> {
    check_paths(n_paths)?;
    let spec: &ProcessSpec = match &s.spec {
        ProcessSpec::SpaceTime { x } => x,
        other => other,
    };
    let scale = psi_star_inverse(spec, 1.0 / t);
    let xi: Vec<f64> = (1..=16).map(|j| scale * j as f64 / 8.0).collect();
    let steps = 16;
    let dt = t / steps as f64;
    let ends: Vec<f64> = (0..n_paths as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = s.rng(i);
            (0..steps).map(|_| s.increment(dt, &mut rng)).sum()
        })
        .collect();
    let n = n_paths as f64;
    let mut max_dev: f64 = 0.0;
    for &x in &xi {
        let ecf = ends.iter().fold(C64::new(0.0, 0.0), |acc, &e| acc + C64::from_polar(1.0, x * e)) / n;
        let cf = (-spec.psi1(x) * t).exp();
        max_dev = max_dev.max((ecf - cf).norm());
    }
    let tolerance = 4.0 / n.sqrt();
    let report = EcfReport { t, n_paths, xi, max_deviation: max_dev, tolerance, passed: max_dev <= tolerance };
    if report.passed {
        Ok(report)
    } else {
        Err(Error::SamplerMismatch(Box::new(report)))
    }
}
