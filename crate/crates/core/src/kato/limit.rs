//! Numeric rule deciding whether a profile tends to 0.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Limit {
    Zero,
    Positive,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LimitRule {
    /// Final value below eps_rel·first counts as 0.
    pub eps_rel: f64,
    /// Last three values within this relative band count as a plateau.
    pub plateau: f64,
    /// Log-log decay slope that also counts as tending to 0.
    pub slope_min: f64,
}

impl Default for LimitRule {
    fn default() -> Self {
        LimitRule { eps_rel: 1e-3, plateau: 0.01, slope_min: 0.1 }
    }
}

impl LimitRule {
    /// `params` decrease towards 0; `values` are the sup-functional at each.
    /// `lower_bounds_only` marks profiles whose values may underestimate the sup.
    pub fn decide(&self, params: &[f64], values: &[f64], lower_bounds_only: bool) -> (Limit, String) {
        if values.iter().any(|v| v.is_infinite()) {
            return (Limit::Positive, "infinite supremum".into());
        }
        if values.iter().any(|v| v.is_nan()) {
            return (Limit::Inconclusive, "undefined value".into());
        }
        let n = values.len();
        if n < 3 {
            return (Limit::Inconclusive, "fewer than three points".into());
        }
        if values.iter().all(|&v| v == 0.0) {
            return (Limit::Zero, "identically zero".into());
        }
        let tail = &values[n - 3..];
        let decreasing = tail.windows(2).all(|w| w[1] < w[0]);
        let (lo, hi) = tail.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
        if hi > 0.0 && (hi - lo) <= self.plateau * hi {
            return (Limit::Positive, format!("plateau at {hi:.4e} within {:.1}%", 100.0 * self.plateau));
        }
        if decreasing {
            let small = values[n - 1] < self.eps_rel * values[0];
            let slope = loglog_slope(params, values);
            if small || slope >= self.slope_min {
                if lower_bounds_only {
                    return (Limit::Inconclusive, "decreasing, but some suprema are only lower bounds".into());
                }
                return (Limit::Zero, format!("decreasing, final/first = {:.3e}, log-log slope {slope:.3}", values[n - 1] / values[0]));
            }
            return (Limit::Inconclusive, format!("decreasing too slowly (slope {slope:.3})"));
        }
        (Limit::Inconclusive, "neither decreasing nor flat".into())
    }
}

/// Least-squares slope of ln v against ln p over positive entries.
pub fn loglog_slope(params: &[f64], values: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = params.iter().zip(values).filter(|(p, v)| **p > 0.0 && **v > 0.0).map(|(p, v)| (p.ln(), v.ln())).collect();
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return f64::NAN;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
