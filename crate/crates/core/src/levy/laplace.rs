//! Laplace exponents of subordinators.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum LaplaceFamily {
    /// δ[(u+m)^α − m^α]; m = 0 is the α-stable subordinator.
    ShiftedStable { delta: f64, m: f64, alpha: f64 },
    /// log(1 + u^α).
    Log { alpha: f64 },
    /// u / log(1 + u^α).
    UOverLog { alpha: f64 },
}

/// φ(u) = b·u + family(u).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaplaceExponent {
    #[serde(flatten)]
    pub family: LaplaceFamily,
    #[serde(default)]
    pub drift: f64,
    /// Declared shift a ≥ 0 with a + φ a special Bernstein function.
    #[serde(default)]
    pub sbf_shift: Option<f64>,
}

/// ln(1+w) with care for small |w|.
fn ln1p_c(w: C64) -> C64 {
    if w.norm() < 1e-5 {
        w - w * w / 2.0 + w * w * w / 3.0
    } else {
        (C64::new(1.0, 0.0) + w).ln()
    }
}

impl LaplaceExponent {
    pub fn new(family: LaplaceFamily) -> Self {
        LaplaceExponent { family, drift: 0.0, sbf_shift: None }
    }

    pub fn stable(alpha: f64, scale: f64) -> Self {
        Self::new(LaplaceFamily::ShiftedStable { delta: scale, m: 0.0, alpha })
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self.family {
            LaplaceFamily::ShiftedStable { delta, m, alpha } => delta > 0.0 && m >= 0.0 && alpha > 0.0 && alpha < 1.0,
            LaplaceFamily::Log { alpha } => alpha > 0.0 && alpha <= 1.0,
            LaplaceFamily::UOverLog { alpha } => alpha > 0.0 && alpha < 1.0,
        };
        if !ok || !(self.drift >= 0.0) {
            return Err(Error::InvalidSpec(format!("Laplace exponent parameters out of range: {:?}", self)));
        }
        if let Some(a) = self.sbf_shift {
            if !(a >= 0.0) {
                return Err(Error::InvalidSpec("SBF shift must be ≥ 0".into()));
            }
        }
        Ok(())
    }

    /// Extension to Re w ≥ 0 on the principal branch; ψ(ξ) = φ(−iξ).
    pub fn eval_complex(&self, w: C64) -> C64 {
        let base = match self.family {
            LaplaceFamily::ShiftedStable { delta, m, alpha } => {
                if m == 0.0 {
                    w.powf(alpha) * delta
                } else {
                    let mm = C64::new(m, 0.0);
                    // (w+m)^α − m^α = m^α[(1 + w/m)^α − 1], kept accurate for small w.
                    let r = w / mm;
                    let d = if r.norm() < 1e-6 { r * alpha + r * r * (alpha * (alpha - 1.0) / 2.0) } else { (C64::new(1.0, 0.0) + r).powf(alpha) - 1.0 };
                    d * (delta * m.powf(alpha))
                }
            }
            LaplaceFamily::Log { alpha } => ln1p_c(w.powf(alpha)),
            LaplaceFamily::UOverLog { alpha } => {
                if w.norm() == 0.0 {
                    C64::new(0.0, 0.0)
                } else {
                    w / ln1p_c(w.powf(alpha))
                }
            }
        };
        base + w * self.drift
    }

    pub fn eval(&self, u: f64) -> f64 {
        self.eval_complex(C64::new(u, 0.0)).re
    }

    pub fn deriv(&self, u: f64) -> f64 {
        let d = match self.family {
            LaplaceFamily::ShiftedStable { delta, m, alpha } => delta * alpha * (u + m).powf(alpha - 1.0),
            LaplaceFamily::Log { alpha } => alpha * u.powf(alpha - 1.0) / (1.0 + u.powf(alpha)),
            LaplaceFamily::UOverLog { alpha } => {
                let l = u.powf(alpha).ln_1p();
                (l - alpha * u.powf(alpha) / (1.0 + u.powf(alpha))) / (l * l)
            }
        };
        d + self.drift
    }

    pub fn is_unbounded(&self) -> bool {
        true
    }

    pub fn has_zero_drift(&self) -> bool {
        self.drift == 0.0
    }

    /// Lévy density of the jump part, when a closed form is known.
    pub fn levy_density(&self, z: f64) -> Option<f64> {
        match self.family {
            LaplaceFamily::ShiftedStable { delta, m, alpha } => {
                let g = statrs::function::gamma::gamma(1.0 - alpha);
                Some(delta * alpha / g * z.powf(-1.0 - alpha) * (-m * z).exp())
            }
            _ => None,
        }
    }

    /// Necessary sampled conditions for a Bernstein function: φ ≥ 0, φ nondecreasing,
    /// φ concave, and alternating signs of the first three finite differences.
    pub fn check_bernstein_sampled(&self, grid: &[f64]) -> Result<()> {
        if grid.len() < 4 {
            return Err(Error::EmptyGrid);
        }
        let v: Vec<f64> = grid.iter().map(|&u| self.eval(u)).collect();
        let tol = 1e-12;
        for (i, w) in v.windows(2).enumerate() {
            if v[i] < -tol || w[1] < w[0] - tol * w[0].abs().max(1.0) {
                return Err(Error::InvalidSpec(format!("φ not nonnegative nondecreasing near u = {}", grid[i])));
            }
        }
        // Concavity and third differences on an equally spaced copy of the grid.
        let (a, b) = (grid[0], grid[grid.len() - 1]);
        let h = (b - a) / 64.0;
        let s: Vec<f64> = (0..=64).map(|i| self.eval(a + h * i as f64)).collect();
        for i in 0..s.len() - 3 {
            let d2 = s[i + 2] - 2.0 * s[i + 1] + s[i];
            let d3 = s[i + 3] - 3.0 * s[i + 2] + 3.0 * s[i + 1] - s[i];
            let sc = s[i + 3].abs().max(1e-300) * 1e-9;
            if d2 > sc || d3 < -sc {
                return Err(Error::InvalidSpec(format!("φ fails sampled complete-monotonicity near u = {}", a + h * i as f64)));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stable_subordinator_exponent() {
        let phi = LaplaceExponent::stable(0.5, 1.0);
        assert!((phi.eval(4.0) - 2.0).abs() < 1e-14);
        let psi = phi.eval_complex(C64::new(0.0, -4.0));
        // (−4i)^{1/2} = 2 e^{−iπ/4}
        assert!((psi - C64::from_polar(2.0, -std::f64::consts::FRAC_PI_4)).norm() < 1e-14);
        assert!((phi.deriv(4.0) - 0.25).abs() < 1e-14);
    }

    #[test]
    fn families_pass_sampled_bernstein_checks() {
        let grid: Vec<f64> = (1..50).map(|i| 0.1 * i as f64).collect();
        for fam in [
            LaplaceFamily::ShiftedStable { delta: 1.0, m: 2.0, alpha: 0.5 },
            LaplaceFamily::Log { alpha: 1.0 },
            LaplaceFamily::UOverLog { alpha: 0.5 },
        ] {
            LaplaceExponent::new(fam).check_bernstein_sampled(&grid).unwrap();
        }
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        for fam in [
            LaplaceFamily::ShiftedStable { delta: 1.3, m: 2.0, alpha: 0.4 },
            LaplaceFamily::Log { alpha: 0.7 },
            LaplaceFamily::UOverLog { alpha: 0.5 },
        ] {
            let p = LaplaceExponent::new(fam);
            for &u in &[0.3, 2.0, 50.0] {
                let h = 1e-5 * u;
                let fd = (p.eval(u + h) - p.eval(u - h)) / (2.0 * h);
                assert!((fd - p.deriv(u)).abs() < 1e-6 * p.deriv(u).abs().max(1.0));
            }
        }
    }
}
