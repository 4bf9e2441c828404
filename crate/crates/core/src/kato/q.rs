//! Potentials q. Values are taken in absolute value throughout; in d > 1 a
//! potential is read radially, q(x) = q₁(|x|).

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

fn one() -> f64 {
    1.0
}

fn default_k_max() -> usize {
    40
}

/// Which side of the center a one-sided power singularity lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PowerSide {
    #[default]
    Both,
    Right,
    Left,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Potential {
    Constant { value: f64 },
    /// value·1_{[lo, hi]}.
    Indicator {
        lo: f64,
        hi: f64,
        #[serde(default = "one")]
        value: f64,
    },
    /// coeff·|x − center|^{−exponent} on 0 < |x − center| < radius.
    Power {
        #[serde(default)]
        center: f64,
        exponent: f64,
        #[serde(default = "one")]
        radius: f64,
        #[serde(default)]
        side: PowerSide,
        #[serde(default = "one")]
        coeff: f64,
    },
    /// coeff·ln(1/|x − center|) on |x − center| < radius ≤ 1.
    Log {
        #[serde(default)]
        center: f64,
        radius: f64,
        #[serde(default = "one")]
        coeff: f64,
    },
    /// Σ_{k≥1} 2^k·1_{(k, k+2^{−k})}. Blocks past `k_max` are replaced by
    /// density 1 on [k, k+1), which keeps each unit of mass in place.
    Comb {
        #[serde(default = "default_k_max")]
        k_max: usize,
    },
    /// Linear interpolation of samples, 0 outside [x₀, x_n].
    Grid { x: Vec<f64>, values: Vec<f64> },
    Sum { terms: Vec<Potential> },
}

impl Potential {
    pub fn comb() -> Potential {
        Potential::Comb { k_max: default_k_max() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidPotential(m.into()));
        match self {
            Potential::Constant { value } if !value.is_finite() => bad("constant must be finite"),
            Potential::Indicator { lo, hi, value } if !(lo < hi) || !value.is_finite() => bad("indicator needs lo < hi"),
            Potential::Power { exponent, radius, coeff, center, .. }
                if !exponent.is_finite() || !(*radius > 0.0) || !coeff.is_finite() || !center.is_finite() =>
            {
                bad("power needs finite exponent, coeff and radius > 0")
            }
            Potential::Log { radius, .. } if !(*radius > 0.0 && *radius <= 1.0) => bad("log radius must lie in (0, 1]"),
            Potential::Comb { k_max } if *k_max < 8 || *k_max > 60 => bad("comb k_max must lie in [8, 60]"),
            Potential::Grid { x, values } => {
                if x.len() < 2 || x.len() != values.len() || x.windows(2).any(|w| !(w[1] > w[0])) || values.iter().any(|v| !v.is_finite()) {
                    bad("grid needs ≥ 2 increasing abscissae and finite values")
                } else {
                    Ok(())
                }
            }
            Potential::Sum { terms } => terms.iter().try_for_each(|t| t.validate()),
            _ => Ok(()),
        }
    }

    /// |q(x)|; +∞ exactly at a non-integrable-looking singular point.
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Potential::Constant { value } => value.abs(),
            Potential::Indicator { lo, hi, value } => {
                if x >= *lo && x <= *hi { value.abs() } else { 0.0 }
            }
            Potential::Power { center, exponent, radius, side, coeff } => {
                let d = x - center;
                let inside = match side {
                    PowerSide::Both => d.abs() < *radius,
                    PowerSide::Right => d >= 0.0 && d < *radius,
                    PowerSide::Left => d <= 0.0 && -d < *radius,
                };
                if !inside {
                    0.0
                } else if d == 0.0 {
                    if *exponent > 0.0 { f64::INFINITY } else if *exponent == 0.0 { coeff.abs() } else { 0.0 }
                } else {
                    coeff.abs() * d.abs().powf(-exponent)
                }
            }
            Potential::Log { center, radius, coeff } => {
                let d = (x - center).abs();
                if d >= *radius {
                    0.0
                } else if d == 0.0 {
                    f64::INFINITY
                } else {
                    coeff.abs() * -d.ln()
                }
            }
            Potential::Comb { k_max } => {
                if x <= 1.0 {
                    return 0.0;
                }
                let k = x.floor();
                if k as usize > *k_max {
                    return 1.0;
                }
                let w = (-k).exp2();
                if x > k && x < k + w { k.exp2() } else { 0.0 }
            }
            Potential::Grid { x: xs, values } => {
                if x < xs[0] || x > *xs.last().unwrap() {
                    return 0.0;
                }
                let i = xs.partition_point(|&v| v <= x).clamp(1, xs.len() - 1);
                let (x0, x1) = (xs[i - 1], xs[i]);
                let f = (x - x0) / (x1 - x0);
                (values[i - 1] + f * (values[i] - values[i - 1])).abs()
            }
            Potential::Sum { terms } => terms.iter().map(|t| t.eval(x)).sum(),
        }
    }

    /// Jump/kink locations inside (a, b), sorted.
    pub fn breakpoints(&self, a: f64, b: f64) -> Vec<f64> {
        let mut out = Vec::new();
        self.push_breaks(a, b, &mut out);
        out.retain(|&p| p > a && p < b);
        out.sort_by(|x, y| x.partial_cmp(y).unwrap());
        out.dedup();
        out
    }

    fn push_breaks(&self, a: f64, b: f64, out: &mut Vec<f64>) {
        match self {
            Potential::Constant { .. } => {}
            Potential::Indicator { lo, hi, .. } => out.extend([*lo, *hi]),
            Potential::Power { center, radius, side, .. } => {
                out.push(*center);
                match side {
                    PowerSide::Both => out.extend([center - radius, center + radius]),
                    PowerSide::Right => out.push(center + radius),
                    PowerSide::Left => out.push(center - radius),
                }
            }
            Potential::Log { center, radius, .. } => out.extend([center - radius, *center, center + radius]),
            Potential::Comb { k_max } => {
                let lo = a.floor().max(1.0) as usize;
                let hi = b.ceil().min(1e7).max(0.0) as usize;
                for k in lo..=hi {
                    out.push(k as f64);
                    if k <= *k_max {
                        out.push(k as f64 + (-(k as f64)).exp2());
                    }
                }
            }
            Potential::Grid { x, .. } => {
                let i0 = x.partition_point(|&v| v <= a).saturating_sub(1);
                let i1 = x.partition_point(|&v| v < b).min(x.len() - 1);
                out.extend_from_slice(&x[i0..=i1]);
            }
            Potential::Sum { terms } => terms.iter().for_each(|t| t.push_breaks(a, b, out)),
        }
    }

    /// Points where |q| is unbounded, with the local exponent p in |q| ≈ |x−c|^{−p}
    /// (0 for logarithms) and the side(s) it applies to.
    pub fn singularities(&self) -> Vec<Singularity> {
        match self {
            Potential::Power { center, exponent, side, .. } if *exponent > 0.0 => {
                vec![Singularity { at: *center, exponent: *exponent, side: *side }]
            }
            Potential::Log { center, .. } => vec![Singularity { at: *center, exponent: 0.0, side: PowerSide::Both }],
            Potential::Sum { terms } => terms.iter().flat_map(|t| t.singularities()).collect(),
            _ => vec![],
        }
    }

    /// Average density of |q| far out, used against kernel mass outside a table.
    pub fn far_density(&self) -> f64 {
        match self {
            Potential::Constant { value } => value.abs(),
            Potential::Comb { .. } => 1.0,
            Potential::Sum { terms } => terms.iter().map(|t| t.far_density()).sum(),
            _ => 0.0,
        }
    }

    pub fn bounded(&self) -> bool {
        match self {
            Potential::Constant { .. } | Potential::Indicator { .. } | Potential::Grid { .. } => true,
            Potential::Power { exponent, .. } => *exponent <= 0.0,
            Potential::Log { .. } | Potential::Comb { .. } => false,
            Potential::Sum { terms } => terms.iter().all(|t| t.bounded()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Potential::Constant { value } | Potential::Indicator { value, .. } => *value == 0.0,
            Potential::Power { coeff, .. } | Potential::Log { coeff, .. } => *coeff == 0.0,
            Potential::Comb { .. } => false,
            Potential::Grid { values, .. } => values.iter().all(|v| *v == 0.0),
            Potential::Sum { terms } => terms.iter().all(|t| t.is_zero()),
        }
    }

    /// Translation invariant (so the supremum over x is attained anywhere).
    pub fn is_constant(&self) -> bool {
        match self {
            Potential::Constant { .. } => true,
            Potential::Sum { terms } => terms.iter().all(|t| t.is_constant() || t.is_zero()),
            _ => self.is_zero(),
        }
    }

    /// Smallest interval containing the support, None when unbounded.
    pub fn support(&self) -> Option<(f64, f64)> {
        match self {
            Potential::Constant { value } => if *value == 0.0 { Some((0.0, 0.0)) } else { None },
            Potential::Indicator { lo, hi, .. } => Some((*lo, *hi)),
            Potential::Power { center, radius, side, .. } => Some(match side {
                PowerSide::Both => (center - radius, center + radius),
                PowerSide::Right => (*center, center + radius),
                PowerSide::Left => (center - radius, *center),
            }),
            Potential::Log { center, radius, .. } => Some((center - radius, center + radius)),
            Potential::Comb { .. } => None,
            Potential::Grid { x, .. } => Some((x[0], *x.last().unwrap())),
            Potential::Sum { terms } => {
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for t in terms {
                    if t.is_zero() {
                        continue;
                    }
                    let (a, b) = t.support()?;
                    lo = lo.min(a);
                    hi = hi.max(b);
                }
                Some((lo, hi))
            }
        }
    }

    /// Whether the comb structure drives the supremum.
    pub fn comb_k_max(&self) -> Option<usize> {
        match self {
            Potential::Comb { k_max } => Some(*k_max),
            Potential::Sum { terms } => terms.iter().find_map(|t| t.comb_k_max()),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Singularity {
    pub at: f64,
    pub exponent: f64,
    pub side: PowerSide,
}

impl Singularity {
    /// Whether the singularity is felt when approaching `at` from the right (`right = true`) or left.
    pub fn on_side(&self, right: bool) -> bool {
        match self.side {
            PowerSide::Both => true,
            PowerSide::Right => right,
            PowerSide::Left => !right,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comb_blocks_have_unit_mass() {
        let q = Potential::comb();
        assert_eq!(q.eval(3.1), 8.0);
        assert_eq!(q.eval(3.2), 0.0);
        assert_eq!(q.eval(0.5), 0.0);
        assert_eq!(q.eval(45.5), 1.0);
        let b = q.breakpoints(2.5, 4.5);
        assert_eq!(b, vec![3.0, 3.125, 4.0, 4.0625]);
    }

    #[test]
    fn json_round_trip() {
        let q: Potential = serde_json::from_str(r#"{"type":"power","exponent":0.5}"#).unwrap();
        assert_eq!(q, Potential::Power { center: 0.0, exponent: 0.5, radius: 1.0, side: PowerSide::Both, coeff: 1.0 });
        assert_eq!(q.eval(0.25), 2.0);
        assert!(q.eval(0.0).is_infinite());
        let s = serde_json::to_string(&Potential::comb()).unwrap();
        assert_eq!(serde_json::from_str::<Potential>(&s).unwrap(), Potential::comb());
    }

    #[test]
    fn grid_interpolates() {
        let q = Potential::Grid { x: vec![0.0, 1.0, 3.0], values: vec![0.0, 2.0, -2.0] };
        assert_eq!(q.eval(0.5), 1.0);
        assert_eq!(q.eval(2.5), 1.0);
        assert_eq!(q.eval(4.0), 0.0);
        assert!(q.bounded());
    }
}
