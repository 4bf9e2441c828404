//! Increment samplers for one-dimensional specs and the space-time process.
//!
//! Exact schemes: Gaussian part, drift, finite jump measures (Poisson counts),
//! symmetric stable measures (Chambers–Mallows–Stuck) and stable subordinators
//! (Kanter). Any other infinite-activity measure keeps its jumps above ε_J and
//! replaces the rest by a centred Gaussian of matching variance.

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::levy::{dyadic_weight, stable_density_constant, JumpLaw, LaplaceFamily, MeasurePart, ProcessSpec, Side};
use crate::quad::{gk15, integrate_singular_ends, Tol};
use crate::{Error, Result};

/// Treatment of jumps below ε_J.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SmallJumps {
    /// Centred Gaussian with the variance of the removed jumps.
    Gaussian,
    /// Removed outright (biased; used as a negative control).
    Drop,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub seed: u64,
    /// Fixed truncation level; chosen from `jump_rate` when absent.
    pub eps_j: Option<f64>,
    /// Target intensity of the retained jumps when ε_J is automatic.
    pub jump_rate: f64,
    pub small_jumps: SmallJumps,
    /// Use the exact stable generators when available.
    pub exact_stable: bool,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig { seed: 42, eps_j: None, jump_rate: 200.0, small_jumps: SmallJumps::Gaussian, exact_stable: true }
    }
}

/// What truncation costs: ∫_{|z|<ε}|z|ν(dz) bounds the pathwise bias per unit time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    pub eps_j: f64,
    #[serde(with = "crate::util::float")]
    pub abs_moment_below: f64,
    pub variance_below: f64,
    pub small_jumps: SmallJumps,
}

/// Sampler for the jump sizes of one finite piece of the measure.
#[derive(Debug, Clone)]
enum JumpSource {
    Law(JumpLaw),
    /// Cumulative weights and locations.
    Atoms { cum: Vec<f64>, at: Vec<f64> },
    /// Piecewise power-law density on log-spaced cells of (a, b), with sign.
    Table { z: Vec<f64>, cum: Vec<f64>, slope: Vec<f64>, sign: f64 },
}

impl JumpSource {
    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        match self {
            JumpSource::Law(JumpLaw::Atom { at }) => *at,
            JumpSource::Law(JumpLaw::Normal { mean, sd }) => mean + sd * rng.sample::<f64, _>(StandardNormal),
            JumpSource::Law(JumpLaw::Uniform { lo, hi }) => rng.random_range(*lo..*hi),
            JumpSource::Atoms { cum, at } => {
                let u = rng.random::<f64>() * cum[cum.len() - 1];
                at[cum.partition_point(|&c| c <= u).min(at.len() - 1)]
            }
            JumpSource::Table { z, cum, slope, sign } => {
                let total = cum[cum.len() - 1];
                let u = rng.random::<f64>() * total;
                let i = cum.partition_point(|&c| c <= u).clamp(1, z.len() - 1) - 1;
                // Inside the cell the density is ∝ z^s; invert its CDF.
                let f = ((u - cum[i]) / (cum[i + 1] - cum[i])).clamp(0.0, 1.0);
                let (a, b, s) = (z[i], z[i + 1], slope[i] + 1.0);
                let v = if s.abs() < 1e-9 {
                    a * (b / a).powf(f)
                } else {
                    let (pa, pb) = (a.powf(s), b.powf(s));
                    (pa + f * (pb - pa)).powf(1.0 / s)
                };
                sign * v.clamp(a, b)
            }
        }
    }
}

/// One-sided density on (a, b) turned into a [`JumpSource::Table`] plus its mass.
fn tabulate(f: impl Fn(f64) -> f64, a: f64, b: f64, sign: f64) -> Option<(f64, JumpSource)> {
    const PER_DECADE: f64 = 64.0;
    let h = std::f64::consts::LN_10 / PER_DECADE;
    let mut z = vec![a];
    let mut cum = vec![0.0];
    let mut slope = Vec::new();
    let g = |u: f64| {
        let x = u.exp();
        x * f(x)
    };
    let mut u = a.ln();
    let ub = b.ln();
    while u < ub && z.len() < 4000 {
        let next = (u + h).min(ub);
        let (m, _) = gk15(&mut |v| g(v), u, next);
        let (fa, fb) = (f(u.exp()), f(next.exp()));
        let s = if fa > 0.0 && fb > 0.0 { (fb / fa).ln() / (next - u) } else { 0.0 };
        let total = cum[cum.len() - 1] + m.max(0.0);
        z.push(next.exp());
        cum.push(total);
        slope.push(s);
        u = next;
        // Heavy tails: stop once the remaining cells add nothing measurable.
        if b.is_infinite() && u > 0.0 && m < 1e-14 * total {
            break;
        }
    }
    let mass = cum[cum.len() - 1];
    (mass > 0.0).then_some((mass, JumpSource::Table { z, cum, slope, sign }))
}

/// One-sided Lévy density pieces (z > 0) of the measure parts that need truncation.
#[derive(Debug, Clone)]
struct HalfLine {
    sign: f64,
    lower: f64,
    upper: f64,
    density: Density,
}

#[derive(Debug, Clone)]
enum Density {
    /// c z^{-1-α} e^{-τz}
    Power { c: f64, alpha: f64, temper: f64 },
}

impl Density {
    fn eval(&self, z: f64) -> f64 {
        match *self {
            Density::Power { c, alpha, temper } => c * z.powf(-1.0 - alpha) * (-temper * z).exp(),
        }
    }
}

const TOL: Tol = Tol { abs: 1e-300, rel: 1e-10, max_panels: 2000 };

impl HalfLine {
    /// ∫_{a<z<b} z^k ν(dz) over this piece.
    fn moment(&self, k: i32, a: f64, b: f64) -> f64 {
        let (lo, hi) = (a.max(self.lower), b.min(self.upper));
        if !(hi > lo) {
            return 0.0;
        }
        let Density::Power { alpha, .. } = self.density;
        if lo == 0.0 && k as f64 - 1.0 - alpha <= -1.0 {
            return f64::INFINITY;
        }
        let f = |z: f64| z.powi(k) * self.density.eval(z);
        if hi.is_infinite() {
            let mid = lo.max(1.0);
            let head = if mid > lo { integrate_singular_ends(f, lo, mid, lo == 0.0, false, TOL).value } else { 0.0 };
            // z = mid/w maps (mid, ∞) to (0, 1).
            let tail = integrate_singular_ends(|w: f64| f(mid / w) * mid / (w * w), 0.0, 1.0, true, false, TOL).value;
            head + tail
        } else {
            integrate_singular_ends(f, lo, hi, lo == 0.0, false, TOL).value
        }
    }

    fn mass_above(&self, eps: f64) -> f64 {
        self.moment(0, eps, f64::INFINITY)
    }
}

#[derive(Debug, Clone)]
enum StablePart {
    /// ψ = scale|ξ|^α.
    Symmetric { alpha: f64, scale: f64 },
    /// Laplace exponent scale·u^α, α < 1.
    Positive { alpha: f64, scale: f64 },
}

impl StablePart {
    fn sample(&self, dt: f64, rng: &mut ChaCha8Rng) -> f64 {
        match *self {
            StablePart::Symmetric { alpha, scale } => (scale * dt).powf(1.0 / alpha) * cms_symmetric(alpha, rng),
            StablePart::Positive { alpha, scale } => (scale * dt).powf(1.0 / alpha) * kanter(alpha, rng),
        }
    }
}

/// Standard symmetric stable variable, E e^{iξS} = e^{−|ξ|^α}.
fn cms_symmetric(alpha: f64, rng: &mut ChaCha8Rng) -> f64 {
    let u = PI * (rng.random::<f64>() - 0.5);
    if alpha == 1.0 {
        return u.tan();
    }
    let w: f64 = rng.sample(Exp1);
    (alpha * u).sin() / u.cos().powf(1.0 / alpha) * (((1.0 - alpha) * u).cos() / w).powf((1.0 - alpha) / alpha)
}

/// Standard positive stable variable, E e^{−uS} = e^{−u^α}.
fn kanter(alpha: f64, rng: &mut ChaCha8Rng) -> f64 {
    let u = PI * rng.random::<f64>();
    let e: f64 = rng.sample(Exp1);
    (alpha * u).sin() / u.sin().powf(1.0 / alpha) * (((1.0 - alpha) * u).sin() / e).powf((1.0 - alpha) / alpha)
}

/// Path generator for one-dimensional specs and (t, X_t).
#[derive(Debug, Clone)]
pub struct PathSampler {
    pub spec: ProcessSpec,
    pub seed: u64,
    /// Linear drift after compensation.
    pub drift: f64,
    /// Variance per unit time of the Gaussian component (including replaced small jumps).
    pub variance: f64,
    stables: Vec<StablePart>,
    jump_rate: f64,
    sources: Vec<(f64, JumpSource)>,
    pub truncation: Option<Truncation>,
    pub space_time: bool,
}

impl PathSampler {
    pub fn new(spec: &ProcessSpec, cfg: &SamplerConfig) -> Result<PathSampler> {
        spec.validate()?;
        let (inner, space_time) = match spec {
            ProcessSpec::SpaceTime { x } => (x.as_ref(), true),
            s => (s, false),
        };
        if inner.dim() != 1 {
            return Err(Error::DimensionUnsupported("paths are simulated for one-dimensional specs and (t, X_t)".into()));
        }
        let mut s = PathSampler {
            spec: spec.clone(),
            seed: cfg.seed,
            drift: 0.0,
            variance: 0.0,
            stables: vec![],
            jump_rate: 0.0,
            sources: vec![],
            truncation: None,
            space_time,
        };
        let mut halves: Vec<HalfLine> = Vec::new();
        // Dyadic atoms: Σ f(2^n)(δ_{2^n} + δ_{−2^n}).
        let mut dyadic: Vec<(f64, f64, f64, f64)> = Vec::new();
        let mut uncompensated = false;
        match inner {
            ProcessSpec::Triplet(t) => {
                s.drift = t.gamma[0];
                s.variance = 2.0 * t.a[0][0];
                for part in &t.nu {
                    match part {
                        MeasurePart::Finite { rate, jump } => {
                            s.drift -= part.small_mean();
                            s.add_source(*rate, JumpSource::Law(jump.clone()));
                        }
                        MeasurePart::Atoms { atoms } => {
                            s.drift -= part.small_mean();
                            let mut cum = Vec::new();
                            let mut acc = 0.0;
                            for a in atoms {
                                acc += a.mass;
                                cum.push(acc);
                            }
                            s.add_source(acc, JumpSource::Atoms { cum, at: atoms.iter().map(|a| a.at[0]).collect() });
                        }
                        MeasurePart::Stable { alpha, scale } => {
                            if cfg.exact_stable {
                                s.stables.push(StablePart::Symmetric { alpha: *alpha, scale: *scale });
                            } else {
                                let c = stable_density_constant(*alpha, 1) * scale;
                                for sign in [1.0, -1.0] {
                                    halves.push(HalfLine { sign, lower: 0.0, upper: f64::INFINITY, density: Density::Power { c, alpha: *alpha, temper: 0.0 } });
                                }
                            }
                        }
                        MeasurePart::Power { coeff, alpha, lower, upper, side, temper } => {
                            let signs: &[f64] = match side {
                                Side::Positive => &[1.0],
                                Side::Negative => &[-1.0],
                                Side::Both => &[1.0, -1.0],
                            };
                            for &sign in signs {
                                halves.push(HalfLine { sign, lower: *lower, upper: *upper, density: Density::Power { c: *coeff, alpha: *alpha, temper: *temper } });
                            }
                        }
                        MeasurePart::Dyadic { m, beta, delta, alpha } => dyadic.push((*m, *beta, *delta, *alpha)),
                    }
                }
            }
            ProcessSpec::Subordinator { laplace } => {
                uncompensated = true;
                s.drift = laplace.drift;
                match laplace.family {
                    LaplaceFamily::ShiftedStable { delta, m, alpha } if m == 0.0 && cfg.exact_stable => {
                        s.stables.push(StablePart::Positive { alpha, scale: delta });
                    }
                    LaplaceFamily::ShiftedStable { delta, m, alpha } => {
                        let c = delta * alpha / statrs::function::gamma::gamma(1.0 - alpha);
                        halves.push(HalfLine { sign: 1.0, lower: 0.0, upper: f64::INFINITY, density: Density::Power { c, alpha, temper: m } });
                    }
                    _ => return Err(Error::Unsupported("no jump sampler for this Laplace exponent".into())),
                }
            }
            _ => return Err(Error::DimensionUnsupported("product specs are not simulated".into())),
        }

        if halves.is_empty() && dyadic.is_empty() {
            return Ok(s);
        }
        let eps = match cfg.eps_j {
            Some(e) if e > 0.0 => e,
            Some(e) => return Err(Error::InvalidSpec(format!("ε_J must be positive, got {e}"))),
            None => auto_eps(&halves, &dyadic, cfg.jump_rate),
        };
        let mut abs_below = 0.0;
        let mut var_below = 0.0;
        for h in &halves {
            abs_below += h.moment(1, 0.0, eps);
            var_below += h.moment(2, 0.0, eps);
            if uncompensated {
                // φ has no compensator: removed jumps keep their mean.
                s.drift += h.sign * h.moment(1, 0.0, eps);
            } else if eps < 1.0 {
                s.drift -= h.sign * h.moment(1, eps, 1.0);
            } else {
                s.drift += h.sign * h.moment(1, 1.0, eps);
            }
            if let Some((mass, src)) = tabulate(|z| h.density.eval(z), eps.max(h.lower), h.upper, h.sign) {
                s.add_source(mass, src);
            }
        }
        for &(m, beta, delta, alpha) in &dyadic {
            let mut at = Vec::new();
            let mut w = Vec::new();
            let mut n = (eps.log2().ceil()) as i32;
            loop {
                let z = 2f64.powi(n);
                let f = dyadic_weight(z, m, beta, delta, alpha);
                if z > 1.0 && (f < 1e-16 * w.iter().sum::<f64>() || n > 1000) {
                    break;
                }
                at.extend([z, -z]);
                w.extend([f, f]);
                n += 1;
            }
            // Atoms below ε: geometric sums over 2^n < ε (all in (0, 1] once ε ≤ 1).
            let n_top = (eps.log2().ceil()) as i32 - 1;
            for n in (n_top - 200..=n_top).rev() {
                let z = 2f64.powi(n);
                let f = dyadic_weight(z, m, beta, delta, alpha);
                abs_below += 2.0 * f * z;
                var_below += 2.0 * f * z * z;
            }
            if alpha >= 1.0 {
                abs_below = f64::INFINITY;
            }
            let mut cum = Vec::new();
            let mut acc = 0.0;
            for x in &w {
                acc += x;
                cum.push(acc);
            }
            s.add_source(acc, JumpSource::Atoms { cum, at });
        }
        if cfg.small_jumps == SmallJumps::Gaussian {
            s.variance += var_below;
        }
        s.truncation = Some(Truncation { eps_j: eps, abs_moment_below: abs_below, variance_below: var_below, small_jumps: cfg.small_jumps });
        Ok(s)
    }

    fn add_source(&mut self, rate: f64, src: JumpSource) {
        if rate > 0.0 {
            self.jump_rate += rate;
            self.sources.push((rate, src));
        }
    }

    /// Whether every component is sampled exactly in law.
    pub fn exact(&self) -> bool {
        self.truncation.is_none()
    }

    /// Total intensity of simulated jumps.
    pub fn jump_rate(&self) -> f64 {
        self.jump_rate
    }

    /// 1 for X, 2 for (t, X_t) with time first.
    pub fn state_dim(&self) -> usize {
        if self.space_time { 2 } else { 1 }
    }

    /// Independent stream for path `index`.
    pub fn rng(&self, index: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(index);
        r
    }

    /// X_{s+dt} − X_s.
    pub fn increment(&self, dt: f64, rng: &mut ChaCha8Rng) -> f64 {
        let mut x = self.drift * dt;
        if self.variance > 0.0 {
            x += (self.variance * dt).sqrt() * rng.sample::<f64, _>(StandardNormal);
        }
        for p in &self.stables {
            x += p.sample(dt, rng);
        }
        if self.jump_rate > 0.0 {
            let mean = self.jump_rate * dt;
            let n = if mean < 1e-12 { 0 } else { Poisson::new(mean).map(|p| p.sample(rng) as u64).unwrap_or(0) };
            for _ in 0..n {
                x += self.jump(rng);
            }
        }
        x
    }

    fn jump(&self, rng: &mut ChaCha8Rng) -> f64 {
        let mut u = rng.random::<f64>() * self.jump_rate;
        for (rate, src) in &self.sources {
            if u < *rate {
                return src.sample(rng);
            }
            u -= rate;
        }
        self.sources[self.sources.len() - 1].1.sample(rng)
    }

    /// Visits the state at times kδ, k = 0..n−1, starting from `start`.
    pub fn walk(&self, start: &[f64], dt: f64, n: usize, rng: &mut ChaCha8Rng, mut visit: impl FnMut(usize, &[f64])) {
        let mut state = start.to_vec();
        let last = state.len() - 1;
        for k in 0..n {
            visit(k, &state);
            if self.space_time {
                state[0] += dt;
            }
            state[last] += self.increment(dt, rng);
        }
    }
}

/// ε_J giving roughly `rate` retained jumps per unit time.
fn auto_eps(halves: &[HalfLine], dyadic: &[(f64, f64, f64, f64)], rate: f64) -> f64 {
    let mass = |eps: f64| -> f64 {
        let mut m: f64 = halves.iter().map(|h| h.mass_above(eps)).sum();
        for &(mm, beta, delta, alpha) in dyadic {
            let mut n = eps.log2().ceil() as i32;
            while n < 64 {
                m += 2.0 * dyadic_weight(2f64.powi(n), mm, beta, delta, alpha);
                n += 1;
            }
        }
        m
    };
    let (mut lo, mut hi) = (-40.0f64, 2.0f64);
    if mass(lo.exp()) <= rate {
        return lo.exp();
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if mass(mid.exp()) > rate { lo = mid } else { hi = mid }
    }
    hi.exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levy::family;
    use serde_json::json;

    #[test]
    fn kanter_half_has_levy_law() {
        // α = 1/2: S = 1/(4G) with G ~ Gamma(1/2, 1), so E[1/S] = 4·E[G] = 2.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 200_000;
        let m: f64 = (0..n).map(|_| 1.0 / kanter(0.5, &mut rng)).sum::<f64>() / n as f64;
        assert!((m - 2.0).abs() < 0.03, "{m}");
    }

    #[test]
    fn table_reproduces_truncated_pareto_mass() {
        let (mass, _) = tabulate(|z| z.powf(-1.5), 0.01, f64::INFINITY, 1.0).unwrap();
        // ∫_{0.01}^∞ z^{-3/2} dz = 2/√0.01 = 20
        assert!((mass - 20.0).abs() < 1e-6 * 20.0, "{mass}");
    }

    #[test]
    fn compound_poisson_is_exact_and_uncompensated() {
        let s = PathSampler::new(&family("cp", &json!({})).unwrap(), &SamplerConfig::default()).unwrap();
        assert!(s.exact());
        assert_eq!(s.drift, 0.0);
        assert_eq!(s.jump_rate(), 1.0);
    }

    #[test]
    fn truncated_stable_reports_its_cut() {
        let cfg = SamplerConfig { exact_stable: false, ..SamplerConfig::default() };
        let s = PathSampler::new(&family("stable", &json!({"alpha": 1.5})).unwrap(), &cfg).unwrap();
        let t = s.truncation.clone().unwrap();
        assert!((s.jump_rate() - 200.0).abs() < 1.0, "{}", s.jump_rate());
        // ∫_{|z|<ε} z² c|z|^{-5/2} dz = 2c ε^{1/2}/(1/2)
        let c = stable_density_constant(1.5, 1);
        assert!((t.variance_below - 4.0 * c * t.eps_j.sqrt()).abs() < 1e-8 * t.variance_below);
        assert!(t.abs_moment_below.is_infinite());
    }
}
