//! Pointwise evaluation of p(t,z) and G_t^λ(z) for one-dimensional specs.

use num_complex::Complex64 as C64;
use std::f64::consts::LN_2;

use super::base::BaseDensity;
use crate::levy::{ProcessSpec, StableKind, StableStructure};
use crate::quad::{integrate_with_breaks, invert, InvertOptions, QuadResult, Tol};
use crate::{Error, Result};

/// Integrand-level tolerance shared by the time quadratures.
const TIME_TOL: Tol = Tol { abs: 1e-15, rel: 1e-10, max_panels: 4000 };

/// How the kernels of a spec are evaluated.
#[derive(Debug, Clone)]
pub enum Engine {
    /// Strictly stable part plus drift: exact self-similarity of p(u,·).
    Scaling(ScalingEngine),
    /// General spec: Fourier inversion of e^{-tψ} and of the time-integrated transform.
    Fourier(FourierEngine),
    /// Pure drift γ: G_t^λ(z) = e^{-λz/γ}/|γ| on z/γ ∈ (0,t).
    Drift { gamma: f64 },
    /// Compound Poisson: kernels are measures; see [`super::discrete`].
    Compound,
}

impl Engine {
    pub fn for_spec(spec: &ProcessSpec) -> Result<Engine> {
        spec.validate()?;
        if spec.dim() != 1 {
            return Err(Error::DimensionUnsupported("kernels are one-dimensional".into()));
        }
        if spec.gaussian_rank() == 0 && spec.nu_finite() && spec.gamma0().is_some_and(|g| g[0] == 0.0) {
            return Ok(Engine::Compound);
        }
        if let Some(s) = spec.stable_structure() {
            return Ok(match s.kind {
                StableKind::DriftOnly => Engine::Drift { gamma: s.drift },
                _ => Engine::Scaling(ScalingEngine::new(s)),
            });
        }
        Ok(Engine::Fourier(FourierEngine::new(spec.clone())))
    }

    /// p(t,z).
    pub fn transition(&self, t: f64, z: f64) -> Result<QuadResult> {
        // Symmetric laws are evaluated at |z| so that p(t,z) = p(t,−z) exactly.
        let z = if self.symmetric() { z.abs() } else { z };
        match self {
            Engine::Scaling(e) => Ok(exact(e.p(t, z))),
            Engine::Fourier(e) => e.transition(t, z),
            Engine::Drift { .. } => Err(Error::Unsupported("pure drift has no transition density".into())),
            Engine::Compound => Err(Error::AtomAtOrigin),
        }
    }

    /// G_t^λ(z) = ∫₀^t e^{-λu} p(u,z) du, with `t = ∞` allowed.
    pub fn potential(&self, lambda: f64, t: f64, z: f64) -> Result<QuadResult> {
        if !(lambda >= 0.0) || !(t > 0.0) {
            return Err(Error::InvalidSpec(format!("need λ ≥ 0 and t > 0, got λ={lambda}, t={t}")));
        }
        let z = if self.symmetric() { z.abs() } else { z };
        match self {
            Engine::Scaling(e) => e.potential(lambda, t, z),
            Engine::Fourier(e) => e.potential(lambda, t, z),
            Engine::Drift { gamma } => {
                let s = z / gamma;
                let v = if s > 0.0 && s < t { (-lambda * s).exp() / gamma.abs() } else { 0.0 };
                Ok(exact(v))
            }
            Engine::Compound => Err(Error::AtomAtOrigin),
        }
    }

    /// Table layout suited to this engine: inversions at tiny |z| are costly, so
    /// Fourier tables start higher and are sparser.
    pub fn table_config(&self, z_max: f64) -> super::TableConfig {
        match self {
            Engine::Fourier(_) => super::TableConfig { z_min: 1e-4, z_max, per_decade: 20 },
            _ => super::TableConfig { z_max, ..super::TableConfig::default() },
        }
    }

    /// Copy of the engine tuned for building tables.
    pub fn for_tables(&self) -> Engine {
        match self {
            Engine::Fourier(e) => Engine::Fourier(e.clone().with_rel(1e-6)),
            e => e.clone(),
        }
    }

    /// ψ is real: kernels are even.
    pub fn symmetric(&self) -> bool {
        match self {
            Engine::Scaling(e) => e.s.kind == StableKind::Symmetric && e.s.drift == 0.0,
            Engine::Fourier(e) => e.drift == 0.0 && e.spec.is_symmetric(),
            _ => false,
        }
    }

    pub fn drift(&self) -> f64 {
        match self {
            Engine::Scaling(e) => e.s.drift,
            Engine::Fourier(e) => e.drift,
            Engine::Drift { gamma } => *gamma,
            Engine::Compound => 0.0,
        }
    }

    /// Kernels vanish on z < 0 (subordinator-like specs).
    pub fn one_sided(&self) -> Option<f64> {
        match self {
            Engine::Scaling(e) => match e.s.kind {
                StableKind::Positive if e.s.alpha < 1.0 && e.s.drift >= 0.0 => Some(1.0),
                StableKind::Negative if e.s.alpha < 1.0 && e.s.drift <= 0.0 => Some(-1.0),
                _ => None,
            },
            Engine::Drift { gamma } => Some(gamma.signum()),
            _ => None,
        }
    }
}

fn exact(v: f64) -> QuadResult {
    QuadResult { value: v, error: 0.0, evals: 1, converged: true }
}

/// Total mass ∫G_t^λ: (1 − e^{-λt})/λ, t, or 1/λ.
pub fn total_mass(lambda: f64, t: f64) -> f64 {
    if t.is_infinite() {
        if lambda > 0.0 { 1.0 / lambda } else { f64::INFINITY }
    } else if lambda > 0.0 {
        -(-lambda * t).exp_m1() / lambda
    } else {
        t
    }
}

#[derive(Debug, Clone)]
pub struct ScalingEngine {
    pub s: StableStructure,
    base: BaseDensity,
    mirror: bool,
}

impl ScalingEngine {
    pub fn new(s: StableStructure) -> ScalingEngine {
        let base = BaseDensity::for_structure(&s);
        ScalingEngine { mirror: s.kind == StableKind::Negative, s, base }
    }

    /// p(u,z) = (su)^{-1/α} p₁((z − du)(su)^{-1/α}).
    pub fn p(&self, u: f64, z: f64) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        let sc = (self.s.scale * u).powf(1.0 / self.s.alpha);
        self.base.eval((z - self.s.drift * u) / sc, self.mirror) / sc
    }

    pub fn potential(&self, lambda: f64, t: f64, z: f64) -> Result<QuadResult> {
        let (a, d, s) = (self.s.alpha, self.s.drift, self.s.scale);
        if z == 0.0 && d == 0.0 && a <= 1.0 {
            return Ok(QuadResult { value: f64::INFINITY, error: 0.0, evals: 0, converged: true });
        }
        let mut upper = t;
        if lambda > 0.0 {
            upper = upper.min(40.0 / lambda);
        }
        // Characteristic times: spread reaches |z|, drift reaches z.
        let u_z = if z != 0.0 { z.abs().powf(a) / s } else { f64::NAN };
        let u_d = if d != 0.0 && z / d > 0.0 { z / d } else { f64::NAN };
        let mut scales: Vec<f64> = [u_z, u_d].into_iter().filter(|x| x.is_finite()).collect();
        let hi_ref = if upper.is_finite() { upper } else { scales.iter().cloned().fold(1.0, f64::max) * 1e4 };
        scales.push(hi_ref);
        let lo = scales.iter().cloned().fold(f64::INFINITY, f64::min) * if z == 0.0 { 1e-12 } else { 1e-8 };
        let (v0, v1) = (lo.ln(), hi_ref.ln());

        let mut breaks = Vec::new();
        for &u in &[u_z, u_d] {
            if u.is_finite() && u.ln() > v0 && u.ln() < v1 {
                breaks.push(u.ln());
            }
        }
        if u_d.is_finite() {
            // The integrand concentrates around u_d with relative width w.
            let w = (s * u_d).powf(1.0 / a) / (d.abs() * u_d);
            let mut k = w;
            while k < 0.9 {
                for x in [u_d * (1.0 - k), u_d * (1.0 + k)] {
                    if x > 0.0 && x.ln() > v0 && x.ln() < v1 {
                        breaks.push(x.ln());
                    }
                }
                k *= 2.0;
            }
        }
        let n_uniform = (v1 - v0).ceil() as usize;
        for i in 1..n_uniform {
            breaks.push(v0 + (v1 - v0) * i as f64 / n_uniform as f64);
        }
        breaks.sort_by(f64::total_cmp);

        let g = |v: f64| {
            let u = v.exp();
            u * (-lambda * u).exp() * self.p(u, z)
        };
        let mut res = integrate_with_breaks(&g, v0, v1, &breaks, TIME_TOL);
        res = res.add(lower_remainder(&g, v0));
        if upper.is_infinite() {
            res = res.add(upper_remainder(&g, v1));
        }
        Ok(res)
    }
}

/// ∫_{-∞}^{v0} g for g ≈ C e^{κv}, κ fitted from g(v0), g(v0 + ln 2).
fn lower_remainder(g: &impl Fn(f64) -> f64, v0: f64) -> QuadResult {
    let (g0, g1) = (g(v0), g(v0 + LN_2));
    if g0 <= 0.0 || g0 < 1e-300 {
        return QuadResult::zero();
    }
    let kappa = (g1 / g0).ln() / LN_2;
    let value = if kappa > 0.0 { g0 / kappa } else { f64::INFINITY };
    QuadResult { value, error: value.abs() * 0.05, evals: 2, converged: kappa > 0.0 }
}

/// ∫_{v1}^{∞} g for g ≈ C e^{-κv}.
fn upper_remainder(g: &impl Fn(f64) -> f64, v1: f64) -> QuadResult {
    let (g0, g1) = (g(v1 - LN_2), g(v1));
    if g1 <= 0.0 || g1 < 1e-300 {
        return QuadResult::zero();
    }
    let kappa = (g0 / g1).ln() / LN_2;
    let value = if kappa > 0.0 { g1 / kappa } else { f64::INFINITY };
    QuadResult { value, error: value.abs() * 0.05, evals: 2, converged: kappa > 0.0 }
}

fn expm1_c(w: C64) -> C64 {
    if w.norm() < 1e-5 {
        w * (C64::new(1.0, 0.0) + w * (0.5 + w / 6.0))
    } else {
        w.exp() - 1.0
    }
}

#[derive(Debug, Clone)]
pub struct FourierEngine {
    spec: ProcessSpec,
    /// Linear drift removed from the phase before inverting.
    pub drift: f64,
    opts: InvertOptions,
}

impl FourierEngine {
    pub fn new(spec: ProcessSpec) -> FourierEngine {
        let drift = spec.linear_drift();
        FourierEngine { spec, drift, opts: InvertOptions::default() }
    }

    /// Same engine with a looser inversion tolerance (for dense tables).
    pub fn with_rel(mut self, rel: f64) -> FourierEngine {
        self.opts.rel = rel;
        self
    }

    fn psi(&self, xi: f64) -> C64 {
        self.spec.psi1(xi)
    }

    pub fn transition(&self, t: f64, z: f64) -> Result<QuadResult> {
        if self.spec.gaussian_rank() == 0 && self.spec.nu_finite() {
            return Err(Error::Unsupported("drift plus finite jump measure has an atom at the drift line".into()));
        }
        let d = self.drift;
        let f = |xi: f64| (-(self.psi(xi) + C64::new(0.0, d * xi)) * t).exp();
        let r = invert(f, z - d * t, self.opts);
        check(r, "transition density")
    }

    pub fn potential(&self, lambda: f64, t: f64, z: f64) -> Result<QuadResult> {
        let d = self.drift;
        if t.is_infinite() {
            if lambda == 0.0 {
                return self.time_quadrature(lambda, t, z);
            }
            let f = |xi: f64| C64::new(1.0, 0.0) / (self.psi(xi) + lambda);
            return check(invert(f, z, self.opts), "resolvent density");
        }
        if d == 0.0 {
            let f = |xi: f64| {
                let w = self.psi(xi) + lambda;
                if w.norm() < 1e-300 {
                    return C64::new(t, 0.0);
                }
                -expm1_c(-w * t) / w
            };
            return check(invert(f, z, self.opts), "truncated potential density");
        }
        if lambda > 0.0 {
            // G_t^λ = G^λ − (e^{-λt} P_t G^λ) with the drift phase of the second term removed.
            let full = check(invert(|xi: f64| C64::new(1.0, 0.0) / (self.psi(xi) + lambda), z, self.opts), "resolvent density")?;
            let shifted = |xi: f64| {
                let w = self.psi(xi) + lambda;
                (-(w + C64::new(0.0, d * xi)) * t).exp() / w
            };
            let tail = check(invert(shifted, z - d * t, self.opts), "resolvent tail")?;
            let mut r = full.add(tail.scale(-1.0));
            r.value = r.value.max(0.0);
            return Ok(r);
        }
        self.time_quadrature(lambda, t, z)
    }

    /// ∫₀^t e^{-λu} p(u,z) du over Fourier-inverted slices.
    fn time_quadrature(&self, lambda: f64, t: f64, z: f64) -> Result<QuadResult> {
        let d = self.drift;
        let hi = if t.is_finite() { t } else { 1e4 * (1.0 + z.abs()) };
        let lo = 1e-9 * hi.min(if z != 0.0 { z.abs() } else { hi });
        let (v0, v1) = (lo.ln(), hi.ln());
        let mut breaks: Vec<f64> = (1..(v1 - v0).ceil() as usize).map(|i| v0 + i as f64).collect();
        if d != 0.0 && z / d > 0.0 {
            let ud = (z / d).ln();
            if ud > v0 && ud < v1 {
                breaks.push(ud);
                breaks.sort_by(f64::total_cmp);
            }
        }
        let failed = std::cell::RefCell::new(None);
        let g = |v: f64| {
            let u = v.exp();
            match self.transition(u, z) {
                Ok(r) => u * (-lambda * u).exp() * r.value.max(0.0),
                Err(e) => {
                    failed.borrow_mut().get_or_insert(e.to_string());
                    0.0
                }
            }
        };
        let tol = Tol { abs: 1e-12, rel: 1e-7, max_panels: 400 };
        let mut res = integrate_with_breaks(&g, v0, v1, &breaks, tol);
        res = res.add(lower_remainder(&g, v0));
        if t.is_infinite() {
            res = res.add(upper_remainder(&g, v1));
        }
        if let Some(msg) = failed.into_inner() {
            return Err(Error::QuadratureFailure { context: msg, value: res.value, error: res.error });
        }
        Ok(res)
    }
}

fn check(r: QuadResult, what: &str) -> Result<QuadResult> {
    if r.value.is_finite() {
        Ok(r)
    } else {
        Err(Error::QuadratureFailure { context: what.into(), value: r.value, error: r.error })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levy::{family, LevyTriplet};
    use serde_json::json;
    use std::f64::consts::PI;

    fn brownian() -> Engine {
        Engine::for_spec(&family("brownian", &json!({})).unwrap()).unwrap()
    }

    #[test]
    fn brownian_resolvent_by_time_quadrature() {
        let e = brownian();
        for &x in &[0.0, 1e-6, 0.3, 2.0, 8.0] {
            let g = e.potential(1.0, f64::INFINITY, x).unwrap().value;
            assert!((g - (-x.abs()).exp() / 2.0).abs() < 1e-9, "x={x}: {g}");
        }
        let g = e.potential(0.0, 1.0, 0.0).unwrap().value;
        assert!((g - 1.0 / PI.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn fourier_engine_matches_scaling_engine() {
        let spec = family("stable", &json!({"alpha": 1.5})).unwrap();
        let sc = Engine::for_spec(&spec).unwrap();
        let ProcessSpec::Triplet(t) = &spec else { panic!() };
        let fe = Engine::Fourier(FourierEngine::new(ProcessSpec::Triplet(LevyTriplet { ..t.clone() })));
        for &x in &[0.0, 0.2, 1.5, 6.0] {
            let a = sc.potential(1.0, f64::INFINITY, x).unwrap().value;
            let b = fe.potential(1.0, f64::INFINITY, x).unwrap().value;
            assert!((a - b).abs() < 1e-6 * b.max(1e-3), "x={x}: {a} vs {b}");
            let a = sc.potential(0.0, 0.5, x).unwrap().value;
            let b = fe.potential(0.0, 0.5, x).unwrap().value;
            assert!((a - b).abs() < 1e-6 * b.max(1e-3), "x={x}: {a} vs {b}");
        }
    }

    #[test]
    fn drift_with_one_sided_jumps_is_split_consistently() {
        // Drift 1 plus one-sided ½-stable jumps: subtraction form vs time quadrature.
        let spec = family("stable_subordinator", &json!({"alpha": 0.5, "scale": 1.0, "drift": 1.0})).unwrap();
        let sc = Engine::for_spec(&spec).unwrap();
        let fe = FourierEngine::new(spec.clone());
        for &x in &[0.05, 0.5, 1.2, 3.0] {
            let a = sc.potential(1.0, 1.0, x).unwrap().value;
            let b = fe.potential(1.0, 1.0, x).unwrap().value;
            assert!((a - b).abs() < 1e-5 * b.max(1e-2), "x={x}: {a} vs {b}");
        }
        assert_eq!(sc.potential(1.0, 1.0, -0.5).unwrap().value, 0.0);
    }
}
