//! Numeric Kato conditions on one-dimensional specs: each produces a profile
//! (parameter ↦ sup-functional) and a limit decision.

use std::collections::HashMap;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::limit::{Limit, LimitRule};
use super::pairing::PairKernel;
use super::q::Potential;
use super::sup::{sup_pairing, SupConfig, SupResult, SupStatus};
use crate::levy::ProcessSpec;
use crate::potential::Kernel;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionId {
    /// sup_x E^x∫₀^t|q(X_u)|du → 0 as t → 0.
    TimeSmall,
    /// sup_x ∫_{B(x,r)}|q|G^λ → 0 as r → 0.
    SpaceSmall,
    /// Ball-restricted integral against G_t^λ, fixed t.
    TruncSpace,
    /// Ball-restricted integral against G_r⁰.
    TimeSpace,
    /// Time condition with discount λ in G_t^λ.
    DiscountedTime,
    /// sup_x G_t^λ|q| → 0 as λ → ∞, fixed t.
    LargeLambda,
    /// Case-specific characterisation (Lebesgue or subordinator weight criteria).
    ClosedForm,
    /// sup_x ∫_{B(x,1)}|q| < ∞.
    UniformL1,
}

impl ConditionId {
    pub fn all() -> [ConditionId; 8] {
        use ConditionId::*;
        [TimeSmall, SpaceSmall, TruncSpace, TimeSpace, DiscountedTime, LargeLambda, ClosedForm, UniformL1]
    }

    /// Class whose membership the condition characterises.
    pub fn class(self) -> KatoClass {
        use ConditionId::*;
        match self {
            TimeSmall | TimeSpace | DiscountedTime | LargeLambda => KatoClass::Time,
            SpaceSmall | TruncSpace => KatoClass::Space,
            ClosedForm => KatoClass::Either,
            UniformL1 => KatoClass::UniformL1,
        }
    }

    pub fn parse(s: &str) -> Option<Vec<ConditionId>> {
        use ConditionId::*;
        Some(match s.trim() {
            "time" => vec![TimeSmall, DiscountedTime, LargeLambda],
            "space" => vec![SpaceSmall, TruncSpace],
            "timespace" => vec![TimeSpace],
            "closed" => vec![ClosedForm, UniformL1],
            "all" => ConditionId::all().to_vec(),
            _ => return None,
        })
    }
}

/// 𝕂 (time), 𝒦 (space) or the uniform-L¹ envelope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KatoClass {
    Time,
    Space,
    Either,
    UniformL1,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub param: f64,
    #[serde(with = "crate::util::float")]
    pub value: f64,
    pub argmax: f64,
    pub status: SupStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub condition: ConditionId,
    /// "t", "r" or "1/λ": the parameter that shrinks.
    pub parameter: String,
    pub lambda: Option<f64>,
    #[serde(default, with = "crate::util::opt_float")]
    pub t: Option<f64>,
    pub points: Vec<ProfilePoint>,
    pub limit: Limit,
    pub reason: String,
}

impl Profile {
    pub fn from_sups(condition: ConditionId, parameter: &str, lambda: Option<f64>, t: Option<f64>, params: &[f64], sups: Vec<SupResult>, rule: &LimitRule) -> Profile {
        let values: Vec<f64> = sups.iter().map(|s| s.value).collect();
        let lower = sups.iter().any(|s| s.status == SupStatus::Exhausted);
        let (limit, reason) = rule.decide(params, &values, lower);
        let points = params
            .iter()
            .zip(sups)
            .map(|(&p, s)| ProfilePoint { param: p, value: s.value, argmax: s.argmax, status: s.status })
            .collect();
        Profile { condition, parameter: parameter.into(), lambda, t, points, limit, reason }
    }

    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.value).collect()
    }

    /// Whether the condition holds (the profile tends to 0).
    pub fn holds(&self) -> Option<bool> {
        match self.limit {
            Limit::Zero => Some(true),
            Limit::Positive => Some(false),
            Limit::Inconclusive => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ConditionConfig {
    pub t_grid: Vec<f64>,
    pub r_grid: Vec<f64>,
    pub space_lambdas: Vec<f64>,
    pub trunc_ts: Vec<f64>,
    pub trunc_lambda: f64,
    pub discount_lambda: f64,
    pub large_lambdas: Vec<f64>,
    pub large_lambda_t: f64,
    /// Table half-width for whole-line kernels.
    pub z_max_full: f64,
    /// Table half-width for ball-restricted kernels.
    pub z_max_ball: f64,
    pub limit: LimitRule,
    pub sup: SupConfig,
}

impl Default for ConditionConfig {
    fn default() -> Self {
        ConditionConfig {
            t_grid: vec![0.2, 0.1, 0.05, 0.02],
            r_grid: vec![0.2, 0.1, 0.05, 0.02],
            space_lambdas: vec![0.5, 1.0, 2.0],
            trunc_ts: vec![0.5, 2.0],
            trunc_lambda: 0.0,
            discount_lambda: 1.0,
            large_lambdas: vec![10.0, 100.0, 1000.0],
            large_lambda_t: 1.0,
            z_max_full: 8.0,
            z_max_ball: 1.0,
            limit: LimitRule::default(),
            sup: SupConfig::default(),
        }
    }
}

impl ConditionConfig {
    pub fn validate(&self) -> Result<()> {
        let dec = |g: &[f64]| g.len() >= 3 && g.windows(2).all(|w| w[1] < w[0]) && g.iter().all(|&v| v > 0.0 && v.is_finite());
        let inc = |g: &[f64]| !g.is_empty() && g.windows(2).all(|w| w[1] > w[0]) && g.iter().all(|&v| v > 0.0 && v.is_finite());
        if !dec(&self.t_grid) || !dec(&self.r_grid) {
            return Err(Error::InvalidSpec("t and r grids need ≥ 3 positive strictly decreasing values".into()));
        }
        if !inc(&self.space_lambdas) || !inc(&self.trunc_ts) || !inc(&self.large_lambdas) || self.large_lambdas.len() < 3 {
            return Err(Error::InvalidSpec("λ and t lists must be positive and strictly increasing".into()));
        }
        if !(self.trunc_lambda >= 0.0 && self.discount_lambda > 0.0 && self.large_lambda_t > 0.0) {
            return Err(Error::InvalidSpec("discounts must be nonnegative, times positive".into()));
        }
        if !(self.z_max_ball > self.r_grid[0] && self.z_max_full > 0.0) {
            return Err(Error::InvalidSpec("z_max_ball must exceed the largest radius".into()));
        }
        if !(self.limit.eps_rel > 0.0 && self.limit.plateau > 0.0) {
            return Err(Error::InvalidSpec("limit thresholds must be positive".into()));
        }
        Ok(())
    }
}

/// Evaluates conditions for one spec, caching kernels per (λ, t, z_max).
pub struct Evaluator {
    spec: ProcessSpec,
    pub cfg: ConditionConfig,
    /// Keyed by (λ, t); a table also serves any request with a smaller z_max.
    cache: Mutex<HashMap<(u64, u64), (f64, PairKernel)>>,
}

impl Evaluator {
    pub fn new(spec: &ProcessSpec, cfg: &ConditionConfig) -> Result<Evaluator> {
        if spec.dim() != 1 {
            return Err(Error::DimensionUnsupported("numeric Kato conditions need a one-dimensional spec".into()));
        }
        cfg.validate()?;
        Ok(Evaluator { spec: spec.clone(), cfg: cfg.clone(), cache: Mutex::new(HashMap::new()) })
    }

    pub fn kernel(&self, lambda: f64, t: f64, z_max: f64) -> Result<PairKernel> {
        let key = (lambda.to_bits(), t.to_bits());
        if let Some((zm, k)) = self.cache.lock().unwrap().get(&key) {
            if *zm >= z_max {
                return Ok(k.clone());
            }
        }
        let k = match Kernel::build(&self.spec, lambda, t, z_max)? {
            Kernel::Table(t) => PairKernel::Table(t),
            Kernel::Discrete(d) => PairKernel::Discrete(d),
        };
        self.cache.lock().unwrap().insert(key, (z_max, k.clone()));
        Ok(k)
    }

    /// sup_x ∫|q(x+z)|G_t⁰(dz) over the t grid.
    pub fn time_condition(&self, q: &Potential) -> Result<Profile> {
        self.time_like(q, ConditionId::TimeSmall, 0.0)
    }

    /// Same with discount λ: equivalent by the resolvent identities.
    pub fn discounted_time_condition(&self, q: &Potential) -> Result<Profile> {
        self.time_like(q, ConditionId::DiscountedTime, self.cfg.discount_lambda)
    }

    fn time_like(&self, q: &Potential, id: ConditionId, lambda: f64) -> Result<Profile> {
        let ts = self.cfg.t_grid.clone();
        let mut sups = Vec::new();
        for &t in &ts {
            let k = self.kernel(lambda, t, self.cfg.z_max_full)?;
            sups.push(sup_pairing(q, &k, f64::INFINITY, &self.cfg.sup));
        }
        Ok(Profile::from_sups(id, "t", Some(lambda), None, &ts, sups, &self.cfg.limit))
    }

    /// sup_x ∫_{B(0,r)}|q(x+z)|G_r⁰(dz): time and space cutoffs shrink together.
    pub fn timespace_condition(&self, q: &Potential) -> Result<Profile> {
        let rs = self.cfg.r_grid.clone();
        let mut sups = Vec::new();
        for &r in &rs {
            let k = self.kernel(0.0, r, self.cfg.z_max_full)?;
            sups.push(sup_pairing(q, &k, r, &self.cfg.sup));
        }
        Ok(Profile::from_sups(ConditionId::TimeSpace, "r", Some(0.0), None, &rs, sups, &self.cfg.limit))
    }

    /// sup_x ∫_{B(0,r)}|q(x+z)|G^λ(dz).
    pub fn space_condition(&self, q: &Potential, lambda: f64) -> Result<Profile> {
        self.ball(q, ConditionId::SpaceSmall, lambda, f64::INFINITY)
    }

    /// sup_x ∫_{B(0,r)}|q(x+z)|G_t^λ(dz) at fixed t.
    pub fn trunc_space_condition(&self, q: &Potential, lambda: f64, t: f64) -> Result<Profile> {
        self.ball(q, ConditionId::TruncSpace, lambda, t)
    }

    fn ball(&self, q: &Potential, id: ConditionId, lambda: f64, t: f64) -> Result<Profile> {
        let k = self.kernel(lambda, t, self.cfg.z_max_ball)?;
        let rs = self.cfg.r_grid.clone();
        let sups = rs.iter().map(|&r| sup_pairing(q, &k, r, &self.cfg.sup)).collect();
        Ok(Profile::from_sups(id, "r", Some(lambda), Some(t), &rs, sups, &self.cfg.limit))
    }

    /// sup_x ∫|q(x+z)|G_t^λ(dz) as λ → ∞ (parameter 1/λ).
    pub fn large_lambda_condition(&self, q: &Potential) -> Result<Profile> {
        let t = self.cfg.large_lambda_t;
        let mut params = Vec::new();
        let mut sups = Vec::new();
        for &l in &self.cfg.large_lambdas {
            let k = self.kernel(l, t, self.cfg.z_max_full)?;
            params.push(1.0 / l);
            sups.push(sup_pairing(q, &k, f64::INFINITY, &self.cfg.sup));
        }
        Ok(Profile::from_sups(ConditionId::LargeLambda, "1/λ", None, Some(t), &params, sups, &self.cfg.limit))
    }

    /// sup_x ∫|q(x+z)|K(dz) on the whole line for an arbitrary (λ, t).
    pub fn whole_line_sup(&self, q: &Potential, lambda: f64, t: f64) -> Result<SupResult> {
        let k = self.kernel(lambda, t, self.cfg.z_max_full)?;
        Ok(sup_pairing(q, &k, f64::INFINITY, &self.cfg.sup))
    }

    /// Every numeric profile selected by `ids`.
    pub fn run(&self, q: &Potential, ids: &[ConditionId]) -> Result<Vec<Profile>> {
        let mut out = Vec::new();
        for id in ids {
            match id {
                ConditionId::TimeSmall => out.push(self.time_condition(q)?),
                ConditionId::DiscountedTime => out.push(self.discounted_time_condition(q)?),
                ConditionId::TimeSpace => out.push(self.timespace_condition(q)?),
                ConditionId::LargeLambda => out.push(self.large_lambda_condition(q)?),
                ConditionId::SpaceSmall => {
                    for &l in &self.cfg.space_lambdas.clone() {
                        out.push(self.space_condition(q, l)?);
                    }
                }
                ConditionId::TruncSpace => {
                    for &t in &self.cfg.trunc_ts.clone() {
                        out.push(self.trunc_space_condition(q, self.cfg.trunc_lambda, t)?);
                    }
                }
                ConditionId::ClosedForm | ConditionId::UniformL1 => {}
            }
        }
        Ok(out)
    }
}
