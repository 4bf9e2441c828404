//! Run configuration shared by the command line and the test suites.

use serde::{Deserialize, Serialize};

use crate::kato::{ConditionConfig, ConditionId, VerdictConfig};
use crate::levy::SCHEMA_VERSION;
use crate::montecarlo::{SamplerConfig, SmallJumps};
use crate::{Error, Result};

/// Kernel grids written by `kernel`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridConfig {
    pub half_width: f64,
    pub points: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { half_width: 8.0, points: 4001 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct McConfig {
    pub paths: usize,
    /// Riemann steps over [0, t] for time functionals.
    pub steps: usize,
    pub seed: u64,
    pub eps_j: Option<f64>,
    pub jump_rate: f64,
    pub small_jumps: SmallJumps,
}

impl Default for McConfig {
    fn default() -> Self {
        let s = SamplerConfig::default();
        McConfig { paths: 100_000, steps: 1000, seed: s.seed, eps_j: None, jump_rate: s.jump_rate, small_jumps: s.small_jumps }
    }
}

impl McConfig {
    pub fn sampler(&self) -> SamplerConfig {
        SamplerConfig { seed: self.seed, eps_j: self.eps_j, jump_rate: self.jump_rate, small_jumps: self.small_jumps, exact_stable: true }
    }
}

/// Everything a run can tune. Every field has a default, so `{}` is a valid config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub schema_version: u32,
    pub conditions: ConditionConfig,
    /// Discount used to classify before deciding membership.
    pub classify_lambda: f64,
    pub grid: GridConfig,
    pub mc: McConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { schema_version: SCHEMA_VERSION, conditions: ConditionConfig::default(), classify_lambda: 1.0, grid: GridConfig::default(), mc: McConfig::default() }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<RunConfig> {
        let c: RunConfig = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidSpec(format!("config schema_version {} is not supported (expected {SCHEMA_VERSION})", self.schema_version)));
        }
        self.conditions.validate()?;
        if !(self.classify_lambda > 0.0) {
            return Err(Error::InvalidSpec("classify_lambda must be positive".into()));
        }
        if !(self.grid.half_width > 0.0) || self.grid.points < 2 {
            return Err(Error::InvalidSpec("kernel grid needs a positive half-width and at least two points".into()));
        }
        if self.mc.paths < 2 || self.mc.steps == 0 || !(self.mc.jump_rate > 0.0) || self.mc.eps_j.is_some_and(|e| !(e > 0.0)) {
            return Err(Error::InvalidSpec("Monte Carlo budget must be positive".into()));
        }
        Ok(())
    }

    pub fn verdict(&self, conditions: &[ConditionId]) -> VerdictConfig {
        VerdictConfig { conditions: conditions.to_vec(), numeric: self.conditions.clone(), classify_lambda: self.classify_lambda }
    }
}
