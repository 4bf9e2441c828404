//! Transition densities p(t,·), λ-potential densities G^λ, truncated kernels
//! G_t^λ and subordinator weights on one-dimensional grids.

mod base;
pub mod discrete;
pub mod engine;
pub mod table;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use discrete::{cp_kernel, Component, DiscreteKernel};
pub use engine::{total_mass, Engine, FourierEngine, ScalingEngine};
pub use table::{KernelTable, TableConfig};

use crate::classify::{regularity_integral, IntegralVerdict, RegularityConfig};
use crate::levy::{LaplaceExponent, ProcessSpec};
use crate::quad::QuadResult;
use crate::util::trapezoid;
use crate::{Error, Result};

/// Samples of a kernel density on a sorted grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelGrid {
    pub grid: Vec<f64>,
    #[serde(with = "crate::util::float_vec")]
    pub values: Vec<f64>,
    /// Per-point absolute error estimates.
    pub errors: Vec<f64>,
    pub lambda: f64,
    #[serde(with = "crate::util::float")]
    pub t: f64,
    /// Trapezoid integral of the samples.
    #[serde(with = "crate::util::float")]
    pub mass_estimate: f64,
    /// Largest per-point error.
    pub quadrature_error: f64,
}

/// Relative size of negative noise that is silently clipped to 0.
const CLIP: f64 = 1e-10;

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() || grid.windows(2).any(|w| !(w[1] > w[0])) || grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::EmptyGrid);
    }
    Ok(())
}

fn assemble(grid: &[f64], res: Vec<QuadResult>, lambda: f64, t: f64, what: &str) -> Result<KernelGrid> {
    let peak = res.iter().map(|r| r.value.abs()).filter(|v| v.is_finite()).fold(0.0, f64::max);
    let mut values = Vec::with_capacity(res.len());
    let mut errors = Vec::with_capacity(res.len());
    for (x, r) in grid.iter().zip(&res) {
        let mut v = r.value;
        if v < 0.0 {
            if v < -CLIP * peak.max(1e-300) && v < -r.error {
                return Err(Error::QuadratureFailure { context: format!("{what} negative at x={x}"), value: v, error: r.error });
            }
            v = 0.0;
        }
        values.push(v);
        errors.push(r.error);
    }
    let finite: Vec<(f64, f64)> = grid.iter().cloned().zip(values.iter().cloned()).filter(|p| p.1.is_finite()).collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = finite.into_iter().unzip();
    let quadrature_error = errors.iter().cloned().fold(0.0, f64::max);
    Ok(KernelGrid { grid: grid.to_vec(), mass_estimate: trapezoid(&xs, &ys), values, errors, lambda, t, quadrature_error })
}

/// p(t,x) on `grid`.
pub fn transition_density(spec: &ProcessSpec, t: f64, grid: &[f64]) -> Result<KernelGrid> {
    check_grid(grid)?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidSpec("transition density needs 0 < t < ∞".into()));
    }
    let engine = Engine::for_spec(spec)?;
    let res = grid.par_iter().map(|&x| engine.transition(t, x)).collect::<Result<Vec<_>>>().map_err(|e| match e {
        Error::QuadratureFailure { .. } => Error::TailNotIntegrable,
        e => e,
    })?;
    assemble(grid, res, 0.0, t, "transition density")
}

/// G^λ(x) on `grid`, λ > 0. Fails with `CaseAViolation` when ∫Re 1/(λ+ψ) diverges.
pub fn potential_density(spec: &ProcessSpec, lambda: f64, grid: &[f64]) -> Result<KernelGrid> {
    check_grid(grid)?;
    if !(lambda > 0.0) {
        return Err(Error::InvalidSpec("potential density needs λ > 0".into()));
    }
    let engine = Engine::for_spec(spec)?;
    if matches!(engine, Engine::Compound) {
        return Err(Error::AtomAtOrigin);
    }
    let diag = regularity_integral(|xi| spec.psi1(xi), lambda, &RegularityConfig::default())?;
    if diag.verdict == IntegralVerdict::Diverges {
        return Err(Error::CaseAViolation);
    }
    let res = grid.par_iter().map(|&x| engine.potential(lambda, f64::INFINITY, x)).collect::<Result<Vec<_>>>()?;
    assemble(grid, res, lambda, f64::INFINITY, "potential density")
}

/// Which route computes G_t^λ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TruncMethod {
    /// The engine's default (time quadrature for self-similar specs).
    Auto,
    /// Fourier inversion of (1 − e^{-t(λ+ψ)})/(λ+ψ), or G^λ − e^{-λt}P_tG^λ under drift.
    Fourier,
}

/// G_t^λ(x) = ∫₀^t e^{-λu}p(u,x)du on `grid`.
pub fn truncated_potential(spec: &ProcessSpec, lambda: f64, t: f64, grid: &[f64]) -> Result<KernelGrid> {
    truncated_potential_with(spec, lambda, t, grid, TruncMethod::Auto)
}

pub fn truncated_potential_with(spec: &ProcessSpec, lambda: f64, t: f64, grid: &[f64], method: TruncMethod) -> Result<KernelGrid> {
    check_grid(grid)?;
    if !(lambda >= 0.0) || !(t > 0.0) {
        return Err(Error::InvalidSpec("need λ ≥ 0 and t > 0".into()));
    }
    let engine = match (Engine::for_spec(spec)?, method) {
        (Engine::Compound, _) => return Err(Error::AtomAtOrigin),
        (e, TruncMethod::Auto) => e,
        (_, TruncMethod::Fourier) => Engine::Fourier(FourierEngine::new(spec.clone())),
    };
    let res = grid.par_iter().map(|&x| engine.potential(lambda, t, x)).collect::<Result<Vec<_>>>()?;
    assemble(grid, res, lambda, t, "truncated potential")
}

/// w(z) = φ′(1/z)/(z²φ(1/z)²) on z ∈ (0,1], comparable (not equal) to the density of G^a.
pub fn subordinator_weight(phi: &LaplaceExponent, grid: &[f64]) -> Result<KernelGrid> {
    check_grid(grid)?;
    if grid[0] <= 0.0 || *grid.last().unwrap() > 1.0 {
        return Err(Error::InvalidSpec("subordinator weight grid must lie in (0,1]".into()));
    }
    let res = grid
        .iter()
        .map(|&z| {
            let u = 1.0 / z;
            let d = phi.deriv(u);
            if !d.is_finite() {
                return Err(Error::MissingDerivative);
            }
            let f = phi.eval(u);
            Ok(QuadResult { value: d / (z * z * f * f), error: 0.0, evals: 1, converged: true })
        })
        .collect::<Result<Vec<_>>>()?;
    assemble(grid, res, 0.0, f64::INFINITY, "subordinator weight")
}

/// Kernel measure of a spec, density-tabulated or discrete.
#[derive(Debug, Clone)]
pub enum Kernel {
    Table(std::sync::Arc<KernelTable>),
    Discrete(std::sync::Arc<DiscreteKernel>),
}

impl Kernel {
    /// Build G_t^λ for any one-dimensional spec, tabulated on |z| ≤ z_max.
    pub fn build(spec: &ProcessSpec, lambda: f64, t: f64, z_max: f64) -> Result<Kernel> {
        let engine = Engine::for_spec(spec)?;
        Ok(match engine {
            Engine::Compound => Kernel::Discrete(std::sync::Arc::new(cp_kernel(spec, lambda, t)?)),
            e => {
                let cfg = e.table_config(z_max);
                Kernel::Table(std::sync::Arc::new(KernelTable::build(&e.for_tables(), lambda, t, &cfg)?))
            }
        })
    }

    pub fn total_mass(&self) -> f64 {
        match self {
            Kernel::Table(k) => k.total_mass,
            Kernel::Discrete(k) => k.total_mass,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levy::family;
    use crate::util::linspace;
    use serde_json::json;

    #[test]
    fn gaussian_transition_at_origin() {
        let spec = family("brownian", &json!({})).unwrap();
        let g = transition_density(&spec, 1.0, &linspace(-12.0, 12.0, 2401)).unwrap();
        assert!((g.values[1200] - 0.5 / std::f64::consts::PI.sqrt()).abs() < 1e-10);
        assert!((g.mass_estimate - 1.0).abs() < 1e-6);
    }

    #[test]
    fn case_a_has_no_potential_density() {
        let spec = family("stable", &json!({"alpha": 0.5})).unwrap();
        assert!(matches!(potential_density(&spec, 1.0, &[0.5, 1.0]), Err(Error::CaseAViolation)));
    }

    #[test]
    fn weight_of_square_root() {
        let phi = LaplaceExponent::stable(0.5, 1.0);
        let g = subordinator_weight(&phi, &[0.04, 0.25, 1.0]).unwrap();
        for (z, w) in g.grid.iter().zip(&g.values) {
            assert!((w - 0.5 / z.sqrt()).abs() < 1e-12);
        }
    }
}
