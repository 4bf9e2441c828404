//! Lévy process model: triplets, exponent families, Laplace exponents and scaling checks.

mod families;
mod laplace;
mod measure;
mod scaling;
mod spec;

pub use families::{family, parse_spec, spec_from_value, SCHEMA_VERSION};
pub use laplace::{LaplaceExponent, LaplaceFamily};
pub use measure::{dyadic_psi, dyadic_weight, sphere_area, stable_density_constant, Atom, JumpLaw, MeasurePart, Side};
pub use scaling::{check_scaling, ScalingKind, ScalingOutcome, ScalingWitness};
pub use spec::{eigenvalues, rank, FvReport, LevyTriplet, ProcessSpec, ProductSpec, StableKind, StableStructure};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// ψ(ξ) for a validated spec; ξ must have the spec's dimension.
pub fn eval_psi(spec: &ProcessSpec, xi: &[f64]) -> Result<Complex64> {
    if xi.len() != spec.dim() {
        return Err(Error::InvalidSpec(format!("ξ has length {}, spec has dimension {}", xi.len(), spec.dim())));
    }
    let v = spec.psi(xi);
    if !v.re.is_finite() || !v.im.is_finite() {
        return Err(Error::QuadratureFailure { context: "ψ evaluation".into(), value: v.re, error: f64::INFINITY });
    }
    Ok(v)
}

/// γ₀ = γ − ∫ z 1_{|z|<1} ν(dz) when ν has finite first absolute moment near 0.
pub fn drift_gamma0(spec: &ProcessSpec) -> Option<Vec<f64>> {
    spec.gamma0()
}

/// ψ*(u) = sup_{|ξ|≤u} |ψ(ξ)| sampled along the first axis (isotropic specs).
pub fn psi_star(spec: &ProcessSpec, u: f64) -> f64 {
    let d = spec.dim();
    let mut best: f64 = 0.0;
    for i in 1..=64 {
        let mut xi = vec![0.0; d];
        xi[0] = u * i as f64 / 64.0;
        best = best.max(spec.psi(&xi).norm());
    }
    best
}

/// Generalised inverse (ψ*)⁻(s) = inf{u > 0 : ψ*(u) ≥ s}.
pub fn psi_star_inverse(spec: &ProcessSpec, s: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while psi_star(spec, hi) < s && hi < 1e300 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if psi_star(spec, mid) >= s { hi = mid } else { lo = mid }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    hi
}
