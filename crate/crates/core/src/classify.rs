//! Case classification (compound Poisson / A / B / C and the primed d > 1 variants)
//! and the hitting transform h^λ.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::levy::{FvReport, ProcessSpec};
use crate::potential::KernelGrid;
use crate::quad::Tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    CompoundPoisson,
    A,
    B,
    C,
    #[serde(rename = "A′")]
    Aprime,
    #[serde(rename = "B′")]
    Bprime,
    #[serde(rename = "C′")]
    Cprime,
    #[serde(rename = "D_gt1_H0")]
    DGt1H0,
}

impl Label {
    /// 0 is regular for {0}: the two Kato classes differ exactly in these cases.
    pub fn zero_regular(self) -> bool {
        matches!(self, Label::C | Label::Cprime | Label::CompoundPoisson)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::CompoundPoisson => "CompoundPoisson",
            Label::A => "A",
            Label::B => "B",
            Label::C => "C",
            Label::Aprime => "A′",
            Label::Bprime => "B′",
            Label::Cprime => "C′",
            Label::DGt1H0 => "D_gt1_H0",
        }
    }

    pub fn all() -> [Label; 8] {
        [Label::CompoundPoisson, Label::A, Label::B, Label::C, Label::Aprime, Label::Bprime, Label::Cprime, Label::DGt1H0]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IntegralVerdict {
    Diverges,
    Converges,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceDiagnostic {
    pub lambda: f64,
    /// R_k
    pub radii: Vec<f64>,
    /// I(R_k) = ∫_0^{R_k} Re(1/(λ+ψ(ξ))) dξ (half line; the integrand is even).
    pub partial_integrals: Vec<f64>,
    pub slope: f64,
    pub verdict: IntegralVerdict,
    pub limit: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularityConfig {
    pub levels: usize,
    pub window: usize,
    pub slope_min: f64,
    pub growth_min: f64,
    pub cauchy_tol: f64,
}

impl Default for RegularityConfig {
    fn default() -> Self {
        RegularityConfig { levels: 60, window: 8, slope_min: 0.02, growth_min: 0.01, cauchy_tol: 1e-8 }
    }
}

/// Partial integrals of Re(1/(λ+ψ)) over [0, 2^k] and the divergence decision.
pub fn regularity_integral<F: Fn(f64) -> C64>(psi: F, lambda: f64, cfg: &RegularityConfig) -> Result<DivergenceDiagnostic> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidSpec("λ must be positive".into()));
    }
    let f = |x: f64| (C64::new(1.0, 0.0) / (C64::new(lambda, 0.0) + psi(x))).re;
    let tol = Tol { abs: 1e-15, rel: 1e-11, max_panels: 800 };
    let mut radii = Vec::with_capacity(cfg.levels + 1);
    let mut partial = Vec::with_capacity(cfg.levels + 1);
    let mut acc = 0.0;
    let mut a = 0.0;
    for k in 0..=cfg.levels {
        let b = 2f64.powi(k as i32);
        // Split each dyadic panel further so oscillating exponents are sampled densely.
        let brk: Vec<f64> = (1..8).map(|i| a + (b - a) * i as f64 / 8.0).collect();
        let r = crate::quad::integrate_with_breaks(f, a, b, &brk, tol);
        if !r.value.is_finite() {
            return Err(Error::QuadratureFailure { context: "regularity integral".into(), value: r.value, error: r.error });
        }
        acc += r.value.max(0.0);
        radii.push(b);
        partial.push(acc);
        a = b;
    }
    let n = partial.len();
    let w = cfg.window.min(n - 1);
    let xs: Vec<f64> = radii[n - w..].iter().map(|r| r.ln()).collect();
    let ys: Vec<f64> = partial[n - w..].iter().map(|v| v.max(1e-300).ln()).collect();
    let slope = ls_slope(&xs, &ys);
    let growth_persistent = (n - w..n).all(|i| partial[i] >= partial[i - 1] * (1.0 + cfg.growth_min));
    let last_inc = partial[n - 1] - partial[n - 2];
    let verdict = if slope > cfg.slope_min || growth_persistent {
        IntegralVerdict::Diverges
    } else if last_inc <= cfg.cauchy_tol * partial[n - 1] {
        IntegralVerdict::Converges
    } else {
        IntegralVerdict::Inconclusive
    };
    let limit = (verdict == IntegralVerdict::Converges).then(|| partial[n - 1]);
    Ok(DivergenceDiagnostic { lambda, radii, partial_integrals: partial, slope, verdict, limit })
}

pub(crate) fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 { 0.0 } else { sxy / sxx }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub gamma0: Option<Vec<f64>>,
    pub finite_variation: bool,
    pub fv_test: FvReport,
    pub a_nonzero: bool,
    pub gaussian_rank: usize,
    pub nu_finite: bool,
    pub regularity_integral: Option<DivergenceDiagnostic>,
    pub declared_subspace: Option<Vec<f64>>,
    /// Whether the non-degeneracy hypothesis (H0) holds (d > 1 only).
    pub h0: Option<bool>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub label: Label,
    pub evidence: Evidence,
}

impl Classification {
    pub fn zero_regular(&self) -> bool {
        self.label.zero_regular()
    }

    /// Whether the time and space Kato conditions are expected to define the same class.
    pub fn classes_coincide(&self) -> bool {
        !self.zero_regular()
    }
}

fn is_zero_vec(v: &[f64]) -> bool {
    v.iter().all(|x| x.abs() < 1e-13)
}

/// Classifies a process at discount rate λ.
pub fn classify(spec: &ProcessSpec, lambda: f64, cfg: &RegularityConfig) -> Result<Classification> {
    spec.validate()?;
    if !(lambda > 0.0) {
        return Err(Error::InvalidSpec("λ must be positive".into()));
    }
    if spec.dim() == 1 {
        classify_1d(spec, lambda, cfg)
    } else {
        classify_multi(spec, lambda, cfg)
    }
}

fn base_evidence(spec: &ProcessSpec) -> Evidence {
    let fv = spec.finite_variation();
    let rank = spec.gaussian_rank();
    Evidence {
        gamma0: spec.gamma0(),
        finite_variation: fv.finite_variation,
        fv_test: fv,
        a_nonzero: rank > 0,
        gaussian_rank: rank,
        nu_finite: spec.nu_finite(),
        regularity_integral: None,
        declared_subspace: None,
        h0: None,
        reason: String::new(),
    }
}

fn classify_1d(spec: &ProcessSpec, lambda: f64, cfg: &RegularityConfig) -> Result<Classification> {
    let mut ev = base_evidence(spec);
    let g0_zero = ev.gamma0.as_deref().map(is_zero_vec);
    if !ev.a_nonzero && ev.nu_finite && g0_zero == Some(true) {
        ev.reason = "A = 0, γ₀ = 0 and ν finite".into();
        return Ok(Classification { label: Label::CompoundPoisson, evidence: ev });
    }
    // Labels settled by the triplet alone skip the integral.
    if ev.a_nonzero {
        ev.reason = "Gaussian part present".into();
        return Ok(Classification { label: Label::C, evidence: ev });
    }
    if ev.finite_variation {
        let label = if g0_zero == Some(false) {
            ev.reason = "A = 0, finite variation, γ₀ ≠ 0".into();
            Label::B
        } else {
            ev.reason = "finite variation with zero drift and infinite activity: points are polar".into();
            Label::A
        };
        return Ok(Classification { label, evidence: ev });
    }
    let diag = regularity_integral(|x| spec.psi1(x), lambda, cfg)?;
    let label = match diag.verdict {
        IntegralVerdict::Diverges => Label::A,
        IntegralVerdict::Converges => Label::C,
        IntegralVerdict::Inconclusive => return Err(Error::InconclusiveIntegral(Box::new(diag))),
    };
    ev.reason = format!("regularity integral {:?}", diag.verdict);
    ev.regularity_integral = Some(diag);
    Ok(Classification { label, evidence: ev })
}

fn classify_multi(spec: &ProcessSpec, lambda: f64, cfg: &RegularityConfig) -> Result<Classification> {
    match spec {
        ProcessSpec::Product(p) => {
            let z = classify_1d(&p.z, lambda, cfg)?;
            let label = match z.label {
                Label::A => Label::Aprime,
                Label::B => Label::Bprime,
                Label::C => Label::Cprime,
                other => other,
            };
            let mut ev = z.evidence;
            ev.declared_subspace = Some(p.direction.clone());
            ev.h0 = Some(false);
            ev.reason = format!("declared decomposition; Z classified as {}", z.label.as_str());
            Ok(Classification { label, evidence: ev })
        }
        ProcessSpec::SpaceTime { x } => {
            let mut ev = base_evidence(spec);
            let x_cp_like = x.dim() == 1 && x.gaussian_rank() == 0 && x.nu_finite();
            if x_cp_like {
                // (t, X_t) = drift along (1, γ₀) plus compound Poisson jumps off that line.
                let g0 = x.gamma0().map(|g| g[0]).unwrap_or(0.0);
                ev.declared_subspace = Some(vec![1.0, g0]);
                ev.h0 = Some(false);
                ev.reason = "space-time process of a compound Poisson process with drift".into();
                Ok(Classification { label: Label::Bprime, evidence: ev })
            } else {
                ev.h0 = Some(true);
                ev.reason = "space-time process with infinite activity or Gaussian spatial part: (H0), 0 not regular".into();
                Ok(Classification { label: Label::DGt1H0, evidence: ev })
            }
        }
        ProcessSpec::Triplet(t) => {
            let mut ev = base_evidence(spec);
            let rank = ev.gaussian_rank;
            if rank >= 2 {
                ev.h0 = Some(true);
                ev.reason = "Gaussian part of rank ≥ 2".into();
                return Ok(Classification { label: Label::DGt1H0, evidence: ev });
            }
            if ev.nu_finite {
                let g0 = ev.gamma0.clone().unwrap_or_else(|| vec![0.0; t.dimension]);
                if rank == 0 {
                    if is_zero_vec(&g0) {
                        ev.reason = "A = 0, γ₀ = 0 and ν finite".into();
                        return Ok(Classification { label: Label::CompoundPoisson, evidence: ev });
                    }
                    ev.h0 = Some(false);
                    ev.declared_subspace = Some(g0.clone());
                    ev.reason = "finite ν and pure drift: degenerate along span(γ₀)".into();
                    return Ok(Classification { label: Label::Bprime, evidence: ev });
                }
                // rank 1: V = range(A); degenerate iff the drift stays on V.
                let ev_a = range_vector(&t.a);
                let dot: f64 = ev_a.iter().zip(&g0).map(|(a, g)| a * g).sum();
                let g2: f64 = g0.iter().map(|g| g * g).sum();
                if g2 - dot * dot <= 1e-20 * g2.max(1.0) {
                    ev.h0 = Some(false);
                    ev.declared_subspace = Some(ev_a);
                    ev.reason = "rank-1 Gaussian part, finite ν, drift along range(A)".into();
                    return Ok(Classification { label: Label::Cprime, evidence: ev });
                }
                ev.h0 = Some(true);
                ev.reason = "rank-1 Gaussian part with drift leaving range(A)".into();
                return Ok(Classification { label: Label::DGt1H0, evidence: ev });
            }
            if t.nu.iter().any(|p| matches!(p, crate::levy::MeasurePart::Stable { .. })) {
                ev.h0 = Some(true);
                ev.reason = "isotropic infinite-activity jumps".into();
                return Ok(Classification { label: Label::DGt1H0, evidence: ev });
            }
            Err(Error::MissingDecomposition(
                "infinite non-isotropic ν with Gaussian rank ≤ 1; declare a product decomposition".into(),
            ))
        }
        ProcessSpec::Subordinator { .. } => unreachable!("subordinators are one-dimensional"),
    }
}

/// Unit vector spanning the range of a rank-one nonnegative matrix.
fn range_vector(a: &[Vec<f64>]) -> Vec<f64> {
    let (i, _) = a.iter().enumerate().map(|(i, r)| (i, r[i])).fold((0, f64::MIN), |m, x| if x.1 > m.1 { x } else { m });
    let col: Vec<f64> = a.iter().map(|r| r[i]).collect();
    let n = col.iter().map(|x| x * x).sum::<f64>().sqrt();
    col.iter().map(|x| x / n).collect()
}

/// Sampled h^λ on the kernel's grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HittingTransform {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub lambda: f64,
    /// Case B: normalised by the grid supremum, shape only, jump at 0.
    pub discontinuous_at_zero: bool,
    pub normalisation: f64,
}

impl HittingTransform {
    /// M = sup_{|z|≤1} 1/h^λ(z) over grid points.
    pub fn harnack_constant(&self) -> f64 {
        self.grid
            .iter()
            .zip(&self.values)
            .filter(|(x, _)| x.abs() <= 1.0)
            .map(|(_, h)| if *h > 0.0 { 1.0 / h } else { f64::INFINITY })
            .fold(1.0, f64::max)
    }

    /// sup over nonzero grid points.
    pub fn sup_off_zero(&self) -> f64 {
        self.grid.iter().zip(&self.values).filter(|(x, _)| **x != 0.0).map(|(_, h)| *h).fold(0.0, f64::max)
    }
}

/// h^λ = G^λ/G^λ(0) in case C, G^λ/sup G^λ in case B, 0 in case A.
pub fn hitting_transform(kernel: &KernelGrid, class: &Classification, g_at_zero: Option<f64>) -> Result<HittingTransform> {
    let n = kernel.grid.len();
    match class.label {
        Label::CompoundPoisson => Err(Error::WrongCase("compound Poisson has no potential density".into())),
        Label::A | Label::Aprime | Label::DGt1H0 => Ok(HittingTransform {
            grid: kernel.grid.clone(),
            values: vec![0.0; n],
            lambda: kernel.lambda,
            discontinuous_at_zero: false,
            normalisation: 0.0,
        }),
        Label::C | Label::Cprime => {
            let g0 = match g_at_zero {
                Some(v) => v,
                None => kernel
                    .grid
                    .iter()
                    .position(|&x| x == 0.0)
                    .map(|i| kernel.values[i])
                    .ok_or_else(|| Error::InvalidSpec("case C needs G(0): include 0 in the grid".into()))?,
            };
            if !(g0 > 0.0) {
                return Err(Error::QuadratureFailure { context: "G(0)".into(), value: g0, error: 0.0 });
            }
            let values = kernel.values.iter().map(|v| (v / g0).clamp(0.0, 1.0 + 1e-9)).collect();
            Ok(HittingTransform { grid: kernel.grid.clone(), values, lambda: kernel.lambda, discontinuous_at_zero: false, normalisation: g0 })
        }
        Label::B | Label::Bprime => {
            let sup = kernel.grid.iter().zip(&kernel.values).filter(|(x, _)| **x != 0.0).map(|(_, v)| *v).fold(0.0, f64::max);
            if !(sup > 0.0) {
                return Err(Error::QuadratureFailure { context: "sup G".into(), value: sup, error: 0.0 });
            }
            let values = kernel.grid.iter().zip(&kernel.values).map(|(x, v)| if *x == 0.0 { 1.0 } else { v / sup }).collect();
            Ok(HittingTransform { grid: kernel.grid.clone(), values, lambda: kernel.lambda, discontinuous_at_zero: true, normalisation: sup })
        }
    }
}
