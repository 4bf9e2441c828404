//! Process specifications and the characteristic exponent.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use super::laplace::LaplaceExponent;
use super::measure::{Atom, MeasurePart};
use crate::error::{Error, Result};

/// Lévy–Khintchine triplet (γ, A, ν) in dimension d.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevyTriplet {
    pub dimension: usize,
    pub gamma: Vec<f64>,
    pub a: Vec<Vec<f64>>,
    #[serde(default)]
    pub nu: Vec<MeasurePart>,
}

/// X = Y + Z with Y compound Poisson (atoms off the line V) and Z one-dimensional on V = span(direction).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductSpec {
    pub dimension: usize,
    pub direction: Vec<f64>,
    #[serde(default)]
    pub y: Vec<Atom>,
    pub z: Box<ProcessSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProcessSpec {
    Triplet(LevyTriplet),
    Subordinator { laplace: LaplaceExponent },
    Product(ProductSpec),
    /// The space-time process (t, X_t); time is the first coordinate.
    SpaceTime { x: Box<ProcessSpec> },
}

/// Strictly stable part plus linear drift:
/// ψ(ξ) = −i·drift·ξ + scale·ψ₁(ξ) with ψ₁ strictly α-stable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StableStructure {
    pub alpha: f64,
    pub kind: StableKind,
    pub scale: f64,
    pub drift: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StableKind {
    /// ψ₁ = |ξ|^α (α = 2 is Brownian motion with ψ₁ = ξ²).
    Symmetric,
    /// ψ₁ = −Γ(−α)(−iξ)^α, Lévy density z^{-1-α} on (0,∞).
    Positive,
    /// Mirror image of `Positive`.
    Negative,
    /// No jumps and no Gaussian part: X_t = drift·t.
    DriftOnly,
}

impl StableStructure {
    /// Base exponent ψ₁(ξ).
    pub fn psi1(kind: StableKind, alpha: f64, xi: f64) -> C64 {
        match kind {
            StableKind::Symmetric => C64::new(xi.abs().powf(alpha), 0.0),
            StableKind::Positive => C64::new(0.0, -xi).powf(alpha) * (-gamma(-alpha)),
            StableKind::Negative => C64::new(0.0, xi).powf(alpha) * (-gamma(-alpha)),
            StableKind::DriftOnly => C64::new(0.0, 0.0),
        }
    }

    pub fn psi(&self, xi: f64) -> C64 {
        C64::new(0.0, -self.drift * xi) + Self::psi1(self.kind, self.alpha, xi) * self.scale
    }
}

/// Diagnostic trail of the finite-variation test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FvReport {
    /// J_k = ∫_{2^{-k-1}<|z|≤2^{-k}} |z| ν(dz), k = 0..levels.
    pub levels: Vec<f64>,
    /// Geometric-mean ratio J_{k+1}/J_k over the second half of the levels.
    pub ratio: f64,
    pub finite_variation: bool,
}

const FV_LEVELS: usize = 20;

impl LevyTriplet {
    pub fn one_dim(gamma: f64, a: f64, nu: Vec<MeasurePart>) -> Self {
        LevyTriplet { dimension: 1, gamma: vec![gamma], a: vec![vec![a]], nu }
    }

    fn validate(&self) -> Result<()> {
        let d = self.dimension;
        if d == 0 || self.gamma.len() != d || self.a.len() != d || self.a.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidSpec("triplet dimensions are inconsistent".into()));
        }
        for i in 0..d {
            for j in 0..d {
                if (self.a[i][j] - self.a[j][i]).abs() > 1e-12 * (1.0 + self.a[i][j].abs()) {
                    return Err(Error::InvalidSpec("A must be symmetric".into()));
                }
            }
        }
        if min_eigenvalue(&self.a) < -1e-12 {
            return Err(Error::InvalidSpec("A must be nonnegative definite".into()));
        }
        if self.gamma.iter().chain(self.a.iter().flatten()).any(|x| !x.is_finite()) {
            return Err(Error::InvalidSpec("non-finite triplet entries".into()));
        }
        for p in &self.nu {
            p.validate(d)?;
        }
        Ok(())
    }

    fn psi(&self, xi: &[f64]) -> C64 {
        let mut q = 0.0;
        for i in 0..self.dimension {
            for j in 0..self.dimension {
                q += xi[i] * self.a[i][j] * xi[j];
            }
        }
        let lin: f64 = self.gamma.iter().zip(xi).map(|(g, x)| g * x).sum();
        let mut s = C64::new(q, -lin);
        for p in &self.nu {
            s += p.psi(xi);
        }
        s
    }

    pub fn rank_a(&self) -> usize {
        rank(&self.a)
    }

    pub fn nu_total_mass(&self) -> f64 {
        self.nu.iter().map(|p| p.total_mass()).sum()
    }

    pub fn finite_variation(&self) -> FvReport {
        let levels: Vec<f64> = (0..FV_LEVELS)
            .map(|k| {
                let hi = 2f64.powi(-(k as i32));
                // + 0.0 turns the empty sum's −0.0 into 0.
                self.nu.iter().map(|p| p.band_abs_moment(0.5 * hi, hi, self.dimension)).sum::<f64>() + 0.0
            })
            .collect();
        let half = FV_LEVELS / 2;
        let (a, b) = (levels[half - 1], levels[FV_LEVELS - 1]);
        let ratio = if b == 0.0 {
            0.0
        } else if a == 0.0 {
            f64::INFINITY
        } else {
            (b / a).powf(1.0 / (FV_LEVELS - half) as f64)
        };
        // Atoms produce sparse bands; an all-zero tail is finite variation.
        let tail_zero = levels[half..].iter().all(|&j| j == 0.0);
        let fv = tail_zero || ratio < 1.0 - 1e-6;
        FvReport { levels, ratio, finite_variation: fv }
    }

    /// γ₀ = γ − ∫ z 1_{|z|<1} ν(dz), or None without finite variation.
    pub fn gamma0(&self) -> Option<Vec<f64>> {
        if !self.finite_variation().finite_variation {
            return None;
        }
        let mut g = self.gamma.clone();
        for p in &self.nu {
            match p {
                MeasurePart::Atoms { atoms } => {
                    for a in atoms {
                        let n2: f64 = a.at.iter().map(|x| x * x).sum();
                        if n2 < 1.0 {
                            for (gi, zi) in g.iter_mut().zip(&a.at) {
                                *gi -= zi * a.mass;
                            }
                        }
                    }
                }
                other => {
                    if self.dimension == 1 {
                        g[0] -= other.small_mean();
                    }
                }
            }
        }
        Some(g)
    }

    fn stable_structure(&self) -> Option<StableStructure> {
        if self.dimension != 1 {
            return None;
        }
        let a = self.a[0][0];
        let g = self.gamma[0];
        let parts: Vec<&MeasurePart> = self.nu.iter().filter(|p| p.total_mass() > 0.0).collect();
        match (parts.as_slice(), a > 0.0) {
            ([], true) => Some(StableStructure { alpha: 2.0, kind: StableKind::Symmetric, scale: a, drift: g }),
            ([], false) => Some(StableStructure { alpha: 1.0, kind: StableKind::DriftOnly, scale: 0.0, drift: g }),
            ([MeasurePart::Stable { alpha, scale }], false) => {
                Some(StableStructure { alpha: *alpha, kind: StableKind::Symmetric, scale: *scale, drift: g })
            }
            ([MeasurePart::Power { coeff, alpha, lower, upper, side, temper }], false)
                if *lower == 0.0 && upper.is_infinite() && *temper == 0.0 && *alpha > 0.0 && *alpha < 2.0 && (alpha - 1.0).abs() > 1e-12 =>
            {
                let (al, c) = (*alpha, *coeff);
                Some(match side {
                    super::measure::Side::Both => StableStructure {
                        alpha: al,
                        kind: StableKind::Symmetric,
                        scale: -2.0 * c * gamma(-al) * (std::f64::consts::PI * al / 2.0).cos(),
                        drift: g,
                    },
                    super::measure::Side::Positive => {
                        StableStructure { alpha: al, kind: StableKind::Positive, scale: c, drift: g - c / (1.0 - al) }
                    }
                    super::measure::Side::Negative => {
                        StableStructure { alpha: al, kind: StableKind::Negative, scale: c, drift: g + c / (1.0 - al) }
                    }
                })
            }
            _ => None,
        }
    }
}

impl ProcessSpec {
    pub fn dim(&self) -> usize {
        match self {
            ProcessSpec::Triplet(t) => t.dimension,
            ProcessSpec::Subordinator { .. } => 1,
            ProcessSpec::Product(p) => p.dimension,
            ProcessSpec::SpaceTime { x } => 1 + x.dim(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ProcessSpec::Triplet(t) => t.validate(),
            ProcessSpec::Subordinator { laplace } => laplace.validate(),
            ProcessSpec::Product(p) => {
                if p.dimension < 2 || p.direction.len() != p.dimension {
                    return Err(Error::InvalidSpec("product needs dimension ≥ 2 and a direction of that length".into()));
                }
                let n: f64 = p.direction.iter().map(|x| x * x).sum::<f64>().sqrt();
                if !(n > 0.0) {
                    return Err(Error::InvalidSpec("direction must be nonzero".into()));
                }
                if p.z.dim() != 1 {
                    return Err(Error::InvalidSpec("Z must be one-dimensional (it lives on V)".into()));
                }
                p.z.validate()?;
                for a in &p.y {
                    if a.at.len() != p.dimension || !(a.mass > 0.0) {
                        return Err(Error::InvalidSpec("Y atoms must have the product dimension and positive mass".into()));
                    }
                    // ν^Y must vanish on V: an atom on the line would be a Z-jump.
                    let dot: f64 = a.at.iter().zip(&p.direction).map(|(x, e)| x * e).sum::<f64>() / n;
                    let an: f64 = a.at.iter().map(|x| x * x).sum::<f64>().sqrt();
                    if (an * an - dot * dot).abs() <= 1e-12 * an * an {
                        return Err(Error::InvalidSpec("a Y atom lies on V; move it into Z".into()));
                    }
                }
                Ok(())
            }
            ProcessSpec::SpaceTime { x } => x.validate(),
        }
    }

    /// Characteristic exponent ψ(ξ) with E e^{i⟨ξ,X_t⟩} = e^{−tψ(ξ)}.
    pub fn psi(&self, xi: &[f64]) -> C64 {
        match self {
            ProcessSpec::Triplet(t) => t.psi(xi),
            ProcessSpec::Subordinator { laplace } => laplace.eval_complex(C64::new(0.0, -xi[0])),
            ProcessSpec::Product(p) => {
                let n: f64 = p.direction.iter().map(|x| x * x).sum::<f64>().sqrt();
                let proj: f64 = p.direction.iter().zip(xi).map(|(e, x)| e * x).sum::<f64>() / n;
                let mut s = p.z.psi(&[proj]);
                for a in &p.y {
                    let dot: f64 = a.at.iter().zip(xi).map(|(z, x)| z * x).sum();
                    let h = (0.5 * dot).sin();
                    s += C64::new(2.0 * h * h, -dot.sin()) * a.mass;
                }
                s
            }
            ProcessSpec::SpaceTime { x } => C64::new(0.0, -xi[0]) + x.psi(&xi[1..]),
        }
    }

    /// One-dimensional convenience wrapper.
    pub fn psi1(&self, xi: f64) -> C64 {
        self.psi(&[xi])
    }

    pub fn is_symmetric(&self) -> bool {
        match self {
            ProcessSpec::Triplet(t) => t.gamma.iter().all(|&g| g == 0.0) && t.nu.iter().all(|p| p.is_symmetric()),
            _ => false,
        }
    }

    pub fn as_triplet(&self) -> Option<&LevyTriplet> {
        match self {
            ProcessSpec::Triplet(t) => Some(t),
            _ => None,
        }
    }

    /// Whether ν is a finite measure.
    pub fn nu_finite(&self) -> bool {
        match self {
            ProcessSpec::Triplet(t) => t.nu_total_mass().is_finite(),
            ProcessSpec::Subordinator { .. } => false,
            ProcessSpec::Product(p) => p.z.nu_finite(),
            ProcessSpec::SpaceTime { x } => x.nu_finite(),
        }
    }

    /// Total jump rate for finite ν (0 if ν = 0).
    pub fn jump_rate(&self) -> f64 {
        match self {
            ProcessSpec::Triplet(t) => t.nu_total_mass(),
            _ => f64::INFINITY,
        }
    }

    pub fn finite_variation(&self) -> FvReport {
        match self {
            ProcessSpec::Triplet(t) => t.finite_variation(),
            ProcessSpec::Subordinator { .. } => FvReport { levels: vec![], ratio: 0.0, finite_variation: true },
            ProcessSpec::Product(p) => p.z.finite_variation(),
            ProcessSpec::SpaceTime { x } => x.finite_variation(),
        }
    }

    /// γ₀ for finite-variation specs (None otherwise).
    pub fn gamma0(&self) -> Option<Vec<f64>> {
        match self {
            ProcessSpec::Triplet(t) => t.gamma0(),
            ProcessSpec::Subordinator { laplace } => Some(vec![laplace.drift]),
            ProcessSpec::Product(p) => {
                let gz = p.z.gamma0()?[0];
                let n: f64 = p.direction.iter().map(|x| x * x).sum::<f64>().sqrt();
                Some(p.direction.iter().map(|e| gz * e / n).collect())
            }
            ProcessSpec::SpaceTime { x } => {
                let mut g = vec![1.0];
                g.extend(x.gamma0()?);
                Some(g)
            }
        }
    }

    pub fn gaussian_rank(&self) -> usize {
        match self {
            ProcessSpec::Triplet(t) => t.rank_a(),
            ProcessSpec::Subordinator { .. } => 0,
            ProcessSpec::Product(p) => p.z.gaussian_rank(),
            ProcessSpec::SpaceTime { x } => x.gaussian_rank(),
        }
    }

    pub fn stable_structure(&self) -> Option<StableStructure> {
        match self {
            ProcessSpec::Triplet(t) => t.stable_structure(),
            ProcessSpec::Subordinator { laplace } => match laplace.family {
                super::laplace::LaplaceFamily::ShiftedStable { delta, m, alpha } if m == 0.0 => Some(StableStructure {
                    alpha,
                    kind: StableKind::Positive,
                    scale: delta / (-gamma(-alpha)),
                    drift: laplace.drift,
                }),
                _ => None,
            },
            _ => None,
        }
    }

    /// Linear drift that can be factored out of ψ as −i·drift·ξ leaving a
    /// sublinear remainder (finite-variation one-dimensional specs).
    pub fn linear_drift(&self) -> f64 {
        if self.dim() != 1 {
            return 0.0;
        }
        if let Some(s) = self.stable_structure() {
            return s.drift;
        }
        if self.gaussian_rank() > 0 {
            return 0.0;
        }
        self.gamma0().map(|g| g[0]).unwrap_or(0.0)
    }

    /// Whether ∫_{|z|>1}|z|ν(dz) = ∞; None when undecidable from the representation.
    pub fn first_moment_tail_infinite(&self) -> Option<bool> {
        match self {
            ProcessSpec::Triplet(t) => {
                let mut any = false;
                for p in &t.nu {
                    any |= p.first_moment_tail_infinite()?;
                }
                Some(any)
            }
            ProcessSpec::Subordinator { laplace } => match laplace.family {
                super::laplace::LaplaceFamily::ShiftedStable { m, .. } => Some(m == 0.0),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn subordinator(&self) -> Option<&LaplaceExponent> {
        match self {
            ProcessSpec::Subordinator { laplace } => Some(laplace),
            _ => None,
        }
    }
}

/// Smallest eigenvalue of a symmetric matrix by Jacobi rotations.
pub fn min_eigenvalue(a: &[Vec<f64>]) -> f64 {
    eigenvalues(a).into_iter().fold(f64::INFINITY, f64::min)
}

pub fn eigenvalues(a: &[Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    for _ in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += m[i][j] * m[i][j];
                }
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    (0..n).map(|i| m[i][i]).collect()
}

pub fn rank(a: &[Vec<f64>]) -> usize {
    let ev = eigenvalues(a);
    let scale = ev.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    ev.iter().filter(|&&x| x > 1e-10 * scale.max(1e-300)).count()
}
