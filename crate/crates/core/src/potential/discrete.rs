//! Compound Poisson kernels: G_t^λ(dz) = Σ_n m_n ν₁^{*n}(dz) with ν₁ = ν/ν(ℝ).

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma_lr;
use std::collections::BTreeMap;

use crate::levy::{JumpLaw, MeasurePart, ProcessSpec};
use crate::{Error, Result};

/// The n-fold jump law family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum JumpFamily {
    /// Finitely many jump sizes with probabilities.
    Discrete(Vec<(f64, f64)>),
    Normal { mean: f64, sd: f64 },
}

/// One mixture component of the kernel measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Component {
    Atom { at: f64, weight: f64 },
    Normal { mean: f64, sd: f64, weight: f64 },
}

impl Component {
    pub fn weight(&self) -> f64 {
        match *self {
            Component::Atom { weight, .. } | Component::Normal { weight, .. } => weight,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteKernel {
    pub lambda: f64,
    pub t: f64,
    pub rate: f64,
    pub components: Vec<Component>,
    /// Mass at the origin, m_0.
    pub atom_at_zero: f64,
    pub total_mass: f64,
    /// Total mass dropped by truncation.
    pub truncated: f64,
}

/// Jump law of a compound Poisson spec.
pub fn jump_family(spec: &ProcessSpec) -> Result<(f64, JumpFamily)> {
    let ProcessSpec::Triplet(tr) = spec else {
        return Err(Error::Unsupported("compound Poisson kernels need a one-dimensional triplet".into()));
    };
    let mut atoms: Vec<(f64, f64)> = Vec::new();
    let mut normals = Vec::new();
    for p in &tr.nu {
        match p {
            MeasurePart::Atoms { atoms: a } => atoms.extend(a.iter().map(|x| (x.at[0], x.mass))),
            MeasurePart::Finite { rate, jump: JumpLaw::Atom { at } } => atoms.push((*at, *rate)),
            MeasurePart::Finite { rate, jump: JumpLaw::Normal { mean, sd } } => normals.push((*mean, *sd, *rate)),
            other if other.total_mass() == 0.0 => {}
            _ => return Err(Error::Unsupported("compound Poisson kernels support atom and normal jump laws".into())),
        }
    }
    match (atoms.is_empty(), normals.as_slice()) {
        (false, []) => {
            let r: f64 = atoms.iter().map(|a| a.1).sum();
            Ok((r, JumpFamily::Discrete(atoms.into_iter().map(|(x, m)| (x, m / r)).collect())))
        }
        (true, [(mean, sd, rate)]) => Ok((*rate, JumpFamily::Normal { mean: *mean, sd: *sd })),
        (true, []) => Ok((0.0, JumpFamily::Discrete(vec![]))),
        _ => Err(Error::Unsupported("mixtures of atoms and normal jumps".into())),
    }
}

/// m_n = ∫₀^t e^{-λu} e^{-ru}(ru)^n/n! du = r^n/(λ+r)^{n+1} P(Γ(n+1) ≤ (λ+r)t).
pub fn occupation_weight(n: usize, rate: f64, lambda: f64, t: f64) -> f64 {
    let k = lambda + rate;
    let base = (n as f64 * (rate / k).ln() - k.ln()).exp();
    if t.is_infinite() { base } else { base * gamma_lr(n as f64 + 1.0, k * t) }
}

const MAX_SUPPORT: usize = 20_000;

pub fn cp_kernel(spec: &ProcessSpec, lambda: f64, t: f64) -> Result<DiscreteKernel> {
    if lambda == 0.0 && t.is_infinite() {
        return Err(Error::Unsupported("G⁰ of a compound Poisson process is not a finite measure".into()));
    }
    let (rate, fam) = jump_family(spec)?;
    let total = super::engine::total_mass(lambda, t);
    let mut components = Vec::new();
    let m0 = occupation_weight(0, rate, lambda, t);
    components.push(Component::Atom { at: 0.0, weight: m0 });
    let mut acc = m0;
    let mut law: BTreeMap<i64, (f64, f64)> = BTreeMap::new();
    law.insert(0, (0.0, 1.0));
    let mut n = 0usize;
    while rate > 0.0 && acc < total * (1.0 - 1e-12) && n < 100_000 {
        n += 1;
        let m = occupation_weight(n, rate, lambda, t);
        match &fam {
            JumpFamily::Normal { mean, sd } => {
                components.push(Component::Normal { mean: n as f64 * mean, sd: sd * (n as f64).sqrt(), weight: m });
            }
            JumpFamily::Discrete(jumps) => {
                let mut next: BTreeMap<i64, (f64, f64)> = BTreeMap::new();
                for (x, p) in law.values() {
                    for (j, q) in jumps {
                        let y = x + j;
                        let key = (y * 1e9).round() as i64;
                        let e = next.entry(key).or_insert((y, 0.0));
                        e.1 += p * q;
                    }
                }
                next.retain(|_, v| v.1 > 1e-16);
                if next.len() > MAX_SUPPORT {
                    return Err(Error::Unsupported("jump lattice grows too fast for exact convolution".into()));
                }
                law = next;
                components.extend(law.values().map(|(x, p)| Component::Atom { at: *x, weight: m * p }));
            }
        }
        acc += m;
        if m < 1e-300 {
            break;
        }
    }
    Ok(DiscreteKernel { lambda, t, rate, components, atom_at_zero: m0, total_mass: total, truncated: (total - acc).max(0.0) })
}

impl DiscreteKernel {
    /// G((lo, hi)).
    pub fn mass_in(&self, lo: f64, hi: f64) -> f64 {
        use statrs::distribution::{ContinuousCDF, Normal};
        self.components
            .iter()
            .map(|c| match *c {
                Component::Atom { at, weight } => if at > lo && at < hi { weight } else { 0.0 },
                Component::Normal { mean, sd, weight } => {
                    let n = Normal::new(mean, sd).unwrap();
                    weight * (n.cdf(hi) - n.cdf(lo))
                }
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levy::family;
    use serde_json::json;

    #[test]
    fn holding_time_occupation() {
        let spec = family("cp", &json!({"rate": 1.0})).unwrap();
        let k = cp_kernel(&spec, 0.0, 1.0).unwrap();
        assert!((k.atom_at_zero - (1.0 - (-1.0f64).exp())).abs() < 1e-14);
        let sum: f64 = k.components.iter().map(|c| c.weight()).sum();
        assert!((sum - 1.0).abs() < 1e-11);
        let k = cp_kernel(&spec, 2.0, f64::INFINITY).unwrap();
        assert!((k.atom_at_zero - 1.0 / 3.0).abs() < 1e-14);
        assert!((k.mass_in(0.5, 1.5) - 1.0 / 9.0).abs() < 1e-14);
    }
}
