//! Closed forms in ℂⁿ: Bergman kernels and Azukawa indicatrix volumes of
//! balls and polydisks at their centers, and the two bounds in terms of the
//! boundary distance δ.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative gap below which a bound counts as attained.
pub const CN_EQUALITY_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum CnDomainSpec {
    Ball { n: usize, center: Vec<Complex64>, radius: f64 },
    Polydisk { radii: Vec<f64>, center: Vec<Complex64> },
}

impl CnDomainSpec {
    pub fn ball(n: usize, radius: f64) -> Result<Self> {
        let s = CnDomainSpec::Ball { n, center: vec![Complex64::new(0.0, 0.0); n], radius };
        s.validate()?;
        Ok(s)
    }

    pub fn polydisk(radii: Vec<f64>) -> Result<Self> {
        let center = vec![Complex64::new(0.0, 0.0); radii.len()];
        let s = CnDomainSpec::Polydisk { radii, center };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        if n == 0 {
            return Err(Error::Geometry("dimension must be at least 1".into()));
        }
        if self.center().len() != n {
            return Err(Error::Geometry(format!("center has {} coordinates, expected {n}", self.center().len())));
        }
        if self.center().iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Geometry("center must be finite".into()));
        }
        let ok = match self {
            CnDomainSpec::Ball { radius, .. } => radius.is_finite() && *radius > 0.0,
            CnDomainSpec::Polydisk { radii, .. } => radii.iter().all(|r| r.is_finite() && *r > 0.0),
        };
        if !ok {
            return Err(Error::Geometry("radii must be positive".into()));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        match self {
            CnDomainSpec::Ball { n, .. } => *n,
            CnDomainSpec::Polydisk { radii, .. } => radii.len(),
        }
    }

    pub fn center(&self) -> &[Complex64] {
        match self {
            CnDomainSpec::Ball { center, .. } | CnDomainSpec::Polydisk { center, .. } => center,
        }
    }

    fn offset(&self, z: &[Complex64]) -> Result<Vec<Complex64>> {
        if z.len() != self.dim() {
            return Err(Error::Argument(format!("point has {} coordinates, expected {}", z.len(), self.dim())));
        }
        Ok(z.iter().zip(self.center()).map(|(a, b)| a - b).collect())
    }

    /// Euclidean distance from `z` to the boundary.
    pub fn boundary_distance(&self, z: &[Complex64]) -> Result<f64> {
        let u = self.offset(z)?;
        let d = match self {
            CnDomainSpec::Ball { radius, .. } => radius - u.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt(),
            CnDomainSpec::Polydisk { radii, .. } => {
                radii.iter().zip(&u).map(|(r, x)| r - x.norm()).fold(f64::INFINITY, f64::min)
            }
        };
        if !(d > 0.0) {
            return Err(Error::NotInDomain(z.first().copied().unwrap_or_default()));
        }
        Ok(d)
    }

    /// Bergman kernel on the diagonal at `z`.
    pub fn bergman(&self, z: &[Complex64]) -> Result<f64> {
        let u = self.offset(z)?;
        match self {
            CnDomainSpec::Ball { n, radius, .. } => {
                let rho = u.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
                ball_bergman(*n, *radius, rho)
            }
            CnDomainSpec::Polydisk { radii, .. } => {
                let mut k = 1.0;
                for (r, x) in radii.iter().zip(&u) {
                    k *= ball_bergman(1, *r, x.norm())?;
                }
                Ok(k)
            }
        }
    }

    fn is_center(&self, z: &[Complex64]) -> Result<bool> {
        let u = self.offset(z)?;
        let scale = match self {
            CnDomainSpec::Ball { radius, .. } => *radius,
            CnDomainSpec::Polydisk { radii, .. } => radii.iter().copied().fold(0.0, f64::max),
        };
        Ok(u.iter().all(|x| x.norm() <= 1e-14 * scale))
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `n! r² / (πⁿ (r² − ρ²)^{n+1})` for the ball of radius `r` in ℂⁿ, where
/// `ρ = |z − center|`.
pub fn ball_bergman(n: usize, r: f64, rho: f64) -> Result<f64> {
    if n == 0 || !(r > 0.0) {
        return Err(Error::Geometry("ball needs n ≥ 1 and r > 0".into()));
    }
    if !(rho >= 0.0 && rho < r) {
        return Err(Error::NotInDomain(Complex64::new(rho, 0.0)));
    }
    let q = r * r - rho * rho;
    Ok(factorial(n) * r * r / (PI.powi(n as i32) * q.powi(n as i32 + 1)))
}

/// Volume of the Azukawa indicatrix at the center.
pub fn azukawa_volume(spec: &CnDomainSpec, z: &[Complex64]) -> Result<f64> {
    spec.validate()?;
    if !spec.is_center(z)? {
        return Err(Error::Unsupported("the indicatrix has a closed form only at the center".into()));
    }
    Ok(match spec {
        CnDomainSpec::Ball { n, radius, .. } => PI.powi(*n as i32) * radius.powi(2 * *n as i32) / factorial(*n),
        CnDomainSpec::Polydisk { radii, .. } => radii.iter().map(|r| PI * r * r).product(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CnBoundsRecord {
    pub n: usize,
    pub k_value: f64,
    pub delta: f64,
    /// `n!/(πⁿ δ^{2n})`, an upper bound for `K`.
    pub bound_b: f64,
    pub azukawa_volume: f64,
    /// `(πⁿ/n!) δ^{2n}`, a lower bound for the indicatrix volume.
    pub bound_a: f64,
    pub gap_b: f64,
    pub gap_a: f64,
    pub equality_b: bool,
    pub equality_a: bool,
}

impl CnBoundsRecord {
    pub fn satisfied(&self, tol: f64) -> bool {
        self.k_value <= self.bound_b * (1.0 + tol) && self.azukawa_volume >= self.bound_a * (1.0 - tol)
    }
}

fn rel_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

pub fn delta_bounds_check(spec: &CnDomainSpec, z: &[Complex64]) -> Result<CnBoundsRecord> {
    let n = spec.dim();
    let delta = spec.boundary_distance(z)?;
    let k_value = spec.bergman(z)?;
    let volume = azukawa_volume(spec, z)?;
    let pn = PI.powi(n as i32);
    let d2n = delta.powi(2 * n as i32);
    let bound_b = factorial(n) / (pn * d2n);
    let bound_a = pn * d2n / factorial(n);
    let (gap_b, gap_a) = (rel_gap(bound_b, k_value), rel_gap(volume, bound_a));
    Ok(CnBoundsRecord {
        n,
        k_value,
        delta,
        bound_b,
        azukawa_volume: volume,
        bound_a,
        gap_b,
        gap_a,
        equality_b: gap_b < CN_EQUALITY_TOLERANCE,
        equality_a: gap_a < CN_EQUALITY_TOLERANCE,
    })
}
