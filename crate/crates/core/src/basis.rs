//! Scaled expansion frames and the holomorphic basis used by the kernel solvers.
//!
//! Powers are taken in `w = (z − c)/ρ` with `c` the centroid and `ρ` the largest
//! boundary radius about it, so `|w| ≤ 1` on Ω. Each hole contributes powers of
//! `s = ρ_i/(z − a_i)` with `a_i` the hole centroid and `ρ_i` its distance to the
//! hole boundary, so `|s| ≤ 1` on Ω as well.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::Region;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HoleFrame {
    pub center: Complex64,
    pub scale: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub center: Complex64,
    pub scale: f64,
    pub holes: Vec<HoleFrame>,
}

impl Frame {
    pub fn for_region(region: &Region) -> Result<Self> {
        let center = region.centroid();
        let scale = region
            .outer
            .sample(1024)
            .iter()
            .map(|p| (p - center).norm())
            .fold(0.0, f64::max)
            * 1.0001;
        let holes = region
            .holes
            .iter()
            .map(|h| {
                let a = h.centroid();
                if !h.encloses(a) {
                    return Err(Error::Unsupported("hole whose centroid lies outside it".into()));
                }
                Ok(HoleFrame { center: a, scale: h.distance(a) })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Frame { center, scale, holes })
    }

    pub fn w(&self, z: Complex64) -> Complex64 {
        (z - self.center) / self.scale
    }
}

impl HoleFrame {
    pub fn s(&self, z: Complex64) -> Complex64 {
        self.scale / (z - self.center)
    }
}

/// Pole `(scale/(z − at))^order` placed outside Ω.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pole {
    pub at: Complex64,
    pub scale: f64,
    pub order: u32,
}

/// Pole clustering exponent: the `j`-th of `n` poles sits at distance
/// `L exp(−σ(√n − √j))` from its corner.
pub const POLE_CLUSTERING: f64 = 4.0;

/// Poles clustered toward every polygon corner of the region along the bisector
/// pointing out of Ω: `n` per convex corner, `2n` per reentrant one, none at
/// straight-angle vertices.
pub fn corner_poles(region: &Region, n: usize, order: u32) -> Vec<Pole> {
    if n == 0 {
        return vec![];
    }
    let mut out = Vec::new();
    for curve in std::iter::once(&region.outer).chain(&region.holes) {
        let crate::domain::Curve::Polygon { vertices } = curve else { continue };
        let m = vertices.len();
        for i in 0..m {
            let v = vertices[i];
            let (a, b) = (vertices[(i + m - 1) % m] - v, vertices[(i + 1) % m] - v);
            let (ua, ub) = (a / a.norm(), b / b.norm());
            let cross = ua.re * ub.im - ua.im * ub.re;
            if cross.abs() < 1e-9 && (ua + ub).norm() < 1e-9 {
                continue;
            }
            let len = a.norm().min(b.norm());
            let mut u = -(ua + ub);
            u /= u.norm();
            // the interior lies on the side of the bisector opposite to u
            let reentrant = region.contains(v + u * (1e-6 * len));
            if reentrant {
                u = -u;
            }
            let count = if reentrant { 2 * n } else { n };
            for j in 1..=count {
                let d = len * (-POLE_CLUSTERING * ((count as f64).sqrt() - (j as f64).sqrt())).exp();
                let at = v + u * d;
                if !region.contains(at) {
                    out.push(Pole { at, scale: d, order });
                }
            }
        }
    }
    out
}

/// Most image points generated for one point.
pub const MAX_IMAGES: usize = 12;

/// Images of `z0` across boundary components within `2.5 δ(z0)` of it: the
/// inversion point for a circle, otherwise reflections `2b − z0` in the nearby
/// boundary points `b` that land well outside Ω. Functions with a source at
/// `z0` continue across ∂Ω with their nearest singularities close to these.
pub fn image_points(region: &Region, z0: Complex64) -> Vec<Complex64> {
    let delta = region.boundary_distance(z0);
    let mut out: Vec<Complex64> = Vec::new();
    let push = |m: Complex64, b: Complex64, out: &mut Vec<Complex64>| {
        let ok = !region.contains(m) && region.boundary_distance(m) > 0.5 * (m - b).norm();
        if ok && out.len() < MAX_IMAGES && out.iter().all(|q| (q - m).norm() > 0.1 * delta) {
            out.push(m);
        }
    };
    for curve in std::iter::once(&region.outer).chain(&region.holes) {
        let (d, b, _) = curve.closest_point(z0);
        if d > 2.5 * delta {
            continue;
        }
        if let crate::domain::Curve::Circle { center, radius } = *curve {
            let v = z0 - center;
            if v.norm() > 1e-12 * radius {
                push(center + radius * radius / v.conj(), b, &mut out);
            }
            continue;
        }
        push(b * 2.0 - z0, b, &mut out);
        let near: Vec<Complex64> = curve.sample(1024).into_iter().filter(|p| (p - z0).norm() < 2.5 * delta).collect();
        let stride = near.len().div_ceil(MAX_IMAGES).max(1);
        for p in near.into_iter().step_by(stride) {
            push(p * 2.0 - z0, p, &mut out);
        }
    }
    out
}

/// Poles of the given order at [`image_points`] of `z0`.
pub fn image_poles(region: &Region, z0: Complex64, order: u32) -> Vec<Pole> {
    image_points(region, z0)
        .into_iter()
        .map(|at| Pole { at, scale: region.boundary_distance(at), order })
        .collect()
}

/// `w^k` for `k < n_poly`, then for each hole `s_i^k` for `1 ≤ k ≤ n_hole`,
/// then the poles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HoloBasis {
    pub frame: Frame,
    pub n_poly: usize,
    pub n_hole: usize,
    #[serde(default)]
    pub poles: Vec<Pole>,
}

fn falling(k: usize, m: usize) -> f64 {
    (0..m).map(|i| (k - i) as f64).product()
}

fn rising(k: usize, m: usize) -> f64 {
    (0..m).map(|i| (k + i) as f64).product()
}

impl HoloBasis {
    pub fn new(frame: Frame, n_poly: usize, n_hole: usize) -> Self {
        let n_hole = if frame.holes.is_empty() { 0 } else { n_hole };
        HoloBasis { frame, n_poly, n_hole, poles: vec![] }
    }

    pub fn with_poles(mut self, poles: Vec<Pole>) -> Self {
        self.poles = poles;
        self
    }

    pub fn len(&self) -> usize {
        self.n_poly + self.n_hole * self.frame.holes.len() + self.poles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `m`-th derivatives of every basis function at `z`.
    pub fn derivatives(&self, z: Complex64, m: usize) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.len());
        let w = self.frame.w(z);
        let rho_m = self.frame.scale.powi(m as i32);
        for k in 0..self.n_poly {
            if k < m {
                out.push(Complex64::new(0.0, 0.0));
            } else {
                out.push(w.powu((k - m) as u32) * (falling(k, m) / rho_m));
            }
        }
        for h in &self.frame.holes {
            let s = h.s(z);
            let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
            let hm = h.scale.powi(m as i32);
            for k in 1..=self.n_hole {
                out.push(s.powu((k + m) as u32) * (sign * rising(k, m) / hm));
            }
        }
        let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
        for p in &self.poles {
            let q = p.order as usize;
            let r = p.scale / (z - p.at);
            out.push(r.powu((q + m) as u32) * (sign * rising(q, m) / p.scale.powi(m as i32)));
        }
        out
    }

    pub fn values(&self, z: Complex64) -> Vec<Complex64> {
        self.derivatives(z, 0)
    }

    /// `conj(Φ_n(z))` for a primitive `Φ_n` of each basis function, except that
    /// the `1/(z − a)` terms use the real function `ρ_i log|z − a_i|²`. Either way
    /// `∂_z̄` of the returned value is `conj(φ_n)`, which is what the area-to-boundary
    /// reduction of the Bergman inner product needs. Simple poles have no
    /// single-valued primitive, so every pole must have order at least 2.
    pub fn conj_primitives(&self, z: Complex64) -> Vec<Complex64> {
        assert!(self.poles.iter().all(|p| p.order >= 2), "simple pole in a Bergman basis");
        let mut out = Vec::with_capacity(self.len());
        let w = self.frame.w(z);
        let mut wp = w;
        for k in 0..self.n_poly {
            out.push((wp * (self.frame.scale / (k + 1) as f64)).conj());
            wp *= w;
        }
        for h in &self.frame.holes {
            let s = h.s(z);
            out.push(Complex64::new(h.scale * (z - h.center).norm_sqr().ln(), 0.0));
            let mut sp = s;
            for k in 2..=self.n_hole {
                out.push((sp * (h.scale / (1.0 - k as f64))).conj());
                sp *= s;
            }
        }
        for p in &self.poles {
            let r = p.scale / (z - p.at);
            out.push((r.powu(p.order - 1) * (p.scale / (1.0 - p.order as f64))).conj());
        }
        out
    }

    /// `Σ c_n φ_n^{(m)}(z)`.
    pub fn eval(&self, coeffs: &[Complex64], z: Complex64, m: usize) -> Complex64 {
        self.derivatives(z, m).iter().zip(coeffs).map(|(a, b)| a * b).sum()
    }
}
