//! Ahlfors–Beurling bound and extremal function, and the Ahlfors map of a
//! simply connected domain from its Szegő kernel.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{szego_kernel_with, KernelOptions};
use crate::basis::Frame;
use crate::domain::{inversion_rule, DomainSpec};
use crate::error::{Error, Result};

/// `sqrt(v(E)/π)` with `E = ℂ∞ \ j_{z0}(Ω)`, a lower bound for `c_B(z0)`.
pub fn ahlfors_beurling_bound(spec: &DomainSpec, z0: Complex64) -> Result<f64> {
    Ok((spec.without_punctures().inverted_complement_volume(z0)? / PI).sqrt())
}

/// `f(z) = (π v(E))^{-1/2} ∫_E dv(w) / (w − ζ)` with `ζ = 1/(z − z0)`.
///
/// The area integral is moved to `∂E = j(∂Ω)` using the primitive
/// `(w̄ − ζ̄)/(w − ζ)` of `1/(w − ζ)` in `w̄`. Far from `E` the moment series
/// `−Σ ζ^{−k−1} ∫_E w^k dv` is used instead, which keeps `f` accurate near `z0`.
pub fn ab_extremal_eval(spec: &DomainSpec, z0: Complex64, z: Complex64) -> Result<Complex64> {
    let spec = spec.without_punctures();
    let region = spec.region();
    if !region.contains(z0) {
        return Err(Error::NotInDomain(z0));
    }
    let scale = region.diameter();
    if !region.contains(z) && region.boundary_distance(z) > 1e-9 * scale {
        return Err(Error::NotInDomain(z));
    }
    if z == z0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let rule = inversion_rule(&region, z0);
    let half_i = Complex64::new(0.0, 2.0);
    let images: Vec<(Complex64, Complex64, Complex64)> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .zip(&rule.tangents)
        .map(|((&s, &w), &t)| {
            let u = s - z0;
            let measure = t * w / (u * u) / half_i;
            (1.0 / u, measure, -t / (u * u))
        })
        .collect();
    let volume: f64 = images.iter().map(|(w, m, _)| (w.conj() * m).re).sum();
    if !(volume > 0.0) {
        return Err(Error::Convergence { what: "inverted complement volume", residual: volume, tolerance: 0.0 });
    }
    let zeta = 1.0 / (z - z0);
    let radius = images.iter().map(|(w, _, _)| w.norm()).fold(0.0, f64::max);
    let integral = if zeta.norm() > 2.0 * radius {
        let inv = 1.0 / zeta;
        let mut powers: Vec<Complex64> = images.iter().map(|_| Complex64::new(1.0, 0.0)).collect();
        let mut sum = Complex64::new(0.0, 0.0);
        let mut zk = inv;
        let ratio = radius / zeta.norm();
        let mut bound = 1.0;
        for _ in 0..400 {
            let moment: Complex64 = images.iter().zip(&powers).map(|((w, m, _), p)| p * w.conj() * m).sum();
            sum -= moment * zk;
            for (p, (w, _, _)) in powers.iter_mut().zip(&images) {
                *p *= w;
            }
            zk *= inv;
            bound *= ratio;
            if bound < 1e-18 {
                break;
            }
        }
        sum
    } else {
        let tiny = 1e-12 * (1.0 + zeta.norm());
        images
            .iter()
            .map(|&(w, m, te)| {
                let d = w - zeta;
                let g = if d.norm() < tiny { te.conj() / te } else { d.conj() / d };
                g * m
            })
            .sum()
    };
    Ok(integral / (PI * volume).sqrt())
}

/// Ahlfors map `f` with `f(z0) = 0`, `f'(z0) = 2π S(z0) > 0`, built from the
/// Szegő extremal function `g = S(·, z0)/S(z0)` as `f' = 2π S(z0) g²`.
/// For simply connected domains this is the Riemann map onto the unit disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AhlforsMap {
    pub pole: Complex64,
    pub frame: Frame,
    /// Coefficients `r_k` of `R(w) = Σ r_k w^k`, with `f = factor · (R(w) − R(w0))`.
    pub primitive: Vec<Complex64>,
    pub factor: f64,
    pub offset: Complex64,
    pub szego: f64,
}

fn horner(c: &[Complex64], x: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * x + a)
}

impl AhlforsMap {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        (horner(&self.primitive, self.frame.w(z)) - self.offset) * self.factor
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let w = self.frame.w(z);
        let d: Vec<Complex64> = self.primitive.iter().enumerate().skip(1).map(|(k, r)| r * k as f64).collect();
        horner(&d, w) * (self.factor / self.frame.scale)
    }
}

pub fn ahlfors_map(spec: &DomainSpec, z0: Complex64, opts: &KernelOptions) -> Result<AhlforsMap> {
    if !spec.is_simply_connected() {
        return Err(Error::Unsupported("the Ahlfors map is only built for simply connected domains".into()));
    }
    // the primitive is built from the polynomial part only
    let opts = KernelOptions { corner_poles: 0, image_poles: false, ..opts.clone() };
    let s = szego_kernel_with(spec, z0, &opts)?;
    let frame = s.basis.frame.clone();
    let a = &s.witness[..s.basis.n_poly];
    let mut sq = vec![Complex64::new(0.0, 0.0); 2 * a.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in a.iter().enumerate() {
            sq[i + j] += x * y;
        }
    }
    let mut primitive = vec![Complex64::new(0.0, 0.0)];
    primitive.extend(sq.iter().enumerate().map(|(k, q)| q / (k + 1) as f64));
    let offset = horner(&primitive, frame.w(z0));
    Ok(AhlforsMap {
        pole: z0,
        factor: 2.0 * PI * s.value * frame.scale,
        frame,
        primitive,
        offset,
        szego: s.value,
    })
}
