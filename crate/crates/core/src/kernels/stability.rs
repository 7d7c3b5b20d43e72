use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{szego_kernel_with, KernelOptions};
use crate::domain::{Curve, DomainSpec};
use crate::error::{Error, Result};

/// Szegő kernel on corner-rounded approximants of a polygon.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilitySweep {
    /// `(rounding radius, S(z0))` in the order given.
    pub points: Vec<(f64, f64)>,
    /// `S(z0)` on the unrounded domain.
    pub reference: f64,
    /// `|S_last − reference|`.
    pub final_difference: f64,
    /// Successive differences `|S_{k+1} − S_k|`.
    pub steps: Vec<f64>,
    /// Each step is at most 1.5 times the previous one.
    pub cauchy: bool,
}

/// Slack factor on successive differences for the Cauchy check.
pub const CAUCHY_SLACK: f64 = 1.5;

pub fn szego_stability_sweep(
    spec: &DomainSpec,
    rounding_radii: &[f64],
    z0: Complex64,
    opts: &KernelOptions,
) -> Result<StabilitySweep> {
    if rounding_radii.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::Argument("rounding radii must be positive".into()));
    }
    if rounding_radii.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Argument("rounding radii must be strictly decreasing".into()));
    }
    let base = spec.without_punctures();
    let region = base.region();
    let reference = szego_kernel_with(&base, z0, opts)?.value;
    let vertices = match (&region.outer, region.holes.is_empty()) {
        (Curve::Polygon { vertices }, true) => Some(vertices.clone()),
        (Curve::Circle { .. } | Curve::Fourier { .. }, true) => None,
        _ => return Err(Error::Unsupported("stability sweep needs a polygon or a smooth simply connected domain".into())),
    };
    let mut points = Vec::with_capacity(rounding_radii.len());
    for &r in rounding_radii {
        let value = match &vertices {
            Some(v) => {
                let rounded = DomainSpec::multiply_connected(Curve::rounded(v.clone(), r)?, vec![])?;
                szego_kernel_with(&rounded, z0, opts)?.value
            }
            None => reference,
        };
        points.push((r, value));
    }
    let steps: Vec<f64> = points.windows(2).map(|w| (w[1].1 - w[0].1).abs()).collect();
    let cauchy = steps.windows(2).all(|w| w[1] <= CAUCHY_SLACK * w[0] + 1e-14);
    let final_difference = points.last().map_or(0.0, |p| (p.1 - reference).abs());
    Ok(StabilitySweep { points, reference, final_difference, steps, cauchy })
}
