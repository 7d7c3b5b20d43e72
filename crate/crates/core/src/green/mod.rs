//! Green's function with a logarithmic pole, by boundary collocation.
//!
//! `G(z, z0) = log|z − z0| + ρ(z)` where `ρ` is expanded in real harmonic
//! functions: a constant, `Re/Im w^k`, and per hole `log|z − a_i|` and
//! `Re/Im s_i^k` (see [`crate::basis`]), plus `Re/Im` of simple poles clustered
//! outside polygon corners. Coefficients minimize the residual of
//! `G` at graded boundary nodes in the (unweighted) least-squares sense.

mod level;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{corner_poles, image_points, Frame, Pole};
use crate::domain::{DomainSpec, QuadratureRule, Region};
use crate::error::{Error, Result};
use crate::linalg::{truncated_lstsq, SINGULAR_CUTOFF};

pub use level::{default_t_grid, LevelOptions, LevelSet, SublevelSweep, SweepRecord};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GreenOptions {
    /// Highest power of `w` in the expansion.
    pub basis_size: usize,
    /// Highest power of `s_i` per hole; defaults to `basis_size`.
    pub hole_basis: Option<usize>,
    /// Collocation nodes per boundary component; defaults from the basis size.
    pub nodes: Option<usize>,
    /// Largest admissible max-norm boundary residual.
    pub tolerance: f64,
    /// Poles per polygon corner.
    #[serde(default = "default_corner_poles")]
    pub corner_poles: usize,
}

/// Default number of poles per polygon corner.
pub const DEFAULT_CORNER_POLES: usize = 32;

fn default_corner_poles() -> usize {
    DEFAULT_CORNER_POLES
}

impl Default for GreenOptions {
    fn default() -> Self {
        GreenOptions {
            basis_size: 64,
            hole_basis: None,
            nodes: None,
            tolerance: 1e-7,
            corner_poles: DEFAULT_CORNER_POLES,
        }
    }
}

impl GreenOptions {
    pub fn with_basis(basis_size: usize) -> Self {
        GreenOptions { basis_size, ..Default::default() }
    }
}

/// A solved Green's function.
#[derive(Clone, Debug)]
pub struct GreenModel {
    pub pole: Complex64,
    pub frame: Frame,
    pub degree: usize,
    pub hole_degree: usize,
    /// Real coefficients in column order: constant, `(Re w^k, Im w^k)` for
    /// `k = 1..=degree`, then per hole `log|z − a_i|` and `(Re s^k, Im s^k)`,
    /// then `(Re, Im)` of `scale/(z − at)` per pole, then `log|z − z*|` per image.
    pub coefficients: Vec<f64>,
    pub poles: Vec<Pole>,
    /// Image charges `z*` with the coefficient of `log|z − z*|`.
    pub mirrors: Vec<(Complex64, f64)>,
    /// Max-norm of `G` on a check rule distinct from the collocation nodes.
    pub residual: f64,
    pub tolerance: f64,
    /// Punctures were present in the input and ignored (they are polar).
    pub ignored_punctures: usize,
    pub region: Region,
    constant: f64,
    poly: Vec<Complex64>,
    holes: Vec<HoleTerms>,
    pole_coeffs: Vec<Complex64>,
}

#[derive(Clone, Debug)]
struct HoleTerms {
    log_coeff: f64,
    series: Vec<Complex64>,
}

/// `(p, p', p'')` of `Σ_{k≥1} a_k x^k`.
fn horner2(coeffs: &[Complex64], x: Complex64) -> (Complex64, Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    let (mut p, mut d1, mut d2) = (zero, zero, zero);
    for a in coeffs.iter().rev() {
        d2 = d2 * x + d1 * 2.0;
        d1 = d1 * x + p;
        p = p * x + a;
    }
    // the loop evaluated Σ a_k x^{k-1}; shift by one power
    (p * x, p + d1 * x, d1 * 2.0 + d2 * x)
}

fn design_row(
    frame: &Frame,
    degree: usize,
    hole_degree: usize,
    poles: &[Pole],
    mirrors: &[Complex64],
    z: Complex64,
    row: &mut [f64],
) {
    row[0] = 1.0;
    let w = frame.w(z);
    let mut wp = w;
    let mut col = 1;
    for _ in 1..=degree {
        row[col] = wp.re;
        row[col + 1] = wp.im;
        wp *= w;
        col += 2;
    }
    for h in &frame.holes {
        row[col] = (z - h.center).norm().ln();
        col += 1;
        let s = h.s(z);
        let mut sp = s;
        for _ in 1..=hole_degree {
            row[col] = sp.re;
            row[col + 1] = sp.im;
            sp *= s;
            col += 2;
        }
    }
    for p in poles {
        let v = p.scale / (z - p.at);
        row[col] = v.re;
        row[col + 1] = v.im;
        col += 2;
    }
    for (k, m) in mirrors.iter().enumerate() {
        row[col + k] = (z - m).norm().ln();
    }
}

fn default_nodes(region: &Region, columns: usize) -> usize {
    let smooth = 4 * columns + 64;
    if region.holes.is_empty() {
        smooth.max(256)
    } else {
        smooth.max(384)
    }
}

pub fn solve_green(spec: &DomainSpec, z0: Complex64, basis_size: usize) -> Result<GreenModel> {
    solve_green_with(spec, z0, &GreenOptions::with_basis(basis_size))
}

pub fn solve_green_with(spec: &DomainSpec, z0: Complex64, opts: &GreenOptions) -> Result<GreenModel> {
    if opts.basis_size < 8 {
        return Err(Error::Config(format!("basis_size must be at least 8, got {}", opts.basis_size)));
    }
    let region = spec.region();
    if !region.contains(z0) {
        return Err(Error::NotInDomain(z0));
    }
    if region.boundary_distance(z0) < 1e-9 * region.diameter() {
        return Err(Error::NotInDomain(z0));
    }
    let region = Region { punctures: vec![], ..region };
    let frame = Frame::for_region(&region)?;
    let degree = opts.basis_size;
    let hole_degree = if frame.holes.is_empty() { 0 } else { opts.hole_basis.unwrap_or(degree) };
    let poles = corner_poles(&region, opts.corner_poles, 1);
    let mirrors = image_points(&region, z0);
    let cols = 1 + 2 * degree + frame.holes.len() * (1 + 2 * hole_degree) + 2 * poles.len() + mirrors.len();
    let n = opts.nodes.unwrap_or_else(|| default_nodes(&region, cols));
    if n < 8 {
        return Err(Error::Config(format!("need at least 8 nodes per component, got {n}")));
    }
    let rule = region.quadrature(n);
    let rows: Vec<(Vec<f64>, f64)> = rule
        .nodes
        .par_iter()
        .map(|&z| {
            let mut row = vec![0.0; cols];
            design_row(&frame, degree, hole_degree, &poles, &mirrors, z, &mut row);
            (row, -(z - z0).norm().ln())
        })
        .collect();
    let a = DMatrix::from_fn(rows.len(), cols, |i, j| rows[i].0[j]);
    let b = DVector::from_iterator(rows.len(), rows.iter().map(|r| r.1));
    let (x, _) = truncated_lstsq(&a, &b, SINGULAR_CUTOFF)?;
    let mut model = GreenModel::from_coefficients(
        z0,
        frame,
        degree,
        hole_degree,
        poles,
        mirrors,
        x.iter().copied().collect(),
        region,
        opts.tolerance,
    );
    model.ignored_punctures = spec.punctures().len();
    let check = check_rule(&model.region, n);
    model.residual = check.nodes.par_iter().map(|&z| model.value(z).abs()).reduce(|| 0.0, f64::max);
    if !(model.residual <= opts.tolerance) {
        return Err(Error::Convergence { what: "green boundary residual", residual: model.residual, tolerance: opts.tolerance });
    }
    Ok(model)
}

/// A rule interleaved with the collocation nodes.
fn check_rule(region: &Region, n: usize) -> QuadratureRule {
    region.quadrature(n + n / 2 + 7)
}

impl GreenModel {
    #[allow(clippy::too_many_arguments)]
    fn from_coefficients(
        pole: Complex64,
        frame: Frame,
        degree: usize,
        hole_degree: usize,
        poles: Vec<Pole>,
        mirrors: Vec<Complex64>,
        coefficients: Vec<f64>,
        region: Region,
        tolerance: f64,
    ) -> Self {
        let c = &coefficients;
        let constant = c[0];
        let mut col = 1;
        let mut poly = Vec::with_capacity(degree);
        for _ in 0..degree {
            poly.push(Complex64::new(c[col], -c[col + 1]));
            col += 2;
        }
        let mut holes = Vec::new();
        for _ in &frame.holes {
            let log_coeff = c[col];
            col += 1;
            let mut series = Vec::with_capacity(hole_degree);
            for _ in 0..hole_degree {
                series.push(Complex64::new(c[col], -c[col + 1]));
                col += 2;
            }
            holes.push(HoleTerms { log_coeff, series });
        }
        let pole_coeffs = (0..poles.len()).map(|j| Complex64::new(c[col + 2 * j], -c[col + 2 * j + 1])).collect();
        let base = col + 2 * poles.len();
        let mirrors = mirrors.into_iter().enumerate().map(|(k, m)| (m, c[base + k])).collect();
        GreenModel {
            pole,
            frame,
            degree,
            hole_degree,
            coefficients,
            poles,
            mirrors,
            residual: 0.0,
            tolerance,
            ignored_punctures: 0,
            region,
            constant,
            poly,
            holes,
            pole_coeffs,
        }
    }

    /// `ρ(z) = G(z, z0) − log|z − z0|`.
    pub fn regular_part(&self, z: Complex64) -> f64 {
        let mut r = self.constant + horner2(&self.poly, self.frame.w(z)).0.re;
        for (h, terms) in self.frame.holes.iter().zip(&self.holes) {
            r += terms.log_coeff * (z - h.center).norm().ln() + horner2(&terms.series, h.s(z)).0.re;
        }
        for (p, b) in self.poles.iter().zip(&self.pole_coeffs) {
            r += (b * p.scale / (z - p.at)).re;
        }
        for &(m, a) in &self.mirrors {
            r += a * (z - m).norm().ln();
        }
        r
    }

    /// `G(z, z0)`. Meaningful on the closure of Ω.
    pub fn value(&self, z: Complex64) -> f64 {
        (z - self.pole).norm().ln() + self.regular_part(z)
    }

    /// `2 ∂G/∂z = G_x − i G_y`; `|∇G|` is its modulus.
    pub fn complex_gradient(&self, z: Complex64) -> Complex64 {
        self.derivatives(z).0
    }

    /// `(2 ∂G/∂z, d/dz of it)`.
    pub fn derivatives(&self, z: Complex64) -> (Complex64, Complex64) {
        let u = z - self.pole;
        let rho = self.frame.scale;
        let (_, p1, p2) = horner2(&self.poly, self.frame.w(z));
        let mut g1 = 1.0 / u + p1 / rho;
        let mut g2 = -1.0 / (u * u) + p2 / (rho * rho);
        for (h, terms) in self.frame.holes.iter().zip(&self.holes) {
            let v = z - h.center;
            let s = h.s(z);
            let (_, q1, q2) = horner2(&terms.series, s);
            let s2 = s * s;
            let hs2 = h.scale * h.scale;
            g1 += terms.log_coeff / v - q1 * s2 / h.scale;
            g2 += -terms.log_coeff / (v * v) + q2 * s2 * s2 / hs2 + q1 * s2 * s * 2.0 / hs2;
        }
        for (p, b) in self.poles.iter().zip(&self.pole_coeffs) {
            let r = 1.0 / (z - p.at);
            g1 -= b * p.scale * r * r;
            g2 += b * (2.0 * p.scale) * r * r * r;
        }
        for &(m, a) in &self.mirrors {
            let r = 1.0 / (z - m);
            g1 += a * r;
            g2 -= a * r * r;
        }
        (g1, g2)
    }

    pub fn gradient_norm(&self, z: Complex64) -> f64 {
        self.complex_gradient(z).norm()
    }

    /// Logarithmic capacity `c_β(z0) = exp ρ(z0)`.
    pub fn log_capacity(&self) -> f64 {
        self.regular_part(self.pole).exp()
    }

    /// Area of `{G < t}` for `t < 0`.
    pub fn sublevel_volume(&self, t: f64) -> Result<f64> {
        Ok(self.level_set(t, &LevelOptions::default())?.area)
    }

    /// `∮_{G = t} |∇G| dσ`, which equals `2π` for every `t < 0`.
    pub fn coarea_flux(&self, t: f64) -> Result<f64> {
        let set = self.level_set(t, &LevelOptions::default())?;
        if set.segments == 0 {
            return Err(Error::Geometry(format!("no level curve found at t = {t}")));
        }
        Ok(set.flux)
    }

    pub fn level_set(&self, t: f64, opts: &LevelOptions) -> Result<LevelSet> {
        if !(t < 0.0) {
            return Err(Error::Argument(format!("level t must be negative, got {t}")));
        }
        Ok(level::extract(self, t, opts))
    }

    /// Sweep `f(t) = π e^{2t} / v(Ω_t)` over a grid of negative levels.
    pub fn bz_sweep(&self, t_grid: &[f64]) -> Result<SublevelSweep> {
        self.bz_sweep_with(t_grid, &LevelOptions::default(), level::SWEEP_TOLERANCE)
    }

    pub fn bz_sweep_with(&self, t_grid: &[f64], opts: &LevelOptions, tolerance: f64) -> Result<SublevelSweep> {
        level::sweep(self, t_grid, opts, tolerance)
    }
}

pub fn log_capacity(model: &GreenModel) -> f64 {
    model.log_capacity()
}

pub fn sublevel_volume(model: &GreenModel, t: f64) -> Result<f64> {
    model.sublevel_volume(t)
}

pub fn bz_sweep(model: &GreenModel, t_grid: &[f64]) -> Result<SublevelSweep> {
    model.bz_sweep(t_grid)
}

pub fn coarea_flux(model: &GreenModel, t: f64) -> Result<f64> {
    model.coarea_flux(t)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaCapacity {
    pub delta_inv: f64,
    pub c_beta: f64,
    /// `1/δ(z0) − c_β(z0)`, nonnegative up to solver error.
    pub gap: f64,
}

pub fn delta_capacity_check(spec: &DomainSpec, model: &GreenModel) -> Result<DeltaCapacity> {
    let delta_inv = 1.0 / spec.dist_boundary(model.pole)?;
    let c_beta = model.log_capacity();
    Ok(DeltaCapacity { delta_inv, c_beta, gap: delta_inv - c_beta })
}
