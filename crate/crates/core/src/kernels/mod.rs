//! Bergman and Szegő kernels on the diagonal as constrained minimum-norm
//! problems over the holomorphic basis of [`crate::basis::HoloBasis`].

mod extremal;
mod stability;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{corner_poles, image_poles, Frame, HoloBasis};
use crate::domain::{DomainSpec, Region};
use crate::error::{Error, Result};
use crate::green::{solve_green_with, GreenOptions};
use crate::linalg::{quadratic_form, Whitening, SINGULAR_CUTOFF};

pub use extremal::{ab_extremal_eval, ahlfors_beurling_bound, ahlfors_map, AhlforsMap};
pub use stability::{szego_stability_sweep, StabilitySweep};

/// Default number of powers for every domain.
pub const DEFAULT_BASIS: usize = 48;
/// Default number of inverse powers per hole.
pub const DEFAULT_HOLE_BASIS: usize = 32;
/// Default number of Szegő basis poles per polygon corner.
pub const DEFAULT_CORNER_POLES: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelKind {
    Bergman,
    HigherBergman { order: usize },
    Szego,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelOptions {
    pub basis_size: usize,
    pub hole_basis: usize,
    /// Boundary nodes per component; defaults from the basis size.
    pub nodes: Option<usize>,
    /// Poles per polygon corner, where the extremal functions have branch
    /// points. Simple poles for Szegő, double poles for Bergman.
    #[serde(default = "default_corner_poles")]
    pub corner_poles: usize,
    /// Poles of the same orders at the images of `z0` across nearby boundary.
    #[serde(default = "default_image_poles")]
    pub image_poles: bool,
}

fn default_image_poles() -> bool {
    true
}

fn default_corner_poles() -> usize {
    DEFAULT_CORNER_POLES
}

impl Default for KernelOptions {
    fn default() -> Self {
        KernelOptions {
            basis_size: DEFAULT_BASIS,
            hole_basis: DEFAULT_HOLE_BASIS,
            nodes: None,
            corner_poles: DEFAULT_CORNER_POLES,
            image_poles: true,
        }
    }
}

impl KernelOptions {
    pub fn with_basis(basis_size: usize) -> Self {
        KernelOptions { basis_size, ..Default::default() }
    }

    /// Node count used for a basis of `len` functions when `nodes` is unset.
    pub fn default_nodes(len: usize) -> usize {
        (8 * len + 128).max(512)
    }

    fn node_count(&self, len: usize) -> usize {
        self.nodes.unwrap_or_else(|| Self::default_nodes(len))
    }
}

/// Normalization checks on the returned witness.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelResiduals {
    /// `max |C c − d|` over the point constraints.
    pub constraint: f64,
    /// `|1/(cᴴ G c) − value| / value`.
    pub norm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelResult {
    pub kind: KernelKind,
    pub point: Complex64,
    pub value: f64,
    /// Number of basis functions.
    pub basis_size: usize,
    /// Modes kept after the Gram cutoff.
    pub retained: usize,
    pub condition: f64,
    /// Coefficients of the extremal function in `basis`.
    pub witness: Vec<Complex64>,
    pub basis: HoloBasis,
    pub residuals: KernelResiduals,
}

impl KernelResult {
    /// The extremal function at `z`.
    pub fn witness_eval(&self, z: Complex64) -> Complex64 {
        self.basis.eval(&self.witness, z, 0)
    }

    pub fn witness_derivative(&self, z: Complex64, m: usize) -> Complex64 {
        self.basis.eval(&self.witness, z, m)
    }
}

/// Gram matrices of a basis on a region.
pub struct GramSystem {
    pub basis: HoloBasis,
    pub gram: DMatrix<Complex64>,
    pub whitening: Whitening,
}

fn make_basis(region: &Region, z0: Complex64, opts: &KernelOptions, order: u32) -> Result<HoloBasis> {
    let mut poles = corner_poles(region, opts.corner_poles, order);
    if opts.image_poles {
        poles.extend(image_poles(region, z0, order));
    }
    Ok(HoloBasis::new(Frame::for_region(region)?, opts.basis_size, opts.hole_basis).with_poles(poles))
}

fn prepared(spec: &DomainSpec, z0: Complex64) -> Result<Region> {
    let region = spec.region();
    if !region.contains(z0) {
        return Err(Error::NotInDomain(z0));
    }
    Ok(Region { punctures: vec![], ..region })
}

/// `G_{mn} = ∫_Ω φ_n conj(φ_m) dA = (1/2i) ∮ φ_n conj(Φ_m) dz`, for the basis
/// adapted to the point `z0`.
pub fn bergman_gram(region: &Region, z0: Complex64, opts: &KernelOptions) -> Result<GramSystem> {
    let basis = make_basis(region, z0, opts, 2)?;
    let rule = region.quadrature(opts.node_count(basis.len()));
    let n = basis.len();
    let cols: Vec<(Vec<Complex64>, Vec<Complex64>)> = rule
        .nodes
        .par_iter()
        .zip(rule.weights.par_iter().zip(&rule.tangents))
        .map(|(&z, (&w, &t))| {
            let dz = t * w / Complex64::new(0.0, 2.0);
            let v: Vec<Complex64> = basis.values(z).into_iter().map(|x| x * dz).collect();
            (v, basis.conj_primitives(z))
        })
        .collect();
    let phi = DMatrix::from_fn(rule.len(), n, |q, j| cols[q].0[j]);
    let prim = DMatrix::from_fn(rule.len(), n, |q, j| cols[q].1[j]);
    let g = prim.transpose() * phi;
    let gram = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
    let whitening = Whitening::from_gram(&gram, SINGULAR_CUTOFF)?;
    Ok(GramSystem { basis, gram, whitening })
}

/// `G_{mn} = ∮ φ_n conj(φ_m) dσ`, factored from the weighted sample matrix.
pub fn szego_gram(region: &Region, z0: Complex64, opts: &KernelOptions) -> Result<GramSystem> {
    let basis = make_basis(region, z0, opts, 1)?;
    let rule = region.quadrature(opts.node_count(basis.len()));
    let n = basis.len();
    let rows: Vec<Vec<Complex64>> = rule
        .nodes
        .par_iter()
        .zip(&rule.weights)
        .map(|(&z, &w)| basis.values(z).into_iter().map(|x| x * w.sqrt()).collect())
        .collect();
    let b = DMatrix::from_fn(rule.len(), n, |q, j| rows[q][j]);
    let gram = b.adjoint() * &b;
    let whitening = Whitening::from_factor(&b, SINGULAR_CUTOFF)?;
    Ok(GramSystem { basis, gram, whitening })
}

fn solve_point(sys: &GramSystem, kind: KernelKind, z0: Complex64, order: usize) -> Result<KernelResult> {
    let basis = &sys.basis;
    let rows = order + 1;
    let mut c = DMatrix::zeros(rows, basis.len());
    for m in 0..rows {
        for (j, v) in basis.derivatives(z0, m).into_iter().enumerate() {
            c[(m, j)] = v;
        }
    }
    let mut d = DVector::zeros(rows);
    d[order] = Complex64::new(1.0, 0.0);
    let (min_norm, coeffs) = sys.whitening.constrained_min_norm(&c, &d)?;
    if !(min_norm > 0.0) || !min_norm.is_finite() {
        return Err(Error::Conditioning("degenerate minimum norm".into()));
    }
    let value = 1.0 / min_norm;
    let constraint = (&c * &coeffs - &d).iter().map(|x| x.norm()).fold(0.0, f64::max);
    let norm = (1.0 / quadratic_form(&sys.gram, &coeffs) - value).abs() / value;
    Ok(KernelResult {
        kind,
        point: z0,
        value,
        basis_size: basis.len(),
        retained: sys.whitening.retained,
        condition: sys.whitening.condition,
        witness: coeffs.iter().copied().collect(),
        basis: basis.clone(),
        residuals: KernelResiduals { constraint, norm },
    })
}

pub fn bergman_kernel(spec: &DomainSpec, z0: Complex64, basis_size: usize) -> Result<KernelResult> {
    bergman_kernel_with(spec, z0, &KernelOptions::with_basis(basis_size))
}

pub fn bergman_kernel_with(spec: &DomainSpec, z0: Complex64, opts: &KernelOptions) -> Result<KernelResult> {
    higher_bergman_with(spec, z0, 0, opts)
}

/// `K^{(j)}(z0) = sup{|f^{(j)}(z0)|² : ‖f‖ ≤ 1, f^{(k)}(z0) = 0 for k < j}`.
pub fn higher_bergman(spec: &DomainSpec, z0: Complex64, j: usize, basis_size: usize) -> Result<KernelResult> {
    higher_bergman_with(spec, z0, j, &KernelOptions::with_basis(basis_size))
}

pub fn higher_bergman_with(spec: &DomainSpec, z0: Complex64, j: usize, opts: &KernelOptions) -> Result<KernelResult> {
    if j + 2 > opts.basis_size {
        return Err(Error::Config(format!("order {j} needs basis_size ≥ {}, got {}", j + 2, opts.basis_size)));
    }
    let region = prepared(spec, z0)?;
    let sys = bergman_gram(&region, z0, opts)?;
    let kind = if j == 0 { KernelKind::Bergman } else { KernelKind::HigherBergman { order: j } };
    solve_point(&sys, kind, z0, j)
}

pub fn szego_kernel(spec: &DomainSpec, z0: Complex64, basis_size: usize) -> Result<KernelResult> {
    szego_kernel_with(spec, z0, &KernelOptions::with_basis(basis_size))
}

pub fn szego_kernel_with(spec: &DomainSpec, z0: Complex64, opts: &KernelOptions) -> Result<KernelResult> {
    if opts.basis_size < 2 {
        return Err(Error::Config("basis_size must be at least 2".into()));
    }
    let region = prepared(spec, z0)?;
    let sys = szego_gram(&region, z0, opts)?;
    solve_point(&sys, KernelKind::Szego, z0, 0)
}

/// `c_B` bracketed as `sqrt(v(E)/π) ≤ 2πS ≤ c_β`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapacityBracket {
    pub lower: f64,
    pub central: f64,
    pub upper: f64,
    /// The domain had punctures; `2πS` was taken on the unpunctured base.
    pub punctured: bool,
}

/// Relative slack allowed when enforcing the bracket ordering.
pub const BRACKET_TOLERANCE: f64 = 1e-6;

pub fn analytic_capacity(spec: &DomainSpec, z0: Complex64, basis_size: usize) -> Result<CapacityBracket> {
    analytic_capacity_with(spec, z0, &KernelOptions::with_basis(basis_size), &GreenOptions::default())
}

pub fn analytic_capacity_with(
    spec: &DomainSpec,
    z0: Complex64,
    opts: &KernelOptions,
    green: &GreenOptions,
) -> Result<CapacityBracket> {
    let s = szego_kernel_with(spec, z0, opts)?;
    let central = 2.0 * std::f64::consts::PI * s.value;
    let lower = ahlfors_beurling_bound(spec, z0)?;
    let upper = solve_green_with(spec, z0, green)?.log_capacity();
    let bracket = CapacityBracket { lower, central, upper, punctured: !spec.punctures().is_empty() };
    if lower > central * (1.0 + BRACKET_TOLERANCE) || central > upper * (1.0 + BRACKET_TOLERANCE) {
        return Err(Error::Numerical(format!(
            "capacity bracket out of order: {lower} ≤ {central} ≤ {upper} fails"
        )));
    }
    Ok(bracket)
}
