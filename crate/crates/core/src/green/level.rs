//! Sublevel sets `{G < t}`: quadtree refinement toward the level curve,
//! marching squares on the leaves, exact edge roots and a parabolic cap per
//! chord.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::GreenModel;
use crate::domain::{Curve, Region};
use crate::error::{Error, Result};

/// Relative per-step slack for the monotonicity check of a sweep.
pub const SWEEP_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelOptions {
    /// Leaf size relative to the local curvature scale `|G_z| / |G_zz|`.
    pub eta: f64,
    pub min_depth: usize,
    pub max_depth: usize,
    /// Largest cell, as a fraction of the root cell.
    pub max_cell: f64,
}

impl Default for LevelOptions {
    fn default() -> Self {
        LevelOptions { eta: 0.04, min_depth: 4, max_depth: 40, max_cell: 1.0 / 32.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelSet {
    pub t: f64,
    pub area: f64,
    /// `∮ |∇G| dσ` over the extracted curve.
    pub flux: f64,
    pub length: f64,
    pub segments: usize,
    pub leaves: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub t: f64,
    pub volume: f64,
    pub f: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SublevelSweep {
    pub records: Vec<SweepRecord>,
    /// `π / v(Ω)`, the `t → 0⁻` limit.
    pub pi_over_v: f64,
    /// `c_β²(z0)`, the `t → −∞` limit.
    pub cbeta_sq: f64,
    /// `f` at the level closest to 0 and its relative deviation from `π/v`.
    pub f_near_zero: f64,
    pub dev_near_zero: f64,
    /// `f` at the most negative level and its relative deviation from `c_β²`.
    pub f_near_pole: f64,
    pub dev_near_pole: f64,
    /// Largest relative increase of `f` from one level to the next higher one.
    pub max_violation: f64,
    pub tolerance: f64,
    pub monotone: bool,
}

/// 40 log-spaced levels from −0.05 down to −6.
pub fn default_t_grid() -> Vec<f64> {
    let n = 40;
    let (a, b) = (0.05f64.ln(), 6f64.ln());
    (0..n).map(|k| -(a + (b - a) * k as f64 / (n - 1) as f64).exp()).collect()
}

pub(super) fn sweep(model: &GreenModel, t_grid: &[f64], opts: &LevelOptions, tolerance: f64) -> Result<SublevelSweep> {
    if t_grid.is_empty() {
        return Err(Error::Argument("empty t grid".into()));
    }
    if let Some(t) = t_grid.iter().find(|t| !(**t < 0.0)) {
        return Err(Error::Argument(format!("levels must be negative, got {t}")));
    }
    let records: Vec<SweepRecord> = t_grid
        .par_iter()
        .map(|&t| {
            let v = extract(model, t, opts).area;
            SweepRecord { t, volume: v, f: PI * (2.0 * t).exp() / v }
        })
        .collect();
    let mut by_t: Vec<&SweepRecord> = records.iter().collect();
    by_t.sort_by(|a, b| a.t.total_cmp(&b.t));
    let max_violation = by_t
        .windows(2)
        .map(|w| (w[1].f - w[0].f) / w[0].f)
        .fold(0.0, f64::max);
    let pi_over_v = PI / model.region.area();
    let cb = model.log_capacity();
    let near_zero = by_t.last().expect("non-empty").f;
    let near_pole = by_t[0].f;
    Ok(SublevelSweep {
        pi_over_v,
        cbeta_sq: cb * cb,
        f_near_zero: near_zero,
        dev_near_zero: (near_zero - pi_over_v).abs() / pi_over_v,
        f_near_pole: near_pole,
        dev_near_pole: (near_pole - cb * cb).abs() / (cb * cb),
        max_violation,
        tolerance,
        monotone: max_violation <= tolerance,
        records,
    })
}

enum Component {
    Circle { center: Complex64, radius: f64 },
    Polyline(Vec<Complex64>),
}

impl Component {
    fn new(c: &Curve) -> Self {
        match c {
            Curve::Circle { center, radius } => Component::Circle { center: *center, radius: *radius },
            Curve::Polygon { vertices } => Component::Polyline(vertices.clone()),
            other => Component::Polyline(other.sample(4096)),
        }
    }

    fn distance(&self, z: Complex64) -> f64 {
        match self {
            Component::Circle { center, radius } => ((z - center).norm() - radius).abs(),
            Component::Polyline(p) => {
                let mut d2 = f64::INFINITY;
                for (i, &a) in p.iter().enumerate() {
                    let b = p[(i + 1) % p.len()];
                    let e = b - a;
                    let s = (((z - a) * e.conj()).re / e.norm_sqr()).clamp(0.0, 1.0);
                    d2 = d2.min((z - a - e * s).norm_sqr());
                }
                d2.sqrt()
            }
        }
    }

    fn inside(&self, z: Complex64) -> bool {
        match self {
            Component::Circle { center, radius } => (z - center).norm() < *radius,
            Component::Polyline(p) => {
                let mut inside = false;
                for (i, &a) in p.iter().enumerate() {
                    let b = p[(i + 1) % p.len()];
                    if (a.im > z.im) != (b.im > z.im) {
                        let x = a.re + (z.im - a.im) * (b.re - a.re) / (b.im - a.im);
                        if z.re < x {
                            inside = !inside;
                        }
                    }
                }
                inside
            }
        }
    }
}

/// Fast membership and signed distance for the quadtree.
struct Mask {
    outer: Component,
    holes: Vec<Component>,
}

impl Mask {
    fn new(r: &Region) -> Self {
        Mask { outer: Component::new(&r.outer), holes: r.holes.iter().map(Component::new).collect() }
    }

    fn contains(&self, z: Complex64) -> bool {
        self.outer.inside(z) && !self.holes.iter().any(|h| h.inside(z))
    }

    fn signed_distance(&self, z: Complex64) -> f64 {
        let d = self.holes.iter().map(|h| h.distance(z)).fold(self.outer.distance(z), f64::min);
        if self.contains(z) {
            d
        } else {
            -d
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Class {
    Inside,
    Unknown,
}

struct Extractor<'a> {
    model: &'a GreenModel,
    mask: Mask,
    t: f64,
    opts: &'a LevelOptions,
    pole_scale: f64,
    max_size: f64,
}

#[derive(Default)]
struct Acc {
    area: f64,
    flux: f64,
    length: f64,
    segments: usize,
    leaves: usize,
}

impl Acc {
    fn merge(mut self, o: Acc) -> Acc {
        self.area += o.area;
        self.flux += o.flux;
        self.length += o.length;
        self.segments += o.segments;
        self.leaves += o.leaves;
        self
    }
}

pub(super) fn extract(model: &GreenModel, t: f64, opts: &LevelOptions) -> LevelSet {
    let (lo, hi) = model.region.bounding_box();
    let side = (hi.re - lo.re).max(hi.im - lo.im) * 1.02;
    let mid = (lo + hi) * 0.5;
    let ex = Extractor {
        model,
        mask: Mask::new(&model.region),
        t,
        opts,
        pole_scale: (t - model.regular_part(model.pole)).exp(),
        max_size: side * opts.max_cell,
    };
    let acc = ex.cell(mid, side * 0.5, 0, Class::Unknown);
    LevelSet {
        t,
        area: acc.area,
        flux: acc.flux,
        length: acc.length,
        segments: acc.segments,
        leaves: acc.leaves,
    }
}

impl Extractor<'_> {
    fn g(&self, z: Complex64, class: Class) -> f64 {
        if class == Class::Inside || self.mask.contains(z) {
            self.model.value(z)
        } else {
            f64::INFINITY
        }
    }

    fn cell(&self, c: Complex64, h: f64, depth: usize, class: Class) -> Acc {
        let diag = h * std::f64::consts::SQRT_2;
        let class = match class {
            Class::Inside => Class::Inside,
            Class::Unknown => {
                let d = self.mask.signed_distance(c);
                if d < -diag * 1.001 {
                    return Acc::default();
                }
                if d > diag * 1.001 {
                    Class::Inside
                } else {
                    Class::Unknown
                }
            }
        };
        let size = 2.0 * h;
        let t = self.t;
        let corners = [c + Complex64::new(-h, -h), c + Complex64::new(h, -h), c + Complex64::new(h, h), c + Complex64::new(-h, h)];
        let vals = corners.map(|z| self.g(z, class));
        let vc = self.g(c, class);
        let below = vals.iter().filter(|&&v| v < t).count() + usize::from(vc < t);
        let mixed = below > 0 && below < 5;
        let pole_dist = (c - self.model.pole).norm();
        let near_pole = pole_dist < 2.0 * size;

        let mut refine = depth < self.opts.min_depth || size > self.max_size;
        if !refine && near_pole && size > self.opts.eta * self.pole_scale {
            refine = true;
        }
        let mut leaf = false;
        if !refine {
            if mixed {
                let (g1, g2) = self.model.derivatives(c);
                let scale = g1.norm() / g2.norm().max(1e-300);
                if size <= self.opts.eta * scale || depth >= self.opts.max_depth {
                    leaf = true;
                } else {
                    refine = true;
                }
            } else if near_pole {
                // small cell at the pole, far inside the level curve
            } else if let Some((z, v)) = self.finite_sample(&corners, &vals, c, vc) {
                let (g1, g2) = self.model.derivatives(z);
                let r = if z == c { diag } else { 2.0 * diag };
                if (v - t).abs() < 2.0 * (g1.norm() * r + g2.norm() * r * r) {
                    refine = depth < self.opts.max_depth;
                }
            } else {
                refine = depth < self.opts.min_depth + 8;
            }
        }
        if refine {
            let q = h * 0.5;
            let kids = [
                c + Complex64::new(-q, -q),
                c + Complex64::new(q, -q),
                c + Complex64::new(q, q),
                c + Complex64::new(-q, q),
            ];
            if depth < 6 {
                return kids
                    .par_iter()
                    .map(|&k| self.cell(k, q, depth + 1, class))
                    .reduce(Acc::default, Acc::merge);
            }
            return kids
                .iter()
                .map(|&k| self.cell(k, q, depth + 1, class))
                .fold(Acc::default(), Acc::merge);
        }
        if leaf {
            return self.march(&corners, &vals, c, vc);
        }
        if below == 5 {
            Acc { area: size * size, ..Default::default() }
        } else {
            Acc::default()
        }
    }

    fn finite_sample(&self, corners: &[Complex64; 4], vals: &[f64; 4], c: Complex64, vc: f64) -> Option<(Complex64, f64)> {
        if vc.is_finite() {
            return Some((c, vc));
        }
        corners.iter().zip(vals).find(|(_, v)| v.is_finite()).map(|(z, v)| (*z, *v))
    }

    /// Root of `g = t` on the segment `a → b`, with `ga < t ≤ gb` or the reverse.
    fn edge_root(&self, a: Complex64, b: Complex64, ga: f64, gb: f64) -> Complex64 {
        let t = self.t;
        let d = b - a;
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        let (mut flo, mut fhi) = (ga - t, gb - t);
        let mut side = 0;
        for _ in 0..80 {
            let u = if flo.is_finite() && fhi.is_finite() && flo != fhi {
                let u = (lo * fhi - hi * flo) / (fhi - flo);
                if u > lo && u < hi {
                    u
                } else {
                    0.5 * (lo + hi)
                }
            } else {
                0.5 * (lo + hi)
            };
            let fu = self.g(a + d * u, Class::Unknown) - t;
            if fu == 0.0 {
                return a + d * u;
            }
            if (fu < 0.0) == (flo < 0.0) {
                lo = u;
                flo = fu;
                if side == -1 && fhi.is_finite() {
                    fhi *= 0.5;
                }
                side = -1;
            } else {
                hi = u;
                fhi = fu;
                if side == 1 && flo.is_finite() {
                    flo *= 0.5;
                }
                side = 1;
            }
            if hi - lo < 1e-15 {
                break;
            }
        }
        a + d * (0.5 * (lo + hi))
    }

    /// Newton projection of `m` onto the level curve along the gradient.
    fn project(&self, m: Complex64) -> Option<Complex64> {
        let mut z = m;
        for _ in 0..4 {
            if !self.mask.contains(z) {
                return None;
            }
            let v = self.model.value(z) - self.t;
            let g1 = self.model.complex_gradient(z);
            let n2 = g1.norm_sqr();
            if !(n2 > 0.0) {
                return None;
            }
            let step = g1.conj() * (v / n2);
            z -= step;
            if step.norm() < 1e-15 * (1.0 + z.norm()) {
                break;
            }
        }
        Some(z)
    }

    fn march(&self, corners: &[Complex64; 4], vals: &[f64; 4], c: Complex64, vc: f64) -> Acc {
        #[derive(Clone, Copy)]
        enum Item {
            Corner(Complex64),
            Exit(Complex64),
            Entry(Complex64),
        }
        let t = self.t;
        let below = vals.map(|v| v < t);
        let mut ring = Vec::with_capacity(8);
        for i in 0..4 {
            let j = (i + 1) % 4;
            if below[i] {
                ring.push(Item::Corner(corners[i]));
            }
            if below[i] != below[j] {
                let x = self.edge_root(corners[i], corners[j], vals[i], vals[j]);
                ring.push(if below[i] { Item::Exit(x) } else { Item::Entry(x) });
            }
        }
        let pt = |it: &Item| match *it {
            Item::Corner(z) | Item::Exit(z) | Item::Entry(z) => z - c,
        };
        let n = ring.len();
        let mut acc = Acc { leaves: 1, ..Default::default() };
        // cell-edge parts of the boundary of {g < t}
        let mut twice_area = 0.0;
        for k in 0..n {
            if let Item::Exit(_) = ring[k] {
                continue;
            }
            let (a, b) = (pt(&ring[k]), pt(&ring[(k + 1) % n]));
            twice_area += (a.conj() * b).im;
        }
        // level-curve chords: pair each exit with the following entry, or with
        // the preceding one when a saddle separates two low corners
        let saddle_split = below.iter().filter(|&&b| b).count() == 2 && below[0] == below[2] && !(vc < t);
        let mut chords = Vec::new();
        for k in 0..n {
            if let Item::Exit(p) = ring[k] {
                let step = |d: usize| &ring[if saddle_split { (k + n - d) % n } else { (k + d) % n }];
                let mut d = 1;
                while !matches!(step(d), Item::Entry(_)) {
                    d += 1;
                }
                if let Item::Entry(q) = *step(d) {
                    chords.push((p, q));
                }
            }
        }
        for (p, q) in chords {
            let (a, b) = (p - c, q - c);
            twice_area += (a.conj() * b).im;
            let chord = q - p;
            let len = chord.norm();
            if len == 0.0 {
                continue;
            }
            let right = -Complex64::i() * chord / len;
            let m = (p + q) * 0.5;
            let (sag, mstar) = match self.project(m) {
                Some(ms) if (ms - m).norm() < len => (((ms - m) * right.conj()).re, ms),
                _ => (0.0, m),
            };
            acc.area += 2.0 / 3.0 * len * sag;
            let arc = len + 8.0 / 3.0 * sag * sag / len;
            let grad = |z: Complex64| self.model.gradient_norm(z);
            acc.flux += arc / 6.0 * (grad(p) + 4.0 * grad(mstar) + grad(q));
            acc.length += arc;
            acc.segments += 1;
        }
        acc.area += 0.5 * twice_area;
        acc
    }
}
