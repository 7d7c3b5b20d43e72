//! Closed boundary curves and their elementary geometry.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::quadrature::{gauss_legendre, BoundaryNode};
use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Geometric grading ratio of the panels toward polygon corners.
pub const CORNER_GRADING_RATIO: f64 = 0.3;
/// Number of graded panels toward each polygon corner.
pub const CORNER_GRADING_LEVELS: usize = 30;
/// Points sampled per curve by the self-intersection heuristic.
pub const SIMPLICITY_SAMPLES: usize = 512;

/// A closed, positively oriented (counterclockwise) Jordan curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Curve {
    Circle {
        center: Complex64,
        radius: f64,
    },
    Polygon {
        vertices: Vec<Complex64>,
    },
    /// `γ(θ) = Σ c_k e^{ikθ}`, stored as `(k, c_k)` pairs.
    Fourier {
        coeffs: Vec<(i32, Complex64)>,
    },
    /// Convex polygon with every corner replaced by an inscribed circular arc.
    Rounded {
        vertices: Vec<Complex64>,
        radius: f64,
    },
}

/// Straight segment or circular arc; the building block of piecewise curves.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum Piece {
    Segment { a: Complex64, b: Complex64 },
    Arc { center: Complex64, radius: f64, start: f64, sweep: f64 },
}

impl Piece {
    fn length(&self) -> f64 {
        match *self {
            Piece::Segment { a, b } => (b - a).norm(),
            Piece::Arc { radius, sweep, .. } => radius * sweep,
        }
    }

    /// Point and unit tangent at local parameter `s ∈ [0, 1]`.
    fn eval(&self, s: f64) -> (Complex64, Complex64) {
        match *self {
            Piece::Segment { a, b } => {
                let d = b - a;
                (a + d * s, d / d.norm())
            }
            Piece::Arc { center, radius, start, sweep } => {
                let e = Complex64::from_polar(1.0, start + sweep * s);
                (center + e * radius, I * e)
            }
        }
    }

    /// Closest point on the piece to `z` with the unit tangent there.
    fn closest(&self, z: Complex64) -> (f64, Complex64, Complex64) {
        match *self {
            Piece::Segment { a, b } => {
                let d = b - a;
                let s = ((z - a) * d.conj()).re / d.norm_sqr();
                let s = s.clamp(0.0, 1.0);
                let p = a + d * s;
                ((z - p).norm(), p, d / d.norm())
            }
            Piece::Arc { center, start, sweep, .. } => {
                let w = z - center;
                let rel = (w.arg() - start).rem_euclid(TAU);
                let s = if rel <= sweep {
                    rel / sweep
                } else if rel - sweep < TAU - rel {
                    1.0
                } else {
                    0.0
                };
                let (p, t) = self.eval(s);
                ((z - p).norm(), p, t)
            }
        }
    }
}

fn signed_polygon_area(v: &[Complex64]) -> f64 {
    let n = v.len();
    (0..n).map(|i| (v[i].conj() * v[(i + 1) % n]).im).sum::<f64>() * 0.5
}

fn segments_cross(p1: Complex64, p2: Complex64, q1: Complex64, q2: Complex64) -> bool {
    let cross = |a: Complex64, b: Complex64| (a.conj() * b).im;
    let d1 = cross(q2 - q1, p1 - q1);
    let d2 = cross(q2 - q1, p2 - q1);
    let d3 = cross(p2 - p1, q1 - p1);
    let d4 = cross(p2 - p1, q2 - p1);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

/// True when the closed polylines `a` and `b` have crossing segments.
/// With `a == b` adjacent segments are skipped.
pub(crate) fn polylines_cross(a: &[Complex64], b: &[Complex64], same: bool) -> bool {
    let (na, nb) = (a.len(), b.len());
    for i in 0..na {
        let (p1, p2) = (a[i], a[(i + 1) % na]);
        let j0 = if same { i + 2 } else { 0 };
        for j in j0..nb {
            if same && i == 0 && j == nb - 1 {
                continue;
            }
            if segments_cross(p1, p2, b[j], b[(j + 1) % nb]) {
                return true;
            }
        }
    }
    false
}

impl Curve {
    pub fn circle(center: Complex64, radius: f64) -> Result<Self> {
        let c = Curve::Circle { center, radius };
        c.validate()?;
        Ok(c)
    }

    pub fn polygon(vertices: Vec<Complex64>) -> Result<Self> {
        let c = Curve::Polygon { vertices };
        c.validate()?;
        Ok(c)
    }

    pub fn fourier(coeffs: Vec<(i32, Complex64)>) -> Result<Self> {
        let c = Curve::Fourier { coeffs };
        c.validate()?;
        Ok(c)
    }

    pub fn rounded(vertices: Vec<Complex64>, radius: f64) -> Result<Self> {
        let c = Curve::Rounded { vertices, radius };
        c.validate()?;
        Ok(c)
    }

    /// Checks positivity, orientation and (heuristically) simplicity.
    pub fn validate(&self) -> Result<()> {
        match self {
            Curve::Circle { radius, center } => {
                if !(*radius > 0.0 && radius.is_finite()) {
                    return Err(Error::Geometry(format!("circle radius must be positive, got {radius}")));
                }
                if !(center.re.is_finite() && center.im.is_finite()) {
                    return Err(Error::Geometry("circle center must be finite".into()));
                }
                Ok(())
            }
            Curve::Polygon { vertices } => {
                if vertices.len() < 3 {
                    return Err(Error::Geometry("polygon needs at least three vertices".into()));
                }
                if vertices.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
                    return Err(Error::Geometry("polygon vertices must be finite".into()));
                }
                let n = vertices.len();
                for i in 0..n {
                    if (vertices[(i + 1) % n] - vertices[i]).norm() == 0.0 {
                        return Err(Error::Geometry("polygon has repeated vertices".into()));
                    }
                }
                if signed_polygon_area(vertices) <= 0.0 {
                    return Err(Error::Geometry("polygon vertices must be counterclockwise".into()));
                }
                if polylines_cross(vertices, vertices, true) {
                    return Err(Error::Geometry("polygon boundary self-intersects".into()));
                }
                Ok(())
            }
            Curve::Fourier { coeffs } => {
                if coeffs.is_empty() {
                    return Err(Error::Geometry("fourier curve needs coefficients".into()));
                }
                if self.signed_area() <= 0.0 {
                    return Err(Error::Geometry(
                        "fourier curve must be positively oriented with nonzero area".into(),
                    ));
                }
                let s = self.sample(SIMPLICITY_SAMPLES);
                if polylines_cross(&s, &s, true) {
                    return Err(Error::Geometry("fourier curve self-intersects".into()));
                }
                Ok(())
            }
            Curve::Rounded { vertices, radius } => {
                Curve::Polygon { vertices: vertices.clone() }.validate()?;
                if !(*radius > 0.0) {
                    return Err(Error::Geometry("rounding radius must be positive".into()));
                }
                self.rounded_pieces().map(|_| ())
            }
        }
    }

    fn fourier_eval(coeffs: &[(i32, Complex64)], theta: f64) -> (Complex64, Complex64, Complex64) {
        let mut g = Complex64::new(0.0, 0.0);
        let mut d1 = g;
        let mut d2 = g;
        for &(k, c) in coeffs {
            let e = c * Complex64::from_polar(1.0, k as f64 * theta);
            let kk = k as f64;
            g += e;
            d1 += e * I * kk;
            d2 -= e * kk * kk;
        }
        (g, d1, d2)
    }

    pub(crate) fn pieces(&self) -> Option<Vec<Piece>> {
        match self {
            Curve::Polygon { vertices } => {
                let n = vertices.len();
                Some(
                    (0..n)
                        .map(|i| Piece::Segment { a: vertices[i], b: vertices[(i + 1) % n] })
                        .collect(),
                )
            }
            Curve::Rounded { .. } => self.rounded_pieces().ok(),
            _ => None,
        }
    }

    fn rounded_pieces(&self) -> Result<Vec<Piece>> {
        let Curve::Rounded { vertices, radius } = self else {
            unreachable!("rounded_pieces on a non-rounded curve")
        };
        let n = vertices.len();
        let mut arcs = Vec::with_capacity(n);
        for i in 0..n {
            let p = vertices[(i + n - 1) % n];
            let v = vertices[i];
            let q = vertices[(i + 1) % n];
            let u_in = (v - p) / (v - p).norm();
            let u_out = (q - v) / (q - v).norm();
            let turn = (u_out / u_in).arg();
            if turn <= 0.0 {
                return Err(Error::Geometry("corner rounding requires a convex polygon".into()));
            }
            let d = radius * (turn / 2.0).tan();
            let t1 = v - u_in * d;
            let t2 = v + u_out * d;
            let center = t1 + I * u_in * *radius;
            arcs.push((t1, t2, center, (t1 - center).arg(), turn, d));
        }
        for i in 0..n {
            let j = (i + 1) % n;
            let edge = (vertices[j] - vertices[i]).norm();
            if arcs[i].5 + arcs[j].5 >= edge {
                return Err(Error::Geometry(format!(
                    "rounding radius {radius} too large for an edge of length {edge}"
                )));
            }
        }
        let mut pieces = Vec::with_capacity(2 * n);
        for i in 0..n {
            let (_, t2, center, start, sweep, _) = arcs[i];
            pieces.push(Piece::Arc { center, radius: *radius, start, sweep });
            let next_t1 = arcs[(i + 1) % n].0;
            pieces.push(Piece::Segment { a: t2, b: next_t1 });
        }
        Ok(pieces)
    }

    /// Signed enclosed area (positive for counterclockwise curves).
    pub fn signed_area(&self) -> f64 {
        match self {
            Curve::Circle { radius, .. } => PI * radius * radius,
            Curve::Polygon { vertices } => signed_polygon_area(vertices),
            Curve::Fourier { coeffs } => {
                // cross terms integrate to zero over a period
                let mut acc = std::collections::BTreeMap::<i32, Complex64>::new();
                for &(k, c) in coeffs {
                    *acc.entry(k).or_default() += c;
                }
                PI * acc.iter().map(|(&k, c)| k as f64 * c.norm_sqr()).sum::<f64>()
            }
            Curve::Rounded { .. } => {
                // Green's theorem on each piece, exact for segments and arcs.
                let pieces = self.rounded_pieces().unwrap_or_default();
                pieces
                    .iter()
                    .map(|p| match *p {
                        Piece::Segment { a, b } => 0.5 * (a.conj() * b).im,
                        Piece::Arc { center, radius: r, start, sweep } => {
                            // ½∫(x dy − y dx) along the arc
                            let (s0, s1) = (start, start + sweep);
                            0.5 * (r * r * sweep + r * center.re * (s1.sin() - s0.sin())
                                - r * center.im * (s1.cos() - s0.cos()))
                        }
                    })
                    .sum()
            }
        }
    }

    /// Arclength.
    pub fn length(&self) -> f64 {
        match self {
            Curve::Circle { radius, .. } => TAU * radius,
            Curve::Fourier { coeffs } => {
                let kmax = coeffs.iter().map(|(k, _)| k.unsigned_abs()).max().unwrap_or(1) as usize;
                let n = (64 * kmax).max(4096);
                let h = TAU / n as f64;
                (0..n).map(|j| Self::fourier_eval(coeffs, j as f64 * h).1.norm()).sum::<f64>() * h
            }
            _ => self.pieces().unwrap_or_default().iter().map(Piece::length).sum(),
        }
    }

    /// Area centroid of the enclosed region.
    pub fn centroid(&self) -> Complex64 {
        match self {
            Curve::Circle { center, .. } => *center,
            Curve::Polygon { vertices } => {
                let n = vertices.len();
                let mut acc = Complex64::new(0.0, 0.0);
                let mut area2 = 0.0;
                for i in 0..n {
                    let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                    let cr = (a.conj() * b).im;
                    area2 += cr;
                    acc += (a + b) * cr;
                }
                acc / (3.0 * area2)
            }
            _ => {
                // ∫∫ z dA = (1/2i) ∮ |z|² dz
                let rule = self.quadrature(2048);
                let s: Complex64 = rule
                    .iter()
                    .map(|q| q.tangent * q.point.norm_sqr() * q.weight)
                    .sum();
                s / (2.0 * I) / self.signed_area()
            }
        }
    }

    /// `n` points, equispaced in the natural parameter (arclength for piecewise curves).
    pub fn sample(&self, n: usize) -> Vec<Complex64> {
        match self {
            Curve::Circle { center, radius } => (0..n)
                .map(|j| center + Complex64::from_polar(*radius, TAU * j as f64 / n as f64))
                .collect(),
            Curve::Fourier { coeffs } => (0..n)
                .map(|j| Self::fourier_eval(coeffs, TAU * j as f64 / n as f64).0)
                .collect(),
            _ => {
                let pieces = self.pieces().unwrap_or_default();
                let total: f64 = pieces.iter().map(Piece::length).sum();
                let mut out = Vec::with_capacity(n);
                let mut k = 0;
                let mut offset = 0.0;
                for j in 0..n {
                    let s = total * j as f64 / n as f64;
                    while k + 1 < pieces.len() && s >= offset + pieces[k].length() {
                        offset += pieces[k].length();
                        k += 1;
                    }
                    let local = ((s - offset) / pieces[k].length()).clamp(0.0, 1.0);
                    out.push(pieces[k].eval(local).0);
                }
                out
            }
        }
    }

    /// Closest point on the curve: `(distance, point, unit tangent)`.
    pub fn closest_point(&self, z: Complex64) -> (f64, Complex64, Complex64) {
        match self {
            Curve::Circle { center, radius } => {
                let w = z - center;
                let e = if w.norm() > 0.0 { w / w.norm() } else { Complex64::new(1.0, 0.0) };
                let p = center + e * *radius;
                ((z - p).norm(), p, I * e)
            }
            Curve::Fourier { coeffs } => {
                let kmax = coeffs.iter().map(|(k, _)| k.unsigned_abs()).max().unwrap_or(1) as usize;
                let ns = (32 * kmax).max(512);
                let h = TAU / ns as f64;
                let (mut best, mut best_d) = (0.0, f64::INFINITY);
                for j in 0..ns {
                    let d = (Self::fourier_eval(coeffs, j as f64 * h).0 - z).norm_sqr();
                    if d < best_d {
                        best_d = d;
                        best = j as f64 * h;
                    }
                }
                let mut th = best;
                for _ in 0..30 {
                    let (g, d1, d2) = Self::fourier_eval(coeffs, th);
                    let phi = ((g - z).conj() * d1).re;
                    let dphi = d1.norm_sqr() + ((g - z).conj() * d2).re;
                    if dphi <= 0.0 {
                        break;
                    }
                    let step = (phi / dphi).clamp(-h, h);
                    th -= step;
                    if step.abs() < 1e-15 {
                        break;
                    }
                }
                let (g, d1, _) = Self::fourier_eval(coeffs, th);
                if (g - z).norm_sqr() <= best_d {
                    ((g - z).norm(), g, d1 / d1.norm())
                } else {
                    let (g, d1, _) = Self::fourier_eval(coeffs, best);
                    ((g - z).norm(), g, d1 / d1.norm())
                }
            }
            _ => {
                let pieces = self.pieces().unwrap_or_default();
                pieces
                    .iter()
                    .map(|p| p.closest(z))
                    .min_by(|a, b| a.0.total_cmp(&b.0))
                    .expect("curve has pieces")
            }
        }
    }

    pub fn distance(&self, z: Complex64) -> f64 {
        self.closest_point(z).0
    }

    /// Strict interior test for the region bounded by the curve.
    pub fn encloses(&self, z: Complex64) -> bool {
        match self {
            Curve::Circle { center, radius } => (z - center).norm() < *radius,
            Curve::Polygon { vertices } => {
                let n = vertices.len();
                let mut inside = false;
                for i in 0..n {
                    let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                    if (Piece::Segment { a, b }).closest(z).0 == 0.0 {
                        return false;
                    }
                    if (a.im > z.im) != (b.im > z.im) {
                        let x = a.re + (z.im - a.im) * (b.re - a.re) / (b.im - a.im);
                        if z.re < x {
                            inside = !inside;
                        }
                    }
                }
                inside
            }
            _ => {
                let (d, p, t) = self.closest_point(z);
                d > 0.0 && ((z - p) * t.conj()).im > 0.0
            }
        }
    }

    /// Quadrature rule on the curve, counterclockwise. `n` is the node count for
    /// smooth curves and a target for piecewise ones.
    pub(crate) fn quadrature(&self, n: usize) -> Vec<BoundaryNode> {
        match self {
            Curve::Circle { center, radius } => {
                let h = TAU / n as f64;
                (0..n)
                    .map(|j| {
                        let e = Complex64::from_polar(1.0, h * j as f64);
                        BoundaryNode { point: center + e * *radius, weight: radius * h, tangent: I * e }
                    })
                    .collect()
            }
            Curve::Fourier { coeffs } => {
                let h = TAU / n as f64;
                (0..n)
                    .map(|j| {
                        let (g, d1, _) = Self::fourier_eval(coeffs, h * j as f64);
                        BoundaryNode { point: g, weight: d1.norm() * h, tangent: d1 / d1.norm() }
                    })
                    .collect()
            }
            Curve::Polygon { .. } => {
                let pieces = self.pieces().unwrap_or_default();
                let per_edge = (n / pieces.len()).max(16);
                let mut out = Vec::new();
                for p in &pieces {
                    graded_segment(p, per_edge, &mut out);
                }
                out
            }
            Curve::Rounded { .. } => {
                let pieces = self.pieces().unwrap_or_default();
                let total: f64 = pieces.iter().map(Piece::length).sum();
                let mut out = Vec::new();
                for p in &pieces {
                    let share = ((n as f64 * p.length() / total).ceil() as usize).max(16);
                    uniform_panels(p, 0.0, 1.0, share.div_ceil(16), 16, &mut out);
                }
                out
            }
        }
    }
}

fn push_panel(p: &Piece, s0: f64, s1: f64, order: usize, out: &mut Vec<BoundaryNode>) {
    let len = p.length();
    for &(x, w) in gauss_legendre(order) {
        let s = s0 + (s1 - s0) * 0.5 * (x + 1.0);
        let (pt, t) = p.eval(s);
        out.push(BoundaryNode { point: pt, weight: w * 0.5 * (s1 - s0) * len, tangent: t });
    }
}

fn uniform_panels(p: &Piece, s0: f64, s1: f64, panels: usize, order: usize, out: &mut Vec<BoundaryNode>) {
    for k in 0..panels {
        let a = s0 + (s1 - s0) * k as f64 / panels as f64;
        let b = s0 + (s1 - s0) * (k + 1) as f64 / panels as f64;
        push_panel(p, a, b, order, out);
    }
}

/// Gauss panels on a segment, geometrically graded toward both endpoints.
fn graded_segment(p: &Piece, per_edge: usize, out: &mut Vec<BoundaryNode>) {
    const GRADED_ORDER: usize = 8;
    const CENTRAL_ORDER: usize = 16;
    let sigma = CORNER_GRADING_RATIO;
    let half = 0.5;
    // breakpoints measured from the corner, in local parameter units
    let mut marks = vec![0.0];
    for k in (1..=CORNER_GRADING_LEVELS).rev() {
        marks.push(half * sigma.powi(k as i32));
    }
    let central_panels = (per_edge.div_ceil(2 * CENTRAL_ORDER)).max(1);
    let top = *marks.last().expect("marks");
    for w in marks.windows(2) {
        push_panel(p, w[0], w[1], GRADED_ORDER, out);
    }
    uniform_panels(p, top, 1.0 - top, 2 * central_panels, CENTRAL_ORDER, out);
    for w in marks.windows(2).rev() {
        push_panel(p, 1.0 - w[1], 1.0 - w[0], GRADED_ORDER, out);
    }
}
