//! Planar domains: boundary curves, measures, membership and boundary quadrature.

mod curve;
mod quadrature;
pub mod schema;

use num_complex::Complex64;

pub use curve::{Curve, CORNER_GRADING_LEVELS, CORNER_GRADING_RATIO, SIMPLICITY_SAMPLES};
pub use quadrature::QuadratureRule;

use crate::error::{Error, Result};

/// A bounded planar domain.
#[derive(Clone, Debug, PartialEq)]
pub enum DomainSpec {
    Disk { center: Complex64, radius: f64 },
    Annulus { center: Complex64, r_inner: f64, r_outer: f64 },
    /// Counterclockwise vertex list.
    Polygon { vertices: Vec<Complex64> },
    /// Boundary `γ(θ) = Σ c_k e^{ikθ}` given as `(k, c_k)` pairs.
    SmoothJordan { fourier: Vec<(i32, Complex64)> },
    /// Region inside `outer` and outside every hole. `holes` may be empty.
    MultiplyConnected { outer: Curve, holes: Vec<Curve> },
    /// A base domain with finitely many points removed. Punctures are polar
    /// and do not change any measure, kernel or capacity.
    Punctured { base: Box<DomainSpec>, punctures: Vec<Complex64> },
}

/// Boundary curves of a domain, prepared once for repeated queries.
#[derive(Clone, Debug, PartialEq)]
pub struct Region {
    pub outer: Curve,
    pub holes: Vec<Curve>,
    pub punctures: Vec<Complex64>,
}

impl Region {
    pub fn contains(&self, z: Complex64) -> bool {
        self.outer.encloses(z)
            && !self.holes.iter().any(|h| h.encloses(z) || h.distance(z) == 0.0)
            && !self.punctures.contains(&z)
    }

    /// Distance to ∂Ω, ignoring punctures. Does not check membership.
    pub fn boundary_distance(&self, z: Complex64) -> f64 {
        self.holes
            .iter()
            .map(|h| h.distance(z))
            .fold(self.outer.distance(z), f64::min)
    }

    /// Nearest point of ∂Ω, ignoring punctures.
    pub fn closest_boundary_point(&self, z: Complex64) -> Complex64 {
        self.holes
            .iter()
            .map(|h| h.closest_point(z))
            .fold(self.outer.closest_point(z), |a, b| if b.0 < a.0 { b } else { a })
            .1
    }

    pub fn area(&self) -> f64 {
        self.outer.signed_area() - self.holes.iter().map(Curve::signed_area).sum::<f64>()
    }

    pub fn perimeter(&self) -> f64 {
        self.outer.length() + self.holes.iter().map(Curve::length).sum::<f64>()
    }

    pub fn centroid(&self) -> Complex64 {
        let mut moment = self.outer.centroid() * self.outer.signed_area();
        for h in &self.holes {
            moment -= h.centroid() * h.signed_area();
        }
        moment / self.area()
    }

    /// Axis-aligned bounding box `(min, max)` of the outer curve.
    pub fn bounding_box(&self) -> (Complex64, Complex64) {
        let pts = self.outer.sample(2048);
        let (mut lo, mut hi) = (pts[0], pts[0]);
        for p in &pts {
            lo.re = lo.re.min(p.re);
            lo.im = lo.im.min(p.im);
            hi.re = hi.re.max(p.re);
            hi.im = hi.im.max(p.im);
        }
        if let Curve::Circle { center, radius } = self.outer {
            lo = center - Complex64::new(radius, radius);
            hi = center + Complex64::new(radius, radius);
        }
        (lo, hi)
    }

    pub fn diameter(&self) -> f64 {
        let pts = self.outer.sample(512);
        let mut d: f64 = 0.0;
        for (i, a) in pts.iter().enumerate() {
            for b in &pts[i + 1..] {
                d = d.max((a - b).norm());
            }
        }
        d
    }

    /// Boundary rule with `n` nodes per smooth component (a target for
    /// piecewise-linear ones). Hole tangents are reversed.
    pub fn quadrature(&self, n: usize) -> QuadratureRule {
        let mut rule = QuadratureRule::empty();
        rule.push_component(self.outer.quadrature(n), 0, false);
        for (i, h) in self.holes.iter().enumerate() {
            rule.push_component(h.quadrature(n), i + 1, true);
        }
        rule
    }

    pub fn is_simply_connected(&self) -> bool {
        self.holes.is_empty()
    }

    /// Sample points on every boundary component.
    pub fn boundary_samples(&self, per_component: usize) -> Vec<Complex64> {
        let mut out = self.outer.sample(per_component);
        for h in &self.holes {
            out.extend(h.sample(per_component));
        }
        out
    }
}

impl DomainSpec {
    pub fn disk(center: Complex64, radius: f64) -> Result<Self> {
        let d = DomainSpec::Disk { center, radius };
        d.validate()?;
        Ok(d)
    }

    pub fn annulus(center: Complex64, r_inner: f64, r_outer: f64) -> Result<Self> {
        let d = DomainSpec::Annulus { center, r_inner, r_outer };
        d.validate()?;
        Ok(d)
    }

    pub fn polygon(vertices: Vec<Complex64>) -> Result<Self> {
        let d = DomainSpec::Polygon { vertices };
        d.validate()?;
        Ok(d)
    }

    pub fn smooth_jordan(fourier: Vec<(i32, Complex64)>) -> Result<Self> {
        let d = DomainSpec::SmoothJordan { fourier };
        d.validate()?;
        Ok(d)
    }

    pub fn multiply_connected(outer: Curve, holes: Vec<Curve>) -> Result<Self> {
        let d = DomainSpec::MultiplyConnected { outer, holes };
        d.validate()?;
        Ok(d)
    }

    pub fn punctured(base: DomainSpec, punctures: Vec<Complex64>) -> Result<Self> {
        let d = DomainSpec::Punctured { base: Box::new(base), punctures };
        d.validate()?;
        Ok(d)
    }

    /// Axis-aligned square `[c − s/2, c + s/2]²`.
    pub fn square(center: Complex64, side: f64) -> Result<Self> {
        let h = side / 2.0;
        DomainSpec::polygon(vec![
            center + Complex64::new(-h, -h),
            center + Complex64::new(h, -h),
            center + Complex64::new(h, h),
            center + Complex64::new(-h, h),
        ])
    }

    /// Ellipse with semi-axes `a` (real direction) and `b`, as a smooth Jordan curve.
    pub fn ellipse(center: Complex64, a: f64, b: f64) -> Result<Self> {
        let mut fourier = vec![(1, Complex64::new((a + b) / 2.0, 0.0))];
        if a != b {
            fourier.push((-1, Complex64::new((a - b) / 2.0, 0.0)));
        }
        if center != Complex64::new(0.0, 0.0) {
            fourier.push((0, center));
        }
        DomainSpec::smooth_jordan(fourier)
    }

    pub fn region(&self) -> Region {
        match self {
            DomainSpec::Disk { center, radius } => Region {
                outer: Curve::Circle { center: *center, radius: *radius },
                holes: vec![],
                punctures: vec![],
            },
            DomainSpec::Annulus { center, r_inner, r_outer } => Region {
                outer: Curve::Circle { center: *center, radius: *r_outer },
                holes: vec![Curve::Circle { center: *center, radius: *r_inner }],
                punctures: vec![],
            },
            DomainSpec::Polygon { vertices } => Region {
                outer: Curve::Polygon { vertices: vertices.clone() },
                holes: vec![],
                punctures: vec![],
            },
            DomainSpec::SmoothJordan { fourier } => Region {
                outer: Curve::Fourier { coeffs: fourier.clone() },
                holes: vec![],
                punctures: vec![],
            },
            DomainSpec::MultiplyConnected { outer, holes } => Region {
                outer: outer.clone(),
                holes: holes.clone(),
                punctures: vec![],
            },
            DomainSpec::Punctured { base, punctures } => {
                let mut r = base.region();
                r.punctures.extend(punctures.iter().copied());
                r
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            DomainSpec::Annulus { r_inner, r_outer, .. } => {
                if !(*r_inner > 0.0 && *r_outer > 0.0) {
                    return Err(Error::Geometry("annulus radii must be positive".into()));
                }
                if r_inner >= r_outer {
                    return Err(Error::Geometry(format!(
                        "annulus needs r_inner < r_outer, got {r_inner} >= {r_outer}"
                    )));
                }
                self.region().outer.validate()
            }
            DomainSpec::MultiplyConnected { outer, holes } => {
                outer.validate()?;
                let outer_samples = outer.sample(SIMPLICITY_SAMPLES);
                let mut hole_samples = Vec::with_capacity(holes.len());
                for h in holes {
                    h.validate()?;
                    let s = h.sample(SIMPLICITY_SAMPLES);
                    if !s.iter().all(|&p| outer.encloses(p)) {
                        return Err(Error::Geometry("hole is not strictly inside the outer curve".into()));
                    }
                    if curve::polylines_cross(&s, &outer_samples, false) {
                        return Err(Error::Geometry("hole touches the outer curve".into()));
                    }
                    hole_samples.push(s);
                }
                for i in 0..holes.len() {
                    for j in i + 1..holes.len() {
                        let overlap = hole_samples[i].iter().any(|&p| holes[j].encloses(p))
                            || hole_samples[j].iter().any(|&p| holes[i].encloses(p))
                            || curve::polylines_cross(&hole_samples[i], &hole_samples[j], false);
                        if overlap {
                            return Err(Error::Geometry(format!("holes {i} and {j} overlap")));
                        }
                    }
                }
                Ok(())
            }
            DomainSpec::Punctured { base, punctures } => {
                base.validate()?;
                let r = base.region();
                for &p in punctures {
                    if !r.contains(p) {
                        return Err(Error::Geometry(format!(
                            "puncture {}{:+}i is not inside the base domain",
                            p.re, p.im
                        )));
                    }
                }
                Ok(())
            }
            _ => self.region().outer.validate(),
        }
    }

    /// v(Ω). Punctures have measure zero.
    pub fn area(&self) -> f64 {
        self.region().area()
    }

    /// σ(∂Ω), summed over all boundary components.
    pub fn perimeter(&self) -> f64 {
        self.region().perimeter()
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.region().contains(z)
    }

    /// δ(z), the distance to ∂Ω (punctures ignored).
    pub fn dist_boundary(&self, z: Complex64) -> Result<f64> {
        let r = self.region();
        if !r.contains(z) {
            return Err(Error::NotInDomain(z));
        }
        Ok(r.boundary_distance(z))
    }

    pub fn boundary_quadrature(&self, n_nodes: usize) -> Result<QuadratureRule> {
        if n_nodes < 8 {
            return Err(Error::Config(format!("need at least 8 nodes per boundary component, got {n_nodes}")));
        }
        Ok(self.region().quadrature(n_nodes))
    }

    /// `v(ℂ∞ \ j_{z0}(Ω)) = ∫_{ℂ\Ω} |w − z0|^{-4} dv(w)`.
    ///
    /// Evaluated as the boundary integral `(1/2i) ∮_{∂Ω} dz / ((z − z0)² conj(z − z0))`,
    /// which follows from `∂_w̄ (−u⁻² ū⁻¹) = |u|⁻⁴`; the far-field contribution
    /// `π/R²` of any enclosing circle cancels exactly against that circle's
    /// contour term.
    pub fn inverted_complement_volume(&self, z0: Complex64) -> Result<f64> {
        let r = self.region();
        if !r.contains(z0) {
            return Err(Error::NotInDomain(z0));
        }
        let rule = inversion_rule(&r, z0);
        let s = rule.contour_integral(|z| {
            let u = z - z0;
            1.0 / (u * u * u.conj())
        });
        Ok((s / Complex64::new(0.0, 2.0)).re)
    }

    pub fn holes(&self) -> Vec<Curve> {
        self.region().holes
    }

    pub fn punctures(&self) -> &[Complex64] {
        match self {
            DomainSpec::Punctured { punctures, .. } => punctures,
            _ => &[],
        }
    }

    /// The domain without its punctures.
    pub fn without_punctures(&self) -> DomainSpec {
        match self {
            DomainSpec::Punctured { base, .. } => base.without_punctures(),
            other => other.clone(),
        }
    }

    pub fn is_simply_connected(&self) -> bool {
        self.region().is_simply_connected()
    }

    /// Every boundary component is smooth (no polygon corners).
    pub fn has_smooth_boundary(&self) -> bool {
        let r = self.region();
        std::iter::once(&r.outer)
            .chain(r.holes.iter())
            .all(|c| matches!(c, Curve::Circle { .. } | Curve::Fourier { .. }))
    }

    /// Rigid motion `z ↦ e^{iφ} z + shift`.
    pub fn transformed(&self, rotation: f64, shift: Complex64) -> DomainSpec {
        let rot = Complex64::from_polar(1.0, rotation);
        let map = |z: Complex64| rot * z + shift;
        let map_curve = |c: &Curve| match c {
            Curve::Circle { center, radius } => Curve::Circle { center: map(*center), radius: *radius },
            Curve::Polygon { vertices } => Curve::Polygon { vertices: vertices.iter().map(|&v| map(v)).collect() },
            Curve::Rounded { vertices, radius } => Curve::Rounded {
                vertices: vertices.iter().map(|&v| map(v)).collect(),
                radius: *radius,
            },
            Curve::Fourier { coeffs } => Curve::Fourier { coeffs: shift_fourier(coeffs, rot, shift) },
        };
        match self {
            DomainSpec::Disk { center, radius } => DomainSpec::Disk { center: map(*center), radius: *radius },
            DomainSpec::Annulus { center, r_inner, r_outer } => DomainSpec::Annulus {
                center: map(*center),
                r_inner: *r_inner,
                r_outer: *r_outer,
            },
            DomainSpec::Polygon { vertices } => DomainSpec::Polygon {
                vertices: vertices.iter().map(|&v| map(v)).collect(),
            },
            DomainSpec::SmoothJordan { fourier } => DomainSpec::SmoothJordan {
                fourier: shift_fourier(fourier, rot, shift),
            },
            DomainSpec::MultiplyConnected { outer, holes } => DomainSpec::MultiplyConnected {
                outer: map_curve(outer),
                holes: holes.iter().map(map_curve).collect(),
            },
            DomainSpec::Punctured { base, punctures } => DomainSpec::Punctured {
                base: Box::new(base.transformed(rotation, shift)),
                punctures: punctures.iter().map(|&p| map(p)).collect(),
            },
        }
    }
}

fn shift_fourier(coeffs: &[(i32, Complex64)], rot: Complex64, shift: Complex64) -> Vec<(i32, Complex64)> {
    let mut out: Vec<(i32, Complex64)> = coeffs.iter().map(|&(k, c)| (k, c * rot)).collect();
    match out.iter_mut().find(|(k, _)| *k == 0) {
        Some(entry) => entry.1 += shift,
        None if shift != Complex64::new(0.0, 0.0) => out.push((0, shift)),
        None => {}
    }
    out
}

/// Boundary rule fine enough to resolve integrands peaked like `|z − z0|^{-3}`.
pub(crate) fn inversion_rule(r: &Region, z0: Complex64) -> QuadratureRule {
    let delta = r.boundary_distance(z0).max(1e-12);
    let length = r.outer.length();
    let n = ((48.0 * length / delta).ceil() as usize).clamp(512, 1 << 15);
    r.quadrature(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn unit_square() -> DomainSpec {
        DomainSpec::polygon(vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0)]).unwrap()
    }

    #[test]
    fn areas_and_perimeters() {
        let disk = DomainSpec::disk(c(0.0, 0.0), 1.0).unwrap();
        assert!((disk.area() - PI).abs() < 1e-14);
        assert!((disk.perimeter() - 2.0 * PI).abs() < 1e-14);
        let ann = DomainSpec::annulus(c(0.0, 0.0), 0.5, 1.0).unwrap();
        assert!((ann.area() - 0.75 * PI).abs() < 1e-14);
        assert!((ann.perimeter() - 3.0 * PI).abs() < 1e-14);
        let sq = unit_square();
        assert!((sq.area() - 1.0).abs() < 1e-12);
        assert!((sq.perimeter() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn fourier_area_matches_ellipse() {
        let e = DomainSpec::ellipse(c(0.0, 0.0), 2.0, 1.0).unwrap();
        assert!((e.area() - 2.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn quadrature_weights_sum_to_perimeter() {
        let disk = DomainSpec::disk(c(0.0, 0.0), 1.0).unwrap();
        let r = disk.boundary_quadrature(64).unwrap();
        assert!((r.total_length() - 2.0 * PI).abs() < 1e-12);
        assert!(r.tangents.iter().all(|t| (t.norm() - 1.0).abs() < 1e-14));
        let sq = unit_square();
        let r = sq.boundary_quadrature(64).unwrap();
        assert!((r.total_length() - 4.0).abs() < 1e-10);
        assert!(matches!(disk.boundary_quadrature(7), Err(Error::Config(_))));
    }

    #[test]
    fn hole_tangents_are_reversed() {
        let ann = DomainSpec::annulus(c(0.0, 0.0), 0.5, 1.0).unwrap();
        let r = ann.boundary_quadrature(32).unwrap();
        // ∮ dz / z over ∂Ω vanishes: +2πi outside, −2πi around the hole
        let s = r.contour_integral(|z| 1.0 / z);
        assert!(s.norm() < 1e-12);
        // ∮ z̄ dz = 2i·area
        let a = r.contour_integral(|z| z.conj()) / c(0.0, 2.0);
        assert!((a.re - 0.75 * PI).abs() < 1e-12);
    }

    #[test]
    fn distance_and_membership() {
        let disk = DomainSpec::disk(c(0.0, 0.0), 1.0).unwrap();
        assert!((disk.dist_boundary(c(0.0, 0.0)).unwrap() - 1.0).abs() < 1e-15);
        assert!((disk.dist_boundary(c(0.4, 0.0)).unwrap() - 0.6).abs() < 1e-15);
        assert!(disk.contains(c(0.5, 0.0)));
        assert!(!disk.contains(c(1.5, 0.0)));
        assert!(matches!(disk.dist_boundary(c(2.0, 0.0)), Err(Error::NotInDomain(_))));
        let ann = DomainSpec::annulus(c(0.0, 0.0), 0.5, 1.0).unwrap();
        assert!((ann.dist_boundary(c(0.7, 0.0)).unwrap() - 0.2).abs() < 1e-15);
        assert!(!ann.contains(c(0.25, 0.0)));
        let e = DomainSpec::ellipse(c(0.0, 0.0), 2.0, 1.0).unwrap();
        assert!(e.contains(c(1.9, 0.0)));
        assert!(!e.contains(c(2.01, 0.0)));
        assert!((e.dist_boundary(c(0.0, 0.0)).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn punctures_only_remove_points() {
        let disk = DomainSpec::disk(c(0.0, 0.0), 1.0).unwrap();
        let p = DomainSpec::punctured(disk.clone(), vec![c(0.5, 0.0)]).unwrap();
        assert_eq!(p.area(), disk.area());
        assert!(!p.contains(c(0.5, 0.0)));
        assert!(p.contains(c(0.5, 1e-9)));
        assert!(DomainSpec::punctured(disk, vec![c(2.0, 0.0)]).is_err());
    }

    #[test]
    fn invalid_geometry_is_rejected() {
        assert!(DomainSpec::disk(c(0.0, 0.0), -1.0).is_err());
        assert!(DomainSpec::annulus(c(0.0, 0.0), 1.0, 0.5).is_err());
        // clockwise
        assert!(DomainSpec::polygon(vec![c(0.0, 0.0), c(0.0, 1.0), c(1.0, 1.0), c(1.0, 0.0)]).is_err());
        // bow tie
        assert!(DomainSpec::polygon(vec![c(0.0, 0.0), c(1.0, 1.0), c(1.0, 0.0), c(0.0, 1.0)]).is_err());
        // hole crossing the outer circle
        let outer = Curve::circle(c(0.0, 0.0), 1.0).unwrap();
        let hole = Curve::circle(c(0.9, 0.0), 0.3).unwrap();
        assert!(DomainSpec::multiply_connected(outer.clone(), vec![hole]).is_err());
        let h1 = Curve::circle(c(0.3, 0.0), 0.2).unwrap();
        let h2 = Curve::circle(c(0.45, 0.0), 0.2).unwrap();
        assert!(DomainSpec::multiply_connected(outer, vec![h1, h2]).is_err());
    }

    #[test]
    fn inverted_complement_volume_disk_formula() {
        for &(z1, r, z0) in &[(c(0.0, 0.0), 1.0, c(0.0, 0.0)), (c(0.0, 0.0), 1.0, c(0.5, 0.0))] {
            let d = DomainSpec::disk(z1, r).unwrap();
            let v = d.inverted_complement_volume(z0).unwrap();
            let expect = PI * r * r / (r * r - (z0 - z1).norm_sqr()).powi(2);
            assert!((v - expect).abs() < 1e-10 * expect, "{v} vs {expect}");
        }
        let d = DomainSpec::disk(c(0.0, 0.0), 1.0).unwrap();
        assert!(d.inverted_complement_volume(c(3.0, 0.0)).is_err());
    }

    #[test]
    fn rounded_square_geometry() {
        let r = 0.1;
        let curve = Curve::rounded(vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0)], r).unwrap();
        let expect_area = 1.0 - (4.0 - PI) * r * r;
        assert!((curve.signed_area() - expect_area).abs() < 1e-14);
        let expect_len = 4.0 - 8.0 * r + 2.0 * PI * r;
        assert!((curve.length() - expect_len).abs() < 1e-14);
        let q = curve.quadrature(256);
        let total: f64 = q.iter().map(|n| n.weight).sum();
        assert!((total - expect_len).abs() < 1e-12);
        assert!(curve.encloses(c(0.5, 0.5)));
        assert!(!curve.encloses(c(0.01, 0.01)));
        assert!(Curve::rounded(vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0)], 0.6).is_err());
    }
}
