//! Closed forms and series used as independent references.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Γ(1/4).
pub const GAMMA_QUARTER: f64 = 3.625_609_908_221_908;

/// Conformal radius of a square of side `s` at its center, from the
/// Schwarz–Christoffel integral ∫₀¹ (1 + t⁴)^{-1/2} dt = Γ(1/4)²/(8√π).
pub fn square_conformal_radius(s: f64) -> f64 {
    4.0 * s * PI.sqrt() / (GAMMA_QUARTER * GAMMA_QUARTER)
}

/// Möbius forms on the disk `D(z1, r)` at `a`.
pub mod disk {
    use super::*;

    pub fn green(z1: Complex64, r: f64, a: Complex64, z: Complex64) -> f64 {
        let (u, v) = ((z - z1) / r, (a - z1) / r);
        ((u - v) / (1.0 - v.conj() * u)).norm().ln()
    }

    pub fn cbeta(z1: Complex64, r: f64, a: Complex64) -> f64 {
        r / (r * r - (a - z1).norm_sqr())
    }

    pub fn bergman(z1: Complex64, r: f64, a: Complex64) -> f64 {
        r * r / (PI * (r * r - (a - z1).norm_sqr()).powi(2))
    }

    pub fn szego(z1: Complex64, r: f64, a: Complex64) -> f64 {
        r / (2.0 * PI * (r * r - (a - z1).norm_sqr()))
    }

    pub fn inverted_volume(z1: Complex64, r: f64, a: Complex64) -> f64 {
        PI * r * r / (r * r - (a - z1).norm_sqr()).powi(2)
    }

    /// `π e^{2t} / v({G < t})`: the sublevel sets are Apollonius disks.
    pub fn bz(z1: Complex64, r: f64, a: Complex64, t: f64) -> f64 {
        let q = (a - z1).norm_sqr() / (r * r);
        (1.0 - q * (2.0 * t).exp()).powi(2) / ((1.0 - q).powi(2) * r * r)
    }

    /// The normalized analytic-capacity extremal map.
    pub fn mobius(z1: Complex64, r: f64, a: Complex64, z: Complex64) -> Complex64 {
        r * (z - a) / (r * r - (a - z1).conj() * (z - z1))
    }
}

/// Series solutions on the annulus `r < |z| < 1` for a real pole `0 < x < 1`.
pub mod annulus {
    use super::*;

    /// Bergman kernel on the diagonal from the orthogonal Laurent basis.
    pub fn bergman(r: f64, z: Complex64) -> f64 {
        let rho2 = z.norm_sqr();
        let mut k = 0.0;
        for n in -200i32..=400 {
            let norm = if n == -1 {
                2.0 * PI * (1.0 / r).ln()
            } else {
                PI * (1.0 - r.powi(2 * n + 2)) / (n + 1) as f64
            };
            let term = rho2.powi(n) / norm;
            if term.is_finite() {
                k += term;
            }
        }
        k
    }

    /// Szegő kernel on the diagonal, arclength measure on both circles.
    pub fn szego(r: f64, z: Complex64) -> f64 {
        let rho2 = z.norm_sqr();
        (-200i32..=400).map(|n| rho2.powi(n) / (2.0 * PI * (1.0 + r.powi(2 * n + 1)))).filter(|t| t.is_finite()).sum()
    }

    /// Harmonic `h` with `h = log|z − x|` on both circles, so that
    /// `G(z, x) = log|z − x| − h(z)`.
    fn h(r: f64, x: f64, z: Complex64) -> f64 {
        let (rho, th) = (z.norm(), z.arg());
        let mut h = x.ln() / r.ln() * rho.ln();
        for n in 1..800 {
            let nf = n as f64;
            let (co, ci) = (-x.powi(n) / nf, -(r / x).powi(n) / nf);
            let (rn, rmn) = (r.powi(n), r.powi(-n));
            let det = rmn - rn;
            let a = (co * rmn - ci) / det;
            let b = (ci - co * rn) / det;
            let term = (a * rho.powi(n) + b * rho.powi(-n)) * (nf * th).cos();
            h += term;
            if term.abs() < 1e-18 && n > 20 {
                break;
            }
        }
        h
    }

    pub fn green(r: f64, x: f64, z: Complex64) -> f64 {
        (z - x).norm().ln() - h(r, x, z)
    }

    pub fn cbeta(r: f64, x: f64) -> f64 {
        (-h(r, x, c(x, 0.0))).exp()
    }
}

/// `∫₀^{2π} dθ / (2 ρ(θ)²)` with `ρ(θ)` the distance from `z0` to the
/// boundary along the ray at angle `θ`: the inverted-complement volume of a
/// domain star-shaped about `z0`. Composite Gauss–Legendre on `breaks`.
pub fn star_inverted_volume(mut ray: impl FnMut(f64) -> f64, breaks: &[f64]) -> f64 {
    // 8-point Gauss–Legendre
    const X: [f64; 4] = [0.183_434_642_495_649_8, 0.525_532_409_916_329, 0.796_666_477_413_626_7, 0.960_289_856_497_536_3];
    const W: [f64; 4] = [0.362_683_783_378_362, 0.313_706_645_877_887_3, 0.222_381_034_453_374_5, 0.101_228_536_290_376_3];
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let panels = 64;
        let h = (w[1] - w[0]) / panels as f64;
        for p in 0..panels {
            let mid = w[0] + (p as f64 + 0.5) * h;
            for (x, wt) in X.iter().zip(W) {
                for s in [-1.0, 1.0] {
                    let rho = ray(mid + s * x * h / 2.0);
                    total += wt * h / 2.0 / (2.0 * rho * rho);
                }
            }
        }
    }
    total
}

/// Ray distance from `z0` to the boundary of the axis-parallel box `[x0,x1]×[y0,y1]`.
pub fn box_ray(z0: Complex64, x0: f64, x1: f64, y0: f64, y1: f64) -> impl Fn(f64) -> f64 {
    move |th: f64| {
        let (dx, dy) = (th.cos(), th.sin());
        let tx = if dx > 0.0 { (x1 - z0.re) / dx } else if dx < 0.0 { (x0 - z0.re) / dx } else { f64::INFINITY };
        let ty = if dy > 0.0 { (y1 - z0.im) / dy } else if dy < 0.0 { (y0 - z0.im) / dy } else { f64::INFINITY };
        tx.min(ty)
    }
}

/// Ray distance from `z0` to the ellipse `x²/a² + y²/b² = 1`.
pub fn ellipse_ray(z0: Complex64, a: f64, b: f64) -> impl Fn(f64) -> f64 {
    move |th: f64| {
        let (dx, dy) = (th.cos(), th.sin());
        let qa = dx * dx / (a * a) + dy * dy / (b * b);
        let qb = 2.0 * (z0.re * dx / (a * a) + z0.im * dy / (b * b));
        let qc = z0.re * z0.re / (a * a) + z0.im * z0.im / (b * b) - 1.0;
        (-qb + (qb * qb - 4.0 * qa * qc).sqrt()) / (2.0 * qa)
    }
}

/// Ellipse perimeter by the Gauss–Kummer series.
pub fn ellipse_perimeter(a: f64, b: f64) -> f64 {
    let h = ((a - b) / (a + b)).powi(2);
    let mut sum = 1.0;
    let mut binom = 1.0;
    let mut hn = 1.0;
    for n in 1..200 {
        // binom(1/2, n)
        binom *= (0.5 - (n - 1) as f64) / n as f64;
        hn *= h;
        let t = binom * binom * hn;
        sum += t;
        if t < 1e-18 {
            break;
        }
    }
    PI * (a + b) * sum
}

/// Angle breakpoints for a box seen from `z0`: the four corners.
pub fn box_breaks(z0: Complex64, x0: f64, x1: f64, y0: f64, y1: f64) -> Vec<f64> {
    let mut b: Vec<f64> = [c(x1, y1), c(x0, y1), c(x0, y0), c(x1, y0)]
        .iter()
        .map(|v| {
            let a = (v - z0).arg();
            if a < 0.0 { a + 2.0 * PI } else { a }
        })
        .collect();
    b.push(0.0);
    b.push(2.0 * PI);
    b.sort_by(f64::total_cmp);
    b
}
