//! Closed forms the corpus regression compares against.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Bergman kernel on the diagonal of `{r < |z − c| < R}` from the orthogonal
/// Laurent basis, with `‖z^k‖² = π(R^{2k+2} − r^{2k+2})/(k+1)` and
/// `‖z^{-1}‖² = 2π log(R/r)`.
pub fn annulus_bergman(center: Complex64, r: f64, big_r: f64, z: Complex64) -> f64 {
    // rescale to R = 1
    let q = r / big_r;
    let rho2 = ((z - center) / big_r).norm_sqr();
    let mut k = 0.0;
    for n in -200i32..=400 {
        let norm = if n == -1 {
            2.0 * PI * (1.0 / q).ln()
        } else {
            PI * (1.0 - q.powi(2 * n + 2)) / (n + 1) as f64
        };
        let term = rho2.powi(n) / norm;
        if term.is_finite() {
            k += term;
        }
    }
    k / (big_r * big_r)
}

/// `π r² / (r² − |z0 − z1|²)²`.
pub fn disk_inverted_volume(z1: Complex64, r: f64, z0: Complex64) -> f64 {
    PI * r * r / (r * r - (z0 - z1).norm_sqr()).powi(2)
}

/// `j!(j+1)!/(π r^{2j+2})`, the order-`j` Bergman kernel at the center of `D(·, r)`.
pub fn disk_higher_bergman(j: usize, r: f64) -> f64 {
    let fact = |n: usize| (1..=n).map(|k| k as f64).product::<f64>();
    fact(j) * fact(j + 1) / (PI * r.powi(2 * j as i32 + 2))
}
