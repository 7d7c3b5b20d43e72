mod common;

use std::f64::consts::PI;

use common::*;
use confinv::green::{coarea_flux, default_t_grid, delta_capacity_check, log_capacity, solve_green, sublevel_volume};
use confinv::{DomainSpec, Error, GreenOptions};
use confinv::green::solve_green_with;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn probes(d: &DomainSpec, n: usize, seed: u64) -> Vec<num_complex::Complex64> {
    let (lo, hi) = d.region().bounding_box();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let z = c(rng.random_range(lo.re..hi.re), rng.random_range(lo.im..hi.im));
        if d.contains(z) && d.dist_boundary(z).unwrap() > 1e-6 {
            out.push(z);
        }
    }
    out
}

#[test]
fn disk_green_is_the_mobius_form() {
    let d = DomainSpec::disk(c(0.0, 0.0), 1.0).unwrap();
    let m = solve_green(&d, c(0.0, 0.0), 16).unwrap();
    assert!(m.residual < 1e-12);
    assert!((log_capacity(&m) - 1.0).abs() < 1e-12);
    let a = c(0.4, 0.0);
    let m = solve_green(&d, a, 64).unwrap();
    for z in probes(&d, 20, 1) {
        assert!((m.value(z) - disk::green(c(0.0, 0.0), 1.0, a, z)).abs() < 1e-10, "{z}");
    }
    assert!((log_capacity(&m) - 1.0 / 0.84).abs() < 1e-10);
    let d = DomainSpec::disk(c(1.0, 2.0), 0.3).unwrap();
    let m = solve_green(&d, c(1.0, 2.0), 16).unwrap();
    assert!(rel(log_capacity(&m), 1.0 / 0.3) < 1e-12);
}

#[test]
fn annulus_green_matches_series() {
    let d = DomainSpec::annulus(c(0.0, 0.0), 0.25, 1.0).unwrap();
    for x in [0.5, 0.6, 0.4] {
        let m = solve_green(&d, c(x, 0.0), 64).unwrap();
        assert!(m.residual < 1e-8);
        assert!(rel(log_capacity(&m), annulus::cbeta(0.25, x)) < 1e-9);
        for z in probes(&d, 20, 2) {
            assert!((m.value(z) - annulus::green(0.25, x, z)).abs() < 1e-8, "{x} {z}");
        }
    }
}

#[test]
fn green_is_symmetric_under_rotations() {
    let d = DomainSpec::annulus(c(0.0, 0.0), 0.25, 1.0).unwrap();
    let (a, b) = (c(0.5, 0.0), c(-0.1, 0.6));
    let ga = solve_green(&d, a, 64).unwrap();
    let rot = num_complex::Complex64::from_polar(1.0, 1.1);
    let gb = solve_green(&d, rot * b, 64).unwrap();
    assert!((ga.value(b) - gb.value(rot * a)).abs() < 1e-8);
    let disk = DomainSpec::disk(c(0.0, 0.0), 1.0).unwrap();
    let ga = solve_green(&disk, a, 64).unwrap();
    let gb = solve_green(&disk, rot * b, 64).unwrap();
    assert!((ga.value(b) - gb.value(rot * a)).abs() < 1e-8);
}

#[test]
fn green_is_negative_inside() {
    let specs = [
        (DomainSpec::annulus(c(0.0, 0.0), 0.25, 1.0).unwrap(), c(0.5, 0.0)),
        (DomainSpec::square(c(0.0, 0.0), 2.0).unwrap(), c(0.3, -0.2)),
        (DomainSpec::ellipse(c(0.0, 0.0), 2.0, 1.0).unwrap(), c(1.0, 0.3)),
    ];
    for (d, z0) in specs {
        let m = solve_green_with(&d, z0, &GreenOptions::default()).unwrap();
        let worst = probes(&d, 1000, 3).into_iter().map(|z| m.value(z)).fold(f64::NEG_INFINITY, f64::max);
        assert!(worst < 1e-7, "{worst}");
    }
}

#[test]
fn mean_value_gives_the_capacity() {
    let d = DomainSpec::ellipse(c(0.0, 0.0), 2.0, 1.0).unwrap();
    let z0 = c(0.5, 0.2);
    let m = solve_green_with(&d, z0, &GreenOptions::default()).unwrap();
    let delta = d.dist_boundary(z0).unwrap();
    for radius in [0.1 * delta, 0.5 * delta, 0.9 * delta] {
        let n = 512;
        let mean: f64 = (0..n)
            .map(|k| m.value(z0 + num_complex::Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64)))
            .sum::<f64>()
            / n as f64;
        assert!((mean - (radius * m.log_capacity()).ln()).abs() < 1e-8);
    }
}

#[test]
fn sublevel_volumes_and_flux() {
    let d = DomainSpec::disk(c(0.0, 0.0), 1.0).unwrap();
    let m = solve_green(&d, c(0.0, 0.0), 16).unwrap();
    assert!(rel(sublevel_volume(&m, -1.0).unwrap(), PI * (-2.0f64).exp()) < 1e-6);
    assert!((coarea_flux(&m, -1.0).unwrap() - 2.0 * PI).abs() < 1e-6);
    assert!(matches!(sublevel_volume(&m, 0.0), Err(Error::Argument(_))));
    let m = solve_green(&d, c(0.4, 0.0), 64).unwrap();
    assert!((coarea_flux(&m, -0.7).unwrap() - 2.0 * PI).abs() < 1e-5);
    let r = 0.5;
    let d = DomainSpec::disk(c(0.0, 0.0), r).unwrap();
    let m = solve_green(&d, c(0.0, 0.0), 16).unwrap();
    for t in [-0.2, -1.5, -4.0] {
        assert!(rel(sublevel_volume(&m, t).unwrap(), PI * r * r * (2.0 * t).exp()) < 1e-6);
    }
}

#[test]
fn flux_on_smooth_and_multiply_connected() {
    let jordan = DomainSpec::smooth_jordan(vec![(1, c(1.0, 0.0)), (2, c(0.1, 0.05)), (-1, c(0.15, 0.0))]).unwrap();
    let ann = DomainSpec::annulus(c(0.0, 0.0), 0.25, 1.0).unwrap();
    for (d, z0) in [(jordan, c(0.1, 0.1)), (ann, c(0.5, 0.0))] {
        let m = solve_green_with(&d, z0, &GreenOptions::default()).unwrap();
        for t in [-0.1, -1.0, -3.0] {
            assert!((coarea_flux(&m, t).unwrap() - 2.0 * PI).abs() < 1e-4, "t={t}");
        }
    }
}

#[test]
fn annulus_sublevel_volume_matches_series_grid() {
    let d = DomainSpec::annulus(c(0.0, 0.0), 0.25, 1.0).unwrap();
    let m = solve_green(&d, c(0.5, 0.0), 64).unwrap();
    let t = -0.5;
    let v = sublevel_volume(&m, t).unwrap();
    // midpoint grid over the square [-1,1]² with the series Green's function
    let n = 800;
    let h = 2.0 / n as f64;
    let mut count = 0usize;
    for i in 0..n {
        for j in 0..n {
            let z = c(-1.0 + (i as f64 + 0.5) * h, -1.0 + (j as f64 + 0.5) * h);
            let rho = z.norm();
            if rho > 0.25 && rho < 1.0 && annulus::green(0.25, 0.5, z) < t {
                count += 1;
            }
        }
    }
    let grid = count as f64 * h * h;
    assert!(rel(v, grid) < 5e-3, "{v} vs {grid}");
    assert!(PI * (2.0 * t).exp() / v >= PI / d.area());
}

#[test]
fn off_center_disk_sweep_follows_apollonius_disks() {
    let d = DomainSpec::disk(c(0.0, 0.0), 1.0).unwrap();
    let a = c(0.4, 0.0);
    let m = solve_green(&d, a, 64).unwrap();
    let sweep = m.bz_sweep(&default_t_grid()).unwrap();
    assert!(sweep.monotone);
    for r in &sweep.records {
        assert!(rel(r.f, disk::bz(c(0.0, 0.0), 1.0, a, r.t)) < 1e-6, "t={}", r.t);
    }
}

#[test]
fn centered_disk_sweep_is_constant() {
    let d = DomainSpec::disk(c(0.2, 0.0), 0.8).unwrap();
    let m = solve_green(&d, c(0.2, 0.0), 16).unwrap();
    let sweep = m.bz_sweep(&default_t_grid()).unwrap();
    for r in &sweep.records {
        assert!(rel(r.f, 1.0 / 0.64) < 1e-6);
    }
}

#[test]
fn annulus_sweep_is_decreasing_with_correct_pole_limit() {
    let d = DomainSpec::annulus(c(0.0, 0.0), 0.25, 1.0).unwrap();
    let m = solve_green(&d, c(0.5, 0.0), 64).unwrap();
    let sweep = m.bz_sweep(&default_t_grid()).unwrap();
    assert!(sweep.monotone);
    assert!(sweep.dev_near_pole < 0.02);
    let c2 = annulus::cbeta(0.25, 0.5).powi(2);
    assert!(rel(sweep.cbeta_sq, c2) < 1e-8);
    // strictly decreasing in t
    let mut recs = sweep.records.clone();
    recs.sort_by(|a, b| a.t.total_cmp(&b.t));
    assert!(recs.windows(2).all(|w| w[1].f < w[0].f));
}

#[test]
fn delta_bounds_the_capacity() {
    let d = DomainSpec::disk(c(0.0, 0.0), 1.0).unwrap();
    let m = solve_green(&d, c(0.0, 0.0), 16).unwrap();
    assert!(delta_capacity_check(&d, &m).unwrap().gap.abs() < 1e-10);
    let m = solve_green(&d, c(0.4, 0.0), 64).unwrap();
    assert!((delta_capacity_check(&d, &m).unwrap().gap - (1.0 / 0.6 - 1.0 / 0.84)).abs() < 1e-9);
    let sq = DomainSpec::square(c(0.0, 0.0), 2.0).unwrap();
    let m = solve_green_with(&sq, c(0.0, 0.0), &GreenOptions::default()).unwrap();
    let r = delta_capacity_check(&sq, &m).unwrap();
    assert!(r.gap > 0.0);
    assert!(rel(r.c_beta, 1.0 / square_conformal_radius(2.0)) < 1e-8);
}

#[test]
fn pole_on_the_boundary_is_rejected() {
    let d = DomainSpec::disk(c(0.0, 0.0), 1.0).unwrap();
    assert!(matches!(solve_green(&d, c(1.0, 0.0), 16), Err(Error::NotInDomain(_))));
    assert!(matches!(solve_green(&d, c(0.0, 0.0), 4), Err(Error::Config(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn ellipse_sweeps_are_monotone(b in 0.4f64..1.0, u in -0.6f64..0.6, v in -0.5f64..0.5) {
        let d = DomainSpec::ellipse(c(0.0, 0.0), 1.0, b).unwrap();
        let z0 = c(u, v * b);
        prop_assume!(d.contains(z0) && d.dist_boundary(z0).unwrap() > 0.05);
        let m = solve_green_with(&d, z0, &GreenOptions::default()).unwrap();
        let sweep = m.bz_sweep(&default_t_grid()).unwrap();
        prop_assert!(sweep.monotone, "max violation {}", sweep.max_violation);
        prop_assert!(sweep.dev_near_pole < 0.02);
        prop_assert!(m.log_capacity() <= 1.0 / d.dist_boundary(z0).unwrap() * (1.0 + 1e-9));
    }
}
