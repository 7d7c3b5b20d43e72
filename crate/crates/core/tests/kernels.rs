mod common;

use std::f64::consts::PI;

use common::*;
use confinv::green::solve_green_with;
use confinv::kernels::{
    ab_extremal_eval, ahlfors_beurling_bound, ahlfors_map, analytic_capacity, bergman_gram, bergman_kernel,
    bergman_kernel_with, higher_bergman, szego_gram, szego_kernel, szego_kernel_with, szego_stability_sweep,
    KernelOptions,
};
use confinv::linalg::quadratic_form;
use confinv::{DomainSpec, GreenOptions};
use nalgebra::DVector;
use proptest::prelude::*;

#[test]
fn disk_kernels_match_closed_forms() {
    let o = c(0.0, 0.0);
    for (z1, r, a) in [(o, 1.0, o), (o, 1.0, c(0.4, 0.0)), (c(1.0, -1.0), 0.5, c(1.2, -0.9)), (o, 2.0, c(-0.3, 1.1))] {
        let d = DomainSpec::disk(z1, r).unwrap();
        let k = bergman_kernel(&d, a, 48).unwrap();
        let s = szego_kernel(&d, a, 48).unwrap();
        assert!(rel(k.value, disk::bergman(z1, r, a)) < 1e-10, "{z1} {r} {a}");
        assert!(rel(s.value, disk::szego(z1, r, a)) < 1e-10);
    }
    let d = DomainSpec::disk(o, 1.0).unwrap();
    assert!((bergman_kernel(&d, c(0.4, 0.0), 48).unwrap().value - 0.451_119_5).abs() < 1e-6);
    assert!((szego_kernel(&d, c(0.4, 0.0), 48).unwrap().value - 0.189_470_2).abs() < 1e-6);
}

#[test]
fn higher_order_kernels_on_disks() {
    let fact = |n: usize| (1..=n).product::<usize>() as f64;
    for r in [1.0, 0.6] {
        let d = DomainSpec::disk(c(0.0, 0.0), r).unwrap();
        for j in 0..=3 {
            let k = higher_bergman(&d, c(0.0, 0.0), j, 48).unwrap();
            let exact = fact(j) * fact(j + 1) / (PI * r.powi(2 * j as i32 + 2));
            assert!(rel(k.value, exact) < 1e-9, "r={r} j={j}: {}", k.value);
        }
    }
    let d = DomainSpec::ellipse(c(0.0, 0.0), 1.5, 1.0).unwrap();
    let k0 = higher_bergman(&d, c(0.2, 0.1), 0, 48).unwrap().value;
    let k = bergman_kernel(&d, c(0.2, 0.1), 48).unwrap().value;
    assert!(rel(k0, k) < 1e-12);
}

#[test]
fn annulus_kernels_match_laurent_series() {
    let d = DomainSpec::annulus(c(0.0, 0.0), 0.25, 1.0).unwrap();
    for z0 in [c(0.5, 0.0), c(0.6, 0.0), c(-0.4, 0.0), c(0.3, 0.55)] {
        let k = bergman_kernel_with(&d, z0, &KernelOptions::default()).unwrap();
        let s = szego_kernel_with(&d, z0, &KernelOptions::default()).unwrap();
        assert!(rel(k.value, annulus::bergman(0.25, z0)) < 1e-9, "{z0}");
        assert!(rel(s.value, annulus::szego(0.25, z0)) < 1e-9, "{z0}");
    }
}

#[test]
fn square_center_matches_conformal_radius() {
    let d = DomainSpec::square(c(0.0, 0.0), 2.0).unwrap();
    let r = square_conformal_radius(2.0);
    let s = szego_kernel(&d, c(0.0, 0.0), 48).unwrap().value;
    assert!(rel(2.0 * PI * s, 1.0 / r) < 1e-9);
    assert!(s >= 1.0 / d.perimeter());
    let k = bergman_kernel(&d, c(0.0, 0.0), 48).unwrap().value;
    assert!(PI * k > 1.0 / (r * r));
}

#[test]
fn capacity_bracket() {
    let d = DomainSpec::disk(c(0.0, 0.0), 1.0).unwrap();
    let b = analytic_capacity(&d, c(0.4, 0.0), 48).unwrap();
    assert!(rel(b.central, 1.0 / 0.84) < 1e-9);
    assert!(b.lower <= b.central * (1.0 + 1e-9) && b.central <= b.upper * (1.0 + 1e-9));
    let r = 0.7;
    let d = DomainSpec::disk(c(0.0, 0.0), r).unwrap();
    let b = analytic_capacity(&d, c(0.0, 0.0), 48).unwrap();
    for v in [b.lower, b.central, b.upper] {
        assert!(rel(v, 1.0 / r) < 1e-9);
    }
    let ann = DomainSpec::annulus(c(0.0, 0.0), 0.25, 1.0).unwrap();
    let b = analytic_capacity(&ann, c(0.5, 0.0), 48).unwrap();
    assert!(b.upper - b.central > 1e-3);
    assert!(b.lower < b.central);
    let p = DomainSpec::punctured(DomainSpec::disk(c(0.0, 0.0), 1.0).unwrap(), vec![c(-0.5, 0.0)]).unwrap();
    let b = analytic_capacity(&p, c(0.4, 0.0), 48).unwrap();
    assert!(b.punctured && rel(b.central, 1.0 / 0.84) < 1e-9);
}

#[test]
fn ahlfors_beurling_bound_values() {
    let d = DomainSpec::disk(c(0.0, 0.0), 1.0).unwrap();
    assert!((ahlfors_beurling_bound(&d, c(0.0, 0.0)).unwrap() - 1.0).abs() < 1e-10);
    assert!((ahlfors_beurling_bound(&d, c(0.5, 0.0)).unwrap() - 1.0 / 0.75).abs() < 1e-9);
    let sq = DomainSpec::square(c(0.0, 0.0), 2.0).unwrap();
    let ab = ahlfors_beurling_bound(&sq, c(0.0, 0.0)).unwrap();
    let cb = 2.0 * PI * szego_kernel(&sq, c(0.0, 0.0), 48).unwrap().value;
    assert!((PI / 4.0).sqrt() < ab && ab < cb);
}

#[test]
fn ab_extremal_on_the_unit_disk() {
    let d = DomainSpec::disk(c(0.0, 0.0), 1.0).unwrap();
    let o = c(0.0, 0.0);
    assert_eq!(ab_extremal_eval(&d, o, o).unwrap(), o);
    let h = 1e-5;
    let fp = (ab_extremal_eval(&d, o, c(h, 0.0)).unwrap() - ab_extremal_eval(&d, o, c(-h, 0.0)).unwrap()) / (2.0 * h);
    assert!((fp.norm() - 1.0).abs() < 1e-4);
    assert!((fp + 1.0).norm() < 1e-4);
    let max = (0..360)
        .map(|k| ab_extremal_eval(&d, o, num_complex::Complex64::from_polar(1.0, k as f64 * PI / 180.0)).unwrap().norm())
        .fold(0.0, f64::max);
    assert!(max <= 1.0 + 1e-6);
}

#[test]
fn ab_extremal_maps_into_the_disk() {
    let sq = DomainSpec::square(c(0.0, 0.0), 2.0).unwrap();
    let z0 = c(0.2, 0.1);
    let region = sq.region();
    for z in region.boundary_samples(64) {
        assert!(ab_extremal_eval(&sq, z0, z).unwrap().norm() <= 1.0 + 1e-6);
    }
}

#[test]
fn witness_reproduces_the_value() {
    let specs = [
        (DomainSpec::ellipse(c(0.0, 0.0), 2.0, 1.0).unwrap(), c(0.4, 0.2)),
        (DomainSpec::annulus(c(0.0, 0.0), 0.25, 1.0).unwrap(), c(0.5, 0.0)),
        (DomainSpec::square(c(0.0, 0.0), 2.0).unwrap(), c(0.3, -0.4)),
    ];
    for (d, z0) in specs {
        let region = d.region();
        let opts = KernelOptions::default();
        let k = bergman_kernel_with(&d, z0, &opts).unwrap();
        let g = bergman_gram(&region, z0, &opts).unwrap();
        let w = DVector::from_vec(k.witness.clone());
        assert!(rel(1.0 / quadratic_form(&g.gram, &w), k.value) < 1e-10);
        assert!((k.witness_eval(z0) - 1.0).norm() < 1e-10);
        let s = szego_kernel_with(&d, z0, &opts).unwrap();
        let g = szego_gram(&region, z0, &opts).unwrap();
        let w = DVector::from_vec(s.witness.clone());
        assert!(rel(1.0 / quadratic_form(&g.gram, &w), s.value) < 1e-10);
    }
}

#[test]
fn disk_witness_is_the_mobius_map() {
    let (z1, r, z0) = (c(0.3, -0.2), 1.3, c(0.9, 0.4));
    let d = DomainSpec::disk(z1, r).unwrap();
    let s = szego_kernel(&d, z0, 48).unwrap();
    let f = ahlfors_map(&d, z0, &KernelOptions::default()).unwrap();
    // S(·, z0)/S(z0) is (1 − |v|²)/(1 − v̄u) in disk coordinates; f' = 2πS g²
    for k in 0..20 {
        let z = z1 + num_complex::Complex64::from_polar(0.95 * r * (k as f64 / 20.0).sqrt(), 2.4 * k as f64);
        let h = disk::mobius(z1, r, z0, z);
        assert!((f.eval(z) - h).norm() < 1e-6, "{z}");
        let (u, v) = ((z - z1) / r, (z0 - z1) / r);
        let g = (1.0 - v.norm_sqr()) / (1.0 - v.conj() * u);
        assert!((s.witness_eval(z) - g).norm() < 1e-6);
    }
}

#[test]
fn stability_sweep_on_the_square() {
    let sq = DomainSpec::square(c(0.5, 0.5), 1.0).unwrap();
    let sweep = szego_stability_sweep(&sq, &[0.2, 0.1, 0.05, 0.025], c(0.5, 0.5), &KernelOptions::default()).unwrap();
    assert!(sweep.final_difference < 1e-3);
    assert!(sweep.cauchy);
    let disk = DomainSpec::disk(c(0.0, 0.0), 1.0).unwrap();
    let sweep = szego_stability_sweep(&disk, &[0.2, 0.1], c(0.0, 0.0), &KernelOptions::default()).unwrap();
    assert!(sweep.steps.iter().all(|s| *s == 0.0));
    assert!(szego_stability_sweep(&sq, &[0.7], c(0.5, 0.5), &KernelOptions::default()).is_err());
}

#[test]
fn higher_order_lower_bound() {
    let fact = |n: usize| (1..=n).product::<usize>() as f64;
    let specs = [
        (DomainSpec::ellipse(c(0.0, 0.0), 2.0, 1.0).unwrap(), c(0.4, 0.2)),
        (DomainSpec::annulus(c(0.0, 0.0), 0.25, 1.0).unwrap(), c(0.5, 0.0)),
        (DomainSpec::square(c(0.0, 0.0), 2.0).unwrap(), c(0.3, -0.4)),
    ];
    for (d, z0) in specs {
        let cb = solve_green_with(&d, z0, &GreenOptions::default()).unwrap().log_capacity();
        for j in 0..=2 {
            let k = higher_bergman(&d, z0, j, 48).unwrap().value;
            let bound = fact(j) * fact(j + 1) / PI * cb.powi(2 * j as i32 + 2);
            assert!(k >= bound * (1.0 - 1e-6), "j={j}: {k} < {bound}");
        }
    }
}

#[test]
fn bergman_is_monotone_under_inclusion() {
    let z0 = c(0.1, 0.05);
    let inner = DomainSpec::ellipse(c(0.0, 0.0), 0.9, 0.5).unwrap();
    let middle = DomainSpec::square(c(0.0, 0.0), 2.0).unwrap();
    let outer = DomainSpec::disk(c(0.0, 0.0), 1.5).unwrap();
    let k: Vec<f64> = [inner, middle, outer].iter().map(|d| bergman_kernel(d, z0, 48).unwrap().value).collect();
    assert!(k[0] > k[1] && k[1] > k[2]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn kernels_grow_with_the_basis(b in 0.4f64..0.9, u in -0.5f64..0.5, n in 6usize..20) {
        let d = DomainSpec::ellipse(c(0.0, 0.0), 1.0, b).unwrap();
        let z0 = c(u, 0.1 * b);
        let small = KernelOptions::with_basis(n);
        let big = KernelOptions::with_basis(n + 8);
        let (k1, k2) = (bergman_kernel_with(&d, z0, &small).unwrap().value, bergman_kernel_with(&d, z0, &big).unwrap().value);
        let (s1, s2) = (szego_kernel_with(&d, z0, &small).unwrap().value, szego_kernel_with(&d, z0, &big).unwrap().value);
        prop_assert!(k2 >= k1 * (1.0 - 1e-10));
        prop_assert!(s2 >= s1 * (1.0 - 1e-10));
    }

    #[test]
    fn suita_chain_on_ellipses(b in 0.4f64..1.0, u in -0.6f64..0.6, v in -0.5f64..0.5) {
        let d = DomainSpec::ellipse(c(0.0, 0.0), 1.0, b).unwrap();
        let z0 = c(u, v * b);
        prop_assume!(d.contains(z0) && d.dist_boundary(z0).unwrap() > 0.05);
        let k = bergman_kernel(&d, z0, 48).unwrap().value;
        let cb = 2.0 * PI * szego_kernel(&d, z0, 48).unwrap().value;
        let cbeta = solve_green_with(&d, z0, &GreenOptions::default()).unwrap().log_capacity();
        let tol = 1e-6;
        prop_assert!(PI * k >= cbeta * cbeta * (1.0 - tol));
        prop_assert!(cbeta * cbeta >= cb * cb * (1.0 - tol));
        prop_assert!(cb * cb >= PI / d.area() * (1.0 - tol));
    }
}
