mod common;

use std::f64::consts::PI;

use common::*;
use confinv::cndim::{azukawa_volume, ball_bergman, delta_bounds_check};
use confinv::green::solve_green;
use confinv::kernels::bergman_kernel;
use confinv::{CnDomainSpec, DomainSpec, Error};
use proptest::prelude::*;

#[test]
fn ball_kernel_values() {
    assert!((ball_bergman(2, 1.0, 0.0).unwrap() - 2.0 / (PI * PI)).abs() < 1e-15);
    assert!((ball_bergman(1, 1.0, 0.4).unwrap() - 1.0 / (PI * 0.7056)).abs() < 1e-15);
    assert!(rel(ball_bergman(3, 2.0, 0.0).unwrap(), 3.0 / (32.0 * PI.powi(3))) < 1e-14);
    assert!(matches!(ball_bergman(2, 1.0, 1.0), Err(Error::NotInDomain(_))));
}

#[test]
fn indicatrix_volumes() {
    let b = CnDomainSpec::ball(2, 1.0).unwrap();
    assert!(rel(azukawa_volume(&b, b.center()).unwrap(), PI * PI / 2.0) < 1e-15);
    let p = CnDomainSpec::polydisk(vec![1.0, 2.0]).unwrap();
    assert!(rel(azukawa_volume(&p, p.center()).unwrap(), 4.0 * PI * PI) < 1e-15);
    // n = 1: the indicatrix is the disk of radius 1/c_β
    let r = 0.8;
    let b1 = CnDomainSpec::ball(1, r).unwrap();
    let m = solve_green(&DomainSpec::disk(c(0.0, 0.0), r).unwrap(), c(0.0, 0.0), 16).unwrap();
    assert!(rel(azukawa_volume(&b1, b1.center()).unwrap(), PI / m.log_capacity().powi(2)) < 1e-10);
    let off = [c(0.1, 0.0), c(0.0, 0.0)];
    assert!(matches!(azukawa_volume(&b, &off), Err(Error::Unsupported(_))));
}

#[test]
fn ball_attains_both_bounds() {
    for (n, r) in [(1, 1.0), (2, 1.0), (3, 0.5), (4, 2.0)] {
        let b = CnDomainSpec::ball(n, r).unwrap();
        let rec = delta_bounds_check(&b, b.center()).unwrap();
        assert!(rec.equality_a && rec.equality_b, "n={n}");
        assert!(rec.gap_a < 1e-12 && rec.gap_b < 1e-12);
    }
}

#[test]
fn polydisk_is_strict() {
    let p = CnDomainSpec::polydisk(vec![1.0, 2.0]).unwrap();
    let rec = delta_bounds_check(&p, p.center()).unwrap();
    assert!(rel(rec.k_value, 1.0 / (4.0 * PI * PI)) < 1e-14);
    assert!(rel(rec.bound_b, 2.0 / (PI * PI)) < 1e-14);
    assert!(rel(rec.bound_a, PI * PI / 2.0) < 1e-14);
    assert!(!rec.equality_a && !rec.equality_b);
    assert!(rec.bound_b - rec.k_value > 0.1 && rec.azukawa_volume - rec.bound_a > 0.1);
}

#[test]
fn reduces_to_the_plane() {
    let r = 0.75;
    let disk = DomainSpec::disk(c(0.0, 0.0), r).unwrap();
    let b = CnDomainSpec::ball(1, r).unwrap();
    let rec = delta_bounds_check(&b, b.center()).unwrap();
    let k = bergman_kernel(&disk, c(0.0, 0.0), 48).unwrap().value;
    assert!(rel(rec.k_value, k) < 1e-8);
    assert!(rel(PI * rec.k_value, 1.0 / (rec.delta * rec.delta)) < 1e-12);
    let z = [c(0.3, -0.2)];
    assert!(rel(b.bergman(&z).unwrap(), bergman_kernel(&disk, z[0], 48).unwrap().value) < 1e-8);
}

#[test]
fn rejects_bad_specs() {
    assert!(CnDomainSpec::ball(0, 1.0).is_err());
    assert!(CnDomainSpec::ball(2, -1.0).is_err());
    assert!(CnDomainSpec::polydisk(vec![]).is_err());
    assert!(CnDomainSpec::polydisk(vec![1.0, 0.0]).is_err());
    let b = CnDomainSpec::Ball { n: 2, center: vec![c(0.0, 0.0)], radius: 1.0 };
    assert!(b.validate().is_err());
}

proptest! {
    #[test]
    fn bounds_hold_for_every_shape(radii in proptest::collection::vec(0.1f64..5.0, 1..5), ball in any::<bool>()) {
        let spec = if ball {
            CnDomainSpec::ball(radii.len(), radii[0]).unwrap()
        } else {
            CnDomainSpec::polydisk(radii.clone()).unwrap()
        };
        let rec = delta_bounds_check(&spec, spec.center()).unwrap();
        prop_assert!(rec.satisfied(1e-12));
        if !ball && radii.iter().any(|r| (r - radii[0]).abs() > 1e-3 * radii[0]) {
            prop_assert!(!rec.equality_a && !rec.equality_b);
        }
    }

    #[test]
    fn polydisk_kernel_is_a_product(radii in proptest::collection::vec(0.3f64..3.0, 1..4), s in 0.0f64..0.8) {
        let p = CnDomainSpec::polydisk(radii.clone()).unwrap();
        let z: Vec<_> = radii.iter().map(|r| c(s * r * 0.7, -s * r * 0.3)).collect();
        let mut product = 1.0;
        for (r, zi) in radii.iter().zip(&z) {
            product *= bergman_kernel(&DomainSpec::disk(c(0.0, 0.0), *r).unwrap(), *zi, 32).unwrap().value;
        }
        prop_assert!(rel(p.bergman(&z).unwrap(), product) < 1e-10);
    }
}
