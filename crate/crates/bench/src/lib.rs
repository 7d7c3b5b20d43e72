//! Domains shared by the benchmarks.

use confinv::{Complex64, DomainSpec};

pub fn unit_disk() -> DomainSpec {
    DomainSpec::disk(Complex64::new(0.0, 0.0), 1.0).expect("valid disk")
}

pub fn annulus() -> DomainSpec {
    DomainSpec::annulus(Complex64::new(0.0, 0.0), 0.25, 1.0).expect("valid annulus")
}

pub fn ellipse() -> DomainSpec {
    DomainSpec::ellipse(Complex64::new(0.0, 0.0), 2.0, 1.0).expect("valid ellipse")
}

pub fn square() -> DomainSpec {
    DomainSpec::square(Complex64::new(0.0, 0.0), 2.0).expect("valid square")
}
