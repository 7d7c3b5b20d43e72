//! The inequality chain
//! `1/δ² ≥ πK ≥ c_β² ≥ c_B² ≥ π/v ≥ (2π/σ)²` at a point, its equality
//! cases and geometric cross-checks of what those equalities imply.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::green::{solve_green_with, GreenModel, GreenOptions};
use crate::kernels::{ahlfors_beurling_bound, bergman_kernel_with, szego_kernel_with, KernelOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryKey {
    InvDeltaSq,
    PiK,
    CbetaSq,
    TwoPiSSq,
    CbSq,
    PiOverV,
    Isoper,
}

impl EntryKey {
    pub const ALL: [EntryKey; 7] = [
        EntryKey::InvDeltaSq,
        EntryKey::PiK,
        EntryKey::CbetaSq,
        EntryKey::TwoPiSSq,
        EntryKey::CbSq,
        EntryKey::PiOverV,
        EntryKey::Isoper,
    ];

    /// Entries that must be non-increasing in this order.
    pub const ORDERED: [EntryKey; 6] = [
        EntryKey::InvDeltaSq,
        EntryKey::PiK,
        EntryKey::CbetaSq,
        EntryKey::CbSq,
        EntryKey::PiOverV,
        EntryKey::Isoper,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EntryKey::InvDeltaSq => "inv_delta_sq",
            EntryKey::PiK => "piK",
            EntryKey::CbetaSq => "cbeta_sq",
            EntryKey::TwoPiSSq => "two_pi_S_sq",
            EntryKey::CbSq => "cB_sq",
            EntryKey::PiOverV => "pi_over_v",
            EntryKey::Isoper => "isoper",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainEntry {
    pub key: EntryKey,
    pub value: f64,
}

/// `upper − lower` for a pair that the theory orders as `upper ≥ lower`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gap {
    pub upper: EntryKey,
    pub lower: EntryKey,
    pub absolute: f64,
    pub relative: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    /// `1/δ² ≥ πK`, equality only for a disk centered at the point.
    DeltaBergman,
    /// `1/δ ≥ c_β`, same equality case.
    DeltaCapacity,
    /// `1/δ² ≥ c_B²` (and the other disk-centered chain equalities).
    DeltaAnalyticCapacity,
    /// `πK ≥ c_B²` with equality iff biholomorphic to a disk up to a polar set.
    Suita,
    /// `πK ≥ c_β²`, same equality case (the Suita conjecture).
    SuitaConjecture,
    /// `c_β ≥ c_B`, same equality case.
    CapacityComparison,
    /// `c_B² ≥ π/v` (and `c_β² ≥ π/v`), equality iff a disk centered at the point.
    AnalyticCapacityVolume,
    /// `2πS = c_β` or `sqrt(πK)` iff simply connected.
    SzegoSimplyConnected,
    /// `2πS = sqrt(π/v)`, `2π/σ` or `1/δ` iff a disk centered at the point.
    SzegoCenteredDisk,
    /// `π/v ≥ (2π/σ)²`, equality iff a disk.
    Isoperimetric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Conclusion {
    DiskCenteredAtPoint,
    SimplyConnected,
    Disk,
}

impl Conclusion {
    pub fn describe(self) -> &'static str {
        match self {
            Conclusion::DiskCenteredAtPoint => "disk centered at z0",
            Conclusion::SimplyConnected => "simply connected (biholomorphic to a disk)",
            Conclusion::Disk => "disk",
        }
    }
}

/// Pairs examined for equality, with the theorem whose equality case applies.
pub const EQUALITY_PAIRS: [(EntryKey, EntryKey, Theorem, Conclusion); 14] = {
    use Conclusion::*;
    use EntryKey::*;
    use Theorem::*;
    [
        (InvDeltaSq, PiK, DeltaBergman, DiskCenteredAtPoint),
        (PiK, CbetaSq, SuitaConjecture, SimplyConnected),
        (CbetaSq, CbSq, CapacityComparison, SimplyConnected),
        (CbSq, PiOverV, AnalyticCapacityVolume, DiskCenteredAtPoint),
        (PiOverV, Isoper, Isoperimetric, Disk),
        (PiK, CbSq, Suita, SimplyConnected),
        (TwoPiSSq, CbetaSq, SzegoSimplyConnected, SimplyConnected),
        (PiK, TwoPiSSq, SzegoSimplyConnected, SimplyConnected),
        (TwoPiSSq, PiOverV, SzegoCenteredDisk, DiskCenteredAtPoint),
        (TwoPiSSq, Isoper, SzegoCenteredDisk, DiskCenteredAtPoint),
        (InvDeltaSq, TwoPiSSq, SzegoCenteredDisk, DiskCenteredAtPoint),
        (InvDeltaSq, CbetaSq, DeltaCapacity, DiskCenteredAtPoint),
        (InvDeltaSq, CbSq, DeltaAnalyticCapacity, DiskCenteredAtPoint),
        (CbetaSq, PiOverV, AnalyticCapacityVolume, DiskCenteredAtPoint),
    ]
};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EqualityFlag {
    pub upper: EntryKey,
    pub lower: EntryKey,
    pub relative_gap: f64,
    pub theorem: Theorem,
    pub conclusion: Conclusion,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainConfig {
    pub kernel: KernelOptions,
    pub green: GreenOptions,
    /// Relative slack for the ordering checks.
    pub chain_tolerance: f64,
    /// Relative gap below which a pair is reported as an equality.
    pub equality_tolerance: f64,
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig {
            kernel: KernelOptions::default(),
            green: GreenOptions::default(),
            chain_tolerance: 1e-6,
            equality_tolerance: 1e-6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub z0: Complex64,
    pub entries: Vec<ChainEntry>,
    /// Ahlfors–Beurling lower bound `v(E)/π` for `c_B²`.
    pub ab_lower_sq: f64,
    /// Adjacent gaps along the ordered chain.
    pub gaps: Vec<Gap>,
    /// Ordered pairs whose lower entry exceeds the upper one beyond tolerance.
    pub violations: Vec<Gap>,
    /// `|(2πS)² − c_B²| / c_B²`, with `S` recomputed on a doubled boundary rule.
    pub cross_validation: f64,
    pub flags: Vec<EqualityFlag>,
    /// Theorems whose equality case fired, without repetition.
    pub verdicts: Vec<Theorem>,
    pub chain_tolerance: f64,
    pub equality_tolerance: f64,
    pub notes: Vec<String>,
}

impl ChainReport {
    pub fn get(&self, key: EntryKey) -> f64 {
        self.entries.iter().find(|e| e.key == key).map_or(f64::NAN, |e| e.value)
    }

    pub fn is_ordered(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn compute_chain(spec: &DomainSpec, z0: Complex64, config: &ChainConfig) -> Result<ChainReport> {
    let delta = spec.dist_boundary(z0).map_err(|e| e.in_entry("inv_delta_sq"))?;
    let base = spec.without_punctures();
    let k = bergman_kernel_with(&base, z0, &config.kernel).map_err(|e| e.in_entry("piK"))?;
    let green = solve_green_with(&base, z0, &config.green).map_err(|e| e.in_entry("cbeta_sq"))?;
    let cbeta = green.log_capacity();
    let s = szego_kernel_with(&base, z0, &config.kernel).map_err(|e| e.in_entry("cB_sq"))?;
    let doubled = KernelOptions {
        nodes: Some(2 * config.kernel.nodes.unwrap_or_else(|| KernelOptions::default_nodes(s.basis_size))),
        ..config.kernel.clone()
    };
    let s2 = szego_kernel_with(&base, z0, &doubled).map_err(|e| e.in_entry("two_pi_S_sq"))?;
    let ab = ahlfors_beurling_bound(&base, z0).map_err(|e| e.in_entry("cB_sq"))?;
    let cb = 2.0 * PI * s.value;
    let two_pi_s = 2.0 * PI * s2.value;
    let values = [
        1.0 / (delta * delta),
        PI * k.value,
        cbeta * cbeta,
        two_pi_s * two_pi_s,
        cb * cb,
        PI / base.area(),
        (2.0 * PI / base.perimeter()).powi(2),
    ];
    let entries: Vec<ChainEntry> =
        EntryKey::ALL.iter().zip(values).map(|(&key, value)| ChainEntry { key, value }).collect();
    let mut notes = Vec::new();
    if !spec.punctures().is_empty() {
        notes.push(format!(
            "{} puncture(s) ignored: polar sets change none of the chain quantities",
            spec.punctures().len()
        ));
    }
    let mut report = ChainReport {
        z0,
        entries,
        ab_lower_sq: ab * ab,
        gaps: vec![],
        violations: vec![],
        cross_validation: (two_pi_s * two_pi_s - cb * cb).abs() / (cb * cb),
        flags: vec![],
        verdicts: vec![],
        chain_tolerance: config.chain_tolerance,
        equality_tolerance: config.equality_tolerance,
        notes,
    };
    let gap = |u: EntryKey, l: EntryKey| {
        let (a, b) = (report.get(u), report.get(l));
        Gap { upper: u, lower: l, absolute: a - b, relative: (a - b) / a.abs() }
    };
    report.gaps = EntryKey::ORDERED.windows(2).map(|w| gap(w[0], w[1])).collect();
    let mut violations: Vec<Gap> = report.gaps.iter().copied().filter(|g| g.relative < -config.chain_tolerance).collect();
    let ab_gap = Gap {
        upper: EntryKey::CbSq,
        lower: EntryKey::CbSq,
        absolute: cb * cb - ab * ab,
        relative: (cb * cb - ab * ab) / (cb * cb),
    };
    if ab_gap.relative < -config.chain_tolerance {
        report.notes.push(format!("Ahlfors–Beurling bound {:.9} exceeds c_B² {:.9}", ab * ab, cb * cb));
        violations.push(ab_gap);
    }
    report.violations = violations;
    report.flags = detect_equalities(&report, config.equality_tolerance);
    let mut verdicts: Vec<Theorem> = report.flags.iter().map(|f| f.theorem).collect();
    verdicts.sort();
    verdicts.dedup();
    report.verdicts = verdicts;
    Ok(report)
}

/// Pairs of [`EQUALITY_PAIRS`] whose relative gap is at most `rel_tol`.
pub fn detect_equalities(report: &ChainReport, rel_tol: f64) -> Vec<EqualityFlag> {
    EQUALITY_PAIRS
        .iter()
        .filter_map(|&(upper, lower, theorem, conclusion)| {
            let (a, b) = (report.get(upper), report.get(lower));
            let relative_gap = (a - b).abs() / a.abs().max(b.abs());
            (relative_gap <= rel_tol).then_some(EqualityFlag { upper, lower, relative_gap, theorem, conclusion })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeCheck {
    pub flag: EqualityFlag,
    pub agrees: bool,
    /// Measured defect of the claimed geometry (0 when it holds exactly).
    pub defect: f64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub checks: Vec<ProbeCheck>,
    pub consistent: bool,
}

/// Relative tolerance for the geometric probes.
pub const PROBE_TOLERANCE: f64 = 1e-6;

fn roundness(spec: &DomainSpec, c: Complex64) -> f64 {
    let r = spec.region().outer.sample(720);
    let d: Vec<f64> = r.iter().map(|p| (p - c).norm()).collect();
    let max = d.iter().cloned().fold(0.0, f64::max);
    let min = d.iter().cloned().fold(f64::INFINITY, f64::min);
    (max - min) / max
}

/// Tests each verdict's geometric conclusion directly on the domain.
pub fn rigidity_probe(spec: &DomainSpec, z0: Complex64, verdicts: &[EqualityFlag]) -> ProbeReport {
    let holes = spec.holes().len();
    let checks: Vec<ProbeCheck> = verdicts
        .iter()
        .map(|&flag| {
            let (agrees, defect, detail) = match flag.conclusion {
                Conclusion::SimplyConnected => {
                    (holes == 0, holes as f64, format!("{holes} hole(s)"))
                }
                Conclusion::DiskCenteredAtPoint => {
                    let d = roundness(spec, z0);
                    (holes == 0 && d < PROBE_TOLERANCE, d, format!("boundary distance spread from z0 {d:.3e}"))
                }
                Conclusion::Disk => {
                    let d = roundness(spec, spec.region().centroid());
                    (holes == 0 && d < PROBE_TOLERANCE, d, format!("boundary distance spread from centroid {d:.3e}"))
                }
            };
            ProbeCheck { flag, agrees, defect, detail }
        })
        .collect();
    let consistent = checks.iter().all(|c| c.agrees);
    ProbeReport { checks, consistent }
}

/// Points where `|h|` and `e^G` are compared: boundary nodes and an interior grid.
fn defect_probes(model: &GreenModel) -> Vec<Complex64> {
    let region = &model.region;
    let mut pts = region.boundary_samples(128);
    let (lo, hi) = region.bounding_box();
    let n = 24;
    let scale = region.diameter();
    for i in 0..n {
        for j in 0..n {
            let z = Complex64::new(
                lo.re + (hi.re - lo.re) * (i as f64 + 0.5) / n as f64,
                lo.im + (hi.im - lo.im) * (j as f64 + 0.5) / n as f64,
            );
            if region.contains(z) && region.boundary_distance(z) > 1e-3 * scale {
                pts.push(z);
            }
        }
    }
    pts
}

/// Best Möbius-type modulus `|h(z)| = |z − z0| / |αz + β|` fitted to `e^G`; returns
/// `max | |h| − e^G |` over the probes. Zero exactly when `e^G` is the modulus
/// of a disk automorphism, which happens only for disks up to polar sets.
pub fn green_modulus_defect(model: &GreenModel, spec: &DomainSpec) -> Result<f64> {
    if spec.without_punctures().region() != model.region {
        return Err(Error::Argument("model was solved on a different domain".into()));
    }
    let probes = defect_probes(model);
    // e^{-ρ} = |αz + β| ⇒ e^{-2ρ} = A|z|² + 2 Re(C z) + B, linear in (A, C, B)
    let targets: Vec<f64> = probes.iter().map(|&z| (-model.regular_part(z)).exp()).collect();
    let mut ata = nalgebra::Matrix4::<f64>::zeros();
    let mut atb = nalgebra::Vector4::<f64>::zeros();
    for (z, y) in probes.iter().zip(&targets) {
        let row = nalgebra::Vector4::new(z.norm_sqr(), 2.0 * z.re, -2.0 * z.im, 1.0);
        ata += row * row.transpose();
        atb += row * (y * y);
    }
    let sol = ata
        .lu()
        .solve(&atb)
        .ok_or_else(|| Error::Numerical("degenerate Möbius fit".into()))?;
    let (a_sq, cc) = (sol[0], Complex64::new(sol[1], sol[2]));
    // α = sqrt(A) > 0, β = conj(C)/α; when A ≈ 0, fall back to β = sqrt(B)
    let mut p = if a_sq > 1e-14 * sol[3].abs() {
        let a = a_sq.sqrt();
        let b = cc.conj() / a;
        Vector3::new(a, b.re, b.im)
    } else {
        Vector3::new(0.0, sol[3].abs().sqrt(), 0.0)
    };
    // Gauss–Newton on r(z) = |αz + β| − e^{-ρ(z)} with α real
    for _ in 0..30 {
        let mut jtj = Matrix3::<f64>::zeros();
        let mut jtr = Vector3::<f64>::zeros();
        for (z, y) in probes.iter().zip(&targets) {
            let u = *z * p[0] + Complex64::new(p[1], p[2]);
            let m = u.norm().max(1e-300);
            let r = m - y;
            let grad = Vector3::new((u.conj() * z).re / m, u.re / m, u.im / m);
            jtj += grad * grad.transpose();
            jtr += grad * r;
        }
        let Some(step) = jtj.lu().solve(&jtr) else { break };
        p -= step;
        if step.norm() < 1e-15 * (1.0 + p.norm()) {
            break;
        }
    }
    let (alpha, beta) = (p[0], Complex64::new(p[1], p[2]));
    let defect = probes
        .iter()
        .map(|&z| {
            let h = (z - model.pole).norm() / (z * alpha + beta).norm();
            (h - model.value(z).exp()).abs()
        })
        .fold(0.0, f64::max);
    if !defect.is_finite() {
        return Err(Error::Numerical("Möbius fit produced a non-finite defect".into()));
    }
    Ok(defect)
}
