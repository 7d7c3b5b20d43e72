//! The bundled regression corpus and the acceptance checks run over it.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::time::Instant;

use confinv::chain::{green_modulus_defect, rigidity_probe, ProbeReport};
use confinv::cndim::{delta_bounds_check, CnDomainSpec};
use confinv::domain::schema::parse_domain;
use confinv::green::solve_green_with;
use confinv::kernels::{ab_extremal_eval, higher_bergman_with, szego_stability_sweep};
use confinv::{compute_chain, ChainReport, DomainSpec, EntryKey};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::reference::{annulus_bergman, disk_higher_bergman, disk_inverted_volume};
use crate::{CliError, SCHEMA};

pub const MANIFEST: &str = "manifest.json";

/// Random interior points per corpus entry for the negativity check.
pub const NEGATIVITY_PROBES: usize = 200;

pub fn default_corpus_dir() -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/corpus"))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    schema: u32,
    domains: Vec<ManifestEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestEntry {
    file: String,
    points: Vec<[f64; 2]>,
}

#[derive(Clone, Debug)]
pub struct CorpusDomain {
    /// File stem, e.g. `annulus`.
    pub id: String,
    pub spec: DomainSpec,
    pub points: Vec<Complex64>,
}

#[derive(Clone, Debug)]
pub struct Corpus {
    pub domains: Vec<CorpusDomain>,
}

impl Corpus {
    pub fn load(dir: &Path) -> Result<Self, CliError> {
        let path = dir.join(MANIFEST);
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::Usage(format!("cannot read corpus manifest {}: {e}", path.display())))?;
        let manifest: Manifest =
            serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid corpus manifest: {e}")))?;
        if manifest.schema != SCHEMA {
            return Err(CliError::Usage(format!("unsupported manifest schema {}", manifest.schema)));
        }
        let mut domains = Vec::with_capacity(manifest.domains.len());
        for entry in manifest.domains {
            let file = dir.join(&entry.file);
            let text = std::fs::read_to_string(&file)
                .map_err(|e| CliError::Usage(format!("missing corpus file {}: {e}", file.display())))?;
            let spec = parse_domain(&text).map_err(|e| CliError::Usage(format!("{}: {e}", file.display())))?;
            let id = Path::new(&entry.file).file_stem().map_or(entry.file.clone(), |s| s.to_string_lossy().into_owned());
            let points: Vec<Complex64> = entry.points.iter().map(|p| Complex64::new(p[0], p[1])).collect();
            if let Some(z) = points.iter().find(|z| !spec.contains(**z)) {
                return Err(CliError::Usage(format!("{}: point {z} is not inside the domain", entry.file)));
            }
            domains.push(CorpusDomain { id, spec, points });
        }
        Ok(Corpus { domains })
    }

    pub fn get(&self, id: &str) -> Option<&CorpusDomain> {
        self.domains.iter().find(|d| d.id == id)
    }

    /// The sub-corpus with the listed ids, in corpus order.
    pub fn only(&self, ids: &[&str]) -> Corpus {
        Corpus { domains: self.domains.iter().filter(|d| ids.contains(&d.id.as_str())).cloned().collect() }
    }
}

/// Everything computed at one corpus point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub domain: String,
    pub z0: Complex64,
    pub report: ChainReport,
    pub probe: ProbeReport,
    pub modulus_defect: f64,
    /// Largest `G(z, z0)` over the seeded interior probes.
    pub max_green: f64,
}

/// Chains, probes and Green's-function checks at every corpus point.
pub fn run_corpus(corpus: &Corpus, cfg: &RunConfig) -> Result<Vec<PointRecord>, CliError> {
    let chain_cfg = cfg.chain_config();
    let green_opts = cfg.green_options();
    let jobs: Vec<(usize, &CorpusDomain, Complex64)> = corpus
        .domains
        .iter()
        .flat_map(|d| d.points.iter().map(move |&z| (d, z)))
        .enumerate()
        .map(|(i, (d, z))| (i, d, z))
        .collect();
    jobs.par_iter()
        .map(|&(i, d, z0)| {
            let fail = |e: confinv::Error| CliError::Numerical(format!("{} at {z0}: {e}", d.id));
            let report = compute_chain(&d.spec, z0, &chain_cfg).map_err(fail)?;
            let probe = rigidity_probe(&d.spec, z0, &report.flags);
            let model = solve_green_with(&d.spec, z0, &green_opts).map_err(fail)?;
            let modulus_defect = green_modulus_defect(&model, &d.spec).map_err(fail)?;
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let max_green = interior_probes(&d.spec, NEGATIVITY_PROBES, &mut rng)
                .into_iter()
                .map(|z| model.value(z))
                .fold(f64::NEG_INFINITY, f64::max);
            Ok(PointRecord { domain: d.id.clone(), z0, report, probe, modulus_defect, max_green })
        })
        .collect()
}

fn interior_probes(spec: &DomainSpec, n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let region = spec.region();
    let (lo, hi) = region.bounding_box();
    let floor = 1e-6 * region.diameter();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let z = Complex64::new(rng.random_range(lo.re..hi.re), rng.random_range(lo.im..hi.im));
        if spec.contains(z) && region.boundary_distance(z) > floor {
            out.push(z);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Criterion {
    pub id: u32,
    pub title: String,
    pub passed: bool,
    pub observed: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub schema: u32,
    pub records: Vec<PointRecord>,
    pub criteria: Vec<Criterion>,
    /// Corpus points whose equality verdicts the geometric probe contradicts.
    pub false_positives: Vec<String>,
    /// Corpus points with an ordering violation.
    pub ordering_failures: Vec<String>,
}

impl CorpusSummary {
    pub fn all_passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed) && self.ordering_failures.is_empty()
    }
}

fn record<'a>(records: &'a [PointRecord], id: &str, z0: Complex64) -> Result<&'a PointRecord, CliError> {
    records
        .iter()
        .find(|r| r.domain == id && r.z0 == z0)
        .ok_or_else(|| CliError::Usage(format!("corpus lacks `{id}` at {z0}")))
}

fn of<'a>(records: &'a [PointRecord], id: &str) -> Vec<&'a PointRecord> {
    records.iter().filter(|r| r.domain == id).collect()
}

fn crit(id: u32, title: &str, passed: bool, observed: String) -> Criterion {
    Criterion { id, title: title.to_string(), passed, observed }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Runs the corpus twice and evaluates every acceptance criterion.
pub fn corpus_regression(corpus: &Corpus, cfg: &RunConfig) -> Result<CorpusSummary, CliError> {
    let records = run_corpus(corpus, cfg)?;
    let again = run_corpus(corpus, cfg)?;
    let identical = serde_json::to_string(&records).ok() == serde_json::to_string(&again).ok();
    let mut criteria = evaluate(corpus, &records, cfg)?;
    criteria.push(crit(
        12,
        "corpus regression is deterministic",
        identical,
        format!("two runs {}", if identical { "byte-identical" } else { "differ" }),
    ));
    let false_positives = false_positives(&records);
    let ordering_failures =
        records.iter().filter(|r| !r.report.is_ordered()).map(|r| format!("{} at {}", r.domain, r.z0)).collect();
    Ok(CorpusSummary { schema: SCHEMA, records, criteria, false_positives, ordering_failures })
}

/// Points where the geometric probe contradicts an equality verdict.
pub fn false_positives(records: &[PointRecord]) -> Vec<String> {
    records
        .iter()
        .filter(|r| !r.probe.consistent)
        .map(|r| {
            let bad: Vec<String> = r
                .probe
                .checks
                .iter()
                .filter(|c| !c.agrees)
                .map(|c| format!("{} = {} ({})", c.flag.upper.name(), c.flag.lower.name(), c.detail))
                .collect();
            format!("{} at {}: {}", r.domain, r.z0, bad.join("; "))
        })
        .collect()
}

fn evaluate(corpus: &Corpus, records: &[PointRecord], cfg: &RunConfig) -> Result<Vec<Criterion>, CliError> {
    let num = |e: confinv::Error| CliError::Numerical(e.to_string());
    let kopts = cfg.kernel_options();
    let gopts = cfg.green_options();
    let unit = corpus.get("disk_unit").ok_or_else(|| CliError::Usage("corpus lacks `disk_unit`".into()))?;
    let mut out = Vec::new();

    // 1
    let r = record(records, "disk_unit", c(0.0, 0.0))?;
    let dev = r.report.entries.iter().map(|e| (e.value - 1.0).abs()).fold(0.0, f64::max);
    let start = Instant::now();
    compute_chain(&unit.spec, c(0.0, 0.0), &cfg.chain_config()).map_err(num)?;
    let fast = start.elapsed().as_secs_f64() < 1.0;
    out.push(crit(
        1,
        "centered disk: all chain entries equal 1",
        dev < 1e-8 && fast,
        format!("max |entry − 1| = {dev:.3e}; runtime {}", if fast { "< 1 s" } else { "≥ 1 s" }),
    ));

    // 2
    let r = &record(records, "disk_unit", c(0.4, 0.0))?.report;
    let exact = 1.0 / 0.84f64.powi(2);
    let cluster = [r.get(EntryKey::PiK), r.get(EntryKey::CbetaSq), r.get(EntryKey::CbSq)];
    let spread = cluster.iter().map(|v| rel(*v, exact)).fold(0.0, f64::max);
    let pv = rel(r.get(EntryKey::PiOverV), 1.0);
    let dv = rel(r.get(EntryKey::InvDeltaSq), 1.0 / 0.36);
    let strict = r.get(EntryKey::InvDeltaSq) - r.get(EntryKey::PiK) > 1e-3 && r.get(EntryKey::CbSq) - r.get(EntryKey::PiOverV) > 1e-3;
    out.push(crit(
        2,
        "off-center disk: closed forms and strict ordering",
        spread < 1e-6 && pv < 1e-6 && dv < 1e-6 && strict && r.is_ordered(),
        format!("cluster dev {spread:.3e}, π/v dev {pv:.3e}, 1/δ² dev {dv:.3e}, strict ends {strict}"),
    ));

    // 3
    let mut worst = 0.0f64;
    for j in 0..=2 {
        let k = higher_bergman_with(&unit.spec, c(0.0, 0.0), j, &kopts).map_err(num)?.value;
        worst = worst.max(rel(k, disk_higher_bergman(j, 1.0)));
    }
    out.push(crit(3, "higher-order kernels j!(j+1)!/π on the unit disk", worst < 1e-6, format!("max rel dev {worst:.3e}")));

    // 4
    let ann = of(records, "annulus");
    let min_gap = ann.iter().flat_map(|r| r.report.gaps.iter()).map(|g| g.absolute).fold(f64::INFINITY, f64::min);
    let cap_gap = ann.iter().map(|r| r.report.get(EntryKey::CbetaSq) - r.report.get(EntryKey::CbSq)).fold(f64::INFINITY, f64::min);
    let oracle = ann
        .iter()
        .map(|r| rel(r.report.get(EntryKey::PiK), PI * annulus_bergman(c(0.0, 0.0), 0.25, 1.0, r.z0)))
        .fold(0.0, f64::max);
    let narrow = ann
        .iter()
        .flat_map(|r| r.report.gaps.iter())
        .filter(|g| g.absolute <= 1e-3)
        .map(|g| format!("{}−{}", g.upper.name(), g.lower.name()))
        .collect::<std::collections::BTreeSet<_>>();
    out.push(crit(
        4,
        "annulus: adjacent gaps > 1e-3, c_β > c_B, Laurent oracle",
        !ann.is_empty() && min_gap > 1e-3 && cap_gap > 0.0 && oracle < 1e-5,
        format!(
            "min adjacent gap {min_gap:.3e}{}; min c_β²−c_B² {cap_gap:.3e}; πK oracle dev {oracle:.3e}",
            if narrow.is_empty() { String::new() } else { format!(" ({})", narrow.into_iter().collect::<Vec<_>>().join(", ")) }
        ),
    ));

    // 5
    let grid = cfg.sweep.levels();
    let ad = corpus.get("annulus").ok_or_else(|| CliError::Usage("corpus lacks `annulus`".into()))?;
    let sweep = solve_green_with(&ad.spec, ad.points[0], &gopts).map_err(num)?.bz_sweep(&grid).map_err(num)?;
    let mut flat = 0.0f64;
    for (id, z0) in [("disk_unit", c(0.0, 0.0)), ("disk_offset", c(0.5, -0.25)), ("disk_punctured", c(0.0, 0.0))] {
        let d = corpus.get(id).ok_or_else(|| CliError::Usage(format!("corpus lacks `{id}`")))?;
        let s = solve_green_with(&d.spec, z0, &gopts).map_err(num)?.bz_sweep(&grid).map_err(num)?;
        let f0 = s.records[0].f;
        flat = flat.max(s.records.iter().map(|r| rel(r.f, f0)).fold(0.0, f64::max));
    }
    out.push(crit(
        5,
        "sublevel sweep: monotone, constant on centered disks, limits",
        sweep.monotone && flat < 1e-6 && sweep.dev_near_zero <= 0.05 && sweep.dev_near_pole <= 0.02,
        format!(
            "annulus max step increase {:.3e}; centered-disk spread {flat:.3e}; dev at t={} {:.3e}, at t={} {:.3e}",
            sweep.max_violation,
            cfg.sweep.t_max,
            sweep.dev_near_zero,
            cfg.sweep.t_min,
            sweep.dev_near_pole
        ),
    ));

    // 6
    let mut flux_err = 0.0f64;
    for (id, z0) in [("disk_unit", c(0.4, 0.0)), ("ellipse", c(0.0, 0.0)), ("jordan", c(0.0, 0.0))] {
        let d = corpus.get(id).ok_or_else(|| CliError::Usage(format!("corpus lacks `{id}`")))?;
        let m = solve_green_with(&d.spec, z0, &gopts).map_err(num)?;
        for t in [-0.1, -1.0, -3.0] {
            flux_err = flux_err.max((m.coarea_flux(t).map_err(num)? - 2.0 * PI).abs());
        }
    }
    out.push(crit(6, "co-area flux equals 2π", flux_err < 1e-4, format!("max |flux − 2π| = {flux_err:.3e}")));

    // 7
    let o = c(0.0, 0.0);
    let f0 = ab_extremal_eval(&unit.spec, o, o).map_err(num)?;
    let max_f = (0..720)
        .map(|k| ab_extremal_eval(&unit.spec, o, Complex64::from_polar(1.0, k as f64 * PI / 360.0)).map(|f| f.norm()))
        .collect::<Result<Vec<f64>, _>>()
        .map_err(num)?
        .into_iter()
        .fold(0.0, f64::max);
    let h = 1e-5;
    let fp = (ab_extremal_eval(&unit.spec, o, c(h, 0.0)).map_err(num)? - ab_extremal_eval(&unit.spec, o, c(-h, 0.0)).map_err(num)?)
        / (2.0 * h);
    out.push(crit(
        7,
        "Ahlfors–Beurling extremal function on the unit disk",
        max_f <= 1.0 + 1e-6 && f0 == o && (fp.norm() - 1.0).abs() < 1e-4,
        format!("max |f| on ∂D = {max_f:.9}; f(0) = {f0}; |f′(0)| − 1 = {:.3e}", fp.norm() - 1.0),
    ));

    // 8
    let mut vol_dev = 0.0f64;
    for (z1, r, z0) in [
        (c(0.0, 0.0), 1.0, c(0.0, 0.0)),
        (c(0.0, 0.0), 1.0, c(0.5, 0.0)),
        (c(1.0, -2.0), 0.5, c(1.2, -1.9)),
        (c(-0.3, 0.4), 2.0, c(0.9, -0.8)),
        (c(3.0, 3.0), 1.5, c(3.0, 1.6)),
    ] {
        let d = DomainSpec::disk(z1, r).map_err(num)?;
        vol_dev = vol_dev.max(rel(d.inverted_complement_volume(z0).map_err(num)?, disk_inverted_volume(z1, r, z0)));
    }
    let mut slack = f64::INFINITY;
    for id in ["square", "ellipse"] {
        let d = corpus.get(id).ok_or_else(|| CliError::Usage(format!("corpus lacks `{id}`")))?;
        for &z0 in &d.points {
            slack = slack.min(d.spec.inverted_complement_volume(z0).map_err(num)? * d.spec.area() - PI * PI);
        }
    }
    out.push(crit(
        8,
        "inverted-complement volume: disk formula and volume lemma",
        vol_dev < 1e-6 && slack > 0.0,
        format!("disk formula dev {vol_dev:.3e}; min v(E)·v(Ω) − π² = {slack:.3e}"),
    ));

    // 9
    // c_B against 2πS from an independent (doubled) boundary rule; squared
    // quantities, so this bounds the unsquared relative error from above
    let szego = records.iter().map(|r| r.report.cross_validation).fold(0.0, f64::max);
    let sq = DomainSpec::square(c(0.5, 0.5), 1.0).map_err(num)?;
    let st = szego_stability_sweep(&sq, &[0.2, 0.1, 0.05, 0.025], c(0.5, 0.5), &kopts).map_err(num)?;
    out.push(crit(
        9,
        "Szegő identity 2πS = c_B and rounded-square stability",
        szego < 1e-6 && st.final_difference < 1e-3,
        format!("max |2πS − c_B|/c_B = {szego:.3e}; rounded-square final difference {:.3e}", st.final_difference),
    ));

    // 10
    let ball = CnDomainSpec::ball(2, 1.0).map_err(num)?;
    let b = delta_bounds_check(&ball, ball.center()).map_err(num)?;
    let poly = CnDomainSpec::polydisk(vec![1.0, 2.0]).map_err(num)?;
    let p = delta_bounds_check(&poly, poly.center()).map_err(num)?;
    let pass = b.gap_a < 1e-12
        && b.gap_b < 1e-12
        && b.equality_a
        && b.equality_b
        && p.satisfied(1e-12)
        && !p.equality_a
        && !p.equality_b
        && p.bound_b - p.k_value > 0.1
        && p.azukawa_volume - p.bound_a > 0.1;
    out.push(crit(
        10,
        "Cⁿ bounds: ball attains both, polydisk neither",
        pass,
        format!(
            "ball gaps {:.1e}/{:.1e}; polydisk gaps {:.4}/{:.4}",
            b.gap_a,
            b.gap_b,
            p.azukawa_volume - p.bound_a,
            p.bound_b - p.k_value
        ),
    ));

    // 11
    let disks: Vec<&PointRecord> = ["disk_unit", "disk_offset", "disk_punctured"].iter().flat_map(|id| of(records, id)).collect();
    let holed: Vec<&PointRecord> =
        records.iter().filter(|r| corpus.get(&r.domain).is_some_and(|d| !d.spec.is_simply_connected())).collect();
    let disk_max = disks.iter().map(|r| r.modulus_defect).fold(0.0, f64::max);
    let holed_min = holed.iter().map(|r| r.modulus_defect).fold(f64::INFINITY, f64::min);
    out.push(crit(
        11,
        "Green modulus defect separates disks from multiply connected domains",
        !disks.is_empty() && !holed.is_empty() && disk_max < 1e-6 && holed_min > 1e-3,
        format!("max on disks {disk_max:.3e}; min on multiply connected {holed_min:.3e}"),
    ));
    Ok(out)
}
