//! Command-line front end: reads domain files, runs the solvers and writes
//! JSON, CSV and SVG reports.
//!
//! Exit codes: 0 on success, 1 on usage, input or solver errors, 2 when a
//! computed chain violates its ordering or a sweep is not monotone.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod corpus;
pub mod reference;
pub mod svg;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use confinv::chain::{rigidity_probe, ProbeReport};
use confinv::domain::schema::{parse_domain, DomainFile};
use confinv::green::{delta_capacity_check, solve_green_with, DeltaCapacity};
use confinv::kernels::{bergman_kernel_with, higher_bergman_with, szego_kernel_with, KernelResiduals};
use confinv::{compute_chain, ChainReport, CnBoundsRecord, CnDomainSpec, DomainSpec, KernelKind};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use config::RunConfig;
use corpus::{corpus_regression, default_corpus_dir, Corpus, CorpusSummary};

/// Version tag written into every JSON document.
pub const SCHEMA: u32 = 1;

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments, unreadable or malformed input files.
    Usage(String),
    /// A solver failed or rejected the domain.
    Numerical(String),
    /// Results were computed but fail their own consistency checks.
    Accuracy(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Numerical(_) => 1,
            CliError::Accuracy(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Numerical(m) | CliError::Accuracy(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<confinv::Error> for CliError {
    fn from(e: confinv::Error) -> Self {
        match e {
            confinv::Error::Geometry(_) | confinv::Error::NotInDomain(_) | confinv::Error::Argument(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "confinv", version, about = "Conformal invariants of planar domains")]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Full inequality chain at a point, with equality verdicts.
    Chain {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_point)]
        point: Complex64,
        /// Chain ordering tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Equality detection tolerance.
        #[arg(long)]
        eq_tol: Option<f64>,
        #[arg(long)]
        basis: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Bar chart of the chain entries.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Green's function with pole at a point.
    Green {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_point)]
        pole: Complex64,
        #[arg(long)]
        basis: Option<usize>,
        /// Boundary residual tolerance.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bergman, higher-order Bergman or Szegő kernel on the diagonal.
    Kernel {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_point)]
        point: Complex64,
        #[arg(long, value_enum, default_value = "bergman")]
        kind: Kind,
        /// Derivative order for `--kind higher`.
        #[arg(long, default_value_t = 1)]
        order: usize,
        #[arg(long)]
        basis: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sublevel-set sweep `f(t) = π e^{2t} / v({G < t})` as CSV.
    Sweep {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_point)]
        pole: Complex64,
        #[arg(long)]
        basis: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Bergman kernel bounds on balls and polydisks in Cⁿ.
    Cn {
        #[arg(long, value_enum)]
        shape: Shape,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        radii: Vec<f64>,
        /// Evaluate both bounds and report whether equality holds.
        #[arg(long)]
        check: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the regression corpus and every acceptance check.
    Corpus {
        #[arg(long)]
        dir: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Bergman,
    Szego,
    Higher,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Shape {
    Ball,
    Polydisk,
}

/// Parses `RE,IM`.
pub fn parse_point(s: &str) -> Result<Complex64, String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected RE,IM, got `{s}`"))?;
    let re = a.trim().parse::<f64>().map_err(|e| format!("bad real part `{a}`: {e}"))?;
    let im = b.trim().parse::<f64>().map_err(|e| format!("bad imaginary part `{b}`: {e}"))?;
    if !(re.is_finite() && im.is_finite()) {
        return Err("point must be finite".into());
    }
    Ok(Complex64::new(re, im))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainOutput {
    pub schema: u32,
    pub domain: DomainFile,
    pub report: ChainReport,
    pub probe: ProbeReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GreenOutput {
    pub schema: u32,
    pub domain: DomainFile,
    pub pole: Complex64,
    pub basis: usize,
    pub residual: f64,
    pub tolerance: f64,
    /// `log cap` of the boundary seen from the pole, i.e. `log c_β`.
    pub log_capacity: f64,
    pub delta: DeltaCapacity,
    pub ignored_punctures: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelOutput {
    pub schema: u32,
    pub domain: DomainFile,
    pub kind: KernelKind,
    pub point: Complex64,
    pub value: f64,
    pub basis: usize,
    pub retained: usize,
    pub cond: f64,
    pub residuals: KernelResiduals,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CnOutput {
    pub schema: u32,
    pub spec: CnDomainSpec,
    pub k_value: f64,
    pub bounds: Option<CnBoundsRecord>,
}

/// Column header of the sweep CSV.
pub const SWEEP_HEADER: &str = "t,volume,f";

pub fn load_domain(path: &Path) -> Result<DomainSpec, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_domain(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)
                    .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", dir.display())))?;
            }
            std::fs::write(p, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| CliError::Numerical(format!("serialization failed: {e}")))
}

/// `--out` wins; else a file named `default` under the configured output directory.
fn out_path(cfg: &RunConfig, out: Option<PathBuf>, default: &str) -> Option<PathBuf> {
    out.or_else(|| cfg.output.dir.as_ref().map(|d| d.join(default)))
}

/// Runs the CLI on `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("confinv: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    match cli.command {
        Command::Chain { domain, point, tol, eq_tol, basis, out, svg } => {
            if let Some(t) = tol {
                cfg.tolerances.chain = t;
            }
            if let Some(t) = eq_tol {
                cfg.tolerances.equality = t;
            }
            if let Some(n) = basis {
                cfg.basis.kernel = n;
            }
            cfg.validate()?;
            let spec = load_domain(&domain)?;
            let report = compute_chain(&spec, point, &cfg.chain_config())?;
            let probe = rigidity_probe(&spec, point, &report.flags);
            let doc = ChainOutput { schema: SCHEMA, domain: DomainFile::from_spec(&spec), report, probe };
            emit(out_path(&cfg, out, "chain.json").as_deref(), &json(&doc)?)?;
            let svg = svg.or_else(|| cfg.output.svg.then(|| cfg.output.dir.clone().unwrap_or_default().join("chain.svg")));
            if let Some(p) = svg {
                emit(Some(&p), &svg::chain_chart(&doc.report, &format!("chain at {point}")))?;
            }
            if !doc.report.is_ordered() {
                let which: Vec<String> =
                    doc.report.violations.iter().map(|g| format!("{} < {}", g.upper.name(), g.lower.name())).collect();
                return Err(CliError::Accuracy(format!("chain ordering violated: {}", which.join(", "))));
            }
            Ok(())
        }
        Command::Green { domain, pole, basis, tol, out } => {
            if let Some(t) = tol {
                cfg.tolerances.solver = t;
            }
            if let Some(n) = basis {
                cfg.basis.green = n;
            }
            if !(cfg.tolerances.solver > 0.0) {
                return Err(CliError::Usage("tolerance must be positive".into()));
            }
            let spec = load_domain(&domain)?;
            let model = solve_green_with(&spec, pole, &cfg.green_options())?;
            let doc = GreenOutput {
                schema: SCHEMA,
                domain: DomainFile::from_spec(&spec),
                pole,
                basis: model.degree,
                residual: model.residual,
                tolerance: model.tolerance,
                log_capacity: model.log_capacity().ln(),
                delta: delta_capacity_check(&spec, &model)?,
                ignored_punctures: model.ignored_punctures,
            };
            emit(out_path(&cfg, out, "green.json").as_deref(), &json(&doc)?)
        }
        Command::Kernel { domain, point, kind, order, basis, out } => {
            if let Some(n) = basis {
                cfg.basis.kernel = n;
            }
            cfg.validate()?;
            let spec = load_domain(&domain)?;
            let opts = cfg.kernel_options();
            let r = match kind {
                Kind::Bergman => bergman_kernel_with(&spec, point, &opts)?,
                Kind::Szego => szego_kernel_with(&spec, point, &opts)?,
                Kind::Higher => higher_bergman_with(&spec, point, order, &opts)?,
            };
            let doc = KernelOutput {
                schema: SCHEMA,
                domain: DomainFile::from_spec(&spec),
                kind: r.kind,
                point,
                value: r.value,
                basis: r.basis_size,
                retained: r.retained,
                cond: r.condition,
                residuals: r.residuals,
            };
            emit(out_path(&cfg, out, "kernel.json").as_deref(), &json(&doc)?)
        }
        Command::Sweep { domain, pole, basis, out, svg } => {
            if let Some(n) = basis {
                cfg.basis.green = n;
            }
            cfg.validate()?;
            let spec = load_domain(&domain)?;
            let model = solve_green_with(&spec, pole, &cfg.green_options())?;
            let sweep = model.bz_sweep(&cfg.sweep.levels())?;
            let mut csv = String::from(SWEEP_HEADER);
            csv.push('\n');
            for r in &sweep.records {
                csv.push_str(&format!("{:e},{:e},{:e}\n", r.t, r.volume, r.f));
            }
            emit(out_path(&cfg, out, "sweep.csv").as_deref(), &csv)?;
            let svg = svg.or_else(|| cfg.output.svg.then(|| cfg.output.dir.clone().unwrap_or_default().join("sweep.svg")));
            if let Some(p) = svg {
                emit(Some(&p), &svg::sweep_chart(&sweep, &format!("sublevel sweep, pole {pole}")))?;
            }
            if !sweep.monotone {
                return Err(CliError::Accuracy(format!(
                    "f(t) increases by {:.3e} between levels",
                    sweep.max_violation
                )));
            }
            Ok(())
        }
        Command::Cn { shape, dim, radii, check, out } => {
            let spec = match shape {
                Shape::Ball => {
                    let n = dim.ok_or_else(|| CliError::Usage("--shape ball needs --dim".into()))?;
                    let r = match radii.as_slice() {
                        [] => 1.0,
                        [r] => *r,
                        _ => return Err(CliError::Usage("a ball takes one radius".into())),
                    };
                    CnDomainSpec::ball(n, r)?
                }
                Shape::Polydisk => {
                    let radii = match (radii.is_empty(), dim) {
                        (true, Some(n)) => vec![1.0; n],
                        (true, None) => return Err(CliError::Usage("--shape polydisk needs --radii or --dim".into())),
                        (false, Some(n)) if n != radii.len() => {
                            return Err(CliError::Usage(format!("--dim {n} but {} radii", radii.len())))
                        }
                        (false, _) => radii,
                    };
                    CnDomainSpec::polydisk(radii)?
                }
            };
            let k_value = spec.bergman(spec.center())?;
            let bounds = if check { Some(confinv::cndim::delta_bounds_check(&spec, spec.center())?) } else { None };
            emit(out_path(&cfg, out, "cn.json").as_deref(), &json(&CnOutput { schema: SCHEMA, spec, k_value, bounds })?)
        }
        Command::Corpus { dir, out } => {
            cfg.validate()?;
            let dir = dir.unwrap_or_else(default_corpus_dir);
            let corpus = Corpus::load(&dir)?;
            let summary = corpus_regression(&corpus, &cfg)?;
            eprint!("{}", criteria_table(&summary));
            emit(out_path(&cfg, out, "corpus.json").as_deref(), &json(&summary)?)?;
            if !summary.all_passed() {
                let failed: Vec<String> = summary.criteria.iter().filter(|c| !c.passed).map(|c| c.id.to_string()).collect();
                return Err(CliError::Accuracy(format!(
                    "failing criteria: {}; ordering failures: {}",
                    if failed.is_empty() { "none".into() } else { failed.join(", ") },
                    summary.ordering_failures.len()
                )));
            }
            Ok(())
        }
    }
}

/// One `[PASS]`/`[FAIL]` line per criterion.
pub fn criteria_table(summary: &CorpusSummary) -> String {
    let mut s = String::new();
    for c in &summary.criteria {
        s.push_str(&format!(
            "[{}] {:>2}. {}: {}\n",
            if c.passed { "PASS" } else { "FAIL" },
            c.id,
            c.title,
            c.observed
        ));
    }
    for f in &summary.false_positives {
        s.push_str(&format!("rigidity false positive: {f}\n"));
    }
    for f in &summary.ordering_failures {
        s.push_str(&format!("ordering failure: {f}\n"));
    }
    s
}
