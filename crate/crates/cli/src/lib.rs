//! Command-line front end: bound reports, planner queries, verification
//! suites and tables.
//!
//! [`execute`] runs one invocation and returns the exit code with the
//! rendered output, so the binary and the tests share one code path.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use paramtc_core::bounds::{secat_ddot, secat_sphere_bundle, tc_sphere_bundle, TCReport};
use paramtc_core::planner::{
    plan, plan_hopf, BundlePoint, PlannedPath, PlannerError, ProjectiveRep, SegmentKind,
    DEFAULT_TOL_ANTI, DEFAULT_TOL_CELL, POINT_TOLERANCE,
};
use paramtc_core::verify::{self, VerificationOutcome};
use paramtc_core::{
    k_fold_sum, whitney_sum, BaseSpace, BoundsError, BundleDescriptor, BundleError,
};

pub const SEED_ENV: &str = "PARAMTC_SEED";
const MAX_N: u32 = 64;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed descriptor: {0}")]
    Descriptor(String),
    #[error("malformed pair: {0}")]
    Pair(String),
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Planner(#[from] PlannerError),
    #[error("cannot encode output: {0}")]
    Encode(#[from] serde_json::Error),
}

#[derive(Debug, Parser)]
#[command(
    name = "paramtc",
    version,
    about = "Bounds and motion planners for the parametrized topological complexity of sphere bundles"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bound report with provenance for a bundle family or descriptor file.
    Bounds(BoundsArgs),
    /// Plan a path between two points of one fiber.
    Plan(PlanArgs),
    /// Run verification suites; exit status 2 on failure.
    Verify(VerifyArgs),
    /// Tabulate a family over CP^n for n up to --n-max.
    Table(TableArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// k copies of the canonical line bundle over CP^n.
    KEta,
    /// The canonical line bundle (Hopf bundle) over CP^n.
    Eta,
    /// The canonical line bundle plus a trivial line over CP^n.
    EtaPlusEps,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QuantityArg {
    /// Sectional category of the unit sphere bundle.
    Secat,
    /// Sectional category of the doubled bundle.
    SecatDdot,
    /// Parametrized topological complexity.
    Tc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Human,
    Json,
    Tsv,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(
        long,
        value_enum,
        conflicts_with = "descriptor",
        required_unless_present = "descriptor"
    )]
    pub family: Option<Family>,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=MAX_N as i64))]
    pub n: Option<u32>,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=MAX_N as i64))]
    pub k: Option<u32>,
    /// JSON bundle descriptor file.
    #[arg(long)]
    pub descriptor: Option<PathBuf>,
    /// Defaults to secat for k-eta and TC otherwise.
    #[arg(long, value_enum)]
    pub quantity: Option<QuantityArg>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    /// eta plans on the Hopf bundle, eta-plus-eps on the sphere bundle of eta + eps.
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=MAX_N as i64))]
    pub n: u32,
    /// Inline JSON object or path to a JSON file.
    #[arg(long)]
    pub pair: String,
    /// Also emit this many evaluations on a uniform grid.
    #[arg(long, default_value_t = 0)]
    pub samples: usize,
    #[arg(long, default_value_t = DEFAULT_TOL_ANTI)]
    pub tol_anti: f64,
    #[arg(long, default_value_t = DEFAULT_TOL_CELL)]
    pub tol_cell: f64,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Oracle,
    Tables,
    Planner,
    Partition,
    Gauge,
    Hopf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    /// Largest n for the planner suites; the algebraic suites use 6 and 8.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..=16))]
    pub n: u32,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    /// Overrides the PARAMTC_SEED environment variable.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = verify::DEFAULT_SAMPLES)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..=32))]
    pub n_max: u32,
    #[arg(long, value_enum)]
    pub quantity: Option<QuantityArg>,
    #[arg(long, value_enum, default_value = "tsv")]
    pub format: Format,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Execution {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `argv` (including the program name) and runs it.
pub fn execute<I, T>(argv: I) -> Execution
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Execution {
                    code: 1,
                    stdout: String::new(),
                    stderr: rendered,
                }
            } else {
                Execution {
                    code: 0,
                    stdout: rendered,
                    stderr: String::new(),
                }
            };
        }
    };
    match run(&cli) {
        Ok((code, stdout)) => Execution {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Execution {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn run(cli: &Cli) -> Result<(i32, String), CliError> {
    match &cli.command {
        Command::Bounds(args) => run_bounds(args).map(|s| (0, s)),
        Command::Plan(args) => run_plan(args).map(|s| (0, s)),
        Command::Verify(args) => run_verify(args),
        Command::Table(args) => run_table(args).map(|s| (0, s)),
    }
}

fn require_n(n: Option<u32>) -> Result<u32, CliError> {
    n.ok_or_else(|| CliError::Usage("--n is required with --family".into()))
}

fn family_bundle(family: Family, n: u32, k: Option<u32>) -> Result<BundleDescriptor, CliError> {
    let base = BaseSpace::complex_projective(n);
    let eta = BundleDescriptor::canonical_line(&base, 0)?;
    match (family, k) {
        (Family::KEta, Some(k)) => Ok(k_fold_sum(&eta, k)?),
        (Family::KEta, None) => Err(CliError::Usage("--family k-eta requires --k".into())),
        (_, Some(_)) => Err(CliError::Usage("--k applies only to --family k-eta".into())),
        (Family::Eta, None) => Ok(eta),
        (Family::EtaPlusEps, None) => {
            Ok(whitney_sum(&eta, &BundleDescriptor::trivial_line(&base))?)
        }
    }
}

fn compute(quantity: QuantityArg, xi: &BundleDescriptor) -> Result<TCReport, CliError> {
    Ok(match quantity {
        QuantityArg::Secat => secat_sphere_bundle(xi)?,
        QuantityArg::SecatDdot => secat_ddot(xi)?,
        QuantityArg::Tc => tc_sphere_bundle(xi)?,
    })
}

fn default_quantity(family: Option<Family>) -> QuantityArg {
    match family {
        Some(Family::KEta) => QuantityArg::Secat,
        _ => QuantityArg::Tc,
    }
}

fn report_rules(report: &TCReport) -> String {
    report
        .deciding_rules()
        .iter()
        .map(|r| r.as_str())
        .collect::<Vec<_>>()
        .join(",")
}

fn run_bounds(args: &BoundsArgs) -> Result<String, CliError> {
    let xi = match (&args.descriptor, args.family) {
        (Some(path), _) => {
            if args.n.is_some() || args.k.is_some() {
                return Err(CliError::Usage(
                    "--n and --k cannot be combined with --descriptor".into(),
                ));
            }
            load_descriptor(path)?
        }
        (None, Some(family)) => family_bundle(family, require_n(args.n)?, args.k)?,
        (None, None) => {
            return Err(CliError::Usage(
                "one of --family or --descriptor is required".into(),
            ))
        }
    };
    let quantity = args.quantity.unwrap_or(default_quantity(args.family));
    let report = compute(quantity, &xi)?;
    Ok(match args.format {
        Format::Human => format!(
            "bundle: {} over {}\n{report}",
            xi.label(),
            xi.base().family()
        ),
        Format::Json => serde_json::to_string_pretty(&report)? + "\n",
        Format::Tsv => format!(
            "bundle\tquantity\tlower\tupper\texact\trules\n{}\t{}\t{}\t{}\t{}\t{}\n",
            xi.label(),
            report.quantity.symbol(),
            report.lower,
            report.upper,
            report.exact,
            report_rules(&report)
        ),
    })
}

/// Descriptor file contents.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DescriptorFile {
    pub base: BaseSpec,
    pub construction: Construction,
    #[serde(default)]
    pub flags: Flags,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BaseSpec {
    Point,
    Cp { n: u32 },
    ProductCp { dims: Vec<u32> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Construction {
    /// Whitney sum of the children.
    Sum(Vec<Construction>),
    /// Canonical line bundle of a `CP^n` factor.
    Canonical {
        #[serde(default)]
        factor: usize,
    },
    /// Trivial bundle of the given rank.
    Trivial { rank: u32 },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Flags {
    #[serde(default)]
    pub complex_structure: bool,
    #[serde(default)]
    pub independent_sections: u32,
}

fn read_source(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_descriptor(path: &Path) -> Result<BundleDescriptor, CliError> {
    let text = read_source(path)?;
    let file: DescriptorFile =
        serde_json::from_str(&text).map_err(|e| CliError::Descriptor(e.to_string()))?;
    build_descriptor(&file)
}

pub fn build_descriptor(file: &DescriptorFile) -> Result<BundleDescriptor, CliError> {
    let base = match &file.base {
        BaseSpec::Point => BaseSpace::point(),
        BaseSpec::Cp { n } if (1..=MAX_N).contains(n) => BaseSpace::complex_projective(*n),
        BaseSpec::Cp { n } => {
            return Err(CliError::Descriptor(format!(
                "n = {n} is outside 1..={MAX_N}"
            )))
        }
        BaseSpec::ProductCp { dims } => BaseSpace::product_complex_projective(dims)?,
    };
    let mut xi = construct(&base, &file.construction)?;
    if file.flags.complex_structure {
        xi = xi.declare_complex_structure()?;
    }
    if file.flags.independent_sections > xi.independent_sections() {
        xi = xi.declare_independent_sections(file.flags.independent_sections)?;
    }
    Ok(xi)
}

fn construct(
    base: &std::sync::Arc<BaseSpace>,
    node: &Construction,
) -> Result<BundleDescriptor, CliError> {
    match node {
        Construction::Canonical { factor } => Ok(BundleDescriptor::canonical_line(base, *factor)?),
        Construction::Trivial { rank } => Ok(BundleDescriptor::trivial(base, *rank)?),
        Construction::Sum(children) => {
            let mut parts = children.iter();
            let first = parts
                .next()
                .ok_or_else(|| CliError::Descriptor("empty sum".into()))?;
            parts.try_fold(construct(base, first)?, |acc, child| {
                Ok(whitney_sum(&acc, &construct(base, child)?)?)
            })
        }
    }
}

/// One point of a `--pair` document; complex numbers are `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    pub z: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub x: PointSpec,
    pub y: PointSpec,
}

fn complexes(v: &[[f64; 2]]) -> Vec<Complex64> {
    v.iter().map(|[re, im]| Complex64::new(*re, *im)).collect()
}

fn pairs_of(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(|c| [c.re, c.im]).collect()
}

impl PointSpec {
    pub fn from_point(p: &BundlePoint) -> Self {
        Self {
            z: pairs_of(p.z().coords()),
            w: Some(pairs_of(p.w())),
            s: Some(p.s()),
        }
    }

    fn rep(&self, n: u32) -> Result<ProjectiveRep, CliError> {
        let z = complexes(&self.z);
        if z.len() != n as usize + 1 {
            return Err(CliError::Pair(format!(
                "z has {} coordinates, CP^{n} needs {}",
                z.len(),
                n + 1
            )));
        }
        let norm = z.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > POINT_TOLERANCE {
            return Err(CliError::Pair(format!("|z| = {norm}, expected 1")));
        }
        Ok(ProjectiveRep::normalized(z)?)
    }

    fn point(&self, n: u32) -> Result<BundlePoint, CliError> {
        let (Some(w), Some(s)) = (&self.w, self.s) else {
            return Err(CliError::Pair("points need z, w and s".into()));
        };
        BundlePoint::new(self.rep(n)?, complexes(w), s).map_err(|e| CliError::Pair(e.to_string()))
    }
}

fn load_pair(source: &str) -> Result<PairSpec, CliError> {
    let text = if source.trim_start().starts_with('{') {
        source.to_string()
    } else {
        read_source(Path::new(source))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Pair(e.to_string()))
}

fn kind_name(kind: SegmentKind) -> &'static str {
    match kind {
        SegmentKind::Interpolation => "interpolation",
        SegmentKind::PhaseRotation => "phase-rotation",
        SegmentKind::AlphaDeformation => "alpha-deformation",
        SegmentKind::PolarRotation => "polar-rotation",
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentSummary {
    pub kind: String,
    pub start: f64,
    pub end: f64,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub t: f64,
    pub w: Vec<[f64; 2]>,
    pub s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanSummary {
    pub piece: usize,
    pub pieces: usize,
    pub description: String,
    pub constant: bool,
    pub length: f64,
    pub segments: Vec<SegmentSummary>,
    pub start: PointSpec,
    pub end: PointSpec,
    pub check: VerificationOutcome,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub samples: Vec<SampleSpec>,
}

fn describe_piece(family: Family, piece: usize) -> String {
    match (family, piece) {
        (Family::Eta, 0) => "phase rotation".into(),
        (Family::Eta, _) => "antipodal rotation".into(),
        (_, 0) => "non-antipodal".into(),
        (_, 1) => "antipodal, off the poles".into(),
        (_, i) => format!("antipodal at the poles, cell e^{}", 2 * (i - 2)),
    }
}

fn summarize(family: Family, n: u32, path: &PlannedPath, samples: usize) -> PlanSummary {
    let segments: Vec<SegmentSummary> = path
        .segments()
        .iter()
        .map(|s| SegmentSummary {
            kind: kind_name(s.segment.kind()).into(),
            start: s.start,
            end: s.end,
            length: s.segment.length(),
        })
        .collect();
    let length: f64 = segments.iter().map(|s| s.length).sum();
    let samples = if samples == 0 {
        Vec::new()
    } else {
        path.sample(samples)
            .into_iter()
            .map(|(t, p)| SampleSpec {
                t,
                w: pairs_of(p.w()),
                s: p.s(),
            })
            .collect()
    };
    PlanSummary {
        piece: path.piece(),
        pieces: match family {
            Family::Eta => 2,
            _ => n as usize + 3,
        },
        description: describe_piece(family, path.piece()),
        constant: length == 0.0,
        length,
        segments,
        start: PointSpec::from_point(path.start()),
        end: PointSpec::from_point(path.end()),
        check: verify::check_path(path, verify::DEFAULT_SAMPLES),
        samples,
    }
}

fn fmt_vector(v: &[[f64; 2]]) -> String {
    let parts: Vec<String> = v
        .iter()
        .map(|[re, im]| format!("{re:.9}{im:+.9}i"))
        .collect();
    format!("[{}]", parts.join(", "))
}

fn fmt_point(p: &PointSpec) -> String {
    format!(
        "z={} w={} s={:.9}",
        fmt_vector(&p.z),
        fmt_vector(p.w.as_deref().unwrap_or(&[])),
        p.s.unwrap_or(0.0)
    )
}

fn run_plan(args: &PlanArgs) -> Result<String, CliError> {
    if !(args.tol_anti > 0.0 && args.tol_anti < 1.0 && args.tol_cell > 0.0 && args.tol_cell < 1.0) {
        return Err(CliError::Usage("tolerances must lie in (0, 1)".into()));
    }
    let spec = load_pair(&args.pair)?;
    let path = match args.family {
        Family::EtaPlusEps => {
            let x = spec.x.point(args.n)?;
            let y = spec.y.point(args.n)?;
            plan(&x, &y, args.tol_anti, args.tol_cell)?
        }
        Family::Eta => {
            let z = spec.x.rep(args.n)?;
            let z2 = spec.y.rep(args.n)?;
            plan_hopf(z.coords(), z2.coords(), args.tol_anti)?
        }
        Family::KEta => {
            return Err(CliError::Usage(
                "plan supports --family eta and --family eta-plus-eps".into(),
            ))
        }
    };
    let summary = summarize(args.family, args.n, &path, args.samples);
    Ok(match args.format {
        Format::Json => serde_json::to_string_pretty(&summary)? + "\n",
        Format::Tsv => {
            let mut out = String::from("t\tw\ts\n");
            let rows = if summary.samples.is_empty() {
                summarize(args.family, args.n, &path, 11).samples
            } else {
                summary.samples
            };
            for r in rows {
                let _ = writeln!(out, "{:.6}\t{}\t{:.12}", r.t, fmt_vector(&r.w), r.s);
            }
            out
        }
        Format::Human => {
            let mut out = String::new();
            let shape = if summary.constant {
                "constant path".to_string()
            } else {
                format!(
                    "{} segment(s), length {:.6}",
                    summary.segments.len(),
                    summary.length
                )
            };
            let _ = writeln!(
                out,
                "piece {} of 0..={} ({}): {shape}",
                summary.piece,
                summary.pieces - 1,
                summary.description
            );
            for s in &summary.segments {
                let _ = writeln!(
                    out,
                    "  [{:.6}, {:.6}] {:<18} length {:.6}",
                    s.start, s.end, s.kind, s.length
                );
            }
            let _ = writeln!(out, "start: {}", fmt_point(&summary.start));
            let _ = writeln!(out, "end:   {}", fmt_point(&summary.end));
            let _ = write!(out, "check: {}", summary.check);
            for r in &summary.samples {
                let _ = writeln!(out, "  t={:.6} w={} s={:.9}", r.t, fmt_vector(&r.w), r.s);
            }
            out
        }
    })
}

/// `--seed`, else `PARAMTC_SEED`, else the built-in default.
pub fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        Err(_) => Ok(verify::DEFAULT_SEED),
    }
}

/// Exit status for a verification run: 0 when every suite passed, else 2.
pub fn verdict(outcomes: &[VerificationOutcome]) -> i32 {
    if outcomes.iter().all(VerificationOutcome::passed) {
        0
    } else {
        2
    }
}

fn run_verify(args: &VerifyArgs) -> Result<(i32, String), CliError> {
    let seed = resolve_seed(args.seed)?;
    let wants = |s: Suite| args.suite == Suite::All || args.suite == s;
    let planner_ns = 1..=args.n as usize;
    let mut outcomes = Vec::new();
    if wants(Suite::Oracle) {
        outcomes.push(verify::check_lh_oracle(6));
    }
    if wants(Suite::Tables) {
        outcomes.push(verify::check_bounds_tables(8));
    }
    for n in planner_ns {
        if wants(Suite::Planner) {
            outcomes.push(verify::check_planner(n, args.trials, seed, args.samples));
        }
        if wants(Suite::Partition) {
            outcomes.push(verify::check_partition(n, args.trials, seed));
        }
        if wants(Suite::Gauge) {
            outcomes.push(verify::check_gauge_invariance(
                n,
                args.trials.min(2_000),
                seed,
            ));
        }
        if wants(Suite::Hopf) {
            outcomes.push(verify::check_hopf_planner(n, args.trials.min(2_000), seed));
        }
    }
    let code = verdict(&outcomes);
    let text = match args.format {
        Format::Json => serde_json::to_string_pretty(&outcomes)? + "\n",
        Format::Tsv => {
            let mut out = String::from("suite\tcases\tfailures\tstatus\n");
            for o in &outcomes {
                let status = if o.passed() { "pass" } else { "fail" };
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{status}",
                    o.suite,
                    o.cases,
                    o.failures.len()
                );
            }
            out
        }
        Format::Human => {
            let mut out = format!("seed {seed}\n");
            for o in &outcomes {
                out.push_str(&o.to_string());
            }
            out
        }
    };
    Ok((code, text))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    pub report: TCReport,
}

pub fn table_rows(
    family: Family,
    n_max: u32,
    quantity: Option<QuantityArg>,
) -> Result<Vec<TableRow>, CliError> {
    let quantity = quantity.unwrap_or(default_quantity(Some(family)));
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let ks: Vec<Option<u32>> = match family {
            Family::KEta => (1..=n_max).map(Some).collect(),
            _ => vec![None],
        };
        for k in ks {
            let xi = family_bundle(family, n, k)?;
            rows.push(TableRow {
                n,
                k,
                report: compute(quantity, &xi)?,
            });
        }
    }
    Ok(rows)
}

fn run_table(args: &TableArgs) -> Result<String, CliError> {
    let rows = table_rows(args.family, args.n_max, args.quantity)?;
    Ok(match args.format {
        Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
        Format::Tsv => {
            let mut out = String::from("n\tk\tquantity\tlower\tupper\texact\trules\n");
            for r in &rows {
                let k = r.k.map_or_else(|| "-".to_string(), |k| k.to_string());
                let _ = writeln!(
                    out,
                    "{}\t{k}\t{}\t{}\t{}\t{}\t{}",
                    r.n,
                    r.report.quantity.symbol(),
                    r.report.lower,
                    r.report.upper,
                    r.report.exact,
                    report_rules(&r.report)
                );
            }
            out
        }
        Format::Human => {
            let mut out = String::new();
            for r in &rows {
                let label = match r.k {
                    Some(k) => format!("n={:<2} k={:<2}", r.n, k),
                    None => format!("n={:<2}", r.n),
                };
                let _ = writeln!(out, "{label}  {}", r.report.summary());
            }
            out
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_codes() {
        let mut ok = VerificationOutcome::new("ok");
        ok.cases = 1;
        assert_eq!(verdict(&[ok.clone()]), 0);
        let bad: VerificationOutcome = serde_json::from_str(
            r#"{"suite":"bad","cases":1,"failures":[{"input":"i","invariant":"v","measured":null}],"measurements":{}}"#,
        )
        .unwrap();
        assert_eq!(verdict(&[ok, bad]), 2);
    }

    #[test]
    fn seed_flag_wins() {
        assert_eq!(resolve_seed(Some(5)).unwrap(), 5);
    }

    #[test]
    fn descriptor_tree_builds_sums() {
        let file: DescriptorFile = serde_json::from_str(
            r#"{"base":{"family":"cp","n":3},
                "construction":{"sum":[{"canonical":{}},{"canonical":{}},{"trivial":{"rank":1}}]}}"#,
        )
        .unwrap();
        let xi = build_descriptor(&file).unwrap();
        assert_eq!(xi.rank(), 5);
        assert_eq!(xi.trivial_summands(), 1);
        assert_eq!(file.flags, Flags::default());
    }

    #[test]
    fn descriptor_rejects_unknown_keys() {
        for text in [
            r#"{"base":{"family":"cp","n":2},"construction":{"canonical":{}},"extra":1}"#,
            r#"{"base":{"family":"cp","n":2,"m":1},"construction":{"canonical":{}}}"#,
            r#"{"base":{"family":"cp","n":2},"construction":{"canonical":{"factor":0,"x":1}}}"#,
            r#"{"base":{"family":"cp","n":2},"construction":{"twisted":{}}}"#,
            r#"{"base":{"family":"cp","n":2},"construction":{"canonical":{}},"flags":{"spin":true}}"#,
        ] {
            assert!(
                serde_json::from_str::<DescriptorFile>(text).is_err(),
                "{text}"
            );
        }
    }

    #[test]
    fn descriptor_flags_are_validated() {
        let file: DescriptorFile = serde_json::from_str(
            r#"{"base":{"family":"cp","n":2},"construction":{"canonical":{}},
                "flags":{"independent_sections":1}}"#,
        )
        .unwrap();
        assert!(matches!(build_descriptor(&file), Err(CliError::Bundle(_))));
        let file: DescriptorFile =
            serde_json::from_str(r#"{"base":{"family":"cp","n":2},"construction":{"sum":[]}}"#)
                .unwrap();
        assert!(matches!(
            build_descriptor(&file),
            Err(CliError::Descriptor(_))
        ));
    }

    #[test]
    fn table_rows_cover_grid() {
        let rows = table_rows(Family::KEta, 3, None).unwrap();
        assert_eq!(rows.len(), 9);
        for r in rows {
            assert_eq!(r.report.exact_value(), Some(r.n / r.k.unwrap()));
        }
    }
}
