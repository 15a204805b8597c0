//! The `hardcore` command-line surface.
//!
//! Every run writes its data files plus one `<command>.manifest.json` into
//! the output directory. Exit codes: 0 success, 1 assertion or statistical
//! failure, 2 usage or guard error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::approx::{self, EpsilonParam, Regime};
use crate::cutset::{self, enumerate_omcut, CutsetRecord};
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::gibbs::BoundaryCondition;
use crate::lattice::{LatticeBox, Vertex};
use crate::sampler;
use crate::verify::{self, SuiteReport};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "HARDCORE_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "hardcore-out";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "hardcore", version, about = "Hard-core lattice gas verification lab")]
pub struct Cli {
    /// Master seed for every randomised step [default: 0].
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory [default: $HARDCORE_OUT_DIR or ./hardcore-out].
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// `key = value` file supplying `seed` and `out-dir`; flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Re-run the command recorded in a manifest.
    #[arg(long)]
    pub replay: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Run exhaustive invariant suites on a small box.
    Verify(VerifyArgs),
    /// Enumerate odd minimal cutsets as NDJSON.
    Enumerate(EnumerateArgs),
    /// Estimate the occupation probability of a site by perfect sampling.
    Sample(SampleArgs),
    /// Count direction-code tuples N(R, E).
    CensusNgamma(NGammaArgs),
    /// Count distinct interior approximations per cutset length.
    CensusFamily(FamilyArgs),
    /// Render perfect samples as SVG with their Break cutsets.
    Snapshot(SnapshotArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Verify(_) => "verify",
            Command::Enumerate(_) => "enumerate",
            Command::Sample(_) => "sample",
            Command::CensusNgamma(_) => "census-ngamma",
            Command::CensusFamily(_) => "census-family",
            Command::Snapshot(_) => "snapshot",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Props,
    Transforms,
    Approx,
    All,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Emit {
    Csv,
    Svg,
    Both,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct BoxArgs {
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Anchor vertex as comma-separated coordinates [default: origin].
    #[arg(long)]
    pub x: Option<String>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    #[command(flatten)]
    #[serde(flatten)]
    pub geometry: BoxArgs,
    /// Activities, e.g. `1/2,1,2`.
    #[arg(long, value_delimiter = ',', default_value = "1/2,1,2")]
    pub lambda: Vec<String>,
    /// Epsilons for the approximation suite (extended regime).
    #[arg(long, value_delimiter = ',', default_value = "3/10,1/2")]
    pub epsilon: Vec<String>,
    /// Seeds per (cutset, epsilon) in the approximation suite.
    #[arg(long, default_value_t = 100)]
    pub seeds: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct EnumerateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub geometry: BoxArgs,
    /// Keep cutsets with exactly this many edges.
    #[arg(long)]
    pub length: Option<usize>,
    /// Keep cutsets in OMCut(eps).
    #[arg(long)]
    pub epsilon: Option<String>,
    /// Keep cutsets with |E_1| = M (needs --r).
    #[arg(long, requires = "r")]
    pub m: Option<usize>,
    /// Keep cutsets with R(E_1) = R (needs --m).
    #[arg(long, requires = "m")]
    pub r: Option<u64>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SampleArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub geometry: BoxArgs,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub lambda: Vec<String>,
    #[arg(long, default_value = "odd")]
    pub bc: String,
    /// Number of perfect samples per activity.
    #[arg(long, default_value_t = 1000)]
    pub samples: u64,
    #[arg(long, value_enum, default_value = "csv")]
    pub emit: Emit,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct NGammaArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub geometry: BoxArgs,
    /// Regularity values R [default: 0..=8].
    #[arg(long, value_delimiter = ',')]
    pub r: Vec<u64>,
    /// Vertex set E as `x,y;x,y`; repeat for several sets [default: every
    /// singleton of boundary vertices].
    #[arg(long)]
    pub set: Vec<String>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FamilyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub geometry: BoxArgs,
    #[arg(long, value_delimiter = ',', default_value = "3/10,1/2")]
    pub epsilon: Vec<String>,
    /// Cutset lengths L [default: every length that occurs].
    #[arg(long, value_delimiter = ',')]
    pub length: Vec<usize>,
    /// Accept 0 < eps < d^(-1/2).
    #[arg(long)]
    pub extended: bool,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SnapshotArgs {
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    #[arg(long, value_delimiter = ',', default_value = "1,5")]
    pub lambda: Vec<String>,
    #[arg(long, default_value = "odd")]
    pub bc: String,
    /// Omit the Break cutset overlay.
    #[arg(long)]
    pub no_overlay: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Subcommand arguments, enough to re-run together with `seed`.
    pub argv: Vec<String>,
    pub parameters: serde_json::Value,
    pub seed: u64,
    pub version: String,
    pub out_dir: String,
    pub started: String,
    pub finished: String,
    pub exit_code: i32,
    /// Output files, relative to `out_dir`.
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn file_name(command: &str) -> String {
        format!("{command}.manifest.json")
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }
}

/// Resolved global settings.
#[derive(Clone, Debug)]
pub struct Settings {
    pub seed: u64,
    pub out_dir: PathBuf,
}

/// Parses a `key = value` file; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("config line {}: expected key = value", no + 1)))?;
        let key = k.trim().replace('_', "-");
        if !matches!(key.as_str(), "seed" | "out-dir") {
            return Err(Error::Parse(format!("config line {}: unknown key {key:?}", no + 1)));
        }
        out.insert(key, v.trim().to_string());
    }
    Ok(out)
}

fn resolve_settings(cli: &Cli, fallback_out: Option<&str>) -> Result<Settings> {
    let config = match &cli.config {
        Some(p) => parse_config(&fs::read_to_string(p)?)?,
        None => BTreeMap::new(),
    };
    let seed = match (cli.seed, config.get("seed")) {
        (Some(s), _) => s,
        (None, Some(s)) => s
            .parse()
            .map_err(|_| Error::Parse(format!("config seed {s:?} is not an unsigned integer")))?,
        (None, None) => 0,
    };
    let out_dir = cli
        .out_dir
        .clone()
        .or_else(|| config.get("out-dir").map(PathBuf::from))
        .or_else(|| fallback_out.map(PathBuf::from))
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
    Ok(Settings { seed, out_dir })
}

/// Exit code for an error: 2 for anything the caller could fix by changing
/// the request, 1 otherwise.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Io(_) | Error::Json(_) | Error::Csv(_) | Error::Coalescence { .. } | Error::RetryCap(_) => EXIT_FAILURE,
        _ => EXIT_USAGE,
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli, &args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn dispatch(cli: Cli, args: &[OsString]) -> Result<i32> {
    if let Some(path) = &cli.replay {
        if cli.command.is_some() {
            return Err(Error::InvalidParameter("--replay cannot be combined with a subcommand".into()));
        }
        let manifest = RunManifest::load(path)?;
        let mut argv: Vec<OsString> = vec![args.first().cloned().unwrap_or_else(|| "hardcore".into())];
        argv.push("--seed".into());
        argv.push(manifest.seed.to_string().into());
        argv.extend(manifest.argv.iter().map(OsString::from));
        let replayed = Cli::try_parse_from(&argv).map_err(|e| Error::MalformedInput(format!("manifest arguments: {e}")))?;
        let command = replayed
            .command
            .clone()
            .ok_or_else(|| Error::MalformedInput("manifest has no command".into()))?;
        let settings = Settings {
            seed: manifest.seed,
            out_dir: resolve_settings(&cli, Some(&manifest.out_dir))?.out_dir,
        };
        return execute(&command, &settings, manifest.argv.clone());
    }
    let Some(command) = cli.command.clone() else {
        return Err(Error::InvalidParameter("a subcommand or --replay is required".into()));
    };
    let settings = resolve_settings(&cli, None)?;
    execute(&command, &settings, subcommand_argv(args))
}

/// The arguments from the subcommand name onward, with global flags
/// removed.
fn subcommand_argv(args: &[OsString]) -> Vec<String> {
    let strings: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let mut out = Vec::new();
    let mut i = 0;
    let mut started = false;
    while i < strings.len() {
        let a = &strings[i];
        let global = ["--seed", "--out-dir", "--config"]
            .iter()
            .find(|g| a == *g || a.starts_with(&format!("{g}=")));
        match global {
            Some(g) if a == *g => i += 2,
            Some(_) => i += 1,
            None => {
                started |= !a.starts_with('-');
                if started {
                    out.push(a.clone());
                }
                i += 1;
            }
        }
    }
    out
}

/// What a command produced.
struct Outcome {
    outputs: Vec<String>,
    success: bool,
}

fn execute(command: &Command, settings: &Settings, argv: Vec<String>) -> Result<i32> {
    let started = chrono::Utc::now().to_rfc3339();
    fs::create_dir_all(&settings.out_dir)?;
    let outcome = match command {
        Command::Verify(a) => cmd_verify(a, settings)?,
        Command::Enumerate(a) => cmd_enumerate(a, settings)?,
        Command::Sample(a) => cmd_sample(a, settings)?,
        Command::CensusNgamma(a) => cmd_census_ngamma(a, settings)?,
        Command::CensusFamily(a) => cmd_census_family(a, settings)?,
        Command::Snapshot(a) => cmd_snapshot(a, settings)?,
    };
    let exit_code = if outcome.success { EXIT_OK } else { EXIT_FAILURE };
    let manifest = RunManifest {
        command: command.name().to_string(),
        argv,
        parameters: serde_json::to_value(command)?,
        seed: settings.seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        out_dir: settings.out_dir.to_string_lossy().into_owned(),
        started,
        finished: chrono::Utc::now().to_rfc3339(),
        exit_code,
        outputs: outcome.outputs,
    };
    let path = settings.out_dir.join(RunManifest::file_name(command.name()));
    fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n")?;
    Ok(exit_code)
}

pub fn parse_vertex(s: &str) -> Result<Vertex> {
    let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
    let coords = inner
        .split(',')
        .map(|c| c.trim().parse::<i32>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| Error::Parse(format!("not a vertex: {s:?}")))?;
    Ok(Vertex::new(coords))
}

/// Parses `x,y;x,y` into a vertex list; the empty string is the empty set.
pub fn parse_vertex_set(s: &str) -> Result<Vec<Vertex>> {
    s.split(';').filter(|p| !p.trim().is_empty()).map(parse_vertex).collect()
}

fn parse_rationals(values: &[String]) -> Result<Vec<Rational>> {
    values.iter().map(|v| exact::parse_rational(v)).collect()
}

fn geometry(args: &BoxArgs) -> Result<(LatticeBox, Vertex)> {
    let lattice = LatticeBox::new(args.d, args.n)?;
    let x = match &args.x {
        Some(s) => parse_vertex(s)?,
        None => Vertex::origin(args.d),
    };
    lattice.check_dim(&x)?;
    if !lattice.contains(&x) {
        return Err(Error::OutsideBox(x));
    }
    Ok((lattice, x))
}

/// `1/2` becomes `1_2`, so activities can appear in file names.
fn file_tag(r: &Rational) -> String {
    exact::format_fraction(r).replace('/', "_")
}

fn create(settings: &Settings, name: &str) -> Result<BufWriter<fs::File>> {
    Ok(BufWriter::new(fs::File::create(settings.out_dir.join(name))?))
}

fn cmd_verify(args: &VerifyArgs, settings: &Settings) -> Result<Outcome> {
    let (lattice, x) = geometry(&args.geometry)?;
    verify::check_suite_box(&lattice)?;
    let lambdas = parse_rationals(&args.lambda)?;
    let epsilons = parse_rationals(&args.epsilon)?;
    if lambdas.is_empty() || lambdas.iter().any(|l| !exact::is_positive(l)) {
        return Err(Error::InvalidParameter("activities must be positive".into()));
    }
    for e in &epsilons {
        EpsilonParam::extended(e.clone(), lattice.d)?;
    }
    let wants = |s: Suite| args.suite == s || args.suite == Suite::All;
    let mut reports: Vec<SuiteReport> = Vec::new();
    if wants(Suite::Props) {
        reports.push(verify::break_suite(lattice, &x)?);
    }
    if wants(Suite::Transforms) {
        reports.push(verify::transform_suite(lattice, &x, &lambdas)?);
        reports.push(verify::break_bound_suite(lattice, &x, &lambdas)?);
    }
    if wants(Suite::Approx) {
        reports.push(verify::approx_suite(lattice, &x, &epsilons, args.seeds, settings.seed)?);
    }
    if args.suite == Suite::All {
        reports.push(verify::counting_suite(settings.seed)?);
    }
    let name = format!("verify-{}.txt", format!("{:?}", args.suite).to_lowercase());
    let mut out = create(settings, &name)?;
    writeln!(out, "box {lattice}, x = {x}, seed {}", settings.seed)?;
    for r in &reports {
        out.write_all(r.render().as_bytes())?;
        let verdict = if r.passed() { "PASS" } else { "FAIL" };
        println!("{verdict} {} ({} cases, {} failures)", r.suite, r.cases(), r.failures());
    }
    out.flush()?;
    Ok(Outcome {
        outputs: vec![name],
        success: reports.iter().all(SuiteReport::passed),
    })
}

fn cmd_enumerate(args: &EnumerateArgs, settings: &Settings) -> Result<Outcome> {
    let (lattice, x) = geometry(&args.geometry)?;
    let eps = args.epsilon.as_deref().map(exact::parse_rational).transpose()?;
    let mut kept = Vec::new();
    for gamma in enumerate_omcut(lattice, &x)? {
        if args.length.is_some_and(|l| gamma.len() != l) {
            continue;
        }
        if let Some(e) = &eps {
            if !cutset::omcut_class(&gamma, e)? {
                continue;
            }
        }
        if let (Some(m), Some(r)) = (args.m, args.r) {
            if gamma.e1().len() != m || gamma.regularity(gamma.e1()) != r {
                continue;
            }
        }
        kept.push(gamma);
    }
    let name = format!("omcut-d{}-n{}.ndjson", lattice.d, lattice.n);
    let mut out = create(settings, &name)?;
    for gamma in &kept {
        serde_json::to_writer(&mut out, &CutsetRecord::from(gamma))?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    println!("{}", serde_json::json!({ "count": kept.len(), "output": name }));
    Ok(Outcome {
        outputs: vec![name],
        success: true,
    })
}

fn cmd_sample(args: &SampleArgs, settings: &Settings) -> Result<Outcome> {
    let (lattice, x) = geometry(&args.geometry)?;
    let bc: BoundaryCondition = args.bc.parse()?;
    let lambdas = parse_rationals(&args.lambda)?;
    if args.samples == 0 {
        return Err(Error::InvalidParameter("at least one sample is required".into()));
    }
    let mut outputs = Vec::new();
    let mut failures = 0;
    if matches!(args.emit, Emit::Csv | Emit::Both) {
        let mut rows = Vec::new();
        for lambda in &lambdas {
            let row = sampler::estimate_occupancy(lattice, bc, lambda, &x, args.samples, settings.seed)?;
            println!(
                "lambda {}: estimate {:.6} +- {:.6} over {} samples, {} failures",
                row.lambda, row.estimate, row.std_error, row.samples, row.failures
            );
            failures += row.failures;
            rows.push(row);
        }
        let name = "estimates.csv".to_string();
        sampler::write_estimates_csv(&rows, create(settings, &name)?)?;
        outputs.push(name);
    }
    if matches!(args.emit, Emit::Svg | Emit::Both) {
        for lambda in &lambdas {
            let omega = match sampler::cftp_sample(lattice, bc, lambda, settings.seed) {
                Ok(o) => o,
                Err(e @ Error::Coalescence { .. }) => {
                    eprintln!("lambda {}: {e}", exact::format_fraction(lambda));
                    failures += 1;
                    continue;
                }
                Err(e) => return Err(e),
            };
            let overlays = if bc == BoundaryCondition::OddOccupied {
                sampler::all_breaks(&omega)?
            } else {
                Vec::new()
            };
            let name = format!("sample-d{}-n{}-lambda{}.svg", lattice.d, lattice.n, file_tag(lambda));
            fs::write(settings.out_dir.join(&name), sampler::render_snapshot(&omega, &overlays)?)?;
            outputs.push(name);
        }
    }
    Ok(Outcome {
        outputs,
        success: failures == 0,
    })
}

#[derive(Serialize)]
struct NGammaRow {
    r: u64,
    set: String,
    count: u64,
    bound: String,
    within_bound: bool,
}

fn cmd_census_ngamma(args: &NGammaArgs, settings: &Settings) -> Result<Outcome> {
    let (lattice, x) = geometry(&args.geometry)?;
    if lattice.d != 2 || lattice.n > cutset::OMCUT_MAX_N {
        return Err(Error::Guard(format!("census needs d = 2 and n <= {}, got {lattice}", cutset::OMCUT_MAX_N)));
    }
    let cutsets = enumerate_omcut(lattice, &x)?;
    let rs: Vec<u64> = if args.r.is_empty() {
        (0..=approx::NGAMMA_MAX_R).collect()
    } else {
        args.r.clone()
    };
    let sets: Vec<Vec<Vertex>> = if args.set.is_empty() {
        let mut boundary: Vec<Vertex> = cutsets
            .iter()
            .flat_map(|g| g.e0_vertices().into_iter().chain(g.e1_vertices()))
            .collect();
        boundary.sort();
        boundary.dedup();
        boundary.into_iter().map(|v| vec![v]).collect()
    } else {
        args.set.iter().map(|s| parse_vertex_set(s)).collect::<Result<_>>()?
    };
    for set in &sets {
        for v in set {
            lattice.check_dim(v)?;
        }
    }
    let name = "census-ngamma.csv".to_string();
    let mut w = csv::Writer::from_writer(create(settings, &name)?);
    let mut ok = true;
    for &r in &rs {
        for set in &sets {
            let c = approx::census_ngamma_over(&cutsets, r, set)?;
            ok &= c.within_bound;
            let label = set.iter().map(ToString::to_string).collect::<Vec<_>>().join(";");
            w.serialize(NGammaRow {
                r,
                set: label,
                count: c.count,
                bound: c.bound,
                within_bound: c.within_bound,
            })?;
        }
    }
    w.flush()?;
    println!("{} rows, all within bound: {ok}", rs.len() * sets.len());
    Ok(Outcome {
        outputs: vec![name],
        success: ok,
    })
}

fn cmd_census_family(args: &FamilyArgs, settings: &Settings) -> Result<Outcome> {
    let (lattice, x) = geometry(&args.geometry)?;
    let regime = if args.extended { Regime::Extended } else { Regime::Paper };
    let epsilons = parse_rationals(&args.epsilon)?
        .into_iter()
        .map(|e| EpsilonParam::new(e, lattice.d, regime))
        .collect::<Result<Vec<_>>>()?;
    let lengths: Vec<usize> = if args.length.is_empty() {
        if lattice.d != 2 || lattice.n > cutset::OMCUT_MAX_N {
            return Err(Error::Guard(format!("census needs d = 2 and n <= {}, got {lattice}", cutset::OMCUT_MAX_N)));
        }
        let mut ls: Vec<usize> = enumerate_omcut(lattice, &x)?.iter().map(|g| g.len()).collect();
        ls.dedup();
        ls
    } else {
        args.length.clone()
    };
    let mut rows = Vec::new();
    for eps in &epsilons {
        for &l in &lengths {
            rows.push(approx::family_census(lattice, &x, eps, l, settings.seed)?);
        }
    }
    let name = "census-family.csv".to_string();
    approx::write_family_csv(&rows, create(settings, &name)?)?;
    let valid = rows.iter().all(|r| r.all_valid);
    println!("{} rows, all approximations valid: {valid}", rows.len());
    Ok(Outcome {
        outputs: vec![name],
        success: valid,
    })
}

#[derive(Serialize)]
struct SnapshotRow {
    lambda: String,
    odd_fraction: f64,
    occupied: usize,
    epochs: u32,
    sweeps: u64,
    cutsets: usize,
}

fn cmd_snapshot(args: &SnapshotArgs, settings: &Settings) -> Result<Outcome> {
    let lattice = LatticeBox::new(2, args.n)?;
    let bc: BoundaryCondition = args.bc.parse()?;
    let lambdas = parse_rationals(&args.lambda)?;
    let mut outputs = Vec::new();
    let mut rows = Vec::new();
    let mut success = true;
    for lambda in &lambdas {
        let (omega, stats) = match sampler::cftp_sample_indexed(lattice, bc, lambda, settings.seed, 0) {
            Ok(s) => s,
            Err(e @ Error::Coalescence { .. }) => {
                eprintln!("lambda {}: {e}", exact::format_fraction(lambda));
                success = false;
                continue;
            }
            Err(e) => return Err(e),
        };
        let overlays = if !args.no_overlay && bc == BoundaryCondition::OddOccupied {
            sampler::all_breaks(&omega)?
        } else {
            Vec::new()
        };
        let name = format!("snapshot-n{}-lambda{}.svg", args.n, file_tag(lambda));
        fs::write(settings.out_dir.join(&name), sampler::render_snapshot(&omega, &overlays)?)?;
        outputs.push(name);
        rows.push(SnapshotRow {
            lambda: exact::format_fraction(lambda),
            odd_fraction: sampler::odd_occupied_fraction(&omega),
            occupied: omega.occupied_count(),
            epochs: stats.epochs,
            sweeps: stats.sweeps,
            cutsets: overlays.len(),
        });
    }
    let name = format!("snapshot-n{}.csv", args.n);
    let mut w = csv::Writer::from_writer(create(settings, &name)?);
    for row in &rows {
        println!("lambda {}: odd fraction {:.4}, {} sweeps", row.lambda, row.odd_fraction, row.sweeps);
        w.serialize(row)?;
    }
    w.flush()?;
    outputs.push(name);
    Ok(Outcome { outputs, success })
}
