//! The `holoattr` command line.
//!
//! Every subcommand resolves its parameters from flags and an optional JSON
//! config file (flags win), runs inside a rayon pool of `--threads` workers,
//! writes its artifacts to `--out` and records a `<subcommand>.manifest.json`
//! next to them.

mod commands;
pub mod parse;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::chain::MapSpec;
use crate::error::Error;
use crate::output::to_json_string;

/// Subcommands with the statement each one probes.
pub const SUBCOMMANDS: [(&str, &str); 16] = [
    ("fixed-point", "fixed point location, eigenvalues and classification"),
    ("stable-graph", "local stable manifold of a saddle as a holomorphic graph"),
    ("pullback", "global stable set as the increasing union of pullbacks of the local graph"),
    ("density", "the stable set of a generic volume preserving saddle is dense"),
    ("stability", "local stable graphs depend continuously on the map"),
    ("char-dirs", "characteristic directions of a map tangent to the identity"),
    ("normalize", "normal form (x^2 + 2xy + c y^2, -2xy - y^2) of the quadratic part"),
    ("parabolic-graph", "one point of the attracting set on each vertical fiber of the sector"),
    ("expansion-check", "blow-up map expands vertical distances inside the sector"),
    ("dichotomy", "either a neighbourhood is attracted or orbits leave every ball for m steps"),
    ("interior", "the stable set of a volume preserving saddle has no interior"),
    ("bounded-set", "points with bounded forward orbit"),
    ("gallery", "sphere map z/(1+z) and the planar homeomorphism with non-uniform attraction"),
    ("nonauto-run", "composition orbits, pointwise versus uniform convergence"),
    ("sector-sets", "five disjoint pieces: a ball, K x disc, L x 0, 0 x K, 0 x L"),
    ("report", "index of subcommands"),
];

#[derive(Debug, Parser)]
#[command(name = "holoattr", version, about = "Attracting sets of polynomial automorphisms of C^2")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct GlobalArgs {
    /// Map definition file (JSON).
    #[arg(long, global = true)]
    pub map: Option<PathBuf>,
    /// Output directory [default: out].
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed of the counter-based sampler [default: 0].
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Convergence tolerance of the iterative solvers
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Sector opening (parabolic and sector-set commands)
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    /// Polydisc radius of the local graph, or ball radius for sector-sets
    #[arg(long, global = true)]
    pub delta: Option<f64>,
    /// JSON object of default parameter values; keys are flag names.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Newton search for a fixed point and its classification.
    FixedPoint(FixedPointArgs),
    /// Local stable graph of a saddle by graph transform.
    StableGraph(GraphArgs),
    /// Backward images of the local stable graph.
    Pullback(PullbackArgs),
    /// Box occupancy of the pullback cloud per depth.
    Density(DensityArgs),
    /// Fixed point, graph and cloud distances along a shear perturbation.
    Stability(StabilityArgs),
    /// Characteristic directions of the quadratic part.
    CharDirs(QuadraticArgs),
    /// Conjugate a volume preserving quadratic part to normal form.
    Normalize(NormalizeArgs),
    /// Graph point of the attracting curve over given x in the sector.
    ParabolicGraph(ParabolicGraphArgs),
    /// Sampled expansion inequality of the blow-up map.
    ExpansionCheck(ExpansionArgs),
    /// Witness search for points leaving a ball for m consecutive steps.
    Dichotomy(DichotomyArgs),
    /// Fraction of a ball attracted to a fixed point.
    Interior(InteriorArgs),
    /// Grid cells with bounded forward orbit.
    BoundedSet(BoundedSetArgs),
    /// Closed-form and planar examples.
    Gallery(GalleryArgs),
    /// Orbits of a map sequence and the uniformity report.
    NonautoRun(NonautoArgs),
    /// Membership and disjointness of the five-component set.
    SectorSets(SectorSetsArgs),
    /// List subcommands and summarize the manifests in the output directory.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct FixedPointArgs {
    /// Newton seed `x,y` (complex literals such as `1.4` or `1+0.5i`).
    #[arg(long, allow_hyphen_values = true)]
    pub seed_point: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub max_iter: Option<usize>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct GraphArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub seed_point: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub n_r: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub n_theta: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub max_iter: Option<usize>,
    /// Halve delta until the graph transform contracts.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub auto: Option<bool>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct PullbackArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub graph: GraphArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub depth: Option<usize>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct DensityArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub graph: GraphArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub depth: Option<usize>,
    /// Half width of the box `[-h, h]^4`.
    #[arg(long, allow_hyphen_values = true)]
    pub box_half: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub cells: Option<usize>,
    /// Projection plane for a PPM image, e.g. `rex,rey`.
    #[arg(long, allow_hyphen_values = true)]
    pub plane: Option<String>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct StabilityArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub graph: GraphArgs,
    /// Comma-separated perturbation sizes.
    #[arg(long, allow_hyphen_values = true)]
    pub t_values: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub depth: Option<usize>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct QuadraticArgs {
    /// Use the normal-form quadratic part with this `c` instead of `--map`.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct NormalizeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub quad: QuadraticArgs,
    /// Index into the characteristic directions [default: first non-degenerate].
    #[arg(long, allow_hyphen_values = true)]
    pub index: Option<usize>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct ParabolicGraphArgs {
    /// Normal-form parameter of the built-in map (real).
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    /// Coefficient of the cubic shear `y += kappa x^3` added to the jet.
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: Option<f64>,
    /// Comma-separated base points `x`.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub resolution: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub max_iter: Option<usize>,
    /// Steps over which sector residence is checked.
    #[arg(long, allow_hyphen_values = true)]
    pub horizon: Option<usize>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct ExpansionArgs {
    /// Normal-form automorphism parameter when `--map` is absent.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub trials: Option<usize>,
    /// Comma-separated epsilon candidates; reports the largest passing one.
    #[arg(long, allow_hyphen_values = true)]
    pub calibrate: Option<String>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct DichotomyArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub seed_point: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub radius: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub m_max: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub samples: Option<usize>,
    /// Allow attracting fixed points (control runs).
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub control: Option<bool>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct InteriorArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub seed_point: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub radius: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub samples: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub max_iter: Option<usize>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct BoundedSetArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub box_half: Option<f64>,
    /// Cells per axis: one number or four comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    pub cells: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub max_iter: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub plane: Option<String>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct GalleryArgs {
    /// `sphere`, `planar` or `witness`.
    #[arg(long, allow_hyphen_values = true)]
    pub example: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<u64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct NonautoArgs {
    /// Sequence definition file (JSON).
    #[arg(long, allow_hyphen_values = true)]
    pub sequence: Option<PathBuf>,
    /// Built-in family, used when `--sequence` is absent.
    #[arg(long, allow_hyphen_values = true)]
    pub family: Option<String>,
    /// JSON object of family parameters.
    #[arg(long, allow_hyphen_values = true)]
    pub params: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub start: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub box_half: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub cells: Option<usize>,
    /// Add the planar non-uniformity witnesses to the report points.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub witnesses: Option<bool>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct SectorSetsArgs {
    /// Outer radius `R`.
    #[arg(long = "big-r")]
    pub big_r: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub rho: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub samples: Option<usize>,
    /// Semicolon-separated points to classify.
    #[arg(long, allow_hyphen_values = true)]
    pub points: Option<String>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct ReportArgs {
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub list: Option<bool>,
}

#[derive(Debug)]
pub enum CliError {
    Domain(Error),
    Io(String),
    Config(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Io(_) | CliError::Config(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Domain(e) => write!(f, "{}: {e}", e.name()),
            CliError::Io(m) => write!(f, "io: {m}"),
            CliError::Config(m) => write!(f, "config: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::MapFormat(m) => CliError::Config(format!("map definition: {m}")),
            other => CliError::Domain(other),
        }
    }
}

pub(crate) fn config_err(m: impl Into<String>) -> CliError {
    CliError::Config(m.into())
}

/// An input file with its content hash.
#[derive(Debug, Clone, Serialize)]
pub struct InputRecord {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub inputs: Vec<InputRecord>,
    pub seed: u64,
    /// Effective parameters after merging config and flags.
    pub params: Value,
    /// Values given on the command line.
    pub flags: Value,
    /// Values taken from the config file.
    pub config: Value,
    pub artifacts: Vec<String>,
    pub threads: usize,
    pub wall_time_s: f64,
}

/// Output of one subcommand before it is written.
pub struct Outcome {
    pub summary: String,
    pub artifacts: Vec<(String, Vec<u8>)>,
}

/// Shared state of a run: resolved global flags and the hashed inputs.
pub struct Ctx {
    pub global: GlobalArgs,
    pub inputs: Vec<InputRecord>,
}

impl Ctx {
    pub fn seed(&self) -> u64 {
        self.global.seed.unwrap_or(0)
    }

    pub fn read_input(&mut self, role: &str, path: &Path) -> Result<Vec<u8>, CliError> {
        let bytes = fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        self.inputs.push(InputRecord {
            role: role.to_string(),
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        Ok(bytes)
    }

    pub fn map_path(&self) -> Option<PathBuf> {
        self.global.map.clone()
    }

    pub fn load_map(&mut self) -> Result<MapSpec, CliError> {
        let path = self.map_path().ok_or_else(|| config_err("--map is required"))?;
        let bytes = self.read_input("map", &path)?;
        let text = String::from_utf8(bytes).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
        Ok(MapSpec::from_json_str(&text)?)
    }

    /// Hash of the map input, used as the chain id of point clouds.
    pub fn map_id(&self) -> String {
        self.inputs
            .iter()
            .find(|i| i.role == "map")
            .map(|i| i.sha256[..16].to_string())
            .unwrap_or_default()
    }
}

fn normalize_keys(m: &Map<String, Value>) -> Map<String, Value> {
    m.iter().map(|(k, v)| (k.replace('-', "_"), v.clone())).collect()
}

/// Fills the unset fields of `flags` from `config`; returns the merged
/// value and the part that came from the config.
fn merge<T: Serialize + DeserializeOwned>(flags: &T, config: &Map<String, Value>) -> Result<(T, Map<String, Value>), CliError> {
    let mut v = serde_json::to_value(flags).map_err(|e| config_err(e.to_string()))?;
    let mut used = Map::new();
    if let Value::Object(m) = &mut v {
        for (k, val) in m.iter_mut() {
            if val.is_null() {
                if let Some(cv) = config.get(k) {
                    *val = cv.clone();
                    used.insert(k.clone(), cv.clone());
                }
            }
        }
    }
    let merged = serde_json::from_value(v).map_err(|e| config_err(format!("bad config value: {e}")))?;
    Ok((merged, used))
}

fn non_null(v: Value) -> Value {
    match v {
        Value::Object(m) => Value::Object(m.into_iter().filter(|(_, v)| !v.is_null()).collect()),
        other => other,
    }
}

fn extend(into: &mut Map<String, Value>, v: Value) {
    if let Value::Object(m) = v {
        into.extend(m);
    }
}

macro_rules! dispatch {
    ($cmd:expr, $cfg:expr, $used:expr, $flags:expr, $params:expr, { $($var:ident),* $(,)? }) => {
        match $cmd {
            $(Command::$var(a) => {
                extend(&mut $flags, non_null(serde_json::to_value(a).map_err(|e| config_err(e.to_string()))?));
                let (m, u) = merge(a, $cfg)?;
                $used.extend(u);
                extend(&mut $params, non_null(serde_json::to_value(&m).map_err(|e| config_err(e.to_string()))?));
                Command::$var(m)
            })*
        }
    };
}

fn subcommand_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::FixedPoint(_) => "fixed-point",
        Command::StableGraph(_) => "stable-graph",
        Command::Pullback(_) => "pullback",
        Command::Density(_) => "density",
        Command::Stability(_) => "stability",
        Command::CharDirs(_) => "char-dirs",
        Command::Normalize(_) => "normalize",
        Command::ParabolicGraph(_) => "parabolic-graph",
        Command::ExpansionCheck(_) => "expansion-check",
        Command::Dichotomy(_) => "dichotomy",
        Command::Interior(_) => "interior",
        Command::BoundedSet(_) => "bounded-set",
        Command::Gallery(_) => "gallery",
        Command::NonautoRun(_) => "nonauto-run",
        Command::SectorSets(_) => "sector-sets",
        Command::Report(_) => "report",
    }
}

/// Runs a parsed command line; returns the summary line.
pub fn run(cli: Cli) -> Result<String, CliError> {
    let start = Instant::now();
    let name = subcommand_name(&cli.command);
    let mut inputs = Vec::new();

    // config: top-level scalars, overridden by a section named after the subcommand
    let mut cfg = Map::new();
    let mut config_record = Value::Null;
    if let Some(path) = &cli.global.config {
        let bytes = fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        inputs.push(InputRecord {
            role: "config".into(),
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        let v: Value = serde_json::from_slice(&bytes).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
        let Value::Object(top) = v else {
            return Err(config_err("config file must hold a JSON object"));
        };
        let top = normalize_keys(&top);
        cfg.extend(top.iter().filter(|(_, v)| !v.is_object()).map(|(k, v)| (k.clone(), v.clone())));
        if let Some(Value::Object(sec)) = top.get(&name.replace('-', "_")) {
            cfg.extend(normalize_keys(sec));
        }
    }

    let mut flags = Map::new();
    let mut params = Map::new();
    let mut used = Map::new();
    extend(&mut flags, non_null(serde_json::to_value(&cli.global).map_err(|e| config_err(e.to_string()))?));
    let (global, u) = merge(&cli.global, &cfg)?;
    used.extend(u);
    let global = GlobalArgs {
        config: cli.global.config.clone(),
        ..global
    };
    let threads = global.threads.unwrap_or(0);
    let mut g = serde_json::to_value(&global).map_err(|e| config_err(e.to_string()))?;
    if let Value::Object(m) = &mut g {
        // thread count and output directory do not change results
        m.remove("threads");
        m.remove("out");
    }
    extend(&mut params, non_null(g));
    let command = dispatch!(&cli.command, &cfg, used, flags, params, {
        FixedPoint, StableGraph, Pullback, Density, Stability, CharDirs, Normalize, ParabolicGraph,
        ExpansionCheck, Dichotomy, Interior, BoundedSet, Gallery, NonautoRun, SectorSets, Report,
    });
    if !used.is_empty() {
        config_record = Value::Object(used);
    }

    let out_dir = global.out.clone().unwrap_or_else(|| PathBuf::from("out"));
    let mut ctx = Ctx { global, inputs };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| config_err(format!("thread pool: {e}")))?;
    let outcome = pool.install(|| commands::execute(&command, &mut ctx, &out_dir))?;

    fs::create_dir_all(&out_dir).map_err(|e| CliError::Io(format!("{}: {e}", out_dir.display())))?;
    let mut artifacts = Vec::new();
    for (file, bytes) in &outcome.artifacts {
        let p = out_dir.join(file);
        fs::write(&p, bytes).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
        artifacts.push(file.clone());
    }
    let manifest = RunManifest {
        subcommand: name.to_string(),
        seed: ctx.seed(),
        inputs: ctx.inputs,
        params: Value::Object(params),
        flags: Value::Object(flags),
        config: config_record,
        artifacts,
        threads: pool.current_num_threads(),
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    let mpath = out_dir.join(format!("{name}.manifest.json"));
    fs::write(&mpath, to_json_string(&manifest)).map_err(|e| CliError::Io(format!("{}: {e}", mpath.display())))?;
    Ok(outcome.summary)
}

/// Parses `args`, runs, prints and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let name = subcommand_name(&cli.command);
    match run(cli) {
        Ok(summary) => {
            println!("{summary}");
            0
        }
        Err(e) => {
            eprintln!("{name}: error {e}");
            e.exit_code()
        }
    }
}

pub(crate) fn json_artifact<T: Serialize + ?Sized>(name: &str, value: &T) -> (String, Vec<u8>) {
    (name.to_string(), to_json_string(value).into_bytes())
}

pub(crate) fn anchors_json() -> Value {
    Value::Array(
        SUBCOMMANDS
            .iter()
            .map(|(n, a)| json!({"subcommand": n, "anchor": a}))
            .collect(),
    )
}
