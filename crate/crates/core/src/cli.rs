//! The `a2g-los` command line.
//!
//! Every subcommand is computed in full by [`execute`] into an [`Output`]
//! (stdout text plus named files) before anything is written, so a failing
//! run leaves no partial CSV behind. Files are written to a temporary
//! sibling and renamed into place.
//!
//! Exit codes: 0 success, 2 usage error, 1 runtime error.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analytic::{elevation_threshold, LosModel, McdSearch};
use crate::approx::{p_los_approx, ApproxModel, ApproxParams, Mlp, FIVE_GCM, THREE_GPP};
use crate::environment::{Environment, ScenarioTable};
use crate::fit::{self, TrainConfig};
use crate::geometry::FresnelSpec;
use crate::rt_sim::{self, Layout, RingEstimate, SimConfig};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Worker-count variable; 0 or unset means one thread per core.
pub const THREADS_ENV: &str = "A2G_LOS_THREADS";

#[derive(Debug, Parser)]
#[command(name = "a2g-los", version, about = "LoS probability for air-to-ground links")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form LoS probability against distance or elevation.
    Analytic(AnalyticArgs),
    /// Build the (delta_h, D1, D2) dataset and train both networks.
    Fit(FitArgs),
    /// Monte-Carlo LoS probability over synthesized scenes.
    Simulate(SimulateArgs),
    /// Simulation next to the analytic and approximate models.
    Compare(CompareArgs),
    /// Write one synthesized scene as CSV.
    Scene(SceneArgs),
}

/// Inclusive `start:stop:step` grid, or a single value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        if self.step == 0.0 {
            return vec![self.start];
        }
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|k| self.start + k as f64 * self.step).collect()
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("'{t}' is not a number"))
        };
        let parts: Vec<&str> = s.split(':').collect();
        let grid = match parts[..] {
            [v] => {
                let v = num(v)?;
                Grid {
                    start: v,
                    stop: v,
                    step: 0.0,
                }
            }
            [a, b, c] => Grid {
                start: num(a)?,
                stop: num(b)?,
                step: num(c)?,
            },
            _ => return Err(format!("expected start:stop:step or a single value, got '{s}'")),
        };
        if grid.stop < grid.start {
            return Err(format!("grid '{s}' has stop < start"));
        }
        if grid.step < 0.0 || (grid.step == 0.0 && grid.stop != grid.start) {
            return Err(format!("grid '{s}' needs a positive step"));
        }
        Ok(grid)
    }
}

impl std::fmt::Display for Grid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.step == 0.0 {
            write!(f, "{}", self.start)
        } else {
            write!(f, "{}:{}:{}", self.start, self.stop, self.step)
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct EnvArgs {
    /// Preset name from the scenario table (suburban, urban, dense-urban, high-rise).
    #[arg(long, conflicts_with_all = ["alpha", "beta", "gamma"])]
    pub scenario: Option<String>,
    /// Scenario table replacing the bundled one (`name alpha beta gamma` per line).
    #[arg(long)]
    pub scenario_file: Option<PathBuf>,
    /// Built-up land fraction.
    #[arg(long, requires_all = ["beta", "gamma"])]
    pub alpha: Option<f64>,
    /// Buildings per square kilometer.
    #[arg(long, requires_all = ["alpha", "gamma"])]
    pub beta: Option<f64>,
    /// Rayleigh height scale in meters.
    #[arg(long, requires_all = ["alpha", "beta"])]
    pub gamma: Option<f64>,
}

impl EnvArgs {
    fn resolve(&self) -> Result<(String, Environment), CliError> {
        if let (Some(a), Some(b), Some(g)) = (self.alpha, self.beta, self.gamma) {
            let env = Environment::new(a, b, g).map_err(|e| CliError::Usage(e.to_string()))?;
            return Ok(("custom".into(), env));
        }
        let name = self.scenario.as_deref().unwrap_or("urban");
        let table = match &self.scenario_file {
            Some(p) => ScenarioTable::load(p)?,
            None => ScenarioTable::bundled(),
        };
        let env = table
            .get(name)
            .ok_or_else(|| CliError::Usage(format!("unknown scenario '{name}'")))?;
        Ok((name.to_ascii_lowercase(), env))
    }
}

#[derive(Debug, Clone, Args)]
pub struct FreqArgs {
    /// Carrier frequency in GHz.
    #[arg(long, default_value_t = 28.0, conflicts_with = "f_inf")]
    pub f_ghz: f64,
    /// Infinite frequency: no Fresnel clearance.
    #[arg(long)]
    pub f_inf: bool,
}

impl FreqArgs {
    fn spec(&self) -> Result<FresnelSpec, CliError> {
        if self.f_inf {
            return Ok(FresnelSpec::optical());
        }
        FresnelSpec::from_frequency(self.f_ghz * 1e9).map_err(|e| CliError::Usage(e.to_string()))
    }

    fn label(&self) -> String {
        if self.f_inf {
            "inf".into()
        } else {
            self.f_ghz.to_string()
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct AnalyticArgs {
    #[command(flatten)]
    pub env: EnvArgs,
    #[command(flatten)]
    pub freq: FreqArgs,
    #[arg(long, default_value_t = 70.0)]
    pub htx: f64,
    #[arg(long, default_value_t = 1.5)]
    pub hrx: f64,
    /// Horizontal distances in meters.
    #[arg(long, default_value = "0:1000:1")]
    pub d: Grid,
    /// Elevation angles in degrees; replaces the distance grid.
    #[arg(long)]
    pub elevation: Option<Grid>,
    /// Building width override in meters.
    #[arg(long)]
    pub width: Option<f64>,
    /// Append the crossing of this probability (distance, or angle with --elevation).
    #[arg(long)]
    pub mcd: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub env: EnvArgs,
    #[command(flatten)]
    pub freq: FreqArgs,
    #[arg(long, default_value_t = 1.5)]
    pub hrx: f64,
    /// Height differences the dataset is built on.
    #[arg(long, default_value = "10:1000:10")]
    pub dh: Grid,
    /// Distances each analytic curve is sampled on.
    #[arg(long, default_value = "1:1000:1")]
    pub d: Grid,
    /// Split and initialization seed.
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, default_value_t = 20_000)]
    pub epochs: usize,
    #[arg(long, default_value_t = 0.05)]
    pub learning_rate: f64,
    /// L2 weight penalty.
    #[arg(long, default_value_t = 0.0)]
    pub eta: f64,
    #[arg(long, default_value_t = 4)]
    pub hidden: usize,
    /// Directory receiving d1.mlp, d2.mlp, dataset.csv, report.csv.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LayoutArg {
    Grid,
    Uniform,
}

impl From<LayoutArg> for Layout {
    fn from(l: LayoutArg) -> Self {
        match l {
            LayoutArg::Grid => Layout::Grid,
            LayoutArg::Uniform => Layout::UniformRandom,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SimArgs {
    #[command(flatten)]
    pub env: EnvArgs,
    #[command(flatten)]
    pub freq: FreqArgs,
    #[arg(long, default_value_t = 500.0)]
    pub htx: f64,
    #[arg(long, default_value_t = 2.0)]
    pub hrx: f64,
    /// Ring radii in meters.
    #[arg(long, default_value = "50:1000:50")]
    pub d: Grid,
    /// Elevation angles in degrees; replaces the ring grid.
    #[arg(long)]
    pub elevation: Option<Grid>,
    #[arg(long, default_value_t = 5)]
    pub realizations: usize,
    #[arg(long, default_value_t = 263)]
    pub links_per_ring: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Scene side in meters (default: twice the largest ring plus 100).
    #[arg(long)]
    pub extent: Option<f64>,
    #[arg(long, value_enum, default_value_t = LayoutArg::Grid)]
    pub layout: LayoutArg,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub sim: SimArgs,
    /// Also write the first realization's scene here.
    #[arg(long)]
    pub dump_scene: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub sim: SimArgs,
    /// Directory with d1.mlp and d2.mlp from `fit`; trained in-process if absent.
    #[arg(long)]
    pub models: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SceneArgs {
    #[command(flatten)]
    pub env: EnvArgs,
    #[arg(long, default_value_t = 1000.0)]
    pub extent: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = LayoutArg::Grid)]
    pub layout: LayoutArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Runtime(#[from] crate::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

/// Everything a command produces, not yet written anywhere.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Output {
    pub stdout: String,
    pub files: Vec<(PathBuf, String)>,
}

impl Output {
    /// Routes `text` to `out` when given, to stdout otherwise.
    fn emit(&mut self, out: Option<&Path>, text: String) {
        match out {
            Some(p) => self.files.push((p.to_path_buf(), text)),
            None => self.stdout.push_str(&text),
        }
    }

    pub fn write(&self) -> std::io::Result<()> {
        for (path, text) in &self.files {
            write_atomic(path, text)?;
        }
        let mut lock = std::io::stdout().lock();
        lock.write_all(self.stdout.as_bytes())?;
        lock.flush()
    }
}

fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    std::fs::write(&tmp, text)?;
    std::fs::rename(&tmp, path).inspect_err(|_| {
        let _ = std::fs::remove_file(&tmp);
    })
}

fn header(command: &str, params: &[(&str, String)]) -> String {
    let mut h = format!("# a2g-los {VERSION} {command}");
    for (k, v) in params {
        write!(h, " {k}={v}").unwrap();
    }
    h.push('\n');
    h
}

fn env_params(name: &str, env: &Environment) -> Vec<(&'static str, String)> {
    vec![
        ("scenario", name.to_string()),
        ("alpha", env.alpha().to_string()),
        ("beta", env.beta().to_string()),
        ("gamma", env.gamma().to_string()),
    ]
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or("none".into(), T::to_string)
}

pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Analytic(a) => analytic(a),
        Command::Fit(a) => fit_cmd(a),
        Command::Simulate(a) => simulate(a),
        Command::Compare(a) => compare(a),
        Command::Scene(a) => scene(a),
    }
}

fn analytic(a: &AnalyticArgs) -> Result<Output, CliError> {
    let (name, env) = a.env.resolve()?;
    let spec = a.freq.spec()?;
    let mut model = LosModel::new(env, spec);
    if let Some(w) = a.width {
        model = model.with_width(w).map_err(|e| CliError::Usage(e.to_string()))?;
    }
    if let Some(t) = a.mcd {
        if !(t > 0.0 && t < 1.0) {
            return Err(CliError::Usage(format!("--mcd threshold {t} must lie in (0, 1)")));
        }
    }
    let mut params = env_params(&name, &env);
    params.extend([
        ("f_ghz", a.freq.label()),
        ("width", opt(&a.width)),
        ("htx", a.htx.to_string()),
        ("hrx", a.hrx.to_string()),
    ]);
    let mut text;
    match a.elevation {
        Some(grid) => {
            params.push(("elevation_deg", grid.to_string()));
            params.push(("mcd", opt(&a.mcd)));
            text = header("analytic", &params);
            let deg = grid.values();
            let rad: Vec<f64> = deg.iter().map(|d| d.to_radians()).collect();
            let p = model.p_los_vs_elevation(a.htx, a.hrx, &rad)?;
            text.push_str("theta_deg,p_los\n");
            for (t, p) in deg.iter().zip(&p) {
                writeln!(text, "{t},{p}").unwrap();
            }
            if let Some(thr) = a.mcd {
                let theta = elevation_threshold(&deg, &p, thr);
                writeln!(text, "# theta_threshold_deg,{}", opt(&theta)).unwrap();
            }
        }
        None => {
            params.push(("d", a.d.to_string()));
            params.push(("mcd", opt(&a.mcd)));
            text = header("analytic", &params);
            let d = a.d.values();
            let p = model.curve(a.htx, a.hrx, &d)?;
            text.push_str("d,p_los\n");
            for (d, p) in d.iter().zip(&p) {
                writeln!(text, "{d},{p}").unwrap();
            }
            if let Some(thr) = a.mcd {
                let mcd = model.max_comm_distance(a.htx, a.hrx, thr, &McdSearch::default())?;
                writeln!(text, "# mcd_m,{}", opt(&mcd)).unwrap();
            }
        }
    }
    let mut out = Output::default();
    out.emit(a.out.as_deref(), text);
    Ok(out)
}

/// Evaluation grids for the fit report: height differences 10..=1000 m and
/// distances 0..=1000 m, both every 10 m.
pub fn report_grids() -> (Vec<f64>, Vec<f64>) {
    (
        (1..=100).map(|k| k as f64 * 10.0).collect(),
        (0..=100).map(|k| k as f64 * 10.0).collect(),
    )
}

fn fit_cmd(a: &FitArgs) -> Result<Output, CliError> {
    let (name, env) = a.env.resolve()?;
    let spec = a.freq.spec()?;
    let cfg = TrainConfig {
        hidden_neurons: a.hidden,
        learning_rate: a.learning_rate,
        epochs: a.epochs,
        eta: a.eta,
        init_seed: a.seed,
        split_seed: a.seed,
    };
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let dh = a.dh.values();
    if dh.iter().any(|&v| v <= 0.0) {
        return Err(CliError::Usage("--dh values must be positive".into()));
    }
    let built = fit::build_dataset(&env, &spec, a.hrx, &dh, &a.d.values())?;
    let (model, outcomes) = fit::train_model(&built.dataset, &cfg)?;
    let (eval_dh, eval_d) = report_grids();
    let quality = fit::approx_vs_analytic(&model, &LosModel::new(env, spec), a.hrx, &eval_dh, &eval_d)?;

    let mut params = env_params(&name, &env);
    params.extend([
        ("f_ghz", a.freq.label()),
        ("hrx", a.hrx.to_string()),
        ("dh", a.dh.to_string()),
        ("d", a.d.to_string()),
        ("seed", a.seed.to_string()),
        ("epochs", a.epochs.to_string()),
        ("learning_rate", a.learning_rate.to_string()),
        ("eta", a.eta.to_string()),
        ("hidden", a.hidden.to_string()),
    ]);
    let head = header("fit", &params);

    let mut report = head.clone();
    for (t, o) in ["d1", "d2"].iter().zip(&outcomes) {
        writeln!(report, "# {t}_train_rmse,{}", o.train_rmse).unwrap();
        writeln!(report, "# {t}_validation_rmse,{}", o.validation_rmse).unwrap();
        writeln!(report, "# {t}_best_epoch,{}", o.best_epoch).unwrap();
    }
    writeln!(report, "# approx_mse,{}", quality.mse).unwrap();
    writeln!(report, "# approx_max_abs,{}", quality.max_abs).unwrap();
    writeln!(report, "# approx_mean_abs,{}", quality.mean_abs).unwrap();
    for r in &built.rejected {
        writeln!(report, "# rejected,{},{}", r.delta_h, r.reason).unwrap();
    }
    report.push_str("delta_h,d1,d2,fit_mse,d1_pred,d2_pred\n");
    for (r, mse) in built.dataset.records().iter().zip(&built.fit_mse) {
        let p = model.params(r.delta_h)?;
        writeln!(report, "{},{},{},{},{},{}", r.delta_h, r.d1, r.d2, mse, p.d1(), p.d2()).unwrap();
    }

    let mut out = Output::default();
    let dir = &a.out_dir;
    out.files
        .push((dir.join("d1.mlp"), format!("{head}{}", model.d1.to_text())));
    out.files
        .push((dir.join("d2.mlp"), format!("{head}{}", model.d2.to_text())));
    out.files
        .push((dir.join("dataset.csv"), format!("{head}{}", built.dataset.to_csv())));
    out.files.push((dir.join("report.csv"), report));
    writeln!(
        out.stdout,
        "{name}: {} records, approx mse {:.5}, max abs {:.4}",
        built.dataset.len(),
        quality.mse,
        quality.max_abs
    )
    .unwrap();
    Ok(out)
}

struct SimRun {
    env: Environment,
    spec: FresnelSpec,
    cfg: SimConfig,
    /// Column key and values in degrees or meters.
    axis: (&'static str, Vec<f64>),
    d: Vec<f64>,
    rings: Vec<RingEstimate>,
    params: Vec<(&'static str, String)>,
}

fn run_sim(s: &SimArgs) -> Result<SimRun, CliError> {
    let (name, env) = s.env.resolve()?;
    let spec = s.freq.spec()?;
    if s.realizations == 0 || s.links_per_ring == 0 {
        return Err(CliError::Usage(
            "--realizations and --links-per-ring must be at least 1".into(),
        ));
    }
    let cfg = SimConfig {
        realizations: s.realizations,
        links_per_ring: s.links_per_ring,
        seed: s.seed,
        extent: s.extent,
        layout: s.layout.into(),
    };
    let mut params = env_params(&name, &env);
    params.extend([
        ("f_ghz", s.freq.label()),
        ("htx", s.htx.to_string()),
        ("hrx", s.hrx.to_string()),
    ]);
    let (axis, d) = match s.elevation {
        Some(g) => {
            params.push(("elevation_deg", g.to_string()));
            let deg = g.values();
            let d = deg
                .iter()
                .map(|t| {
                    if *t > 0.0 && *t < 90.0 {
                        Ok((s.htx - s.hrx) / t.to_radians().tan())
                    } else {
                        Err(CliError::Usage(format!("elevation {t} must lie in (0, 90) degrees")))
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            (("theta_deg", deg), d)
        }
        None => {
            params.push(("d", s.d.to_string()));
            (("d", s.d.values()), s.d.values())
        }
    };
    params.extend([
        ("realizations", s.realizations.to_string()),
        ("links_per_ring", s.links_per_ring.to_string()),
        ("seed", s.seed.to_string()),
        ("extent", opt(&s.extent)),
        ("layout", format!("{:?}", s.layout).to_lowercase()),
    ]);
    let rings = rt_sim::estimate_p_los(&env, &spec, s.htx, s.hrx, &d, &cfg)?;
    Ok(SimRun {
        env,
        spec,
        cfg,
        axis,
        d,
        rings,
        params,
    })
}

fn simulate(a: &SimulateArgs) -> Result<Output, CliError> {
    let run = run_sim(&a.sim)?;
    let mut text = header("simulate", &run.params);
    writeln!(text, "{},p_sim,ci_halfwidth", run.axis.0).unwrap();
    for (x, r) in run.axis.1.iter().zip(&run.rings) {
        writeln!(text, "{x},{},{}", r.p, r.ci_half_width).unwrap();
    }
    let mut out = Output::default();
    if let Some(path) = &a.dump_scene {
        let d_max = run.d.iter().copied().fold(0.0, f64::max);
        let scene = rt_sim::realization_scene(&run.env, &run.cfg, d_max, 0)?;
        out.files.push((path.clone(), scene.to_csv()));
    }
    out.emit(a.out.as_deref(), text);
    Ok(out)
}

/// Last grid distance, scanning up from the first point, where `p >= 0.999`.
pub fn breakpoint(d: &[f64], p: &[f64]) -> Option<f64> {
    d.iter()
        .zip(p)
        .take_while(|(_, p)| **p >= 0.999)
        .last()
        .map(|(d, _)| *d)
}

fn load_models(dir: &Path) -> Result<ApproxModel, CliError> {
    Ok(ApproxModel {
        d1: Mlp::load(dir.join("d1.mlp"))?,
        d2: Mlp::load(dir.join("d2.mlp"))?,
    })
}

/// Retrained networks with the `fit` defaults for this environment.
pub fn default_model(env: &Environment, spec: &FresnelSpec, h_rx: f64) -> crate::Result<ApproxModel> {
    let dh: Vec<f64> = (1..=100).map(|k| k as f64 * 10.0).collect();
    let built = fit::build_dataset(env, spec, h_rx, &dh, &fit::default_distance_grid())?;
    Ok(fit::train_model(&built.dataset, &TrainConfig::default())?.0)
}

fn compare(a: &CompareArgs) -> Result<Output, CliError> {
    let mut run = run_sim(&a.sim)?;
    let s = &a.sim;
    let model = match &a.models {
        Some(dir) => load_models(dir)?,
        None => default_model(&run.env, &run.spec, s.hrx)?,
    };
    run.params.push((
        "models",
        a.models
            .as_ref()
            .map_or("retrained".into(), |p| p.display().to_string()),
    ));
    let dh = s.htx - s.hrx;
    let analytic = LosModel::new(run.env, run.spec).curve(s.htx, s.hrx, &run.d)?;
    let retrained = model.params(dh)?;
    let approx = |p: &ApproxParams| run.d.iter().map(|&d| p_los_approx(d, p)).collect::<Vec<f64>>();
    let columns: [(&str, Vec<f64>); 4] = [
        ("p_analytic", analytic),
        ("p_approx_retrained", approx(&retrained)),
        ("p_approx_3gpp", approx(&THREE_GPP)),
        ("p_approx_5gcm", approx(&FIVE_GCM)),
    ];

    let mut text = header("compare", &run.params);
    write!(text, "{},p_sim,ci_halfwidth", run.axis.0).unwrap();
    for (name, _) in &columns {
        write!(text, ",{name}").unwrap();
    }
    text.push('\n');
    for (i, (x, r)) in run.axis.1.iter().zip(&run.rings).enumerate() {
        write!(text, "{x},{},{}", r.p, r.ci_half_width).unwrap();
        for (_, col) in &columns {
            write!(text, ",{}", col[i]).unwrap();
        }
        text.push('\n');
    }
    writeln!(text, "# retrained_d1,{}", retrained.d1()).unwrap();
    writeln!(text, "# retrained_d2,{}", retrained.d2()).unwrap();
    text.push_str("# model,mad_vs_sim,breakpoint_m\n");
    let p_sim: Vec<f64> = run.rings.iter().map(|r| r.p).collect();
    let rows = std::iter::once(("p_sim", &p_sim)).chain(columns.iter().map(|(n, c)| (*n, c)));
    for (name, col) in rows {
        let mad = col.iter().zip(&p_sim).map(|(a, b)| (a - b).abs()).sum::<f64>() / p_sim.len() as f64;
        writeln!(
            text,
            "# {},{mad},{}",
            name.trim_start_matches("p_"),
            opt(&breakpoint(&run.d, col))
        )
        .unwrap();
    }
    let mut out = Output::default();
    out.emit(a.out.as_deref(), text);
    Ok(out)
}

fn scene(a: &SceneArgs) -> Result<Output, CliError> {
    let (_, env) = a.env.resolve()?;
    let scene = rt_sim::synthesize_scene_with(&env, a.extent, a.seed, a.layout.into())?;
    let mut out = Output::default();
    out.emit(a.out.as_deref(), scene.to_csv());
    Ok(out)
}

fn thread_count() -> Result<usize, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{THREADS_ENV}='{v}' is not a thread count"))),
        Err(_) => Ok(0),
    }
}

/// Parses `args` (program name first), runs the command inside a pool
/// sized by `A2G_LOS_THREADS`, and writes the results. Returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = thread_count().and_then(|n| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        pool.install(|| execute(&cli))
    });
    match result {
        Ok(out) => match out.write() {
            Ok(()) => 0,
            Err(e) => {
                eprintln!("a2g-los: {e}");
                1
            }
        },
        Err(e) => {
            eprintln!("a2g-los: {e}");
            e.exit_code()
        }
    }
}

pub fn main() -> i32 {
    run(std::env::args_os())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_syntax() {
        assert_eq!("0:1000:1".parse::<Grid>().unwrap().values().len(), 1001);
        assert_eq!("50:1000:50".parse::<Grid>().unwrap().values().len(), 20);
        assert_eq!("0:10:3".parse::<Grid>().unwrap().values(), vec![0.0, 3.0, 6.0, 9.0]);
        assert_eq!("0:0.3:0.1".parse::<Grid>().unwrap().values().len(), 4);
        assert_eq!("7".parse::<Grid>().unwrap().values(), vec![7.0]);
        for bad in ["", "1:2", "a:2:1", "5:1:1", "0:10:0", "0:10:-1", "1:2:3:4"] {
            assert!(bad.parse::<Grid>().is_err(), "{bad}");
        }
    }

    #[test]
    fn breakpoint_scans_from_start() {
        let d = [0.0, 10.0, 20.0, 30.0];
        assert_eq!(breakpoint(&d, &[1.0, 1.0, 0.5, 1.0]), Some(10.0));
        assert_eq!(breakpoint(&d, &[0.5, 1.0, 1.0, 1.0]), None);
    }
}
