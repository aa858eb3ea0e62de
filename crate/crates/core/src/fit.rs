//! Training data and training for the parameter networks.
//!
//! For every height difference the analytic curve is fitted by the
//! breakpoint/decay model (`D1` solved exactly per `D2`, `D2` searched),
//! giving `(delta_h, D1, D2)` records. Each parameter then gets its
//! own network, trained by full-batch gradient descent on mean squared error
//! plus an L2 penalty on the weights.

use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analytic::LosModel;
use crate::approx::{mlp::sigmoid, p_los_approx, ApproxModel, ApproxParams, MinMax, Mlp, Target};
use crate::environment::Environment;
use crate::geometry::FresnelSpec;
use crate::{Error, Result};

/// Fraction of records used for training; the rest validates.
pub const SPLIT_RATIO: f64 = 0.7;
pub const MIN_SPLIT_RECORDS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitRecord {
    pub delta_h: f64,
    pub d1: f64,
    pub d2: f64,
}

impl FitRecord {
    pub fn target(&self, t: Target) -> f64 {
        match t {
            Target::D1 => self.d1,
            Target::D2 => self.d2,
        }
    }
}

/// What the records were fitted against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Provenance {
    pub env: Environment,
    pub fresnel: FresnelSpec,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FitDataset {
    records: Vec<FitRecord>,
    provenance: Option<Provenance>,
}

impl FitDataset {
    /// Records are sorted by `delta_h`; duplicates and non-positive
    /// parameters are rejected.
    pub fn new(mut records: Vec<FitRecord>, provenance: Option<Provenance>) -> Result<Self> {
        records.sort_by(|a, b| a.delta_h.total_cmp(&b.delta_h));
        for pair in records.windows(2) {
            if pair[0].delta_h >= pair[1].delta_h {
                return Err(Error::domain("delta_h", pair[1].delta_h, "values must be distinct"));
            }
        }
        for r in &records {
            ApproxParams::new(r.d1, r.d2)?;
            if !r.delta_h.is_finite() {
                return Err(Error::domain("delta_h", r.delta_h, "must be finite"));
            }
        }
        Ok(Self { records, provenance })
    }

    pub fn records(&self) -> &[FitRecord] {
        &self.records
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if let Some(p) = &self.provenance {
            writeln!(
                out,
                "# alpha={} beta={} gamma={} lambda={}",
                p.env.alpha(),
                p.env.beta(),
                p.env.gamma(),
                p.fresnel.wavelength()
            )
            .unwrap();
        }
        out.push_str("delta_h,d1,d2\n");
        for r in &self.records {
            writeln!(out, "{},{},{}", r.delta_h, r.d1, r.d2).unwrap();
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut provenance = None;
        let mut header_seen = false;
        let mut records = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let err = |message: String| Error::Parse { line: idx + 1, message };
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if !comment.trim_start().starts_with("alpha=") {
                    continue;
                }
                if let Some(p) = parse_provenance(comment).map_err(err)? {
                    provenance = Some(p);
                }
                continue;
            }
            if !header_seen {
                if line.replace(' ', "") != "delta_h,d1,d2" {
                    return Err(err(format!("expected header 'delta_h,d1,d2', got '{line}'")));
                }
                header_seen = true;
                continue;
            }
            let vals = line
                .split(',')
                .map(|f| {
                    f.trim()
                        .parse::<f64>()
                        .map_err(|_| err(format!("'{f}' is not a number")))
                })
                .collect::<Result<Vec<_>>>()?;
            let [delta_h, d1, d2] = vals[..] else {
                return Err(err(format!("expected 3 columns, got {}", vals.len())));
            };
            records.push(FitRecord { delta_h, d1, d2 });
        }
        Self::new(records, provenance)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        Ok(std::fs::write(path, self.to_csv())?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_csv(&std::fs::read_to_string(path)?)
    }
}

fn parse_provenance(comment: &str) -> std::result::Result<Option<Provenance>, String> {
    let mut vals = [None; 4];
    for tok in comment.split_whitespace() {
        let Some((k, v)) = tok.split_once('=') else {
            continue;
        };
        let slot = match k {
            "alpha" => 0,
            "beta" => 1,
            "gamma" => 2,
            "lambda" => 3,
            _ => continue,
        };
        vals[slot] = Some(v.parse::<f64>().map_err(|_| format!("'{v}' is not a number"))?);
    }
    match vals {
        [Some(a), Some(b), Some(g), Some(l)] => {
            let env = Environment::new(a, b, g).map_err(|e| e.to_string())?;
            let fresnel = FresnelSpec::new(l, 1).map_err(|e| e.to_string())?;
            Ok(Some(Provenance { env, fresnel }))
        }
        [None, None, None, None] => Ok(None),
        _ => Err("incomplete provenance comment".into()),
    }
}

/// Grid and refinement settings for the per-curve least-squares fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveFitConfig {
    pub d1_range: (f64, f64),
    pub d2_range: (f64, f64),
    pub grid_step: f64,
    pub final_step: f64,
    pub max_iterations: usize,
}

impl Default for CurveFitConfig {
    fn default() -> Self {
        Self {
            d1_range: (1.0, 600.0),
            d2_range: (1.0, 2000.0),
            grid_step: 1.0,
            final_step: 0.01,
            max_iterations: 200_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveFit {
    pub params: ApproxParams,
    /// Mean squared residual over the fitted points.
    pub mse: f64,
}

/// Sum of squared residuals of the breakpoint/decay model.
pub fn sse(points: &[(f64, f64)], d1: f64, d2: f64) -> f64 {
    let p = ApproxParams { d1, d2 };
    points
        .iter()
        .map(|&(d, t)| {
            let r = p_los_approx(d, &p) - t;
            r * r
        })
        .sum()
}

fn grid_values((lo, hi): (f64, f64), step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=n).map(|k| lo + k as f64 * step).collect()
}

/// Least-squares `(D1, D2)` for sampled `(d, P)` points.
///
/// For fixed `D2` the residual beyond the breakpoint is `D1 a_k + r_k`, so
/// between two consecutive sample distances the squared sum is a quadratic
/// in `D1` whose coefficients are suffix sums over the sorted points. The
/// best `D1` for a given `D2` is therefore exact, and only `D2` is searched:
/// a grid at `grid_step`, then local refinement down to `final_step`.
pub fn fit_curve(points: &[(f64, f64)], cfg: &CurveFitConfig) -> Result<CurveFit> {
    if points.is_empty() {
        return Err(Error::domain("points", 0.0, "need at least one sample"));
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let k = pts.len();
    let mut profile = Profile::new(&pts, cfg.d1_range);

    let mut best = (f64::INFINITY, cfg.d1_range.0, cfg.d2_range.0);
    for d2 in grid_values(cfg.d2_range, cfg.grid_step) {
        let (s, d1) = profile.best_d1(d2);
        if s < best.0 {
            best = (s, d1, d2);
        }
    }

    let (mut cur, mut d1, mut d2) = best;
    let (lo, hi) = cfg.d2_range;
    let mut step = cfg.grid_step / 10.0;
    let mut iterations = 0;
    while step >= cfg.final_step * (1.0 - 1e-9) && iterations < cfg.max_iterations {
        loop {
            iterations += 1;
            let mut moved = false;
            for c2 in [d2 - step, d2 + step] {
                if c2 < lo || c2 > hi {
                    continue;
                }
                let (s, c1) = profile.best_d1(c2);
                if s < cur {
                    (cur, d1, d2) = (s, c1, c2);
                    moved = true;
                }
            }
            if !moved || iterations >= cfg.max_iterations {
                break;
            }
        }
        step /= 10.0;
    }
    Ok(CurveFit {
        params: ApproxParams::new(d1, d2)?,
        mse: sse(&pts, d1, d2) / k as f64,
    })
}

/// Scratch space for the exact best-`D1` solve at one `D2`.
struct Profile<'a> {
    pts: &'a [(f64, f64)],
    d1_range: (f64, f64),
    /// `plateau[j]`: sum of `(1 - t)^2` over the first `j` points.
    plateau: Vec<f64>,
    s_aa: Vec<f64>,
    s_ar: Vec<f64>,
    s_rr: Vec<f64>,
}

impl<'a> Profile<'a> {
    fn new(pts: &'a [(f64, f64)], d1_range: (f64, f64)) -> Self {
        let k = pts.len();
        let mut plateau = vec![0.0; k + 1];
        for (i, &(_, t)) in pts.iter().enumerate() {
            plateau[i + 1] = plateau[i] + (1.0 - t) * (1.0 - t);
        }
        Self {
            pts,
            d1_range,
            plateau,
            s_aa: vec![0.0; k + 1],
            s_ar: vec![0.0; k + 1],
            s_rr: vec![0.0; k + 1],
        }
    }

    /// Smallest squared sum over `D1` in range, and the `D1` attaining it.
    fn best_d1(&mut self, d2: f64) -> (f64, f64) {
        let k = self.pts.len();
        for i in (0..k).rev() {
            let (d, t) = self.pts[i];
            let e = (-d / d2).exp();
            let a = if d > 0.0 { (1.0 - e) / d } else { 0.0 };
            let r = e - t;
            self.s_aa[i] = self.s_aa[i + 1] + a * a;
            self.s_ar[i] = self.s_ar[i + 1] + a * r;
            self.s_rr[i] = self.s_rr[i + 1] + r * r;
        }
        let (lo, hi) = self.d1_range;
        let mut best = (f64::INFINITY, lo);
        // j points sit on the plateau when D1 lies in [d_(j-1), d_j).
        for j in 0..=k {
            let from = if j == 0 { lo } else { self.pts[j - 1].0.max(lo) };
            let to = if j == k { hi } else { self.pts[j].0.min(hi) };
            if from > to {
                continue;
            }
            let d1 = if self.s_aa[j] > 0.0 {
                (-self.s_ar[j] / self.s_aa[j]).clamp(from, to)
            } else {
                from
            };
            let s = self.plateau[j] + d1 * d1 * self.s_aa[j] + 2.0 * d1 * self.s_ar[j] + self.s_rr[j];
            if s < best.0 {
                best = (s, d1);
            }
        }
        best
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rejection {
    pub delta_h: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetBuild {
    pub dataset: FitDataset,
    /// Residual MSE of each record's curve fit, aligned with the records.
    pub fit_mse: Vec<f64>,
    pub rejected: Vec<Rejection>,
}

/// Evenly spaced distances 1..=1000 m.
pub fn default_distance_grid() -> Vec<f64> {
    (1..=1000).map(f64::from).collect()
}

pub fn build_dataset(
    env: &Environment,
    spec: &FresnelSpec,
    h_rx: f64,
    delta_h_grid: &[f64],
    d_grid: &[f64],
) -> Result<DatasetBuild> {
    build_dataset_with(env, spec, h_rx, delta_h_grid, d_grid, &CurveFitConfig::default())
}

pub fn build_dataset_with(
    env: &Environment,
    spec: &FresnelSpec,
    h_rx: f64,
    delta_h_grid: &[f64],
    d_grid: &[f64],
    cfg: &CurveFitConfig,
) -> Result<DatasetBuild> {
    if delta_h_grid.is_empty() || d_grid.is_empty() {
        return Err(Error::domain("grid length", 0.0, "grids must be nonempty"));
    }
    let model = LosModel::new(*env, *spec);
    let mut dhs = delta_h_grid.to_vec();
    dhs.sort_by(f64::total_cmp);
    dhs.dedup();

    let fits: Vec<(f64, Result<CurveFit>)> = dhs
        .par_iter()
        .map(|&dh| {
            let fit = (|| {
                let curve = model.curve(h_rx + dh, h_rx, d_grid)?;
                if curve.iter().all(|&p| p == 1.0) {
                    return Err(Error::FitRejected {
                        delta_h: dh,
                        reason: "analytic curve is identically 1 on the distance grid".into(),
                    });
                }
                let pts: Vec<(f64, f64)> = d_grid.iter().copied().zip(curve).collect();
                fit_curve(&pts, cfg)
            })();
            (dh, fit)
        })
        .collect();

    let mut records = Vec::new();
    let mut fit_mse = Vec::new();
    let mut rejected = Vec::new();
    for (delta_h, fit) in fits {
        match fit {
            Ok(f) => {
                records.push(FitRecord {
                    delta_h,
                    d1: f.params.d1(),
                    d2: f.params.d2(),
                });
                fit_mse.push(f.mse);
            }
            Err(Error::FitRejected { reason, .. }) => rejected.push(Rejection { delta_h, reason }),
            Err(e) => return Err(e),
        }
    }
    Ok(DatasetBuild {
        dataset: FitDataset::new(
            records,
            Some(Provenance {
                env: *env,
                fresnel: *spec,
            }),
        )?,
        fit_mse,
        rejected,
    })
}

/// Random 70/30 partition; both parts keep `delta_h` order.
pub fn split_dataset(ds: &FitDataset, seed: u64) -> Result<(FitDataset, FitDataset)> {
    let n = ds.len();
    if n < MIN_SPLIT_RECORDS {
        return Err(Error::TooFewRecords {
            got: n,
            need: MIN_SPLIT_RECORDS,
        });
    }
    let n_train = (7 * n).div_ceil(10);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let (a, b) = idx.split_at(n_train);
    let pick = |ids: &[usize]| {
        let mut ids = ids.to_vec();
        ids.sort_unstable();
        FitDataset {
            records: ids.into_iter().map(|i| ds.records[i]).collect(),
            provenance: ds.provenance,
        }
    };
    Ok((pick(a), pick(b)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub hidden_neurons: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    /// L2 penalty on the weights (biases are not penalized).
    pub eta: f64,
    /// Seeds the weight initialization.
    pub init_seed: u64,
    pub split_seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            hidden_neurons: 4,
            learning_rate: 0.05,
            epochs: 20_000,
            eta: 0.0,
            init_seed: 7,
            split_seed: 7,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.hidden_neurons == 0 {
            return Err(Error::domain("hidden_neurons", 0.0, "need at least one"));
        }
        if !(self.learning_rate > 0.0) || !self.learning_rate.is_finite() {
            return Err(Error::domain("learning_rate", self.learning_rate, "must be positive"));
        }
        if self.epochs == 0 {
            return Err(Error::domain("epochs", 0.0, "need at least one"));
        }
        if !(self.eta >= 0.0) || !self.eta.is_finite() {
            return Err(Error::domain("eta", self.eta, "must be non-negative"));
        }
        Ok(())
    }
}

/// Flat view of the trainable parameters, in the order
/// `[input weights, input biases, output weights, output bias]`.
pub fn parameters(mlp: &Mlp) -> Vec<f64> {
    let mut p = Vec::with_capacity(3 * mlp.hidden_neurons() + 1);
    p.extend(&mlp.input_weights);
    p.extend(&mlp.input_biases);
    p.extend(&mlp.output_weights);
    p.push(mlp.output_bias);
    p
}

pub fn set_parameters(mlp: &mut Mlp, p: &[f64]) {
    let j = mlp.hidden_neurons();
    assert_eq!(p.len(), 3 * j + 1, "parameter vector length");
    mlp.input_weights.copy_from_slice(&p[..j]);
    mlp.input_biases.copy_from_slice(&p[j..2 * j]);
    mlp.output_weights.copy_from_slice(&p[2 * j..3 * j]);
    mlp.output_bias = p[3 * j];
}

/// Regularized MSE over normalized `(x, t)` samples.
pub fn cost(mlp: &Mlp, samples: &[(f64, f64)], eta: f64) -> f64 {
    let n = samples.len() as f64;
    let mse = samples
        .iter()
        .map(|&(x, t)| {
            let r = mlp.forward_normalized(x) - t;
            r * r
        })
        .sum::<f64>()
        / n;
    mse + 0.5 * eta * weight_norm2(mlp)
}

fn weight_norm2(mlp: &Mlp) -> f64 {
    mlp.input_weights.iter().chain(&mlp.output_weights).map(|w| w * w).sum()
}

/// Cost and its gradient by backpropagation, gradient laid out as in
/// [`parameters`].
pub fn cost_gradient(mlp: &Mlp, samples: &[(f64, f64)], eta: f64) -> (f64, Vec<f64>) {
    let j = mlp.hidden_neurons();
    let n = samples.len() as f64;
    let mut grad = vec![0.0; 3 * j + 1];
    let mut sq = 0.0;
    let mut act = vec![0.0; j];
    for &(x, t) in samples {
        let mut y = mlp.output_bias;
        for (k, a) in act.iter_mut().enumerate() {
            *a = sigmoid(mlp.input_weights[k] * x + mlp.input_biases[k]);
            y += mlp.output_weights[k] * *a;
        }
        let r = y - t;
        sq += r * r;
        let g = 2.0 * r / n;
        for k in 0..j {
            let back = g * mlp.output_weights[k] * act[k] * (1.0 - act[k]);
            grad[k] += back * x;
            grad[j + k] += back;
            grad[2 * j + k] += g * act[k];
        }
        grad[3 * j] += g;
    }
    for k in 0..j {
        grad[k] += eta * mlp.input_weights[k];
        grad[2 * j + k] += eta * mlp.output_weights[k];
    }
    (sq / n + 0.5 * eta * weight_norm2(mlp), grad)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainOutcome {
    pub mlp: Mlp,
    pub train_rmse: f64,
    pub validation_rmse: f64,
    /// Epoch at which the returned model was taken.
    pub best_epoch: usize,
    /// Training cost (normalized units) after every epoch.
    pub cost_history: Vec<f64>,
}

/// Splits `ds` 70/30, trains on the first part and keeps the model with the
/// lowest validation RMSE seen during training.
pub fn train(ds: &FitDataset, target: Target, cfg: &TrainConfig) -> Result<TrainOutcome> {
    cfg.validate()?;
    let (train_set, validate_set) = split_dataset(ds, cfg.split_seed)?;
    train_on(&train_set, &validate_set, target, cfg)
}

pub fn train_on(
    train_set: &FitDataset,
    validate_set: &FitDataset,
    target: Target,
    cfg: &TrainConfig,
) -> Result<TrainOutcome> {
    cfg.validate()?;
    if train_set.is_empty() || validate_set.is_empty() {
        return Err(Error::TooFewRecords {
            got: train_set.len().min(validate_set.len()),
            need: 1,
        });
    }
    let input_norm = widen(
        MinMax::covering(train_set.records.iter().map(|r| r.delta_h)),
        train_set,
        |r| r.delta_h,
    );
    let output_norm = widen(
        MinMax::covering(train_set.records.iter().map(|r| r.target(target))),
        train_set,
        |r| r.target(target),
    );
    let samples: Vec<(f64, f64)> = train_set
        .records
        .iter()
        .map(|r| (input_norm.normalize(r.delta_h), output_norm.normalize(r.target(target))))
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.init_seed);
    let j = cfg.hidden_neurons;
    let mut init = |n: usize| (0..n).map(|_| rng.random_range(-0.5..=0.5)).collect::<Vec<f64>>();
    let mut mlp = Mlp {
        input_weights: init(j),
        input_biases: init(j),
        output_weights: init(j),
        output_bias: init(1)[0],
        input_norm,
        output_norm,
    };

    let mut lr = cfg.learning_rate;
    let (mut cur_cost, mut grad) = cost_gradient(&mlp, &samples, cfg.eta);
    if !cur_cost.is_finite() {
        return Err(Error::Diverged {
            epoch: 0,
            hyperparameter: "learning_rate",
        });
    }
    let mut best = (rmse(&mlp, validate_set, target), mlp.clone(), 0);
    let mut history = Vec::with_capacity(cfg.epochs);
    let mut params = parameters(&mlp);
    let mut candidate = mlp.clone();
    for epoch in 1..=cfg.epochs {
        let trial: Vec<f64> = params.iter().zip(&grad).map(|(p, g)| p - lr * g).collect();
        set_parameters(&mut candidate, &trial);
        let (c, g) = cost_gradient(&candidate, &samples, cfg.eta);
        if c.is_finite() && c <= cur_cost {
            params = trial;
            std::mem::swap(&mut mlp, &mut candidate);
            cur_cost = c;
            grad = g;
            lr *= LR_GROWTH;
            let v = rmse(&mlp, validate_set, target);
            if v < best.0 {
                best = (v, mlp.clone(), epoch);
            }
        } else {
            lr *= 0.5;
            if lr < f64::MIN_POSITIVE {
                history.push(cur_cost);
                break;
            }
        }
        history.push(cur_cost);
    }
    let (validation_rmse, mlp, best_epoch) = best;
    Ok(TrainOutcome {
        train_rmse: rmse(&mlp, train_set, target),
        validation_rmse,
        mlp,
        best_epoch,
        cost_history: history,
    })
}

/// Accepted steps grow the learning rate slightly; rejected ones halve it.
const LR_GROWTH: f64 = 1.05;

fn widen(range: Option<MinMax>, ds: &FitDataset, f: impl Fn(&FitRecord) -> f64) -> MinMax {
    range.unwrap_or_else(|| {
        let v = ds.records.first().map(f).unwrap_or(0.0);
        MinMax {
            min: v - 0.5,
            max: v + 0.5,
        }
    })
}

/// Root mean squared prediction error, in meters.
pub fn rmse(mlp: &Mlp, ds: &FitDataset, target: Target) -> f64 {
    let (pred, want): (Vec<f64>, Vec<f64>) = ds
        .records
        .iter()
        .map(|r| (mlp.forward(r.delta_h), r.target(target)))
        .unzip();
    rmse_of(&pred, &want)
}

pub fn rmse_of(pred: &[f64], target: &[f64]) -> f64 {
    let n = pred.len() as f64;
    (pred.iter().zip(target).map(|(p, t)| (p - t) * (p - t)).sum::<f64>() / n).sqrt()
}

/// Agreement between the approximate model and the analytic curves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelError {
    pub mse: f64,
    pub max_abs: f64,
    pub mean_abs: f64,
    pub points: usize,
}

pub fn approx_vs_analytic(
    model: &ApproxModel,
    analytic: &LosModel,
    h_rx: f64,
    delta_h_grid: &[f64],
    d_grid: &[f64],
) -> Result<ModelError> {
    let rows: Vec<Vec<f64>> = delta_h_grid
        .par_iter()
        .map(|&dh| -> Result<Vec<f64>> {
            let params = model.params(dh)?;
            let exact = analytic.curve(h_rx + dh, h_rx, d_grid)?;
            Ok(d_grid
                .iter()
                .zip(exact)
                .map(|(&d, p)| (p_los_approx(d, &params) - p).abs())
                .collect())
        })
        .collect::<Result<_>>()?;
    let errs: Vec<f64> = rows.into_iter().flatten().collect();
    let n = errs.len();
    Ok(ModelError {
        mse: errs.iter().map(|e| e * e).sum::<f64>() / n as f64,
        max_abs: errs.iter().copied().fold(0.0, f64::max),
        mean_abs: errs.iter().sum::<f64>() / n as f64,
        points: n,
    })
}

/// Trains both parameter networks on one dataset.
pub fn train_model(ds: &FitDataset, cfg: &TrainConfig) -> Result<(ApproxModel, [TrainOutcome; 2])> {
    let (a, b) = rayon::join(|| train(ds, Target::D1, cfg), || train(ds, Target::D2, cfg));
    let (a, b) = (a?, b?);
    Ok((
        ApproxModel {
            d1: a.mlp.clone(),
            d2: b.mlp.clone(),
        },
        [a, b],
    ))
}
