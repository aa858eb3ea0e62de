//! Statistical description of a built-up area.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::Rng;

use crate::{Error, Result};

/// The bundled scenario table (one `name alpha beta gamma` row per line).
pub const BUNDLED_SCENARIOS: &str = include_str!("../data/scenarios.txt");

/// ITU-R P.1410 parameter triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Environment {
    alpha: f64,
    beta: f64,
    gamma: f64,
}

impl Environment {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::domain("alpha", alpha, "must lie in (0, 1]"));
        }
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::domain("beta", beta, "must be positive"));
        }
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::domain("gamma", gamma, "must be positive"));
        }
        Ok(Self { alpha, beta, gamma })
    }

    /// Fraction of land covered by buildings.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Mean number of buildings per km².
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Rayleigh scale of building heights, meters.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Expected buildings crossed per meter of horizontal path.
    pub fn buildings_per_meter(&self) -> f64 {
        (self.alpha * self.beta).sqrt() / 1000.0
    }
}

impl fmt::Display for Environment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "alpha={} beta={} gamma={}", self.alpha, self.beta, self.gamma)
    }
}

/// The four standard built-up categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioPreset {
    Suburban,
    Urban,
    DenseUrban,
    HighRiseUrban,
}

impl ScenarioPreset {
    pub const ALL: [ScenarioPreset; 4] = [
        ScenarioPreset::Suburban,
        ScenarioPreset::Urban,
        ScenarioPreset::DenseUrban,
        ScenarioPreset::HighRiseUrban,
    ];

    /// Name used in scenario files and on the command line.
    pub fn name(self) -> &'static str {
        match self {
            ScenarioPreset::Suburban => "suburban",
            ScenarioPreset::Urban => "urban",
            ScenarioPreset::DenseUrban => "dense-urban",
            ScenarioPreset::HighRiseUrban => "high-rise",
        }
    }

    pub fn env(self) -> Environment {
        ScenarioTable::bundled()
            .get(self.name())
            .expect("bundled table carries every preset")
    }
}

impl FromStr for ScenarioPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownScenario(s.to_string()))
    }
}

impl fmt::Display for ScenarioPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Named environments loaded from a plain-text table.
#[derive(Debug, Clone, Default)]
pub struct ScenarioTable {
    entries: Vec<(String, Environment)>,
}

impl ScenarioTable {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_SCENARIOS).expect("bundled scenario table is well formed")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: Vec<(String, Environment)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: String| Error::Parse { line: idx + 1, message };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 {
                return Err(parse_err(format!(
                    "expected 'name alpha beta gamma', got {} fields",
                    fields.len()
                )));
            }
            let mut num = [0.0; 3];
            for (slot, field) in num.iter_mut().zip(&fields[1..]) {
                *slot = field
                    .parse()
                    .map_err(|_| parse_err(format!("'{field}' is not a number")))?;
            }
            let env = Environment::new(num[0], num[1], num[2]).map_err(|e| parse_err(e.to_string()))?;
            let name = fields[0].to_string();
            if entries.iter().any(|(n, _)| n.eq_ignore_ascii_case(&name)) {
                return Err(parse_err(format!("duplicate scenario '{name}'")));
            }
            entries.push((name, env));
        }
        Ok(Self { entries })
    }

    pub fn get(&self, name: &str) -> Option<Environment> {
        self.entries
            .iter()
            .find(|(n, _)| n.eq_ignore_ascii_case(name))
            .map(|(_, env)| *env)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Environment)> {
        self.entries.iter().map(|(n, e)| (n.as_str(), *e))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Rayleigh density of building height.
pub fn height_pdf(gamma: f64, h: f64) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(Error::domain("gamma", gamma, "must be positive"));
    }
    if !(h >= 0.0) {
        return Err(Error::domain("h", h, "height must be non-negative"));
    }
    let g2 = gamma * gamma;
    Ok(h / g2 * (-h * h / (2.0 * g2)).exp())
}

/// Probability that a building is shorter than `h`; zero for `h <= 0`.
pub fn height_cdf(gamma: f64, h: f64) -> f64 {
    if h <= 0.0 {
        return 0.0;
    }
    -(-h * h / (2.0 * gamma * gamma)).exp_m1()
}

/// Draws one Rayleigh(gamma) height by inverting the CDF.
pub fn sample_height<R: Rng + ?Sized>(gamma: f64, rng: &mut R) -> f64 {
    // 1 - U lies in (0, 1], so the log is finite.
    let u: f64 = rng.random();
    gamma * (-2.0 * (1.0 - u).ln()).sqrt()
}

/// Mean number of buildings crossed by a path of horizontal length `d_rx`.
pub fn building_count(env: &Environment, d_rx: f64) -> usize {
    if !(d_rx > 0.0) {
        return 0;
    }
    (d_rx * env.buildings_per_meter()).floor() as usize
}

/// Mean building width, meters.
pub fn mean_width(env: &Environment) -> f64 {
    1000.0 * (env.alpha / env.beta).sqrt()
}

/// Distance from the transmitter to the `i`-th building (1-based).
pub fn building_position(env: &Environment, d_rx: f64, i: usize) -> Result<f64> {
    building_position_with_width(env, d_rx, i, mean_width(env))
}

pub(crate) fn building_position_with_width(env: &Environment, d_rx: f64, i: usize, width: f64) -> Result<f64> {
    let count = building_count(env, d_rx);
    if i == 0 || i > count {
        return Err(Error::IndexOutOfRange { index: i, count });
    }
    Ok((i as f64 - 0.5) * d_rx / count as f64 + width / 2.0)
}
