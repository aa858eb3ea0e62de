use std::fmt::Write as _;
use std::path::Path;

use crate::{Error, Result};

/// Affine map between `[min, max]` and `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinMax {
    pub min: f64,
    pub max: f64,
}

impl MinMax {
    pub fn new(min: f64, max: f64) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && max > min) {
            return Err(Error::domain(
                "normalization max",
                max,
                "range must be finite with max > min",
            ));
        }
        Ok(Self { min, max })
    }

    /// Tight range around `values`; `None` when they are all equal.
    pub fn covering(values: impl IntoIterator<Item = f64>) -> Option<Self> {
        let (lo, hi) = values
            .into_iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        Self::new(lo, hi).ok()
    }

    pub fn span(&self) -> f64 {
        self.max - self.min
    }

    pub fn normalize(&self, v: f64) -> f64 {
        (v - self.min) / self.span()
    }

    pub fn denormalize(&self, x: f64) -> f64 {
        self.min + x * self.span()
    }
}

pub(crate) fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// One-input, one-output network with a single logistic hidden layer and a
/// linear output, operating on min-max normalized values.
#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    pub(crate) input_weights: Vec<f64>,
    pub(crate) input_biases: Vec<f64>,
    pub(crate) output_weights: Vec<f64>,
    pub(crate) output_bias: f64,
    pub(crate) input_norm: MinMax,
    pub(crate) output_norm: MinMax,
}

impl Mlp {
    pub fn new(
        input_weights: Vec<f64>,
        input_biases: Vec<f64>,
        output_weights: Vec<f64>,
        output_bias: f64,
        input_norm: MinMax,
        output_norm: MinMax,
    ) -> Result<Self> {
        let j = input_weights.len();
        if j == 0 {
            return Err(Error::domain("hidden neurons", 0.0, "need at least one"));
        }
        if input_biases.len() != j || output_weights.len() != j {
            return Err(Error::domain(
                "hidden neurons",
                j as f64,
                "weight and bias vectors must have equal length",
            ));
        }
        let all = input_weights
            .iter()
            .chain(&input_biases)
            .chain(&output_weights)
            .chain(std::iter::once(&output_bias));
        if let Some(bad) = all.copied().find(|v| !v.is_finite()) {
            return Err(Error::domain("weight", bad, "must be finite"));
        }
        MinMax::new(input_norm.min, input_norm.max)?;
        MinMax::new(output_norm.min, output_norm.max)?;
        Ok(Self {
            input_weights,
            input_biases,
            output_weights,
            output_bias,
            input_norm,
            output_norm,
        })
    }

    /// All weights zero; the output bias fixes the normalized output.
    pub fn constant(hidden: usize, input_norm: MinMax, output_norm: MinMax, normalized_output: f64) -> Self {
        Self {
            input_weights: vec![0.0; hidden],
            input_biases: vec![0.0; hidden],
            output_weights: vec![0.0; hidden],
            output_bias: normalized_output,
            input_norm,
            output_norm,
        }
    }

    pub fn hidden_neurons(&self) -> usize {
        self.input_weights.len()
    }

    pub fn input_weights(&self) -> &[f64] {
        &self.input_weights
    }

    pub fn input_biases(&self) -> &[f64] {
        &self.input_biases
    }

    pub fn output_weights(&self) -> &[f64] {
        &self.output_weights
    }

    pub fn output_bias(&self) -> f64 {
        self.output_bias
    }

    pub fn input_norm(&self) -> MinMax {
        self.input_norm
    }

    pub fn output_norm(&self) -> MinMax {
        self.output_norm
    }

    /// Network output in normalized units for a normalized input.
    pub fn forward_normalized(&self, x: f64) -> f64 {
        self.input_weights
            .iter()
            .zip(&self.input_biases)
            .zip(&self.output_weights)
            .map(|((w, b), v)| v * sigmoid(w * x + b))
            .sum::<f64>()
            + self.output_bias
    }

    pub fn forward(&self, delta_h: f64) -> f64 {
        let x = self.input_norm.normalize(delta_h);
        self.output_norm.denormalize(self.forward_normalized(x))
    }

    /// Plain-text form: one `tag v1 v2 ...` line per tensor.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |tag: &str, values: &[f64]| {
            out.push_str(tag);
            for v in values {
                // 17 significant digits round-trip every f64.
                write!(out, " {v:.16e}").unwrap();
            }
            out.push('\n');
        };
        line("iw", &self.input_weights);
        line("ib", &self.input_biases);
        line("ow", &self.output_weights);
        line("ob", &[self.output_bias]);
        line("inorm", &[self.input_norm.min, self.input_norm.max]);
        line("onorm", &[self.output_norm.min, self.output_norm.max]);
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut iw = None;
        let mut ib = None;
        let mut ow = None;
        let mut ob = None;
        let mut inorm = None;
        let mut onorm = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Parse { line: idx + 1, message };
            let mut fields = line.split_whitespace();
            let tag = fields.next().unwrap_or_default();
            let values = fields
                .map(|f| f.parse::<f64>().map_err(|_| err(format!("'{f}' is not a number"))))
                .collect::<Result<Vec<f64>>>()?;
            let slot = match tag {
                "iw" => &mut iw,
                "ib" => &mut ib,
                "ow" => &mut ow,
                "ob" => &mut ob,
                "inorm" => &mut inorm,
                "onorm" => &mut onorm,
                other => return Err(err(format!("unknown tag '{other}'"))),
            };
            if slot.replace(values).is_some() {
                return Err(err(format!("duplicate tag '{tag}'")));
            }
        }
        let missing = |tag: &str| Error::Parse {
            line: 0,
            message: format!("missing '{tag}' line"),
        };
        let pair = |v: Vec<f64>, tag: &str| -> Result<MinMax> {
            match v.as_slice() {
                [lo, hi] => MinMax::new(*lo, *hi),
                _ => Err(Error::Parse {
                    line: 0,
                    message: format!("'{tag}' needs exactly two values"),
                }),
            }
        };
        let ob = ob.ok_or_else(|| missing("ob"))?;
        let [ob] = ob.as_slice() else {
            return Err(Error::Parse {
                line: 0,
                message: "'ob' needs exactly one value".into(),
            });
        };
        Self::new(
            iw.ok_or_else(|| missing("iw"))?,
            ib.ok_or_else(|| missing("ib"))?,
            ow.ok_or_else(|| missing("ow"))?,
            *ob,
            pair(inorm.ok_or_else(|| missing("inorm"))?, "inorm")?,
            pair(onorm.ok_or_else(|| missing("onorm"))?, "onorm")?,
        )
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        Ok(std::fs::write(path, self.to_text())?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn norm(a: f64, b: f64) -> MinMax {
        MinMax::new(a, b).unwrap()
    }

    fn random_mlp(rng: &mut ChaCha8Rng, j: usize) -> Mlp {
        let mut v = |n: usize| (0..n).map(|_| rng.random_range(-3.0..3.0)).collect::<Vec<f64>>();
        let (iw, ib, ow, ob) = (v(j), v(j), v(j), v(1)[0]);
        Mlp::new(iw, ib, ow, ob, norm(10.0, 1000.0), norm(5.0, 700.0)).unwrap()
    }

    #[test]
    fn zero_weights_give_constant() {
        let m = Mlp::constant(4, norm(0.0, 1000.0), norm(20.0, 220.0), 0.25);
        assert_eq!(m.forward(1.0), 70.0);
        assert_eq!(m.forward(900.0), 70.0);
    }

    #[test]
    fn saturated_neuron_is_a_step() {
        let m = Mlp::new(vec![1e6], vec![-0.5e6], vec![1.0], 0.0, norm(0.0, 1.0), norm(0.0, 1.0)).unwrap();
        assert!(m.forward(0.49) < 1e-12);
        assert!(m.forward(0.51) > 1.0 - 1e-12);
    }

    #[test]
    fn forward_matches_scalar_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let m = random_mlp(&mut rng, 4);
        let x = (100.0 - 10.0) / 990.0;
        let mut acc = m.output_bias;
        for j in 0..4 {
            let z = m.input_weights[j] * x + m.input_biases[j];
            acc += m.output_weights[j] / (1.0 + (-z).exp());
        }
        assert_relative_eq!(m.forward(100.0), 5.0 + acc * 695.0, max_relative = 1e-14);
    }

    #[test]
    fn rejects_bad_shapes() {
        let n = norm(0.0, 1.0);
        assert!(Mlp::new(vec![], vec![], vec![], 0.0, n, n).is_err());
        assert!(Mlp::new(vec![1.0], vec![1.0, 2.0], vec![1.0], 0.0, n, n).is_err());
        assert!(Mlp::new(vec![f64::NAN], vec![1.0], vec![1.0], 0.0, n, n).is_err());
        assert!(MinMax::new(1.0, 1.0).is_err());
        assert!(MinMax::covering([3.0, 3.0]).is_none());
    }

    #[test]
    fn text_errors() {
        let good = Mlp::constant(2, norm(0.0, 1.0), norm(0.0, 1.0), 0.5).to_text();
        assert!(Mlp::from_text(&good.replace("ob", "zz")).is_err());
        assert!(Mlp::from_text(&good.replace("onorm 0.0000000000000000e0 ", "onorm ")).is_err());
        assert!(Mlp::from_text(&format!("{good}iw 1 2\n")).is_err());
        assert!(Mlp::from_text("iw 1\nib 1\now 1\nob x\n").is_err());
    }

    proptest! {
        #[test]
        fn text_round_trip_is_lossless(seed in any::<u64>(), j in 1usize..8) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_mlp(&mut rng, j);
            prop_assert_eq!(Mlp::from_text(&m.to_text()).unwrap(), m);
        }

        #[test]
        fn forward_is_smooth(seed in any::<u64>(), dh in 20.0f64..990.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_mlp(&mut rng, 4);
            let h = 1e-3;
            let d1 = (m.forward(dh + h) - m.forward(dh - h)) / (2.0 * h);
            let d1b = (m.forward(dh + h / 2.0) - m.forward(dh - h / 2.0)) / h;
            prop_assert!((d1 - d1b).abs() <= 1e-5 * d1.abs().max(1.0));
        }
    }
}
