//! Published reference weights for the four standard scenarios.
//!
//! Each network has four hidden neurons but only one output weight is
//! listed per network; it is applied to every hidden neuron. The input and
//! output scaling the weights were trained under is unknown, so outputs are
//! a best-effort reading and must not be treated as ground truth.

use super::{ApproxModel, MinMax, Mlp, Target};
use crate::environment::ScenarioPreset;

pub const TABLE_I_CAVEAT: &str = "reference weights evaluated under an assumed normalization \
(delta_h and D both scaled by [0, 1000] m); values are indicative only";

const TABLE_NORM: MinMax = MinMax { min: 0.0, max: 1000.0 };

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableIWeights {
    pub hidden_weights: [f64; 4],
    pub hidden_biases: [f64; 4],
    pub output_weight: f64,
    pub output_bias: f64,
}

impl TableIWeights {
    pub fn get(scenario: ScenarioPreset, target: Target) -> Self {
        let col = match scenario {
            ScenarioPreset::Suburban => 0,
            ScenarioPreset::Urban => 1,
            ScenarioPreset::DenseUrban => 2,
            ScenarioPreset::HighRiseUrban => 3,
        };
        let rows = match target {
            Target::D1 => &D1_ROWS,
            Target::D2 => &D2_ROWS,
        };
        let at = |r: usize| rows[r][col];
        Self {
            hidden_weights: [at(0), at(1), at(2), at(3)],
            output_weight: at(4),
            hidden_biases: [at(5), at(6), at(7), at(8)],
            output_bias: at(9),
        }
    }

    pub fn to_mlp(&self, input_norm: MinMax, output_norm: MinMax) -> Mlp {
        Mlp {
            input_weights: self.hidden_weights.to_vec(),
            input_biases: self.hidden_biases.to_vec(),
            output_weights: vec![self.output_weight; 4],
            output_bias: self.output_bias,
            input_norm,
            output_norm,
        }
    }
}

pub(super) fn table_model(scenario: ScenarioPreset) -> ApproxModel {
    let mlp = |t| TableIWeights::get(scenario, t).to_mlp(TABLE_NORM, TABLE_NORM);
    ApproxModel {
        d1: mlp(Target::D1),
        d2: mlp(Target::D2),
    }
}

// Rows: w11 w12 w13 w14 (hidden), w11 (output), b1 b2 b3 b4 (hidden), b1 (output).
// Columns: suburban, urban, dense urban, high-rise urban.
#[rustfmt::skip]
const D1_ROWS: [[f64; 4]; 10] = [
    [16.2579, -1.6587, 2.4455, 1.2291],
    [-5.5254, 5.1759, -3.5892, -0.3727],
    [15.4283, 9.1645, 2.5314, 3.0045],
    [9.6738, 4.9191, 5.2872, -0.7202],
    [5.1456, 3.4246, 3.9771, 2.6658],
    [-3.0018, -1.2296, -2.7575, -1.7200],
    [-1.3995, -3.2076, -0.8322, -1.1132],
    [-0.8644, -1.7848, -2.7720, -2.1148],
    [1.0262, -3.1057, -1.3142, -1.0177],
    [-6.6230, -1.4798, -2.3955, -1.9291],
];

#[rustfmt::skip]
const D2_ROWS: [[f64; 4]; 10] = [
    [6.5142, -13.0707, 4.6853, -2.3706],
    [-10.6197, 8.4525, 0.3355, 6.1472],
    [-3.9213, -1.3332, 5.7374, 1.0547],
    [-0.6352, 7.2757, -7.3002, 3.8038],
    [3.1422, 4.1644, 3.1653, 1.3593],
    [-0.2573, 2.8829, -0.1744, 1.1160],
    [0.7117, -0.5461, -0.8997, -0.8216],
    [-2.7229, -1.9083, 0.3100, 1.6107],
    [-1.4552, 0.1436, 2.9326, -0.3733],
    [-2.8366, -7.8225, -6.7432, -2.6654],
];
