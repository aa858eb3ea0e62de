//! Two-parameter breakpoint/decay LoS model and its height-dependent
//! parameter networks.
//!
//! `P(d) = min(D1 / d, 1) (1 - exp(-d / D2)) + exp(-d / D2)`: exactly one up
//! to the breakpoint `D1`, then decaying with scale `D2`.

pub(crate) mod mlp;
mod table1;

pub use mlp::{MinMax, Mlp};
pub use table1::{TableIWeights, TABLE_I_CAVEAT};

use std::fmt;

use crate::environment::ScenarioPreset;
use crate::{Error, Result};

/// Breakpoint (3GPP TR 38.901 / ITU-R M.2135 urban macro values).
pub const THREE_GPP: ApproxParams = ApproxParams { d1: 18.0, d2: 63.0 };
/// 5GCM recommendation.
pub const FIVE_GCM: ApproxParams = ApproxParams { d1: 20.0, d2: 66.0 };

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxParams {
    pub(crate) d1: f64,
    pub(crate) d2: f64,
}

impl ApproxParams {
    pub fn new(d1: f64, d2: f64) -> Result<Self> {
        if !(d1 > 0.0) || !d1.is_finite() {
            return Err(Error::domain("d1", d1, "breakpoint distance must be positive"));
        }
        if !(d2 > 0.0) || !d2.is_finite() {
            return Err(Error::domain("d2", d2, "decay distance must be positive"));
        }
        Ok(Self { d1, d2 })
    }

    /// Breakpoint distance, meters.
    pub fn d1(&self) -> f64 {
        self.d1
    }

    /// Decay distance, meters.
    pub fn d2(&self) -> f64 {
        self.d2
    }
}

pub fn p_los_approx(d_rx: f64, params: &ApproxParams) -> f64 {
    if d_rx <= params.d1 {
        return 1.0;
    }
    let tail = (-d_rx / params.d2).exp();
    params.d1 / d_rx * (1.0 - tail) + tail
}

/// Which parameter a network predicts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    D1,
    D2,
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::D1 => "d1",
            Target::D2 => "d2",
        })
    }
}

/// A pair of networks mapping height difference to `(D1, D2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxModel {
    pub d1: Mlp,
    pub d2: Mlp,
}

impl ApproxModel {
    /// Network outputs clamped to the target range each network was
    /// normalized over, so extrapolation cannot produce `D <= 0`.
    pub fn params(&self, delta_h: f64) -> Result<ApproxParams> {
        let clamp = |m: &Mlp| {
            let n = m.output_norm();
            m.forward(delta_h).clamp(n.min, n.max)
        };
        ApproxParams::new(clamp(&self.d1), clamp(&self.d2))
    }

    pub fn p_los(&self, delta_h: f64, d_rx: f64) -> Result<f64> {
        Ok(p_los_approx(d_rx, &self.params(delta_h)?))
    }
}

/// Where the parameter networks come from.
#[derive(Debug, Clone, Copy)]
pub enum ParamSource<'a> {
    /// Networks trained by [`crate::fit`] for the scenario.
    Retrained(&'a ApproxModel),
    /// Published reference weights under a guessed normalization.
    TableI,
}

/// Parameters plus any caveat that applies to how they were produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamsEstimate {
    pub params: ApproxParams,
    pub warning: Option<&'static str>,
}

pub fn params_for_scenario(scenario: ScenarioPreset, delta_h: f64, source: ParamSource<'_>) -> Result<ParamsEstimate> {
    if !(delta_h > 0.0) {
        return Err(Error::domain("delta_h", delta_h, "must be positive"));
    }
    match source {
        ParamSource::Retrained(model) => Ok(ParamsEstimate {
            params: model.params(delta_h)?,
            warning: None,
        }),
        ParamSource::TableI => {
            let model = table1::table_model(scenario);
            Ok(ParamsEstimate {
                params: model.params(delta_h)?,
                warning: Some(TABLE_I_CAVEAT),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn plateau_then_decay() {
        let p = ApproxParams::new(50.0, 200.0).unwrap();
        assert_eq!(p_los_approx(0.0, &p), 1.0);
        assert_eq!(p_los_approx(50.0, &p), 1.0);
        assert!(p_los_approx(1e6, &p) < 1e-4);
    }

    #[test]
    fn three_gpp_at_100m() {
        let e = (-100.0f64 / 63.0).exp();
        let want = 0.18 * (1.0 - e) + e;
        assert_relative_eq!(p_los_approx(100.0, &THREE_GPP), want, max_relative = 1e-15);
        assert_relative_eq!(want, 0.3476, epsilon = 1e-4);
        assert_eq!(FIVE_GCM.d1(), 20.0);
        assert_eq!(FIVE_GCM.d2(), 66.0);
    }

    #[test]
    fn param_validation() {
        assert!(ApproxParams::new(0.0, 1.0).is_err());
        assert!(ApproxParams::new(1.0, -1.0).is_err());
        assert!(ApproxParams::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn table_source_is_flagged() {
        let est = params_for_scenario(ScenarioPreset::Urban, 100.0, ParamSource::TableI);
        match est {
            Ok(e) => assert_eq!(e.warning, Some(TABLE_I_CAVEAT)),
            Err(Error::Domain { .. }) => {}
            Err(e) => panic!("{e}"),
        }
        assert!(params_for_scenario(ScenarioPreset::Urban, 0.0, ParamSource::TableI).is_err());
    }

    #[test]
    fn retrained_source_is_deterministic() {
        let constant = |v: f64| {
            Mlp::constant(
                4,
                MinMax::new(0.0, 1000.0).unwrap(),
                MinMax::new(0.0, 1000.0).unwrap(),
                v,
            )
        };
        let model = ApproxModel {
            d1: constant(0.1),
            d2: constant(0.3),
        };
        let a = params_for_scenario(ScenarioPreset::Urban, 28.5, ParamSource::Retrained(&model)).unwrap();
        let b = params_for_scenario(ScenarioPreset::Urban, 28.5, ParamSource::Retrained(&model)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.warning, None);
        assert_relative_eq!(a.params.d1(), 100.0, max_relative = 1e-12);
        assert_relative_eq!(a.params.d2(), 300.0, max_relative = 1e-12);
    }

    proptest! {
        #[test]
        fn shape_properties(d1 in 0.5f64..1000.0, d2 in 0.5f64..3000.0, a in 0.0f64..5000.0, b in 0.0f64..5000.0) {
            let p = ApproxParams::new(d1, d2).unwrap();
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let (plo, phi) = (p_los_approx(lo, &p), p_los_approx(hi, &p));
            prop_assert!(phi > 0.0 && phi <= 1.0);
            if lo > d1 && hi > lo * (1.0 + 1e-9) {
                prop_assert!(phi < plo);
            }
            if hi <= d1 {
                prop_assert_eq!(phi, 1.0);
            }
            // Continuity at the breakpoint.
            prop_assert!((p_los_approx(d1 * (1.0 + 1e-12), &p) - 1.0).abs() < 1e-9);
        }
    }
}
