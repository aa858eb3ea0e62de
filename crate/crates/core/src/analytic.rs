//! Closed-form LoS probability over a statistically described city.
//!
//! The path crosses `N_b = floor(d sqrt(alpha beta) / 1000)` buildings, the
//! `i`-th one at `d_i = (i - 0.5) d / N_b + W / 2`. Each must be shorter
//! than the allowed height at its position, and heights are independent
//! Rayleigh draws, so the probability is a product of CDF values.
//!
//! A non-positive allowed height means the building blocks with certainty:
//! that factor is zero rather than the CDF of a squared negative number.

use rayon::prelude::*;

use crate::environment::{building_count, height_cdf, mean_width, Environment};
use crate::geometry::{allowed_height_unchecked, FresnelSpec, LinkGeometry};
use crate::{Error, Result};

/// Analytic model for one environment and carrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LosModel {
    env: Environment,
    fresnel: FresnelSpec,
    width: Option<f64>,
}

impl LosModel {
    pub fn new(env: Environment, fresnel: FresnelSpec) -> Self {
        Self {
            env,
            fresnel,
            width: None,
        }
    }

    /// Replaces the mean building width derived from `(alpha, beta)`. The
    /// building count is unaffected.
    pub fn with_width(mut self, width: f64) -> Result<Self> {
        if !(width >= 0.0) || !width.is_finite() {
            return Err(Error::domain("width", width, "must be non-negative"));
        }
        self.width = Some(width);
        Ok(self)
    }

    pub fn env(&self) -> &Environment {
        &self.env
    }

    pub fn fresnel(&self) -> &FresnelSpec {
        &self.fresnel
    }

    pub fn width(&self) -> f64 {
        self.width.unwrap_or_else(|| mean_width(&self.env))
    }

    pub fn p_los(&self, link: &LinkGeometry) -> f64 {
        let n = building_count(&self.env, link.d_rx());
        if n == 0 {
            return 1.0;
        }
        let half_w = self.width() / 2.0;
        let gamma = self.env.gamma();
        let mut p = 1.0;
        for i in 1..=n {
            let d_i = (i as f64 - 0.5) * link.d_rx() / n as f64 + half_w;
            let allowed = allowed_height_unchecked(link, &self.fresnel, d_i);
            if allowed <= 0.0 {
                return 0.0;
            }
            p *= height_cdf(gamma, allowed);
        }
        p
    }

    /// Probability at horizontal distance `d_rx`, with `d_rx = 0` mapped to
    /// certain line of sight.
    pub fn p_los_at(&self, h_tx: f64, h_rx: f64, d_rx: f64) -> Result<f64> {
        if d_rx == 0.0 {
            LinkGeometry::new(h_tx, h_rx, 1.0)?;
            return Ok(1.0);
        }
        Ok(self.p_los(&LinkGeometry::new(h_tx, h_rx, d_rx)?))
    }

    /// Evaluates a distance sweep in parallel; output order follows `d_grid`.
    pub fn curve(&self, h_tx: f64, h_rx: f64, d_grid: &[f64]) -> Result<Vec<f64>> {
        d_grid.par_iter().map(|&d| self.p_los_at(h_tx, h_rx, d)).collect()
    }

    pub fn max_comm_distance(&self, h_tx: f64, h_rx: f64, threshold: f64, search: &McdSearch) -> Result<Option<f64>> {
        if !(threshold > 0.0 && threshold < 1.0) {
            return Err(Error::domain("threshold", threshold, "must lie in (0, 1)"));
        }
        search.validate()?;
        let above = |d: f64| -> Result<bool> { Ok(self.p_los_at(h_tx, h_rx, d)? >= threshold) };

        let steps = (search.max_range / search.pitch).floor() as usize;
        let mut lo = 0.0;
        let mut hi = None;
        for k in 1..=steps {
            let d = k as f64 * search.pitch;
            if above(d)? {
                lo = d;
            } else {
                hi = Some(d);
                break;
            }
        }
        let Some(mut hi) = hi else {
            return Ok(None);
        };
        while hi - lo > search.tolerance {
            let mid = 0.5 * (lo + hi);
            if above(mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(Some(lo))
    }

    pub fn p_los_vs_elevation(&self, h_tx: f64, h_rx: f64, angles: &[f64]) -> Result<Vec<f64>> {
        let dh = h_tx - h_rx;
        angles
            .par_iter()
            .map(|&theta| {
                if !(theta > 0.0 && theta <= std::f64::consts::FRAC_PI_2) {
                    return Err(Error::domain("elevation angle", theta, "must lie in (0, pi/2]"));
                }
                let d = (dh / theta.tan()).max(0.0);
                self.p_los_at(h_tx, h_rx, d)
            })
            .collect()
    }
}

/// Search settings for the maximum communication distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McdSearch {
    /// Farthest distance scanned, meters.
    pub max_range: f64,
    /// Scan step, meters.
    pub pitch: f64,
    /// Bisection stops once the bracket is this narrow, meters.
    pub tolerance: f64,
}

impl Default for McdSearch {
    fn default() -> Self {
        Self {
            max_range: 20_000.0,
            pitch: 1.0,
            tolerance: 0.1,
        }
    }
}

impl McdSearch {
    fn validate(&self) -> Result<()> {
        if !(self.pitch > 0.0) {
            return Err(Error::domain("pitch", self.pitch, "must be positive"));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::domain("tolerance", self.tolerance, "must be positive"));
        }
        if !(self.max_range >= self.pitch) {
            return Err(Error::domain("max_range", self.max_range, "must be at least one pitch"));
        }
        Ok(())
    }
}

/// Optical LoS through zero-thickness buildings.
pub fn p_los_baseline(link: &LinkGeometry, env: &Environment) -> f64 {
    let n = building_count(env, link.d_rx());
    let gamma2 = env.gamma() * env.gamma();
    (1..=n)
        .map(|i| {
            let h = link.h_tx() - (i as f64 - 0.5) / n as f64 * link.delta_h();
            if h <= 0.0 {
                0.0
            } else {
                -(-h * h / (2.0 * gamma2)).exp_m1()
            }
        })
        .product()
}

/// LoS probability with building width and Fresnel clearance.
pub fn p_los(link: &LinkGeometry, env: &Environment, spec: &FresnelSpec) -> f64 {
    LosModel::new(*env, *spec).p_los(link)
}

/// Largest distance up to which the probability stays at or above
/// `threshold`. `None` when the default 20 km range never drops below it.
pub fn max_comm_distance(
    h_tx: f64,
    h_rx: f64,
    env: &Environment,
    spec: &FresnelSpec,
    threshold: f64,
) -> Result<Option<f64>> {
    LosModel::new(*env, *spec).max_comm_distance(h_tx, h_rx, threshold, &McdSearch::default())
}

pub fn p_los_vs_elevation(
    env: &Environment,
    spec: &FresnelSpec,
    h_tx: f64,
    h_rx: f64,
    angles: &[f64],
) -> Result<Vec<f64>> {
    LosModel::new(*env, *spec).p_los_vs_elevation(h_tx, h_rx, angles)
}

/// Smallest angle on `angles` (ascending) from which the curve stays at or
/// above `threshold` up to the last angle.
pub fn elevation_threshold(angles: &[f64], probs: &[f64], threshold: f64) -> Option<f64> {
    let mut found = None;
    for (&theta, &p) in angles.iter().zip(probs).rev() {
        if p >= threshold {
            found = Some(theta);
        } else {
            break;
        }
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environment::ScenarioPreset;
    use crate::geometry::wavelength_from_frequency;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn f_ghz(f: f64) -> FresnelSpec {
        FresnelSpec::from_frequency(f * 1e9).unwrap()
    }

    // Scalar loop over the straight-path product with no shared helpers.
    fn baseline_oracle(h_tx: f64, h_rx: f64, d: f64, a: f64, b: f64, g: f64) -> f64 {
        let nb = (d * (a * b).sqrt() / 1000.0).floor() as i64;
        let mut p = 1.0;
        let mut i = 1;
        while i <= nb {
            let x = h_tx - ((i as f64 - 0.5) / nb as f64) * (h_tx - h_rx);
            p *= 1.0 - (-(x * x) / (2.0 * g * g)).exp();
            i += 1;
        }
        p
    }

    // Termwise composition of the product, the per-building allowed height
    // and the Rayleigh CDF, written independently of `LosModel`.
    fn composed_oracle(h_tx: f64, h_rx: f64, d: f64, a: f64, b: f64, g: f64, lambda: f64) -> f64 {
        let nb = (d * (a * b).sqrt() / 1000.0).floor() as i64;
        let w = 1000.0 * (a / b).sqrt();
        let dh = h_tx - h_rx;
        let cos_t = d / (d * d + dh * dh).sqrt();
        let mut p = 1.0;
        for i in 1..=nb {
            let di = (i as f64 - 0.5) * d / nb as f64 + w / 2.0;
            let r = if di <= d / 2.0 {
                (lambda * d).sqrt() * di / d
            } else {
                ((lambda * d).sqrt() * (d - di) / d).max(0.0)
            };
            let allowed = h_tx - di * dh / d - r * cos_t;
            let pi = if allowed > 0.0 {
                1.0 - (-(allowed * allowed) / (2.0 * g * g)).exp()
            } else {
                0.0
            };
            p *= pi;
        }
        p
    }

    #[test]
    fn baseline_examples() {
        let urban = ScenarioPreset::Urban.env();
        let short = LinkGeometry::new(70.0, 1.5, 50.0).unwrap();
        assert_eq!(p_los_baseline(&short, &urban), 1.0);

        let ground = LinkGeometry::new(1e-9, 0.0, 1000.0).unwrap();
        assert!(p_los_baseline(&ground, &urban) < 1e-20);

        let link = LinkGeometry::new(70.0, 1.5, 500.0).unwrap();
        let want = baseline_oracle(70.0, 1.5, 500.0, 0.3, 500.0, 15.0);
        assert_relative_eq!(p_los_baseline(&link, &urban), want, max_relative = 1e-14);
        // Frozen from the oracle above: N_b = 6.
        assert_relative_eq!(want, 0.049_498_150_382_895_64, max_relative = 1e-12);
    }

    #[test]
    fn reduces_to_baseline() {
        let urban = ScenarioPreset::Urban.env();
        let m = LosModel::new(urban, FresnelSpec::optical()).with_width(0.0).unwrap();
        for d in [10.0, 82.0, 500.0, 1000.0, 3000.0] {
            let link = LinkGeometry::new(70.0, 1.5, d).unwrap();
            assert!((m.p_los(&link) - p_los_baseline(&link, &urban)).abs() <= 1e-12);
        }
    }

    #[test]
    fn very_high_transmitter_sees_everything() {
        let env = ScenarioPreset::HighRiseUrban.env();
        let link = LinkGeometry::new(1e6, 1.5, 1000.0).unwrap();
        assert!(p_los(&link, &env, &f_ghz(6.0)) > 0.999);
    }

    #[test]
    fn composed_paths_agree() {
        let lambda = wavelength_from_frequency(6e9).unwrap();
        for (h_tx, h_rx, d) in [(70.0, 1.5, 800.0), (30.0, 1.5, 200.0), (500.0, 2.0, 1000.0)] {
            for p in ScenarioPreset::ALL {
                let e = p.env();
                let link = LinkGeometry::new(h_tx, h_rx, d).unwrap();
                let got = p_los(&link, &e, &f_ghz(6.0));
                let want = composed_oracle(h_tx, h_rx, d, e.alpha(), e.beta(), e.gamma(), lambda);
                assert!(
                    (got - want).abs() <= 1e-9 * want.max(1e-300),
                    "{p} {d}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn negative_allowance_blocks() {
        // A 200 m wide building centered at 150 m on a 100 m link lies past
        // the receiver: allowed height 50 - 150 * 50 / 100 = -25 m.
        let m = LosModel::new(ScenarioPreset::Urban.env(), FresnelSpec::optical())
            .with_width(200.0)
            .unwrap();
        let link = LinkGeometry::new(50.0, 0.0, 100.0).unwrap();
        assert_eq!(m.p_los(&link), 0.0);
        // Squaring the negative bracket would have given a positive factor.
        assert!(height_cdf(15.0, 25.0) > 0.5);
        assert!(m.with_width(-1.0).is_err());
    }

    #[test]
    fn mcd_first_crossing_and_errors() {
        let env = ScenarioPreset::HighRiseUrban.env();
        let spec = f_ghz(6.0);
        let mcd = max_comm_distance(30.0, 1.5, &env, &spec, 0.6).unwrap().unwrap();
        let m = LosModel::new(env, spec);
        assert!(m.p_los_at(30.0, 1.5, mcd).unwrap() >= 0.6);
        assert!(m.p_los_at(30.0, 1.5, mcd + 0.1).unwrap() < 0.6);
        assert!(max_comm_distance(30.0, 1.5, &env, &spec, 1.0).is_err());
        assert!(max_comm_distance(30.0, 1.5, &env, &spec, 0.0).is_err());

        let short = McdSearch {
            max_range: 50.0,
            ..McdSearch::default()
        };
        assert_eq!(m.max_comm_distance(30.0, 1.5, 0.6, &short).unwrap(), None);
    }

    #[test]
    fn elevation_examples() {
        let env = ScenarioPreset::Urban.env();
        let spec = f_ghz(28.0);
        let p = p_los_vs_elevation(&env, &spec, 500.0, 2.0, &[std::f64::consts::FRAC_PI_2 - 1e-9]).unwrap();
        assert_eq!(p, vec![1.0]);
        assert!(p_los_vs_elevation(&env, &spec, 500.0, 2.0, &[0.0]).is_err());
    }

    #[test]
    fn elevation_threshold_scans_from_the_top() {
        let a = [10.0, 20.0, 30.0, 40.0];
        assert_eq!(elevation_threshold(&a, &[0.7, 0.5, 0.6, 0.9], 0.6), Some(30.0));
        assert_eq!(elevation_threshold(&a, &[0.1, 0.2, 0.3, 0.4], 0.6), None);
    }

    proptest! {
        #[test]
        fn bounded_and_monotone(h_rx in 0.0f64..10.0, dh in 1.0f64..1000.0, d in 1.0f64..2000.0,
                                f in 0.5f64..60.0, p in 0usize..4) {
            let env = ScenarioPreset::ALL[p].env();
            let spec = f_ghz(f);
            let m = LosModel::new(env, spec);
            let base = m.p_los_at(h_rx + dh, h_rx, d).unwrap();
            prop_assert!((0.0..=1.0).contains(&base));
            if building_count(&env, d) == 0 {
                prop_assert_eq!(base, 1.0);
            }
            // Higher transmitter, same plateau.
            prop_assert!(m.p_los_at(h_rx + dh + 10.0, h_rx, d).unwrap() >= base);
            // Higher frequency.
            let hf = LosModel::new(env, f_ghz(f * 2.0));
            prop_assert!(hf.p_los_at(h_rx + dh, h_rx, d).unwrap() >= base);
        }

        #[test]
        fn nonincreasing_across_plateaus(h_rx in 0.0f64..10.0, dh in 1.0f64..1000.0, k in 1usize..40, p in 0usize..4) {
            let env = ScenarioPreset::ALL[p].env();
            let m = LosModel::new(env, f_ghz(6.0));
            // Start of consecutive plateaus in N_b.
            let step = 1.0 / env.buildings_per_meter();
            let a = m.p_los_at(h_rx + dh, h_rx, k as f64 * step + 1e-6).unwrap();
            let b = m.p_los_at(h_rx + dh, h_rx, (k + 1) as f64 * step + 1e-6).unwrap();
            prop_assert!(b <= a + 1e-12);
        }
    }
}
