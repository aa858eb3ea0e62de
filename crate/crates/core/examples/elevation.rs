//! Smallest elevation angle from which the analytic LoS probability stays
//! above 0.6, per preset, for a 500 m platform and a 2 m receiver.

use a2g_los::analytic::elevation_threshold;
use a2g_los::{FresnelSpec, LosModel, ScenarioPreset};

fn main() -> a2g_los::Result<()> {
    let spec = FresnelSpec::from_frequency(28e9)?;
    let deg: Vec<f64> = (1..=179).map(|k| k as f64 * 0.5).collect();
    let rad: Vec<f64> = deg.iter().map(|d| d.to_radians()).collect();
    for preset in ScenarioPreset::ALL {
        let p = LosModel::new(preset.env(), spec).p_los_vs_elevation(500.0, 2.0, &rad)?;
        let theta = elevation_threshold(&deg, &p, 0.6);
        println!("{preset:12} {}", theta.map_or("none".into(), |t| format!("{t:.1} deg")));
    }
    Ok(())
}
