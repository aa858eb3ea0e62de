//! Breakpoint distance (last point still at P >= 0.999) of each model for
//! three platform heights, retrained networks included.

use a2g_los::approx::{FIVE_GCM, THREE_GPP};
use a2g_los::cli::{breakpoint, default_model};
use a2g_los::{p_los_approx, ApproxParams, FresnelSpec, LosModel, ScenarioPreset};

fn main() -> a2g_los::Result<()> {
    let env = ScenarioPreset::Urban.env();
    let spec = FresnelSpec::from_frequency(28e9)?;
    let model = default_model(&env, &spec, 1.5)?;
    let d: Vec<f64> = (1..=1000).map(f64::from).collect();
    let curve = |p: &ApproxParams| d.iter().map(|&x| p_los_approx(x, p)).collect::<Vec<_>>();
    let show = |v: Option<f64>| v.map_or("none".to_string(), |x| x.to_string());

    println!("h_tx,analytic,retrained,3gpp,5gcm");
    for h_tx in [30.0, 120.0, 500.0] {
        let analytic = LosModel::new(env, spec).curve(h_tx, 1.5, &d)?;
        let retrained = curve(&model.params(h_tx - 1.5)?);
        println!(
            "{h_tx},{},{},{},{}",
            show(breakpoint(&d, &analytic)),
            show(breakpoint(&d, &retrained)),
            show(breakpoint(&d, &curve(&THREE_GPP))),
            show(breakpoint(&d, &curve(&FIVE_GCM)))
        );
    }
    Ok(())
}
