//! Parameters from the published reference weights. Their normalization was
//! never stated, so these numbers are indicative only.

use a2g_los::approx::{params_for_scenario, ParamSource};
use a2g_los::ScenarioPreset;

fn main() -> a2g_los::Result<()> {
    let mut caveat = None;
    println!("scenario,delta_h,d1,d2");
    for preset in ScenarioPreset::ALL {
        for dh in [30.0, 100.0, 300.0, 1000.0] {
            let est = params_for_scenario(preset, dh, ParamSource::TableI)?;
            caveat = caveat.or(est.warning);
            println!("{preset},{dh},{:.2},{:.2}", est.params.d1(), est.params.d2());
        }
    }
    if let Some(c) = caveat {
        eprintln!("note: {c}");
    }
    Ok(())
}
