//! Fits (D1, D2) to the analytic curves of an urban area, trains the two
//! networks and reports how well the resulting closed form tracks the
//! analytic model. Pass a directory to also save the networks.

use a2g_los::fit::{self, TrainConfig};
use a2g_los::{FresnelSpec, LosModel, ScenarioPreset};

fn main() -> a2g_los::Result<()> {
    let env = ScenarioPreset::Urban.env();
    let spec = FresnelSpec::from_frequency(6e9)?;
    let dh: Vec<f64> = (1..=100).map(|k| k as f64 * 10.0).collect();
    let built = fit::build_dataset(&env, &spec, 1.5, &dh, &fit::default_distance_grid())?;
    println!("{} records, {} rejected", built.dataset.len(), built.rejected.len());

    let (model, outcomes) = fit::train_model(&built.dataset, &TrainConfig::default())?;
    for (name, o) in ["D1", "D2"].iter().zip(&outcomes) {
        println!(
            "{name}: train rmse {:.2} m, validation rmse {:.2} m",
            o.train_rmse, o.validation_rmse
        );
    }
    for delta_h in [28.5, 118.5, 498.5] {
        let p = model.params(delta_h)?;
        println!("delta_h {delta_h:6}: D1 {:7.2} D2 {:7.2}", p.d1(), p.d2());
    }

    let grid: Vec<f64> = (0..=100).map(|k| k as f64 * 10.0).collect();
    let e = fit::approx_vs_analytic(&model, &LosModel::new(env, spec), 1.5, &dh, &grid)?;
    println!(
        "vs analytic: mse {:.4}, mean abs {:.4}, max abs {:.4}",
        e.mse, e.mean_abs, e.max_abs
    );

    if let Some(dir) = std::env::args().nth(1) {
        std::fs::create_dir_all(&dir)?;
        model.d1.save(format!("{dir}/d1.mlp"))?;
        model.d2.save(format!("{dir}/d2.mlp"))?;
        built.dataset.save(format!("{dir}/dataset.csv"))?;
    }
    Ok(())
}
