//! How carrier frequency and building width move the LoS curve
//! (h_tx = 70 m, h_rx = 1.5 m, urban density, gamma = 15 m).

use a2g_los::{Environment, FresnelSpec, LosModel};

fn main() -> a2g_los::Result<()> {
    let env = Environment::new(0.3, 500.0, 15.0)?;
    let d: Vec<f64> = (1..=10).map(|k| k as f64 * 100.0).collect();
    let specs = [
        ("1.2GHz", FresnelSpec::from_frequency(1.2e9)?),
        ("6GHz", FresnelSpec::from_frequency(6e9)?),
        ("28GHz", FresnelSpec::from_frequency(28e9)?),
        ("inf", FresnelSpec::optical()),
    ];
    print!("width_m,f");
    for x in &d {
        print!(",{x}");
    }
    println!();
    for w in [0.0, 20.0, 40.0] {
        for (name, spec) in &specs {
            let p = LosModel::new(env, *spec).with_width(w)?.curve(70.0, 1.5, &d)?;
            print!("{w},{name}");
            for v in p {
                print!(",{v:.4}");
            }
            println!();
        }
    }
    Ok(())
}
