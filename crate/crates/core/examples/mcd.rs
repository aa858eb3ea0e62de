//! Maximum communication distance at a 0.6 LoS threshold for several
//! transmitter heights over a high-rise city at 6 GHz.

use a2g_los::analytic::McdSearch;
use a2g_los::{Environment, FresnelSpec, LosModel};

fn main() -> a2g_los::Result<()> {
    let env = Environment::new(0.5, 300.0, 50.0)?;
    let model = LosModel::new(env, FresnelSpec::from_frequency(6e9)?);
    println!("h_tx_m,mcd_m");
    for h_tx in [30.0, 300.0, 800.0, 1500.0] {
        match model.max_comm_distance(h_tx, 1.5, 0.6, &McdSearch::default())? {
            Some(d) => println!("{h_tx},{d:.1}"),
            None => println!("{h_tx},none"),
        }
    }
    Ok(())
}
