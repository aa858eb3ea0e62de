//! Synthesizes a dense-urban scene, reports its statistics and writes it as
//! CSV to the path given on the command line (stdout otherwise).

use a2g_los::rt_sim::{synthesize_scene, TRIANGLES_PER_BUILDING};
use a2g_los::ScenarioPreset;

fn main() -> a2g_los::Result<()> {
    let scene = synthesize_scene(&ScenarioPreset::DenseUrban.env(), 1000.0, 7)?;
    let n = scene.buildings().len();
    let mean = scene.buildings().iter().map(|b| b.height).sum::<f64>() / n as f64;
    eprintln!(
        "{n} buildings, {} triangles ({TRIANGLES_PER_BUILDING} each), mean height {mean:.1} m",
        scene.triangles().len()
    );
    match std::env::args().nth(1) {
        Some(path) => scene.save(path)?,
        None => print!("{}", scene.to_csv()),
    }
    Ok(())
}
