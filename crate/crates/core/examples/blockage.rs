//! One link over one building: the straight ray clears the roof but the
//! first Fresnel zone does not, until the frequency is high enough.

use a2g_los::geometry::{allowed_height, fresnel_radius_at};
use a2g_los::rt_sim::{los_blocked_fresnel, los_blocked_geometric, Building, Scene};
use a2g_los::{FresnelSpec, LinkGeometry};
use nalgebra::Vector3;

fn main() -> a2g_los::Result<()> {
    let (h_tx, h_rx, d) = (40.0, 1.5, 600.0);
    let link = LinkGeometry::new(h_tx, h_rx, d)?;
    let tx = Vector3::new(0.0, 0.0, h_tx);
    let rx = Vector3::new(d, 0.0, h_rx);
    // the straight path is at 20.75 m over the midpoint
    let scene = Scene::from_buildings(vec![Building::new(d / 2.0, 0.0, 20.0, 19.0)?], 1500.0, 0);

    println!("geometric: blocked = {}", los_blocked_geometric(&scene, tx, rx));
    for f_ghz in [0.9, 2.4, 6.0, 28.0, 60.0] {
        let spec = FresnelSpec::from_frequency(f_ghz * 1e9)?;
        println!(
            "{f_ghz:5} GHz: radius {:.2} m, allowed height {:.2} m, blocked = {}",
            fresnel_radius_at(&spec, d, d / 2.0)?,
            allowed_height(&link, &spec, d / 2.0)?,
            los_blocked_fresnel(&scene, tx, rx, &spec)
        );
    }
    Ok(())
}
