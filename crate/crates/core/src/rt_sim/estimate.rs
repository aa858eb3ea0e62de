use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{los_blocked_fresnel, synthesize_scene_with, Layout, Scene, Vec3};
use crate::environment::Environment;
use crate::geometry::FresnelSpec;
use crate::{Error, Result};

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

/// SplitMix64 step applied to `seed + stream`; used to derive independent
/// per-realization seeds so results do not depend on execution order.
pub fn splitmix64(seed: u64, stream: u64) -> u64 {
    let mut z = seed.wrapping_add(stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    /// Independent scenes, one transmitter each.
    pub realizations: usize,
    pub links_per_ring: usize,
    pub seed: u64,
    /// Scene side; `None` means `2 * max(d) + 100` m.
    pub extent: Option<f64>,
    pub layout: Layout,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            realizations: 10,
            links_per_ring: 72,
            seed: 1,
            extent: None,
            layout: Layout::Grid,
        }
    }
}

/// Scene side used when `cfg.extent` is unset.
pub fn default_extent(d_max: f64) -> f64 {
    2.0 * d_max + 100.0
}

/// The scene drawn for realization `r` of a run whose largest ring is `d_max`.
pub fn realization_scene(env: &Environment, cfg: &SimConfig, d_max: f64, r: usize) -> Result<Scene> {
    let extent = cfg.extent.unwrap_or_else(|| default_extent(d_max));
    synthesize_scene_with(env, extent, splitmix64(cfg.seed, 2 * r as u64), cfg.layout)
}

/// Clear-link fraction on one ring.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingEstimate {
    pub d: f64,
    pub p: f64,
    /// Half-width of the 95% normal-approximation interval.
    pub ci_half_width: f64,
    /// Outdoor receivers that were tested.
    pub links: usize,
}

/// Estimates LoS probability against horizontal distance.
///
/// Every realization draws a scene, puts the transmitter at `h_tx` above a
/// uniformly random point of the central grid cell and places
/// `links_per_ring` receivers at equal angular spacing (random phase) on
/// each ring. Receivers that fall inside a building taller than `h_rx` are
/// indoors and are left out of the count.
pub fn estimate_p_los(
    env: &Environment,
    spec: &FresnelSpec,
    h_tx: f64,
    h_rx: f64,
    d_grid: &[f64],
    cfg: &SimConfig,
) -> Result<Vec<RingEstimate>> {
    if cfg.realizations == 0 {
        return Err(Error::domain("realizations", 0.0, "need at least one"));
    }
    if cfg.links_per_ring == 0 {
        return Err(Error::domain("links_per_ring", 0.0, "need at least one"));
    }
    if !(h_tx > 0.0) || !(h_rx >= 0.0) {
        return Err(Error::domain("h_tx", h_tx, "heights must be positive"));
    }
    if let Some(&bad) = d_grid.iter().find(|d| !(**d > 0.0) || !d.is_finite()) {
        return Err(Error::domain("ring radius", bad, "must be positive"));
    }
    let d_max = d_grid.iter().copied().fold(0.0, f64::max);
    let extent = cfg.extent.unwrap_or_else(|| default_extent(d_max));
    if d_max > extent / 2.0 {
        return Err(Error::RingOutsideScene {
            radius: d_max,
            half_extent: extent / 2.0,
        });
    }
    let pitch = 1000.0 / env.beta().sqrt();

    let per_realization: Vec<Vec<(usize, usize)>> = (0..cfg.realizations)
        .into_par_iter()
        .map(|r| -> Result<Vec<(usize, usize)>> {
            let scene = realization_scene(env, cfg, d_max, r)?;
            let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(cfg.seed, 2 * r as u64 + 1));
            let tx = Vec3::new(
                rng.random_range(-0.5..0.5) * pitch,
                rng.random_range(-0.5..0.5) * pitch,
                h_tx,
            );
            let phase: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let step = std::f64::consts::TAU / cfg.links_per_ring as f64;
            Ok(d_grid
                .par_iter()
                .map(|&d| {
                    let mut clear = 0;
                    let mut total = 0;
                    for k in 0..cfg.links_per_ring {
                        let a = phase + k as f64 * step;
                        let rx = Vec3::new(tx.x + d * a.cos(), tx.y + d * a.sin(), h_rx);
                        if scene.is_indoor(rx.x, rx.y, rx.z) {
                            continue;
                        }
                        total += 1;
                        clear += !los_blocked_fresnel(&scene, tx, rx, spec) as usize;
                    }
                    (clear, total)
                })
                .collect())
        })
        .collect::<Result<_>>()?;

    d_grid
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let (clear, total) = per_realization
                .iter()
                .fold((0, 0), |(c, t), row| (c + row[i].0, t + row[i].1));
            if total == 0 {
                return Err(Error::EmptyRing { radius: d });
            }
            let p = clear as f64 / total as f64;
            Ok(RingEstimate {
                d,
                p,
                ci_half_width: Z95 * (p * (1.0 - p) / total as f64).sqrt(),
                links: total,
            })
        })
        .collect()
}

/// Same estimate on the rings that correspond to elevation angles (radians)
/// seen from the receiver height: `d = (h_tx - h_rx) / tan(theta)`.
pub fn estimate_p_los_vs_elevation(
    env: &Environment,
    spec: &FresnelSpec,
    h_tx: f64,
    h_rx: f64,
    angles: &[f64],
    cfg: &SimConfig,
) -> Result<Vec<RingEstimate>> {
    let d_grid = angles
        .iter()
        .map(|&theta| {
            if !(theta > 0.0 && theta < std::f64::consts::FRAC_PI_2) {
                return Err(Error::domain("elevation angle", theta, "must lie in (0, pi/2)"));
            }
            Ok((h_tx - h_rx) / theta.tan())
        })
        .collect::<Result<Vec<f64>>>()?;
    estimate_p_los(env, spec, h_tx, h_rx, &d_grid, cfg)
}
