use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Triangle, Vec3};
use crate::environment::{mean_width, sample_height, Environment};
use crate::{Error, Result};

/// Four walls of two triangles each plus a two-triangle roof.
pub const TRIANGLES_PER_BUILDING: usize = 10;

/// Box building with a square footprint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Building {
    pub center_x: f64,
    pub center_y: f64,
    pub width: f64,
    pub height: f64,
}

impl Building {
    pub fn new(center_x: f64, center_y: f64, width: f64, height: f64) -> Result<Self> {
        if !(width > 0.0) {
            return Err(Error::domain("building width", width, "must be positive"));
        }
        if !(height > 0.0) {
            return Err(Error::domain("building height", height, "must be positive"));
        }
        Ok(Self {
            center_x,
            center_y,
            width,
            height,
        })
    }

    pub fn min_corner(&self) -> Vec3 {
        let h = self.width / 2.0;
        Vec3::new(self.center_x - h, self.center_y - h, 0.0)
    }

    pub fn max_corner(&self) -> Vec3 {
        let h = self.width / 2.0;
        Vec3::new(self.center_x + h, self.center_y + h, self.height)
    }

    /// Strictly inside the footprint (boundary excluded).
    pub fn footprint_contains(&self, x: f64, y: f64) -> bool {
        let h = self.width / 2.0;
        (x - self.center_x).abs() < h && (y - self.center_y).abs() < h
    }

    pub fn triangles(&self) -> [Triangle; TRIANGLES_PER_BUILDING] {
        let lo = self.min_corner();
        let hi = self.max_corner();
        let corner = |i: usize, z: f64| match i % 4 {
            0 => Vec3::new(lo.x, lo.y, z),
            1 => Vec3::new(hi.x, lo.y, z),
            2 => Vec3::new(hi.x, hi.y, z),
            _ => Vec3::new(lo.x, hi.y, z),
        };
        let t = |a, b, c| Triangle { v0: a, v1: b, v2: c };
        let mut out = [t(Vec3::zeros(), Vec3::zeros(), Vec3::zeros()); TRIANGLES_PER_BUILDING];
        for side in 0..4 {
            let (a, b) = (corner(side, 0.0), corner(side + 1, 0.0));
            let (c, d) = (corner(side + 1, hi.z), corner(side, hi.z));
            out[2 * side] = t(a, b, c);
            out[2 * side + 1] = t(a, c, d);
        }
        out[8] = t(corner(0, hi.z), corner(1, hi.z), corner(2, hi.z));
        out[9] = t(corner(0, hi.z), corner(2, hi.z), corner(3, hi.z));
        out
    }
}

/// How building centers are placed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Layout {
    /// Regular square grid with pitch `1000 / sqrt(beta)`.
    #[default]
    Grid,
    /// `beta` buildings per km² at uniform random centers; overlaps allowed.
    UniformRandom,
}

/// A synthesized city centered on the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    buildings: Vec<Building>,
    triangles: Vec<Triangle>,
    extent: f64,
    seed: u64,
}

impl Scene {
    pub fn from_buildings(buildings: Vec<Building>, extent: f64, seed: u64) -> Self {
        let triangles = buildings.iter().flat_map(|b| b.triangles()).collect();
        Self {
            buildings,
            triangles,
            extent,
            seed,
        }
    }

    pub fn buildings(&self) -> &[Building] {
        &self.buildings
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn building_triangles(&self, i: usize) -> &[Triangle] {
        &self.triangles[i * TRIANGLES_PER_BUILDING..(i + 1) * TRIANGLES_PER_BUILDING]
    }

    /// Side of the square city, meters.
    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Whether `(x, y)` at height `z` lies inside some building.
    pub fn is_indoor(&self, x: f64, y: f64, z: f64) -> bool {
        self.buildings
            .iter()
            .any(|b| z < b.height && b.footprint_contains(x, y))
    }

    /// `center_x,center_y,width,height` rows under an `# extent=… seed=…` line.
    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "# extent={} seed={}\ncenter_x,center_y,width,height\n",
            self.extent, self.seed
        );
        for b in &self.buildings {
            writeln!(out, "{},{},{},{}", b.center_x, b.center_y, b.width, b.height).unwrap();
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut extent = None;
        let mut seed = 0;
        let mut header = false;
        let mut buildings = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let err = |message: String| Error::Parse { line: idx + 1, message };
            if line.is_empty() {
                continue;
            }
            if let Some(c) = line.strip_prefix('#') {
                for tok in c.split_whitespace() {
                    match tok.split_once('=') {
                        Some(("extent", v)) => extent = Some(v.parse().map_err(|_| err(format!("bad extent '{v}'")))?),
                        Some(("seed", v)) => seed = v.parse().map_err(|_| err(format!("bad seed '{v}'")))?,
                        _ => {}
                    }
                }
                continue;
            }
            if !header {
                if line != "center_x,center_y,width,height" {
                    return Err(err(format!("unexpected header '{line}'")));
                }
                header = true;
                continue;
            }
            let v = line
                .split(',')
                .map(|f| {
                    f.trim()
                        .parse::<f64>()
                        .map_err(|_| err(format!("'{f}' is not a number")))
                })
                .collect::<Result<Vec<_>>>()?;
            let [x, y, w, h] = v[..] else {
                return Err(err(format!("expected 4 columns, got {}", v.len())));
            };
            buildings.push(Building::new(x, y, w, h).map_err(|e| err(e.to_string()))?);
        }
        let extent = extent.ok_or_else(|| Error::Parse {
            line: 0,
            message: "missing '# extent=' header".into(),
        })?;
        Ok(Self::from_buildings(buildings, extent, seed))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        Ok(std::fs::write(path, self.to_csv())?)
    }
}

pub fn synthesize_scene(env: &Environment, extent: f64, seed: u64) -> Result<Scene> {
    synthesize_scene_with(env, extent, seed, Layout::Grid)
}

pub fn synthesize_scene_with(env: &Environment, extent: f64, seed: u64, layout: Layout) -> Result<Scene> {
    if !(extent > 0.0) || !extent.is_finite() {
        return Err(Error::domain("extent", extent, "must be positive"));
    }
    let width = mean_width(env);
    let pitch = 1000.0 / env.beta().sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let height = |rng: &mut ChaCha8Rng| loop {
        let h = sample_height(env.gamma(), rng);
        if h > 0.0 {
            break h;
        }
    };
    let buildings = match layout {
        Layout::Grid => {
            if width >= pitch {
                return Err(Error::InconsistentEnvironment {
                    alpha: env.alpha(),
                    beta: env.beta(),
                    width,
                    pitch,
                });
            }
            let n = (extent / pitch).floor() as usize;
            let offset = n as f64 * pitch / 2.0;
            let mut out = Vec::with_capacity(n * n);
            for iy in 0..n {
                for ix in 0..n {
                    let cx = (ix as f64 + 0.5) * pitch - offset;
                    let cy = (iy as f64 + 0.5) * pitch - offset;
                    out.push(Building::new(cx, cy, width, height(&mut rng))?);
                }
            }
            out
        }
        Layout::UniformRandom => {
            if width >= extent {
                return Err(Error::InconsistentEnvironment {
                    alpha: env.alpha(),
                    beta: env.beta(),
                    width,
                    pitch: extent,
                });
            }
            let count = (env.beta() * extent * extent / 1e6).round() as usize;
            let half = (extent - width) / 2.0;
            (0..count)
                .map(|_| {
                    let cx = rng.random_range(-half..=half);
                    let cy = rng.random_range(-half..=half);
                    Building::new(cx, cy, width, height(&mut rng))
                })
                .collect::<Result<_>>()?
        }
    };
    Ok(Scene::from_buildings(buildings, extent, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environment::ScenarioPreset;
    use approx::assert_relative_eq;

    #[test]
    fn urban_grid_dimensions() {
        let env = ScenarioPreset::Urban.env();
        let s = synthesize_scene(&env, 1000.0, 1).unwrap();
        // pitch 44.72 m -> 22 cells per side.
        assert_eq!(s.buildings().len(), 22 * 22);
        assert_eq!(s.triangles().len(), TRIANGLES_PER_BUILDING * s.buildings().len());
        assert_relative_eq!(s.buildings()[0].width, 24.4949, epsilon = 1e-4);
        let b0 = s.buildings()[0];
        let b1 = s.buildings()[1];
        assert_relative_eq!(b1.center_x - b0.center_x, 1000.0 / 500f64.sqrt(), max_relative = 1e-12);
        for t in s.triangles() {
            for v in [t.v0, t.v1, t.v2] {
                assert!(v.x.abs() <= 500.0 && v.y.abs() <= 500.0);
            }
            assert!(t.area() > 0.0);
        }
    }

    #[test]
    fn heights_follow_rayleigh_mean() {
        let env = ScenarioPreset::Urban.env();
        // 100 x 100 cells.
        let s = synthesize_scene(&env, 100.0 * 1000.0 / 500f64.sqrt() + 1.0, 9).unwrap();
        assert_eq!(s.buildings().len(), 10_000);
        let mean = s.buildings().iter().map(|b| b.height).sum::<f64>() / 1e4;
        let want = 15.0 * (std::f64::consts::PI / 2.0).sqrt();
        assert!((mean - want).abs() / want < 0.02);
    }

    #[test]
    fn deterministic_and_seed_sensitive() {
        let env = ScenarioPreset::DenseUrban.env();
        let a = synthesize_scene(&env, 800.0, 5).unwrap();
        assert_eq!(a, synthesize_scene(&env, 800.0, 5).unwrap());
        assert_ne!(a, synthesize_scene(&env, 800.0, 6).unwrap());
    }

    #[test]
    fn overlapping_grid_rejected() {
        let env = Environment::new(1.0, 500.0, 10.0).unwrap();
        assert!(matches!(
            synthesize_scene(&env, 1000.0, 1),
            Err(Error::InconsistentEnvironment { .. })
        ));
    }

    #[test]
    fn uniform_layout_count() {
        let env = ScenarioPreset::Urban.env();
        let s = synthesize_scene_with(&env, 1000.0, 3, Layout::UniformRandom).unwrap();
        assert_eq!(s.buildings().len(), 500);
        assert!(s
            .buildings()
            .iter()
            .all(|b| b.center_x.abs() + b.width / 2.0 <= 500.0 + 1e-9));
    }

    #[test]
    fn mesh_closes_the_box() {
        let b = Building::new(1.0, 2.0, 4.0, 10.0).unwrap();
        let area: f64 = b.triangles().iter().map(|t| t.area()).sum();
        assert_relative_eq!(area, 4.0 * 4.0 * 10.0 + 16.0, max_relative = 1e-12);
        assert!(b.footprint_contains(2.9, 3.9));
        assert!(!b.footprint_contains(3.0, 2.0));
    }

    #[test]
    fn csv_round_trip() {
        let env = ScenarioPreset::Urban.env();
        let s = synthesize_scene(&env, 300.0, 42).unwrap();
        let text = s.to_csv();
        assert!(text.starts_with("# extent=300 seed=42\ncenter_x,center_y,width,height\n"));
        assert_eq!(text.lines().count(), 2 + s.buildings().len());
        assert_eq!(Scene::from_csv(&text).unwrap(), s);
        assert!(Scene::from_csv("center_x,center_y,width,height\n").is_err());
    }
}
