//! Monte-Carlo LoS estimation over synthesized city scenes.
//!
//! Buildings are square boxes on a regular grid with i.i.d. Rayleigh
//! heights. Each box is meshed into ten triangles (four walls, the roof);
//! links are tested against the mesh either along the direct segment or
//! against the whole first Fresnel ellipsoid.

mod blockage;
mod estimate;
mod intersect;
mod scene;

pub use blockage::{los_blocked_fresnel, los_blocked_geometric};
pub use estimate::{
    default_extent, estimate_p_los, estimate_p_los_vs_elevation, realization_scene, splitmix64, RingEstimate, SimConfig,
};
pub use intersect::{ray_triangle_intersect, Hit, Ray, Triangle, DET_EPSILON};
pub use scene::{synthesize_scene, synthesize_scene_with, Building, Layout, Scene, TRIANGLES_PER_BUILDING};

/// 3D point or vector in meters; `z` is height above ground.
pub type Vec3 = nalgebra::Vector3<f64>;
