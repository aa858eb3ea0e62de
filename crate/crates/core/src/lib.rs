//! Line-of-sight probability for air-to-ground radio links over urban areas
//! described by the ITU-R P.1410 statistics (built-up fraction, building
//! density, Rayleigh height scale).
//!
//! Three independent routes to the same quantity live here:
//!
//! * [`analytic`]: a closed-form product over the buildings expected along
//!   the path, with building width and first-order Fresnel clearance.
//! * [`approx`] + [`fit`]: the two-parameter breakpoint/decay model whose
//!   parameters are generated from the height difference by a small
//!   trained network.
//! * [`rt_sim`]: Monte-Carlo estimates over synthesized city scenes using
//!   ray/triangle and Fresnel-ellipsoid blockage tests.
//!
//! The `a2g-los` binary wraps all of it behind CSV-producing subcommands
//! (see [`cli`]), and `examples/` has one runnable program per capability.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod approx;
pub mod cli;
pub mod environment;
mod error;
pub mod fit;
pub mod geometry;
pub mod rt_sim;

pub use error::{Error, Result};

pub use analytic::{max_comm_distance, p_los, p_los_baseline, p_los_vs_elevation, LosModel};
pub use approx::{p_los_approx, ApproxModel, ApproxParams, Mlp};
pub use environment::{Environment, ScenarioPreset};
pub use geometry::{FresnelSpec, LinkGeometry};
