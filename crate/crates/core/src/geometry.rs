//! Link geometry and the first-order Fresnel clearance zone.
//!
//! All lengths are meters. The Fresnel ellipsoid here is parameterized by
//! the horizontal TX-RX distance, as the analytic model uses it; the
//! ray-tracing simulator builds its own ellipsoid from the slant length.

use crate::{Error, Result};

/// Speed of light in vacuum, m/s (exact SI value).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Heights of both terminals and their horizontal separation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGeometry {
    h_tx: f64,
    h_rx: f64,
    d_rx: f64,
}

impl LinkGeometry {
    /// The transmitter is the higher terminal: `h_tx >= h_rx` is required.
    pub fn new(h_tx: f64, h_rx: f64, d_rx: f64) -> Result<Self> {
        if !(h_tx > 0.0) || !h_tx.is_finite() {
            return Err(Error::domain("h_tx", h_tx, "must be positive and finite"));
        }
        if !(h_rx >= 0.0) {
            return Err(Error::domain("h_rx", h_rx, "must be non-negative"));
        }
        if h_rx > h_tx {
            return Err(Error::domain("h_rx", h_rx, "must not exceed h_tx"));
        }
        if !(d_rx > 0.0) || !d_rx.is_finite() {
            return Err(Error::domain("d_rx", d_rx, "must be positive and finite"));
        }
        Ok(Self { h_tx, h_rx, d_rx })
    }

    pub fn h_tx(&self) -> f64 {
        self.h_tx
    }

    pub fn h_rx(&self) -> f64 {
        self.h_rx
    }

    pub fn d_rx(&self) -> f64 {
        self.d_rx
    }

    /// Transceiver height difference `h_tx - h_rx`.
    pub fn delta_h(&self) -> f64 {
        self.h_tx - self.h_rx
    }

    /// Length of the straight TX-RX segment.
    pub fn slant_length(&self) -> f64 {
        self.d_rx.hypot(self.delta_h())
    }
}

/// Carrier wavelength and Fresnel-zone order.
///
/// A wavelength of exactly zero is accepted and means optical line of sight
/// (the infinite-frequency limit, where the clearance zone collapses onto the
/// direct segment).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FresnelSpec {
    wavelength: f64,
    order: u32,
}

impl FresnelSpec {
    pub fn new(wavelength: f64, order: u32) -> Result<Self> {
        if !(wavelength >= 0.0) || !wavelength.is_finite() {
            return Err(Error::domain(
                "wavelength",
                wavelength,
                "must be non-negative and finite",
            ));
        }
        if order == 0 {
            return Err(Error::domain("order", 0.0, "Fresnel zone order starts at 1"));
        }
        Ok(Self { wavelength, order })
    }

    /// First-order zone for a carrier frequency in hertz.
    pub fn from_frequency(f_hz: f64) -> Result<Self> {
        Self::new(wavelength_from_frequency(f_hz)?, 1)
    }

    /// Zero wavelength: plain geometric line of sight.
    pub fn optical() -> Self {
        Self {
            wavelength: 0.0,
            order: 1,
        }
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// `n * lambda`, the product every Fresnel formula uses.
    pub fn n_lambda(&self) -> f64 {
        f64::from(self.order) * self.wavelength
    }
}

/// Semi-axes of the Fresnel ellipsoid. `y_semi` runs along the link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FresnelAxes {
    pub x_semi: f64,
    pub y_semi: f64,
    pub z_semi: f64,
}

pub fn wavelength_from_frequency(f_hz: f64) -> Result<f64> {
    if !(f_hz > 0.0) {
        return Err(Error::domain("frequency", f_hz, "must be positive"));
    }
    Ok(SPEED_OF_LIGHT / f_hz)
}

pub fn fresnel_axes(spec: &FresnelSpec, d_rx: f64) -> Result<FresnelAxes> {
    if !(d_rx > 0.0) {
        return Err(Error::domain("d_rx", d_rx, "must be positive"));
    }
    let nl_d = spec.n_lambda() * d_rx;
    let x = nl_d.sqrt() / 2.0;
    Ok(FresnelAxes {
        x_semi: x,
        y_semi: (nl_d / 4.0 + d_rx * d_rx / 4.0).sqrt(),
        z_semi: x,
    })
}

/// Clearance radius at distance `d_los` from the transmitter.
///
/// Piecewise-linear in `d_los`: zero at both terminals, `sqrt(n lambda d)/2`
/// at the midpoint.
pub fn fresnel_radius_at(spec: &FresnelSpec, d_rx: f64, d_los: f64) -> Result<f64> {
    check_along_link(d_rx, d_los)?;
    Ok(radius_unchecked(spec, d_rx, d_los))
}

pub(crate) fn radius_unchecked(spec: &FresnelSpec, d_rx: f64, d_los: f64) -> f64 {
    let nearest_terminal = d_los.min(d_rx - d_los).max(0.0);
    (spec.n_lambda() * d_rx).sqrt() * nearest_terminal / d_rx
}

/// Maximum building height at `d_los` that keeps the clearance zone free.
///
/// May be negative; callers decide what a negative allowance means.
pub fn allowed_height(link: &LinkGeometry, spec: &FresnelSpec, d_los: f64) -> Result<f64> {
    check_along_link(link.d_rx, d_los)?;
    Ok(allowed_height_unchecked(link, spec, d_los))
}

/// Same formula without the range check. Positions past the receiver get a
/// zero clearance radius instead of a negative one.
pub(crate) fn allowed_height_unchecked(link: &LinkGeometry, spec: &FresnelSpec, d_los: f64) -> f64 {
    let cos_theta = link.d_rx / link.slant_length();
    link.h_tx - d_los * link.delta_h() / link.d_rx - radius_unchecked(spec, link.d_rx, d_los) * cos_theta
}

pub fn elevation_angle(link: &LinkGeometry) -> f64 {
    (link.delta_h() / link.d_rx).atan()
}

fn check_along_link(d_rx: f64, d_los: f64) -> Result<()> {
    if !(d_rx > 0.0) {
        return Err(Error::domain("d_rx", d_rx, "must be positive"));
    }
    if !(0.0..=d_rx).contains(&d_los) {
        return Err(Error::domain("d_los", d_los, "must lie in [0, d_rx]"));
    }
    Ok(())
}
