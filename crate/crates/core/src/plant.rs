//! Trolley-driven pendulum in relative units.
//!
//! The load hangs on a rope of length `l` from a trolley whose acceleration
//! is `accel_gain * u`:
//!
//! ```text
//! phi'' = -(g / l) sin(phi) - (a / l) cos(phi) - damping * phi'
//! ```
//!
//! With the design length `l0 = 1` and `g = 1` the natural period is `2 pi`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_ACCEL_GAIN: f64 = 0.5;
pub const DEFAULT_DT_PER_PERIOD: f64 = 1000.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PlantParams {
    /// Suspension length in units of the design length.
    pub l: f64,
    pub g: f64,
    pub damping: f64,
    /// Trolley acceleration per unit controller output.
    pub accel_gain: f64,
    /// Integration steps per natural period of this plant.
    pub dt_per_period: f64,
}

impl Default for PlantParams {
    fn default() -> Self {
        PlantParams {
            l: 1.0,
            g: 1.0,
            damping: 0.0,
            accel_gain: DEFAULT_ACCEL_GAIN,
            dt_per_period: DEFAULT_DT_PER_PERIOD,
        }
    }
}

impl PlantParams {
    pub fn with_length(self, l: f64) -> Self {
        PlantParams { l, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.l > 0.0 && self.l.is_finite()) {
            return Err(Error::invalid(format!("l must be positive, got {}", self.l)));
        }
        if !(self.g > 0.0 && self.g.is_finite()) {
            return Err(Error::invalid(format!("g must be positive, got {}", self.g)));
        }
        if !(self.damping >= 0.0 && self.damping.is_finite()) {
            return Err(Error::invalid(format!(
                "damping must be non-negative, got {}",
                self.damping
            )));
        }
        if !self.accel_gain.is_finite() {
            return Err(Error::invalid("accel_gain must be finite"));
        }
        if !(self.dt_per_period >= 1.0 && self.dt_per_period.is_finite()) {
            return Err(Error::invalid(format!(
                "dt_per_period must be at least 1, got {}",
                self.dt_per_period
            )));
        }
        Ok(())
    }

    /// `2 pi sqrt(l / g)`.
    pub fn natural_period(&self) -> f64 {
        2.0 * std::f64::consts::PI * (self.l / self.g).sqrt()
    }

    /// Default step: one natural period split into `dt_per_period` steps.
    pub fn default_dt(&self) -> f64 {
        self.natural_period() / self.dt_per_period
    }

    /// Energy per unit mass of the free pendulum.
    pub fn energy(&self, s: &PendulumState) -> f64 {
        0.5 * self.l * self.l * s.phidot * s.phidot + self.g * self.l * (1.0 - s.phi.cos())
    }
}

pub fn natural_period(p: &PlantParams) -> f64 {
    p.natural_period()
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PendulumState {
    pub phi: f64,
    pub phidot: f64,
    pub t: f64,
}

impl PendulumState {
    pub fn new(phi: f64, phidot: f64) -> Self {
        PendulumState { phi, phidot, t: 0.0 }
    }
}

#[inline]
fn accel(p: &PlantParams, phi: f64, phidot: f64, trolley: f64) -> f64 {
    -(p.g * phi.sin() + trolley * phi.cos()) / p.l - p.damping * phidot
}

/// `(phi', phi'')` for control `u`.
pub fn derivatives(p: &PlantParams, s: &PendulumState, u: f64) -> Result<(f64, f64)> {
    if !u.is_finite() {
        return Err(Error::invalid(format!("control must be finite, got {u}")));
    }
    Ok((s.phidot, accel(p, s.phi, s.phidot, p.accel_gain * u)))
}

/// One classical fourth-order Runge-Kutta step with `u` held over the step.
pub fn rk4_step(p: &PlantParams, s: &PendulumState, u: f64, dt: f64) -> Result<PendulumState> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::invalid(format!("dt must be positive, got {dt}")));
    }
    if !u.is_finite() {
        return Err(Error::invalid(format!("control must be finite, got {u}")));
    }
    let a = p.accel_gain * u;
    let f = |phi: f64, w: f64| (w, accel(p, phi, w, a));

    let (k1p, k1w) = f(s.phi, s.phidot);
    let (k2p, k2w) = f(s.phi + 0.5 * dt * k1p, s.phidot + 0.5 * dt * k1w);
    let (k3p, k3w) = f(s.phi + 0.5 * dt * k2p, s.phidot + 0.5 * dt * k2w);
    let (k4p, k4w) = f(s.phi + dt * k3p, s.phidot + dt * k3w);

    Ok(PendulumState {
        phi: s.phi + dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p),
        phidot: s.phidot + dt / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w),
        t: s.t + dt,
    })
}
