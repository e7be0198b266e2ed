//! Orbital kinematics and flat-ground geometry.
//!
//! The ground is the plane `z = 0`. In the satellite frame the satellite sits
//! at `(0, 0, h_sat)` and `x` points along the direction of motion; the ground
//! frame coincides with it at `t = 0` and is fixed to the Earth afterwards.

use crate::error::{Error, Result};

/// Physical constants used by the orbit model. Overridable from the scene
/// configuration so tests can pin them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Gravitational constant (m^3 kg^-1 s^-2).
    pub g: f64,
    /// Earth mass (kg).
    pub m_earth: f64,
    /// Earth radius (m).
    pub r_earth: f64,
    /// Speed of light (m/s).
    pub c: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            g: 6.674e-11,
            m_earth: 5.972e24,
            r_earth: 6.371e6,
            c: 299_792_458.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitState {
    /// Orbit height (m).
    pub h_sat: f64,
    /// Linear speed (m/s).
    pub v_sat: f64,
    /// Angular speed (rad/s).
    pub w_sat: f64,
    /// Speed of the sub-satellite point over the ground (m/s).
    pub v_ground: f64,
}

/// Circular-orbit speeds for a satellite at height `h_sat`.
pub fn satellite_kinematics(h_sat: f64, consts: &PhysicalConstants) -> Result<OrbitState> {
    if !(h_sat >= 0.0) || !h_sat.is_finite() {
        return Err(Error::invalid("h_sat", "must be a finite value >= 0"));
    }
    let radius = consts.r_earth + h_sat;
    let v_sat = (consts.g * consts.m_earth / radius).sqrt();
    let w_sat = v_sat / radius;
    Ok(OrbitState {
        h_sat,
        v_sat,
        w_sat,
        v_ground: w_sat * consts.r_earth,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Frame {
    Satellite,
    Ground,
}

/// A point on the ground plane, tagged with the frame its coordinates are in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundPoint {
    /// Along-track coordinate (m).
    pub x: f64,
    /// Cross-track coordinate (m).
    pub y: f64,
    pub frame: Frame,
}

impl GroundPoint {
    pub const fn satellite(x: f64, y: f64) -> Self {
        Self {
            x,
            y,
            frame: Frame::Satellite,
        }
    }

    pub const fn ground(x: f64, y: f64) -> Self {
        Self {
            x,
            y,
            frame: Frame::Ground,
        }
    }

    /// Express the point in the satellite frame at time `t`.
    pub fn to_satellite_frame(self, t: f64, v_ground: f64) -> Self {
        match self.frame {
            Frame::Satellite => self,
            Frame::Ground => Self::satellite(self.x - v_ground * t, self.y),
        }
    }

    /// Express the point in the ground frame at time `t`.
    pub fn to_ground_frame(self, t: f64, v_ground: f64) -> Self {
        match self.frame {
            Frame::Ground => self,
            Frame::Satellite => Self::ground(self.x + v_ground * t, self.y),
        }
    }
}

/// Distance from the satellite to a satellite-frame ground point.
pub fn slant_range(p: &GroundPoint, h_sat: f64) -> f64 {
    debug_assert_eq!(p.frame, Frame::Satellite);
    (p.x * p.x + p.y * p.y + h_sat * h_sat).sqrt()
}

/// Unit vector pointing from the satellite towards `p`.
pub fn direction_to_point(p: &GroundPoint, h_sat: f64) -> [f64; 3] {
    let r = slant_range(p, h_sat);
    [p.x / r, p.y / r, -h_sat / r]
}
