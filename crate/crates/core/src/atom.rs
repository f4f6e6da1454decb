//! Atomic species parameters and the derived recoil scales.
//!
//! Everything downstream works in rad/s, seconds and integer recoil units.
//! This is the only place where SI constants are turned into those units.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Unified atomic mass unit, kg.
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;
/// Mass of ⁸⁷Rb in atomic mass units.
pub const RB87_MASS_U: f64 = 86.909_180_527;
/// ⁸⁷Rb D1 line vacuum wavelength, m.
pub const RB87_D1_WAVELENGTH: f64 = 794.978_851e-9;
/// ⁸⁷Rb D2 line vacuum wavelength, m.
pub const RB87_D2_WAVELENGTH: f64 = 780.241_209e-9;
/// Round-number wavelength used for quick spacing estimates, m.
pub const NOMINAL_WAVELENGTH: f64 = 800e-9;
/// Standard gravity, m/s².
pub const STANDARD_GRAVITY: f64 = 9.81;

/// Species parameters.
///
/// The recoil lattice uses a single wavenumber, taken from the D2 line; the
/// small difference between D1 and D2 photon momenta is neglected, so a D1
/// Raman step is booked as the same two lattice units as a D2 one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AtomParams {
    pub mass_kg: f64,
    pub wavelength_d1_m: f64,
    pub wavelength_d2_m: f64,
    pub nominal_wavelength_m: f64,
    pub gravity_m_s2: f64,
}

impl Default for AtomParams {
    fn default() -> Self {
        Self::rubidium87()
    }
}

impl AtomParams {
    pub fn rubidium87() -> Self {
        AtomParams {
            mass_kg: RB87_MASS_U * ATOMIC_MASS_UNIT,
            wavelength_d1_m: RB87_D1_WAVELENGTH,
            wavelength_d2_m: RB87_D2_WAVELENGTH,
            nominal_wavelength_m: NOMINAL_WAVELENGTH,
            gravity_m_s2: STANDARD_GRAVITY,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("mass_kg", self.mass_kg),
            ("wavelength_d1_m", self.wavelength_d1_m),
            ("wavelength_d2_m", self.wavelength_d2_m),
            ("nominal_wavelength_m", self.nominal_wavelength_m),
            ("gravity_m_s2", self.gravity_m_s2),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::config(format!(
                    "atom.{name} must be positive, got {value}"
                )));
            }
        }
        Ok(())
    }

    /// Lattice wavenumber k = 2π/λ_D2, 1/m.
    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength_d2_m
    }

    pub fn wavenumber_d1(&self) -> f64 {
        2.0 * PI / self.wavelength_d1_m
    }

    /// Lattice wavelength (the D2 line), m.
    pub fn lattice_wavelength(&self) -> f64 {
        self.wavelength_d2_m
    }

    /// v_r = ħk/m, m/s.
    pub fn recoil_velocity(&self) -> f64 {
        HBAR * self.wavenumber() / self.mass_kg
    }

    /// ω_r = ħk²/2m, rad/s.
    pub fn recoil_frequency(&self) -> f64 {
        let k = self.wavenumber();
        HBAR * k * k / (2.0 * self.mass_kg)
    }

    /// Kinetic energy of a lattice momentum (n_z, n_x), as an angular frequency.
    pub fn kinetic(&self, nz: i32, nx: i32) -> f64 {
        let (z, x) = (nz as f64, nx as f64);
        self.recoil_frequency() * (z * z + x * x)
    }
}
