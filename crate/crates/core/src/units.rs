//! Physical constants and the conversion between CGS and oscillator units.
//!
//! All numerics run in oscillator units where ℏ = m = ω = 1, so lengths are
//! measured in √(ℏ/mω) and energies in ℏω. Conversion happens only at the
//! boundaries.

use serde::{Deserialize, Serialize};

use crate::error::{positive, Result};

/// Rydberg energy R∞ in eV.
pub const RYDBERG_EV: f64 = 13.605_691_72;
/// Bohr radius a_B in cm.
pub const BOHR_RADIUS_CM: f64 = 0.529_177e-8;
/// Reduced Planck constant in erg·s.
pub const HBAR_CGS: f64 = 1.054_571_817e-27;
/// Electron rest energy m_e c² in eV.
pub const ELECTRON_REST_ENERGY_EV: f64 = 510_998.95;
/// Fine-structure constant.
pub const FINE_STRUCTURE_ALPHA: f64 = 7.297_352_569_3e-3;

/// Reference figures for a typical neutron star. Documentation only; none of
/// these enter a computation except as user-overridable defaults.
pub mod neutron_star {
    /// Number of neutrons in a coherent superfluid state.
    pub const NEUTRON_COUNT: f64 = 1e57;
    /// Typical radius in cm.
    pub const RADIUS_CM: f64 = 3e5;
    /// Typical mass density in g/cm³.
    pub const DENSITY_G_PER_CM3: f64 = 2.8e14;
    /// Typical surface magnetic field in gauss.
    pub const MAGNETIC_FIELD_GAUSS: f64 = 1e12;
    /// Typical rotational energy in erg.
    pub const ROTATIONAL_ENERGY_ERG: f64 = 2e49;
    /// Quoted order of the deviation parameter at the star radius.
    pub const QUOTED_DELTA: f64 = 1e-26;
}

/// Constants used by the hydrogen formulas. Energies are in eV and lengths in
/// cm; `hbar` is in erg·s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub rydberg_infinity: f64,
    pub bohr_radius: f64,
    pub electron_rest_energy: f64,
    pub fine_structure_alpha: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            hbar: HBAR_CGS,
            rydberg_infinity: RYDBERG_EV,
            bohr_radius: BOHR_RADIUS_CM,
            electron_rest_energy: ELECTRON_REST_ENERGY_EV,
            fine_structure_alpha: FINE_STRUCTURE_ALPHA,
        }
    }
}

impl PhysicalConstants {
    pub fn validate(&self) -> Result<()> {
        positive("hbar", self.hbar)?;
        positive("rydberg_infinity", self.rydberg_infinity)?;
        positive("bohr_radius", self.bohr_radius)?;
        positive("electron_rest_energy", self.electron_rest_energy)?;
        positive("fine_structure_alpha", self.fine_structure_alpha)?;
        Ok(())
    }

    /// Hartree energy e²/a_B = 2 R∞, in eV.
    pub fn hartree_energy(&self) -> f64 {
        2.0 * self.rydberg_infinity
    }
}

/// How user-facing numbers relate to the internal oscillator units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum UnitSystem {
    /// Inputs are already in units with ℏ = m = ω = 1.
    Dimensionless,
    /// Inputs are CGS: mass in g, angular frequency in rad/s, ℏ in erg·s.
    Cgs { mass: f64, omega: f64, hbar: f64 },
}

impl UnitSystem {
    pub fn cgs(mass: f64, omega: f64) -> Result<Self> {
        Ok(UnitSystem::Cgs {
            mass: positive("mass", mass)?,
            omega: positive("omega", omega)?,
            hbar: HBAR_CGS,
        })
    }

    /// √(ℏ/mω) in the external length unit.
    pub fn length_scale(&self) -> f64 {
        match *self {
            UnitSystem::Dimensionless => 1.0,
            UnitSystem::Cgs { mass, omega, hbar } => (hbar / (mass * omega)).sqrt(),
        }
    }

    /// ℏω in the external energy unit.
    pub fn energy_scale(&self) -> f64 {
        match *self {
            UnitSystem::Dimensionless => 1.0,
            UnitSystem::Cgs { omega, hbar, .. } => hbar * omega,
        }
    }

    pub fn length_to_internal(&self, x: f64) -> f64 {
        x / self.length_scale()
    }

    pub fn length_from_internal(&self, x: f64) -> f64 {
        x * self.length_scale()
    }

    pub fn energy_to_internal(&self, e: f64) -> f64 {
        e / self.energy_scale()
    }

    pub fn energy_from_internal(&self, e: f64) -> f64 {
        e * self.energy_scale()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn printed_values() {
        let c = PhysicalConstants::default();
        assert_eq!(c.rydberg_infinity, 13.60569172);
        assert_eq!(c.bohr_radius, 0.529177e-8);
        c.validate().unwrap();
    }

    #[test]
    fn rejects_bad_constants() {
        let c = PhysicalConstants {
            bohr_radius: 0.0,
            ..Default::default()
        };
        assert!(c.validate().is_err());
        assert!(UnitSystem::cgs(-1.0, 1.0).is_err());
    }

    #[test]
    fn neutron_scales() {
        // neutron mass in g, a slow oscillator
        let u = UnitSystem::cgs(1.674_927e-24, 1.0e3).unwrap();
        let l = u.length_scale();
        assert!((l * l * 1.674_927e-24 * 1.0e3 / HBAR_CGS - 1.0).abs() < 1e-12);
        assert_eq!(u.energy_scale(), HBAR_CGS * 1.0e3);
    }

    proptest! {
        #[test]
        fn round_trip(mass in 1e-30f64..1e3, omega in 1e-3f64..1e20, x in -1e10f64..1e10) {
            let u = UnitSystem::cgs(mass, omega).unwrap();
            let back = u.length_from_internal(u.length_to_internal(x));
            prop_assert!((back - x).abs() <= 1e-12 * x.abs());
            let e = u.energy_from_internal(u.energy_to_internal(x));
            prop_assert!((e - x).abs() <= 1e-12 * x.abs());
        }
    }
}
