//! Physical constants and conversions between SI and Hartree atomic units.
//!
//! All core computations run in atomic units (ħ = e = m_e = 4πε₀ = 1).
//! Conversions to SI happen only at the boundary (CLI, reporting).

use std::f64::consts::PI;

/// CODATA 2018 base constants in SI and the atomic units derived from them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Elementary charge, C.
    pub electron_charge: f64,
    /// Electron mass, kg.
    pub electron_mass: f64,
    /// Vacuum permittivity, F/m.
    pub vacuum_permittivity: f64,
    /// Speed of light, m/s.
    pub speed_of_light: f64,
}

pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
    hbar: 1.054_571_817e-34,
    electron_charge: 1.602_176_634e-19,
    electron_mass: 9.109_383_701_5e-31,
    vacuum_permittivity: 8.854_187_812_8e-12,
    speed_of_light: 299_792_458.0,
};

impl Default for PhysicalConstants {
    fn default() -> Self {
        CODATA_2018
    }
}

impl PhysicalConstants {
    /// Bohr radius, m.
    pub fn bohr_radius(&self) -> f64 {
        4.0 * PI * self.vacuum_permittivity * self.hbar * self.hbar
            / (self.electron_mass * self.electron_charge * self.electron_charge)
    }

    /// Hartree energy, J.
    pub fn hartree(&self) -> f64 {
        self.hbar * self.hbar / (self.electron_mass * self.bohr_radius().powi(2))
    }

    /// Atomic unit of time, s.
    pub fn atomic_time(&self) -> f64 {
        self.hbar / self.hartree()
    }

    /// Atomic unit of electric field, V/m.
    pub fn atomic_field(&self) -> f64 {
        self.hartree() / (self.electron_charge * self.bohr_radius())
    }

    /// Atomic unit of intensity (energy flux), W/m².
    ///
    /// A field of amplitude `E` (a.u.) carries `c·E²/(8π)` of these units.
    pub fn atomic_intensity(&self) -> f64 {
        self.hartree() / (self.atomic_time() * self.bohr_radius().powi(2))
    }

    /// Speed of light in atomic units (≈ 137.036).
    pub fn speed_of_light_au(&self) -> f64 {
        self.speed_of_light * self.atomic_time() / self.bohr_radius()
    }

    pub fn hartree_to_joule(&self, e: f64) -> f64 {
        e * self.hartree()
    }

    pub fn joule_to_hartree(&self, e: f64) -> f64 {
        e / self.hartree()
    }

    /// Energy (a.u.) to frequency in Hz via E = h·ν.
    pub fn hartree_to_hz(&self, e: f64) -> f64 {
        e * self.hartree() / (2.0 * PI * self.hbar)
    }

    pub fn hz_to_hartree(&self, nu: f64) -> f64 {
        nu * 2.0 * PI * self.hbar / self.hartree()
    }

    pub fn bohr_to_meter(&self, r: f64) -> f64 {
        r * self.bohr_radius()
    }

    pub fn meter_to_bohr(&self, r: f64) -> f64 {
        r / self.bohr_radius()
    }

    pub fn intensity_au_to_si(&self, i: f64) -> f64 {
        i * self.atomic_intensity()
    }

    pub fn intensity_si_to_au(&self, i: f64) -> f64 {
        i / self.atomic_intensity()
    }

    pub fn field_au_to_si(&self, f: f64) -> f64 {
        f * self.atomic_field()
    }

    pub fn field_si_to_au(&self, f: f64) -> f64 {
        f / self.atomic_field()
    }

    /// Inverse atomic time to s⁻¹.
    pub fn rate_au_to_si(&self, g: f64) -> f64 {
        g / self.atomic_time()
    }

    pub fn rate_si_to_au(&self, g: f64) -> f64 {
        g * self.atomic_time()
    }

    /// Area in Bohr² to m².
    pub fn area_au_to_si(&self, a: f64) -> f64 {
        a * self.bohr_radius().powi(2)
    }

    pub fn area_si_to_au(&self, a: f64) -> f64 {
        a / self.bohr_radius().powi(2)
    }

    /// Photon angular frequency (a.u.) to vacuum wavelength in nm.
    pub fn omega_au_to_nm(&self, omega: f64) -> f64 {
        2.0 * PI * self.speed_of_light_au() / omega * self.bohr_radius() * 1e9
    }

    pub fn nm_to_omega_au(&self, lambda_nm: f64) -> f64 {
        2.0 * PI * self.speed_of_light_au() * self.bohr_radius() * 1e9 / lambda_nm
    }

    /// Coefficient in a.u. (rate per intensity) to s⁻¹·(W/m²)⁻¹.
    pub fn coefficient_au_to_si(&self, beta: f64) -> f64 {
        beta / (self.atomic_time() * self.atomic_intensity())
    }

    pub fn coefficient_si_to_au(&self, beta: f64) -> f64 {
        beta * self.atomic_time() * self.atomic_intensity()
    }
}

/// Vacuum permittivity in atomic units.
pub const EPSILON0_AU: f64 = 1.0 / (4.0 * PI);
