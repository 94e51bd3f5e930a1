//! Second-order level shift in a single quantized circular mode prepared in
//! a Fock state `|n_L⟩`, and its approach to the classical-field result.
//!
//! With the mode coupling `ε_L = √(ħω/(2ε₀V))` the shift is
//! `ΔE = (2πω/V)·[A₊ n_L + A₋ (n_L + 1)]` in atomic units, where
//! `A₊ = −Σ w₊² A(E_φ + ω)` collects absorption paths and
//! `A₋ = −Σ w₋² A(E_φ − ω)` emission paths. At `ε_L² = 8π n_L ω / V` the
//! classical shift is `(2πω/V)·n_L·(A₊ + A₋)`, so the two differ by the
//! spontaneous term `(2πω/V)·A₋` alone.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hydrogenic::{self, AtomicState, SphericalComponent};
use crate::radial::{RadialBasis, ResolventQuery};
use crate::stark::{self, LaserField};
use crate::units::EPSILON0_AU;

/// A single field mode holding `n_photons` quanta in volume `volume` (Bohr³).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FockMode {
    n_photons: u64,
    volume: f64,
    omega: f64,
    /// Constant added to the mode energy, in units of ħω (e.g. ½ for the
    /// zero-point energy). It cancels in every energy difference.
    offset: f64,
}

impl FockMode {
    pub fn new(n_photons: u64, volume: f64, omega: f64) -> Result<Self> {
        if !(volume > 0.0 && volume.is_finite()) {
            return Err(Error::InvalidInput(format!("mode volume {volume} must be positive")));
        }
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidInput(format!("ω = {omega} must be positive")));
        }
        if n_photons > 1 << 52 {
            return Err(Error::InvalidInput(format!("n_L = {n_photons} exceeds 2^52")));
        }
        Ok(Self {
            n_photons,
            volume,
            omega,
            offset: 0.0,
        })
    }

    /// Mode whose photon energy density `n_L ω / V` matches a classical
    /// intensity `I = c·n_L ω / V` (a.u.).
    pub fn matching_intensity(n_photons: u64, omega: f64, intensity: f64) -> Result<Self> {
        if !(intensity > 0.0 && intensity.is_finite()) {
            return Err(Error::InvalidInput(format!("intensity {intensity} must be positive")));
        }
        if n_photons == 0 {
            return Err(Error::InvalidInput("n_L must be ≥ 1 to match a classical field".into()));
        }
        let density = intensity / crate::units::CODATA_2018.speed_of_light_au();
        Self::new(n_photons, n_photons as f64 * omega / density, omega)
    }

    pub fn with_offset(mut self, offset: f64) -> Self {
        self.offset = offset;
        self
    }

    pub fn n_photons(&self) -> u64 {
        self.n_photons
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Vacuum field per photon, `√(ħω/(2ε₀V))` (a.u.).
    pub fn coupling(&self) -> f64 {
        (self.omega / (2.0 * EPSILON0_AU * self.volume)).sqrt()
    }

    /// `e²ħω/(2ε₀V)`, the prefactor of the Fock shift (Hartree · Bohr⁻²).
    pub fn prefactor(&self) -> f64 {
        let c = self.coupling();
        c * c
    }

    /// Energy density `n_L ħω / V` of the mode (a.u.).
    pub fn energy_density(&self) -> f64 {
        self.n_photons as f64 * self.omega / self.volume
    }

    /// Classical field of the same intensity, `I = c·n_L ħω / V`.
    pub fn matched_field(&self) -> Result<LaserField> {
        let intensity = stark::intensity_from_density(self.energy_density())?;
        LaserField::from_intensity(self.omega, intensity)
    }

    fn level_energy_difference(&self, from: i64, to: i64) -> f64 {
        // photon-number difference first so the offset and n_L cancel exactly
        ((from as f64 + self.offset) - (to as f64 + self.offset)) * self.omega
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantizedShift {
    pub n_photons: u64,
    /// `2πω/V` in atomic units.
    pub prefactor: f64,
    #[serde(serialize_with = "ser_complex")]
    pub absorption: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub emission: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub delta_e: Complex64,
}

/// Fock-state second-order shift of `state` (Hartree).
pub fn quantized_shift(state: &AtomicState, mode: &FockMode, basis: &RadialBasis) -> Result<QuantizedShift> {
    let n = mode.n_photons as i64;
    let mut absorption = Complex64::new(0.0, 0.0);
    let mut emission = Complex64::new(0.0, 0.0);
    for q in SphericalComponent::BOTH {
        // absorbing one photon leaves n − 1 in the mode, emitting leaves n + 1
        let after = n - q.q() as i64;
        let energy = state.energy() + mode.level_energy_difference(n, after);
        for ch in hydrogenic::dipole_channels(state.l(), state.m(), q) {
            let a = basis.channel_amplitude(&ResolventQuery::new(*state, ch.l_prime, energy))?;
            let term = -a * (ch.weight * ch.weight);
            match q {
                SphericalComponent::Plus => absorption += term,
                SphericalComponent::Minus => emission += term,
            }
        }
    }
    let prefactor = mode.prefactor();
    let nf = mode.n_photons as f64;
    Ok(QuantizedShift {
        n_photons: mode.n_photons,
        prefactor,
        absorption,
        emission,
        delta_e: prefactor * (absorption * nf + emission * (nf + 1.0)),
    })
}

/// Classical shift at the intensity matched to the mode, `I = c·n_L ω/V`.
pub fn matched_classical_shift(state: &AtomicState, mode: &FockMode, basis: &RadialBasis) -> Result<Complex64> {
    let p = stark::dynamic_polarizability(state, mode.omega, basis)?;
    let field = mode.matched_field()?;
    Ok(stark::stark_shift(&p, &field)?.delta_e)
}

/// `|ΔE_quant − ΔE_class| / |ΔE_class|` at matched intensity.
pub fn classical_limit_deviation(state: &AtomicState, mode: &FockMode, basis: &RadialBasis) -> Result<f64> {
    if mode.n_photons == 0 {
        return Err(Error::InvalidInput("classical comparison needs n_L ≥ 1".into()));
    }
    let quantum = quantized_shift(state, mode, basis)?.delta_e;
    let classical = matched_classical_shift(state, mode, basis)?;
    if classical.norm() == 0.0 {
        return Err(Error::UndefinedDeviation);
    }
    Ok((quantum - classical).norm() / classical.norm())
}

/// Largest violation of `⟨φ|x₋₁|m⟩ = −⟨m|x₊₁|φ⟩*` over the absorption
/// channels of `state` (the factors are real, so conjugation is trivial).
pub fn coupling_adjoint_residual(state: &AtomicState) -> f64 {
    let (l, m) = (state.l(), state.m());
    let mut worst: f64 = 0.0;
    for q in SphericalComponent::BOTH {
        for ch in hydrogenic::dipole_channels(l, m, q) {
            let forward = hydrogenic::angular_factor(l, m, q, ch.l_prime, ch.m_prime);
            let back = hydrogenic::angular_factor(ch.l_prime, ch.m_prime, q.adjoint(), l, m);
            worst = worst.max((back + forward).abs());
        }
    }
    worst
}

/// Volume for which `n_photons` quanta reproduce a classical amplitude.
pub fn volume_for_field(n_photons: u64, omega: f64, amplitude: f64) -> Result<f64> {
    if !(amplitude > 0.0) {
        return Err(Error::InvalidInput("field amplitude must be positive".into()));
    }
    // ε_L² = 8π n ω / V
    Ok(8.0 * PI * n_photons as f64 * omega / (amplitude * amplitude))
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}
