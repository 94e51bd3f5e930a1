//! Dynamic polarizability, AC Stark shift and ionization observables for a
//! circularly polarized monochromatic field.
//!
//! Sign convention: `ΔE = −(ε_L²/4)·P` with
//! `P = Σ_q Σ_{l'} w(l,m,q,l')² · A_{l'}(E_φ + qω)`, where `A` is the radial
//! resolvent amplitude and `q = +1` (absorption) / `q = −1` (emission). The
//! static ground-state value is positive, so the ground state shifts down,
//! and an open ionization channel gives `Im P > 0`, `Im ΔE < 0`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hydrogenic::{self, AtomicState, SphericalComponent};
use crate::radial::{RadialBasis, ResolventQuery};
use crate::units::CODATA_2018;

/// Half-width of the frequency band around an intermediate resonance that
/// scans leave as a gap.
pub const RESONANCE_GUARD: f64 = 1e-6;

fn speed_of_light() -> f64 {
    CODATA_2018.speed_of_light_au()
}

/// Cycle-averaged intensity `c·ε_L²/(8π)` (a.u.) of a circular field of
/// amplitude `ε_L`, i.e. `ε₀ c ε_L²/2` with `ε₀ = 1/(4π)`.
pub fn intensity_from_field(amplitude: f64) -> Result<f64> {
    if !(amplitude >= 0.0 && amplitude.is_finite()) {
        return Err(Error::InvalidInput(format!("field amplitude {amplitude} must be ≥ 0")));
    }
    Ok(speed_of_light() * amplitude * amplitude / (8.0 * PI))
}

/// Intensity `ϖ·c` (a.u.) carried by an energy density `ϖ`.
pub fn intensity_from_density(density: f64) -> Result<f64> {
    if !(density >= 0.0 && density.is_finite()) {
        return Err(Error::InvalidInput(format!("energy density {density} must be ≥ 0")));
    }
    Ok(speed_of_light() * density)
}

/// Field amplitude (a.u.) for an intensity in atomic units.
pub fn field_from_intensity(intensity: f64) -> Result<f64> {
    if !(intensity >= 0.0 && intensity.is_finite()) {
        return Err(Error::InvalidInput(format!("intensity {intensity} must be ≥ 0")));
    }
    Ok((8.0 * PI * intensity / speed_of_light()).sqrt())
}

/// Classical monochromatic circular field
/// `E(t) = (ε_L/√2) e^{−ε|t|} (cos ωt, sin ωt, 0)`, all in atomic units.
/// The damping `ε` is only used by the time-dependent oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LaserField {
    omega: f64,
    amplitude: f64,
    damping: f64,
}

impl LaserField {
    pub fn new(omega: f64, amplitude: f64) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidInput(format!("ω = {omega} must be positive")));
        }
        if !(amplitude >= 0.0 && amplitude.is_finite()) {
            return Err(Error::InvalidInput(format!("field amplitude {amplitude} must be ≥ 0")));
        }
        Ok(Self {
            omega,
            amplitude,
            damping: 0.0,
        })
    }

    pub fn from_intensity(omega: f64, intensity: f64) -> Result<Self> {
        Self::new(omega, field_from_intensity(intensity)?)
    }

    pub fn with_damping(mut self, damping: f64) -> Result<Self> {
        if !(damping >= 0.0 && damping.is_finite()) {
            return Err(Error::InvalidInput(format!("damping {damping} must be ≥ 0")));
        }
        self.damping = damping;
        Ok(self)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn damping(&self) -> f64 {
        self.damping
    }

    /// Intensity in atomic units.
    pub fn intensity(&self) -> f64 {
        speed_of_light() * self.amplitude * self.amplitude / (8.0 * PI)
    }
}

/// One `(q, l', m')` contribution `w² · A(E_φ + qω)` to the polarizability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarizabilityTerm {
    #[serde(serialize_with = "serialize_component")]
    pub component: SphericalComponent,
    pub l_prime: u32,
    pub m_prime: i32,
    /// Energy at which the radial resolvent was evaluated.
    pub energy: f64,
    pub weight: f64,
    #[serde(serialize_with = "serialize_complex")]
    pub radial: Complex64,
    #[serde(serialize_with = "serialize_complex")]
    pub contribution: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolarizabilityResult {
    #[serde(serialize_with = "serialize_state")]
    pub state: AtomicState,
    pub omega: f64,
    #[serde(serialize_with = "serialize_complex")]
    pub total: Complex64,
    pub terms: Vec<PolarizabilityTerm>,
}

impl PolarizabilityResult {
    /// Sum of the contributions of one circular component.
    pub fn component_total(&self, q: SphericalComponent) -> Complex64 {
        self.terms
            .iter()
            .filter(|t| t.component == q)
            .map(|t| t.contribution)
            .sum()
    }
}

/// Dynamic polarizability of `state` at angular frequency `omega` (a.u.).
///
/// Intermediate energies at or above threshold need a complex-scaled basis.
pub fn dynamic_polarizability(state: &AtomicState, omega: f64, basis: &RadialBasis) -> Result<PolarizabilityResult> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::InvalidInput(format!("ω = {omega} must be positive")));
    }
    polarizability_at(state, omega, basis)
}

fn polarizability_at(state: &AtomicState, omega: f64, basis: &RadialBasis) -> Result<PolarizabilityResult> {
    let mut terms = Vec::with_capacity(4);
    for q in SphericalComponent::BOTH {
        let energy = state.energy() + q.q() as f64 * omega;
        for ch in hydrogenic::dipole_channels(state.l(), state.m(), q) {
            let radial = basis.channel_amplitude(&ResolventQuery::new(*state, ch.l_prime, energy))?;
            terms.push(PolarizabilityTerm {
                component: q,
                l_prime: ch.l_prime,
                m_prime: ch.m_prime,
                energy,
                weight: ch.weight,
                radial,
                contribution: radial * (ch.weight * ch.weight),
            });
        }
    }
    Ok(PolarizabilityResult {
        state: *state,
        omega,
        total: terms.iter().map(|t| t.contribution).sum(),
        terms,
    })
}

/// Static polarizability as a sum over the discretized spectrum with the
/// levels degenerate with the reference state removed (their poles cancel
/// between the two circular components as ω → 0).
pub fn static_polarizability(state: &AtomicState, basis: &RadialBasis) -> Result<f64> {
    let mut total = 0.0;
    for q in SphericalComponent::BOTH {
        for ch in hydrogenic::dipole_channels(state.l(), state.m(), q) {
            let mut radial = 0.0;
            for (e, d) in basis.transition_elements(state, ch.l_prime)? {
                if (e - state.energy()).abs() > 1e-6 {
                    radial += d * d / (e - state.energy());
                }
            }
            total += ch.weight * ch.weight * radial;
        }
    }
    Ok(total)
}

/// Level shift and rate observables for one field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StarkShiftResult {
    pub z: u32,
    /// Angular frequency, a.u.
    pub omega: f64,
    /// Intensity, a.u.
    pub intensity: f64,
    /// Complex level shift, Hartree.
    #[serde(serialize_with = "serialize_complex")]
    pub delta_e: Complex64,
    /// Complex level shift divided by h, Hz.
    #[serde(serialize_with = "serialize_complex")]
    pub delta_e_hz: Complex64,
    /// `Re ΔE / (ħ I_L)`, s⁻¹/(W/m²).
    pub beta_ac: f64,
    /// `−Im ΔE / (π ħ I_L)`, s⁻¹/(W/m²).
    pub beta_ioni: f64,
    /// Ionization decay rate `2π β_ioni I_L`, s⁻¹.
    pub gamma_i: f64,
    /// Ionization cross section `2π ħω β_ioni`, m².
    pub sigma_i: f64,
}

impl StarkShiftResult {
    pub fn intensity_si(&self) -> f64 {
        CODATA_2018.intensity_au_to_si(self.intensity)
    }
}

/// `ΔE = −(ε_L²/4)·P` and the coefficients derived from it.
///
/// The coefficients are formed from `P` directly, so they stay finite at
/// zero intensity.
pub fn stark_shift(p: &PolarizabilityResult, field: &LaserField) -> Result<StarkShiftResult> {
    if !(p.total.re.is_finite() && p.total.im.is_finite()) {
        return Err(Error::InvalidInput("polarizability is not finite".into()));
    }
    if (field.omega() - p.omega).abs() > 1e-12 * p.omega.max(1.0) {
        return Err(Error::InvalidInput(format!(
            "field frequency {} differs from polarizability frequency {}",
            field.omega(),
            p.omega
        )));
    }
    Ok(shift_from_total(p.state.z(), p.omega, p.total, field.intensity()))
}

fn shift_from_total(z: u32, omega: f64, total: Complex64, intensity: f64) -> StarkShiftResult {
    let k = &CODATA_2018;
    let c = speed_of_light();
    let amp2 = 8.0 * PI * intensity / c;
    let delta_e = -0.25 * amp2 * total;
    let beta_ac = -2.0 * PI / c * total.re;
    let beta_ioni = 2.0 / c * total.im;
    let gamma = 2.0 * PI * beta_ioni * intensity;
    let sigma = 2.0 * PI * omega * beta_ioni;
    let to_hz = |e: f64| k.hartree_to_hz(e);
    StarkShiftResult {
        z,
        omega,
        intensity,
        delta_e,
        delta_e_hz: Complex64::new(to_hz(delta_e.re), to_hz(delta_e.im)),
        beta_ac: k.coefficient_au_to_si(beta_ac),
        beta_ioni: k.coefficient_au_to_si(beta_ioni),
        gamma_i: k.rate_au_to_si(gamma),
        sigma_i: k.area_au_to_si(sigma),
    }
}

/// Hydrogenic scaling of a result to charge `target_z` at frequency `Z²ω`
/// (relative to the result's own charge) and the same intensity:
/// `β → β/Z⁴`, `σ → σ/Z²`, `ΔE, γ → /Z⁴`.
pub fn z_rescale(result: &StarkShiftResult, target_z: u32) -> Result<StarkShiftResult> {
    if !(1..=hydrogenic::MAX_Z).contains(&target_z) {
        return Err(Error::Domain(format!(
            "Z = {target_z} outside 1..={}",
            hydrogenic::MAX_Z
        )));
    }
    let s = target_z as f64 / result.z as f64;
    let s2 = s * s;
    let s4 = s2 * s2;
    Ok(StarkShiftResult {
        z: target_z,
        omega: result.omega * s2,
        intensity: result.intensity,
        delta_e: result.delta_e / s4,
        delta_e_hz: result.delta_e_hz / s4,
        beta_ac: result.beta_ac / s4,
        beta_ioni: result.beta_ioni / s4,
        gamma_i: result.gamma_i / s4,
        sigma_i: result.sigma_i / s2,
    })
}

/// One-photon ionization threshold `−E_φ` of the reference state.
pub fn threshold_frequency(state: &AtomicState) -> f64 {
    -state.energy()
}

/// Frequencies in `(0, max_omega]` at which an intermediate bound level of
/// the basis makes a denominator vanish, ascending.
pub fn resonance_frequencies(state: &AtomicState, basis: &RadialBasis, max_omega: f64) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for q in SphericalComponent::BOTH {
        for ch in hydrogenic::dipole_channels(state.l(), state.m(), q) {
            for &e in basis.eigenvalues(ch.l_prime)?.iter() {
                if e >= 0.0 {
                    break;
                }
                let omega = q.q() as f64 * (e - state.energy());
                if omega > 0.0 && omega <= max_omega {
                    out.push(omega);
                }
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    Ok(out)
}

/// Whether `omega` lies inside the guard band of any resonance.
pub fn near_resonance(omega: f64, resonances: &[f64]) -> bool {
    resonances.iter().any(|r| (omega - r).abs() < RESONANCE_GUARD)
}

fn serialize_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

fn serialize_component<S: serde::Serializer>(q: &SphericalComponent, s: S) -> std::result::Result<S::Ok, S::Error> {
    q.q().serialize(s)
}

fn serialize_state<S: serde::Serializer>(st: &AtomicState, s: S) -> std::result::Result<S::Ok, S::Error> {
    st.label().serialize(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::{build_basis, RadialBasisConfig};

    fn state(label: &str) -> AtomicState {
        AtomicState::from_label(label, 1).unwrap()
    }

    fn basis_for(s: &AtomicState) -> RadialBasis {
        build_basis(RadialBasisConfig::for_state(s), s.z()).unwrap()
    }

    #[test]
    fn static_limit_of_ground_state() {
        let s = state("1S");
        let basis = basis_for(&s);
        let p = dynamic_polarizability(&s, 1e-4, &basis).unwrap();
        assert!((p.total.re - 4.5).abs() < 1e-3, "{}", p.total);
        assert_eq!(p.total.im, 0.0);
        let oracle = static_polarizability(&s, &basis).unwrap();
        assert!((oracle - 4.5).abs() < 1e-6, "{oracle}");
    }

    #[test]
    fn terms_sum_to_total() {
        let s = state("2P+1");
        let basis = basis_for(&s);
        let p = dynamic_polarizability(&s, 0.01, &basis).unwrap();
        // l' = 0 cannot carry m' = 2
        assert_eq!(p.terms.len(), 3);
        let sum: Complex64 = p.terms.iter().map(|t| t.contribution).sum();
        assert!((sum - p.total).norm() <= 1e-12 * p.total.norm());
    }

    #[test]
    fn s_state_components_agree_in_the_static_limit() {
        let s = state("1S");
        let basis = basis_for(&s);
        let p = dynamic_polarizability(&s, 1e-7, &basis).unwrap();
        let plus = p.component_total(SphericalComponent::Plus);
        let minus = p.component_total(SphericalComponent::Minus);
        assert!((plus - minus).norm() / plus.norm() < 1e-5);
    }

    #[test]
    fn threshold_needs_scaling() {
        let s = state("2S");
        let basis = basis_for(&s);
        assert!(matches!(
            dynamic_polarizability(&s, 0.1875, &basis),
            Err(Error::ThresholdRequiresScaling { .. })
        ));
        assert!(dynamic_polarizability(&s, 0.0, &basis).is_err());
        assert!(dynamic_polarizability(&s, -1.0, &basis).is_err());
    }

    #[test]
    fn zero_intensity_is_finite() {
        let s = state("1S");
        let basis = basis_for(&s);
        let p = dynamic_polarizability(&s, 0.1, &basis).unwrap();
        let r = stark_shift(&p, &LaserField::new(0.1, 0.0).unwrap()).unwrap();
        assert_eq!(r.delta_e, Complex64::new(0.0, 0.0));
        assert_eq!(r.gamma_i, 0.0);
        assert!(r.beta_ac.is_finite() && r.beta_ac < 0.0);
        assert_eq!(r.beta_ioni, 0.0);
    }

    #[test]
    fn coefficient_identities() {
        let s = state("2S");
        let basis = build_basis(RadialBasisConfig::for_state(&s).with_scaling(0.2), 1).unwrap();
        let p = dynamic_polarizability(&s, 0.1875, &basis).unwrap();
        let field = LaserField::from_intensity(0.1875, 1e-9).unwrap();
        let r = stark_shift(&p, &field).unwrap();
        let k = CODATA_2018;
        let hbar_i = k.hbar * r.intensity_si();
        let re = k.hartree_to_joule(r.delta_e.re);
        let im = k.hartree_to_joule(r.delta_e.im);
        assert!((re - hbar_i * r.beta_ac).abs() <= 1e-12 * re.abs());
        assert!((im + PI * hbar_i * r.beta_ioni).abs() <= 1e-12 * im.abs());
        assert!((r.gamma_i - 2.0 * PI * r.beta_ioni * r.intensity_si()).abs() <= 1e-12 * r.gamma_i);
        let omega_si = 0.1875 / k.atomic_time();
        assert!((r.sigma_i - 2.0 * PI * k.hbar * omega_si * r.beta_ioni).abs() <= 1e-12 * r.sigma_i);
        // the open channel makes the state decay
        assert!(r.beta_ioni > 0.0 && r.delta_e.im < 0.0);
        // ħγ = −2 Im ΔE
        assert!((k.hbar * r.gamma_i + 2.0 * im).abs() <= 1e-12 * im.abs());
    }

    #[test]
    fn field_frequency_must_match() {
        let s = state("1S");
        let basis = basis_for(&s);
        let p = dynamic_polarizability(&s, 0.1, &basis).unwrap();
        assert!(stark_shift(&p, &LaserField::new(0.2, 0.01).unwrap()).is_err());
    }

    #[test]
    fn intensity_helpers() {
        assert_eq!(intensity_from_field(0.0).unwrap(), 0.0);
        assert_eq!(intensity_from_density(0.0).unwrap(), 0.0);
        assert!(intensity_from_field(-1.0).is_err());
        assert!(intensity_from_density(-1.0).is_err());
        for &e in &[1e-6, 0.03, 1.7] {
            let a = intensity_from_field(e).unwrap();
            let b = intensity_from_density(crate::units::EPSILON0_AU * e * e / 2.0).unwrap();
            assert!((a - b).abs() <= 1e-15 * a);
            assert!((field_from_intensity(a).unwrap() - e).abs() <= 1e-14 * e);
        }
        // 1 a.u. of field carries c/(8π) a.u. ≈ 3.51e16 W/cm²
        let si = CODATA_2018.intensity_au_to_si(intensity_from_field(1.0).unwrap());
        assert!((si / 3.509_4e20 - 1.0).abs() < 1e-4, "{si}");
    }

    #[test]
    fn rescale_identity_and_range() {
        let s = state("1S");
        let basis = basis_for(&s);
        let p = dynamic_polarizability(&s, 0.1, &basis).unwrap();
        let r = stark_shift(&p, &LaserField::new(0.1, 1e-3).unwrap()).unwrap();
        assert_eq!(z_rescale(&r, 1).unwrap(), r);
        assert!(z_rescale(&r, 0).is_err());
        assert!(z_rescale(&r, 12).is_err());
    }

    #[test]
    fn resonances_of_ground_state() {
        let s = state("1S");
        let basis = build_basis(RadialBasisConfig::bspline(80, 200.0, 7), 1).unwrap();
        let res = resonance_frequencies(&s, &basis, 0.49).unwrap();
        for (k, n) in [(0, 2u32), (1, 3), (2, 4)] {
            let exact = hydrogenic::bound_energy(n, 1).unwrap() + 0.5;
            assert!((res[k] - exact).abs() < 1e-8, "{n}p: {} vs {exact}", res[k]);
        }
        assert!(near_resonance(0.375 + 5e-7, &res));
        assert!(!near_resonance(0.375 + 5e-6, &res));
    }

    #[test]
    fn real_part_changes_sign_across_pole() {
        let s = state("1S");
        let basis = basis_for(&s);
        let below = dynamic_polarizability(&s, 0.375 - 1e-3, &basis).unwrap().total.re;
        let above = dynamic_polarizability(&s, 0.375 + 1e-3, &basis).unwrap().total.re;
        assert!(below > 0.0 && above < 0.0, "{below} {above}");
    }
}
