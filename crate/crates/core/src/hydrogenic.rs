//! Analytic hydrogen-like bound states and the angular algebra of the
//! circular dipole components `x₊₁ = −(x + iy)/√2`, `x₋₁ = (x − iy)/√2`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MAX_Z: u32 = 11;
pub const MAX_N: u32 = 10;

const SPECTROSCOPIC: [char; 10] = ['S', 'P', 'D', 'F', 'G', 'H', 'I', 'K', 'L', 'M'];

/// A nondegenerate reference state `|n l m⟩` of a hydrogen-like ion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AtomicState {
    n: u32,
    l: u32,
    m: i32,
    z: u32,
}

impl AtomicState {
    pub fn new(n: u32, l: u32, m: i32, z: u32) -> Result<Self> {
        if !(1..=MAX_N).contains(&n) {
            return Err(Error::Domain(format!("n = {n} outside 1..={MAX_N}")));
        }
        if l >= n {
            return Err(Error::Domain(format!("l = {l} must be below n = {n}")));
        }
        if m.unsigned_abs() > l {
            return Err(Error::Domain(format!("|m| = {} exceeds l = {l}", m.abs())));
        }
        check_charge(z)?;
        Ok(Self { n, l, m, z })
    }

    /// Parses labels like `1S`, `2P`, `2P+1`, `3D-2`.
    pub fn from_label(label: &str, z: u32) -> Result<Self> {
        let label = label.trim();
        let split = label
            .find(|c: char| !c.is_ascii_digit())
            .ok_or_else(|| Error::Domain(format!("state label {label:?} has no orbital letter")))?;
        let n: u32 = label[..split]
            .parse()
            .map_err(|_| Error::Domain(format!("state label {label:?} has no principal number")))?;
        let mut rest = label[split..].chars();
        let letter = rest.next().unwrap().to_ascii_uppercase();
        let l = SPECTROSCOPIC
            .iter()
            .position(|&c| c == letter)
            .ok_or_else(|| Error::Domain(format!("unknown orbital letter {letter:?}")))? as u32;
        let tail: String = rest.collect();
        let m = if tail.is_empty() {
            0
        } else {
            tail.parse::<i32>()
                .map_err(|_| Error::Domain(format!("bad magnetic number in {label:?}")))?
        };
        Self::new(n, l, m, z)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    pub fn z(&self) -> u32 {
        self.z
    }

    /// Energy in Hartree, `−Z²/(2n²)`.
    pub fn energy(&self) -> f64 {
        energy_unchecked(self.n, self.z)
    }

    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for AtomicState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.n, SPECTROSCOPIC[self.l as usize])?;
        if self.m != 0 {
            write!(f, "{:+}", self.m)?;
        }
        Ok(())
    }
}

fn check_charge(z: u32) -> Result<()> {
    if !(1..=MAX_Z).contains(&z) {
        return Err(Error::Domain(format!("Z = {z} outside 1..={MAX_Z}")));
    }
    Ok(())
}

fn energy_unchecked(n: u32, z: u32) -> f64 {
    let (n, z) = (n as f64, z as f64);
    -z * z / (2.0 * n * n)
}

/// Bound-state energy `−Z²/(2n²)` in Hartree.
pub fn bound_energy(n: u32, z: u32) -> Result<f64> {
    if n < 1 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    check_charge(z)?;
    Ok(energy_unchecked(n, z))
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// Generalized Laguerre polynomial `L_k^α(x)` by upward recurrence.
fn laguerre(k: u32, alpha: f64, x: Complex64) -> Complex64 {
    let mut prev = Complex64::new(1.0, 0.0);
    if k == 0 {
        return prev;
    }
    let mut cur = Complex64::new(1.0 + alpha, 0.0) - x;
    for j in 1..k {
        let j = j as f64;
        let next = ((2.0 * j + 1.0 + alpha - x) * cur - (j + alpha) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

fn radial_norm(n: u32, l: u32, z: u32) -> f64 {
    let nf = n as f64;
    let zf = z as f64;
    ((2.0 * zf / nf).powi(3) * factorial(n - l - 1) / (2.0 * nf * factorial(n + l))).sqrt()
}

/// `R_nl(r)` continued to complex `r`; used for complex-scaled sources.
pub(crate) fn radial_wavefunction_complex(n: u32, l: u32, z: u32, r: Complex64) -> Complex64 {
    let rho = r * (2.0 * z as f64 / n as f64);
    let mut rho_l = Complex64::new(1.0, 0.0);
    for _ in 0..l {
        rho_l *= rho;
    }
    radial_norm(n, l, z) * (-rho / 2.0).exp() * rho_l * laguerre(n - l - 1, (2 * l + 1) as f64, rho)
}

/// Normalized radial function `R_nl(r)` with `∫ R² r² dr = 1`.
pub fn radial_wavefunction(n: u32, l: u32, z: u32, r: f64) -> Result<f64> {
    if n < 1 || l >= n {
        return Err(Error::Domain(format!("invalid (n, l) = ({n}, {l})")));
    }
    check_charge(z)?;
    if !(r >= 0.0) {
        return Err(Error::Domain(format!("negative radius {r}")));
    }
    Ok(radial_wavefunction_complex(n, l, z, Complex64::new(r, 0.0)).re)
}

/// Polarization index of a circular spherical component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SphericalComponent {
    /// `x₊₁ = −(x + iy)/√2`, raises m by one.
    Plus,
    /// `x₋₁ = (x − iy)/√2`, lowers m by one.
    Minus,
}

impl SphericalComponent {
    pub fn q(self) -> i32 {
        match self {
            Self::Plus => 1,
            Self::Minus => -1,
        }
    }

    pub fn adjoint(self) -> Self {
        match self {
            Self::Plus => Self::Minus,
            Self::Minus => Self::Plus,
        }
    }

    pub const BOTH: [SphericalComponent; 2] = [Self::Plus, Self::Minus];
}

/// Wigner 3j symbol by the Racah formula (integer angular momenta).
pub fn wigner_3j(j1: i32, j2: i32, j3: i32, m1: i32, m2: i32, m3: i32) -> f64 {
    if m1 + m2 + m3 != 0 || m1.abs() > j1 || m2.abs() > j2 || m3.abs() > j3 {
        return 0.0;
    }
    if j3 < (j1 - j2).abs() || j3 > j1 + j2 {
        return 0.0;
    }
    let f = |k: i32| factorial(k as u32);
    let triangle = f(j1 + j2 - j3) * f(j1 - j2 + j3) * f(-j1 + j2 + j3) / f(j1 + j2 + j3 + 1);
    let moments = f(j1 + m1) * f(j1 - m1) * f(j2 + m2) * f(j2 - m2) * f(j3 + m3) * f(j3 - m3);
    let k_min = 0.max(j2 - j3 - m1).max(j1 - j3 + m2);
    let k_max = (j1 + j2 - j3).min(j1 - m1).min(j2 + m2);
    let mut sum = 0.0;
    for k in k_min..=k_max {
        let denom =
            f(k) * f(j3 - j2 + k + m1) * f(j3 - j1 + k - m2) * f(j1 + j2 - j3 - k) * f(j1 - k - m1) * f(j2 - k + m2);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign / denom;
    }
    let phase = if (j1 - j2 - m3).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    phase * (triangle * moments).sqrt() * sum
}

/// Angular part of `⟨l' m'| x_q / r |l m⟩`.
///
/// Zero unless `l' = l ± 1` and `m' = m + q`.
pub fn angular_factor(l: u32, m: i32, q: SphericalComponent, l_prime: u32, m_prime: i32) -> f64 {
    let (l, lp) = (l as i32, l_prime as i32);
    if (lp - l).abs() != 1 || m_prime != m + q.q() || m.abs() > l || m_prime.abs() > lp {
        return 0.0;
    }
    let phase = if m_prime.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    phase
        * (((2 * lp + 1) * (2 * l + 1)) as f64).sqrt()
        * wigner_3j(lp, 1, l, 0, 0, 0)
        * wigner_3j(lp, 1, l, -m_prime, q.q(), m)
}

/// An intermediate channel reached from `|l m⟩` by one circular component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularChannel {
    pub l_prime: u32,
    pub m_prime: i32,
    /// `⟨l' m'| x_q / r |l m⟩`.
    pub weight: f64,
}

/// All channels with nonzero angular weight for component `q` acting on `|l m⟩`.
pub fn dipole_channels(l: u32, m: i32, q: SphericalComponent) -> Vec<AngularChannel> {
    let m_prime = m + q.q();
    let mut out = Vec::with_capacity(2);
    let candidates = [l.checked_sub(1), Some(l + 1)];
    for l_prime in candidates.into_iter().flatten() {
        let weight = angular_factor(l, m, q, l_prime, m_prime);
        if weight != 0.0 {
            out.push(AngularChannel {
                l_prime,
                m_prime,
                weight,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn energies() {
        assert_eq!(bound_energy(1, 1).unwrap(), -0.5);
        assert_eq!(bound_energy(2, 1).unwrap(), -0.125);
        assert_eq!(bound_energy(2, 2).unwrap(), -0.5);
        assert!(bound_energy(0, 1).is_err());
        assert!(bound_energy(1, 0).is_err());
        assert!(bound_energy(1, 12).is_err());
    }

    #[test]
    fn state_validation() {
        assert!(AtomicState::new(1, 1, 0, 1).is_err());
        assert!(AtomicState::new(2, 1, 2, 1).is_err());
        assert!(AtomicState::new(2, 1, -1, 11).is_ok());
        assert!(AtomicState::new(2, 0, 0, 12).is_err());
        let s = AtomicState::new(3, 2, -1, 3).unwrap();
        assert_eq!(s.energy(), -9.0 / 18.0);
    }

    #[test]
    fn labels() {
        let s = AtomicState::from_label("2P+1", 1).unwrap();
        assert_eq!((s.n(), s.l(), s.m()), (2, 1, 1));
        assert_eq!(s.label(), "2P+1");
        let s = AtomicState::from_label("1s", 2).unwrap();
        assert_eq!((s.n(), s.l(), s.m(), s.z()), (1, 0, 0, 2));
        assert_eq!(s.label(), "1S");
        assert!(AtomicState::from_label("S", 1).is_err());
        assert!(AtomicState::from_label("2X", 1).is_err());
        assert!(AtomicState::from_label("1P", 1).is_err());
    }

    #[test]
    fn radial_values_at_origin() {
        assert!((radial_wavefunction(1, 0, 1, 0.0).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(radial_wavefunction(2, 1, 1, 0.0).unwrap(), 0.0);
        // R₁₀(0) = 2 Z^{3/2}
        let r = radial_wavefunction(1, 0, 4, 0.0).unwrap();
        assert!((r - 16.0).abs() < 1e-13);
        assert!(radial_wavefunction(1, 0, 1, -1.0).is_err());
        assert!(radial_wavefunction(2, 2, 1, 1.0).is_err());
    }

    #[test]
    fn radial_closed_forms() {
        for &r in &[0.1, 1.0, 3.5, 10.0] {
            let r20 = (2.0 - r) * (-r / 2.0f64).exp() / (2.0 * 2.0f64.sqrt());
            let r21 = r * (-r / 2.0f64).exp() / (2.0 * 6.0f64.sqrt());
            assert!((radial_wavefunction(2, 0, 1, r).unwrap() - r20).abs() < 1e-14);
            assert!((radial_wavefunction(2, 1, 1, r).unwrap() - r21).abs() < 1e-14);
        }
    }

    #[test]
    fn known_three_j() {
        assert!((wigner_3j(1, 1, 0, 0, 0, 0) + 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((wigner_3j(1, 1, 0, -1, 1, 0) - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        // (1 1 2; 0 0 0) = sqrt(2/15)
        assert!((wigner_3j(1, 1, 2, 0, 0, 0) - (2.0f64 / 15.0).sqrt()).abs() < 1e-15);
        assert_eq!(wigner_3j(1, 1, 1, 0, 0, 0), 0.0);
    }

    #[test]
    fn s_state_factors() {
        let w = angular_factor(0, 0, SphericalComponent::Plus, 1, 1);
        assert!((w - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(angular_factor(0, 0, SphericalComponent::Plus, 1, 0), 0.0);
        assert_eq!(angular_factor(0, 0, SphericalComponent::Plus, 2, 1), 0.0);
        // x₋₁ on an S state: ⟨1,−1| x₋₁/r |0 0⟩ = 1/√3 as well
        let w = angular_factor(0, 0, SphericalComponent::Minus, 1, -1);
        assert!((w - 1.0 / 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn p_state_factors_closed_form() {
        // ⟨2 m+1| x₊₁/r |1 m⟩ = sqrt((l+m+1)(l+m+2)/(2(2l+1)(2l+3))) for l = 1
        for m in -1..=1 {
            let l = 1.0;
            let mf = m as f64;
            let expect = ((l + mf + 1.0) * (l + mf + 2.0) / (2.0 * (2.0 * l + 1.0) * (2.0 * l + 3.0))).sqrt();
            let got = angular_factor(1, m, SphericalComponent::Plus, 2, m + 1);
            assert!((got.abs() - expect).abs() < 1e-14, "m={m}: {got} vs {expect}");
        }
        assert!((angular_factor(1, 0, SphericalComponent::Plus, 0, 1)).abs() < 1e-15);
        // ⟨0 0| x₊₁/r |1 −1⟩ = −⟨1 −1| x₋₁/r |0 0⟩
        let a = angular_factor(1, -1, SphericalComponent::Plus, 0, 0);
        let b = angular_factor(0, 0, SphericalComponent::Minus, 1, -1);
        assert!((a + b).abs() < 1e-15);
        assert!((b - FRAC_1_SQRT_2 * (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn channel_listing() {
        let ch = dipole_channels(0, 0, SphericalComponent::Plus);
        assert_eq!(ch.len(), 1);
        assert_eq!((ch[0].l_prime, ch[0].m_prime), (1, 1));
        let ch = dipole_channels(1, 1, SphericalComponent::Plus);
        assert_eq!(ch.len(), 1);
        assert_eq!((ch[0].l_prime, ch[0].m_prime), (2, 2));
        let ch = dipole_channels(2, 0, SphericalComponent::Minus);
        assert_eq!(ch.iter().map(|c| c.l_prime).collect::<Vec<_>>(), vec![1, 3]);
    }
}
