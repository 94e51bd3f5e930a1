use acstark::hydrogenic::{AtomicState, SphericalComponent};
use acstark::radial::{build_basis, RadialBasis, RadialBasisConfig};
use acstark::stark::{dynamic_polarizability, stark_shift, LaserField};
use acstark::tdse::{propagate, DampedDriveConfig};
use num_complex::Complex64;

const OMEGA: f64 = 0.1875;

fn setup() -> (AtomicState, RadialBasis) {
    let s = AtomicState::from_label("1S", 1).unwrap();
    (s, build_basis(RadialBasisConfig::for_state(&s), 1).unwrap())
}

fn predicted(s: &AtomicState, b: &RadialBasis, amplitude: f64) -> Complex64 {
    let p = dynamic_polarizability(s, OMEGA, b).unwrap();
    stark_shift(&p, &LaserField::new(OMEGA, amplitude).unwrap())
        .unwrap()
        .delta_e
}

fn simulated(s: &AtomicState, b: &RadialBasis, amplitude: f64, damping: f64) -> Complex64 {
    let field = LaserField::new(OMEGA, amplitude).unwrap();
    let run = propagate(s, &DampedDriveConfig::new(field).with_damping(damping), b).unwrap();
    assert!(run.norm_drift < 1e-8, "norm drift {}", run.norm_drift);
    run.delta_e
}

#[test]
fn weak_field_matches_perturbation_theory() {
    let (s, b) = setup();
    let pert = predicted(&s, &b, 1e-4);
    let tdse = simulated(&s, &b, 1e-4, 1e-3);
    assert!((tdse.re - pert.re).abs() / pert.re.abs() < 1e-2, "{tdse} vs {pert}");
    // closed channel: no decay beyond fit noise
    assert!(tdse.im.abs() < 1e-2 * pert.re.abs());
}

#[test]
fn result_independent_of_damping() {
    let (s, b) = setup();
    let a = simulated(&s, &b, 1e-4, 1e-3);
    let c = simulated(&s, &b, 1e-4, 5e-4);
    assert!((a.re - c.re).abs() / a.re.abs() < 5e-3, "{a} vs {c}");
}

#[test]
fn higher_order_deviation_is_quartic() {
    let (s, b) = setup();
    let amps = [0.02, 0.04, 0.08];
    let devs: Vec<f64> = amps
        .iter()
        .map(|&a| (simulated(&s, &b, a, 1e-3).re - predicted(&s, &b, a).re).abs())
        .collect();
    let xs: Vec<f64> = amps.iter().map(|a| a.ln()).collect();
    let ys: Vec<f64> = devs.iter().map(|d| d.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / 3.0, ys.iter().sum::<f64>() / 3.0);
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    assert!((slope - 4.0).abs() < 0.5, "exponent {slope}, deviations {devs:?}");
}

#[test]
fn rotating_wave_drops_the_emission_term() {
    let (s, b) = setup();
    let amplitude = 1e-4;
    let p = dynamic_polarizability(&s, OMEGA, &b).unwrap();
    let emission = -amplitude * amplitude / 4.0 * p.component_total(SphericalComponent::Minus);
    let full = predicted(&s, &b, amplitude);
    let field = LaserField::new(OMEGA, amplitude).unwrap();
    let rwa = propagate(&s, &DampedDriveConfig::new(field).rotating_wave_only(), &b).unwrap();
    let expected = full - emission;
    assert!(
        (rwa.delta_e.re - expected.re).abs() / expected.re.abs() < 0.1,
        "{} vs {expected}",
        rwa.delta_e
    );
    let full_run = simulated(&s, &b, amplitude, 1e-3);
    let dropped = full_run.re - rwa.delta_e.re;
    assert!(
        (dropped - emission.re).abs() / emission.re.abs() < 0.1,
        "{dropped} vs {}",
        emission.re
    );
}
