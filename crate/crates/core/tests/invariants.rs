use std::sync::OnceLock;

use acstark::cli::config::ScanGrid;
use acstark::cli::output::format_number;
use acstark::hydrogenic::{angular_factor, AtomicState, SphericalComponent};
use acstark::radial::{build_basis, RadialBasis, RadialBasisConfig};
use acstark::stark::{self, dynamic_polarizability, stark_shift, LaserField};
use acstark::units::CODATA_2018;
use proptest::prelude::*;

fn ground() -> &'static (AtomicState, RadialBasis) {
    static CELL: OnceLock<(AtomicState, RadialBasis)> = OnceLock::new();
    CELL.get_or_init(|| {
        let s = AtomicState::from_label("1S", 1).unwrap();
        let b = build_basis(RadialBasisConfig::for_state(&s).with_scaling(0.2), 1).unwrap();
        (s, b)
    })
}

fn component() -> impl Strategy<Value = SphericalComponent> {
    prop_oneof![Just(SphericalComponent::Plus), Just(SphericalComponent::Minus)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn angular_selection_rules(l in 0u32..8, lp in 0u32..9, m in -8i32..=8, mp in -9i32..=9, q in component()) {
        prop_assume!(m.abs() <= l as i32 && mp.abs() <= lp as i32);
        let a = angular_factor(l, m, q, lp, mp);
        if (lp as i32 - l as i32).abs() != 1 || mp != m + q.q() {
            prop_assert_eq!(a, 0.0);
        }
        let back = angular_factor(lp, mp, q.adjoint(), l, m);
        prop_assert!((a + back).abs() < 1e-13);
    }

    #[test]
    fn ionization_coefficient_non_negative(omega in 0.01f64..2.0) {
        let (s, b) = ground();
        let res = stark::resonance_frequencies(s, b, 0.5).unwrap();
        prop_assume!(!stark::near_resonance(omega, &res));
        let p = dynamic_polarizability(s, omega, b).unwrap();
        let r = stark_shift(&p, &LaserField::from_intensity(omega, 1e-9).unwrap()).unwrap();
        prop_assert!(r.beta_ioni >= 0.0);
        prop_assert!(r.delta_e.im <= 0.0);
        if omega < 0.5 {
            prop_assert!(p.total.im.abs() < 1e-10);
        }
    }

    #[test]
    fn shift_linear_in_intensity(i1 in 1e-12f64..1e-6, k in 1.0f64..1e3) {
        let (s, b) = ground();
        let p = dynamic_polarizability(s, 0.1875, b).unwrap();
        let a = stark_shift(&p, &LaserField::from_intensity(0.1875, i1).unwrap()).unwrap();
        let c = stark_shift(&p, &LaserField::from_intensity(0.1875, k * i1).unwrap()).unwrap();
        prop_assert!((c.delta_e / k - a.delta_e).norm() <= 1e-12 * a.delta_e.norm());
        prop_assert_eq!(a.beta_ac, c.beta_ac);
    }

    #[test]
    fn charge_rescaling_inverts(z in 2u32..=11, omega in 0.05f64..0.3) {
        let (s, b) = ground();
        let p = dynamic_polarizability(s, omega, b).unwrap();
        let r = stark_shift(&p, &LaserField::from_intensity(omega, 1e-9).unwrap()).unwrap();
        let up = stark::z_rescale(&r, z).unwrap();
        let back = stark::z_rescale(&up, 1).unwrap();
        prop_assert!((back.beta_ac - r.beta_ac).abs() <= 1e-14 * r.beta_ac.abs());
        prop_assert!((back.omega - r.omega).abs() <= 1e-14 * r.omega);
    }

    #[test]
    fn number_format_round_trips(x in prop::num::f64::NORMAL) {
        let s = format_number(x);
        let y: f64 = s.parse().unwrap();
        prop_assert!((y - x).abs() <= 1e-11 * x.abs());
        let (mant, exp) = s.split_once('e').unwrap();
        prop_assert_eq!(mant.trim_start_matches('-').len(), 13);
        prop_assert!(exp.len() >= 3);
    }

    #[test]
    fn scan_grid_is_ordered(start in 1e-3f64..1.0, span in 1e-3f64..1.0, count in 2usize..200, log in any::<bool>()) {
        let spec = format!("{start},{},{count},{}", start + span, if log { "log" } else { "linear" });
        let grid = ScanGrid::parse(&spec).unwrap();
        let pts = grid.points();
        prop_assert_eq!(pts.len(), count);
        prop_assert!(pts.windows(2).all(|w| w[0] < w[1]));
        prop_assert!((pts[0] - start).abs() <= 1e-12 * start);
        prop_assert!((pts[count - 1] - (start + span)).abs() <= 1e-12 * (start + span));
    }

    #[test]
    fn unit_conversions_round_trip(x in 1e-20f64..1e20) {
        let k = &CODATA_2018;
        prop_assert!((k.intensity_au_to_si(k.intensity_si_to_au(x)) - x).abs() <= 1e-14 * x);
        prop_assert!((k.nm_to_omega_au(k.omega_au_to_nm(x)) - x).abs() <= 1e-14 * x);
        prop_assert!((k.coefficient_au_to_si(k.coefficient_si_to_au(x)) - x).abs() <= 1e-14 * x);
        prop_assert!((k.area_au_to_si(k.area_si_to_au(x)) - x).abs() <= 1e-14 * x);
    }
}
