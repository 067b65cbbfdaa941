use approx::{assert_abs_diff_eq, assert_relative_eq};
use landau_coherent::observables::{dual_path, number_moments, quadrature_closed, su2_moments, su2_squeeze, Precision};
use landau_coherent::fock::MomentumConvention;
use landau_coherent::states::{build_state, build_state_deformed, overlap, CoherencePoint, ModelParams};
use num_complex::Complex64;
use proptest::prelude::*;

fn setup() -> impl Strategy<Value = (u32, u32, f64, f64)> {
    (1u32..=6, 1u32..=4, 0.01f64..20.0, -3.2f64..3.2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn states_are_normalized((n, r, t, phi) in setup()) {
        let s = build_state(&ModelParams::new(n, r).unwrap(), &CoherencePoint::from_t(t, phi).unwrap());
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn self_overlap_is_one((n, r, t, phi) in setup()) {
        let z = CoherencePoint::from_t(t, phi).unwrap();
        let o = overlap(&ModelParams::new(n, r).unwrap(), &z, &z).unwrap();
        prop_assert!((o - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn closed_forms_match_oracle((n, r, t, phi) in setup()) {
        let p = ModelParams::new(n, r).unwrap();
        for c in dual_path(&p, &CoherencePoint::from_t(t, phi).unwrap(), Precision::Double).unwrap() {
            prop_assert!(c.residual() <= 1e-10, "{} {} {}", c.quantity, c.closed, c.oracle);
        }
    }

    #[test]
    fn phase_rotates_k_plus((n, r, t, phi) in setup()) {
        let p = ModelParams::new(n, r).unwrap();
        let rotated = su2_moments(&p, &CoherencePoint::from_t(t, phi).unwrap()).unwrap().k_plus;
        let base = su2_moments(&p, &CoherencePoint::from_t(t, 0.0).unwrap()).unwrap().k_plus;
        prop_assert!((rotated - base * Complex64::from_polar(1.0, -phi)).norm() < 1e-12);
    }

    #[test]
    fn deformed_matches_series((n, r, t, phi) in setup()) {
        let p = ModelParams::new(n, r).unwrap();
        let z = CoherencePoint::from_t(t, phi).unwrap();
        let a = build_state(&p, &z);
        let b = build_state_deformed(&p, &z).unwrap();
        for (x, y) in a.coefficients.iter().zip(&b.coefficients) {
            prop_assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn squeezing_bounds((n, r, t, phi) in setup()) {
        let p = ModelParams::new(n, r).unwrap();
        let z = CoherencePoint::from_t(t, phi).unwrap();
        let sq = su2_squeeze(&p, &z).unwrap();
        for s in [sq.s1, sq.s2].into_iter().flatten() {
            prop_assert!(s >= -1.0 - 1e-10);
        }
        let q = quadrature_closed(&p, &z, MomentumConvention::Corrected, Precision::Double).unwrap();
        prop_assert!(q.robertson_schrodinger() >= 0.25 * (1.0 - 1e-10));
        let stats = number_moments(&p, &z).unwrap();
        prop_assert!((stats.mean_na + stats.mean_nb - n as f64).abs() < 1e-12);
    }
}

#[test]
fn anchor_values() {
    let p = ModelParams::new(2, 2).unwrap();
    let z = CoherencePoint::from_t(1.0, 0.0).unwrap();
    let s = number_moments(&p, &z).unwrap();
    assert_relative_eq!(su2_moments(&p, &z).unwrap().k_plus.re, 42.0 / 55.0, max_relative = 1e-13);
    assert_relative_eq!(s.mean_nb, 4.0 / 11.0, max_relative = 1e-13);
    assert_relative_eq!(s.q_b().unwrap(), -29.0 / 110.0, max_relative = 1e-13);
    assert_relative_eq!(s.g2().unwrap(), 0.55, max_relative = 1e-13);
}

#[test]
fn two_level_quadratures() {
    let p = ModelParams::new(1, 1).unwrap();
    for t in [0.2, 1.0, 4.0] {
        let q = quadrature_closed(&p, &CoherencePoint::from_t(t, 0.0).unwrap(), MomentumConvention::Corrected, Precision::Double).unwrap();
        assert_abs_diff_eq!(q.s_p, -t.sqrt() / (1.0 + t), epsilon = 1e-14);
        assert_abs_diff_eq!(q.s_x, 3.0 - 4.0 * t.sqrt() / (1.0 + t), epsilon = 1e-14);
    }
}
