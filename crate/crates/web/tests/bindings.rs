use std::f64::consts::PI;

use landau_coherent_web::{curves, density_curve, probabilities, statistics_curve};

#[test]
fn probabilities_sum_to_one() {
    let p = probabilities(4, 3, 1.7, 0.4).unwrap();
    assert_eq!(p.len(), 5);
    assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
}

#[test]
fn binomial_probabilities() {
    let p = probabilities(2, 1, 1.0, 0.0).unwrap();
    for (a, b) in p.iter().zip([0.25, 0.5, 0.25]) {
        assert!((a - b).abs() < 1e-14);
    }
}

#[test]
fn curves_match_r1_forms() {
    let c = curves(3, 1, 0.0, 5.0, 11).unwrap();
    assert_eq!(c.t.len(), 11);
    assert_eq!(*c.t.last().unwrap(), 5.0);
    for (i, &t) in c.t.iter().enumerate() {
        assert!((c.q_a[i].unwrap() + 1.0 / (1.0 + t)).abs() < 1e-12);
        assert!((c.g2[i].unwrap() - 2.0 / 3.0).abs() < 1e-12);
    }
}

#[test]
fn statistics_json_shape() {
    let s = statistics_curve(2, 2, 0.3, 2.0, 4).unwrap();
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    assert_eq!(v["t"].as_array().unwrap().len(), 4);
    assert!(s.starts_with(r#"{"t":["#));
}

#[test]
fn density_pairs() {
    let d = density_curve(2, 1, 4.0, 5).unwrap();
    assert_eq!(d.len(), 10);
    for pair in d.chunks(2) {
        let want = 6.0 / (PI * (1.0 + pair[0]) * (1.0 + pair[0]));
        assert!((pair[1] - want).abs() < 1e-12);
    }
    assert!(density_curve(2, 3, 4.0, 5).unwrap().chunks(2).all(|p| p[1] > 0.0));
}

#[test]
fn rejects_bad_input() {
    assert!(probabilities(0, 1, 1.0, 0.0).is_err());
    assert!(probabilities(41, 1, 1.0, 0.0).is_err());
    assert!(curves(2, 1, 0.0, 1.0, 1).is_err());
    assert!(density_curve(2, 2, -1.0, 10).is_err());
}
