use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

// B_{2k} / (2k (2k-1)) for k = 1..10
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43_867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

const STIRLING_RADIUS: f64 = 15.0;

/// Principal branch of `log Γ(s)`.
///
/// The argument is shifted up with `log Γ(s) = log Γ(s + m) - Σ log(s + j)`
/// until the Stirling series is accurate, which also fixes the branch: the
/// result is continuous off the negative real axis and real on the positive
/// one.
pub fn log_gamma_complex(s: Complex64) -> Result<Complex64> {
    if s.im == 0.0 && s.re <= 0.0 && s.re.fract() == 0.0 {
        return Err(Error::PoleAtNonpositiveInteger(s.re));
    }
    let target = if s.im.abs() >= STIRLING_RADIUS { 0.5 } else { STIRLING_RADIUS };
    let shift = if s.re < target { (target - s.re).ceil() as usize } else { 0 };
    let mut correction = Complex64::new(0.0, 0.0);
    for j in 0..shift {
        correction += (s + j as f64).ln();
    }
    Ok(stirling(s + shift as f64) - correction)
}

fn stirling(s: Complex64) -> Complex64 {
    let inv = s.inv();
    let inv_sq = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut power = inv;
    for c in STIRLING {
        series += power * c;
        power *= inv_sq;
    }
    (s - 0.5) * s.ln() - s + 0.5 * (2.0 * PI).ln() + series
}

/// `log Γ(x)` for real `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::GammaPole(x));
    }
    Ok(log_gamma_complex(Complex64::new(x, 0.0))?.re)
}

/// `Γ(x)` for real `x > 0`.
pub fn gamma(x: f64) -> Result<f64> {
    ln_gamma(x).map(f64::exp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lg(re: f64, im: f64) -> Complex64 {
        log_gamma_complex(Complex64::new(re, im)).unwrap()
    }

    #[test]
    fn unit_argument() {
        let v = lg(1.0, 0.0);
        assert!(v.norm() < 1e-15, "{v}");
    }

    #[test]
    fn half_argument() {
        let v = lg(0.5, 0.0);
        assert!((v.re - 0.572_364_942_924_700_1).abs() < 1e-14);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn factorials() {
        let mut f = 1.0f64;
        for k in 1..30 {
            f *= k as f64;
            let v = lg(k as f64 + 1.0, 0.0).re;
            assert!((v - f.ln()).abs() <= 1e-13 * f.ln().max(1.0), "k={k}");
        }
    }

    #[test]
    fn modulus_on_unit_line() {
        // |Γ(1 + iy)|^2 = πy / sinh(πy)
        for y in [1.0f64, 5.0, 20.0] {
            let v = 2.0 * lg(1.0, y).re;
            let log_sinh = PI * y + (0.5 * (1.0 - (-2.0 * PI * y).exp())).ln();
            let expected = (PI * y).ln() - log_sinh;
            let rel = ((v - expected).exp() - 1.0).abs();
            assert!(rel < 1e-12, "y={y} rel={rel:e}");
        }
    }

    #[test]
    fn reflection_negative_half() {
        // Γ(-1/2) = -2√π
        let v = lg(-0.5, 0.0).exp();
        assert!((v.re + 2.0 * PI.sqrt()).abs() < 1e-13);
        assert!(v.im.abs() < 1e-13);
    }

    #[test]
    fn large_imaginary_part() {
        // Recurrence consistency at |Im s| = 500.
        let s = Complex64::new(0.3, 500.0);
        let lhs = lg(s.re + 1.0, s.im);
        let rhs = lg(s.re, s.im) + s.ln();
        assert!((lhs - rhs).norm() <= 1e-13 * lhs.norm());
        // Stirling leading term for Im s >> 1: Re log Γ(1/2 + iy) = ln √π - ln cosh(πy) / 2
        let y = 500.0;
        let v = lg(0.5, y).re;
        let expected = 0.5 * PI.ln() - 0.5 * (PI * y + (0.5f64).ln());
        assert!((v - expected).abs() <= 1e-13 * expected.abs());
    }

    #[test]
    fn poles_rejected() {
        assert!(log_gamma_complex(Complex64::new(0.0, 0.0)).is_err());
        assert!(log_gamma_complex(Complex64::new(-3.0, 0.0)).is_err());
        assert!(ln_gamma(-1.5).is_err());
    }
}
