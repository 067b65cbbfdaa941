use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Shorthand for `num / den` as an exact rational.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact rising factorial `x (x+1) ... (x+k-1)`, equal to 1 for `k = 0`.
pub fn pochhammer(x: &Rational, k: u32) -> Rational {
    let mut acc = Rational::one();
    let mut term = x.clone();
    for _ in 0..k {
        if term.is_zero() {
            return Rational::zero();
        }
        acc *= &term;
        term += Rational::one();
    }
    acc
}

/// Floating-point rising factorial.
pub fn pochhammer_f64(x: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (x + j as f64))
}

/// Returns `Some(-x)` when `x` is a nonpositive integer.
pub(crate) fn nonpositive_integer(x: &Rational) -> Option<u32> {
    if x.is_integer() && *x <= Rational::zero() {
        let v = -x.to_integer();
        u32::try_from(v).ok()
    } else {
        None
    }
}

/// Exact `n!` as a rational.
pub fn factorial(n: u32) -> Rational {
    pochhammer(&Rational::one(), n)
}

/// Exact binomial coefficient `C(n, k)`.
pub fn binomial(n: u32, k: u32) -> Rational {
    if k > n {
        return Rational::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

pub fn binomial_f64(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_product_is_one() {
        assert_eq!(pochhammer(&int(5), 0), int(1));
    }

    #[test]
    fn negative_start() {
        assert_eq!(pochhammer(&int(-2), 2), int(2));
        assert_eq!(pochhammer(&int(-2), 3), int(0));
    }

    #[test]
    fn half_integer() {
        // (1/2)_3 = 1/2 * 3/2 * 5/2
        assert_eq!(pochhammer(&ratio(1, 2), 3), ratio(15, 8));
        assert!((pochhammer_f64(0.5, 3) - 1.875).abs() < 1e-15);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 2), int(15));
        assert_eq!(binomial(3, 4), int(0));
        assert_eq!(binomial_f64(10, 3), 120.0);
    }
}
