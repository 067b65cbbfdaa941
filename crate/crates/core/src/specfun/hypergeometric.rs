//! Terminating generalized hypergeometric series.
//!
//! A series `pFq(a_1..a_p; b_1..b_q; x)` terminates when one of the numerator
//! parameters is a nonpositive integer `-m`: every term past index `m` carries
//! the factor `(-m)_k = 0`. Such series are finite polynomials in `x` and can be
//! summed exactly over the rationals.
//!
//! Some parameter patterns pair a nonpositive-integer numerator with a
//! denominator at a smaller nonpositive integer, e.g. `(1 - n/2)_k / (-n/2)_k`
//! for even `n`. Read literally the numerator vanishes first and the series is
//! cut short, even though the ratio equals the polynomial `(k - n/2) / (-n/2)`
//! for every `k`. [`TerminationRule::Regularized`] replaces such pairs by that
//! polynomial (the limit obtained by shifting both parameters together) and
//! terminates on the remaining numerators.

use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::pochhammer::{nonpositive_integer, pochhammer, pochhammer_f64, Rational};
use crate::error::{Error, Result};

/// How degenerate numerator/denominator pairs are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum TerminationRule {
    /// Stop at the first index where a numerator Pochhammer vanishes.
    Literal,
    /// Cancel pairs `a = b + m` with `b` a nonpositive integer and
    /// `1 <= m <= -b` before applying the literal rule.
    #[default]
    Regularized,
}

/// Argument of a terminating series.
#[derive(Debug, Clone, PartialEq)]
pub enum SeriesArgument {
    Exact(Rational),
    Float(f64),
}

/// Value of a terminating series; exact when the argument was exact.
#[derive(Debug, Clone, PartialEq)]
pub enum SeriesValue {
    Exact(Rational),
    Float(f64),
}

impl SeriesValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            SeriesValue::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            SeriesValue::Float(v) => *v,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TerminatingSeries {
    pub numerators: Vec<Rational>,
    pub denominators: Vec<Rational>,
    pub argument: SeriesArgument,
}

/// A numerator/denominator pair replaced by `(b + k)_m / (b)_m`.
#[derive(Debug, Clone)]
struct RegularizedPair {
    base: Rational,
    shift: u32,
}

/// Parameters after pair regularization together with the last nonzero index.
#[derive(Debug, Clone)]
struct SeriesPlan {
    numerators: Vec<Rational>,
    denominators: Vec<Rational>,
    pairs: Vec<RegularizedPair>,
    last: usize,
}

impl TerminatingSeries {
    pub fn new(numerators: Vec<Rational>, denominators: Vec<Rational>, argument: SeriesArgument) -> Self {
        Self {
            numerators,
            denominators,
            argument,
        }
    }

    /// Series with an exact rational argument.
    pub fn exact(numerators: Vec<Rational>, denominators: Vec<Rational>, x: Rational) -> Self {
        Self::new(numerators, denominators, SeriesArgument::Exact(x))
    }

    /// Series with a floating-point argument.
    pub fn float(numerators: Vec<Rational>, denominators: Vec<Rational>, x: f64) -> Self {
        Self::new(numerators, denominators, SeriesArgument::Float(x))
    }

    /// `(p, q)` of the `pFq` symbol.
    pub fn order(&self) -> (usize, usize) {
        (self.numerators.len(), self.denominators.len())
    }

    fn plan(&self, rule: TerminationRule) -> Result<SeriesPlan> {
        let literal = SeriesPlan {
            numerators: self.numerators.clone(),
            denominators: self.denominators.clone(),
            pairs: Vec::new(),
            last: 0,
        };
        let mut plan = match rule {
            TerminationRule::Literal => literal,
            TerminationRule::Regularized => {
                let regularized = regularize(&self.numerators, &self.denominators);
                if regularized.numerators.iter().any(|a| nonpositive_integer(a).is_some()) {
                    regularized
                } else {
                    literal
                }
            }
        };
        let last = plan
            .numerators
            .iter()
            .filter_map(nonpositive_integer)
            .min()
            .ok_or(Error::NonTerminating)?;
        // (b)_k first vanishes at k = 1 - b; every index up to `last` must be clear of it.
        for b in &plan.denominators {
            if let Some(m) = nonpositive_integer(b) {
                if m < last {
                    return Err(Error::DenominatorPole { index: m as usize + 1 });
                }
            }
        }
        plan.last = last as usize;
        Ok(plan)
    }

    /// Exact coefficients `beta_k` with `pFq = sum_k beta_k x^k`.
    pub fn coefficients_exact(&self, rule: TerminationRule) -> Result<Vec<Rational>> {
        let plan = self.plan(rule)?;
        let mut out = Vec::with_capacity(plan.last + 1);
        let mut k_factorial = Rational::one();
        for k in 0..=plan.last {
            if k > 0 {
                k_factorial *= Rational::from_integer((k as i64).into());
            }
            let kk = k as u32;
            let mut c = Rational::one();
            for a in &plan.numerators {
                c *= pochhammer(a, kk);
            }
            for b in &plan.denominators {
                c /= pochhammer(b, kk);
            }
            for p in &plan.pairs {
                let shifted = &p.base + Rational::from_integer((k as i64).into());
                c *= pochhammer(&shifted, p.shift) / pochhammer(&p.base, p.shift);
            }
            out.push(c / &k_factorial);
        }
        Ok(out)
    }

    /// Floating-point coefficients, computed with running products in `f64`
    /// and no rational arithmetic.
    pub fn coefficients_f64(&self, rule: TerminationRule) -> Result<Vec<f64>> {
        let plan = self.plan(rule)?;
        let nums: Vec<f64> = plan.numerators.iter().map(to_f64).collect();
        let dens: Vec<f64> = plan.denominators.iter().map(to_f64).collect();
        let pairs: Vec<(f64, u32)> = plan.pairs.iter().map(|p| (to_f64(&p.base), p.shift)).collect();
        let mut out = Vec::with_capacity(plan.last + 1);
        let mut running = 1.0;
        for k in 0..=plan.last {
            if k > 0 {
                let j = (k - 1) as f64;
                let num: f64 = nums.iter().map(|a| a + j).product();
                let den: f64 = dens.iter().map(|b| b + j).product();
                running *= num / (den * k as f64);
            }
            let pair_factor: f64 = pairs
                .iter()
                .map(|&(b, m)| pochhammer_f64(b + k as f64, m) / pochhammer_f64(b, m))
                .product();
            out.push(running * pair_factor);
        }
        Ok(out)
    }

    /// Evaluates the series with the default (regularized) termination rule.
    pub fn evaluate(&self) -> Result<SeriesValue> {
        self.evaluate_with(TerminationRule::default())
    }

    pub fn evaluate_with(&self, rule: TerminationRule) -> Result<SeriesValue> {
        match &self.argument {
            SeriesArgument::Exact(x) => {
                let coeffs = self.coefficients_exact(rule)?;
                let mut acc = Rational::zero();
                for c in coeffs.iter().rev() {
                    acc = acc * x + c;
                }
                Ok(SeriesValue::Exact(acc))
            }
            SeriesArgument::Float(x) => {
                let coeffs = self.coefficients_f64(rule)?;
                Ok(SeriesValue::Float(horner(&coeffs, *x)))
            }
        }
    }

    /// Evaluates the terminating polynomial at a complex point. The argument
    /// stored in the series is ignored.
    pub fn evaluate_complex(&self, x: Complex64, rule: TerminationRule) -> Result<Complex64> {
        let coeffs = self.coefficients_f64(rule)?;
        Ok(coeffs
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, &c| acc * x + c))
    }
}

/// Evaluates `series` with the default termination rule.
pub fn pfq(series: &TerminatingSeries) -> Result<SeriesValue> {
    series.evaluate()
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn regularize(numerators: &[Rational], denominators: &[Rational]) -> SeriesPlan {
    let mut nums: Vec<Option<Rational>> = numerators.iter().cloned().map(Some).collect();
    let mut dens = Vec::new();
    let mut pairs = Vec::new();
    for b in denominators {
        let Some(depth) = nonpositive_integer(b) else {
            dens.push(b.clone());
            continue;
        };
        let partner = nums.iter().position(|a| {
            a.as_ref().is_some_and(|a| {
                let diff = a - b;
                diff.is_integer()
                    && diff > Rational::zero()
                    && diff <= Rational::from_integer(depth.into())
            })
        });
        match partner {
            Some(i) => {
                let a = nums[i].take().expect("partner present");
                let shift = (a - b).to_integer().to_u32().expect("bounded shift");
                pairs.push(RegularizedPair { base: b.clone(), shift });
            }
            None => dens.push(b.clone()),
        }
    }
    SeriesPlan {
        numerators: nums.into_iter().flatten().collect(),
        denominators: dens,
        pairs,
        last: 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::pochhammer::{int, ratio};

    #[test]
    fn binomial_theorem() {
        let s = TerminatingSeries::exact(vec![int(-3)], vec![], int(-2));
        assert_eq!(pfq(&s).unwrap(), SeriesValue::Exact(int(27)));
        let s = TerminatingSeries::float(vec![int(-3)], vec![], -2.0);
        assert!((pfq(&s).unwrap().to_f64() - 27.0).abs() < 1e-13);
    }

    #[test]
    fn zero_numerator_is_one() {
        let s = TerminatingSeries::exact(vec![int(0)], vec![int(5), int(7)], ratio(13, 3));
        assert_eq!(pfq(&s).unwrap(), SeriesValue::Exact(int(1)));
        let s = TerminatingSeries::float(vec![int(0)], vec![int(5), int(7)], 123.0);
        assert_eq!(pfq(&s).unwrap(), SeriesValue::Float(1.0));
    }

    #[test]
    fn zero_numerator_paired_with_pole() {
        // (0)_k/(-1)_k regularizes to 1 - k, so 2F1(-2, 0; -1; x) = 1 - x^2
        let s = TerminatingSeries::exact(vec![int(-2), int(0)], vec![int(-1)], int(3));
        assert_eq!(s.evaluate_with(TerminationRule::Literal).unwrap(), SeriesValue::Exact(int(1)));
        assert_eq!(s.evaluate_with(TerminationRule::Regularized).unwrap(), SeriesValue::Exact(int(-8)));
    }

    #[test]
    fn three_term_sum() {
        let s = TerminatingSeries::exact(vec![int(-2)], vec![int(2), int(2)], int(-1));
        assert_eq!(pfq(&s).unwrap(), SeriesValue::Exact(ratio(55, 36)));
    }

    #[test]
    fn denominator_pole() {
        // (-1)_k vanishes at k = 2 while (-2)_k is still nonzero.
        let s = TerminatingSeries::exact(vec![int(-2)], vec![int(-1)], int(1));
        assert_eq!(pfq(&s), Err(Error::DenominatorPole { index: 2 }));
    }

    #[test]
    fn pole_after_termination_is_fine() {
        // Numerator -1 stops at k = 1; (-1)_k vanishes only at k = 2.
        let s = TerminatingSeries::exact(vec![int(-1)], vec![int(-1)], int(3));
        assert_eq!(pfq(&s).unwrap(), SeriesValue::Exact(int(4)));
    }

    #[test]
    fn non_terminating_rejected() {
        let s = TerminatingSeries::exact(vec![int(1)], vec![int(2)], int(1));
        assert_eq!(pfq(&s), Err(Error::NonTerminating));
    }

    #[test]
    fn degenerate_pair_literal_vs_regularized() {
        // 2F1(-4, -1; -2; x): (-1)_k/(-2)_k = (2 - k)/2 for every k.
        let s = TerminatingSeries::exact(vec![int(-4), int(-1)], vec![int(-2)], int(2));
        let literal = s.evaluate_with(TerminationRule::Literal).unwrap();
        assert_eq!(literal, SeriesValue::Exact(int(-3)));
        let reg = s.evaluate_with(TerminationRule::Regularized).unwrap();
        let direct: Rational = (0..=4u32)
            .map(|k| {
                crate::specfun::pochhammer::binomial(4, k)
                    * int(1 << k)
                    * ratio(2 - k as i64, 2)
                    * int(if k % 2 == 0 { 1 } else { -1 })
            })
            .sum();
        assert_eq!(reg, SeriesValue::Exact(direct));
    }

    #[test]
    fn complex_evaluation_matches_real() {
        let s = TerminatingSeries::float(vec![int(-3)], vec![int(2)], 0.0);
        let re = TerminatingSeries::float(vec![int(-3)], vec![int(2)], 0.7).evaluate().unwrap().to_f64();
        let c = s.evaluate_complex(Complex64::new(0.7, 0.0), TerminationRule::Regularized).unwrap();
        assert!((c.re - re).abs() < 1e-15 && c.im == 0.0);
    }
}
