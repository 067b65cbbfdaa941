//! Hypergeometric closed forms for the moments of `|z⟩_r`.
//!
//! Every moment has the shape `prefactor · t^p · F(t) / M_r(t)` times a power
//! of `z̄`, where `F` is a terminating series at `-t`. The radial part is
//! evaluated either in `f64` or exactly from the binary value of `t`.

use num_traits::{FromPrimitive, One, ToPrimitive, Zero};

use super::Precision;
use crate::error::{Error, Result};
use crate::specfun::{factorial, int, ratio, Rational, SeriesValue, TerminatingSeries, TerminationRule};
use crate::states::{doubled_range, ModelParams};

/// One closed form: `prefactor · t^power · pFq(numerators; denominators; -t) / M_r(t)`.
#[derive(Debug, Clone)]
pub struct ClosedForm {
    pub prefactor: Rational,
    pub power: u32,
    pub numerators: Vec<Rational>,
    pub denominators: Vec<Rational>,
}

impl ClosedForm {
    fn series(&self, x: Rational) -> TerminatingSeries {
        TerminatingSeries::exact(self.numerators.clone(), self.denominators.clone(), x)
    }

    fn series_f64(&self, x: f64) -> TerminatingSeries {
        TerminatingSeries::float(self.numerators.clone(), self.denominators.clone(), x)
    }

    /// Exact value of `prefactor · t^power · pFq(…; -t)` (without `1/M_r`).
    pub fn numerator_exact(&self, t: &Rational, rule: TerminationRule) -> Result<Rational> {
        if self.prefactor.is_zero() {
            return Ok(Rational::zero());
        }
        let value = match self.series(-t.clone()).evaluate_with(rule)? {
            SeriesValue::Exact(q) => q,
            SeriesValue::Float(_) => unreachable!("exact argument yields exact value"),
        };
        let mut power = Rational::one();
        for _ in 0..self.power {
            power *= t;
        }
        Ok(&self.prefactor * power * value)
    }

    pub fn numerator_f64(&self, t: f64, rule: TerminationRule) -> Result<f64> {
        if self.prefactor.is_zero() {
            return Ok(0.0);
        }
        let value = self.series_f64(-t).evaluate_with(rule)?.to_f64();
        Ok(self.prefactor.to_f64().unwrap_or(f64::NAN) * t.powi(self.power as i32) * value)
    }
}

/// `Γ(n+1) / Γ(n+r-1)` as an exact rational.
fn gamma_ratio(n: u32, r: u32) -> Rational {
    factorial(n) / factorial(n + r - 2)
}

fn list(values: impl IntoIterator<Item = i64>) -> Vec<Rational> {
    values.into_iter().map(int).collect()
}

/// Closed forms of a level `(n, r)`.
#[derive(Debug, Clone)]
pub struct MomentForms {
    /// `M_r`
    pub norm: ClosedForm,
    /// `⟨K_+⟩ / z̄`
    pub k_plus: ClosedForm,
    /// `⟨K_+²⟩ / z̄²`
    pub k_plus_sq: ClosedForm,
    /// `⟨K_+ K_-⟩`
    pub k_plus_k_minus: ClosedForm,
    /// `⟨K_3⟩`
    pub k3: ClosedForm,
    /// `⟨N_b⟩`
    pub mean_nb: ClosedForm,
    /// `⟨N_b²⟩`
    pub mean_nb_sq: ClosedForm,
}

impl MomentForms {
    pub fn new(params: &ModelParams) -> Self {
        let n = params.n as i64;
        let r = params.r as i64;
        let g = gamma_ratio(params.n, params.r);

        let norm = ClosedForm {
            prefactor: int(1),
            power: 0,
            numerators: list([-n]),
            denominators: doubled_range(n, n + r - 2),
        };

        let k_plus_den = if r == 1 {
            Vec::new()
        } else {
            let mut d = list([n]);
            d.extend(doubled_range(n + 1, n + r - 2));
            d.push(int(n + r - 1));
            d
        };
        let k_plus = ClosedForm {
            prefactor: g.clone(),
            power: 0,
            numerators: list([1 - n]),
            denominators: k_plus_den,
        };

        let k_plus_sq = ClosedForm {
            prefactor: ratio(n - 1, n + r - 1) * &g * &g,
            power: 0,
            numerators: list([2 - n, n, n + 1, n + r - 1, n + r]),
            denominators: doubled_range(n, n + r),
        };

        let mut kk_den = list([-n]);
        kk_den.extend(doubled_range(n + 1, n + r - 1));
        let k_plus_k_minus = ClosedForm {
            prefactor: &g * &g,
            power: 1,
            numerators: list([1 - n, 1 - n]),
            denominators: kk_den,
        };

        let mut k3_den = vec![ratio(-n, 2)];
        k3_den.extend(doubled_range(n, n + r - 2));
        let k3 = ClosedForm {
            prefactor: ratio(-n, 2),
            power: 0,
            numerators: vec![int(-n), ratio(2 - n, 2)],
            denominators: k3_den,
        };

        // (√n Γ(n) / Γ(n+r-1))² = n Γ(n)² / Γ(n+r-1)²
        let nb_prefactor = int(n) * (factorial(params.n - 1) / factorial(params.n + params.r - 2)).pow(2);
        let mean_nb = ClosedForm {
            prefactor: nb_prefactor.clone(),
            power: 1,
            numerators: list([1 - n]),
            denominators: doubled_range(n + 1, n + r - 1),
        };
        let mut nb2_den = list([1]);
        nb2_den.extend(doubled_range(n + 1, n + r - 1));
        let mean_nb_sq = ClosedForm {
            prefactor: nb_prefactor,
            power: 1,
            numerators: list([2, 1 - n]),
            denominators: nb2_den,
        };

        Self {
            norm,
            k_plus,
            k_plus_sq,
            k_plus_k_minus,
            k3,
            mean_nb,
            mean_nb_sq,
        }
    }
}

/// The `t`-dependent factors of every moment, before phases are attached.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialMoments<T> {
    pub norm: T,
    pub k_plus: T,
    pub k_plus_sq: T,
    pub k_plus_k_minus: T,
    pub k3: T,
    pub mean_nb: T,
    pub mean_nb_sq: T,
}

impl RadialMoments<Rational> {
    pub fn to_f64(&self) -> RadialMoments<f64> {
        let f = |q: &Rational| q.to_f64().unwrap_or(f64::NAN);
        RadialMoments {
            norm: f(&self.norm),
            k_plus: f(&self.k_plus),
            k_plus_sq: f(&self.k_plus_sq),
            k_plus_k_minus: f(&self.k_plus_k_minus),
            k3: f(&self.k3),
            mean_nb: f(&self.mean_nb),
            mean_nb_sq: f(&self.mean_nb_sq),
        }
    }
}

/// Exact radial moments at rational `t`.
pub fn radial_moments_exact(params: &ModelParams, t: &Rational, rule: TerminationRule) -> Result<RadialMoments<Rational>> {
    let forms = MomentForms::new(params);
    let m = forms.norm.numerator_exact(t, rule)?;
    let ratio = |form: &ClosedForm| -> Result<Rational> { Ok(form.numerator_exact(t, rule)? / &m) };
    Ok(RadialMoments {
        k_plus: ratio(&forms.k_plus)?,
        k_plus_sq: ratio(&forms.k_plus_sq)?,
        k_plus_k_minus: ratio(&forms.k_plus_k_minus)?,
        k3: ratio(&forms.k3)?,
        mean_nb: ratio(&forms.mean_nb)?,
        mean_nb_sq: ratio(&forms.mean_nb_sq)?,
        norm: m,
    })
}

/// Radial moments in the requested precision.
pub fn radial_moments(params: &ModelParams, t: f64, precision: Precision, rule: TerminationRule) -> Result<RadialMoments<f64>> {
    match precision {
        Precision::Extended => {
            let exact = Rational::from_f64(t).ok_or_else(|| Error::InvalidParameter(format!("t = {t} is not finite")))?;
            Ok(radial_moments_exact(params, &exact, rule)?.to_f64())
        }
        Precision::Double => {
            let forms = MomentForms::new(params);
            let m = forms.norm.numerator_f64(t, rule)?;
            let ratio = |form: &ClosedForm| -> Result<f64> { Ok(form.numerator_f64(t, rule)? / m) };
            Ok(RadialMoments {
                k_plus: ratio(&forms.k_plus)?,
                k_plus_sq: ratio(&forms.k_plus_sq)?,
                k_plus_k_minus: ratio(&forms.k_plus_k_minus)?,
                k3: ratio(&forms.k3)?,
                mean_nb: ratio(&forms.mean_nb)?,
                mean_nb_sq: ratio(&forms.mean_nb_sq)?,
                norm: m,
            })
        }
    }
}

/// Exact photon statistics at rational `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactPhotonStats {
    pub mean_nb: Rational,
    pub mean_nb_sq: Rational,
    pub q_a: Option<Rational>,
    pub q_b: Option<Rational>,
    pub g2: Option<Rational>,
}

pub fn photon_stats_exact(params: &ModelParams, t: &Rational) -> Result<ExactPhotonStats> {
    let radial = radial_moments_exact(params, t, TerminationRule::Regularized)?;
    let n = int(params.n as i64);
    let nb = radial.mean_nb;
    let nb2 = radial.mean_nb_sq;
    let na = &n - &nb;
    let var = &nb2 - &nb * &nb;
    let q_b = (!nb.is_zero()).then(|| &var / &nb - int(1));
    let q_a = (!na.is_zero()).then(|| &var / &na - int(1));
    let g2 = (!nb.is_zero() && !na.is_zero()).then(|| (&n * &nb - &nb2) / (&nb * &na));
    Ok(ExactPhotonStats {
        mean_nb: nb,
        mean_nb_sq: nb2,
        q_a,
        q_b,
        g2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32, r: u32) -> ModelParams {
        ModelParams::new(n, r).unwrap()
    }

    #[test]
    fn anchors_are_exact() {
        let m = radial_moments_exact(&p(2, 2), &int(1), TerminationRule::Regularized).unwrap();
        assert_eq!(m.norm, ratio(55, 36));
        assert_eq!(m.k_plus, ratio(42, 55));
        assert_eq!(m.mean_nb, ratio(4, 11));
        assert_eq!(m.mean_nb_sq, ratio(2, 5));
        let s = photon_stats_exact(&p(2, 2), &int(1)).unwrap();
        assert_eq!(s.q_b, Some(ratio(-29, 110)));
        assert_eq!(s.g2, Some(ratio(11, 20)));
    }

    #[test]
    fn two_level_moments() {
        // n = 1, r = 1 at t = 1/3: <K+>/z̄ = 1/(1+t), <K+K-> = t/(1+t), <K3> = -(1-t)/(2(1+t))
        let t = ratio(1, 3);
        let m = radial_moments_exact(&p(1, 1), &t, TerminationRule::Regularized).unwrap();
        assert_eq!(m.k_plus, ratio(3, 4));
        assert_eq!(m.k_plus_sq, int(0));
        assert_eq!(m.k_plus_k_minus, ratio(1, 4));
        assert_eq!(m.k3, ratio(-1, 4));
    }

    #[test]
    fn binomial_statistics() {
        for n in [1u32, 2, 3, 10] {
            let t = ratio(5, 2);
            let s = photon_stats_exact(&p(n, 1), &t).unwrap();
            let one_plus = int(1) + &t;
            assert_eq!(s.mean_nb, int(n as i64) * &t / &one_plus);
            assert_eq!(s.q_a, Some(-int(1) / &one_plus));
            assert_eq!(s.q_b, Some(-t.clone() / &one_plus));
            assert_eq!(s.g2, Some(ratio(n as i64 - 1, n as i64)));
        }
    }

    #[test]
    fn extremal_point() {
        for n in 1..=6 {
            for r in 1..=4 {
                let m = radial_moments(&p(n, r), 0.0, Precision::Double, TerminationRule::Regularized).unwrap();
                assert_eq!(m.norm, 1.0);
                assert_eq!(m.k3, -(n as f64) / 2.0);
                assert_eq!(m.mean_nb, 0.0);
            }
        }
    }

    #[test]
    fn extended_matches_double() {
        for n in 1..=6 {
            for r in 1..=4 {
                let d = radial_moments(&p(n, r), 0.7, Precision::Double, TerminationRule::Regularized).unwrap();
                let e = radial_moments(&p(n, r), 0.7, Precision::Extended, TerminationRule::Regularized).unwrap();
                for (a, b) in [(d.k_plus, e.k_plus), (d.k_plus_k_minus, e.k_plus_k_minus), (d.mean_nb_sq, e.mean_nb_sq)] {
                    assert!((a - b).abs() <= 1e-14 * b.abs().max(1.0));
                }
            }
        }
    }
}
