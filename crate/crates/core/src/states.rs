//! Generalized coherent states `|z⟩_r` on `H_n`.
//!
//! With `g_k = Π_{l=1}^{r-1} 1/(n+l-1)_k` the state is
//! `c_k ∝ z^k g_k √C(n,k)` and its squared norm is
//! `M_r(t) = Σ_k C(n,k) g_k² t^k = 1F_{2r-2}([-n]; [n, n, …, n+r-2, n+r-2]; -t)`.
//! Equivalently `|z⟩_r ∝ 0F_{r-1}(; n, …, n+r-2; z K_+)|n, -n⟩`.

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::specfun::{binomial, binomial_f64, gamma, int, pochhammer, pfq, Rational, TerminatingSeries, TerminationRule};

/// Norm tolerance for constructed states.
pub const NORM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: u32,
    pub r: u32,
    pub hbar: f64,
    pub mass: f64,
    pub omega: f64,
}

impl ModelParams {
    /// Level `n`, order `r`, unit constants.
    pub fn new(n: u32, r: u32) -> Result<Self> {
        Self::with_constants(n, r, 1.0, 1.0, 1.0)
    }

    pub fn with_constants(n: u32, r: u32, hbar: f64, mass: f64, omega: f64) -> Result<Self> {
        let p = Self {
            n,
            r,
            hbar,
            mass,
            omega,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::InvalidParameter(format!("n must be >= 1, got {}", self.n)));
        }
        if self.r < 1 {
            return Err(Error::InvalidParameter(format!("r must be >= 1, got {}", self.r)));
        }
        for (name, v) in [("hbar", self.hbar), ("mass", self.mass), ("omega", self.omega)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Denominator list `[n, n, n+1, n+1, …, n+r-2, n+r-2]` of `M_r`.
    pub fn norm_denominators(&self) -> Vec<Rational> {
        doubled_range(self.n as i64, self.n as i64 + self.r as i64 - 2)
    }
}

/// `[lo, lo, lo+1, lo+1, …, hi, hi]`; empty when `hi < lo`.
pub(crate) fn doubled_range(lo: i64, hi: i64) -> Vec<Rational> {
    (lo..=hi).flat_map(|v| [int(v), int(v)]).collect()
}

/// The label `z = |z| e^{iφ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherencePoint {
    pub modulus: f64,
    pub phase: f64,
}

impl CoherencePoint {
    pub fn new(modulus: f64, phase: f64) -> Result<Self> {
        if !(modulus.is_finite() && modulus >= 0.0) {
            return Err(Error::InvalidParameter(format!("|z| must be finite and >= 0, got {modulus}")));
        }
        if !phase.is_finite() {
            return Err(Error::InvalidParameter(format!("phase must be finite, got {phase}")));
        }
        let mut phase = phase.rem_euclid(TAU);
        if phase >= TAU {
            phase = 0.0;
        }
        Ok(Self { modulus, phase })
    }

    /// From `t = |z|²` and `φ`.
    pub fn from_t(t: f64, phase: f64) -> Result<Self> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidParameter(format!("t must be finite and >= 0, got {t}")));
        }
        Self::new(t.sqrt(), phase)
    }

    /// `z = (α/|α|) tanh|α|` for a displacement amplitude `α`.
    pub fn from_displacement(alpha: Complex64) -> Result<Self> {
        Self::new(alpha.norm().tanh(), alpha.arg())
    }

    pub fn t(&self) -> f64 {
        self.modulus * self.modulus
    }

    pub fn z(&self) -> Complex64 {
        Complex64::from_polar(self.modulus, self.phase)
    }
}

/// Coefficients over `e_k = |n-k, -n+2k⟩`, `k = 0..=n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    pub n: u32,
    pub coefficients: Vec<Complex64>,
}

impl StateVector {
    pub fn norm_sqr(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|c_k|²`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.coefficients.iter().map(|c| c.norm_sqr()).collect()
    }

    fn from_magnitudes(n: u32, magnitudes: Vec<f64>, phase: f64) -> Self {
        let norm = magnitudes.iter().map(|m| m * m).sum::<f64>().sqrt();
        let coefficients = magnitudes
            .iter()
            .enumerate()
            .map(|(k, m)| Complex64::from_polar(m / norm, k as f64 * phase))
            .collect();
        Self { n, coefficients }
    }
}

/// Exact `C(n,k) g_k²`, the weight of `t^k` in `M_r`.
pub fn norm_weight(params: &ModelParams, k: u32) -> Rational {
    let mut w = binomial(params.n, k);
    for l in 1..params.r {
        let p = pochhammer(&int((params.n + l - 1) as i64), k);
        w /= &p * &p;
    }
    w
}

/// `M_r(t)` through the terminating series.
pub fn normalization_constant(params: &ModelParams, t: f64) -> Result<f64> {
    let series = TerminatingSeries::float(vec![int(-(params.n as i64))], params.norm_denominators(), -t);
    Ok(pfq(&series)?.to_f64())
}

/// `M_r(t)` exactly for rational `t`.
pub fn normalization_constant_exact(params: &ModelParams, t: &Rational) -> Result<Rational> {
    let series = TerminatingSeries::exact(vec![int(-(params.n as i64))], params.norm_denominators(), -t.clone());
    match pfq(&series)? {
        crate::specfun::SeriesValue::Exact(q) => Ok(q),
        crate::specfun::SeriesValue::Float(_) => unreachable!("exact argument yields exact value"),
    }
}

/// `M_r(t)` as the plain power sum `Σ w_k t^k`.
pub fn normalization_direct(params: &ModelParams, t: &Rational) -> Rational {
    let mut power = int(1);
    let mut sum = Rational::zero();
    for k in 0..=params.n {
        sum += norm_weight(params, k) * &power;
        power *= t;
    }
    sum
}

/// Unnormalized magnitudes `|z|^k g_k √C(n,k)`, rescaled to avoid overflow.
fn magnitudes(params: &ModelParams, modulus: f64) -> Vec<f64> {
    let n = params.n;
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut m = 1.0f64;
    out.push(m);
    for k in 0..n {
        let mut step = modulus * (((n - k) as f64) / ((k + 1) as f64)).sqrt();
        for l in 1..params.r {
            step /= (n + l - 1 + k) as f64;
        }
        m *= step;
        if m > 1e150 {
            for v in &mut out {
                *v *= 1e-150;
            }
            m *= 1e-150;
        }
        out.push(m);
    }
    out
}

/// `|z⟩_r` from the coefficient formula.
pub fn build_state(params: &ModelParams, z: &CoherencePoint) -> StateVector {
    StateVector::from_magnitudes(params.n, magnitudes(params, z.modulus), z.phase)
}

/// `_r⟨z1|z2⟩_r` through the terminating series at `-z̄1 z2`.
pub fn overlap(params: &ModelParams, z1: &CoherencePoint, z2: &CoherencePoint) -> Result<Complex64> {
    let x = -(z1.z().conj() * z2.z());
    let series = TerminatingSeries::float(vec![int(-(params.n as i64))], params.norm_denominators(), 0.0);
    let numerator = series.evaluate_complex(x, TerminationRule::Regularized)?;
    let m1 = normalization_constant(params, z1.t())?;
    let m2 = normalization_constant(params, z2.t())?;
    Ok(numerator / (m1 * m2).sqrt())
}

/// `_r⟨z1|z2⟩_r` as a coefficient inner product.
pub fn overlap_direct(params: &ModelParams, z1: &CoherencePoint, z2: &CoherencePoint) -> Complex64 {
    build_state(params, z1).inner(&build_state(params, z2))
}

/// `_{r1}⟨z|z⟩_{r2}` as a coefficient inner product.
pub fn overlap_cross_r(n: u32, r1: u32, r2: u32, z: &CoherencePoint) -> Result<f64> {
    let s1 = build_state(&ModelParams::new(n, r1)?, z);
    let s2 = build_state(&ModelParams::new(n, r2)?, z);
    Ok(s1.inner(&s2).re)
}

/// `_{r1}⟨z|z⟩_{r2}` through `1F_{r1+r2-2}` whose denominator list is the
/// union of the two single-order lists `[n, …, n+r_i-2]`.
pub fn overlap_cross_r_series(n: u32, r1: u32, r2: u32, z: &CoherencePoint) -> Result<f64> {
    let p1 = ModelParams::new(n, r1)?;
    let p2 = ModelParams::new(n, r2)?;
    let mut denominators: Vec<Rational> = (n as i64..=n as i64 + r1 as i64 - 2).map(int).collect();
    denominators.extend((n as i64..=n as i64 + r2 as i64 - 2).map(int));
    let series = TerminatingSeries::float(vec![int(-(n as i64))], denominators, -z.t());
    let numerator = pfq(&series)?.to_f64();
    Ok(numerator / (normalization_constant(&p1, z.t())? * normalization_constant(&p2, z.t())?).sqrt())
}

/// `f(n_a) = Γ(2n-1-n_a) / Γ(2n+r-2-n_a)`.
pub fn deformation_function(n: u32, r: u32, n_a: u32) -> Result<f64> {
    let lo = 2.0 * n as f64 - 1.0 - n_a as f64;
    let hi = lo + r as f64 - 1.0;
    if lo <= 0.0 {
        return Err(Error::GammaPole(lo));
    }
    if r == 1 {
        return Ok(1.0);
    }
    Ok(gamma(lo)? / gamma(hi)?)
}

/// `|z⟩_r` from `exp(z f(n̂_a) a b†)|n, -n⟩`.
///
/// The `k`-th power of `f(n̂_a) a b†` walks the orbit `(n, 0) → (n-1, 1) → …`;
/// step `s` lowers `n_a` to `n-1-s` before `f` acts, contributing
/// `f(n-1-s) √((n-s)(s+1))`.
pub fn build_state_deformed(params: &ModelParams, z: &CoherencePoint) -> Result<StateVector> {
    let n = params.n;
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut m = 1.0f64;
    out.push(m);
    for s in 0..n {
        let f = deformation_function(n, params.r, n - 1 - s)?;
        let ladder = (((n - s) * (s + 1)) as f64).sqrt();
        // z^k / k! with k = s + 1
        m *= z.modulus * f * ladder / (s + 1) as f64;
        out.push(m);
    }
    Ok(StateVector::from_magnitudes(n, out, z.phase))
}

/// `c_k` for `r = 1`: `√C(n,k) z^k / (1+t)^{n/2}`.
pub fn binomial_state(n: u32, z: &CoherencePoint) -> StateVector {
    let scale = (1.0 + z.t()).powf(-0.5 * n as f64);
    let coefficients = (0..=n)
        .map(|k| Complex64::from_polar(binomial_f64(n, k).sqrt() * z.modulus.powi(k as i32) * scale, k as f64 * z.phase))
        .collect();
    StateVector { n, coefficients }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::ratio;
    use std::f64::consts::PI;

    fn p(n: u32, r: u32) -> ModelParams {
        ModelParams::new(n, r).unwrap()
    }

    fn pt(t: f64, phi: f64) -> CoherencePoint {
        CoherencePoint::from_t(t, phi).unwrap()
    }

    #[test]
    fn rejects_bad_params() {
        assert!(ModelParams::new(0, 1).is_err());
        assert!(ModelParams::new(1, 0).is_err());
        assert!(ModelParams::with_constants(1, 1, -1.0, 1.0, 1.0).is_err());
        assert!(CoherencePoint::new(-1.0, 0.0).is_err());
    }

    #[test]
    fn phase_is_reduced() {
        let z = CoherencePoint::new(1.0, -PI / 2.0).unwrap();
        assert!((z.phase - 1.5 * PI).abs() < 1e-15);
        assert_eq!(CoherencePoint::new(1.0, TAU).unwrap().phase, 0.0);
    }

    #[test]
    fn normalization_examples() {
        for n in 1..5 {
            for r in 1..5 {
                assert_eq!(normalization_constant(&p(n, r), 0.0).unwrap(), 1.0);
            }
        }
        let m = normalization_constant(&p(3, 1), 2.0).unwrap();
        assert!((m - 27.0).abs() < 1e-13);
        assert_eq!(normalization_constant_exact(&p(2, 2), &int(1)).unwrap(), ratio(55, 36));
    }

    #[test]
    fn normalization_series_matches_power_sum() {
        for n in 1..=8 {
            for r in 1..=4 {
                let t = ratio(7, 3);
                assert_eq!(normalization_constant_exact(&p(n, r), &t).unwrap(), normalization_direct(&p(n, r), &t));
            }
        }
    }

    #[test]
    fn state_examples() {
        let s = build_state(&p(2, 1), &pt(0.0, 0.0));
        assert_eq!(s.coefficients, vec![Complex64::new(1.0, 0.0), Complex64::zero(), Complex64::zero()]);

        let s = build_state(&p(1, 1), &pt(1.0, 0.0));
        let h = 0.5f64.sqrt();
        assert!((s.coefficients[0].re - h).abs() < 1e-15 && (s.coefficients[1].re - h).abs() < 1e-15);

        let s = build_state(&p(2, 2), &pt(1.0, 0.0));
        let norm = (55.0f64 / 36.0).sqrt();
        let expected = [1.0 / norm, 2f64.sqrt() / 2.0 / norm, 1.0 / 6.0 / norm];
        for (c, e) in s.coefficients.iter().zip(expected) {
            assert!((c.re - e).abs() < 1e-15 && c.im == 0.0);
        }
    }

    #[test]
    fn states_are_normalized_and_phase_covariant() {
        for n in 1..=8 {
            for r in 1..=4 {
                for t in [0.0, 0.01, 1.0, 37.0, 1e8] {
                    let base = build_state(&p(n, r), &pt(t, 0.0));
                    assert!((base.norm_sqr() - 1.0).abs() < NORM_TOLERANCE);
                    let rotated = build_state(&p(n, r), &pt(t, 1.1));
                    for (k, (a, b)) in base.coefficients.iter().zip(&rotated.coefficients).enumerate() {
                        let expected = a * Complex64::from_polar(1.0, 1.1 * k as f64);
                        assert!((expected - b).norm() < 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn r1_is_binomial() {
        for n in [1, 2, 3, 10] {
            for t in [0.1, 1.0, 10.0] {
                let z = pt(t, 0.7);
                let d = build_state(&p(n, 1), &z);
                let b = binomial_state(n, &z);
                for (x, y) in d.coefficients.iter().zip(&b.coefficients) {
                    assert!((x - y).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn overlap_examples() {
        let o = overlap(&p(1, 1), &pt(1.0, 0.0), &pt(1.0, PI)).unwrap();
        assert!(o.norm() < 1e-15);
        let o = overlap(&p(2, 2), &pt(1.0, 0.0), &pt(1.0, 0.0)).unwrap();
        assert!((o - 1.0).norm() < 1e-15);
    }

    #[test]
    fn overlap_series_matches_inner_product() {
        let grid = [pt(0.0, 0.0), pt(0.3, 0.2), pt(1.0, 2.0), pt(4.0, 5.5), pt(25.0, 1.0)];
        for n in 1..=6 {
            for r in 1..=4 {
                for z1 in &grid {
                    for z2 in &grid {
                        let a = overlap(&p(n, r), z1, z2).unwrap();
                        let b = overlap_direct(&p(n, r), z1, z2);
                        assert!((a - b).norm() < 1e-12, "n={n} r={r}");
                        assert!(a.norm() <= 1.0 + 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn cross_order_overlap() {
        assert!((overlap_cross_r(3, 2, 2, &pt(2.0, 0.3)).unwrap() - 1.0).abs() < 1e-15);
        assert!((overlap_cross_r(3, 1, 4, &pt(0.0, 0.0)).unwrap() - 1.0).abs() < 1e-15);
        // n = 1, r = 2 has g_1 = 1/n = 1, so the state coincides with r = 1
        let v = overlap_cross_r(1, 1, 2, &pt(1.0, 0.0)).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
        // (1, 1)/√2 against (1, 1/2)/√(5/4)
        let v = overlap_cross_r(1, 1, 3, &pt(1.0, 0.0)).unwrap();
        assert!((v - 3.0 / 10f64.sqrt()).abs() < 1e-15);
        for n in 1..=5 {
            for r1 in 1..=4 {
                for r2 in 1..=4 {
                    let z = pt(1.7, 0.0);
                    let a = overlap_cross_r(n, r1, r2, &z).unwrap();
                    let b = overlap_cross_r_series(n, r1, r2, &z).unwrap();
                    assert!((a - b).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn deformation_examples() {
        for n_a in 0..=4 {
            assert_eq!(deformation_function(3, 1, n_a).unwrap(), 1.0);
        }
        assert!((deformation_function(2, 2, 2).unwrap() - 1.0).abs() < 1e-15);
        assert!((deformation_function(2, 2, 1).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(deformation_function(2, 2, 3), Err(Error::GammaPole(_))));
    }

    #[test]
    fn deformed_matches_direct() {
        for n in 1..=6 {
            for r in 1..=4 {
                for t in [0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0] {
                    let z = pt(t, 0.9);
                    let a = build_state(&p(n, r), &z);
                    let b = build_state_deformed(&p(n, r), &z).unwrap();
                    for (x, y) in a.coefficients.iter().zip(&b.coefficients) {
                        assert!((x - y).norm() < 1e-12, "n={n} r={r} t={t}");
                    }
                }
            }
        }
    }

    #[test]
    fn displacement_label() {
        let z = CoherencePoint::from_displacement(Complex64::new(0.0, 2.0)).unwrap();
        assert!((z.modulus - 2f64.tanh()).abs() < 1e-15);
        assert!((z.phase - PI / 2.0).abs() < 1e-15);
    }
}
