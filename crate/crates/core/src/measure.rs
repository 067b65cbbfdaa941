//! Radial measure `K_r` resolving the identity on `H_n`.
//!
//! `∮ d²z K_r(|z|) |z⟩_r⟨z| = 1` reduces, after the angular integral, to the
//! moment conditions
//!
//! ```text
//! ∫₀^∞ |z|^{2k+1} π K_r / M_r d|z| = ½ ∫₀^∞ t^k F(t) dt = m_k,   k = 0..n
//! m_k = [Π_{l=1}^{r-1} Γ(n+k+l-1) / Γ(n+l-1)]² (n-k)! k! / n!
//! ```
//!
//! with `F = π K_r / M_r`. For `r = 1`, `F(t) = 2(n+1)(1+t)^{-(n+2)}`; otherwise
//! `F` comes from the inverse Mellin transform in [`crate::specfun::mellin`].

use num_traits::ToPrimitive;
use serde::Serialize;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::RwLock;

use crate::error::{Error, Result};
use crate::specfun::{factorial, inverse_mellin_density, integrate_semi_infinite, pochhammer, int, MellinDensity, MellinSpec, Rational};
use crate::states::{normalization_constant, ModelParams};

/// Pass threshold for the relative moment residual.
pub const MOMENT_TOLERANCE: f64 = 1e-6;
/// Relative tolerance requested from the moment quadrature.
pub const QUADRATURE_TOLERANCE: f64 = 1e-9;
/// Lowest admissible density value; anything below is a numerical defect.
pub const NEGATIVITY_FLOOR: f64 = -1e-12;
/// Moment integrands are evaluated on `[T_MIN, T_MAX]` and taken as 0 outside;
/// the neglected tails are below `1e-9` relative for `n <= 6`, `r <= 4`.
const T_MIN: f64 = 1e-12;
const T_MAX: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureParams {
    pub n: u32,
    pub r: u32,
    /// Fixed contour; `None` places the contour per argument.
    pub mellin: Option<MellinSpec>,
}

impl MeasureParams {
    pub fn new(n: u32, r: u32) -> Result<Self> {
        ModelParams::new(n, r)?;
        Ok(Self { n, r, mellin: None })
    }

    pub fn with_contour(mut self, spec: MellinSpec) -> Result<Self> {
        spec.validate()?;
        if spec.n != self.n || spec.r != self.r {
            return Err(Error::InvalidParameter("contour spec is for a different (n, r)".into()));
        }
        self.mellin = Some(spec);
        Ok(self)
    }
}

/// `F(t) = 2(n+1)(1+t)^{-(n+2)}`, the `r = 1` weight.
pub fn weight_r1(n: u32, t: f64) -> f64 {
    2.0 * (n as f64 + 1.0) * (1.0 + t).powi(-(n as i32 + 2))
}

/// Exact moment target `m_k`.
pub fn moment_target(n: u32, r: u32, k: u32) -> Rational {
    let mut g = int(1);
    for l in 1..r {
        g *= pochhammer(&int((n + l - 1) as i64), k);
    }
    &g * &g * factorial(n - k) * factorial(k) / factorial(n)
}

/// Density evaluator with memoized values.
#[derive(Debug)]
pub struct Measure {
    params: MeasureParams,
    model: ModelParams,
    adaptive: Option<MellinDensity>,
    cache: RwLock<HashMap<u64, f64>>,
}

impl Measure {
    pub fn new(params: MeasureParams) -> Result<Self> {
        let model = ModelParams::new(params.n, params.r)?;
        let adaptive = match (params.r, params.mellin) {
            (1, _) | (_, Some(_)) => None,
            _ => Some(MellinDensity::new(params.n, params.r)?),
        };
        Ok(Self {
            params,
            model,
            adaptive,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn params(&self) -> &MeasureParams {
        &self.params
    }

    fn weight_uncached(&self, t: f64) -> Result<f64> {
        if self.params.r == 1 && self.params.mellin.is_none() {
            return Ok(weight_r1(self.params.n, t));
        }
        if t <= 0.0 {
            return Err(Error::InvalidParameter(format!("t must be positive, got {t}")));
        }
        match (&self.params.mellin, &self.adaptive) {
            (Some(spec), _) => inverse_mellin_density(spec, t),
            (None, Some(d)) => d.value(t),
            (None, None) => unreachable!("r > 1 without a fixed contour always has an adaptive one"),
        }
    }

    /// `F(t) = π K_r(t) / M_r(t)`.
    pub fn weight(&self, t: f64) -> Result<f64> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidParameter(format!("t must be finite and >= 0, got {t}")));
        }
        let key = t.to_bits();
        if let Some(v) = self.cache.read().ok().and_then(|c| c.get(&key).copied()) {
            return Ok(v);
        }
        let v = self.weight_uncached(t)?;
        if v < NEGATIVITY_FLOOR {
            return Err(Error::NegativeDensity { value: v });
        }
        if let Ok(mut c) = self.cache.write() {
            c.insert(key, v);
        }
        Ok(v)
    }

    /// `K_r(t) = M_r(t) F(t) / π`.
    pub fn density(&self, t: f64) -> Result<f64> {
        if self.params.r == 1 && self.params.mellin.is_none() {
            return Ok(2.0 * (self.params.n as f64 + 1.0) / (PI * (1.0 + t) * (1.0 + t)));
        }
        let f = self.weight(t)?;
        Ok(normalization_constant(&self.model, t)? * f / PI)
    }

    /// `½ ∫ t^k F(t) dt`.
    pub fn moment(&self, k: u32) -> Result<f64> {
        let f = |t: f64| {
            if !(T_MIN..=T_MAX).contains(&t) {
                return 0.0;
            }
            match self.weight(t) {
                Ok(v) => 0.5 * t.powi(k as i32) * v,
                Err(_) => f64::NAN,
            }
        };
        integrate_semi_infinite(f, QUADRATURE_TOLERANCE)
    }

    /// `|½ ∫ t^k F dt - m_k| / m_k`.
    pub fn moment_residual(&self, k: u32) -> Result<f64> {
        if k > self.params.n {
            return Err(Error::InvalidParameter(format!("moment index {k} exceeds n = {}", self.params.n)));
        }
        let target = moment_target(self.params.n, self.params.r, k).to_f64().unwrap_or(f64::NAN);
        Ok((self.moment(k)? - target).abs() / target)
    }

    pub fn identity_resolution_check(&self) -> Result<IdentityReport> {
        let residuals = (0..=self.params.n).map(|k| self.moment_residual(k)).collect::<Result<Vec<_>>>()?;
        let max_residual = residuals.iter().copied().fold(0.0, f64::max);
        Ok(IdentityReport {
            n: self.params.n,
            r: self.params.r,
            residuals,
            max_residual,
            pass: max_residual <= MOMENT_TOLERANCE,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub n: u32,
    pub r: u32,
    /// Relative residual of moment `k` at index `k`.
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub pass: bool,
}

/// `K_r(t)`.
pub fn density(p: &MeasureParams, t: f64) -> Result<f64> {
    Measure::new(*p)?.density(t)
}

pub fn moment_residual(p: &MeasureParams, k: u32) -> Result<f64> {
    Measure::new(*p)?.moment_residual(k)
}

pub fn identity_resolution_check(p: &MeasureParams) -> Result<IdentityReport> {
    Measure::new(*p)?.identity_resolution_check()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::ratio;

    fn mp(n: u32, r: u32) -> MeasureParams {
        MeasureParams::new(n, r).unwrap()
    }

    #[test]
    fn closed_form_values() {
        assert!((density(&mp(2, 1), 0.0).unwrap() - 6.0 / PI).abs() < 1e-15);
        assert!((density(&mp(1, 1), 1.0).unwrap() - 1.0 / PI).abs() < 1e-15);
        assert!((Measure::new(mp(2, 1)).unwrap().weight(1.0).unwrap() - 0.375).abs() < 1e-15);
    }

    #[test]
    fn targets() {
        assert_eq!(moment_target(2, 1, 1), ratio(1, 2));
        assert_eq!(moment_target(1, 2, 0), int(1));
        assert_eq!(moment_target(1, 2, 1), int(1));
        assert_eq!(moment_target(2, 2, 2), int(36));
    }

    #[test]
    fn r1_moments() {
        assert!(moment_residual(&mp(2, 1), 1).unwrap() <= 1e-8);
        for n in [1, 3] {
            assert!(identity_resolution_check(&mp(n, 1)).unwrap().pass);
        }
    }

    #[test]
    fn mellin_moments() {
        assert!(moment_residual(&mp(1, 2), 0).unwrap() <= MOMENT_TOLERANCE);
        assert!(moment_residual(&mp(1, 2), 1).unwrap() <= MOMENT_TOLERANCE);
        let report = identity_resolution_check(&mp(2, 3)).unwrap();
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn fixed_contour_for_r1_matches_closed_form() {
        let spec = MellinSpec::new(2, 1);
        let fixed = Measure::new(mp(2, 1).with_contour(spec).unwrap()).unwrap();
        for t in [0.1, 1.0, 10.0] {
            let a = fixed.density(t).unwrap();
            let b = density(&mp(2, 1), t).unwrap();
            assert!(((a - b) / b).abs() < 1e-10);
        }
    }

    #[test]
    fn decays_and_stays_positive() {
        let m = Measure::new(mp(2, 2)).unwrap();
        let d1 = m.density(1.0).unwrap();
        assert!(d1 > 0.0);
        assert!(m.density(1e3).unwrap() < d1);
    }

    #[test]
    fn rejects_out_of_range_index() {
        assert!(moment_residual(&mp(2, 1), 3).is_err());
        assert!(Measure::new(mp(2, 2)).unwrap().weight(-1.0).is_err());
    }
}
