//! Photon statistics and squeezing of `|z⟩_r`.
//!
//! Each observable has two independent routes: the hypergeometric closed
//! forms in [`closed`] and brute-force expectation values in [`oracle`].
//! [`dual_path`] lines the two up; [`reconcile`] compares literal readings of
//! the printed formulas with the oracle.

pub mod closed;
pub mod oracle;
pub mod reconcile;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fock::MomentumConvention;
use crate::specfun::TerminationRule;
use crate::states::{norm_weight, overlap, overlap_direct, CoherencePoint, ModelParams};

pub use closed::{photon_stats_exact, radial_moments, radial_moments_exact, ExactPhotonStats, MomentForms, RadialMoments};
pub use reconcile::{printed_forms, Reconciliation};

/// `|⟨K_3⟩|` below which the su(2) squeezing factors are undefined.
pub const K3_ZERO: f64 = 1e-14;

/// Width of the floating path for closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    /// 64-bit floating-point series.
    #[default]
    Double,
    /// Exact rational series from the binary value of `t`, rounded once.
    Extended,
}

impl FromStr for Precision {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "double" => Ok(Precision::Double),
            "extended" => Ok(Precision::Extended),
            other => Err(Error::InvalidParameter(format!("precision must be double or extended, got {other:?}"))),
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Precision::Double => "double",
            Precision::Extended => "extended",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Su2Moments {
    pub k_plus: Complex64,
    pub k_plus_sq: Complex64,
    pub k_plus_k_minus: f64,
    pub k3: f64,
}

impl Su2Moments {
    pub fn k_minus(&self) -> Complex64 {
        self.k_plus.conj()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureReport {
    pub sigma_xx: f64,
    pub sigma_pp: f64,
    pub sigma_xp: f64,
    pub s_x: f64,
    pub s_p: f64,
}

impl QuadratureReport {
    /// `S = 2σ / √(ħ² + 4σ_xp²) - 1` for both quadratures.
    pub fn from_covariances(hbar: f64, sigma_xx: f64, sigma_pp: f64, sigma_xp: f64) -> Self {
        let scale = (hbar * hbar + 4.0 * sigma_xp * sigma_xp).sqrt();
        Self {
            sigma_xx,
            sigma_pp,
            sigma_xp,
            s_x: 2.0 * sigma_xx / scale - 1.0,
            s_p: 2.0 * sigma_pp / scale - 1.0,
        }
    }

    /// `σ_xx σ_pp - σ_xp²`.
    pub fn robertson_schrodinger(&self) -> f64 {
        self.sigma_xx * self.sigma_pp - self.sigma_xp * self.sigma_xp
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Su2SqueezeReport {
    pub var_x1: f64,
    pub var_x2: f64,
    pub k3: f64,
    /// `None` when `⟨K_3⟩` vanishes.
    pub s1: Option<f64>,
    pub s2: Option<f64>,
}

impl Su2SqueezeReport {
    pub fn from_variances(var_x1: f64, var_x2: f64, k3: f64) -> Self {
        let half = k3.abs() / 2.0;
        let factor = |v: f64| (k3.abs() > K3_ZERO).then(|| (v - half) / half);
        Self {
            var_x1,
            var_x2,
            k3,
            s1: factor(var_x1),
            s2: factor(var_x2),
        }
    }

    /// `(S_1, S_2)`, or [`Error::UndefinedSqueezeFactor`].
    pub fn factors(&self) -> Result<(f64, f64)> {
        match (self.s1, self.s2) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(Error::UndefinedSqueezeFactor),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotonStats {
    pub n: u32,
    pub mean_na: f64,
    pub mean_nb: f64,
    pub mean_na_sq: f64,
    pub mean_nb_sq: f64,
    pub mean_na_nb: f64,
}

impl PhotonStats {
    fn mandel(mean: f64, mean_sq: f64) -> Result<f64> {
        if mean <= 0.0 {
            return Err(Error::VacuumMode);
        }
        Ok((mean_sq - mean * mean) / mean - 1.0)
    }

    pub fn q_a(&self) -> Result<f64> {
        Self::mandel(self.mean_na, self.mean_na_sq)
    }

    pub fn q_b(&self) -> Result<f64> {
        Self::mandel(self.mean_nb, self.mean_nb_sq)
    }

    /// `⟨N_a N_b⟩ / (⟨N_a⟩⟨N_b⟩)`.
    pub fn g2(&self) -> Result<f64> {
        if self.mean_na <= 0.0 || self.mean_nb <= 0.0 {
            return Err(Error::DegenerateDenominator);
        }
        Ok(self.mean_na_nb / (self.mean_na * self.mean_nb))
    }
}

/// Closed-form su(2) moments in double precision.
pub fn su2_moments(params: &ModelParams, z: &CoherencePoint) -> Result<Su2Moments> {
    su2_moments_with(params, z, Precision::Double)
}

pub fn su2_moments_with(params: &ModelParams, z: &CoherencePoint, precision: Precision) -> Result<Su2Moments> {
    let radial = radial_moments(params, z.t(), precision, TerminationRule::Regularized)?;
    Ok(moments_from_radial(&radial, z))
}

fn moments_from_radial(radial: &RadialMoments<f64>, z: &CoherencePoint) -> Su2Moments {
    let zbar = z.z().conj();
    Su2Moments {
        k_plus: zbar * radial.k_plus,
        k_plus_sq: zbar * zbar * radial.k_plus_sq,
        k_plus_k_minus: radial.k_plus_k_minus,
        k3: radial.k3,
    }
}

/// Quadrature covariances from the closed-form `⟨K_+⟩`.
pub fn quadrature_closed(
    params: &ModelParams,
    z: &CoherencePoint,
    convention: MomentumConvention,
    precision: Precision,
) -> Result<QuadratureReport> {
    let w = su2_moments_with(params, z, precision)?.k_plus;
    let n1 = params.n as f64 + 1.0;
    let ModelParams { hbar, mass, omega, .. } = *params;
    let sigma_xx = hbar / (mass * omega) * (n1 - 2.0 * w.re);
    let (sigma_pp, sigma_xp) = match convention {
        MomentumConvention::Corrected => (mass * hbar * omega / 4.0 * (n1 - 2.0 * w.re), 0.0),
        MomentumConvention::Printed => (mass * hbar * omega / 4.0 * (n1 + 2.0 * w.re), -hbar * w.im),
    };
    Ok(QuadratureReport::from_covariances(hbar, sigma_xx, sigma_pp, sigma_xp))
}

/// Quadrature covariances of the corrected `x, p_x` pair in the Fock oracle.
pub fn quadrature_covariances(params: &ModelParams, z: &CoherencePoint) -> Result<QuadratureReport> {
    oracle::quadrature_covariances(params, z, MomentumConvention::Corrected)
}

/// `Var X_1`, `Var X_2` from su(2) moments.
pub fn squeeze_from_moments(m: &Su2Moments) -> Su2SqueezeReport {
    let common = 2.0 * m.k_plus_k_minus - 2.0 * m.k3;
    let var_x1 = (common + 2.0 * m.k_plus_sq.re - 4.0 * m.k_plus.re * m.k_plus.re) / 4.0;
    let var_x2 = (common - 2.0 * m.k_plus_sq.re - 4.0 * m.k_plus.im * m.k_plus.im) / 4.0;
    Su2SqueezeReport::from_variances(var_x1, var_x2, m.k3)
}

/// Closed-form su(2) squeezing.
pub fn su2_squeeze(params: &ModelParams, z: &CoherencePoint) -> Result<Su2SqueezeReport> {
    su2_squeeze_with(params, z, Precision::Double)
}

pub fn su2_squeeze_with(params: &ModelParams, z: &CoherencePoint, precision: Precision) -> Result<Su2SqueezeReport> {
    Ok(squeeze_from_moments(&su2_moments_with(params, z, precision)?))
}

/// Closed-form number moments.
pub fn number_moments(params: &ModelParams, z: &CoherencePoint) -> Result<PhotonStats> {
    number_moments_with(params, z, Precision::Double)
}

pub fn number_moments_with(params: &ModelParams, z: &CoherencePoint, precision: Precision) -> Result<PhotonStats> {
    let radial = radial_moments(params, z.t(), precision, TerminationRule::Regularized)?;
    Ok(stats_from_radial(params.n, &radial))
}

fn stats_from_radial(n: u32, radial: &RadialMoments<f64>) -> PhotonStats {
    let nf = n as f64;
    let nb = radial.mean_nb;
    let nb2 = radial.mean_nb_sq;
    PhotonStats {
        n,
        mean_na: nf - nb,
        mean_nb: nb,
        mean_na_sq: nb2 - 2.0 * nf * nb + nf * nf,
        mean_nb_sq: nb2,
        mean_na_nb: nf * nb - nb2,
    }
}

/// `(Q_a, Q_b)`.
pub fn mandel_q(params: &ModelParams, z: &CoherencePoint) -> Result<(f64, f64)> {
    let s = number_moments(params, z)?;
    Ok((s.q_a()?, s.q_b()?))
}

/// Normalized cross-correlation `G²`.
pub fn cross_correlation(params: &ModelParams, z: &CoherencePoint) -> Result<f64> {
    number_moments(params, z)?.g2()
}

/// One observable along both routes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub quantity: &'static str,
    pub closed: f64,
    pub oracle: f64,
}

impl Comparison {
    /// `|closed - oracle| / max(|oracle|, 1)`.
    pub fn residual(&self) -> f64 {
        dual_residual(self.closed, self.oracle)
    }
}

pub fn dual_residual(closed: f64, oracle: f64) -> f64 {
    (closed - oracle).abs() / oracle.abs().max(1.0)
}

/// Reference point for the overlap comparison.
fn overlap_partner() -> CoherencePoint {
    CoherencePoint { modulus: 0.8, phase: 1.0 }
}

/// Every closed form next to its oracle value at one point.
pub fn dual_path(params: &ModelParams, z: &CoherencePoint, precision: Precision) -> Result<Vec<Comparison>> {
    let radial = radial_moments(params, z.t(), precision, TerminationRule::Regularized)?;
    let closed_m = moments_from_radial(&radial, z);
    let oracle_m = oracle::su2_moments(params, z)?;
    let closed_s = stats_from_radial(params.n, &radial);
    let oracle_s = oracle::number_moments(params, z)?;
    let closed_q = quadrature_closed(params, z, MomentumConvention::Corrected, precision)?;
    let oracle_q = oracle::quadrature_covariances(params, z, MomentumConvention::Corrected)?;
    let closed_sq = squeeze_from_moments(&closed_m);
    let oracle_sq = oracle::su2_squeeze(params, z)?;

    let t = z.t();
    let direct_norm: f64 = (0..=params.n)
        .map(|k| num_traits::ToPrimitive::to_f64(&norm_weight(params, k)).unwrap_or(f64::NAN) * t.powi(k as i32))
        .sum();
    let partner = overlap_partner();
    let ov_closed = overlap(params, &partner, z)?;
    let ov_direct = overlap_direct(params, &partner, z);

    let c = |quantity, closed, oracle| Comparison { quantity, closed, oracle };
    let mut out = vec![
        c("norm", radial.norm, direct_norm),
        c("overlap_re", ov_closed.re, ov_direct.re),
        c("overlap_im", ov_closed.im, ov_direct.im),
        c("k_plus_re", closed_m.k_plus.re, oracle_m.k_plus.re),
        c("k_plus_im", closed_m.k_plus.im, oracle_m.k_plus.im),
        c("k_plus_sq_re", closed_m.k_plus_sq.re, oracle_m.k_plus_sq.re),
        c("k_plus_sq_im", closed_m.k_plus_sq.im, oracle_m.k_plus_sq.im),
        c("k_plus_k_minus", closed_m.k_plus_k_minus, oracle_m.k_plus_k_minus),
        c("k3", closed_m.k3, oracle_m.k3),
        c("mean_na", closed_s.mean_na, oracle_s.mean_na),
        c("mean_nb", closed_s.mean_nb, oracle_s.mean_nb),
        c("mean_na_sq", closed_s.mean_na_sq, oracle_s.mean_na_sq),
        c("mean_nb_sq", closed_s.mean_nb_sq, oracle_s.mean_nb_sq),
        c("mean_na_nb", closed_s.mean_na_nb, oracle_s.mean_na_nb),
        c("sigma_xx", closed_q.sigma_xx, oracle_q.sigma_xx),
        c("sigma_pp", closed_q.sigma_pp, oracle_q.sigma_pp),
        c("sigma_xp", closed_q.sigma_xp, oracle_q.sigma_xp),
        c("var_x1", closed_sq.var_x1, oracle_sq.var_x1),
        c("var_x2", closed_sq.var_x2, oracle_sq.var_x2),
    ];
    if let (Ok(a), Ok(b)) = (closed_s.q_a(), oracle_s.q_a()) {
        out.push(c("q_a", a, b));
    }
    if let (Ok(a), Ok(b)) = (closed_s.q_b(), oracle_s.q_b()) {
        out.push(c("q_b", a, b));
    }
    if let (Ok(a), Ok(b)) = (closed_s.g2(), oracle_s.g2()) {
        out.push(c("g2", a, b));
    }
    Ok(out)
}
