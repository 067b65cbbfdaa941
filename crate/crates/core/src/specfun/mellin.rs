//! Inverse Mellin transform of the resolution-of-identity weight.
//!
//! The radial weight `F(t)` of the measure is fixed by its Mellin moments
//!
//! ```text
//! μ(s) = ∫₀^∞ t^{s-1} F(t) dt
//!      = 2 Γ(s) Γ(n+2-s) Π_{l=1}^{r-1} [Γ(n+s+l-2) / Γ(n+l-1)]² / n!
//! ```
//!
//! and recovered on the vertical line `Re s = c`, `0 < c < n + 2`:
//!
//! ```text
//! F(t) = (1/2π) ∫ μ(c + iτ) t^{-(c + iτ)} dτ
//! ```
//!
//! The integrand decays like `exp(-rπ|τ|)` and is analytic in the strip
//! between the poles at `Re s = 0` and `Re s = n + 2`, so the trapezoidal rule
//! converges geometrically in `1/h`.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

use super::gamma::log_gamma_complex;
use crate::error::{Error, Result};

/// Aliasing budget `2πd/h` for the trapezoidal step, `d` being the distance
/// from the contour to the nearest pole line.
const ALIAS_EXPONENT: f64 = 70.0;
const MAX_STEP: f64 = 0.25;
/// The closest line sits at `2^{-5}` of the half-strip from a pole line;
/// beyond that the node count grows faster than the accuracy it buys.
const LADDER_RUNGS: usize = 21;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MellinSpec {
    pub n: u32,
    pub r: u32,
    /// Real part `c` of the vertical contour.
    pub abscissa: f64,
    /// Truncation height `T`: the contour runs over `τ ∈ [-T, T]`.
    pub height: f64,
    /// Trapezoidal step `h`.
    pub step: f64,
}

impl MellinSpec {
    /// Defaults: `c = (n+2)/2`, `T = max(40/r, 30)` and a step sized from the
    /// distance to the nearest pole line.
    pub fn new(n: u32, r: u32) -> Self {
        let abscissa = (n as f64 + 2.0) / 2.0;
        Self {
            n,
            r,
            abscissa,
            height: default_height(r),
            step: default_step(n, abscissa),
        }
    }

    pub fn with_abscissa(mut self, c: f64) -> Self {
        self.abscissa = c;
        self
    }

    pub fn with_height(mut self, height: f64) -> Self {
        self.height = height;
        self
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let strip = self.n as f64 + 2.0;
        if self.n < 1 || self.r < 1 {
            return Err(Error::InvalidParameter(format!(
                "n and r must be >= 1 (n = {}, r = {})",
                self.n, self.r
            )));
        }
        if !(self.abscissa > 0.0 && self.abscissa < strip) {
            return Err(Error::InvalidParameter(format!(
                "contour abscissa {} outside the strip (0, {strip})",
                self.abscissa
            )));
        }
        if !(self.height > 0.0 && self.step > 0.0) {
            return Err(Error::InvalidParameter("contour height and step must be positive".into()));
        }
        Ok(())
    }
}

fn default_height(r: u32) -> f64 {
    (40.0 / r as f64).max(30.0)
}

fn default_step(n: u32, abscissa: f64) -> f64 {
    let d = abscissa.min(n as f64 + 2.0 - abscissa);
    (2.0 * PI * d / ALIAS_EXPONENT).min(MAX_STEP)
}

/// `log μ(s)` for the weight of level `n` and order `r`.
pub fn log_mellin_weight(n: u32, r: u32, s: Complex64) -> Result<Complex64> {
    let nf = n as f64;
    let mut acc = Complex64::new(2f64.ln(), 0.0);
    acc += log_gamma_complex(s)?;
    acc += log_gamma_complex(nf + 2.0 - s)?;
    for l in 1..r {
        let l = l as f64;
        let num = log_gamma_complex(s + (nf + l - 2.0))?;
        let den = log_gamma_complex(Complex64::new(nf + l - 1.0, 0.0))?;
        acc += 2.0 * (num - den);
    }
    acc -= log_gamma_complex(Complex64::new(nf + 1.0, 0.0))?;
    Ok(acc)
}

/// A vertical contour with `log μ` precomputed at the fine nodes.
#[derive(Debug, Clone)]
struct Contour {
    abscissa: f64,
    /// Fine step; the coarse rule uses every other node.
    step: f64,
    r: u32,
    /// `(τ, log μ(c + iτ))` for `τ = -T, …, T` in steps of `step`.
    nodes: Vec<(f64, Complex64)>,
}

/// One evaluation of the contour integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityEstimate {
    pub value: f64,
    /// Fine/coarse trapezoid difference plus the truncated tail.
    pub error: f64,
    /// Imaginary part of the contour sum; zero up to rounding.
    pub imag_residual: f64,
    /// Rounding scale of the sum, `ε Σ |integrand| h / 2π`.
    pub roundoff: f64,
}

impl Contour {
    fn build(n: u32, r: u32, abscissa: f64, height: f64, step: f64) -> Result<Self> {
        // fine step h/2 so that the coarse rule has step h
        let fine = step / 2.0;
        let half = (height / fine).ceil() as i64;
        let mut nodes = Vec::with_capacity(2 * half as usize + 1);
        for j in -half..=half {
            let tau = j as f64 * fine;
            let lm = log_mellin_weight(n, r, Complex64::new(abscissa, tau))?;
            nodes.push((tau, lm));
        }
        Ok(Self {
            abscissa,
            step: fine,
            r,
            nodes,
        })
    }

    fn evaluate(&self, t: f64) -> DensityEstimate {
        let log_t = t.ln();
        let mut fine = Complex64::new(0.0, 0.0);
        let mut coarse = Complex64::new(0.0, 0.0);
        let mut magnitude = 0.0;
        let last = self.nodes.len() - 1;
        for (j, &(tau, lm)) in self.nodes.iter().enumerate() {
            let s = Complex64::new(self.abscissa, tau);
            let g = (lm - s * log_t).exp();
            // end weights are irrelevant at the truncation height
            fine += g;
            if j % 2 == 0 {
                coarse += g;
            }
            magnitude += g.norm();
        }
        let scale = 1.0 / (2.0 * PI);
        let fine_value = fine * self.step * scale;
        let coarse_value = coarse * (2.0 * self.step) * scale;
        let edge = {
            let (tau, lm) = self.nodes[last];
            (lm - Complex64::new(self.abscissa, tau) * log_t).exp().norm()
        };
        let tail = 2.0 * edge / (self.r as f64 * PI) * scale;
        DensityEstimate {
            value: fine_value.re,
            error: (fine_value - coarse_value).norm() + tail,
            imag_residual: fine_value.im,
            roundoff: 64.0 * f64::EPSILON * magnitude * self.step * scale,
        }
    }
}

fn check(estimate: DensityEstimate, tolerance: f64) -> Result<DensityEstimate> {
    let allowed = (tolerance * estimate.value.abs()).max(estimate.roundoff);
    if estimate.error.is_nan() || estimate.error > allowed {
        return Err(Error::ContourNotConverged {
            estimate: estimate.error,
            tolerance: allowed,
        });
    }
    if estimate.value < -allowed {
        return Err(Error::NegativeDensity { value: estimate.value });
    }
    Ok(estimate)
}

/// Contour estimate of `F(t)` on the line fixed by `spec`, with the
/// fine/coarse and tail diagnostics.
pub fn inverse_mellin_estimate(spec: &MellinSpec, t: f64) -> Result<DensityEstimate> {
    spec.validate()?;
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::InvalidParameter(format!("t must be positive, got {t}")));
    }
    let contour = Contour::build(spec.n, spec.r, spec.abscissa, spec.height, spec.step)?;
    check(contour.evaluate(t), DEFAULT_TOLERANCE)
}

/// `F(t) = π K_r(t) / M_r(t)` by quadrature along the contour of `spec`.
pub fn inverse_mellin_density(spec: &MellinSpec, t: f64) -> Result<f64> {
    inverse_mellin_estimate(spec, t).map(|e| e.value)
}

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Abscissa minimising `t^{-c} μ(c)` over the fundamental strip.
///
/// `log μ` is convex on the real segment, so the saddle point of the contour
/// integrand is found by golden-section search. Placing the line there keeps
/// the integrand magnitude close to `F(t)` and avoids cancellation.
pub fn saddle_abscissa(n: u32, r: u32, t: f64) -> Result<f64> {
    let strip = n as f64 + 2.0;
    let log_t = t.ln();
    let cost = |c: f64| -> Result<f64> {
        Ok(log_mellin_weight(n, r, Complex64::new(c, 0.0))?.re - c * log_t)
    };
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (strip * 1e-9, strip * (1.0 - 1e-9));
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (cost(x1)?, cost(x2)?);
    for _ in 0..200 {
        if hi - lo < 1e-10 * strip {
            break;
        }
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = cost(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = cost(x2)?;
        }
    }
    Ok(0.5 * (lo + hi))
}

impl MellinSpec {
    /// Contour through the saddle point of the integrand at `t`.
    pub fn for_argument(n: u32, r: u32, t: f64) -> Result<Self> {
        let c = saddle_abscissa(n, r, t)?;
        let spec = Self::new(n, r);
        Ok(spec.with_abscissa(c).with_step(default_step(n, c)))
    }
}

/// Rungs per halving of the distance to the nearest pole line.
const RUNGS_PER_OCTAVE: f64 = 4.0;

/// Inverse Mellin density with the contour chosen per argument.
///
/// The line is placed near the saddle point of `t^{-c} μ(c)`, snapped to a
/// grid that is geometric in the distance to the nearest pole line, and each
/// grid line's nodes are built once on first use.
#[derive(Debug)]
pub struct MellinDensity {
    n: u32,
    r: u32,
    height: f64,
    tolerance: f64,
    left: Vec<OnceLock<Result<Contour>>>,
    right: Vec<OnceLock<Result<Contour>>>,
}

impl MellinDensity {
    pub fn new(n: u32, r: u32) -> Result<Self> {
        MellinSpec::new(n, r).validate()?;
        Ok(Self {
            n,
            r,
            height: default_height(r),
            tolerance: DEFAULT_TOLERANCE,
            left: (0..LADDER_RUNGS).map(|_| OnceLock::new()).collect(),
            right: (0..LADDER_RUNGS).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    fn contour<'a>(&'a self, slot: &'a OnceLock<Result<Contour>>, abscissa: f64) -> Result<&'a Contour> {
        slot.get_or_init(|| {
            Contour::build(
                self.n,
                self.r,
                abscissa,
                self.height,
                default_step(self.n, abscissa),
            )
        })
        .as_ref()
        .map_err(Clone::clone)
    }

    /// Contour estimate of `F(t)`.
    pub fn estimate(&self, t: f64) -> Result<DensityEstimate> {
        if !t.is_finite() || t <= 0.0 {
            return Err(Error::InvalidParameter(format!("t must be positive, got {t}")));
        }
        let strip = self.n as f64 + 2.0;
        let half = strip / 2.0;
        let saddle = saddle_abscissa(self.n, self.r, t)?;
        let distance = saddle.min(strip - saddle);
        let rung = ((RUNGS_PER_OCTAVE * (half / distance).log2()).round().max(0.0) as usize)
            .min(LADDER_RUNGS - 1);
        let snapped = half * 2f64.powf(-(rung as f64) / RUNGS_PER_OCTAVE);
        let contour = if saddle <= half {
            self.contour(&self.left[rung], snapped)?
        } else {
            self.contour(&self.right[rung], strip - snapped)?
        };
        check(contour.evaluate(t), self.tolerance)
    }

    /// `F(t)`.
    pub fn value(&self, t: f64) -> Result<f64> {
        self.estimate(t).map(|e| e.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn closed_r1(n: u32, t: f64) -> f64 {
        2.0 * (n as f64 + 1.0) * (1.0 + t).powi(-(n as i32 + 2))
    }

    #[test]
    fn r1_matches_beta_kernel() {
        for n in 1..=3 {
            let spec = MellinSpec::new(n, 1);
            for t in [0.1, 1.0, 10.0] {
                let v = inverse_mellin_density(&spec, t).unwrap();
                let e = closed_r1(n, t);
                assert!(((v - e) / e).abs() < 1e-10, "n={n} t={t} v={v} e={e}");
            }
        }
    }

    #[test]
    fn r1_value_at_one() {
        let v = inverse_mellin_density(&MellinSpec::new(2, 1), 1.0).unwrap();
        assert!((v - 0.375).abs() < 1e-12);
    }

    #[test]
    fn weight_is_conjugate_symmetric() {
        let s = Complex64::new(1.7, 3.2);
        let a = log_mellin_weight(2, 3, s).unwrap().exp();
        let b = log_mellin_weight(2, 3, s.conj()).unwrap().exp();
        assert!((a - b.conj()).norm() <= 1e-13 * a.norm());
    }

    #[test]
    fn weight_reproduces_moments() {
        // μ(k+1) = 2 [Π Γ(n+k+l-1)/Γ(n+l-1)]² (n-k)! k! / n!  for n = 2, r = 2, k = 1
        // = 2 · (Γ(3)/Γ(2))² · 1 · 1 / 2 = 4
        let v = log_mellin_weight(2, 2, Complex64::new(2.0, 0.0)).unwrap().exp();
        assert!((v.re - 4.0).abs() < 1e-13 && v.im.abs() < 1e-13);
    }

    #[test]
    fn contour_convergence() {
        for (n, r) in [(1, 2), (2, 3), (3, 4)] {
            for t in [0.05, 1.0, 20.0] {
                let base = MellinSpec::for_argument(n, r, t).unwrap();
                let refined = base.with_step(base.step / 2.0).with_height(base.height * 2.0);
                let a = inverse_mellin_density(&base, t).unwrap();
                let b = inverse_mellin_density(&refined, t).unwrap();
                assert!((a - b).abs() < 1e-10 * a.abs().max(1.0), "n={n} r={r} t={t}");
            }
        }
    }

    #[test]
    fn adaptive_contour_agrees_with_default_near_one() {
        let d = MellinDensity::new(2, 3).unwrap();
        for t in [0.3, 1.0, 3.0] {
            let a = d.value(t).unwrap();
            let b = inverse_mellin_density(&MellinSpec::new(2, 3), t).unwrap();
            assert!((a - b).abs() < 1e-11 * b.abs());
        }
    }

    #[test]
    fn adaptive_contour_extreme_arguments() {
        let d = MellinDensity::new(3, 1).unwrap();
        for t in [1e-12, 1e-6, 1e4, 1e9] {
            let v = d.value(t).unwrap();
            let e = closed_r1(3, t);
            assert!(((v - e) / e).abs() < 1e-8, "t={t} v={v:e} e={e:e}");
        }
    }

    #[test]
    fn rejects_contour_outside_strip() {
        let spec = MellinSpec::new(2, 1).with_abscissa(4.5);
        assert!(matches!(inverse_mellin_density(&spec, 1.0), Err(Error::InvalidParameter(_))));
        assert!(inverse_mellin_density(&MellinSpec::new(2, 1), -1.0).is_err());
    }

    #[test]
    fn tiny_step_budget_reports_non_convergence() {
        let spec = MellinSpec::new(2, 2).with_height(0.5).with_step(0.4);
        assert!(matches!(
            inverse_mellin_density(&spec, 1.0),
            Err(Error::ContourNotConverged { .. })
        ));
    }
}
