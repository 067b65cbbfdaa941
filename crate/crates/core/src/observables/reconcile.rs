//! Literal readings of printed formulas checked against the oracle.

use num_traits::ToPrimitive;
use serde::Serialize;

use super::{dual_residual, oracle, radial_moments, Precision, Su2SqueezeReport};
use crate::error::Result;
use crate::fock::{FockSpace, MomentumConvention, OperatorExpr};
use crate::specfun::{factorial, TerminationRule};
use crate::states::{CoherencePoint, ModelParams};

/// Agreement threshold for a printed form.
pub const RECONCILE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reconciliation {
    pub quantity: &'static str,
    pub printed: f64,
    pub oracle: f64,
    pub residual: f64,
    pub agrees: bool,
    pub note: &'static str,
}

impl Reconciliation {
    fn new(quantity: &'static str, printed: f64, oracle: f64, note: &'static str) -> Self {
        let residual = dual_residual(printed, oracle);
        Self {
            quantity,
            printed,
            oracle,
            residual,
            agrees: residual <= RECONCILE_TOLERANCE,
            note,
        }
    }
}

/// Printed forms whose literal reading differs from the operative one.
pub fn printed_forms(params: &ModelParams, z: &CoherencePoint) -> Result<Vec<Reconciliation>> {
    let t = z.t();
    let literal = radial_moments(params, t, Precision::Double, TerminationRule::Literal)?;
    let regular = radial_moments(params, t, Precision::Double, TerminationRule::Regularized)?;
    let moments = oracle::su2_moments(params, z)?;
    let corrected = oracle::quadrature_covariances(params, z, MomentumConvention::Corrected)?;
    let printed_p = oracle::quadrature_covariances(params, z, MomentumConvention::Printed)?;
    let squeeze = oracle::su2_squeeze(params, z)?;

    let ModelParams { n, r, hbar, mass, omega } = *params;
    let gamma_ratio = (factorial(n) / factorial(n + r - 2)).to_f64().unwrap_or(f64::NAN);
    // 1 + n - 2|z| R cos φ with R the bare series ratio
    let coherence_printed = 1.0 + n as f64 - 2.0 * z.modulus * (regular.k_plus / gamma_ratio) * z.phase.cos();
    let coherence_oracle = mass * omega / hbar * corrected.sigma_xx;

    let c_r = regular.k_plus;
    let sigma_xp_quoted = -hbar * z.modulus * c_r * z.phase.sin();

    let fs = FockSpace::new(n + 4);
    let psi = oracle::embed(params, z);
    let x = OperatorExpr::position(hbar, mass, omega);
    let p = OperatorExpr::momentum(hbar, mass, omega, MomentumConvention::Printed);
    let commutator = fs.expectation(&OperatorExpr::commutator(&x, &p), &psi)?.im;

    let w = moments.k_plus;
    let var_x2_printed =
        (2.0 * moments.k_plus_k_minus - 2.0 * moments.k3 - 2.0 * moments.k_plus_sq.re + 4.0 * w.im * w.im) / 4.0;
    let printed_squeeze = Su2SqueezeReport::from_variances(squeeze.var_x1, var_x2_printed, moments.k3);

    Ok(vec![
        Reconciliation::new(
            "k3_literal_termination",
            literal.k3,
            moments.k3,
            "series truncated at the first vanishing numerator",
        ),
        Reconciliation::new(
            "quadrature_coherence_term",
            coherence_printed,
            coherence_oracle,
            "(M omega / hbar) sigma_xx with the coherence term lacking Gamma(n+1)/Gamma(n+r-1)",
        ),
        Reconciliation::new(
            "sigma_xp_quoted",
            sigma_xp_quoted,
            corrected.sigma_xp,
            "-hbar |z| c_r sin(phi) against the corrected momentum",
        ),
        Reconciliation::new(
            "sigma_pp_printed_momentum",
            printed_p.sigma_pp,
            corrected.sigma_pp,
            "momentum built as (b - b^dagger + a - a^dagger)",
        ),
        Reconciliation::new(
            "commutator_printed_momentum",
            commutator,
            hbar,
            "Im <[x, p_x]> with the printed momentum",
        ),
        Reconciliation::new(
            "var_x2_printed_sign",
            printed_squeeze.var_x2,
            squeeze.var_x2,
            "X_2 variance with -<K_- - K_+>^2",
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn find<'a>(records: &'a [Reconciliation], name: &str) -> &'a Reconciliation {
        records.iter().find(|r| r.quantity == name).unwrap()
    }

    #[test]
    fn literal_k3_fails_only_for_even_levels() {
        for n in 1..=6 {
            let p = ModelParams::new(n, 2).unwrap();
            let z = CoherencePoint::from_t(1.5, 0.0).unwrap();
            let rec = printed_forms(&p, &z).unwrap();
            assert_eq!(find(&rec, "k3_literal_termination").agrees, n % 2 == 1, "n={n}");
        }
    }

    #[test]
    fn printed_quadratures_disagree() {
        let p = ModelParams::new(2, 1).unwrap();
        let z = CoherencePoint::from_t(1.0, 0.5).unwrap();
        let rec = printed_forms(&p, &z).unwrap();
        assert!(!find(&rec, "quadrature_coherence_term").agrees);
        assert!(!find(&rec, "sigma_xp_quoted").agrees);
        assert!(!find(&rec, "sigma_pp_printed_momentum").agrees);
        assert!(!find(&rec, "var_x2_printed_sign").agrees);
        let c = find(&rec, "commutator_printed_momentum");
        assert!(c.printed.abs() < 1e-14 && !c.agrees);
    }

    #[test]
    fn two_level_coherence_term_agrees() {
        // Γ(2)/Γ(1) = 1, so the printed and derived forms coincide for n = 1, r = 1
        let p = ModelParams::new(1, 1).unwrap();
        let rec = printed_forms(&p, &CoherencePoint::from_t(0.6, 0.2).unwrap()).unwrap();
        assert!(find(&rec, "quadrature_coherence_term").agrees);
    }
}
