//! Moments evaluated by brute force in the two-mode Fock space.

use num_complex::Complex64;

use super::{PhotonStats, QuadratureReport, Su2Moments, Su2SqueezeReport};
use crate::error::Result;
use crate::fock::{FockSpace, MomentumConvention, OperatorExpr, TwoModeState};
use crate::states::{build_state, CoherencePoint, ModelParams};

/// `|z⟩_r` embedded in the two-mode space.
pub fn embed(params: &ModelParams, z: &CoherencePoint) -> TwoModeState {
    let state = build_state(params, z);
    TwoModeState::from_level(state.n, &state.coefficients)
}

fn space(params: &ModelParams) -> FockSpace {
    FockSpace::new(params.n + 4)
}

pub fn su2_moments(params: &ModelParams, z: &CoherencePoint) -> Result<Su2Moments> {
    let psi = embed(params, z);
    let fs = space(params);
    let kp = OperatorExpr::k_plus();
    Ok(Su2Moments {
        k_plus: fs.expectation(&kp, &psi)?,
        k_plus_sq: fs.expectation(&(kp.clone() * kp.clone()), &psi)?,
        k_plus_k_minus: fs.expectation(&(kp * OperatorExpr::k_minus()), &psi)?.re,
        k3: fs.expectation(&OperatorExpr::k3(), &psi)?.re,
    })
}

/// First moments that vanish on every state of `H_n`: `⟨a⟩, ⟨b⟩, ⟨a²⟩, ⟨b²⟩, ⟨ab⟩`.
pub fn vanishing_moments(params: &ModelParams, z: &CoherencePoint) -> Result<[Complex64; 5]> {
    let psi = embed(params, z);
    let fs = space(params);
    let (a, b) = (OperatorExpr::a(), OperatorExpr::b());
    Ok([
        fs.expectation(&a, &psi)?,
        fs.expectation(&b, &psi)?,
        fs.expectation(&(a.clone() * a.clone()), &psi)?,
        fs.expectation(&(b.clone() * b.clone()), &psi)?,
        fs.expectation(&(a * b), &psi)?,
    ])
}

pub fn quadrature_covariances(
    params: &ModelParams,
    z: &CoherencePoint,
    convention: MomentumConvention,
) -> Result<QuadratureReport> {
    let psi = embed(params, z);
    let fs = space(params);
    let x = OperatorExpr::position(params.hbar, params.mass, params.omega);
    let p = OperatorExpr::momentum(params.hbar, params.mass, params.omega, convention);
    let sigma_xx = fs.covariance(&x, &x, &psi)?;
    let sigma_pp = fs.covariance(&p, &p, &psi)?;
    let sigma_xp = fs.covariance(&x, &p, &psi)?;
    Ok(QuadratureReport::from_covariances(params.hbar, sigma_xx, sigma_pp, sigma_xp))
}

pub fn su2_squeeze(params: &ModelParams, z: &CoherencePoint) -> Result<Su2SqueezeReport> {
    let psi = embed(params, z);
    let fs = space(params);
    let x1 = OperatorExpr::su2_x1();
    let x2 = OperatorExpr::su2_x2();
    let var_x1 = fs.covariance(&x1, &x1, &psi)?;
    let var_x2 = fs.covariance(&x2, &x2, &psi)?;
    let k3 = fs.expectation(&OperatorExpr::k3(), &psi)?.re;
    Ok(Su2SqueezeReport::from_variances(var_x1, var_x2, k3))
}

pub fn number_moments(params: &ModelParams, z: &CoherencePoint) -> Result<PhotonStats> {
    let psi = embed(params, z);
    let fs = space(params);
    let (na, nb) = (OperatorExpr::n_a(), OperatorExpr::n_b());
    Ok(PhotonStats {
        n: params.n,
        mean_na: fs.expectation(&na, &psi)?.re,
        mean_nb: fs.expectation(&nb, &psi)?.re,
        mean_na_sq: fs.expectation(&(na.clone() * na.clone()), &psi)?.re,
        mean_nb_sq: fs.expectation(&(nb.clone() * nb.clone()), &psi)?.re,
        mean_na_nb: fs.expectation(&(na * nb), &psi)?.re,
    })
}
