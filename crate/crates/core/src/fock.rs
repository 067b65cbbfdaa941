//! Brute-force two-mode Fock space.
//!
//! States are finite maps from occupation pairs `(n_a, n_b)` to amplitudes and
//! operators are formal sums of products of the raw ladder symbols
//! `a, a†, b, b†`. Nothing here knows about hypergeometric series; the module
//! is the independent reference every closed form is checked against.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Normalization tolerance for [`expectation`] and [`covariance`].
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Default truncation: total number of quanta a state may carry.
pub const DEFAULT_MAX_QUANTA: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Ladder {
    A,
    ADag,
    B,
    BDag,
}

impl Ladder {
    pub fn dagger(self) -> Self {
        match self {
            Ladder::A => Ladder::ADag,
            Ladder::ADag => Ladder::A,
            Ladder::B => Ladder::BDag,
            Ladder::BDag => Ladder::B,
        }
    }
}

/// Occupation-number pair `(n_a, n_b)`.
pub type Occupation = (u32, u32);

/// Finite-support two-mode state.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TwoModeState {
    amplitudes: BTreeMap<Occupation, Complex64>,
}

impl TwoModeState {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(n_a: u32, n_b: u32) -> Self {
        let mut s = Self::zero();
        s.amplitudes.insert((n_a, n_b), Complex64::new(1.0, 0.0));
        s
    }

    pub fn from_amplitudes<I>(amplitudes: I) -> Self
    where
        I: IntoIterator<Item = (Occupation, Complex64)>,
    {
        let mut s = Self::zero();
        for (occ, amp) in amplitudes {
            s.add_amplitude(occ, amp);
        }
        s
    }

    /// Embeds coefficients over `e_k = |n-k, -n+2k⟩`, i.e. `(n_a, n_b) = (n-k, k)`.
    pub fn from_level(n: u32, coefficients: &[Complex64]) -> Self {
        Self::from_amplitudes(
            coefficients
                .iter()
                .enumerate()
                .map(|(k, &c)| ((n - k as u32, k as u32), c)),
        )
    }

    pub fn amplitude(&self, n_a: u32, n_b: u32) -> Complex64 {
        self.amplitudes.get(&(n_a, n_b)).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Occupation, Complex64)> + '_ {
        self.amplitudes.iter().map(|(&k, &v)| (k, v))
    }

    pub fn support(&self) -> impl Iterator<Item = Occupation> + '_ {
        self.amplitudes.keys().copied()
    }

    fn add_amplitude(&mut self, occ: Occupation, amp: Complex64) {
        if amp == Complex64::default() {
            return;
        }
        let entry = self.amplitudes.entry(occ).or_default();
        *entry += amp;
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::from_amplitudes(self.iter().map(|(k, v)| (k, v * factor)))
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes
            .iter()
            .filter_map(|(k, v)| other.amplitudes.get(k).map(|w| v.conj() * w))
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|v| v.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOLERANCE
    }

    pub fn max_total_quanta(&self) -> u32 {
        self.support().map(|(a, b)| a + b).max().unwrap_or(0)
    }

    /// Largest entrywise difference to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let keys: BTreeSet<Occupation> = self.support().chain(other.support()).collect();
        keys.into_iter()
            .map(|(a, b)| (self.amplitude(a, b) - other.amplitude(a, b)).norm())
            .fold(0.0, f64::max)
    }
}

impl Add for &TwoModeState {
    type Output = TwoModeState;
    fn add(self, rhs: Self) -> TwoModeState {
        let mut out = self.clone();
        for (k, v) in rhs.iter() {
            out.add_amplitude(k, v);
        }
        out
    }
}

impl Sub for &TwoModeState {
    type Output = TwoModeState;
    fn sub(self, rhs: Self) -> TwoModeState {
        self + &rhs.scale(Complex64::new(-1.0, 0.0))
    }
}

/// Formal sum of weighted ladder products. A product `[L1, L2, …, Lm]` stands
/// for `L1 L2 ⋯ Lm`, so `Lm` acts first.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OperatorExpr {
    terms: Vec<(Complex64, Vec<Ladder>)>,
}

impl OperatorExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::scalar(Complex64::new(1.0, 0.0))
    }

    pub fn scalar(c: Complex64) -> Self {
        Self {
            terms: vec![(c, Vec::new())],
        }
    }

    pub fn ladder(l: Ladder) -> Self {
        Self::product(&[l])
    }

    pub fn product(ops: &[Ladder]) -> Self {
        Self {
            terms: vec![(Complex64::new(1.0, 0.0), ops.to_vec())],
        }
    }

    pub fn a() -> Self {
        Self::ladder(Ladder::A)
    }

    pub fn a_dag() -> Self {
        Self::ladder(Ladder::ADag)
    }

    pub fn b() -> Self {
        Self::ladder(Ladder::B)
    }

    pub fn b_dag() -> Self {
        Self::ladder(Ladder::BDag)
    }

    pub fn n_a() -> Self {
        Self::product(&[Ladder::ADag, Ladder::A])
    }

    pub fn n_b() -> Self {
        Self::product(&[Ladder::BDag, Ladder::B])
    }

    /// `K_+ = a b†`
    pub fn k_plus() -> Self {
        Self::product(&[Ladder::A, Ladder::BDag])
    }

    /// `K_- = a† b`
    pub fn k_minus() -> Self {
        Self::product(&[Ladder::ADag, Ladder::B])
    }

    /// `K_3 = (b†b - a†a) / 2`
    pub fn k3() -> Self {
        (Self::n_b() - Self::n_a()) * 0.5
    }

    /// `X_1 = (K_+ + K_-) / 2`
    pub fn su2_x1() -> Self {
        (Self::k_plus() + Self::k_minus()) * 0.5
    }

    /// `X_2 = (K_- - K_+) / 2i`
    pub fn su2_x2() -> Self {
        (Self::k_minus() - Self::k_plus()) * Complex64::new(0.0, -0.5)
    }

    /// `x = √(ħ/2Mω) (b + b† - a - a†)`
    pub fn position(hbar: f64, mass: f64, omega: f64) -> Self {
        (Self::b() + Self::b_dag() - Self::a() - Self::a_dag()) * (hbar / (2.0 * mass * omega)).sqrt()
    }

    /// Canonical momentum conjugate to [`OperatorExpr::position`].
    pub fn momentum(hbar: f64, mass: f64, omega: f64, convention: MomentumConvention) -> Self {
        let prefactor = Complex64::new(0.0, 0.5 * (mass * hbar * omega / 2.0).sqrt());
        let body = match convention {
            MomentumConvention::Corrected => Self::b_dag() - Self::b() + Self::a() - Self::a_dag(),
            MomentumConvention::Printed => Self::b() - Self::b_dag() + Self::a() - Self::a_dag(),
        };
        body * prefactor
    }

    pub fn terms(&self) -> &[(Complex64, Vec<Ladder>)] {
        &self.terms
    }

    /// Formal adjoint: products reversed, symbols daggered, weights conjugated.
    pub fn dagger(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(c, ops)| (c.conj(), ops.iter().rev().map(|l| l.dagger()).collect()))
                .collect(),
        }
    }

    /// `[A, B] = AB - BA`
    pub fn commutator(lhs: &Self, rhs: &Self) -> Self {
        lhs.clone() * rhs.clone() - rhs.clone() * lhs.clone()
    }

    pub fn max_product_len(&self) -> usize {
        self.terms.iter().map(|(_, ops)| ops.len()).max().unwrap_or(0)
    }
}

impl Add for OperatorExpr {
    type Output = OperatorExpr;
    fn add(mut self, rhs: Self) -> Self {
        self.terms.extend(rhs.terms);
        self
    }
}

impl Sub for OperatorExpr {
    type Output = OperatorExpr;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for OperatorExpr {
    type Output = OperatorExpr;
    fn neg(self) -> Self {
        self * -1.0
    }
}

impl Mul for OperatorExpr {
    type Output = OperatorExpr;
    fn mul(self, rhs: Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (c1, ops1) in &self.terms {
            for (c2, ops2) in &rhs.terms {
                let mut ops = ops1.clone();
                ops.extend_from_slice(ops2);
                terms.push((c1 * c2, ops));
            }
        }
        Self { terms }
    }
}

impl Mul<Complex64> for OperatorExpr {
    type Output = OperatorExpr;
    fn mul(mut self, rhs: Complex64) -> Self {
        for (c, _) in &mut self.terms {
            *c *= rhs;
        }
        self
    }
}

impl Mul<f64> for OperatorExpr {
    type Output = OperatorExpr;
    fn mul(self, rhs: f64) -> Self {
        self * Complex64::new(rhs, 0.0)
    }
}

/// Sign convention for the canonical momentum built from the ladder operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum MomentumConvention {
    /// `(i/2)√(Mħω/2)(b† - b + a - a†)`; satisfies `[x, p_x] = iħ`.
    #[default]
    Corrected,
    /// `(i/2)√(Mħω/2)(b - b† + a - a†)`; commutes with `x`.
    Printed,
}

/// Truncated two-mode space: at most `max_quanta` total quanta.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockSpace {
    pub max_quanta: u32,
}

impl Default for FockSpace {
    fn default() -> Self {
        Self {
            max_quanta: DEFAULT_MAX_QUANTA,
        }
    }
}

impl FockSpace {
    pub fn new(max_quanta: u32) -> Self {
        Self { max_quanta }
    }

    fn apply_ladder(&self, l: Ladder, state: &TwoModeState) -> Result<TwoModeState> {
        let mut out = TwoModeState::zero();
        for ((na, nb), amp) in state.iter() {
            let (occ, factor) = match l {
                Ladder::A if na == 0 => continue,
                Ladder::B if nb == 0 => continue,
                Ladder::A => ((na - 1, nb), (na as f64).sqrt()),
                Ladder::B => ((na, nb - 1), (nb as f64).sqrt()),
                Ladder::ADag => ((na + 1, nb), (na as f64 + 1.0).sqrt()),
                Ladder::BDag => ((na, nb + 1), (nb as f64 + 1.0).sqrt()),
            };
            if occ.0 + occ.1 > self.max_quanta {
                return Err(Error::TruncationOverflow {
                    max_quanta: self.max_quanta,
                });
            }
            out.add_amplitude(occ, amp * factor);
        }
        Ok(out)
    }

    /// Linear action of `expr` on `state`.
    pub fn apply(&self, expr: &OperatorExpr, state: &TwoModeState) -> Result<TwoModeState> {
        let mut out = TwoModeState::zero();
        for (c, ops) in expr.terms() {
            let mut v = state.clone();
            for &l in ops.iter().rev() {
                v = self.apply_ladder(l, &v)?;
                if v.amplitudes.is_empty() {
                    break;
                }
            }
            for (k, amp) in v.iter() {
                out.add_amplitude(k, amp * c);
            }
        }
        Ok(out)
    }

    /// `⟨bra| expr |ket⟩`.
    pub fn matrix_element(&self, expr: &OperatorExpr, bra: &TwoModeState, ket: &TwoModeState) -> Result<Complex64> {
        Ok(bra.inner(&self.apply(expr, ket)?))
    }

    /// `⟨ψ| expr |ψ⟩` for a normalized `ψ`.
    pub fn expectation(&self, expr: &OperatorExpr, state: &TwoModeState) -> Result<Complex64> {
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(norm));
        }
        self.matrix_element(expr, state, state)
    }

    /// Largest `|⟨i|A|j⟩ - conj⟨j|A|i⟩|` over basis states with at most
    /// `max_total` quanta.
    pub fn hermiticity_defect(&self, expr: &OperatorExpr, max_total: u32) -> Result<f64> {
        let basis: Vec<Occupation> = (0..=max_total)
            .flat_map(|total| (0..=total).map(move |nb| (total - nb, nb)))
            .collect();
        let images: Vec<TwoModeState> = basis
            .iter()
            .map(|&(a, b)| self.apply(expr, &TwoModeState::basis(a, b)))
            .collect::<Result<_>>()?;
        let mut worst: f64 = 0.0;
        for (i, &(ia, ib)) in basis.iter().enumerate() {
            for (j, &(ja, jb)) in basis.iter().enumerate().skip(i) {
                let aij = images[j].amplitude(ia, ib);
                let aji = images[i].amplitude(ja, jb);
                worst = worst.max((aij - aji.conj()).norm());
            }
        }
        Ok(worst)
    }

    /// Largest entrywise `|(lhs - rhs)|i⟩|` over basis states whose images
    /// stay inside the truncation.
    pub fn interior_defect(&self, lhs: &OperatorExpr, rhs: &OperatorExpr) -> Result<f64> {
        let reach = lhs.max_product_len().max(rhs.max_product_len()) as u32;
        let top = self.max_quanta.saturating_sub(reach);
        let mut worst: f64 = 0.0;
        for total in 0..=top {
            for nb in 0..=total {
                let s = TwoModeState::basis(total - nb, nb);
                worst = worst.max(self.apply(lhs, &s)?.max_abs_diff(&self.apply(rhs, &s)?));
            }
        }
        Ok(worst)
    }

    fn check_hermitian(&self, expr: &OperatorExpr, state: &TwoModeState) -> Result<()> {
        let reach = state.max_total_quanta() + expr.max_product_len() as u32;
        let bound = reach.min(self.max_quanta.saturating_sub(expr.max_product_len() as u32));
        let defect = self.hermiticity_defect(expr, bound)?;
        if defect > 1e-12 {
            return Err(Error::NotHermitian(defect));
        }
        Ok(())
    }

    /// Symmetrized covariance `½⟨AB + BA⟩ - ⟨A⟩⟨B⟩` of two Hermitian operators.
    pub fn covariance(&self, lhs: &OperatorExpr, rhs: &OperatorExpr, state: &TwoModeState) -> Result<f64> {
        self.check_hermitian(lhs, state)?;
        self.check_hermitian(rhs, state)?;
        let mean_l = self.expectation(lhs, state)?;
        let mean_r = self.expectation(rhs, state)?;
        let lr = self.apply(lhs, &self.apply(rhs, state)?)?;
        let rl = self.apply(rhs, &self.apply(lhs, state)?)?;
        let sym = 0.5 * (state.inner(&lr) + state.inner(&rl));
        Ok((sym - mean_l * mean_r).re)
    }
}

/// [`FockSpace::apply`] on the default truncation.
pub fn apply(expr: &OperatorExpr, state: &TwoModeState) -> Result<TwoModeState> {
    FockSpace::default().apply(expr, state)
}

/// [`FockSpace::expectation`] on the default truncation.
pub fn expectation(expr: &OperatorExpr, state: &TwoModeState) -> Result<Complex64> {
    FockSpace::default().expectation(expr, state)
}

/// [`FockSpace::covariance`] on the default truncation.
pub fn covariance(lhs: &OperatorExpr, rhs: &OperatorExpr, state: &TwoModeState) -> Result<f64> {
    FockSpace::default().covariance(lhs, rhs, state)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn annihilate_single_quantum() {
        let out = apply(&OperatorExpr::a(), &TwoModeState::basis(1, 0)).unwrap();
        assert_eq!(out, TwoModeState::basis(0, 0));
    }

    #[test]
    fn annihilate_vacuum_is_zero() {
        let out = apply(&OperatorExpr::b(), &TwoModeState::basis(3, 0)).unwrap();
        assert_eq!(out, TwoModeState::zero());
    }

    #[test]
    fn k_plus_factors() {
        let out = apply(&OperatorExpr::k_plus(), &TwoModeState::basis(2, 0)).unwrap();
        let expected = TwoModeState::basis(1, 1).scale(c(2f64.sqrt()));
        assert!(out.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn su2_commutators_on_interior() {
        let fs = FockSpace::new(8);
        let (kp, km, k3) = (OperatorExpr::k_plus(), OperatorExpr::k_minus(), OperatorExpr::k3());
        let d = fs.interior_defect(&OperatorExpr::commutator(&kp, &km), &(k3.clone() * 2.0)).unwrap();
        assert!(d < 1e-12);
        let d = fs.interior_defect(&OperatorExpr::commutator(&k3, &kp), &kp).unwrap();
        assert!(d < 1e-12);
        let x = OperatorExpr::position(1.0, 1.0, 1.0);
        let p = OperatorExpr::momentum(1.0, 1.0, 1.0, MomentumConvention::Corrected);
        let i = OperatorExpr::scalar(Complex64::new(0.0, 1.0));
        assert!(fs.interior_defect(&OperatorExpr::commutator(&x, &p), &i).unwrap() < 1e-12);
    }

    #[test]
    fn canonical_commutator_is_identity() {
        let comm = OperatorExpr::commutator(&OperatorExpr::a(), &OperatorExpr::a_dag());
        for total in 0..=6 {
            for nb in 0..=total {
                let s = TwoModeState::basis(total - nb, nb);
                let out = apply(&comm, &s).unwrap();
                assert!(out.max_abs_diff(&s) < 1e-12);
            }
        }
    }

    #[test]
    fn truncation_overflow_only_when_nonzero() {
        let space = FockSpace::new(2);
        assert!(matches!(
            space.apply(&OperatorExpr::a_dag(), &TwoModeState::basis(1, 1)),
            Err(Error::TruncationOverflow { max_quanta: 2 })
        ));
        // a† a† a on vacuum: the annihilator acts first and kills the state
        let expr = OperatorExpr::product(&[Ladder::ADag, Ladder::ADag, Ladder::ADag, Ladder::A]);
        assert_eq!(space.apply(&expr, &TwoModeState::basis(0, 0)).unwrap(), TwoModeState::zero());
    }

    #[test]
    fn number_expectation() {
        let v = expectation(&OperatorExpr::n_a(), &TwoModeState::basis(4, 0)).unwrap();
        assert_eq!(v, c(4.0));
    }

    #[test]
    fn expectation_requires_normalization() {
        let s = TwoModeState::basis(1, 0).scale(c(2.0));
        assert!(matches!(expectation(&OperatorExpr::n_a(), &s), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn position_variance_on_number_state() {
        let x = OperatorExpr::position(1.0, 1.0, 1.0);
        for n in 0..5 {
            let v = covariance(&x, &x, &TwoModeState::basis(n, 0)).unwrap();
            assert!((v - (n as f64 + 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn covariance_rejects_non_hermitian() {
        let s = TwoModeState::basis(1, 1);
        assert!(matches!(
            covariance(&OperatorExpr::k_plus(), &OperatorExpr::n_a(), &s),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn dagger_of_k_plus_is_k_minus() {
        let space = FockSpace::default();
        let lhs = OperatorExpr::k_plus().dagger();
        let rhs = OperatorExpr::k_minus();
        for total in 0..=5 {
            for nb in 0..=total {
                let s = TwoModeState::basis(total - nb, nb);
                let d = space.apply(&lhs, &s).unwrap().max_abs_diff(&space.apply(&rhs, &s).unwrap());
                assert!(d < 1e-14);
            }
        }
    }
}
