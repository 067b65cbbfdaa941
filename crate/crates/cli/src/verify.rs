//! Verification suites: each check records its worst residual against a
//! pinned tolerance.

use std::f64::consts::PI;

use landau_coherent::fock::{FockSpace, MomentumConvention, OperatorExpr, TwoModeState};
use landau_coherent::measure::{Measure, MeasureParams, MOMENT_TOLERANCE};
use landau_coherent::observables::{
    dual_path, number_moments_with, oracle, photon_stats_exact, printed_forms, quadrature_closed, radial_moments_exact,
    su2_squeeze_with, Reconciliation,
};
use landau_coherent::specfun::{int, ratio, Rational, TerminationRule};
use landau_coherent::states::{
    binomial_state, build_state, build_state_deformed, normalization_constant, normalization_constant_exact,
    normalization_direct, overlap, overlap_cross_r, overlap_cross_r_series, overlap_direct, CoherencePoint,
    ModelParams,
};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::args::Suite;
use crate::error::Result;
use crate::figures::{EvalContext, PHASES};
use crate::table::{Cell, Table};

pub const ALGEBRA_TOLERANCE: f64 = 1e-12;
pub const STATES_TOLERANCE: f64 = 1e-12;
pub const DUAL_PATH_TOLERANCE: f64 = 1e-10;
pub const ANCHOR_TOLERANCE: f64 = 1e-12;
pub const ANALYTIC_TOLERANCE: f64 = 1e-12;
pub const UNCERTAINTY_SLACK: f64 = 1e-10;
pub const RS_EQUALITY_TOLERANCE: f64 = 1e-8;
pub const DENSITY_TOLERANCE: f64 = 1e-10;
pub const POSITIVITY_TOLERANCE: f64 = 1e-12;

pub const GRID_N: [u32; 6] = [1, 2, 3, 4, 5, 6];
pub const GRID_R: [u32; 4] = [1, 2, 3, 4];
pub const GRID_T: [f64; 6] = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0];

/// Every `(n, r, t, phi)` of the verification grid.
pub fn grid() -> Vec<(u32, u32, f64, f64)> {
    let mut g = Vec::new();
    for n in GRID_N {
        for r in GRID_R {
            for t in GRID_T {
                for phi in PHASES {
                    g.push((n, r, t, phi));
                }
            }
        }
    }
    g
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: String,
    pub runs: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Points at which the printed forms are compared.
pub const RECONCILE_POINTS: [(u32, u32, f64, f64); 3] = [(2, 2, 1.0, PI / 6.0), (2, 1, 1.0, 0.5), (1, 1, 0.6, 0.2)];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointReconciliation {
    pub n: u32,
    pub r: u32,
    pub t: f64,
    pub phi: f64,
    #[serde(flatten)]
    pub record: Reconciliation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: &'static str,
    pub pass: bool,
    pub checks: Vec<CheckResult>,
    /// Printed forms compared with the oracle; informational.
    pub reconciliation: Vec<PointReconciliation>,
}

impl VerifyReport {
    pub fn failed(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass).count()
    }

    pub fn max_residual(&self, name: &str) -> Option<f64> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.max_residual)
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["suite", "kind", "name", "runs", "value", "tolerance", "status"]);
        for c in &self.checks {
            t.push(vec![
                Cell::Text(c.suite.into()),
                Cell::Text("check".into()),
                Cell::Text(c.name.clone()),
                Cell::Int(c.runs as i64),
                Cell::float(c.max_residual),
                Cell::float(c.tolerance),
                Cell::Text(if c.pass { "pass" } else { "fail" }.into()),
            ]);
        }
        for p in &self.reconciliation {
            let r = &p.record;
            t.push(vec![
                Cell::Text("observables".into()),
                Cell::Text("reconciliation".into()),
                Cell::Text(format!("{} n={} r={} t={} phi={:.6}", r.quantity, p.n, p.r, p.t, p.phi)),
                Cell::Int(1),
                Cell::float(r.residual),
                Cell::float(landau_coherent::observables::reconcile::RECONCILE_TOLERANCE),
                Cell::Text(if r.agrees { "agrees" } else { "differs" }.into()),
            ]);
        }
        t
    }
}

/// Running maximum of one check. A NaN residual counts as infinite.
#[derive(Debug, Clone)]
struct Check {
    suite: &'static str,
    name: String,
    tolerance: f64,
    runs: usize,
    worst: f64,
}

impl Check {
    fn new(suite: &'static str, name: impl Into<String>, tolerance: f64) -> Self {
        Self {
            suite,
            name: name.into(),
            tolerance,
            runs: 0,
            worst: 0.0,
        }
    }

    fn record(&mut self, residual: f64) {
        self.runs += 1;
        self.worst = if residual.is_nan() { f64::INFINITY } else { self.worst.max(residual) };
    }

    fn record_all(&mut self, residuals: impl IntoIterator<Item = f64>) {
        for r in residuals {
            self.record(r);
        }
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            suite: self.suite,
            name: self.name,
            runs: self.runs,
            max_residual: self.worst,
            tolerance: self.tolerance,
            pass: self.runs > 0 && self.worst <= self.tolerance,
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn rational(t: f64) -> Rational {
    Rational::from_float(t).expect("finite grid value")
}

fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn embed_level(n: u32, coefficients: &[Complex64]) -> TwoModeState {
    TwoModeState::from_level(n, coefficients)
}

pub fn algebra(ctx: &EvalContext) -> Result<Vec<CheckResult>> {
    const S: &str = "algebra";
    let fs = FockSpace::new(12);
    let one = OperatorExpr::identity();
    let zero = OperatorExpr::zero();
    let comm = OperatorExpr::commutator;
    let (a, ad, b, bd) = (OperatorExpr::a(), OperatorExpr::a_dag(), OperatorExpr::b(), OperatorExpr::b_dag());
    let (kp, km, k3) = (OperatorExpr::k_plus(), OperatorExpr::k_minus(), OperatorExpr::k3());

    let mut canonical = Check::new(S, "canonical_commutators", ALGEBRA_TOLERANCE);
    canonical.record(fs.interior_defect(&comm(&a, &ad), &one)?);
    canonical.record(fs.interior_defect(&comm(&b, &bd), &one)?);

    let mut cross = Check::new(S, "cross_commutators", ALGEBRA_TOLERANCE);
    for (l, r) in [(&a, &b), (&a, &bd), (&ad, &b), (&ad, &bd), (&a, &a), (&b, &b)] {
        cross.record(fs.interior_defect(&comm(l, r), &zero)?);
    }

    let mut su2 = Check::new(S, "su2_commutators", ALGEBRA_TOLERANCE);
    su2.record(fs.interior_defect(&comm(&kp, &km), &(k3.clone() * 2.0))?);
    su2.record(fs.interior_defect(&comm(&k3, &kp), &kp)?);
    su2.record(fs.interior_defect(&comm(&k3, &km), &-km.clone())?);

    let mut elements = Check::new(S, "su2_matrix_elements", ALGEBRA_TOLERANCE);
    for n in 1..=8u32 {
        for k in 0..=n {
            let e = |j: u32| TwoModeState::basis(n - j, j);
            let ek = e(k);
            let up = if k < n { e(k + 1).scale(((n - k) as f64 * (k + 1) as f64).sqrt().into()) } else { TwoModeState::zero() };
            let down = if k > 0 { e(k - 1).scale(((k * (n - k + 1)) as f64).sqrt().into()) } else { TwoModeState::zero() };
            elements.record(fs.apply(&kp, &ek)?.max_abs_diff(&up));
            elements.record(fs.apply(&km, &ek)?.max_abs_diff(&down));
            elements.record(fs.apply(&k3, &ek)?.max_abs_diff(&ek.scale((k as f64 - n as f64 / 2.0).into())));
        }
    }

    let x = OperatorExpr::position(ctx.hbar, ctx.mass, ctx.omega);
    let p = OperatorExpr::momentum(ctx.hbar, ctx.mass, ctx.omega, MomentumConvention::Corrected);
    let mut xp = Check::new(S, "position_momentum_commutator", ALGEBRA_TOLERANCE);
    xp.record(fs.interior_defect(&comm(&x, &p), &OperatorExpr::scalar(Complex64::new(0.0, ctx.hbar)))? / ctx.hbar);

    let mut hermitian = Check::new(S, "hermiticity", ALGEBRA_TOLERANCE);
    for op in [&x, &p, &OperatorExpr::su2_x1(), &OperatorExpr::su2_x2(), &k3, &OperatorExpr::n_a(), &OperatorExpr::n_b()] {
        hermitian.record(fs.hermiticity_defect(op, 10)?);
    }

    let mut total = Check::new(S, "total_number_on_level", ALGEBRA_TOLERANCE);
    let number = OperatorExpr::n_a() + OperatorExpr::n_b();
    for (n, r, t, phi) in grid() {
        let params = ModelParams::new(n, r)?;
        let state = build_state(&params, &CoherencePoint::from_t(t, phi)?);
        let psi = embed_level(n, &state.coefficients);
        total.record(fs.apply(&number, &psi)?.max_abs_diff(&psi.scale((n as f64).into())));
    }

    Ok(vec![canonical, cross, su2, elements, xp, hermitian, total]
        .into_iter()
        .map(|c| c.finish())
        .collect())
}

pub fn states() -> Result<Vec<CheckResult>> {
    const S: &str = "states";
    let mut norm = Check::new(S, "normalization_series_vs_direct", STATES_TOLERANCE);
    let mut unit = Check::new(S, "state_normalized", STATES_TOLERANCE);
    let mut deformed = Check::new(S, "deformed_equivalence", STATES_TOLERANCE);
    let mut ov = Check::new(S, "overlap_series_vs_direct", STATES_TOLERANCE);
    let partner = CoherencePoint::new(0.8, 1.0)?;
    for (n, r, t, phi) in grid() {
        let params = ModelParams::new(n, r)?;
        let z = CoherencePoint::from_t(t, phi)?;
        if phi == 0.0 {
            let direct = to_f64(&normalization_direct(&params, &rational(t)));
            norm.record(rel(normalization_constant(&params, t)?, direct));
        }
        let s = build_state(&params, &z);
        unit.record((s.norm_sqr() - 1.0).abs());
        let d = build_state_deformed(&params, &z)?;
        deformed.record(
            s.coefficients
                .iter()
                .zip(&d.coefficients)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max),
        );
        let closed = overlap(&params, &partner, &z)?;
        let direct = overlap_direct(&params, &partner, &z);
        ov.record((closed - direct).norm() / direct.norm().max(1.0));
    }

    let mut cross = Check::new(S, "cross_order_overlap", STATES_TOLERANCE);
    for n in 1..=5 {
        for r1 in 1..=4 {
            for r2 in 1..=4 {
                for t in GRID_T {
                    let z = CoherencePoint::from_t(t, 0.3)?;
                    cross.record(rel(overlap_cross_r_series(n, r1, r2, &z)?, overlap_cross_r(n, r1, r2, &z)?));
                }
            }
        }
    }

    let mut binomial = Check::new(S, "binomial_limit", STATES_TOLERANCE);
    for n in GRID_N {
        for t in GRID_T {
            for phi in PHASES {
                let z = CoherencePoint::from_t(t, phi)?;
                let a = build_state(&ModelParams::new(n, 1)?, &z);
                let b = binomial_state(n, &z);
                binomial.record(a.coefficients.iter().zip(&b.coefficients).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max));
            }
        }
    }

    let mut anchor = Check::new(S, "normalization_exact_anchor", 0.0);
    let exact = normalization_constant_exact(&ModelParams::new(2, 2)?, &int(1))?;
    anchor.record(if exact == ratio(55, 36) { 0.0 } else { 1.0 });

    Ok(vec![norm, unit, deformed, ov, cross, binomial, anchor]
        .into_iter()
        .map(|c| c.finish())
        .collect())
}

/// Dual-path comparison over the grid plus the analytic and exact anchors.
pub fn observables(ctx: &EvalContext) -> Result<(Vec<CheckResult>, Vec<PointReconciliation>)> {
    const S: &str = "observables";
    let points = grid();
    let per_point: Vec<Vec<(&'static str, f64)>> = points
        .par_iter()
        .map(|&(n, r, t, phi)| {
            let params = ModelParams::with_constants(n, r, ctx.hbar, ctx.mass, ctx.omega)?;
            let z = CoherencePoint::from_t(t, phi)?;
            Ok(dual_path(&params, &z, ctx.precision)?
                .into_iter()
                .map(|c| (c.quantity, c.residual()))
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut dual: Vec<Check> = Vec::new();
    for rows in &per_point {
        for &(q, res) in rows {
            let name = format!("dual_path:{q}");
            match dual.iter_mut().find(|c| c.name == name) {
                Some(c) => c.record(res),
                None => {
                    let mut c = Check::new(S, name, DUAL_PATH_TOLERANCE);
                    c.record(res);
                    dual.push(c);
                }
            }
        }
    }

    let mut uncertainty = Check::new(S, "su2_uncertainty", UNCERTAINTY_SLACK);
    let mut rs = Check::new(S, "robertson_schrodinger", UNCERTAINTY_SLACK);
    let bound = ctx.hbar * ctx.hbar / 4.0;
    for &(n, r, t, phi) in &points {
        let params = ModelParams::with_constants(n, r, ctx.hbar, ctx.mass, ctx.omega)?;
        let z = CoherencePoint::from_t(t, phi)?;
        let sq = su2_squeeze_with(&params, &z, ctx.precision)?;
        let lower = sq.k3 * sq.k3 / 4.0;
        let product = sq.var_x1 * sq.var_x2;
        uncertainty.record(if lower > 0.0 { ((lower - product) / lower).max(0.0) } else { (-product).max(0.0) });
        let q = quadrature_closed(&params, &z, MomentumConvention::Corrected, ctx.precision)?;
        rs.record(((bound - q.robertson_schrodinger()) / bound).max(0.0));
    }
    let mut rs_equal = Check::new(S, "robertson_schrodinger_equality", RS_EQUALITY_TOLERANCE);
    let p11 = ModelParams::with_constants(1, 1, ctx.hbar, ctx.mass, ctx.omega)?;
    let q = oracle::quadrature_covariances(&p11, &CoherencePoint::from_t(1.0, 0.0)?, MomentumConvention::Corrected)?;
    rs_equal.record((q.robertson_schrodinger() - bound).abs() / bound);

    let mut exact = Check::new(S, "exact_anchors", 0.0);
    let mut float = Check::new(S, "float_anchors", ANCHOR_TOLERANCE);
    let p22 = ModelParams::new(2, 2)?;
    let radial = radial_moments_exact(&p22, &int(1), TerminationRule::Regularized)?;
    let stats = photon_stats_exact(&p22, &int(1))?;
    let anchors: [(Option<Rational>, Rational); 6] = [
        (Some(radial.norm.clone()), ratio(55, 36)),
        (Some(radial.k_plus.clone()), ratio(42, 55)),
        (Some(stats.mean_nb.clone()), ratio(4, 11)),
        (Some(stats.mean_nb_sq.clone()), ratio(2, 5)),
        (stats.q_b.clone(), ratio(-29, 110)),
        (stats.g2.clone(), ratio(11, 20)),
    ];
    for (got, want) in &anchors {
        exact.record(if got.as_ref() == Some(want) { 0.0 } else { 1.0 });
    }
    let z1 = CoherencePoint::from_t(1.0, 0.0)?;
    let fs = number_moments_with(&p22, &z1, ctx.precision)?;
    let fm = landau_coherent::observables::su2_moments_with(&p22, &z1, ctx.precision)?;
    let fnorm = landau_coherent::observables::radial_moments(&p22, 1.0, ctx.precision, TerminationRule::Regularized)?.norm;
    let got = [fnorm, fm.k_plus.re, fs.mean_nb, fs.mean_nb_sq, fs.q_b()?, fs.g2()?];
    for (g, (_, want)) in got.iter().zip(&anchors) {
        let w = to_f64(want);
        float.record((g - w).abs() / w.abs());
    }

    let mut analytic = Check::new(S, "r1_analytic", ANALYTIC_TOLERANCE);
    for n in [1, 2, 3, 10] {
        for t in [0.1, 1.0, 10.0] {
            let params = ModelParams::new(n, 1)?;
            let z = CoherencePoint::from_t(t, 0.0)?;
            let s = number_moments_with(&params, &z, ctx.precision)?;
            analytic.record(rel(s.mean_nb, n as f64 * t / (1.0 + t)));
            analytic.record(rel(s.q_a()?, -1.0 / (1.0 + t)));
            analytic.record(rel(s.q_b()?, -t / (1.0 + t)));
            if n >= 2 {
                analytic.record(rel(s.g2()?, (n as f64 - 1.0) / n as f64));
            }
            if n == 1 && t < 1.0 {
                let sq = su2_squeeze_with(&params, &z, ctx.precision)?;
                analytic.record(rel(sq.s1.unwrap_or(f64::NAN), -2.0 * t / (1.0 + t)));
                analytic.record(rel(sq.s2.unwrap_or(f64::NAN), 2.0 * t / (1.0 - t)));
            }
        }
    }

    let mut reconciliation = Vec::new();
    for (n, r, t, phi) in RECONCILE_POINTS {
        let params = ModelParams::with_constants(n, r, ctx.hbar, ctx.mass, ctx.omega)?;
        for record in printed_forms(&params, &CoherencePoint::from_t(t, phi)?)? {
            reconciliation.push(PointReconciliation { n, r, t, phi, record });
        }
    }

    let mut checks: Vec<CheckResult> = dual.into_iter().map(|c| c.finish()).collect();
    checks.extend(
        [uncertainty, rs, rs_equal, exact, float, analytic]
            .into_iter()
            .map(|c| c.finish()),
    );
    Ok((checks, reconciliation))
}

/// Log-spaced samples on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..points)
        .map(|i| if i + 1 == points { hi } else { (a + (b - a) * i as f64 / (points - 1) as f64).exp() })
        .collect()
}

pub fn measure() -> Result<Vec<CheckResult>> {
    const S: &str = "measure";
    let mut moments = Check::new(S, "moment_conditions", MOMENT_TOLERANCE);
    let reports: Vec<_> = (1..=3u32)
        .flat_map(|n| (1..=3u32).map(move |r| (n, r)))
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&(n, r)| Ok(Measure::new(MeasureParams::new(n, r)?)?.identity_resolution_check()?))
        .collect::<Result<_>>()?;
    for rep in &reports {
        moments.record_all(rep.residuals.iter().copied());
    }

    let mut closed = Check::new(S, "r1_density", DENSITY_TOLERANCE);
    for n in 1..=3u32 {
        let m = Measure::new(MeasureParams::new(n, 1)?)?;
        for t in log_grid(1e-3, 50.0, 40) {
            let want = 2.0 * (n as f64 + 1.0) / (PI * (1.0 + t) * (1.0 + t));
            closed.record((m.density(t)? - want).abs() / want);
        }
    }

    let mut positive = Check::new(S, "density_nonnegative", POSITIVITY_TOLERANCE);
    let lowest: Vec<f64> = (1..=3u32)
        .flat_map(|n| (1..=4u32).map(move |r| (n, r)))
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&(n, r)| {
            let m = Measure::new(MeasureParams::new(n, r)?)?;
            log_grid(1e-3, 50.0, 60)
                .into_iter()
                .map(|t| m.density(t).map_err(Into::into))
                .try_fold(f64::INFINITY, |acc, d: Result<f64>| Ok(acc.min(d?)))
        })
        .collect::<Result<_>>()?;
    positive.record_all(lowest.into_iter().map(|d| (-d).max(0.0)));

    Ok(vec![moments, closed, positive].into_iter().map(|c| c.finish()).collect())
}

fn suite_name(suite: Suite) -> &'static str {
    match suite {
        Suite::Algebra => "algebra",
        Suite::States => "states",
        Suite::Observables => "observables",
        Suite::Measure => "measure",
        Suite::All => "all",
    }
}

/// Runs `suite`; `tol` replaces every tolerance in it.
pub fn run(suite: Suite, tol: Option<f64>, ctx: &EvalContext) -> Result<VerifyReport> {
    let mut checks = Vec::new();
    let mut reconciliation = Vec::new();
    let wants = |s: Suite| suite == s || suite == Suite::All;
    if wants(Suite::Algebra) {
        checks.extend(algebra(ctx)?);
    }
    if wants(Suite::States) {
        checks.extend(states()?);
    }
    if wants(Suite::Observables) {
        let (c, rec) = observables(ctx)?;
        checks.extend(c);
        reconciliation = rec;
    }
    if wants(Suite::Measure) {
        checks.extend(measure()?);
    }
    if let Some(t) = tol {
        for c in &mut checks {
            c.tolerance = t;
            c.pass = c.runs > 0 && c.max_residual <= t;
        }
    }
    Ok(VerifyReport {
        suite: suite_name(suite),
        pass: checks.iter().all(|c| c.pass),
        checks,
        reconciliation,
    })
}
