//! Parameter sweeps behind the eight figures, plus a catch-all custom sweep.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::PathBuf;

use landau_coherent::fock::MomentumConvention;
use landau_coherent::measure::{Measure, MeasureParams};
use landau_coherent::observables::{
    number_moments_with, quadrature_closed, radial_moments, su2_moments_with, su2_squeeze_with, Precision,
    Su2SqueezeReport,
};
use landau_coherent::specfun::TerminationRule;
use landau_coherent::states::{CoherencePoint, ModelParams};
use landau_coherent::Error;
use rayon::prelude::*;

use crate::args::{FigureId, Format};
use crate::config::Settings;
use crate::error::{CliError, Result};
use crate::table::{Cell, Table};

/// Phases swept in the phase-resolved figures.
pub const PHASES: [f64; 5] = [0.0, PI / 6.0, PI / 4.0, PI / 3.0, PI / 2.0];

/// Default `(min, max, points)` for `t = |z|^2`.
pub const DEFAULT_T_RANGE: (f64, f64, usize) = (0.05, 10.0, 200);

/// `fig4` stays below `t = 1`, where `<K3>` vanishes for `n = r = 1`.
pub const FIG4_T_RANGE: (f64, f64, usize) = (0.005, 0.995, 199);

/// Physical constants, momentum convention and series width of an evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalContext {
    pub hbar: f64,
    pub mass: f64,
    pub omega: f64,
    pub momentum: MomentumConvention,
    pub precision: Precision,
}

impl Default for EvalContext {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
            omega: 1.0,
            momentum: MomentumConvention::Corrected,
            precision: Precision::Double,
        }
    }
}

impl EvalContext {
    pub fn params(&self, n: u32, r: u32) -> Result<ModelParams> {
        Ok(ModelParams::with_constants(n, r, self.hbar, self.mass, self.omega)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub figure_id: FigureId,
    pub n_values: Vec<u32>,
    pub r_values: Vec<u32>,
    pub phi_values: Vec<f64>,
    pub t_range: (f64, f64, usize),
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

impl SweepSpec {
    /// The parameter choices of each figure.
    pub fn defaults(figure_id: FigureId) -> Self {
        let all_r = vec![1, 2, 3, 4];
        let (n_values, r_values, phi_values, t_range) = match figure_id {
            FigureId::Fig1 | FigureId::Fig2 => (vec![1, 2, 3], all_r, vec![0.0], DEFAULT_T_RANGE),
            FigureId::Fig3 => (vec![2], vec![2], PHASES.to_vec(), DEFAULT_T_RANGE),
            FigureId::Fig4 => (vec![1], vec![1], PHASES.to_vec(), FIG4_T_RANGE),
            FigureId::Fig5 => (vec![1, 2, 3], vec![2, 3, 4], vec![0.0], DEFAULT_T_RANGE),
            FigureId::Fig6 => (vec![1, 2, 3], vec![4], PHASES.to_vec(), DEFAULT_T_RANGE),
            FigureId::Fig7 => (vec![2], all_r, vec![0.0], DEFAULT_T_RANGE),
            FigureId::Fig8 => (vec![2, 10], all_r, vec![0.0], DEFAULT_T_RANGE),
            FigureId::Custom => (vec![2], vec![2], vec![0.0], DEFAULT_T_RANGE),
        };
        Self {
            figure_id,
            n_values,
            r_values,
            phi_values,
            t_range,
            output_path: None,
            format: Format::Csv,
        }
    }

    pub fn from_settings(figure_id: FigureId, s: &Settings) -> Result<Self> {
        if s.t.is_some() {
            return Err(CliError::usage("figure sweeps take --t-min, --t-max and --points instead of --t"));
        }
        let mut spec = Self::defaults(figure_id);
        if let Some(v) = &s.n {
            spec.n_values = v.clone();
        }
        if let Some(v) = &s.r {
            spec.r_values = v.clone();
        }
        if let Some(v) = &s.phi {
            spec.phi_values = v.clone();
        }
        let (lo, hi, points) = spec.t_range;
        spec.t_range = (s.t_min.unwrap_or(lo), s.t_max.unwrap_or(hi), s.points.unwrap_or(points));
        spec.output_path = s.out.clone();
        spec.format = s.format();
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi, points) = self.t_range;
        if points < 2 {
            return Err(CliError::usage(format!("points must be at least 2, got {points}")));
        }
        if !(lo.is_finite() && hi.is_finite() && lo >= 0.0 && hi >= lo) {
            return Err(CliError::usage(format!("t range must satisfy 0 <= min <= max, got [{lo}, {hi}]")));
        }
        if self.n_values.is_empty() || self.r_values.is_empty() || self.phi_values.is_empty() {
            return Err(CliError::usage("n, r and phi lists must be nonempty"));
        }
        if self.phi_values.iter().any(|p| !p.is_finite()) {
            return Err(CliError::usage("phi values must be finite"));
        }
        for &n in &self.n_values {
            for &r in &self.r_values {
                ModelParams::new(n, r)?;
            }
        }
        Ok(())
    }

    /// `points` equally spaced values, endpoints exact.
    pub fn t_grid(&self) -> Vec<f64> {
        let (lo, hi, points) = self.t_range;
        let step = (hi - lo) / (points - 1) as f64;
        (0..points)
            .map(|i| if i + 1 == points { hi } else { lo + step * i as f64 })
            .collect()
    }

    pub fn quantity_columns(&self) -> &'static [&'static str] {
        match self.figure_id {
            FigureId::Fig1 => &["K"],
            FigureId::Fig2 | FigureId::Fig3 => &["s_x", "s_p"],
            FigureId::Fig4 | FigureId::Fig5 | FigureId::Fig6 => &["s_1", "s_2"],
            FigureId::Fig7 => &["q_a", "q_b"],
            FigureId::Fig8 => &["g2"],
            FigureId::Custom => &CUSTOM_COLUMNS,
        }
    }
}

const CUSTOM_COLUMNS: [&str; 21] = [
    "norm",
    "k_plus_re",
    "k_plus_im",
    "k_plus_sq_re",
    "k_plus_sq_im",
    "k_plus_k_minus",
    "k3",
    "mean_na",
    "mean_nb",
    "sigma_xx",
    "sigma_pp",
    "sigma_xp",
    "s_x",
    "s_p",
    "var_x1",
    "var_x2",
    "s_1",
    "s_2",
    "q_a",
    "q_b",
    "g2",
];

/// Maps the "no value here" errors to an empty cell and keeps real failures.
fn defined(value: landau_coherent::Result<f64>) -> Result<Option<f64>> {
    match value {
        Ok(v) => Ok(Some(v)),
        Err(Error::VacuumMode | Error::DegenerateDenominator | Error::UndefinedSqueezeFactor) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

#[derive(Debug, Clone, Copy)]
struct GridPoint {
    n: u32,
    r: u32,
    phi: f64,
    t: f64,
}

fn canonical(a: &GridPoint, b: &GridPoint) -> Ordering {
    (a.n, a.r)
        .cmp(&(b.n, b.r))
        .then(a.phi.total_cmp(&b.phi))
        .then(a.t.total_cmp(&b.t))
}

fn squeeze_cells(sq: &Su2SqueezeReport) -> Vec<Option<f64>> {
    vec![sq.s1, sq.s2]
}

fn evaluate(
    id: FigureId,
    p: &GridPoint,
    ctx: &EvalContext,
    measures: &BTreeMap<(u32, u32), Measure>,
) -> Result<Vec<Option<f64>>> {
    let params = ctx.params(p.n, p.r)?;
    let z = CoherencePoint::from_t(p.t, p.phi)?;
    let cells = match id {
        FigureId::Fig1 => vec![Some(measures[&(p.n, p.r)].density(p.t)?)],
        FigureId::Fig2 | FigureId::Fig3 => {
            let q = quadrature_closed(&params, &z, ctx.momentum, ctx.precision)?;
            vec![Some(q.s_x), Some(q.s_p)]
        }
        FigureId::Fig4 | FigureId::Fig5 | FigureId::Fig6 => squeeze_cells(&su2_squeeze_with(&params, &z, ctx.precision)?),
        FigureId::Fig7 => {
            let s = number_moments_with(&params, &z, ctx.precision)?;
            vec![defined(s.q_a())?, defined(s.q_b())?]
        }
        FigureId::Fig8 => vec![defined(number_moments_with(&params, &z, ctx.precision)?.g2())?],
        FigureId::Custom => {
            let radial = radial_moments(&params, p.t, ctx.precision, TerminationRule::Regularized)?;
            let m = su2_moments_with(&params, &z, ctx.precision)?;
            let s = number_moments_with(&params, &z, ctx.precision)?;
            let q = quadrature_closed(&params, &z, ctx.momentum, ctx.precision)?;
            let sq = su2_squeeze_with(&params, &z, ctx.precision)?;
            vec![
                Some(radial.norm),
                Some(m.k_plus.re),
                Some(m.k_plus.im),
                Some(m.k_plus_sq.re),
                Some(m.k_plus_sq.im),
                Some(m.k_plus_k_minus),
                Some(m.k3),
                Some(s.mean_na),
                Some(s.mean_nb),
                Some(q.sigma_xx),
                Some(q.sigma_pp),
                Some(q.sigma_xp),
                Some(q.s_x),
                Some(q.s_p),
                Some(sq.var_x1),
                Some(sq.var_x2),
                sq.s1,
                sq.s2,
                defined(s.q_a())?,
                defined(s.q_b())?,
                defined(s.g2())?,
            ]
        }
    };
    Ok(cells)
}

/// Builds a worker pool; `0` lets rayon choose.
pub fn thread_pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::usage(format!("cannot start {threads} worker threads: {e}")))
}

/// Evaluates the sweep on `threads` workers and returns rows in canonical
/// `(n, r, phi, t)` order.
pub fn run_sweep(spec: &SweepSpec, ctx: &EvalContext, threads: usize) -> Result<Table> {
    spec.validate()?;
    let ts = spec.t_grid();
    let mut grid = Vec::new();
    for &n in &spec.n_values {
        for &r in &spec.r_values {
            for &phi in &spec.phi_values {
                for &t in &ts {
                    grid.push(GridPoint { n, r, phi, t });
                }
            }
        }
    }
    grid.sort_by(canonical);

    let mut measures = BTreeMap::new();
    if spec.figure_id == FigureId::Fig1 {
        for &n in &spec.n_values {
            for &r in &spec.r_values {
                measures.insert((n, r), Measure::new(MeasureParams::new(n, r)?)?);
            }
        }
    }

    let pool = thread_pool(threads)?;
    let values: Vec<Vec<Option<f64>>> = pool.install(|| {
        grid.par_iter()
            .map(|p| evaluate(spec.figure_id, p, ctx, &measures))
            .collect::<Result<_>>()
    })?;

    let columns = ["n", "r", "phi", "t"].into_iter().chain(spec.quantity_columns().iter().copied());
    let mut table = Table::new(columns);
    for (p, cells) in grid.iter().zip(values) {
        let mut row = vec![Cell::from(p.n), Cell::from(p.r), Cell::float(p.phi), Cell::float(p.t)];
        row.extend(cells.into_iter().map(Cell::Float));
        table.push(row);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(id: FigureId) -> SweepSpec {
        let mut s = SweepSpec::defaults(id);
        s.t_range = (0.1, 2.0, 5);
        s
    }

    #[test]
    fn grid_endpoints_exact() {
        let s = small(FigureId::Fig7);
        let g = s.t_grid();
        assert_eq!(g.len(), 5);
        assert_eq!(g[0], 0.1);
        assert_eq!(g[4], 2.0);
    }

    #[test]
    fn validation() {
        let mut s = small(FigureId::Fig8);
        s.t_range = (0.0, 1.0, 1);
        assert!(s.validate().is_err());
        s.t_range = (-1.0, 1.0, 3);
        assert!(s.validate().is_err());
        s.t_range = (0.0, 1.0, 3);
        s.r_values.clear();
        assert!(s.validate().is_err());
    }

    #[test]
    fn fig8_large_n_is_constant() {
        let mut s = small(FigureId::Fig8);
        s.n_values = vec![10];
        s.r_values = vec![1];
        let table = run_sweep(&s, &EvalContext::default(), 1).unwrap();
        for row in &table.rows {
            let Cell::Float(Some(g)) = row[4] else { panic!() };
            assert!((g - 0.9).abs() < 1e-12);
        }
    }

    #[test]
    fn fig7_r1_matches_closed_form() {
        let table = run_sweep(&small(FigureId::Fig7), &EvalContext::default(), 2).unwrap();
        assert_eq!(table.columns, ["n", "r", "phi", "t", "q_a", "q_b"]);
        for row in table.rows.iter().filter(|r| r[1] == Cell::Int(1)) {
            let (Cell::Float(Some(t)), Cell::Float(Some(qa))) = (&row[3], &row[4]) else { panic!() };
            assert!((qa + 1.0 / (1.0 + t)).abs() < 1e-12);
        }
    }

    #[test]
    fn fig1_r1_is_closed_density() {
        let mut s = small(FigureId::Fig1);
        s.n_values = vec![2];
        s.r_values = vec![1];
        let table = run_sweep(&s, &EvalContext::default(), 1).unwrap();
        for row in &table.rows {
            let (Cell::Float(Some(t)), Cell::Float(Some(k))) = (&row[3], &row[4]) else { panic!() };
            assert!((k - 6.0 / (PI * (1.0 + t) * (1.0 + t))).abs() < 1e-12);
        }
    }

    #[test]
    fn undefined_cells_are_empty() {
        let mut s = small(FigureId::Custom);
        s.n_values = vec![1];
        s.r_values = vec![1];
        s.t_range = (0.0, 1.0, 2);
        let table = run_sweep(&s, &EvalContext::default(), 1).unwrap();
        let q_b = table.columns.iter().position(|c| c == "q_b").unwrap();
        let s_1 = table.columns.iter().position(|c| c == "s_1").unwrap();
        assert_eq!(table.rows[0][q_b], Cell::Float(None));
        assert_eq!(table.rows[1][s_1], Cell::Float(None));
    }
}
