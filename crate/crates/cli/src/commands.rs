//! Subcommand bodies.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use landau_coherent::fock::MomentumConvention;
use landau_coherent::measure::{moment_target, Measure, MeasureParams};
use landau_coherent::observables::{
    number_moments_with, oracle, quadrature_closed, squeeze_from_moments, su2_moments_with, Precision,
};
use landau_coherent::states::{build_state, build_state_deformed, CoherencePoint};
use landau_coherent::Error;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::args::{FigureId, Format, Momentum, Suite};
use crate::config::Settings;
use crate::error::{CliError, Result};
use crate::figures::{run_sweep, thread_pool, EvalContext, SweepSpec};
use crate::table::{write_json, Cell, Table};
use crate::verify;

/// Where a command's output goes.
pub enum Sink<'a> {
    Stdout(&'a mut dyn Write),
    File(&'a Path),
}

impl Sink<'_> {
    fn emit(self, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
        match self {
            Sink::Stdout(w) => {
                f(w)?;
                w.flush()?;
            }
            Sink::File(path) => {
                let file = File::create(path).map_err(|source| CliError::File {
                    path: path.to_path_buf(),
                    source,
                })?;
                let mut w = BufWriter::new(file);
                f(&mut w)?;
                w.flush().map_err(|source| CliError::File {
                    path: path.to_path_buf(),
                    source,
                })?;
            }
        }
        Ok(())
    }
}

fn emit_table(table: &Table, format: Format, sink: Sink) -> Result<()> {
    sink.emit(|w| match format {
        Format::Csv => table.write_csv(w),
        Format::Json => write_json(&table.to_json(), w),
    })
}

pub fn context(s: &Settings, precision: Precision) -> EvalContext {
    let (hbar, mass, omega) = s.constants();
    EvalContext {
        hbar,
        mass,
        omega,
        momentum: match s.momentum {
            Some(Momentum::Printed) => MomentumConvention::Printed,
            _ => MomentumConvention::Corrected,
        },
        precision,
    }
}

fn single<T: Copy>(name: &str, values: &Option<Vec<T>>, default: Option<T>) -> Result<T> {
    match values.as_deref() {
        Some([v]) => Ok(*v),
        Some(_) => Err(CliError::usage(format!("--{name} takes a single value here"))),
        None => default.ok_or_else(|| CliError::usage(format!("--{name} is required"))),
    }
}

struct Point {
    n: u32,
    r: u32,
    t: f64,
    phi: f64,
}

fn point(s: &Settings) -> Result<Point> {
    Ok(Point {
        n: single("n", &s.n, None)?,
        r: single("r", &s.r, None)?,
        t: single("t", &s.t, None)?,
        phi: single("phi", &s.phi, Some(0.0))?,
    })
}

fn undefined_label(e: &Error) -> String {
    let what = match e {
        Error::VacuumMode => "vacuum mode".to_string(),
        Error::DegenerateDenominator => "degenerate denominator".to_string(),
        Error::UndefinedSqueezeFactor => "<K3> vanishes".to_string(),
        other => other.to_string(),
    };
    format!("undefined: {what}")
}

type Field = (&'static str, landau_coherent::Result<f64>, landau_coherent::Result<f64>);

/// Every reported quantity at one point, closed form and oracle.
pub fn expect_fields(ctx: &EvalContext, n: u32, r: u32, z: &CoherencePoint) -> Result<Vec<Field>> {
    let params = ctx.params(n, r)?;
    let cm = su2_moments_with(&params, z, ctx.precision)?;
    let om = oracle::su2_moments(&params, z)?;
    let cs = number_moments_with(&params, z, ctx.precision)?;
    let os = oracle::number_moments(&params, z)?;
    let cq = quadrature_closed(&params, z, ctx.momentum, ctx.precision)?;
    let oq = oracle::quadrature_covariances(&params, z, ctx.momentum)?;
    let csq = squeeze_from_moments(&cm);
    let osq = oracle::su2_squeeze(&params, z)?;
    let factor = |v: Option<f64>| v.ok_or(Error::UndefinedSqueezeFactor);
    Ok(vec![
        ("k_plus_re", Ok(cm.k_plus.re), Ok(om.k_plus.re)),
        ("k_plus_im", Ok(cm.k_plus.im), Ok(om.k_plus.im)),
        ("k_plus_sq_re", Ok(cm.k_plus_sq.re), Ok(om.k_plus_sq.re)),
        ("k_plus_sq_im", Ok(cm.k_plus_sq.im), Ok(om.k_plus_sq.im)),
        ("k_plus_k_minus", Ok(cm.k_plus_k_minus), Ok(om.k_plus_k_minus)),
        ("k3", Ok(cm.k3), Ok(om.k3)),
        ("mean_na", Ok(cs.mean_na), Ok(os.mean_na)),
        ("mean_nb", Ok(cs.mean_nb), Ok(os.mean_nb)),
        ("mean_na_sq", Ok(cs.mean_na_sq), Ok(os.mean_na_sq)),
        ("mean_nb_sq", Ok(cs.mean_nb_sq), Ok(os.mean_nb_sq)),
        ("mean_na_nb", Ok(cs.mean_na_nb), Ok(os.mean_na_nb)),
        ("q_a", cs.q_a(), os.q_a()),
        ("q_b", cs.q_b(), os.q_b()),
        ("g2", cs.g2(), os.g2()),
        ("sigma_xx", Ok(cq.sigma_xx), Ok(oq.sigma_xx)),
        ("sigma_pp", Ok(cq.sigma_pp), Ok(oq.sigma_pp)),
        ("sigma_xp", Ok(cq.sigma_xp), Ok(oq.sigma_xp)),
        ("s_x", Ok(cq.s_x), Ok(oq.s_x)),
        ("s_p", Ok(cq.s_p), Ok(oq.s_p)),
        ("var_x1", Ok(csq.var_x1), Ok(osq.var_x1)),
        ("var_x2", Ok(csq.var_x2), Ok(osq.var_x2)),
        ("s_1", factor(csq.s1), factor(osq.s1)),
        ("s_2", factor(csq.s2), factor(osq.s2)),
    ])
}

fn residual(c: f64, o: f64) -> f64 {
    landau_coherent::observables::dual_residual(c, o)
}

pub fn expect(s: &Settings, precision: Precision, sink: Sink) -> Result<()> {
    let ctx = context(s, precision);
    let p = point(s)?;
    let z = CoherencePoint::from_t(p.t, p.phi)?;
    let fields = expect_fields(&ctx, p.n, p.r, &z)?;
    match s.format() {
        Format::Csv => {
            let mut table = Table::new(["field", "closed", "oracle", "residual", "status"]);
            for (name, c, o) in &fields {
                let row = match (c, o) {
                    (Ok(c), Ok(o)) => vec![Cell::float(*c), Cell::float(*o), Cell::float(residual(*c, *o)), Cell::Text("ok".into())],
                    (Err(e), _) | (Ok(_), Err(e)) => {
                        vec![Cell::Float(c.as_ref().ok().copied()), Cell::Float(o.as_ref().ok().copied()), Cell::Float(None), Cell::Text(undefined_label(e))]
                    }
                };
                let mut full = vec![Cell::Text((*name).into())];
                full.extend(row);
                table.push(full);
            }
            emit_table(&table, Format::Csv, sink)
        }
        Format::Json => {
            let mut map = Map::new();
            let mut worst: f64 = 0.0;
            for (name, c, o) in &fields {
                let v = match (c, o) {
                    (Ok(c), Ok(o)) => {
                        let res = residual(*c, *o);
                        worst = worst.max(res);
                        json!({ "closed": c, "oracle": o, "residual": res })
                    }
                    (Err(e), _) | (Ok(_), Err(e)) => Value::from(undefined_label(e)),
                };
                map.insert((*name).into(), v);
            }
            let doc = json!({
                "n": p.n,
                "r": p.r,
                "t": p.t,
                "phi": p.phi,
                "hbar": ctx.hbar,
                "mass": ctx.mass,
                "omega": ctx.omega,
                "momentum": match ctx.momentum { MomentumConvention::Corrected => "corrected", MomentumConvention::Printed => "printed" },
                "precision": precision.to_string(),
                "max_residual": worst,
                "fields": Value::Object(map),
            });
            sink.emit(|w| write_json(&doc, w))
        }
    }
}

pub fn figure(id: FigureId, s: &Settings, precision: Precision, sink: Sink) -> Result<()> {
    let spec = SweepSpec::from_settings(id, s)?;
    let table = run_sweep(&spec, &context(s, precision), s.threads.unwrap_or(0))?;
    emit_table(&table, spec.format, sink)
}

pub fn state(deformed: bool, s: &Settings, precision: Precision, sink: Sink) -> Result<()> {
    let ctx = context(s, precision);
    let p = point(s)?;
    let params = ctx.params(p.n, p.r)?;
    let z = CoherencePoint::from_t(p.t, p.phi)?;
    let v = if deformed { build_state_deformed(&params, &z)? } else { build_state(&params, &z) };
    let probs = v.probabilities();
    let mut table = Table::new(["k", "n_a", "n_b", "re", "im", "probability"]);
    for (k, (c, pr)) in v.coefficients.iter().zip(&probs).enumerate() {
        let k = k as u32;
        table.push(vec![Cell::from(k), Cell::from(p.n - k), Cell::from(k), Cell::float(c.re), Cell::float(c.im), Cell::float(*pr)]);
    }
    emit_table(&table, s.format(), sink)
}

pub fn measure(density: bool, s: &Settings, sink: Sink) -> Result<()> {
    let ns = s.n.clone().unwrap_or_else(|| vec![2]);
    let rs = s.r.clone().unwrap_or_else(|| vec![2]);
    if ns.is_empty() || rs.is_empty() {
        return Err(CliError::usage("n and r lists must be nonempty"));
    }
    let measures = ns
        .iter()
        .flat_map(|&n| rs.iter().map(move |&r| (n, r)))
        .map(|(n, r)| Ok(Measure::new(MeasureParams::new(n, r)?)?))
        .collect::<Result<Vec<_>>>()?;
    let pool = thread_pool(s.threads.unwrap_or(0))?;
    let table = if density {
        let mut spec = SweepSpec::defaults(FigureId::Fig1);
        spec.n_values = ns;
        spec.r_values = rs;
        let (lo, hi, points) = spec.t_range;
        spec.t_range = (s.t_min.unwrap_or(lo), s.t_max.unwrap_or(hi), s.points.unwrap_or(points));
        spec.validate()?;
        let mut table = Table::new(["n", "r", "t", "K"]);
        let ts = spec.t_grid();
        let rows: Vec<Vec<Cell>> = pool.install(|| {
            use rayon::prelude::*;
            measures
                .par_iter()
                .map(|m| {
                    ts.iter()
                        .map(|&t| Ok(vec![Cell::from(m.params().n), Cell::from(m.params().r), Cell::float(t), Cell::float(m.density(t)?)]))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()
        })?
        .into_iter()
        .flatten()
        .collect();
        for row in rows {
            table.push(row);
        }
        table
    } else {
        let mut table = Table::new(["n", "r", "k", "target", "moment", "residual"]);
        let reports = pool.install(|| {
            use rayon::prelude::*;
            measures
                .par_iter()
                .map(|m| {
                    let mp = *m.params();
                    (0..=mp.n)
                        .map(|k| {
                            let target = moment_target(mp.n, mp.r, k).to_f64().unwrap_or(f64::NAN);
                            let moment = m.moment(k)?;
                            Ok(vec![
                                Cell::from(mp.n),
                                Cell::from(mp.r),
                                Cell::from(k),
                                Cell::float(target),
                                Cell::float(moment),
                                Cell::float((moment - target).abs() / target),
                            ])
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()
        })?;
        for row in reports.into_iter().flatten() {
            table.push(row);
        }
        table
    };
    emit_table(&table, s.format(), sink)
}

pub fn verify(s: &Settings, precision: Precision, sink: Sink) -> Result<()> {
    let ctx = context(s, precision);
    let pool = thread_pool(s.threads.unwrap_or(0))?;
    let report = pool.install(|| verify::run(s.suite.unwrap_or(Suite::All), s.tol, &ctx))?;
    match s.format() {
        Format::Csv => emit_table(&report.to_table(), Format::Csv, sink)?,
        Format::Json => sink.emit(|w| write_json(&serde_json::to_value(&report)?, w))?,
    }
    if report.pass {
        Ok(())
    } else {
        Err(CliError::VerifyFailed {
            failed: report.failed(),
            total: report.checks.len(),
        })
    }
}
