//! One function per experiment. Each returns a table and a JSON value with
//! experiment-specific details for the sidecar.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::config::{Experiment, ExperimentConfig};
use super::output::{format_number, Cell, Table};
use super::CliError;
use crate::bases::{sample_grid, uniform_grid, BasisFamily};
use crate::convergence::{
    convergence_report, kernel_prefactor, polya_balance, schmidt_compare, schmidt_q_star, scheffe_demo,
    scheffe_limit, scheffe_second_moment, weyl_ratio, weyl_target,
};
use crate::domains::{SymbolKind, SymbolSpec};
use crate::error::Error;
use crate::measures::{
    bathtub_bound, counting_from_table, lp_norm_scaled_trace, mu_moment, scaled_trace_mass, sublevel_radius,
    tightness_report, MomentMethod, SpectrumTable,
};

const KERNEL_GRID_POINTS: usize = 257;
const DEFAULT_M_MAX: u64 = 1000;

pub(super) struct Context<'a> {
    pub cfg: &'a ExperimentConfig,
    pub basis: BasisFamily,
    pub symbol: SymbolSpec,
}

impl Context<'_> {
    fn fail(&self, e: Error) -> CliError {
        let what = format!(
            "{} on basis {} with symbol {}: {e}",
            self.cfg.experiment,
            self.basis.name(),
            self.symbol.name()
        );
        match e {
            Error::Divergent(_) | Error::Quadrature(_) | Error::NonIntegrableDecay(_) => CliError::Numeric(what),
            _ => CliError::Config(what),
        }
    }

    fn config(&self, msg: impl Into<String>) -> CliError {
        CliError::Config(format!("{}: {}", self.cfg.experiment, msg.into()))
    }

    fn require_finite(&self, v: f64, what: &str) -> Result<f64, CliError> {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(CliError::Numeric(format!(
                "{}: {what} is infinite for basis {} with symbol {}",
                self.cfg.experiment,
                self.basis.name(),
                self.symbol.name()
            )))
        }
    }

    fn n_list(&self) -> &[u64] {
        &self.cfg.run.n_list
    }
}

type Outcome = Result<(Table, Value), CliError>;

pub(super) fn run(ctx: &Context) -> Outcome {
    match ctx.cfg.experiment {
        Experiment::Figure1 => figure1(ctx),
        Experiment::Weyl => weyl(ctx),
        Experiment::Bathtub => bathtub(ctx),
        Experiment::Count => count(ctx),
        Experiment::Lp => lp(ctx),
        Experiment::Tightness => tightness(ctx),
        Experiment::Polya => polya(ctx),
        Experiment::Kernel => kernel(ctx),
        Experiment::Mass => mass(ctx),
        Experiment::Scheffe => scheffe(ctx),
    }
}

fn num_label(v: f64) -> String {
    format_number(v).unwrap_or_else(|| v.to_string())
}

fn figure1(ctx: &Context) -> Outcome {
    let g = ctx.cfg.grid().map_err(|e| CliError::Config(e.0))?;
    let columns = ctx
        .n_list()
        .par_iter()
        .map(|&n| sample_grid(&ctx.basis, n, g.min, g.max, g.step, true).map(|t| {
            let mass = t.trapezoid_mass();
            (t.values, mass)
        }))
        .collect::<Result<Vec<_>, Error>>()
        .map_err(|e| ctx.fail(e))?;
    let grid = uniform_grid(g.min, g.max, g.step).map_err(|e| ctx.fail(e))?;
    let mut table = Table::new(std::iter::once("k".to_string()).chain(ctx.n_list().iter().map(|n| format!("F_{n}"))));
    for (i, &k) in grid.iter().enumerate() {
        let mut row = vec![Cell::Num(k)];
        row.extend(columns.iter().map(|c| Cell::Num(c.0[i])));
        table.push(row);
    }
    let masses: Vec<Value> = ctx
        .n_list()
        .iter()
        .zip(&columns)
        .map(|(n, c)| json!({"N": n, "trapezoid_mass": c.1}))
        .collect();
    let note = match ctx.basis {
        BasisFamily::Haar => Some("Haar traces do not form a plateau on the Fermi ball"),
        BasisFamily::ExponentialCircle => {
            Some("2N+1 exponentials scaled by N: plateau of height 1 on |k| < 1 with total mass (2N+1)/N")
        }
        _ => None,
    };
    Ok((table, json!({"column_meaning": "F_N(N^(1/n) k) along the first axis", "grid_masses": masses, "note": note})))
}

fn power_of(ctx: &Context) -> Result<f64, CliError> {
    match ctx.symbol.kind {
        SymbolKind::Power { p } => Ok(p),
        _ => Err(ctx.config("the weyl experiment needs a power symbol")),
    }
}

fn weyl(ctx: &Context) -> Outcome {
    let p = power_of(ctx)?;
    let target = weyl_target(&ctx.basis, p);
    let ratios = ctx
        .n_list()
        .par_iter()
        .map(|&n| weyl_ratio(&ctx.basis, p, n))
        .collect::<Result<Vec<f64>, Error>>()
        .map_err(|e| ctx.fail(e))?;
    let mut table = Table::new(["N", "weyl_ratio", "target", "deviation"]);
    for (&n, &r) in ctx.n_list().iter().zip(&ratios) {
        table.push(vec![n.into(), r.into(), target.into(), (r - target).into()]);
    }
    Ok((table, json!({"p": p, "target": target})))
}

fn bathtub(ctx: &Context) -> Outcome {
    let domain = ctx.basis.domain();
    let bt = bathtub_bound(&ctx.symbol, &domain).map_err(|e| ctx.fail(e))?;
    let moments = ctx
        .n_list()
        .par_iter()
        .map(|&n| mu_moment(&ctx.basis, &ctx.symbol, n))
        .collect::<Result<Vec<f64>, Error>>()
        .map_err(|e| ctx.fail(e))?;
    let tol = ctx.cfg.tolerances.abs;
    let mut table = Table::new(["N", "mu_moment", "bathtub_bound", "holds"]);
    for (&n, &m) in ctx.n_list().iter().zip(&moments) {
        table.push(vec![n.into(), m.into(), bt.bound_value.into(), (bt.bound_value <= m + tol).into()]);
    }
    Ok((table, json!({"bathtub": bt})))
}

fn count(ctx: &Context) -> Outcome {
    let lambdas = ctx
        .cfg
        .run
        .lambda_list
        .clone()
        .ok_or_else(|| ctx.config("run.lambda_list is required"))?;
    let m_max = ctx.cfg.run.m_max.unwrap_or(DEFAULT_M_MAX);
    let spectrum =
        SpectrumTable::build(&ctx.basis, &ctx.symbol, m_max, MomentMethod::Auto).map_err(|e| ctx.fail(e))?;
    let mut table = Table::new(["lambda", "count", "bound", "epsilon", "bound_over_count", "certified"]);
    for &l in &lambdas {
        let r = counting_from_table(&spectrum, &ctx.basis, &ctx.symbol, l).map_err(|e| ctx.fail(e))?;
        let ratio = if r.count == 0 { f64::INFINITY } else { r.bound / r.count as f64 };
        table.push(vec![l.into(), r.count.into(), r.bound.into(), r.epsilon.into(), ratio.into(), r.certified.into()]);
    }
    Ok((table, json!({"m_max": m_max, "any_infinite_moment": spectrum.any_infinite()})))
}

fn lp(ctx: &Context) -> Outcome {
    let ps = ctx.cfg.run.p_list.clone().unwrap_or_else(|| vec![1.0, 2.0, 4.0, 8.0]);
    if ps.iter().any(|&p| !(p >= 1.0) || !p.is_finite()) {
        return Err(ctx.config("run.p_list entries must be finite and at least 1"));
    }
    let h = ctx.basis.domain().density_height();
    let pairs: Vec<(u64, f64)> = ctx.n_list().iter().flat_map(|&n| ps.iter().map(move |&p| (n, p))).collect();
    let norms = pairs
        .par_iter()
        .map(|&(n, p)| lp_norm_scaled_trace(&ctx.basis, n, p))
        .collect::<Result<Vec<f64>, Error>>()
        .map_err(|e| ctx.fail(e))?;
    let tol = ctx.cfg.tolerances.abs;
    let mut table = Table::new(["N", "p", "norm", "bound", "holds"]);
    for (&(n, p), &v) in pairs.iter().zip(&norms) {
        let bound = h.powf(1.0 - 1.0 / p);
        table.push(vec![n.into(), p.into(), v.into(), bound.into(), (v <= bound + tol).into()]);
    }
    Ok((table, json!({"density_height": h})))
}

fn tightness(ctx: &Context) -> Outcome {
    let js = ctx.cfg.run.j_list.clone().ok_or_else(|| ctx.config("run.j_list is required"))?;
    if js.iter().any(|&j| !(j > 0.0) || !j.is_finite()) {
        return Err(ctx.config("run.j_list entries must be positive"));
    }
    let report = tightness_report(&ctx.basis, &ctx.symbol, ctx.n_list(), &js).map_err(|e| ctx.fail(e))?;
    let masses: Vec<f64> = if report.verifiable {
        report.checks.iter().map(|c| c.mass).collect()
    } else {
        let pairs: Vec<(u64, f64)> = ctx.n_list().iter().flat_map(|&n| js.iter().map(move |&j| (n, j))).collect();
        pairs
            .par_iter()
            .map(|&(n, j)| scaled_trace_mass(&ctx.basis, n, sublevel_radius(&ctx.symbol, j)))
            .collect::<Result<Vec<f64>, Error>>()
            .map_err(|e| ctx.fail(e))?
    };
    let mut header = vec!["N".to_string(), "mu_moment".to_string()];
    header.extend(js.iter().map(|j| format!("mass_{}", num_label(*j))));
    let mut table = Table::new(header);
    for (i, &n) in ctx.n_list().iter().enumerate() {
        let mut row = vec![Cell::Int(n), Cell::Num(report.moments[i])];
        row.extend(masses[i * js.len()..(i + 1) * js.len()].iter().map(|&m| Cell::Num(m)));
        table.push(row);
    }
    let lower_bounds: Vec<Value> = js
        .iter()
        .map(|&j| {
            let b = 1.0 - report.sup_moment / j;
            json!({"j": j, "lower_bound": if b.is_finite() { Some(b) } else { None }})
        })
        .collect();
    let all_hold = report.checks.iter().all(|c| c.holds);
    Ok((
        table,
        json!({
            "sup_moment": if report.sup_moment.is_finite() { Some(report.sup_moment) } else { None },
            "verifiable": report.verifiable,
            "note": report.note,
            "lower_bounds": lower_bounds,
            "all_checks_hold": report.verifiable && all_hold,
        }),
    ))
}

fn polya(ctx: &Context) -> Outcome {
    let rows = ctx
        .n_list()
        .par_iter()
        .map(|&m| polya_balance(&ctx.basis, m))
        .collect::<Result<Vec<_>, Error>>()
        .map_err(|e| ctx.fail(e))?;
    let direct = ctx.basis.dim() == 1;
    let mut header = vec!["m", "lambda", "inside", "lhs", "rhs", "slack"];
    if direct {
        header.extend(["lhs_direct", "residual"]);
    }
    let mut table = Table::new(header);
    for r in &rows {
        let mut row: Vec<Cell> = vec![r.m.into(), r.lambda.into(), r.inside.into(), r.lhs.into(), r.rhs.into(), r.slack.into()];
        if direct {
            row.push(r.lhs_direct.unwrap_or(f64::NAN).into());
            row.push(r.residual.unwrap_or(f64::NAN).into());
        }
        table.push(row);
    }
    let min_slack = rows.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min);
    Ok((table, json!({"min_slack": min_slack})))
}

fn kernel(ctx: &Context) -> Outcome {
    let gx: Vec<f64> = (0..KERNEL_GRID_POINTS)
        .map(|i| PI * i as f64 / (KERNEL_GRID_POINTS - 1) as f64)
        .collect();
    let gy: Vec<f64> = match ctx.cfg.grid {
        Some(g) => uniform_grid(g.min, g.max, g.step).map_err(|e| ctx.fail(e))?,
        None => (0..KERNEL_GRID_POINTS)
            .map(|i| -PI + 2.0 * PI * i as f64 / (KERNEL_GRID_POINTS - 1) as f64)
            .collect(),
    };
    let mut table = Table::new(["N", "distance"]);
    for &n in ctx.n_list() {
        let d = schmidt_compare(&ctx.basis, n, &gx, &gy).map_err(|e| ctx.fail(e))?;
        table.push(vec![n.into(), d.into()]);
    }
    let q0 = schmidt_q_star(PI / 2.0, 0.0).map_err(|e| ctx.fail(e))?;
    let prefactor = kernel_prefactor().map_err(|e| ctx.fail(e))?;
    Ok((
        table,
        json!({
            "x_points": gx.len(),
            "y_points": gy.len(),
            "q_star_at_zero": q0,
            "prefactor": prefactor,
        }),
    ))
}

fn mass(ctx: &Context) -> Outcome {
    let report = convergence_report(&ctx.basis, ctx.n_list()).map_err(|e| ctx.fail(e))?;
    let mut table = Table::new([
        "N",
        "mass_in_ball",
        "l2_error",
        "l2_upper_bound",
        "weyl_ratio",
        "sup_plateau_deviation",
        "sup_exterior_value",
    ]);
    for r in &report.rows {
        table.push(vec![
            r.big_n.into(),
            r.mass_in_ball.into(),
            r.l2_error.into(),
            r.l2_upper_bound.into(),
            r.weyl_ratio.into(),
            r.sup_plateau_deviation.into(),
            r.sup_exterior_value.into(),
        ]);
    }
    Ok((table, json!({"kappa_f": report.kappa_f, "density_height": report.density_height})))
}

fn scheffe(ctx: &Context) -> Outcome {
    let g = ctx.cfg.grid().map_err(|e| CliError::Config(e.0))?;
    let grid = uniform_grid(g.min, g.max, g.step).map_err(|e| ctx.fail(e))?;
    let mut header = vec!["x".to_string()];
    header.extend(ctx.n_list().iter().map(|n| format!("f_{n}")));
    header.push("limit".into());
    let mut table = Table::new(header);
    for &x in &grid {
        let mut row = vec![Cell::Num(x)];
        for &n in ctx.n_list() {
            row.push(scheffe_demo(n, x).map_err(|e| ctx.fail(e))?.into());
        }
        row.push(scheffe_limit(x).into());
        table.push(row);
    }
    let moments = ctx
        .n_list()
        .iter()
        .map(|&n| {
            let m = scheffe_second_moment(n).map_err(|e| ctx.fail(e))?;
            Ok(json!({"N": n, "second_moment": ctx.require_finite(m, "second moment")?}))
        })
        .collect::<Result<Vec<Value>, CliError>>()?;
    Ok((table, json!({"second_moments": moments, "limit_second_moment_finite": false})))
}
