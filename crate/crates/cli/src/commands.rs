//! The four commands. Each returns typed rows; rendering lives in
//! [`crate::output`].

use gsruin::{
    simulate_bv, simulate_ubv, GerberShiu, SeverityDistribution, SimConfig, SimEstimate, VariationClass,
};
use serde::Serialize;

use crate::config::{Resolved, RunConfig};
use crate::CliError;

/// One `compute` row. Term columns that do not apply to the model are empty.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComputeRow {
    pub x: f64,
    pub q: f64,
    pub b: f64,
    pub value: f64,
    pub numerator: f64,
    pub denominator: f64,
    /// Two-sided-exit value with the same penalty (bankrupt at the first ruin).
    pub classical: f64,
    pub quad_error: f64,
    pub term_a: Option<f64>,
    pub term_b: Option<f64>,
    pub term_c: Option<f64>,
    pub term_d: Option<f64>,
    pub term_e: Option<f64>,
    pub term_f: Option<f64>,
    pub term_j: Option<f64>,
    pub term_u: Option<f64>,
    pub term_i: Option<f64>,
    pub term_u_x: Option<f64>,
    pub first: Option<f64>,
    pub creep: Option<f64>,
    pub renewal: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulateRow {
    pub x: f64,
    pub q: f64,
    pub b: f64,
    pub mean: f64,
    pub std_error: f64,
    pub n_paths: u64,
    pub n_bankrupt: u64,
    pub n_upcrossed: u64,
    pub n_censored: u64,
    pub dt: Option<f64>,
    pub coarse_mean: Option<f64>,
    pub coarse_std_error: Option<f64>,
    pub fine_mean: Option<f64>,
    pub fine_std_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRow {
    pub x: f64,
    pub q: f64,
    pub b: f64,
    pub phi_formula: f64,
    pub phi_mc: f64,
    pub mc_stderr: f64,
    pub z: f64,
    pub pass: bool,
}

/// Long-format sweep row: one varying axis, everything else at the first
/// value of its query list.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub axis: &'static str,
    pub axis_value: f64,
    pub x: f64,
    pub q: f64,
    pub b: f64,
    pub y_scale: f64,
    pub value: f64,
    pub quad_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Axis {
    X,
    Q,
    B,
    YScale,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Q => "q",
            Axis::B => "b",
            Axis::YScale => "y_scale",
        }
    }
}

fn formula(r: &Resolved, law: &SeverityDistribution, x: f64, q: f64, b: f64) -> Result<ComputeRow, CliError> {
    let gs = GerberShiu::new(&r.model, q, b, r.clock, r.gs)?;
    let res = gs.phi_x(x, &r.penalty, law)?;
    let classical = gs.classical(x, &r.penalty)?.value;
    let t = |k: &str| res.term(k);
    Ok(ComputeRow {
        x,
        q,
        b,
        value: res.value,
        numerator: res.numerator,
        denominator: res.denominator,
        classical,
        quad_error: res.quad_error,
        term_a: t("A"),
        term_b: t("B"),
        term_c: t("C"),
        term_d: t("D"),
        term_e: t("E"),
        term_f: t("F"),
        term_j: t("J"),
        term_u: t("U"),
        term_i: t("I"),
        term_u_x: t("U_x"),
        first: t("first"),
        creep: t("creep"),
        renewal: t("renewal"),
    })
}

fn simulate_one(r: &Resolved, sim: &SimConfig, x: f64, q: f64, b: f64) -> Result<SimEstimate, CliError> {
    let est = match r.model.variation_class() {
        VariationClass::Bounded => simulate_bv(&r.model, x, q, b, &r.penalty, &r.severity, sim)?,
        VariationClass::Unbounded => {
            let clock = r.clock.expect("resolved unbounded-variation models carry a clock");
            simulate_ubv(&r.model, x, q, b, &r.penalty, &r.severity, clock, sim)?
        }
    };
    Ok(est)
}

/// Formula values at every query point, sorted by `(x, q, b)`.
pub fn compute(cfg: &RunConfig) -> Result<Vec<ComputeRow>, CliError> {
    let r = cfg.resolve()?;
    r.severity.validate_finite()?;
    cfg.points().into_iter().map(|(x, q, b)| formula(&r, &r.severity, x, q, b)).collect()
}

/// Monte Carlo estimates at every query point.
pub fn simulate(cfg: &RunConfig) -> Result<Vec<SimulateRow>, CliError> {
    let r = cfg.resolve()?;
    cfg.points()
        .into_iter()
        .map(|(x, q, b)| {
            let est = simulate_one(&r, &r.sim, x, q, b)?;
            let d = est.discretization;
            Ok(SimulateRow {
                x,
                q,
                b,
                mean: est.mean,
                std_error: est.std_error,
                n_paths: est.n_paths,
                n_bankrupt: est.n_bankrupt,
                n_upcrossed: est.n_upcrossed,
                n_censored: est.n_censored,
                dt: d.map(|d| d.dt),
                coarse_mean: d.map(|d| d.coarse_mean),
                coarse_std_error: d.map(|d| d.coarse_std_error),
                fine_mean: d.map(|d| d.fine_mean),
                fine_std_error: d.map(|d| d.fine_std_error),
            })
        })
        .collect()
}

/// Formula against simulation; the second value is false when any `|z|`
/// exceeds `compare.z_max`.
pub fn compare(cfg: &RunConfig) -> Result<(Vec<CompareRow>, bool), CliError> {
    let r = cfg.resolve()?;
    r.severity.validate_finite()?;
    let mut rows = Vec::new();
    for (x, q, b) in cfg.points() {
        let f = formula(&r, &r.severity, x, q, b)?.value;
        let est = simulate_one(&r, &r.sim, x, q, b + cfg.compare.mc_b_shift)?;
        let diff = f - est.mean;
        let z = if est.std_error > 0.0 {
            diff / est.std_error
        } else if diff == 0.0 {
            0.0
        } else {
            diff.signum() * f64::INFINITY
        };
        rows.push(CompareRow {
            x,
            q,
            b,
            phi_formula: f,
            phi_mc: est.mean,
            mc_stderr: est.std_error,
            z,
            pass: z.abs() <= cfg.compare.z_max,
        });
    }
    let ok = rows.iter().all(|r| r.pass);
    Ok((rows, ok))
}

/// Formula values along one axis.
pub fn sweep(cfg: &RunConfig, axis: Axis) -> Result<Vec<SweepRow>, CliError> {
    let r = cfg.resolve()?;
    let qb = &cfg.query;
    let (x0, q0, b0, s0) = (qb.x[0], qb.q[0], qb.b[0], qb.y_scale[0]);
    let values: &[f64] = match axis {
        Axis::X => &qb.x,
        Axis::Q => &qb.q,
        Axis::B => &qb.b,
        Axis::YScale => &qb.y_scale,
    };
    values
        .iter()
        .map(|&v| {
            let (x, q, b, s) = match axis {
                Axis::X => (v, q0, b0, s0),
                Axis::Q => (x0, v, b0, s0),
                Axis::B => (x0, q0, v, s0),
                Axis::YScale => (x0, q0, b0, v),
            };
            let law = if s == 1.0 { r.severity.clone() } else { r.severity.scaled(s)? };
            law.validate_finite()?;
            let row = formula(&r, &law, x, q, b)?;
            Ok(SweepRow {
                axis: axis.name(),
                axis_value: v,
                x,
                q,
                b,
                y_scale: s,
                value: row.value,
                quad_error: row.quad_error,
            })
        })
        .collect()
}
