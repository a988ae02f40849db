//! λ sweeps over both regularizations and their CSV / JSON reports.

use std::path::Path;

use ermrer_core::{
    expected_risk, expected_risk_identity, kl_divergence, risk_bound_check, solve_type1, solve_type2,
    verify_theorem2,
};
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{ExpError, Result};
use crate::instance::Instance;

pub const CSV_HEADER: &str = "lambda,k_type1,k_bar_type2,risk_type1,risk_type2,identity_gap,bound_margin,\
kl_p_q_type1,kl_q_p_type2,theorem2_gap,iterations,residual,status";

/// Per-row tolerances checked by the report flags.
pub const IDENTITY_TOL: f64 = 1e-9;
pub const THEOREM2_TOL: f64 = 1e-9;
pub const RESIDUAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metrics {
    /// `K(−1/λ)`, the Type-I log-partition.
    pub k_type1: f64,
    pub k_bar_type2: f64,
    pub risk_type1: f64,
    pub risk_type2: f64,
    pub identity_gap: f64,
    pub bound_margin: f64,
    pub kl_p_q_type1: f64,
    pub kl_q_p_type2: f64,
    pub theorem2_gap: f64,
    pub iterations: usize,
    pub residual: f64,
    /// Type-I and Type-II supports both equal the reference support.
    pub support_collapse: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub lambda: f64,
    /// `Err(kind)` rows keep the sweep going.
    pub outcome: std::result::Result<Metrics, String>,
}

impl SweepRecord {
    pub fn status(&self) -> String {
        match &self.outcome {
            Ok(_) => "ok".into(),
            Err(kind) => format!("error:{kind}"),
        }
    }

    pub fn metrics(&self) -> Option<&Metrics> {
        self.outcome.as_ref().ok()
    }
}

fn solve_row(inst: &Instance, lambda: f64) -> ermrer_core::Result<Metrics> {
    let (q, prof) = (&inst.reference, &inst.profile);
    let t1 = solve_type1(q, prof, lambda)?;
    let t2 = solve_type2(q, prof, lambda)?;
    let (lhs, rhs) = expected_risk_identity(&t2, prof)?;
    let bound = risk_bound_check(&t2, prof)?;
    let check = verify_theorem2(q, prof, lambda)?;
    Ok(Metrics {
        k_type1: t1.log_partition,
        k_bar_type2: t2.k_bar,
        risk_type1: expected_risk(&t1.measure, prof)?,
        risk_type2: lhs,
        identity_gap: (lhs - rhs).abs(),
        bound_margin: bound.margin,
        kl_p_q_type1: kl_divergence(&t1.measure, q),
        kl_q_p_type2: kl_divergence(q, &t2.measure),
        theorem2_gap: check.max_abs_weight_gap,
        iterations: t2.iterations,
        residual: t2.residual,
        support_collapse: t1.measure.same_support(q) && t2.measure.same_support(q),
    })
}

/// One record per λ of the config grid, in ascending λ order.
pub fn run_sweep(cfg: &ExperimentConfig, inst: &Instance) -> Vec<SweepRecord> {
    cfg.lambda_grid()
        .into_iter()
        .map(|lambda| SweepRecord { lambda, outcome: solve_row(inst, lambda).map_err(|e| e.kind().to_string()) })
        .collect()
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn render_csv(records: &[SweepRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let fields: Vec<String> = match &r.outcome {
            Ok(m) => vec![
                num(r.lambda),
                num(m.k_type1),
                num(m.k_bar_type2),
                num(m.risk_type1),
                num(m.risk_type2),
                num(m.identity_gap),
                num(m.bound_margin),
                num(m.kl_p_q_type1),
                num(m.kl_q_p_type2),
                num(m.theorem2_gap),
                m.iterations.to_string(),
                num(m.residual),
                r.status(),
            ],
            Err(_) => {
                let mut f = vec![num(r.lambda)];
                f.extend(std::iter::repeat_n(String::new(), 11));
                f.push(r.status());
                f
            }
        };
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn emit_csv(records: &[SweepRecord], path: &Path) -> Result<()> {
    std::fs::write(path, render_csv(records)).map_err(|e| ExpError::io(path, e))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantFlags {
    pub all_rows_ok: bool,
    pub identity: bool,
    pub bound: bool,
    pub theorem2: bool,
    pub residual: bool,
    pub k_bar_increasing: bool,
    pub support_collapse: bool,
    pub erm_outside_reference: bool,
}

impl InvariantFlags {
    pub fn evaluate(records: &[SweepRecord], inst: &Instance) -> Self {
        let ok: Vec<&Metrics> = records.iter().filter_map(SweepRecord::metrics).collect();
        let k_bars: Vec<f64> = ok.iter().map(|m| m.k_bar_type2).collect();
        InvariantFlags {
            all_rows_ok: ok.len() == records.len(),
            identity: ok.iter().all(|m| m.identity_gap <= IDENTITY_TOL),
            bound: ok.iter().all(|m| m.bound_margin > 0.0),
            theorem2: ok.iter().all(|m| m.theorem2_gap <= THEOREM2_TOL),
            residual: ok.iter().all(|m| m.residual <= RESIDUAL_TOL),
            k_bar_increasing: k_bars.windows(2).all(|w| w[1] > w[0]),
            support_collapse: ok.iter().all(|m| m.support_collapse),
            erm_outside_reference: inst.erm_outside_reference(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary<'a> {
    pub config: &'a ExperimentConfig,
    pub instance_digest: String,
    pub grid_size: usize,
    pub reference_support_size: usize,
    pub rows: usize,
    pub flags: InvariantFlags,
}

pub fn summary<'a>(cfg: &'a ExperimentConfig, inst: &Instance, records: &[SweepRecord]) -> Summary<'a> {
    Summary {
        config: cfg,
        instance_digest: inst.digest(),
        grid_size: inst.grid.len(),
        reference_support_size: inst.reference.len(),
        rows: records.len(),
        flags: InvariantFlags::evaluate(records, inst),
    }
}

pub fn render_json(summary: &Summary<'_>) -> String {
    let mut s = serde_json::to_string_pretty(summary).expect("summary serializes");
    s.push('\n');
    s
}
