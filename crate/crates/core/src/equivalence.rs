//! Type-I regularization on the log risk `V(θ) = log(K̄(λ) + L(θ))`
//! reproduces the Type-II solution at the same `λ`.
//!
//! From the normalization constraint, `Σ q·exp(−V) = Σ q/(K̄ + L) = 1/λ`, so
//! the Gibbs tilt `q·exp(−V) / Σ q·exp(−V)` equals `q·λ/(K̄ + L)`.

use crate::error::{Error, Result};
use crate::gibbs::{gibbs_on_values, GibbsSolution};
use crate::measure::DiscreteMeasure;
use crate::risk::{expected_risk, EmpiricalRiskProfile};
use crate::type2::{solve_type2, TypeIISolution};

/// Log empirical risk per atom. Values may be negative.
#[derive(Debug, Clone)]
pub struct LogRiskProfile {
    values: EmpiricalRiskProfile,
    pub lambda: f64,
    pub k_bar: f64,
}

impl LogRiskProfile {
    pub fn values(&self) -> &[f64] {
        self.values.risks()
    }

    pub fn points(&self) -> &[crate::measure::ModelPoint] {
        self.values.points()
    }
}

/// `V(θ) = log(K̄(λ) + L(θ))` over the atoms of the Type-II solution.
pub fn log_risk_profile(profile: &EmpiricalRiskProfile, sol: &TypeIISolution) -> Result<LogRiskProfile> {
    let points = sol.measure.support().to_vec();
    let mut values = Vec::with_capacity(points.len());
    for (index, point) in points.iter().enumerate() {
        let risk = profile.risk_of(point).ok_or(Error::SupportMismatch { index })?;
        // K̄ + L = (K̄ + δ*) + (L − δ*)
        let arg = sol.pole_offset + (risk - sol.delta_star);
        if arg.is_nan() || arg <= 0.0 {
            return Err(Error::NonPositiveArgument { index, value: arg });
        }
        values.push(arg.ln());
    }
    Ok(LogRiskProfile { values: EmpiricalRiskProfile::build(points, values)?, lambda: sol.lambda, k_bar: sol.k_bar })
}

/// `Σ p(θ)·V(θ)`.
pub fn expected_log_risk(p: &DiscreteMeasure, vprofile: &LogRiskProfile) -> Result<f64> {
    expected_risk(p, &vprofile.values)
}

/// Outcome of solving the same instance along both routes.
#[derive(Debug, Clone)]
pub struct EquivalenceCheck {
    pub type2: TypeIISolution,
    pub type1_on_log_risk: GibbsSolution,
    pub log_risk: LogRiskProfile,
    pub max_abs_weight_gap: f64,
    /// `log Σ q·exp(−V)`, the Type-I log-partition of `V` at `t = −1`.
    pub log_partition_at_minus_one: f64,
    /// `|log Σ q·exp(−V) + log λ|`; zero when the normalization holds.
    pub normalization_gap: f64,
    /// Whether the sets of maximal-weight atoms coincide.
    pub argmax_agree: bool,
}

impl EquivalenceCheck {
    pub const WEIGHT_TOL: f64 = 1e-9;
    pub const NORMALIZATION_TOL: f64 = 1e-10;

    pub fn passes(&self) -> bool {
        self.max_abs_weight_gap <= Self::WEIGHT_TOL
            && self.normalization_gap <= Self::NORMALIZATION_TOL
            && self.argmax_agree
    }
}

fn argmax_set(weights: &[f64]) -> Vec<usize> {
    let max = weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (0..weights.len()).filter(|&i| weights[i] == max).collect()
}

/// Solves Type-II directly and Type-I with unit factor on `V`, then compares.
pub fn verify_theorem2(q: &DiscreteMeasure, profile: &EmpiricalRiskProfile, lambda: f64) -> Result<EquivalenceCheck> {
    let type2 = solve_type2(q, profile, lambda)?;
    let log_risk = log_risk_profile(profile, &type2)?;
    let v = log_risk.values.risks_on(q)?;
    let type1 = gibbs_on_values(q, &v, 1.0)?;

    let mut gap = 0.0_f64;
    for (atom, w) in type2.measure.iter() {
        gap = gap.max((w - type1.measure.mass_of(atom)).abs());
    }
    for (atom, w) in type1.measure.iter() {
        if !type2.measure.contains(atom) {
            gap = gap.max(w);
        }
    }
    let lp = type1.log_partition;
    let aligned: Vec<f64> = type2.measure.support().iter().map(|a| type1.measure.mass_of(a)).collect();
    let argmax_agree = argmax_set(type2.measure.weights()) == argmax_set(&aligned);
    Ok(EquivalenceCheck {
        normalization_gap: (lp + lambda.ln()).abs(),
        log_partition_at_minus_one: lp,
        max_abs_weight_gap: gap,
        argmax_agree,
        type2,
        type1_on_log_risk: type1,
        log_risk,
    })
}
