//! Type-I regularization: `min_P R(P) + λ·D(P‖Q)` and its Gibbs solution.

use crate::error::{Error, Result};
use crate::measure::{kl_divergence, DiscreteMeasure};
use crate::numeric::{compensated_sum, log_sum_exp};
use crate::risk::{expected_risk, EmpiricalRiskProfile};

/// Gibbs measure `dP/dQ(θ) = exp(−K(−1/λ) − L(θ)/λ)`.
#[derive(Debug, Clone)]
pub struct GibbsSolution {
    pub measure: DiscreteMeasure,
    pub lambda: f64,
    /// `K_{Q,z}(−1/λ)`
    pub log_partition: f64,
    /// Log-density `log dP/dQ` per atom of `Q`, in support order. Finite even
    /// where the weight itself underflows.
    pub log_density: Vec<f64>,
}

pub(crate) fn check_lambda(lambda: f64) -> Result<()> {
    if lambda.is_finite() && lambda > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveLambda(lambda))
    }
}

/// `K_{Q,z}(t) = log Σ q(θ)·exp(t·L(θ))`.
pub fn log_partition(q: &DiscreteMeasure, profile: &EmpiricalRiskProfile, t: f64) -> Result<f64> {
    let risks = profile.risks_on(q)?;
    Ok(log_partition_of_values(q, &risks, t))
}

pub(crate) fn log_partition_of_values(q: &DiscreteMeasure, values: &[f64], t: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    let terms: Vec<f64> = q.weights().iter().zip(values).map(|(w, v)| w.ln() + t * v).collect();
    log_sum_exp(&terms)
}

/// Solves the Type-I problem for a nonnegative risk profile.
pub fn solve_type1(q: &DiscreteMeasure, profile: &EmpiricalRiskProfile, lambda: f64) -> Result<GibbsSolution> {
    check_lambda(lambda)?;
    let risks = profile.risks_on(q)?;
    gibbs_on_values(q, &risks, lambda)
}

/// Gibbs tilt of `q` by an arbitrary real-valued function given per atom.
/// Values may be negative; the public entry point keeps the nonnegative-risk
/// contract.
pub(crate) fn gibbs_on_values(q: &DiscreteMeasure, values: &[f64], lambda: f64) -> Result<GibbsSolution> {
    check_lambda(lambda)?;
    if let Some(index) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteValue { index });
    }
    let floor = values.iter().copied().fold(f64::INFINITY, f64::min);
    // exponents relative to the minimum value; the shift cancels on normalization
    let shifted: Vec<f64> = values.iter().map(|v| -(v - floor) / lambda).collect();
    let terms: Vec<f64> = q.weights().iter().zip(&shifted).map(|(w, s)| w.ln() + s).collect();
    let lse_shifted = log_sum_exp(&terms);
    let log_density: Vec<f64> = shifted.iter().map(|s| s - lse_shifted).collect();
    let weights: Vec<f64> = q.weights().iter().zip(&log_density).map(|(w, l)| w * l.exp()).collect();
    let measure = DiscreteMeasure::new(q.support().to_vec(), weights)?;
    Ok(GibbsSolution { measure, lambda, log_partition: lse_shifted - floor / lambda, log_density })
}

/// `R(P) + λ·D(P‖Q)`; `+inf` unless `P ≪ Q`.
pub fn type1_objective(
    p: &DiscreteMeasure,
    q: &DiscreteMeasure,
    profile: &EmpiricalRiskProfile,
    lambda: f64,
) -> Result<f64> {
    check_lambda(lambda)?;
    let kl = kl_divergence(p, q);
    if kl.is_infinite() {
        return Ok(f64::INFINITY);
    }
    Ok(compensated_sum([expected_risk(p, profile)?, lambda * kl]))
}
