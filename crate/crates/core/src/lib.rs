//! Empirical risk minimization with relative-entropy regularization.
//!
//! Two regularization directions are supported over finite model sets:
//!
//! - Type-I, `R(P) + λ·D(P‖Q)`, solved by the Gibbs measure
//!   `dP/dQ(θ) = exp(−K(−1/λ) − L(θ)/λ)` ([`gibbs`]).
//! - Type-II, `R(P) + λ·D(Q‖P)`, solved by
//!   `dP̄/dQ(θ) = λ / (K̄(λ) + L(θ))` where `K̄(λ)` is the root of a
//!   strictly decreasing normalization function ([`type2`]).
//!
//! [`equivalence`] connects the two: the Type-I problem with unit factor on
//! the log risk `V(θ) = log(K̄(λ) + L(θ))` reproduces the Type-II solution.

pub mod equivalence;
pub mod error;
pub mod gibbs;
pub mod measure;
pub mod numeric;
pub mod risk;
pub mod type2;

pub use equivalence::{expected_log_risk, log_risk_profile, verify_theorem2, LogRiskProfile, EquivalenceCheck};
pub use error::{Error, Result};
pub use gibbs::{log_partition, solve_type1, type1_objective, GibbsSolution};
pub use measure::{check_abs_continuity, expectation, kl_divergence, sample, sample_indices, AbsoluteContinuity, DiscreteMeasure, ModelPoint};
pub use risk::{
    empirical_risk, erm_minimizers, expected_risk, level_set, risk_profile, Dataset, EmpiricalRiskProfile, LossKind,
    PredictorKind, PredictorSpec,
};
pub use type2::{
    expected_risk_identity, normalization_value, risk_bound_check, solve_k_bar, solve_k_bar_with_tol, solve_type2,
    support_escape_penalty, type2_objective, EscapeReport, KBarRoot, RiskBound, TypeIISolution, DEFAULT_TOL,
};
