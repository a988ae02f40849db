//! Type-II regularization: `min_P R(P) + λ·D(Q‖P)` over measures with `Q ≪ P`.
//!
//! The solution has density `dP̄/dQ(θ) = λ / (K̄(λ) + L(θ))`, where `K̄(λ)`
//! is the unique `β > −δ*` with
//!
//! ```text
//! g(β) = Σ_θ q(θ)·λ / (β + L(θ)) = 1.
//! ```
//!
//! `g` is strictly decreasing on `(−δ*, ∞)` and has a pole at `−δ*`. The root
//! is searched in pole-offset coordinates `s = β + δ*` against the shifted
//! risks `L − δ*`, so the atoms attaining `δ*` see the denominator `s` with
//! full relative precision even when the root hugs the pole (small `λ`).
//!
//! Since `Σ q·λ·L/(K̄ + L) = λ − K̄·g(K̄)`, the expected risk of the solution is
//! `λ − K̄(λ)`; with `R ∈ [δ*, max L]` this confines the root to
//! `[λ − max L, λ − δ*]`, which is the initial bracket.

use crate::error::{Error, Result};
use crate::gibbs::check_lambda;
use crate::measure::{check_abs_continuity, kl_divergence, DiscreteMeasure, ModelPoint};
use crate::numeric::compensated_sum;
use crate::risk::{expected_risk, EmpiricalRiskProfile};

/// Default residual tolerance on `|g(K̄) − 1|`.
pub const DEFAULT_TOL: f64 = 1e-13;
const MAX_ITERATIONS: usize = 10_000;
/// Number of interior points in the escape harness' α-grid.
pub const ESCAPE_GRID: usize = 1000;

/// Solved normalization constant with solver diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KBarRoot {
    pub k_bar: f64,
    /// `K̄ + δ*`, the distance of the root from the pole.
    pub pole_offset: f64,
    pub delta_star: f64,
    pub residual: f64,
    pub iterations: usize,
    /// Initial bracket in `β` coordinates.
    pub bracket: (f64, f64),
}

#[derive(Debug, Clone)]
pub struct TypeIISolution {
    pub measure: DiscreteMeasure,
    pub lambda: f64,
    pub k_bar: f64,
    pub pole_offset: f64,
    /// `δ*` over the support of the reference.
    pub delta_star: f64,
    pub residual: f64,
    pub iterations: usize,
    pub bracket: (f64, f64),
    /// `dP̄/dQ` per atom of the reference, in its support order.
    pub density: Vec<f64>,
    /// `L(θ) − δ*` per atom of the reference.
    pub excess_risks: Vec<f64>,
}

impl TypeIISolution {
    /// `K̄ + L(θ)` per atom, formed without cancellation.
    pub fn shifted_denominators(&self) -> Vec<f64> {
        self.excess_risks.iter().map(|e| self.pole_offset + e).collect()
    }
}

/// Reference weights paired with risks measured from `δ*`.
struct Shifted<'a> {
    q: &'a DiscreteMeasure,
    excess: Vec<f64>,
    delta_star: f64,
    max_excess: f64,
}

impl<'a> Shifted<'a> {
    fn new(q: &'a DiscreteMeasure, profile: &EmpiricalRiskProfile) -> Result<Self> {
        let risks = profile.risks_on(q)?;
        let delta_star = risks.iter().copied().fold(f64::INFINITY, f64::min);
        let excess: Vec<f64> = risks.iter().map(|r| r - delta_star).collect();
        let max_excess = excess.iter().copied().fold(0.0, f64::max);
        Ok(Self { q, excess, delta_star, max_excess })
    }

    /// `g` at pole offset `s > 0`.
    fn g(&self, lambda: f64, s: f64) -> f64 {
        compensated_sum(self.q.weights().iter().zip(&self.excess).map(|(w, e)| w * lambda / (s + e)))
    }
}

/// `g(β) = Σ q(θ)·λ/(β + L(θ))` for `β > −δ*`.
pub fn normalization_value(q: &DiscreteMeasure, profile: &EmpiricalRiskProfile, lambda: f64, beta: f64) -> Result<f64> {
    check_lambda(lambda)?;
    let risks = profile.risks_on(q)?;
    let pole = -risks.iter().copied().fold(f64::INFINITY, f64::min);
    if beta.is_nan() || beta <= pole {
        return Err(Error::BetaOutOfDomain { beta, pole });
    }
    Ok(compensated_sum(q.weights().iter().zip(risks).map(|(w, r)| w * lambda / (beta + r))))
}

/// Solves for `K̄(λ)` with the default tolerance.
pub fn solve_k_bar(q: &DiscreteMeasure, profile: &EmpiricalRiskProfile, lambda: f64) -> Result<KBarRoot> {
    solve_k_bar_with_tol(q, profile, lambda, DEFAULT_TOL)
}

pub fn solve_k_bar_with_tol(
    q: &DiscreteMeasure,
    profile: &EmpiricalRiskProfile,
    lambda: f64,
    tol: f64,
) -> Result<KBarRoot> {
    check_lambda(lambda)?;
    let sh = Shifted::new(q, profile)?;
    root_shifted(&sh, lambda, tol)
}

fn root_shifted(sh: &Shifted<'_>, lambda: f64, tol: f64) -> Result<KBarRoot> {
    let delta_star = sh.delta_star;
    let to_beta = |s: f64| s - delta_star;

    if sh.max_excess == 0.0 {
        // g(β) = λ/(β + c)
        let k_bar = lambda - delta_star;
        return Ok(KBarRoot {
            k_bar,
            pole_offset: lambda,
            delta_star,
            residual: (sh.g(lambda, lambda) - 1.0).abs(),
            iterations: 0,
            bracket: (k_bar, k_bar),
        });
    }

    let eps0 = (-40f64).exp2() * (1.0 + delta_star);
    let mut a = eps0.max(lambda - sh.max_excess);
    let mut b = lambda;
    let bracket = (to_beta(a), to_beta(b));
    let ga = sh.g(lambda, a);
    let gb = sh.g(lambda, b);
    let done = |s: f64, g: f64, iterations: usize| KBarRoot {
        k_bar: to_beta(s),
        pole_offset: s,
        delta_star,
        residual: (g - 1.0).abs(),
        iterations,
        bracket,
    };
    if (ga - 1.0).abs() <= tol {
        return Ok(done(a, ga, 0));
    }
    if (gb - 1.0).abs() <= tol {
        return Ok(done(b, gb, 0));
    }
    if !(ga > 1.0 && gb < 1.0) {
        return Err(Error::BracketFailure { lo: bracket.0, hi: bracket.1, g_lo: ga, g_hi: gb });
    }

    // Illinois regula falsi on φ(s) = 1/g(s) − 1, increasing in s and
    // linear for a single atom; bisection when the bracket stalls.
    let phi = |g: f64| 1.0 / g - 1.0;
    let mut fa = phi(ga);
    let mut fb = phi(gb);
    let mut best = if (ga - 1.0).abs() < (gb - 1.0).abs() { (a, ga) } else { (b, gb) };
    let mut last_side = 0i8;
    let mut widths = [b - a; 3];
    let mut performed = 0;
    for iteration in 1..=MAX_ITERATIONS {
        performed = iteration;
        let stalled = (b - a) > 0.5 * widths[0];
        let mut c = (a * fb - b * fa) / (fb - fa);
        if stalled || !(c > a && c < b) {
            c = a + 0.5 * (b - a);
        }
        if !(c > a && c < b) {
            // a and b are adjacent doubles
            break;
        }
        let gc = sh.g(lambda, c);
        if (gc - 1.0).abs() < (best.1 - 1.0).abs() {
            best = (c, gc);
        }
        if (gc - 1.0).abs() <= tol {
            return Ok(done(c, gc, iteration));
        }
        let fc = phi(gc);
        if fc < 0.0 {
            a = c;
            fa = fc;
            if last_side == -1 {
                fb *= 0.5;
            }
            last_side = -1;
        } else {
            b = c;
            fb = fc;
            if last_side == 1 {
                fa *= 0.5;
            }
            last_side = 1;
        }
        widths = [widths[1], widths[2], b - a];
        if stalled {
            widths = [b - a; 3];
        }
    }
    let residual = (best.1 - 1.0).abs();
    Err(Error::ToleranceNotReached { tol, iterations: performed, residual })
}

/// Solves the Type-II problem.
pub fn solve_type2(q: &DiscreteMeasure, profile: &EmpiricalRiskProfile, lambda: f64) -> Result<TypeIISolution> {
    check_lambda(lambda)?;
    let sh = Shifted::new(q, profile)?;
    let root = root_shifted(&sh, lambda, DEFAULT_TOL)?;
    let density: Vec<f64> = sh.excess.iter().map(|e| lambda / (root.pole_offset + e)).collect();
    let weights: Vec<f64> = q.weights().iter().zip(&density).map(|(w, d)| w * d).collect();
    let measure = DiscreteMeasure::new(q.support().to_vec(), weights)?;
    Ok(TypeIISolution {
        measure,
        lambda,
        k_bar: root.k_bar,
        pole_offset: root.pole_offset,
        delta_star: root.delta_star,
        residual: root.residual,
        iterations: root.iterations,
        bracket: root.bracket,
        density,
        excess_risks: sh.excess,
    })
}

/// `R(P) + λ·D(Q‖P)`; `+inf` unless `Q ≪ P`.
pub fn type2_objective(
    p: &DiscreteMeasure,
    q: &DiscreteMeasure,
    profile: &EmpiricalRiskProfile,
    lambda: f64,
) -> Result<f64> {
    check_lambda(lambda)?;
    if !check_abs_continuity(p, q).q_ll_p {
        return Ok(f64::INFINITY);
    }
    Ok(compensated_sum([expected_risk(p, profile)?, lambda * kl_divergence(q, p)]))
}

/// Both sides of `R(P̄) = λ − K̄(λ)`.
pub fn expected_risk_identity(sol: &TypeIISolution, profile: &EmpiricalRiskProfile) -> Result<(f64, f64)> {
    let lhs = expected_risk(&sol.measure, profile)?;
    // λ − K̄ = (λ − s) + δ*
    let rhs = (sol.lambda - sol.pole_offset) + sol.delta_star;
    Ok((lhs, rhs))
}

/// Expected risk of the solution against the bound `λ + δ*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskBound {
    pub risk: f64,
    pub bound: f64,
    pub margin: f64,
    pub holds: bool,
}

pub fn risk_bound_check(sol: &TypeIISolution, profile: &EmpiricalRiskProfile) -> Result<RiskBound> {
    let risk = expected_risk(&sol.measure, profile)?;
    let bound = sol.lambda + sol.delta_star;
    Ok(RiskBound { risk, bound, margin: bound - risk, holds: risk < bound })
}

/// Type-II objective along mixtures that move mass off the reference support.
#[derive(Debug, Clone)]
pub struct EscapeReport {
    pub alphas: Vec<f64>,
    /// Smallest objective found at each α over the tried placements.
    pub escaped_objectives: Vec<f64>,
    pub best_escaped_objective: f64,
    pub optimal_objective: f64,
    /// `K̄(λ) + min L(outside)`: the derivative of the best escaped objective
    /// at α = 0. Escaping lowers the objective when this is negative.
    pub slope_at_zero: f64,
}

impl EscapeReport {
    pub fn penalty_holds(&self) -> bool {
        self.best_escaped_objective > self.optimal_objective
    }
}

/// Searches mixtures `(1−α)·P′ + α·E` with `E` on `outside` atoms, on the
/// α-grid `k/(N+1)`, `k = 1..N` with `N = ESCAPE_GRID`.
pub fn support_escape_penalty(
    q: &DiscreteMeasure,
    profile_ext: &EmpiricalRiskProfile,
    lambda: f64,
    outside: &[ModelPoint],
) -> Result<EscapeReport> {
    let n = ESCAPE_GRID;
    let alphas: Vec<f64> = (1..=n).map(|k| k as f64 / (n + 1) as f64).collect();
    escape_curve(q, profile_ext, lambda, outside, &alphas)
}

/// Escape harness over caller-chosen mixture weights in `[0, 1)`.
///
/// Placements tried for `E`: each outside atom alone and the uniform spread.
/// Candidates for `P′`: the Type-II solution at `λ` and at `λ/(1−α)`; the
/// latter is the optimal `P′` for fixed `α` and `E`.
pub fn escape_curve(
    q: &DiscreteMeasure,
    profile_ext: &EmpiricalRiskProfile,
    lambda: f64,
    outside: &[ModelPoint],
    alphas: &[f64],
) -> Result<EscapeReport> {
    check_lambda(lambda)?;
    for (index, atom) in outside.iter().enumerate() {
        if q.contains(atom) {
            return Err(Error::AtomCollision { index });
        }
        if profile_ext.risk_of(atom).is_none() {
            return Err(Error::SupportMismatch { index });
        }
    }
    let base = solve_type2(q, profile_ext, lambda)?;
    let optimal_objective = type2_objective(&base.measure, q, profile_ext, lambda)?;
    let min_outside = outside
        .iter()
        .filter_map(|a| profile_ext.risk_of(a))
        .fold(f64::INFINITY, f64::min);

    let mut placements: Vec<Vec<f64>> = (0..outside.len())
        .map(|i| (0..outside.len()).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    if outside.len() > 1 {
        placements.push(vec![1.0 / outside.len() as f64; outside.len()]);
    }

    let mut escaped_objectives = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let mut candidates = vec![base.measure.clone()];
        if alpha > 0.0 {
            candidates.push(solve_type2(q, profile_ext, lambda / (1.0 - alpha))?.measure);
        }
        let mut best = f64::INFINITY;
        for inside in &candidates {
            for placement in &placements {
                let mut support = inside.support().to_vec();
                support.extend(outside.iter().cloned());
                let mut weights: Vec<f64> = inside.weights().iter().map(|w| (1.0 - alpha) * w).collect();
                weights.extend(placement.iter().map(|e| alpha * e));
                let mixture = DiscreteMeasure::new(support, weights)?;
                best = best.min(type2_objective(&mixture, q, profile_ext, lambda)?);
            }
        }
        escaped_objectives.push(best);
    }
    let best_escaped_objective = escaped_objectives.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(EscapeReport {
        alphas: alphas.to_vec(),
        escaped_objectives,
        best_escaped_objective,
        optimal_objective,
        slope_at_zero: base.k_bar + min_outside,
    })
}
