//! Invariant suite run by `ermrer verify`.

use ermrer_core::{
    solve_k_bar, solve_type1, solve_type2, type1_objective, type2_objective, DiscreteMeasure,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::ExperimentConfig;
use crate::instance::Instance;
use crate::sweep::{run_sweep, InvariantFlags};

const PERTURBATIONS: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

fn check(name: &'static str, passed: bool, detail: impl Into<String>) -> Check {
    Check { name, passed, detail: detail.into() }
}

/// `(1−t)·p + t·r` with `r` random on supp(p), `t` log-uniform in `[1e-3, 1]`.
/// Multiplicative noise is too weak here: near a point mass it moves the
/// objective by less than one ulp.
fn perturb(p: &DiscreteMeasure, rng: &mut ChaCha8Rng) -> DiscreteMeasure {
    let t = 10f64.powf(rng.gen_range(-3.0..0.0));
    let r: Vec<f64> = (0..p.len()).map(|_| -rng.gen::<f64>().max(1e-300).ln()).collect();
    let z: f64 = r.iter().sum();
    let w: Vec<f64> = p.weights().iter().zip(&r).map(|(w, r)| (1.0 - t) * w + t * r / z).collect();
    DiscreteMeasure::new(p.support().to_vec(), w).expect("positive weights")
}

pub fn run_checks(cfg: &ExperimentConfig, inst: &Instance) -> Vec<Check> {
    let records = run_sweep(cfg, inst);
    let flags = InvariantFlags::evaluate(&records, inst);
    let failed: Vec<String> = records.iter().filter(|r| r.metrics().is_none()).map(|r| format!("{}", r.lambda)).collect();
    let mut out = vec![
        check("solves", flags.all_rows_ok, format!("{} of {} λ values solved", records.len() - failed.len(), records.len())),
        check("risk_identity", flags.identity, "|R(P̄) − (λ − K̄)| ≤ 1e-9"),
        check("risk_bound", flags.bound, "R(P̄) < λ + δ*"),
        check("log_risk_equivalence", flags.theorem2, "Type-I on log-risk matches Type-II within 1e-9"),
        check("residual", flags.residual, "normalization residual ≤ 1e-12"),
        check("k_bar_increasing", flags.k_bar_increasing, "K̄ strictly increasing in λ"),
        check("support_collapse", flags.support_collapse, "supp of both solutions equals supp Q"),
    ];

    let (q, prof) = (&inst.reference, &inst.profile);
    let delta = prof.delta_star();
    let mut range_ok = true;
    let mut continuity_ok = true;
    let mut opt2_ok = true;
    let mut opt1_ok = true;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for lambda in cfg.lambda_grid() {
        if let Ok(root) = solve_k_bar(q, prof, lambda) {
            let k = root.k_bar;
            range_ok &= k > -delta && k >= lambda - prof.max_risk() - 1e-12 && k <= lambda - delta + 1e-12;
            match solve_k_bar(q, prof, lambda * (1.0 + 1e-6)) {
                Ok(r) => continuity_ok &= (r.k_bar - k).abs() <= 1e-4 * (1.0 + k.abs()),
                Err(_) => continuity_ok = false,
            }
        } else {
            range_ok = false;
        }
        if q.len() > 1 {
            if let Ok(sol) = solve_type2(q, prof, lambda) {
                let best = type2_objective(&sol.measure, q, prof, lambda).unwrap_or(f64::NAN);
                for _ in 0..PERTURBATIONS {
                    let p = perturb(&sol.measure, &mut rng);
                    if p == sol.measure {
                        continue;
                    }
                    opt2_ok &= type2_objective(&p, q, prof, lambda).is_ok_and(|v| v > best);
                }
            }
            if let Ok(sol) = solve_type1(q, prof, lambda) {
                let best = type1_objective(&sol.measure, q, prof, lambda).unwrap_or(f64::NAN);
                for _ in 0..PERTURBATIONS {
                    let p = perturb(&sol.measure, &mut rng);
                    if p == sol.measure {
                        continue;
                    }
                    opt1_ok &= type1_objective(&p, q, prof, lambda).is_ok_and(|v| v > best);
                }
            }
        }
    }
    out.push(check("k_bar_range", range_ok, "−δ* < K̄ and λ − max L ≤ K̄ ≤ λ − δ*"));
    out.push(check("k_bar_continuity", continuity_ok, "|K̄(λ(1+1e-6)) − K̄(λ)| ≤ 1e-4·(1+|K̄|)"));
    out.push(check("type2_optimality", opt2_ok, format!("{PERTURBATIONS} perturbations per λ score higher")));
    out.push(check("type1_optimality", opt1_ok, format!("{PERTURBATIONS} perturbations per λ score higher")));
    out
}
