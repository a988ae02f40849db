mod common;

use common::{instance, log_grid, perturb, random_full_support, random_instance};
use ermrer_core::type2::escape_curve;
use ermrer_core::{
    expected_risk, expected_risk_identity, normalization_value, risk_bound_check, solve_k_bar, solve_type2,
    support_escape_penalty, type2_objective, DiscreteMeasure, EmpiricalRiskProfile, ModelPoint,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Bisection on `3β³ + 6β² − 2` over (0, 1), written independently of the
/// solver: root of `(1/3)(1/β + 1/(β+1) + 1/(β+2)) = 1`.
fn cubic_root_by_bisection() -> f64 {
    let f = |b: f64| 3.0 * b * b * b + 6.0 * b * b - 2.0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn three_atom_cubic_oracle() {
    let (q, prof) = instance(&[1.0, 1.0, 1.0], &[0.0, 1.0, 2.0]);
    let root = solve_k_bar(&q, &prof, 1.0).unwrap();
    let oracle = cubic_root_by_bisection();
    assert!((root.k_bar - oracle).abs() <= 1e-9);
    assert!((root.k_bar - 0.5149).abs() <= 1e-3);
    let sol = solve_type2(&q, &prof, 1.0).unwrap();
    let (lhs, rhs) = expected_risk_identity(&sol, &prof).unwrap();
    assert!((lhs - 0.4851).abs() <= 1e-3 && (rhs - 0.4851).abs() <= 1e-3);
}

#[test]
fn two_atom_instance_identity_and_bound() {
    let (q, prof) = instance(&[1.0, 1.0], &[0.0, 1.0]);
    let sol = solve_type2(&q, &prof, 1.0).unwrap();
    let (lhs, rhs) = expected_risk_identity(&sol, &prof).unwrap();
    assert!((lhs - (1.0 - 0.5f64.sqrt())).abs() <= 1e-12);
    assert!((lhs - rhs).abs() <= 1e-12);
    let b = risk_bound_check(&sol, &prof).unwrap();
    assert!(b.holds && b.bound == 1.0);
}

#[test]
fn large_lambda_approaches_reference() {
    let (q, prof) = instance(&[0.2, 0.3, 0.5], &[0.1, 2.0, 0.7]);
    let sol = solve_type2(&q, &prof, 1e6).unwrap();
    for (a, b) in sol.measure.weights().iter().zip(q.weights()) {
        assert!((a - b).abs() <= 1e-5);
    }
}

#[test]
fn normalization_function_is_strictly_decreasing() {
    for seed in 0..20u64 {
        let (q, prof) = random_instance(seed);
        let pole = -prof.delta_star();
        let mut prev = f64::INFINITY;
        for i in 1..200 {
            let beta = pole + 1e-6 * 1.1f64.powi(i);
            let g = normalization_value(&q, &prof, 0.7, beta).unwrap();
            assert!(g < prev);
            prev = g;
        }
        assert!(normalization_value(&q, &prof, 0.7, 1e12).unwrap() < 1e-11);
    }
}

#[test]
fn root_invariants_on_random_instances() {
    for seed in 0..100u64 {
        let (q, prof) = random_instance(seed);
        let grid = log_grid(1e-3, 1e3, 25);
        let mut prev = f64::NEG_INFINITY;
        for &lambda in &grid {
            let sol = solve_type2(&q, &prof, lambda).unwrap_or_else(|e| panic!("seed {seed} λ {lambda}: {e}"));
            assert!(sol.residual <= 1e-12);
            // strictly above the pole, inside the identity bracket
            assert!(sol.k_bar > -prof.delta_star());
            assert!(sol.k_bar >= lambda - prof.max_risk() - 1e-12 && sol.k_bar <= lambda - prof.delta_star() + 1e-12);
            assert!(sol.k_bar > prev, "seed {seed}: K̄ not increasing at λ {lambda}");
            prev = sol.k_bar;
            let (lhs, rhs) = expected_risk_identity(&sol, &prof).unwrap();
            assert!((lhs - rhs).abs() <= 1e-9);
            assert!(risk_bound_check(&sol, &prof).unwrap().holds);
            assert!(sol.measure.same_support(&q));
            for ((w, qw), d) in sol.measure.weights().iter().zip(q.weights()).zip(sol.shifted_denominators()) {
                assert!((w - qw * lambda / d).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn k_bar_is_lipschitz_under_small_steps() {
    for seed in 0..20u64 {
        let (q, prof) = random_instance(seed);
        for lambda in log_grid(1e-2, 1e2, 7) {
            let k = solve_k_bar(&q, &prof, lambda).unwrap().k_bar;
            let mut prev_gap = f64::INFINITY;
            for h in [1e-2, 1e-3, 1e-4, 1e-5] {
                let k2 = solve_k_bar(&q, &prof, lambda * (1.0 + h)).unwrap().k_bar;
                let gap = (k2 - k).abs();
                // dK̄/dλ = 1/(λ·Σ q/(K̄+L)²·λ/λ) is at most max(1, ...) on these grids
                assert!(gap <= 10.0 * lambda * h + 1e-12, "seed {seed} λ {lambda} h {h}");
                assert!(gap <= prev_gap);
                prev_gap = gap;
            }
        }
    }
}

#[test]
fn type2_solution_beats_random_feasible_measures() {
    for seed in 0..10u64 {
        let (q, prof) = random_instance(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(2000 + seed);
        let lambda = 10f64.powf(rng.gen_range(-1.0..1.0));
        let sol = solve_type2(&q, &prof, lambda).unwrap();
        let best = type2_objective(&sol.measure, &q, &prof, lambda).unwrap();
        for trial in 0..1000 {
            let cand = match trial % 3 {
                0 => random_full_support(&q, &mut rng),
                1 => perturb(&sol.measure, 0.1, &mut rng),
                _ => perturb(&sol.measure, 1e-3, &mut rng),
            };
            let obj = type2_objective(&cand, &q, &prof, lambda).unwrap();
            if cand.total_variation(&sol.measure) > 1e-9 {
                assert!(best < obj, "seed {seed} trial {trial}: {best} vs {obj}");
            }
        }
    }
}

#[test]
fn shifting_risks_moves_k_bar_by_the_shift() {
    for seed in 0..30u64 {
        let (q, prof) = random_instance(seed);
        let c = 0.75;
        let shifted: Vec<f64> = prof.risks().iter().map(|r| r + c).collect();
        let sp = EmpiricalRiskProfile::from_risks(prof.points().to_vec(), shifted).unwrap();
        for lambda in [0.01, 0.3, 5.0] {
            let a = solve_type2(&q, &prof, lambda).unwrap();
            let b = solve_type2(&q, &sp, lambda).unwrap();
            assert!((b.k_bar - (a.k_bar - c)).abs() <= 1e-10);
            for (x, y) in a.measure.weights().iter().zip(b.measure.weights()) {
                assert!((x - y).abs() <= 1e-10);
            }
        }
    }
}

fn misspecified() -> (DiscreteMeasure, EmpiricalRiskProfile, Vec<ModelPoint>) {
    // reference uniform on two atoms with risks (0.5, 1); a third model with
    // risk 0 is outside its support
    let pts = common::points(3);
    let q = DiscreteMeasure::uniform(pts[..2].to_vec()).unwrap();
    let prof = EmpiricalRiskProfile::from_risks(pts.clone(), vec![0.5, 1.0, 0.0]).unwrap();
    (q, prof, vec![pts[2].clone()])
}

#[test]
fn support_collapses_onto_reference() {
    let (q, prof, _) = misspecified();
    assert_eq!(prof.argmin_set(), &[2]);
    for lambda in log_grid(1e-3, 1e3, 13) {
        let sol = solve_type2(&q, &prof, lambda).unwrap();
        assert!(sol.measure.same_support(&q));
        assert_eq!(sol.delta_star, 0.5);
    }
}

#[test]
fn escaping_mass_is_penalized_at_unit_lambda() {
    let (q, prof, outside) = misspecified();
    let report = support_escape_penalty(&q, &prof, 1.0, &outside).unwrap();
    assert_eq!(report.alphas.len(), 1000);
    assert!(report.escaped_objectives.iter().all(|&o| o > report.optimal_objective));
    assert!(report.penalty_holds());
    // K̄(1) = (√5 − 1)/4 for this instance
    assert!((report.slope_at_zero - (5f64.sqrt() - 1.0) / 4.0).abs() < 1e-12);
}

#[test]
fn escape_curve_approaches_optimum_from_above() {
    let (q, prof, outside) = misspecified();
    let alphas: Vec<f64> = (1..=8).map(|k| 10f64.powi(-k)).collect();
    let report = escape_curve(&q, &prof, 1.0, &outside, &alphas).unwrap();
    let mut prev = f64::INFINITY;
    for (a, o) in alphas.iter().zip(&report.escaped_objectives) {
        let excess = o - report.optimal_objective;
        assert!(excess > 0.0, "α = {a}");
        assert!(excess < prev);
        // first-order slope K̄ + L(out)
        assert!((excess / a - report.slope_at_zero).abs() <= 2.0 * a + 1e-6, "α = {a}");
        prev = excess;
    }
    let zero = escape_curve(&q, &prof, 1.0, &outside, &[0.0]).unwrap();
    let sol = solve_type2(&q, &prof, 1.0).unwrap();
    let inside = type2_objective(&sol.measure, &q, &prof, 1.0).unwrap();
    assert_eq!(zero.escaped_objectives[0], inside);
}

#[test]
fn escaping_mass_pays_off_when_k_bar_is_below_minus_outside_risk() {
    // With λ = 0.1, K̄ ≈ −0.445 so the slope K̄ + 0 is negative: moving a
    // little mass onto the zero-risk model lowers the Type-II objective.
    let (q, prof, outside) = misspecified();
    let report = support_escape_penalty(&q, &prof, 0.1, &outside).unwrap();
    assert!(report.slope_at_zero < 0.0);
    assert!(!report.penalty_holds());
    let sol = solve_type2(&q, &prof, 0.1).unwrap();
    let mut support = q.support().to_vec();
    support.extend(outside.iter().cloned());
    let w: Vec<f64> = sol.measure.weights().iter().map(|w| 0.99 * w).chain([0.01]).collect();
    let mixture = DiscreteMeasure::new(support, w).unwrap();
    let escaped = type2_objective(&mixture, &q, &prof, 0.1).unwrap();
    let optimal = type2_objective(&sol.measure, &q, &prof, 0.1).unwrap();
    assert!(escaped < optimal);
    assert!(expected_risk(&mixture, &prof).unwrap() < expected_risk(&sol.measure, &prof).unwrap());
}
