mod common;

use common::{instance, perturb, random_full_support, random_instance};
use ermrer_core::{log_partition, solve_type1, type1_objective, DiscreteMeasure, EmpiricalRiskProfile};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn gibbs_solution_beats_random_measures() {
    for seed in 0..10u64 {
        let (q, prof) = random_instance(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let lambda = 10f64.powf(rng.gen_range(-1.0..1.0));
        let sol = solve_type1(&q, &prof, lambda).unwrap();
        let best = type1_objective(&sol.measure, &q, &prof, lambda).unwrap();
        for trial in 0..1000 {
            let cand = match trial % 4 {
                0 => random_full_support(&q, &mut rng),
                1 => perturb(&sol.measure, 0.1, &mut rng),
                2 => perturb(&sol.measure, 1e-3, &mut rng),
                _ => {
                    // drop atoms: still in the Type-I domain
                    let w: Vec<f64> = q.weights().iter().map(|_| if rng.gen_bool(0.5) { rng.gen() } else { 0.0 }).collect();
                    match DiscreteMeasure::new(q.support().to_vec(), w) {
                        Ok(m) => m,
                        Err(_) => continue,
                    }
                }
            };
            let obj = type1_objective(&cand, &q, &prof, lambda).unwrap();
            assert!(best <= obj, "seed {seed} trial {trial}: {best} > {obj}");
            if cand.total_variation(&sol.measure) > 1e-9 {
                assert!(best < obj, "seed {seed} trial {trial}: not strict");
            }
        }
    }
}

#[test]
fn objective_at_solution_is_minus_lambda_log_partition() {
    for seed in 0..50u64 {
        let (q, prof) = random_instance(seed);
        for lambda in common::log_grid(1e-2, 1e2, 9) {
            let sol = solve_type1(&q, &prof, lambda).unwrap();
            let obj = type1_objective(&sol.measure, &q, &prof, lambda).unwrap();
            let k = log_partition(&q, &prof, -1.0 / lambda).unwrap();
            assert!((k - sol.log_partition).abs() <= 1e-12 * (1.0 + k.abs()));
            assert!((obj + lambda * k).abs() <= 1e-9, "seed {seed} λ {lambda}: {obj} vs {}", -lambda * k);
        }
    }
}

#[test]
fn log_partition_is_convex() {
    for seed in 0..20u64 {
        let (q, prof) = random_instance(seed);
        let ts: Vec<f64> = (0..41).map(|i| -10.0 + 0.5 * i as f64).collect();
        for w in ts.windows(3) {
            let k0 = log_partition(&q, &prof, w[0]).unwrap();
            let k1 = log_partition(&q, &prof, w[1]).unwrap();
            let k2 = log_partition(&q, &prof, w[2]).unwrap();
            assert!(k1 <= 0.5 * (k0 + k2) + 1e-10);
        }
    }
}

#[test]
fn argmin_weight_decreases_with_lambda() {
    let (q, prof) = instance(&[0.1, 0.4, 0.2, 0.3], &[0.9, 0.2, 0.5, 1.4]);
    let mut prev = f64::INFINITY;
    for lambda in common::log_grid(1e-3, 1e3, 60) {
        let w = solve_type1(&q, &prof, lambda).unwrap().measure.weights()[1];
        assert!(w <= prev + 1e-15, "λ = {lambda}");
        prev = w;
    }
}

#[test]
fn shifting_risks_leaves_solution_unchanged() {
    for seed in 0..30u64 {
        let (q, prof) = random_instance(seed);
        let shifted: Vec<f64> = prof.risks().iter().map(|r| r + 3.25).collect();
        let sp = EmpiricalRiskProfile::from_risks(prof.points().to_vec(), shifted).unwrap();
        for lambda in [0.05, 1.0, 20.0] {
            let a = solve_type1(&q, &prof, lambda).unwrap();
            let b = solve_type1(&q, &sp, lambda).unwrap();
            for (x, y) in a.measure.weights().iter().zip(b.measure.weights()) {
                assert!((x - y).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn gibbs_support_equals_reference_support() {
    for seed in 0..30u64 {
        let (q, prof) = random_instance(seed);
        let sol = solve_type1(&q, &prof, 0.5).unwrap();
        assert!(sol.measure.same_support(&q));
    }
}
