#![allow(dead_code)]

use ermrer_core::{DiscreteMeasure, EmpiricalRiskProfile, ModelPoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn points(n: usize) -> Vec<ModelPoint> {
    (0..n).map(|i| ModelPoint::scalar(i as f64).unwrap()).collect()
}

pub fn instance(weights: &[f64], risks: &[f64]) -> (DiscreteMeasure, EmpiricalRiskProfile) {
    let pts = points(risks.len());
    (
        DiscreteMeasure::new(pts.clone(), weights.to_vec()).unwrap(),
        EmpiricalRiskProfile::from_risks(pts, risks.to_vec()).unwrap(),
    )
}

/// Random reference weights spanning a few orders of magnitude and risks in
/// `[0, scale]`, occasionally with tied minima.
pub fn random_instance(seed: u64) -> (DiscreteMeasure, EmpiricalRiskProfile) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=40);
    let scale = [0.1, 1.0, 5.0][rng.gen_range(0..3)];
    let weights: Vec<f64> = (0..n).map(|_| (rng.gen::<f64>() * 6.0 - 3.0).exp()).collect();
    let mut risks: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * scale).collect();
    if rng.gen_bool(0.25) {
        let m = risks.iter().copied().fold(f64::INFINITY, f64::min);
        let j = rng.gen_range(0..n);
        risks[j] = m;
    }
    instance(&weights, &risks)
}

/// Random measure on the support of `q`, every atom positive.
pub fn random_full_support(q: &DiscreteMeasure, rng: &mut ChaCha8Rng) -> DiscreteMeasure {
    let w: Vec<f64> = (0..q.len()).map(|_| -rng.gen::<f64>().max(1e-300).ln()).collect();
    DiscreteMeasure::new(q.support().to_vec(), w).unwrap()
}

/// Multiplicative perturbation of `p` by factors in `[1 − eps, 1 + eps]`.
pub fn perturb(p: &DiscreteMeasure, eps: f64, rng: &mut ChaCha8Rng) -> DiscreteMeasure {
    let w: Vec<f64> = p.weights().iter().map(|w| w * (1.0 + eps * (2.0 * rng.gen::<f64>() - 1.0))).collect();
    DiscreteMeasure::new(p.support().to_vec(), w).unwrap()
}

pub fn log_grid(min: f64, max: f64, count: usize) -> Vec<f64> {
    let (a, b) = (min.ln(), max.ln());
    (0..count).map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp()).collect()
}
