#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

use ermrer_core::{DiscreteMeasure, EmpiricalRiskProfile, ModelPoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn ermrer(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_ermrer")).args(args).output().expect("binary runs")
}

pub fn instance(weights: &[f64], risks: &[f64]) -> (DiscreteMeasure, EmpiricalRiskProfile) {
    let pts: Vec<ModelPoint> = (0..risks.len()).map(|i| ModelPoint::scalar(i as f64).unwrap()).collect();
    (
        DiscreteMeasure::new(pts.clone(), weights.to_vec()).unwrap(),
        EmpiricalRiskProfile::from_risks(pts, risks.to_vec()).unwrap(),
    )
}

/// 2–40 atoms, weights spanning e^±3, risks in `[0, scale]`, some tied minima.
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

pub fn log_grid(min: f64, max: f64, count: usize) -> Vec<f64> {
    let (a, b) = (min.ln(), max.ln());
    (0..count).map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp()).collect()
}

/// Feasible competitor on supp(p): `(1−t)·p + t·r` with `r` random on the
/// same support and `t` log-uniform in `[1e-3, 1]`.
pub fn perturb(p: &DiscreteMeasure, rng: &mut ChaCha8Rng) -> DiscreteMeasure {
    let t = 10f64.powf(rng.gen_range(-3.0..0.0));
    let r: Vec<f64> = (0..p.len()).map(|_| -rng.gen::<f64>().max(1e-300).ln()).collect();
    let z: f64 = r.iter().sum();
    let w: Vec<f64> = p.weights().iter().zip(&r).map(|(w, r)| (1.0 - t) * w + t * r / z).collect();
    DiscreteMeasure::new(p.support().to_vec(), w).unwrap()
}
