//! Builds the model grid, reference measure and dataset described by a config.

use std::path::Path;

use ermrer_core::{
    risk_profile, Dataset, DiscreteMeasure, EmpiricalRiskProfile, ModelPoint, PredictorKind, PredictorSpec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::config::{DatasetSource, ExperimentConfig, Reference};
use crate::dataset::ingest_csv_dataset;
use crate::error::{ExpError, Result};

#[derive(Debug, Clone)]
pub struct Instance {
    pub grid: Vec<ModelPoint>,
    pub reference: DiscreteMeasure,
    pub data: Dataset,
    pub predictor: PredictorSpec,
    /// Risks over the support of the reference.
    pub profile: EmpiricalRiskProfile,
    /// Risks over the whole grid.
    pub grid_profile: EmpiricalRiskProfile,
}

impl Instance {
    /// Grid points that minimize the empirical risk over the whole grid.
    pub fn grid_minimizers(&self) -> Vec<&ModelPoint> {
        self.grid_profile.argmin_set().iter().map(|&i| &self.grid_profile.points()[i]).collect()
    }

    /// True when no grid-wide ERM minimizer lies in the reference support.
    pub fn erm_outside_reference(&self) -> bool {
        self.grid_minimizers().iter().all(|p| !self.reference.contains(p))
    }

    /// SHA-256 over grid coordinates, reference atoms and weights, and data.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        let mut put = |v: f64| h.update(v.to_le_bytes());
        for p in &self.grid {
            p.coords().iter().for_each(|&c| put(c));
        }
        for (p, w) in self.reference.iter() {
            p.coords().iter().for_each(|&c| put(c));
            put(w);
        }
        for (x, y) in self.data.iter() {
            x.iter().for_each(|&c| put(c));
            put(y);
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Lattice with the first axis varying slowest.
pub fn lattice(min: &[f64], max: &[f64], resolution: &[usize]) -> Vec<ModelPoint> {
    let axes: Vec<Vec<f64>> = min
        .iter()
        .zip(max)
        .zip(resolution)
        .map(|((&a, &b), &r)| {
            if r == 1 {
                vec![a]
            } else {
                (0..r).map(|i| if i + 1 == r { b } else { a + (b - a) * i as f64 / (r - 1) as f64 }).collect()
            }
        })
        .collect();
    let mut points: Vec<Vec<f64>> = vec![vec![]];
    for axis in &axes {
        points = points
            .into_iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    points.into_iter().map(|c| ModelPoint::new(c).expect("finite lattice")).collect()
}

fn reference_measure(cfg: &ExperimentConfig, grid: &[ModelPoint]) -> Result<DiscreteMeasure> {
    let weights: Vec<f64> = match cfg.reference {
        Reference::Uniform => vec![1.0; grid.len()],
        Reference::Gaussian => {
            let mean = cfg.reference_mean.as_deref().unwrap_or_default();
            let scale = cfg.reference_scale.unwrap_or(1.0);
            grid.iter()
                .map(|p| {
                    let d2: f64 = p.coords().iter().zip(mean).map(|(a, m)| (a - m).powi(2)).sum();
                    (-d2 / (2.0 * scale * scale)).exp()
                })
                .collect()
        }
        Reference::Restricted => {
            let lo = cfg.reference_box_min.as_deref().unwrap_or_default();
            let hi = cfg.reference_box_max.as_deref().unwrap_or_default();
            grid.iter()
                .map(|p| {
                    let inside = p.coords().iter().zip(lo.iter().zip(hi)).all(|(c, (a, b))| a <= c && c <= b);
                    if inside {
                        1.0
                    } else {
                        0.0
                    }
                })
                .collect()
        }
    };
    DiscreteMeasure::new(grid.to_vec(), weights).map_err(|e| match e {
        ermrer_core::Error::EmptySupport => ExpError::validation("reference", "no grid point receives positive mass"),
        other => ExpError::InstanceGeneration(other),
    })
}

fn synthetic_dataset(cfg: &ExperimentConfig, pred: &PredictorSpec) -> Result<Dataset> {
    let truth = ModelPoint::new(cfg.true_model.clone().unwrap_or_default()).map_err(ExpError::InstanceGeneration)?;
    let n = cfg.n.unwrap_or(1);
    let noise = cfg.noise.unwrap_or(0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut patterns = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let x: Vec<f64> = (0..pred.pattern_dim).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let clean = pred.predict(&truth, &x);
        let y = match pred.kind {
            PredictorKind::LinearRegression => clean + noise * (2.0 * rng.gen::<f64>() - 1.0),
            PredictorKind::LinearThresholdClassifier => {
                if rng.gen::<f64>() < noise {
                    -clean
                } else {
                    clean
                }
            }
        };
        patterns.push(x);
        labels.push(y);
    }
    Dataset::new(patterns, labels).map_err(ExpError::InstanceGeneration)
}

/// Builds the instance; relative dataset paths resolve against `base_dir`.
pub fn generate_instance(cfg: &ExperimentConfig, base_dir: &Path) -> Result<Instance> {
    cfg.validate()?;
    let predictor = PredictorSpec::new(cfg.predictor.into(), cfg.pattern_dim(), cfg.intercept);
    let grid = lattice(&cfg.grid_min, &cfg.grid_max, &cfg.grid_resolution);
    let reference = reference_measure(cfg, &grid)?;
    let data = match cfg.dataset {
        DatasetSource::Synthetic => synthetic_dataset(cfg, &predictor)?,
        DatasetSource::Csv => {
            let path = base_dir.join(cfg.dataset_path.as_deref().unwrap_or_default());
            ingest_csv_dataset(&path)?
        }
    };
    if data.pattern_dim() != predictor.pattern_dim {
        return Err(ExpError::validation(
            "dimension",
            format!("dataset has {} pattern columns, predictor expects {}", data.pattern_dim(), predictor.pattern_dim),
        ));
    }
    let loss = cfg.loss.into();
    let grid_profile =
        EmpiricalRiskProfile::evaluate(grid.clone(), &data, &predictor, loss).map_err(ExpError::InstanceGeneration)?;
    let profile = risk_profile(&reference, &data, &predictor, loss).map_err(ExpError::InstanceGeneration)?;
    Ok(Instance { grid, reference, data, predictor, profile, grid_profile })
}
