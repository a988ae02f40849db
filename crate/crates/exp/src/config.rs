//! Experiment configuration: one flat JSON object, unknown keys rejected.

use std::path::{Path, PathBuf};

use ermrer_core::{LossKind, PredictorKind};
use serde::{Deserialize, Serialize};

use crate::error::{ExpError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Predictor {
    LinearRegression,
    LinearThresholdClassifier,
}

impl From<Predictor> for PredictorKind {
    fn from(p: Predictor) -> Self {
        match p {
            Predictor::LinearRegression => PredictorKind::LinearRegression,
            Predictor::LinearThresholdClassifier => PredictorKind::LinearThresholdClassifier,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Loss {
    Squared,
    Absolute,
    ZeroOne,
}

impl From<Loss> for LossKind {
    fn from(l: Loss) -> Self {
        match l {
            Loss::Squared => LossKind::Squared,
            Loss::Absolute => LossKind::Absolute,
            Loss::ZeroOne => LossKind::ZeroOne,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reference {
    /// Uniform over the whole grid.
    Uniform,
    /// Weights ∝ exp(−‖θ − mean‖² / (2·scale²)).
    Gaussian,
    /// Uniform over the grid points inside `[box_min, box_max]`.
    Restricted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DatasetSource {
    Synthetic,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub predictor: Predictor,
    #[serde(default)]
    pub intercept: bool,
    pub loss: Loss,

    /// Model dimension d.
    pub dimension: usize,
    pub grid_min: Vec<f64>,
    pub grid_max: Vec<f64>,
    pub grid_resolution: Vec<usize>,

    pub reference: Reference,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_mean: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_scale: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_box_min: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_box_max: Option<Vec<f64>>,

    pub dataset: DatasetSource,
    /// CSV path, relative to the config file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dataset_path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub true_model: Option<Vec<f64>>,
    /// Half-width of the uniform label noise (regression) or the label-flip
    /// probability (classification).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,

    pub lambda_min: f64,
    pub lambda_max: f64,
    pub lambda_count: usize,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_csv: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_json: Option<String>,

    #[serde(default)]
    pub seed: u64,
}

fn finite_vec(field: &str, v: &[f64], len: usize) -> Result<()> {
    if v.len() != len {
        return Err(ExpError::validation(field, format!("expected {len} entries, got {}", v.len())));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(ExpError::validation(field, "entries must be finite"));
    }
    Ok(())
}

fn required<'a, T>(field: &str, v: &'a Option<T>, why: &str) -> Result<&'a T> {
    v.as_ref().ok_or_else(|| ExpError::validation(field, format!("required {why}")))
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads and validates a config file; returns it with the directory that
    /// relative paths resolve against.
    pub fn load(path: &Path) -> Result<(Self, PathBuf)> {
        let text = std::fs::read_to_string(path).map_err(|e| ExpError::io(path, e))?;
        let cfg = Self::from_json(&text)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((cfg, base))
    }

    pub fn pattern_dim(&self) -> usize {
        self.dimension - usize::from(self.intercept)
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.dimension;
        if d == 0 || (self.intercept && d < 2) {
            return Err(ExpError::validation("dimension", "must be ≥ 1, and ≥ 2 with an intercept"));
        }
        finite_vec("grid_min", &self.grid_min, d)?;
        finite_vec("grid_max", &self.grid_max, d)?;
        if self.grid_resolution.len() != d {
            return Err(ExpError::validation("grid_resolution", format!("expected {d} entries")));
        }
        if self.grid_resolution.contains(&0) {
            return Err(ExpError::validation("grid_resolution", "resolutions must be ≥ 1"));
        }
        if self.grid_min.iter().zip(&self.grid_max).any(|(a, b)| a > b) {
            return Err(ExpError::validation("grid_max", "must be ≥ grid_min on every axis"));
        }
        match self.reference {
            Reference::Uniform => {}
            Reference::Gaussian => {
                finite_vec("reference_mean", required("reference_mean", &self.reference_mean, "for gaussian")?, d)?;
                let s = *required("reference_scale", &self.reference_scale, "for gaussian")?;
                if !(s.is_finite() && s > 0.0) {
                    return Err(ExpError::validation("reference_scale", "must be positive"));
                }
            }
            Reference::Restricted => {
                let lo = required("reference_box_min", &self.reference_box_min, "for restricted")?;
                let hi = required("reference_box_max", &self.reference_box_max, "for restricted")?;
                finite_vec("reference_box_min", lo, d)?;
                finite_vec("reference_box_max", hi, d)?;
            }
        }
        match self.dataset {
            DatasetSource::Csv => {
                required("dataset_path", &self.dataset_path, "for csv datasets")?;
            }
            DatasetSource::Synthetic => {
                finite_vec("true_model", required("true_model", &self.true_model, "for synthetic data")?, d)?;
                let n = *required("n", &self.n, "for synthetic data")?;
                if n == 0 {
                    return Err(ExpError::validation("n", "must be ≥ 1"));
                }
                let noise = *required("noise", &self.noise, "for synthetic data")?;
                if !(noise.is_finite() && noise >= 0.0) {
                    return Err(ExpError::validation("noise", "must be finite and ≥ 0"));
                }
                if self.predictor == Predictor::LinearThresholdClassifier && noise > 1.0 {
                    return Err(ExpError::validation("noise", "flip probability must be ≤ 1"));
                }
            }
        }
        if !(self.lambda_min.is_finite() && self.lambda_min > 0.0) {
            return Err(ExpError::validation("lambda_min", "must be positive"));
        }
        if !(self.lambda_max.is_finite() && self.lambda_max >= self.lambda_min) {
            return Err(ExpError::validation("lambda_max", "must be finite and ≥ lambda_min"));
        }
        if self.lambda_count == 0 {
            return Err(ExpError::validation("lambda_count", "must be ≥ 1"));
        }
        Ok(())
    }

    /// Log-spaced λ values, ascending.
    pub fn lambda_grid(&self) -> Vec<f64> {
        if self.lambda_count == 1 {
            return vec![self.lambda_min];
        }
        let (a, b) = (self.lambda_min.ln(), self.lambda_max.ln());
        let last = self.lambda_count - 1;
        (0..self.lambda_count)
            .map(|i| match i {
                0 => self.lambda_min,
                i if i == last => self.lambda_max,
                i => (a + (b - a) * i as f64 / last as f64).exp(),
            })
            .collect()
    }
}
