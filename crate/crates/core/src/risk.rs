//! Datasets, predictors, losses and empirical risk over model sets.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::measure::{DiscreteMeasure, ModelPoint};
use crate::numeric::compensated_sum;

/// Labeled patterns `(x_i, y_i)`, `i = 1..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    patterns: Vec<Vec<f64>>,
    labels: Vec<f64>,
}

impl Dataset {
    pub fn new(patterns: Vec<Vec<f64>>, labels: Vec<f64>) -> Result<Self> {
        if patterns.is_empty() || patterns.len() != labels.len() {
            return Err(Error::InvalidDataset);
        }
        let dim = patterns[0].len();
        for x in &patterns {
            if x.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: x.len() });
            }
            if x.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidDataset);
            }
        }
        if labels.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset);
        }
        Ok(Self { patterns, labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn pattern_dim(&self) -> usize {
        self.patterns[0].len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> {
        self.patterns.iter().map(Vec::as_slice).zip(self.labels.iter().copied())
    }

    pub fn patterns(&self) -> &[Vec<f64>] {
        &self.patterns
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredictorKind {
    /// `f(θ, x) = θᵀx`
    LinearRegression,
    /// `f(θ, x) = sign(θᵀx)` in {−1, +1}; `θᵀx = 0` predicts +1.
    LinearThresholdClassifier,
}

/// A predictor family. With `intercept`, the last model coordinate is a bias
/// term and the model dimension is `pattern_dim + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PredictorSpec {
    pub kind: PredictorKind,
    pub pattern_dim: usize,
    pub intercept: bool,
}

impl PredictorSpec {
    pub fn new(kind: PredictorKind, pattern_dim: usize, intercept: bool) -> Self {
        Self { kind, pattern_dim, intercept }
    }

    pub fn model_dim(&self) -> usize {
        self.pattern_dim + usize::from(self.intercept)
    }

    pub fn predict(&self, model: &ModelPoint, x: &[f64]) -> f64 {
        let theta = model.coords();
        let mut score = compensated_sum(theta.iter().zip(x).map(|(a, b)| a * b));
        if self.intercept {
            score += theta[self.pattern_dim];
        }
        match self.kind {
            PredictorKind::LinearRegression => score,
            PredictorKind::LinearThresholdClassifier => {
                if score >= 0.0 {
                    1.0
                } else {
                    -1.0
                }
            }
        }
    }
}

/// Loss `ℓ(ŷ, y)`; every kind is nonnegative with `ℓ(y, y) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LossKind {
    Squared,
    Absolute,
    ZeroOne,
}

impl LossKind {
    pub fn eval(&self, predicted: f64, label: f64) -> f64 {
        match self {
            LossKind::Squared => (predicted - label).powi(2),
            LossKind::Absolute => (predicted - label).abs(),
            LossKind::ZeroOne => {
                if predicted == label {
                    0.0
                } else {
                    1.0
                }
            }
        }
    }
}

/// `L_z(θ) = (1/n) Σ ℓ(f(θ, x_i), y_i)`.
pub fn empirical_risk(model: &ModelPoint, data: &Dataset, pred: &PredictorSpec, loss: LossKind) -> Result<f64> {
    if model.dim() != pred.model_dim() {
        return Err(Error::DimensionMismatch { expected: pred.model_dim(), got: model.dim() });
    }
    if data.pattern_dim() != pred.pattern_dim {
        return Err(Error::DimensionMismatch { expected: pred.pattern_dim, got: data.pattern_dim() });
    }
    let total = compensated_sum(data.iter().map(|(x, y)| loss.eval(pred.predict(model, x), y)));
    Ok(total / data.len() as f64)
}

/// Empirical risks attached to a finite set of models, with the minimum
/// level `δ*` and the atoms attaining it.
#[derive(Debug, Clone)]
pub struct EmpiricalRiskProfile {
    points: Vec<ModelPoint>,
    risks: Vec<f64>,
    delta_star: f64,
    argmin_set: Vec<usize>,
    index: HashMap<ModelPoint, usize>,
}

impl EmpiricalRiskProfile {
    /// Wraps precomputed risks. Risks must be finite and nonnegative and the
    /// points pairwise distinct.
    pub fn from_risks(points: Vec<ModelPoint>, risks: Vec<f64>) -> Result<Self> {
        for (index, &value) in risks.iter().enumerate() {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::InvalidRisk { index, value });
            }
        }
        Self::build(points, risks)
    }

    /// No sign check on the values; used for transformed risks that may be negative.
    pub(crate) fn build(points: Vec<ModelPoint>, risks: Vec<f64>) -> Result<Self> {
        if points.len() != risks.len() {
            return Err(Error::LengthMismatch { points: points.len(), weights: risks.len() });
        }
        if points.is_empty() {
            return Err(Error::EmptySupport);
        }
        let mut index = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if index.insert(p.clone(), i).is_some() {
                return Err(Error::DuplicateSupportPoint { index: i });
            }
        }
        let delta_star = risks.iter().copied().fold(f64::INFINITY, f64::min);
        let argmin_set = (0..risks.len()).filter(|&i| risks[i] == delta_star).collect();
        Ok(Self { points, risks, delta_star, argmin_set, index })
    }

    /// Evaluates the empirical risk at every point.
    pub fn evaluate(points: Vec<ModelPoint>, data: &Dataset, pred: &PredictorSpec, loss: LossKind) -> Result<Self> {
        let risks = points
            .iter()
            .map(|p| empirical_risk(p, data, pred, loss))
            .collect::<Result<Vec<_>>>()?;
        Self::build(points, risks)
    }

    pub fn points(&self) -> &[ModelPoint] {
        &self.points
    }

    pub fn risks(&self) -> &[f64] {
        &self.risks
    }

    pub fn delta_star(&self) -> f64 {
        self.delta_star
    }

    pub fn argmin_set(&self) -> &[usize] {
        &self.argmin_set
    }

    pub fn max_risk(&self) -> f64 {
        self.risks.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn risk_of(&self, point: &ModelPoint) -> Option<f64> {
        self.index.get(point).map(|&i| self.risks[i])
    }

    /// Risks aligned with the support of `m`, matched by model identity.
    pub fn risks_on(&self, m: &DiscreteMeasure) -> Result<Vec<f64>> {
        if m.support() == &self.points[..] {
            return Ok(self.risks.clone());
        }
        m.support()
            .iter()
            .enumerate()
            .map(|(index, p)| self.risk_of(p).ok_or(Error::SupportMismatch { index }))
            .collect()
    }

    /// Profile restricted to the support of `m`, in support order.
    pub fn restrict_to(&self, m: &DiscreteMeasure) -> Result<Self> {
        let risks = self.risks_on(m)?;
        Self::build(m.support().to_vec(), risks)
    }
}

/// Profile of the empirical risk over the support of `q`.
pub fn risk_profile(
    q: &DiscreteMeasure,
    data: &Dataset,
    pred: &PredictorSpec,
    loss: LossKind,
) -> Result<EmpiricalRiskProfile> {
    EmpiricalRiskProfile::evaluate(q.support().to_vec(), data, pred, loss)
}

/// Indices with `L(θ) ≤ δ`.
pub fn level_set(profile: &EmpiricalRiskProfile, delta: f64) -> Vec<usize> {
    (0..profile.len()).filter(|&i| profile.risks[i] <= delta).collect()
}

/// `R_z(P) = Σ p(θ)·L(θ)`.
pub fn expected_risk(p: &DiscreteMeasure, profile: &EmpiricalRiskProfile) -> Result<f64> {
    let risks = profile.risks_on(p)?;
    Ok(compensated_sum(p.weights().iter().zip(&risks).map(|(w, r)| w * r)))
}

/// ERM solutions restricted to the profile's points.
pub fn erm_minimizers(profile: &EmpiricalRiskProfile) -> Vec<usize> {
    profile.argmin_set.clone()
}
