//! Probability measures on finite model sets.

use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numeric::compensated_sum;

/// A model θ ∈ ℝ^d. Equality is exact coordinate equality (`-0.0 == 0.0`).
#[derive(Debug, Clone)]
pub struct ModelPoint(Vec<f64>);

impl ModelPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() || coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidModelPoint);
        }
        Ok(Self(coords))
    }

    /// One-dimensional model.
    pub fn scalar(x: f64) -> Result<Self> {
        Self::new(vec![x])
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl PartialEq for ModelPoint {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl Eq for ModelPoint {}

impl Hash for ModelPoint {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for c in &self.0 {
            // folds -0.0 onto 0.0 so Hash agrees with PartialEq
            (c + 0.0).to_bits().hash(state);
        }
    }
}

/// A probability measure with finitely many atoms, all of positive mass.
#[derive(Debug, Clone)]
pub struct DiscreteMeasure {
    support: Vec<ModelPoint>,
    weights: Vec<f64>,
    index: HashMap<ModelPoint, usize>,
}

impl PartialEq for DiscreteMeasure {
    fn eq(&self, other: &Self) -> bool {
        self.support == other.support && self.weights == other.weights
    }
}

impl DiscreteMeasure {
    /// Builds a measure from unnormalized nonnegative weights. Zero-weight
    /// atoms are dropped and the rest renormalized to sum to one.
    pub fn new(support: Vec<ModelPoint>, weights: Vec<f64>) -> Result<Self> {
        if support.len() != weights.len() {
            return Err(Error::LengthMismatch { points: support.len(), weights: weights.len() });
        }
        if support.is_empty() {
            return Err(Error::EmptySupport);
        }
        let dim = support[0].dim();
        for (index, w) in weights.iter().enumerate() {
            if !w.is_finite() {
                return Err(Error::NonFiniteWeight { index });
            }
            if *w < 0.0 {
                return Err(Error::NegativeWeight { index, value: *w });
            }
        }
        let mut seen = HashMap::with_capacity(support.len());
        for (index, p) in support.iter().enumerate() {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: p.dim() });
            }
            if seen.insert(p, index).is_some() {
                return Err(Error::DuplicateSupportPoint { index });
            }
        }
        drop(seen);

        let total = compensated_sum(weights.iter().copied());
        if total <= 0.0 {
            return Err(Error::EmptySupport);
        }
        let (support, weights): (Vec<_>, Vec<_>) = support
            .into_iter()
            .zip(weights)
            .filter(|(_, w)| *w > 0.0)
            .map(|(p, w)| (p, w / total))
            .unzip();
        let index = support.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        Ok(Self { support, weights, index })
    }

    pub fn uniform(support: Vec<ModelPoint>) -> Result<Self> {
        let w = vec![1.0; support.len()];
        Self::new(support, w)
    }

    pub fn point_mass(point: ModelPoint) -> Self {
        Self::new(vec![point], vec![1.0]).expect("single positive atom")
    }

    pub fn support(&self) -> &[ModelPoint] {
        &self.support
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.support[0].dim()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ModelPoint, f64)> {
        self.support.iter().zip(self.weights.iter().copied())
    }

    /// Mass of a point (zero off the support).
    pub fn mass_of(&self, point: &ModelPoint) -> f64 {
        self.index_of(point).map_or(0.0, |i| self.weights[i])
    }

    pub fn index_of(&self, point: &ModelPoint) -> Option<usize> {
        self.index.get(point).copied()
    }

    pub fn contains(&self, point: &ModelPoint) -> bool {
        self.index.contains_key(point)
    }

    /// True when `self` and `other` have the same support set.
    pub fn same_support(&self, other: &DiscreteMeasure) -> bool {
        self.len() == other.len() && self.support.iter().all(|p| other.contains(p))
    }

    /// Total variation distance.
    pub fn total_variation(&self, other: &DiscreteMeasure) -> f64 {
        let own = self.iter().map(|(p, w)| (w - other.mass_of(p)).abs());
        let rest = other.iter().filter(|(p, _)| !self.contains(p)).map(|(_, w)| w);
        0.5 * compensated_sum(own.chain(rest))
    }
}

/// Support-containment relation between two measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AbsoluteContinuity {
    /// P ≪ Q
    pub p_ll_q: bool,
    /// Q ≪ P
    pub q_ll_p: bool,
}

impl AbsoluteContinuity {
    pub fn mutual(&self) -> bool {
        self.p_ll_q && self.q_ll_p
    }
}

pub fn check_abs_continuity(p: &DiscreteMeasure, q: &DiscreteMeasure) -> AbsoluteContinuity {
    AbsoluteContinuity {
        p_ll_q: p.support.iter().all(|a| q.contains(a)),
        q_ll_p: q.support.iter().all(|a| p.contains(a)),
    }
}

/// Relative entropy `D(p‖q)` in nats; `+inf` unless `p ≪ q`.
///
/// Evaluated as `Σ_{supp p} (p·log(p/q) − p + q)` plus the `q`-mass outside
/// `supp p`. Every term is nonnegative, so the result is
/// never negative and stays accurate when `p ≈ q`.
pub fn kl_divergence(p: &DiscreteMeasure, q: &DiscreteMeasure) -> f64 {
    let mut terms = Vec::with_capacity(q.len());
    for (atom, pw) in p.iter() {
        let qw = q.mass_of(atom);
        if qw == 0.0 {
            return f64::INFINITY;
        }
        let ratio = pw / qw;
        let term = if (0.5..=2.0).contains(&ratio) {
            // p·log(p/q) − p + q = q·((1+x)·log(1+x) − x), accurate near p = q
            let x = (pw - qw) / qw;
            qw * ((1.0 + x) * x.ln_1p() - x)
        } else {
            pw * ratio.ln() - pw + qw
        };
        terms.push(term.max(0.0));
    }
    terms.extend(q.iter().filter(|(a, _)| !p.contains(a)).map(|(_, w)| w));
    compensated_sum(terms).max(0.0)
}

/// `count` i.i.d. draws by inverse CDF over the ordered support.
pub fn sample(m: &DiscreteMeasure, count: usize, seed: u64) -> Vec<ModelPoint> {
    sample_indices(m, count, seed).into_iter().map(|i| m.support[i].clone()).collect()
}

/// Like [`sample`] but returns support indices.
pub fn sample_indices(m: &DiscreteMeasure, count: usize, seed: u64) -> Vec<usize> {
    let mut cdf = Vec::with_capacity(m.len());
    let mut acc = 0.0;
    for w in &m.weights {
        acc += w;
        cdf.push(acc);
    }
    let last = m.len() - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let u: f64 = rng.gen();
            cdf.partition_point(|&c| c <= u).min(last)
        })
        .collect()
}

/// `Σ m(θ)·f(θ)` with compensated accumulation.
pub fn expectation<F: FnMut(&ModelPoint) -> f64>(m: &DiscreteMeasure, mut f: F) -> Result<f64> {
    let mut terms = Vec::with_capacity(m.len());
    for (index, (atom, w)) in m.iter().enumerate() {
        let v = f(atom);
        if !v.is_finite() {
            return Err(Error::NonFiniteValue { index });
        }
        terms.push(w * v);
    }
    Ok(compensated_sum(terms))
}
