//! Class-conditional densities, priors and labelled-case sampling.
//!
//! A [`Mixture`] is the generative environment: a future case first draws its
//! class from the priors and then its evidence from that class's density.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{self, Stream};

const PRIOR_SUM_TOL: f64 = 1e-12;

/// Zero-based class index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LabelId(pub usize);

impl LabelId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for LabelId {
    /// Classes print one-based, as `A1`, `A2`, ...
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A{}", self.0 + 1)
    }
}

/// Class-conditional density.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Density {
    /// Uniform on the closed interval `[lo, hi]` (one-dimensional).
    Uniform { lo: f64, hi: f64 },
    /// Normal with covariance `lambda * I`.
    Gaussian { mean: Vec<f64>, lambda: f64 },
}

impl Density {
    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        let d = Density::Uniform { lo, hi };
        d.validate()?;
        Ok(d)
    }

    pub fn gaussian(mean: Vec<f64>, lambda: f64) -> Result<Self> {
        let d = Density::Gaussian { mean, lambda };
        d.validate()?;
        Ok(d)
    }

    pub fn dimension(&self) -> usize {
        match self {
            Density::Uniform { .. } => 1,
            Density::Gaussian { mean, .. } => mean.len(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Density::Uniform { lo, hi } => {
                if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                    return Err(Error::input(format!(
                        "uniform support needs lo < hi, got [{lo}, {hi}]"
                    )));
                }
            }
            Density::Gaussian { mean, lambda } => {
                if mean.is_empty() {
                    return Err(Error::input(
                        "gaussian mean must have at least one coordinate",
                    ));
                }
                if mean.iter().any(|m| !m.is_finite()) {
                    return Err(Error::input("gaussian mean must be finite"));
                }
                if !(lambda.is_finite() && *lambda > 0.0) {
                    return Err(Error::input(format!(
                        "gaussian lambda must be positive, got {lambda}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Natural log of the density; `-inf` outside the support.
    pub fn ln_pdf(&self, x: &[f64]) -> f64 {
        match self {
            Density::Uniform { lo, hi } => {
                let v = x[0];
                if *lo <= v && v <= *hi {
                    -(hi - lo).ln()
                } else {
                    f64::NEG_INFINITY
                }
            }
            Density::Gaussian { mean, lambda } => {
                let d = mean.len() as f64;
                let sq: f64 = x.iter().zip(mean).map(|(a, m)| (a - m) * (a - m)).sum();
                -0.5 * d * (2.0 * PI * lambda).ln() - sq / (2.0 * lambda)
            }
        }
    }

    pub fn pdf(&self, x: &[f64]) -> f64 {
        match self {
            Density::Uniform { lo, hi } => {
                if *lo <= x[0] && x[0] <= *hi {
                    1.0 / (hi - lo)
                } else {
                    0.0
                }
            }
            Density::Gaussian { .. } => self.ln_pdf(x).exp(),
        }
    }

    /// Inverse CDF for the uniform, Box-Muller per coordinate for the Gaussian.
    pub fn sample(&self, rng: &mut Stream) -> Vec<f64> {
        match self {
            Density::Uniform { lo, hi } => vec![lo + rng::unit(rng) * (hi - lo)],
            Density::Gaussian { mean, lambda } => {
                let sd = lambda.sqrt();
                mean.iter()
                    .map(|m| m + sd * rng::standard_normal(rng))
                    .collect()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassComponent {
    pub label: LabelId,
    pub prior: f64,
    pub density: Density,
}

/// A case drawn from a mixture.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledCase {
    pub x: Vec<f64>,
    pub label: LabelId,
}

#[derive(Deserialize)]
struct RawComponent {
    prior: f64,
    density: Density,
}

#[derive(Deserialize)]
struct RawMixture {
    dimension: usize,
    components: Vec<RawComponent>,
}

/// Weighted class-conditional densities. Immutable after construction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Mixture {
    dimension: usize,
    components: Vec<ClassComponent>,
}

impl Mixture {
    /// Builds a validated mixture. Labels are assigned by position.
    pub fn new(dimension: usize, parts: Vec<(f64, Density)>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::input("mixture dimension must be positive"));
        }
        if parts.len() < 2 {
            return Err(Error::input(format!(
                "a mixture needs at least 2 classes, got {}",
                parts.len()
            )));
        }
        let mut total = 0.0;
        let mut components = Vec::with_capacity(parts.len());
        for (i, (prior, density)) in parts.into_iter().enumerate() {
            if !(prior.is_finite() && (0.0..=1.0).contains(&prior)) {
                return Err(Error::input(format!(
                    "prior of class {} must lie in [0, 1], got {prior}",
                    i + 1
                )));
            }
            density.validate()?;
            if density.dimension() != dimension {
                return Err(Error::Dimension {
                    expected: dimension,
                    got: density.dimension(),
                });
            }
            total += prior;
            components.push(ClassComponent {
                label: LabelId(i),
                prior,
                density,
            });
        }
        if (total - 1.0).abs() > PRIOR_SUM_TOL {
            return Err(Error::input(format!("priors must sum to 1, got {total}")));
        }
        Ok(Mixture {
            dimension,
            components,
        })
    }

    /// Equal-weight mixture of `Uniform[0, b]` and `Uniform[a, a + b]`.
    pub fn shifted_uniforms(a: f64, b: f64) -> Result<Self> {
        check_overlap_params(a, b)?;
        Mixture::new(
            1,
            vec![
                (0.5, Density::uniform(0.0, b)?),
                (0.5, Density::uniform(a, a + b)?),
            ],
        )
    }

    /// Equal priors, shared `lambda`, one class per mean.
    pub fn isotropic_gaussians(means: Vec<Vec<f64>>, lambda: f64) -> Result<Self> {
        let k = means.len();
        let dimension = means.first().map_or(0, Vec::len);
        let parts = means
            .into_iter()
            .map(|m| Ok((1.0 / k as f64, Density::gaussian(m, lambda)?)))
            .collect::<Result<Vec<_>>>()?;
        Mixture::new(dimension, parts)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawMixture = serde_json::from_str(text)?;
        Mixture::new(
            raw.dimension,
            raw.components
                .into_iter()
                .map(|c| (c.prior, c.density))
                .collect(),
        )
    }

    pub fn to_json(&self) -> String {
        let comps: Vec<_> = self
            .components
            .iter()
            .map(|c| serde_json::json!({ "prior": c.prior, "density": c.density }))
            .collect();
        serde_json::json!({ "dimension": self.dimension, "components": comps }).to_string()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn num_classes(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[ClassComponent] {
        &self.components
    }

    pub fn prior(&self, label: LabelId) -> f64 {
        self.components[label.0].prior
    }

    pub fn labels(&self) -> impl Iterator<Item = LabelId> {
        (0..self.components.len()).map(LabelId)
    }

    pub(crate) fn check_label(&self, label: LabelId) -> Result<()> {
        if label.0 < self.components.len() {
            Ok(())
        } else {
            Err(Error::input(format!(
                "label {} out of range for {} classes",
                label.0,
                self.components.len()
            )))
        }
    }

    pub(crate) fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dimension {
            return Err(Error::Dimension {
                expected: self.dimension,
                got: x.len(),
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::input("evidence must be finite"));
        }
        Ok(())
    }

    /// `f_label(x)`.
    pub fn density_at(&self, label: LabelId, x: &[f64]) -> Result<f64> {
        self.check_label(label)?;
        self.check_point(x)?;
        Ok(self.components[label.0].density.pdf(x))
    }

    /// `ln(prior_j) + ln f_j(x)` for every class.
    pub(crate) fn log_weights(&self, x: &[f64]) -> Vec<f64> {
        self.components
            .iter()
            .map(|c| {
                if c.prior > 0.0 {
                    c.prior.ln() + c.density.ln_pdf(x)
                } else {
                    f64::NEG_INFINITY
                }
            })
            .collect()
    }

    /// `Prob(A_j | x)` for every class, computed in log space so that distant
    /// Gaussian evidence does not underflow to an all-zero vector.
    pub fn posterior(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_point(x)?;
        let lw = self.log_weights(x);
        let max = lw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if max == f64::NEG_INFINITY {
            return Err(Error::UnsupportedEvidence(x.to_vec()));
        }
        let w: Vec<f64> = lw.iter().map(|l| (l - max).exp()).collect();
        let total: f64 = w.iter().sum();
        Ok(w.into_iter().map(|v| v / total).collect())
    }

    /// Draws one labelled case: class from the priors, then evidence.
    pub fn sample_case(&self, rng: &mut Stream) -> LabeledCase {
        let priors: Vec<f64> = self.components.iter().map(|c| c.prior).collect();
        let j = rng::pick_index(&priors, rng::unit(rng));
        let x = self.components[j].density.sample(rng);
        LabeledCase {
            x,
            label: LabelId(j),
        }
    }

    /// `n` cases; case `i` is drawn from stream `i` of `seed`.
    pub fn sample_cases(&self, n: usize, seed: u64) -> Result<Vec<LabeledCase>> {
        if n == 0 {
            return Err(Error::input("sample size must be at least 1"));
        }
        Ok((0..n as u64)
            .map(|i| self.sample_case(&mut rng::stream(seed, i)))
            .collect())
    }
}

impl<'de> Deserialize<'de> for Mixture {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = RawMixture::deserialize(de)?;
        Mixture::new(
            raw.dimension,
            raw.components
                .into_iter()
                .map(|c| (c.prior, c.density))
                .collect(),
        )
        .map_err(serde::de::Error::custom)
    }
}

pub(crate) fn check_overlap_params(a: f64, b: f64) -> Result<()> {
    if !(a.is_finite() && a >= 0.0) {
        return Err(Error::input(format!(
            "shift a must be non-negative, got {a}"
        )));
    }
    if !(b.is_finite() && b > 0.0) {
        return Err(Error::input(format!(
            "support length b must be positive, got {b}"
        )));
    }
    Ok(())
}
