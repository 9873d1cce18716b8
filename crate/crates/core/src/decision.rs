//! Bayes-optimal and randomized classifiers over a known [`Mixture`].
//!
//! Costs follow the convention `cost(j, d)`: the price of declaring class `d`
//! when the case truly belongs to class `j`. A classifier maps evidence to a
//! probability distribution over labels; deterministic classifiers are point
//! masses.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mixture::{check_overlap_params, LabelId, Mixture};
use crate::rng::{self, Stream};

const DISTRIBUTION_TOL: f64 = 1e-12;

/// Misclassification costs, `k x k`, row = true class, column = decision.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct CostMatrix {
    k: usize,
    entries: Vec<f64>,
}

impl CostMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let k = rows.len();
        if k < 2 {
            return Err(Error::input("cost matrix needs at least 2 classes"));
        }
        let mut entries = Vec::with_capacity(k * k);
        for (j, row) in rows.into_iter().enumerate() {
            if row.len() != k {
                return Err(Error::input(format!(
                    "cost matrix row {} has {} entries, expected {k}",
                    j + 1,
                    row.len()
                )));
            }
            for v in row {
                if !(v.is_finite() && v >= 0.0) {
                    return Err(Error::input(format!(
                        "costs must be finite and non-negative, got {v}"
                    )));
                }
                entries.push(v);
            }
        }
        Ok(CostMatrix { k, entries })
    }

    /// Unit cost for every mistake, zero for correct decisions.
    pub fn zero_one(k: usize) -> Self {
        let entries = (0..k * k)
            .map(|i| if i / k == i % k { 0.0 } else { 1.0 })
            .collect();
        CostMatrix { k, entries }
    }

    /// Two-class matrix with zero diagonal.
    pub fn two_class(miss_first: f64, miss_second: f64) -> Result<Self> {
        CostMatrix::new(vec![vec![0.0, miss_first], vec![miss_second, 0.0]])
    }

    pub fn size(&self) -> usize {
        self.k
    }

    /// Cost of deciding `decided` when the truth is `truth`.
    pub fn get(&self, truth: LabelId, decided: LabelId) -> f64 {
        self.entries[truth.0 * self.k + decided.0]
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::input("scale factor must be positive"));
        }
        Ok(CostMatrix {
            k: self.k,
            entries: self.entries.iter().map(|v| v * factor).collect(),
        })
    }

    fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.k).map(<[f64]>::to_vec).collect()
    }

    fn check_against(&self, mixture: &Mixture) -> Result<()> {
        if self.k != mixture.num_classes() {
            return Err(Error::Dimension {
                expected: mixture.num_classes(),
                got: self.k,
            });
        }
        Ok(())
    }
}

impl TryFrom<Vec<Vec<f64>>> for CostMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        CostMatrix::new(rows)
    }
}

impl From<CostMatrix> for Vec<Vec<f64>> {
    fn from(c: CostMatrix) -> Self {
        c.rows()
    }
}

type DecisionFn = dyn Fn(&[f64]) -> Result<LabelId> + Send + Sync;
type DistributionFn = dyn Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync;

#[derive(Clone)]
pub enum Rule {
    Deterministic(Arc<DecisionFn>),
    Randomized(Arc<DistributionFn>),
}

/// A decision rule over `num_labels` classes.
#[derive(Clone)]
pub struct Classifier {
    name: String,
    num_labels: usize,
    rule: Rule,
}

impl fmt::Debug for Classifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Classifier")
            .field("name", &self.name)
            .field("num_labels", &self.num_labels)
            .field("randomized", &self.is_randomized())
            .finish()
    }
}

impl Classifier {
    pub fn deterministic<F>(name: impl Into<String>, num_labels: usize, rule: F) -> Self
    where
        F: Fn(&[f64]) -> Result<LabelId> + Send + Sync + 'static,
    {
        Classifier {
            name: name.into(),
            num_labels,
            rule: Rule::Deterministic(Arc::new(rule)),
        }
    }

    pub fn randomized<F>(name: impl Into<String>, num_labels: usize, rule: F) -> Self
    where
        F: Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync + 'static,
    {
        Classifier {
            name: name.into(),
            num_labels,
            rule: Rule::Randomized(Arc::new(rule)),
        }
    }

    /// Always declares `label`, ignoring the evidence.
    pub fn constant(label: LabelId, num_labels: usize) -> Result<Self> {
        if label.0 >= num_labels {
            return Err(Error::input(format!(
                "label {} out of range for {num_labels} classes",
                label.0
            )));
        }
        Ok(Classifier::deterministic(
            format!("constant {label}"),
            num_labels,
            move |_| Ok(label),
        ))
    }

    /// The cost-minimizing rule for a known mixture.
    pub fn bayes(mixture: &Mixture, cost: &CostMatrix) -> Result<Self> {
        cost.check_against(mixture)?;
        let (m, c) = (mixture.clone(), cost.clone());
        Ok(Classifier::deterministic(
            "bayes",
            mixture.num_classes(),
            move |x| bayes_decide(&m, &c, x),
        ))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_labels(&self) -> usize {
        self.num_labels
    }

    pub fn is_randomized(&self) -> bool {
        matches!(self.rule, Rule::Randomized(_))
    }

    pub fn rule(&self) -> &Rule {
        &self.rule
    }

    /// Output distribution over labels at `x`.
    pub fn distribution(&self, x: &[f64]) -> Result<Vec<f64>> {
        match &self.rule {
            Rule::Deterministic(f) => {
                let label = self.checked(f(x)?)?;
                let mut p = vec![0.0; self.num_labels];
                p[label.0] = 1.0;
                Ok(p)
            }
            Rule::Randomized(f) => {
                let p = f(x)?;
                if p.len() != self.num_labels {
                    return Err(Error::Dimension {
                        expected: self.num_labels,
                        got: p.len(),
                    });
                }
                let total: f64 = p.iter().sum();
                if p.iter().any(|v| v.is_nan() || *v < 0.0)
                    || (total - 1.0).abs() > DISTRIBUTION_TOL
                {
                    return Err(Error::input(format!(
                        "{} produced an invalid distribution {p:?}",
                        self.name
                    )));
                }
                Ok(p)
            }
        }
    }

    /// Draws a decision. Randomized rules consume exactly one uniform from
    /// `rng`; deterministic rules consume nothing.
    pub fn decide(&self, x: &[f64], rng: &mut Stream) -> Result<LabelId> {
        match &self.rule {
            Rule::Deterministic(f) => self.checked(f(x)?),
            Rule::Randomized(_) => {
                let p = self.distribution(x)?;
                Ok(LabelId(rng::pick_index(&p, rng::unit(rng))))
            }
        }
    }

    /// One decision from stream 0 of `seed`.
    pub fn decide_seeded(&self, x: &[f64], seed: u64) -> Result<LabelId> {
        self.decide(x, &mut rng::stream(seed, 0))
    }

    /// Expected cost at `x` with the decision randomness integrated out.
    pub fn expected_cost_at(&self, mixture: &Mixture, cost: &CostMatrix, x: &[f64]) -> Result<f64> {
        let p = self.distribution(x)?;
        let mut total = 0.0;
        for (d, w) in p.iter().enumerate() {
            if *w > 0.0 {
                total += w * expected_cost_of_decision(mixture, cost, x, LabelId(d))?;
            }
        }
        Ok(total)
    }

    fn checked(&self, label: LabelId) -> Result<LabelId> {
        if label.0 < self.num_labels {
            Ok(label)
        } else {
            Err(Error::input(format!(
                "{} returned label {} of {}",
                self.name, label.0, self.num_labels
            )))
        }
    }
}

/// `sum_j Prob(A_j | x) * cost(j, d)`.
pub fn expected_cost_of_decision(
    mixture: &Mixture,
    cost: &CostMatrix,
    x: &[f64],
    d: LabelId,
) -> Result<f64> {
    cost.check_against(mixture)?;
    mixture.check_label(d)?;
    let post = mixture.posterior(x)?;
    Ok(post
        .iter()
        .enumerate()
        .map(|(j, p)| p * cost.get(LabelId(j), d))
        .sum())
}

/// The decision with least expected cost at `x`; ties go to the lowest label.
pub fn bayes_decide(mixture: &Mixture, cost: &CostMatrix, x: &[f64]) -> Result<LabelId> {
    cost.check_against(mixture)?;
    let post = mixture.posterior(x)?;
    let mut best = (LabelId(0), f64::INFINITY);
    for d in mixture.labels() {
        let risk: f64 = post
            .iter()
            .enumerate()
            .map(|(j, p)| p * cost.get(LabelId(j), d))
            .sum();
        if risk < best.1 {
            best = (d, risk);
        }
    }
    Ok(best.0)
}

/// Likelihood-ratio threshold of the two-class rule: declare the first class
/// iff `f_1(x) / f_2(x)` exceeds `prior_2 * cost(2,1) / (prior_1 * cost(1,2))`.
pub fn likelihood_ratio_threshold(mixture: &Mixture, cost: &CostMatrix) -> Result<f64> {
    if mixture.num_classes() != 2 {
        return Err(Error::input(format!(
            "likelihood-ratio rule needs 2 classes, got {}",
            mixture.num_classes()
        )));
    }
    cost.check_against(mixture)?;
    let (a1, a2) = (LabelId(0), LabelId(1));
    if cost.get(a1, a1) != 0.0 || cost.get(a2, a2) != 0.0 {
        return Err(Error::input(
            "likelihood-ratio rule assumes zero cost for correct decisions",
        ));
    }
    let denom = mixture.prior(a1) * cost.get(a1, a2);
    if denom <= 0.0 {
        return Err(Error::input(
            "likelihood-ratio threshold has a zero denominator",
        ));
    }
    Ok(mixture.prior(a2) * cost.get(a2, a1) / denom)
}

/// Two-class Bayes rule written as a likelihood-ratio test. Ties go to the
/// second class.
pub fn two_class_likelihood_rule(mixture: &Mixture, cost: &CostMatrix) -> Result<Classifier> {
    let ln_threshold = likelihood_ratio_threshold(mixture, cost)?.ln();
    let m = mixture.clone();
    Ok(Classifier::deterministic("likelihood-ratio", 2, move |x| {
        m.check_point(x)?;
        let [d1, d2] = [&m.components()[0].density, &m.components()[1].density];
        let (l1, l2) = (d1.ln_pdf(x), d2.ln_pdf(x));
        if l1 == f64::NEG_INFINITY && l2 == f64::NEG_INFINITY {
            return Err(Error::UnsupportedEvidence(x.to_vec()));
        }
        Ok(if l1 - l2 > ln_threshold {
            LabelId(0)
        } else {
            LabelId(1)
        })
    }))
}

/// Declares the class whose mean is nearest in Euclidean distance; ties go to
/// the lowest label. Only valid for equal-prior isotropic Gaussians with a
/// shared variance, where it coincides with the Bayes rule under 0-1 cost.
pub fn nearest_mean_classifier(mixture: &Mixture) -> Result<Classifier> {
    use crate::mixture::Density;
    let k = mixture.num_classes();
    let mut means = Vec::with_capacity(k);
    let mut lambda0 = None;
    for c in mixture.components() {
        let Density::Gaussian { mean, lambda } = &c.density else {
            return Err(Error::input(
                "nearest-mean classifier needs Gaussian components",
            ));
        };
        if *lambda0.get_or_insert(*lambda) != *lambda {
            return Err(Error::input(
                "nearest-mean classifier needs a shared lambda",
            ));
        }
        if (c.prior - 1.0 / k as f64).abs() > 1e-12 {
            return Err(Error::input("nearest-mean classifier needs equal priors"));
        }
        means.push(mean.clone());
    }
    let dim = mixture.dimension();
    Ok(Classifier::deterministic("nearest-mean", k, move |x| {
        if x.len() != dim {
            return Err(Error::Dimension {
                expected: dim,
                got: x.len(),
            });
        }
        let mut best = (0, f64::INFINITY);
        for (j, m) in means.iter().enumerate() {
            let d2: f64 = x.iter().zip(m).map(|(a, b)| (a - b) * (a - b)).sum();
            if d2 < best.1 {
                best = (j, d2);
            }
        }
        Ok(LabelId(best.0))
    }))
}

/// Deterministic optimum for `Uniform[0, b]` vs `Uniform[a, a + b]`: the
/// second class from the midpoint `(a + b) / 2` onward (inclusive).
pub fn overlap_deterministic(a: f64, b: f64) -> Result<Classifier> {
    check_overlap_params(a, b)?;
    let mid = (a + b) / 2.0;
    Ok(Classifier::deterministic("M_d", 2, move |x| {
        Ok(if mid <= x[0] { LabelId(1) } else { LabelId(0) })
    }))
}

/// Randomized optimum for the same pair: second class right of `b`, first
/// class left of `a`, a fair coin on `[a, b]`. Branches are tried in that
/// order, so for `a > b` the coin is never reached.
pub fn overlap_randomized(a: f64, b: f64) -> Result<Classifier> {
    check_overlap_params(a, b)?;
    Ok(Classifier::randomized("M_r", 2, move |x| {
        let x = x[0];
        Ok(if b < x {
            vec![0.0, 1.0]
        } else if x < a {
            vec![1.0, 0.0]
        } else {
            vec![0.5, 0.5]
        })
    }))
}

/// Expected 0-1 cost of either overlap classifier: `(b - a) / (2b)` when the
/// supports overlap on a set of positive length, zero otherwise.
pub fn analytic_overlap_cost(a: f64, b: f64) -> Result<f64> {
    check_overlap_params(a, b)?;
    Ok(if a < b { (b - a) / (2.0 * b) } else { 0.0 })
}

/// Monte Carlo estimate of a classifier's expected cost.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostEstimate {
    pub mean_cost: f64,
    pub standard_error: f64,
    pub n: usize,
    pub seed: u64,
}

/// Samples `n` cases and averages the incurred cost. Case `i` (its label, its
/// evidence and any randomized decision) draws from stream `i` of `seed`, so
/// the result does not depend on how the work is split across threads.
pub fn monte_carlo_cost(
    mixture: &Mixture,
    cost: &CostMatrix,
    classifier: &Classifier,
    n: usize,
    seed: u64,
) -> Result<CostEstimate> {
    if n == 0 {
        return Err(Error::input("sample size must be at least 1"));
    }
    cost.check_against(mixture)?;
    if classifier.num_labels() != mixture.num_classes() {
        return Err(Error::Dimension {
            expected: mixture.num_classes(),
            got: classifier.num_labels(),
        });
    }
    let costs: Vec<f64> = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng::stream(seed, i);
            let case = mixture.sample_case(&mut rng);
            let d = classifier.decide(&case.x, &mut rng)?;
            Ok(cost.get(case.label, d))
        })
        .collect::<Result<_>>()?;
    let mean = costs.iter().sum::<f64>() / n as f64;
    let var = if n > 1 {
        costs.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (n - 1) as f64
    } else {
        0.0
    };
    Ok(CostEstimate {
        mean_cost: mean,
        standard_error: (var / n as f64).sqrt(),
        n,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussians() -> Mixture {
        Mixture::isotropic_gaussians(vec![vec![0.0], vec![1.0]], 1.0).unwrap()
    }

    #[test]
    fn expected_cost_examples() {
        let m = Mixture::shifted_uniforms(0.5, 1.0).unwrap();
        let c = CostMatrix::zero_one(2);
        assert_eq!(
            expected_cost_of_decision(&m, &c, &[0.75], LabelId(0)).unwrap(),
            0.5
        );
        assert_eq!(
            expected_cost_of_decision(&m, &c, &[0.75], LabelId(1)).unwrap(),
            0.5
        );
        assert_eq!(
            expected_cost_of_decision(&m, &c, &[0.25], LabelId(0)).unwrap(),
            0.0
        );

        // posterior (1/2, 1/2) at the Gaussian midpoint
        let asym = CostMatrix::two_class(2.0, 1.0).unwrap();
        let g = gaussians();
        assert!(
            (expected_cost_of_decision(&g, &asym, &[0.5], LabelId(1)).unwrap() - 1.0).abs() < 1e-15
        );
        assert!(
            (expected_cost_of_decision(&g, &asym, &[0.5], LabelId(0)).unwrap() - 0.5).abs() < 1e-15
        );
    }

    #[test]
    fn expected_cost_propagates_unsupported_evidence() {
        let m = Mixture::shifted_uniforms(0.5, 1.0).unwrap();
        let r = expected_cost_of_decision(&m, &CostMatrix::zero_one(2), &[-1.0], LabelId(0));
        assert!(matches!(r, Err(Error::UnsupportedEvidence(_))));
    }

    #[test]
    fn bayes_decide_examples() {
        let m = Mixture::shifted_uniforms(0.5, 1.0).unwrap();
        let c = CostMatrix::zero_one(2);
        assert_eq!(bayes_decide(&m, &c, &[0.25]).unwrap(), LabelId(0));
        let g = gaussians();
        assert_eq!(bayes_decide(&g, &c, &[0.4]).unwrap(), LabelId(0));
        assert_eq!(bayes_decide(&g, &c, &[0.6]).unwrap(), LabelId(1));
        // exact midpoint is a tie, resolved to the lowest label
        assert_eq!(bayes_decide(&g, &c, &[0.5]).unwrap(), LabelId(0));
    }

    #[test]
    fn asymmetric_cost_moves_the_boundary() {
        // mistaking class 1 for class 2 costs 2: boundary at 1/2 + ln 2
        let g = gaussians();
        let c = CostMatrix::two_class(2.0, 1.0).unwrap();
        let edge = 0.5 + std::f64::consts::LN_2;
        assert_eq!(bayes_decide(&g, &c, &[edge - 0.005]).unwrap(), LabelId(0));
        assert_eq!(bayes_decide(&g, &c, &[edge + 0.005]).unwrap(), LabelId(1));
        // mistaking class 2 for class 1 costs 2: boundary at 1/2 - ln 2 = (1 - 2 ln 2) / 2
        let c = CostMatrix::two_class(1.0, 2.0).unwrap();
        assert_eq!(bayes_decide(&g, &c, &[-0.2]).unwrap(), LabelId(0));
        assert_eq!(bayes_decide(&g, &c, &[-0.19]).unwrap(), LabelId(1));
    }

    #[test]
    fn likelihood_threshold_examples() {
        let g = gaussians();
        assert_eq!(
            likelihood_ratio_threshold(&g, &CostMatrix::zero_one(2)).unwrap(),
            1.0
        );
        let skew = Mixture::new(
            1,
            vec![
                (
                    0.75,
                    crate::mixture::Density::gaussian(vec![0.0], 1.0).unwrap(),
                ),
                (
                    0.25,
                    crate::mixture::Density::gaussian(vec![1.0], 1.0).unwrap(),
                ),
            ],
        )
        .unwrap();
        let t = likelihood_ratio_threshold(&skew, &CostMatrix::zero_one(2)).unwrap();
        assert!((t - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn likelihood_rule_rejects_bad_inputs() {
        let g = gaussians();
        assert!(two_class_likelihood_rule(&g, &CostMatrix::two_class(0.0, 1.0).unwrap()).is_err());
        let three =
            Mixture::isotropic_gaussians(vec![vec![0.0], vec![1.0], vec![2.0]], 1.0).unwrap();
        assert!(two_class_likelihood_rule(&three, &CostMatrix::zero_one(3)).is_err());
        let diag = CostMatrix::new(vec![vec![1.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(two_class_likelihood_rule(&g, &diag).is_err());
    }

    #[test]
    fn nearest_mean_examples() {
        let m = Mixture::isotropic_gaussians(vec![vec![0.0, 0.0], vec![2.0, 0.0]], 1.0).unwrap();
        let nm = nearest_mean_classifier(&m).unwrap();
        assert_eq!(nm.decide_seeded(&[0.5, 0.0], 0).unwrap(), LabelId(0));
        assert_eq!(nm.decide_seeded(&[1.0, 0.0], 0).unwrap(), LabelId(0));
        assert_eq!(nm.decide_seeded(&[1.5, 0.0], 0).unwrap(), LabelId(1));
    }

    #[test]
    fn nearest_mean_preconditions() {
        let mixed = Mixture::new(
            1,
            vec![
                (
                    0.5,
                    crate::mixture::Density::gaussian(vec![0.0], 1.0).unwrap(),
                ),
                (
                    0.5,
                    crate::mixture::Density::gaussian(vec![1.0], 2.0).unwrap(),
                ),
            ],
        )
        .unwrap();
        assert!(nearest_mean_classifier(&mixed).is_err());
        assert!(nearest_mean_classifier(&Mixture::shifted_uniforms(0.5, 1.0).unwrap()).is_err());
    }

    #[test]
    fn overlap_classifier_examples() {
        let md = overlap_deterministic(0.5, 1.0).unwrap();
        assert_eq!(md.decide_seeded(&[0.75], 0).unwrap(), LabelId(1));
        assert_eq!(md.decide_seeded(&[0.2], 0).unwrap(), LabelId(0));
        assert_eq!(md.decide_seeded(&[1.4], 0).unwrap(), LabelId(1));

        let mr = overlap_randomized(0.5, 1.0).unwrap();
        assert!(mr.is_randomized());
        assert_eq!(mr.distribution(&[0.75]).unwrap(), vec![0.5, 0.5]);
        assert_eq!(mr.distribution(&[0.1]).unwrap(), vec![1.0, 0.0]);
        assert_eq!(mr.distribution(&[1.2]).unwrap(), vec![0.0, 1.0]);
        assert_eq!(mr.distribution(&[0.5]).unwrap(), vec![0.5, 0.5]);
        assert_eq!(mr.distribution(&[1.0]).unwrap(), vec![0.5, 0.5]);
    }

    #[test]
    fn randomized_overlap_is_deterministic_when_supports_are_disjoint() {
        let (a, b) = (2.0, 1.0);
        let md = overlap_deterministic(a, b).unwrap();
        let mr = overlap_randomized(a, b).unwrap();
        for i in 0..=300 {
            let x = i as f64 / 100.0;
            let p = mr.distribution(&[x]).unwrap();
            assert!(p == vec![1.0, 0.0] || p == vec![0.0, 1.0]);
            let on_support = x <= b || x >= a;
            if on_support {
                assert_eq!(md.distribution(&[x]).unwrap(), p, "x = {x}");
            }
        }
    }

    #[test]
    fn analytic_overlap_cost_examples() {
        assert_eq!(analytic_overlap_cost(0.5, 1.0).unwrap(), 0.25);
        assert_eq!(analytic_overlap_cost(0.0, 1.0).unwrap(), 0.5);
        assert_eq!(analytic_overlap_cost(2.0, 1.0).unwrap(), 0.0);
        assert_eq!(analytic_overlap_cost(1.0, 1.0).unwrap(), 0.0);
        assert!(analytic_overlap_cost(-0.1, 1.0).is_err());
        assert!(analytic_overlap_cost(0.5, 0.0).is_err());
    }

    /// Midpoint-rule integral of the expected 0-1 cost over the real line.
    fn integrated_cost(
        m: &Mixture,
        c: &CostMatrix,
        clf: &Classifier,
        lo: f64,
        hi: f64,
        steps: usize,
    ) -> f64 {
        let h = (hi - lo) / steps as f64;
        (0..steps)
            .map(|i| {
                let x = [lo + (i as f64 + 0.5) * h];
                let dens: f64 = m
                    .labels()
                    .map(|l| m.prior(l) * m.density_at(l, &x).unwrap())
                    .sum();
                if dens == 0.0 {
                    0.0
                } else {
                    dens * clf.expected_cost_at(m, c, &x).unwrap() * h
                }
            })
            .sum()
    }

    #[test]
    fn analytic_cost_matches_numeric_integration() {
        let c = CostMatrix::zero_one(2);
        for &(a, b) in &[(0.5, 1.0), (0.1, 1.0), (0.9, 2.0), (0.0, 1.0), (3.0, 1.0)] {
            let m = Mixture::shifted_uniforms(a, b).unwrap();
            let want = analytic_overlap_cost(a, b).unwrap();
            for clf in [
                overlap_deterministic(a, b).unwrap(),
                overlap_randomized(a, b).unwrap(),
            ] {
                let got = integrated_cost(&m, &c, &clf, -1.0, a + b + 1.0, 400_000);
                assert!(
                    (got - want).abs() < 1e-4,
                    "a={a} b={b} {}: {got} vs {want}",
                    clf.name()
                );
            }
        }
    }

    #[test]
    fn bayes_scale_invariance() {
        let g = gaussians();
        let c = CostMatrix::two_class(3.0, 1.0).unwrap();
        let c10 = c.scaled(10.0).unwrap();
        for i in 0..200 {
            let x = [-3.0 + i as f64 * 0.0317];
            assert_eq!(
                bayes_decide(&g, &c, &x).unwrap(),
                bayes_decide(&g, &c10, &x).unwrap()
            );
        }
    }

    #[test]
    fn invalid_randomized_distribution_is_rejected() {
        let bad = Classifier::randomized("bad", 2, |_| Ok(vec![0.6, 0.6]));
        assert!(bad.distribution(&[0.0]).is_err());
        let short = Classifier::randomized("short", 2, |_| Ok(vec![1.0]));
        assert!(short.distribution(&[0.0]).is_err());
    }

    #[test]
    fn seeded_decisions_repeat() {
        let mr = overlap_randomized(0.5, 1.0).unwrap();
        for seed in 0..50 {
            assert_eq!(
                mr.decide_seeded(&[0.7], seed).unwrap(),
                mr.decide_seeded(&[0.7], seed).unwrap()
            );
        }
        let picks: Vec<_> = (0..200)
            .map(|s| mr.decide_seeded(&[0.7], s).unwrap())
            .collect();
        assert!(picks.contains(&LabelId(0)) && picks.contains(&LabelId(1)));
    }

    #[test]
    fn monte_carlo_validates_inputs() {
        let m = Mixture::shifted_uniforms(0.5, 1.0).unwrap();
        let c = CostMatrix::zero_one(2);
        let md = overlap_deterministic(0.5, 1.0).unwrap();
        assert!(monte_carlo_cost(&m, &c, &md, 0, 1).is_err());
        assert!(monte_carlo_cost(&m, &CostMatrix::zero_one(3), &md, 10, 1).is_err());
    }

    #[test]
    fn monte_carlo_small_run_is_reproducible() {
        let m = Mixture::shifted_uniforms(0.5, 1.0).unwrap();
        let c = CostMatrix::zero_one(2);
        let mr = overlap_randomized(0.5, 1.0).unwrap();
        let a = monte_carlo_cost(&m, &c, &mr, 10_000, 3).unwrap();
        let b = monte_carlo_cost(&m, &c, &mr, 10_000, 3).unwrap();
        assert_eq!(a, b);
        assert!(a.standard_error > 0.0);
    }

    #[test]
    fn cost_matrix_json() {
        let c: CostMatrix = serde_json::from_str("[[0, 2], [1, 0]]").unwrap();
        assert_eq!(c, CostMatrix::two_class(2.0, 1.0).unwrap());
        assert!(serde_json::from_str::<CostMatrix>("[[0, -1], [1, 0]]").is_err());
        assert!(serde_json::from_str::<CostMatrix>("[[0, 1, 2], [1, 0]]").is_err());
    }
}
