//! Decision rules that may need to act randomly.
//!
//! * [`mixture`] and [`decision`]: Bayes-optimal classification over a known
//!   mixture, and the randomized classifier that is just as good on an
//!   uninformative overlap.
//! * [`games`] and [`repeated`]: mixed equilibria of small zero-sum games and
//!   a repeated-play simulator showing that pure strategies get exploited.
//! * [`ordinal`], [`survey`], [`chart`] and [`report`]: Mann-Whitney U on
//!   Likert responses and diverging stacked bar charts.

pub mod chart;
pub mod decision;
pub mod error;
pub mod games;
pub mod mixture;
pub mod ordinal;
pub mod repeated;
pub mod report;
pub mod rng;
pub mod survey;

pub use decision::{Classifier, CostEstimate, CostMatrix};
pub use error::{Error, Result};
pub use games::{HarmScenario, MixedProfile, MixedStrategy, NormalFormGame};
pub use mixture::{Density, LabelId, LabeledCase, Mixture};
pub use ordinal::{MwuResult, OrdinalSample};
pub use repeated::{AgentPolicy, MatchSummary, MatchTrace};
pub use survey::SurveyDataset;
