//! Repeated play of a stage game between simple agents.
//!
//! The interesting agent is the [`AgentPolicy::FrequencyExploiter`], which
//! watches the opponent's actions and best-responds to their empirical
//! frequencies. Any pure policy in a game without a pure equilibrium is
//! quickly exploited by it; an equilibrium mix is not.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::games::{
    argmax_set, fictitious_play, solve_2x2_zero_sum, MixedStrategy, NormalFormGame,
};
use crate::rng::{self, Stream};

/// Iterations used to estimate the value of zero-sum games larger than 2x2.
pub const VALUE_ESTIMATE_ITERATIONS: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AgentPolicy {
    Pure {
        action: usize,
    },
    Mixed {
        strategy: MixedStrategy,
    },
    /// Best-responds to the opponent's observed action counts plus these
    /// virtual counts (one entry per opponent action). An empty vector means
    /// one virtual observation of every opponent action.
    FrequencyExploiter {
        virtual_counts: Vec<f64>,
    },
}

impl AgentPolicy {
    pub fn exploiter() -> Self {
        AgentPolicy::FrequencyExploiter {
            virtual_counts: Vec::new(),
        }
    }

    pub fn mixed(probs: Vec<f64>) -> Result<Self> {
        Ok(AgentPolicy::Mixed {
            strategy: MixedStrategy::new(probs)?,
        })
    }
}

impl fmt::Display for AgentPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AgentPolicy::Pure { action } => write!(f, "pure:{action}"),
            AgentPolicy::Mixed { strategy } => {
                let p: Vec<String> = strategy.probs().iter().map(|v| v.to_string()).collect();
                write!(f, "mixed:{}", p.join(","))
            }
            AgentPolicy::FrequencyExploiter { .. } => write!(f, "exploiter"),
        }
    }
}

impl FromStr for AgentPolicy {
    type Err = Error;

    /// `pure:I`, `mixed:P1,P2,...` or `exploiter[:C1,C2,...]`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let numbers = |text: &str| -> Result<Vec<f64>> {
            text.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::input(format!("bad number {t:?} in policy {s:?}")))
                })
                .collect()
        };
        match kind.trim() {
            "pure" => rest
                .trim()
                .parse()
                .map(|action| AgentPolicy::Pure { action })
                .map_err(|_| Error::input(format!("bad action index in policy {s:?}"))),
            "mixed" => AgentPolicy::mixed(numbers(rest)?),
            "exploiter" if rest.is_empty() => Ok(AgentPolicy::exploiter()),
            "exploiter" => Ok(AgentPolicy::FrequencyExploiter {
                virtual_counts: numbers(rest)?,
            }),
            _ => Err(Error::input(format!(
                "unknown policy {s:?}; expected pure:I, mixed:P1,P2,... or exploiter"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Row,
    Col,
}

/// A policy bound to one side of a concrete game.
enum Agent<'g> {
    Pure(usize),
    Mixed(&'g [f64]),
    Exploiter { beliefs: Vec<f64>, scores: Vec<f64> },
}

impl<'g> Agent<'g> {
    fn new(policy: &'g AgentPolicy, game: &NormalFormGame, side: Side) -> Result<Self> {
        let (own, other) = match side {
            Side::Row => (game.num_row_actions(), game.num_col_actions()),
            Side::Col => (game.num_col_actions(), game.num_row_actions()),
        };
        match policy {
            AgentPolicy::Pure { action } if *action < own => Ok(Agent::Pure(*action)),
            AgentPolicy::Pure { action } => Err(Error::input(format!(
                "pure action {action} out of range for {own} actions"
            ))),
            AgentPolicy::Mixed { strategy } if strategy.len() == own => {
                Ok(Agent::Mixed(strategy.probs()))
            }
            AgentPolicy::Mixed { strategy } => Err(Error::Dimension {
                expected: own,
                got: strategy.len(),
            }),
            AgentPolicy::FrequencyExploiter { virtual_counts } => {
                let beliefs = if virtual_counts.is_empty() {
                    vec![1.0; other]
                } else {
                    virtual_counts.clone()
                };
                if beliefs.len() != other {
                    return Err(Error::Dimension {
                        expected: other,
                        got: beliefs.len(),
                    });
                }
                if beliefs.iter().any(|c| !(c.is_finite() && *c >= 0.0))
                    || beliefs.iter().all(|c| *c == 0.0)
                {
                    return Err(Error::input(
                        "exploiter virtual counts must be non-negative and not all zero",
                    ));
                }
                let scores = match side {
                    Side::Row => game.row_payoff().against_col(&beliefs),
                    Side::Col => game.col_payoff().against_row(&beliefs),
                };
                Ok(Agent::Exploiter { beliefs, scores })
            }
        }
    }

    fn act(&self, rng: &mut Stream) -> usize {
        match self {
            Agent::Pure(a) => *a,
            Agent::Mixed(p) => rng::pick_index(p, rng::unit(rng)),
            Agent::Exploiter { scores, .. } => rng::choose(&argmax_set(scores), rng),
        }
    }

    /// Records the opponent's action.
    fn observe(&mut self, game: &NormalFormGame, side: Side, opponent: usize) {
        if let Agent::Exploiter { beliefs, scores } = self {
            beliefs[opponent] += 1.0;
            for (k, s) in scores.iter_mut().enumerate() {
                *s += match side {
                    Side::Row => game.row_payoff().get(k, opponent),
                    Side::Col => game.col_payoff().get(opponent, k),
                };
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    /// One-based.
    pub round: usize,
    pub row_action: usize,
    pub col_action: usize,
    pub row_payoff: f64,
    pub col_payoff: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchTrace {
    pub rounds: Vec<RoundRecord>,
    pub seed: u64,
}

impl MatchTrace {
    /// CSV with header `round,row_action,col_action,row_payoff,col_payoff`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.rounds {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchSummary {
    pub average_row_payoff: f64,
    pub average_col_payoff: f64,
    pub row_frequencies: MixedStrategy,
    pub col_frequencies: MixedStrategy,
}

/// Plays `rounds` stage games. The row agent draws from stream 0 of `seed`
/// and the column agent from stream 1; both choose simultaneously and then
/// observe each other's action.
pub fn run_repeated(
    game: &NormalFormGame,
    row: &AgentPolicy,
    col: &AgentPolicy,
    rounds: usize,
    seed: u64,
) -> Result<(MatchTrace, MatchSummary)> {
    if rounds == 0 {
        return Err(Error::input("a match needs at least one round"));
    }
    let mut row_agent = Agent::new(row, game, Side::Row)?;
    let mut col_agent = Agent::new(col, game, Side::Col)?;
    let mut row_rng = rng::stream(seed, 0);
    let mut col_rng = rng::stream(seed, 1);
    let mut row_counts = vec![0.0; game.num_row_actions()];
    let mut col_counts = vec![0.0; game.num_col_actions()];
    let (mut row_total, mut col_total) = (0.0, 0.0);
    let mut records = Vec::with_capacity(rounds);
    for round in 1..=rounds {
        let i = row_agent.act(&mut row_rng);
        let j = col_agent.act(&mut col_rng);
        row_agent.observe(game, Side::Row, j);
        col_agent.observe(game, Side::Col, i);
        let (u, v) = game.payoffs(i, j);
        row_total += u;
        col_total += v;
        row_counts[i] += 1.0;
        col_counts[j] += 1.0;
        records.push(RoundRecord {
            round,
            row_action: i,
            col_action: j,
            row_payoff: u,
            col_payoff: v,
        });
    }
    let summary = MatchSummary {
        average_row_payoff: row_total / rounds as f64,
        average_col_payoff: col_total / rounds as f64,
        row_frequencies: MixedStrategy::from_counts(&row_counts)?,
        col_frequencies: MixedStrategy::from_counts(&col_counts)?,
    };
    Ok((
        MatchTrace {
            rounds: records,
            seed,
        },
        summary,
    ))
}

/// One match per seed, run in parallel; output order follows `seeds`.
pub fn run_batch(
    game: &NormalFormGame,
    row: &AgentPolicy,
    col: &AgentPolicy,
    rounds: usize,
    seeds: &[u64],
) -> Result<Vec<MatchSummary>> {
    seeds
        .par_iter()
        .map(|&s| run_repeated(game, row, col, rounds, s).map(|(_, summary)| summary))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExploitabilityReport {
    /// Mean payoff of the frequency exploiter (column player).
    pub exploiter_average: f64,
    /// Mean payoff of the policy under test (row player).
    pub policy_average: f64,
    pub policy_frequencies: MixedStrategy,
    /// Row value of the game, for zero-sum games.
    pub game_value: Option<f64>,
    /// False when the value is a fictitious-play estimate.
    pub value_exact: bool,
    /// `policy_average - game_value`; clearly negative means exploited.
    pub gap: Option<f64>,
}

/// Pits `policy` (as the row player) against a frequency exploiter.
pub fn exploitability_report(
    game: &NormalFormGame,
    policy: &AgentPolicy,
    rounds: usize,
    seed: u64,
) -> Result<ExploitabilityReport> {
    let (_, summary) = run_repeated(game, policy, &AgentPolicy::exploiter(), rounds, seed)?;
    let (game_value, value_exact) = if !game.is_zero_sum() {
        (None, false)
    } else if game.num_row_actions() == 2 && game.num_col_actions() == 2 {
        (Some(solve_2x2_zero_sum(game)?.value), true)
    } else {
        (
            Some(fictitious_play(game, VALUE_ESTIMATE_ITERATIONS, seed)?.value),
            false,
        )
    };
    Ok(ExploitabilityReport {
        exploiter_average: summary.average_col_payoff,
        policy_average: summary.average_row_payoff,
        policy_frequencies: summary.row_frequencies,
        game_value,
        value_exact,
        gap: game_value.map(|v| summary.average_row_payoff - v),
    })
}
