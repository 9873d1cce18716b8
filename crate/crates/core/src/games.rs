//! Two-player normal-form games and their equilibria.
//!
//! The row player is always the first player. Payoffs are stored separately
//! for both players; zero-sum games keep `col_payoff = -row_payoff` exactly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

const PROB_TOL: f64 = 1e-12;

/// Dense row-major payoff matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::input(
                "payoff matrix must have at least one row and one column",
            ));
        }
        let mut data = Vec::with_capacity(r * c);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != c {
                return Err(Error::input(format!(
                    "payoff row {} has {} entries, expected {c}",
                    i + 1,
                    row.len()
                )));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::input("payoffs must be finite"));
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn negated(&self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| -v).collect(),
        }
    }

    pub fn scaled(&self, factor: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.cols).map(<[f64]>::to_vec).collect()
    }

    /// `M q`: payoff of each row action against a column mix.
    pub fn against_col(&self, q: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * q[j]).sum())
            .collect()
    }

    /// `p^T M`: payoff of each column action against a row mix.
    pub fn against_row(&self, p: &[f64]) -> Vec<f64> {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| p[i] * self.get(i, j)).sum())
            .collect()
    }

    pub fn bilinear(&self, p: &[f64], q: &[f64]) -> f64 {
        self.against_col(q)
            .iter()
            .zip(p)
            .map(|(v, pi)| v * pi)
            .sum()
    }
}

impl TryFrom<Vec<Vec<f64>>> for Matrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Matrix::new(rows)
    }
}

impl From<Matrix> for Vec<Vec<f64>> {
    fn from(m: Matrix) -> Self {
        m.to_rows()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalFormGame {
    row_payoff: Matrix,
    col_payoff: Matrix,
    zero_sum: bool,
    row_actions: Vec<String>,
    col_actions: Vec<String>,
}

#[derive(Deserialize)]
struct RawGame {
    row_payoff: Matrix,
    #[serde(default)]
    col_payoff: Option<Matrix>,
    #[serde(default)]
    zero_sum: Option<bool>,
    #[serde(default)]
    row_actions: Option<Vec<String>>,
    #[serde(default)]
    col_actions: Option<Vec<String>>,
}

fn default_names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

impl NormalFormGame {
    /// Zero-sum game from the row player's payoffs.
    pub fn zero_sum(row_payoff: Vec<Vec<f64>>) -> Result<Self> {
        let a = Matrix::new(row_payoff)?;
        let (r, c) = (a.rows, a.cols);
        Ok(NormalFormGame {
            col_payoff: a.negated(),
            row_payoff: a,
            zero_sum: true,
            row_actions: default_names("r", r),
            col_actions: default_names("c", c),
        })
    }

    /// General two-player game. Flagged zero-sum when `col = -row` exactly.
    pub fn bimatrix(row_payoff: Vec<Vec<f64>>, col_payoff: Vec<Vec<f64>>) -> Result<Self> {
        let a = Matrix::new(row_payoff)?;
        let b = Matrix::new(col_payoff)?;
        if (a.rows, a.cols) != (b.rows, b.cols) {
            return Err(Error::input(
                "row and column payoff matrices differ in shape",
            ));
        }
        let zero_sum = a.data.iter().zip(&b.data).all(|(x, y)| *x == -*y);
        let (r, c) = (a.rows, a.cols);
        Ok(NormalFormGame {
            row_payoff: a,
            col_payoff: b,
            zero_sum,
            row_actions: default_names("r", r),
            col_actions: default_names("c", c),
        })
    }

    /// Accepts `{"row_payoff": .., "col_payoff": ..}` or
    /// `{"row_payoff": .., "zero_sum": true}`, with optional action names.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawGame = serde_json::from_str(text)?;
        let game = match (raw.col_payoff, raw.zero_sum) {
            (None, Some(true)) => NormalFormGame::zero_sum(raw.row_payoff.to_rows())?,
            (None, _) => return Err(Error::input("game needs col_payoff or \"zero_sum\": true")),
            (Some(b), flag) => {
                let g = NormalFormGame::bimatrix(raw.row_payoff.to_rows(), b.to_rows())?;
                if flag == Some(true) && !g.zero_sum {
                    return Err(Error::input(
                        "game marked zero_sum but col_payoff is not the negation of row_payoff",
                    ));
                }
                g
            }
        };
        let game = match raw.row_actions {
            Some(names) => game.with_row_actions(names)?,
            None => game,
        };
        match raw.col_actions {
            Some(names) => game.with_col_actions(names),
            None => Ok(game),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("game serializes")
    }

    pub fn with_row_actions(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.row_payoff.rows {
            return Err(Error::Dimension {
                expected: self.row_payoff.rows,
                got: names.len(),
            });
        }
        self.row_actions = names;
        Ok(self)
    }

    pub fn with_col_actions(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.row_payoff.cols {
            return Err(Error::Dimension {
                expected: self.row_payoff.cols,
                got: names.len(),
            });
        }
        self.col_actions = names;
        Ok(self)
    }

    pub fn num_row_actions(&self) -> usize {
        self.row_payoff.rows
    }

    pub fn num_col_actions(&self) -> usize {
        self.row_payoff.cols
    }

    pub fn row_payoff(&self) -> &Matrix {
        &self.row_payoff
    }

    pub fn col_payoff(&self) -> &Matrix {
        &self.col_payoff
    }

    pub fn is_zero_sum(&self) -> bool {
        self.zero_sum
    }

    pub fn row_actions(&self) -> &[String] {
        &self.row_actions
    }

    pub fn col_actions(&self) -> &[String] {
        &self.col_actions
    }

    /// Payoffs `(row, col)` for a pure action pair.
    pub fn payoffs(&self, i: usize, j: usize) -> (f64, f64) {
        (self.row_payoff.get(i, j), self.col_payoff.get(i, j))
    }

    /// Same strategic game with every payoff multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::input("scale factor must be positive"));
        }
        Ok(NormalFormGame {
            row_payoff: self.row_payoff.scaled(factor),
            col_payoff: self.col_payoff.scaled(factor),
            ..self.clone()
        })
    }
}

/// Matching pennies: the row player wins both pennies when they match.
pub fn build_matching_pennies() -> NormalFormGame {
    NormalFormGame::zero_sum(vec![vec![1.0, -1.0], vec![-1.0, 1.0]])
        .and_then(|g| g.with_row_actions(vec!["heads".into(), "tails".into()]))
        .and_then(|g| g.with_col_actions(vec!["heads".into(), "tails".into()]))
        .expect("static game is valid")
}

/// Rock-paper-scissors, win = 1, loss = -1, tie = 0.
pub fn build_rock_paper_scissors() -> NormalFormGame {
    let names = || {
        vec![
            "rock".to_string(),
            "paper".to_string(),
            "scissors".to_string(),
        ]
    };
    NormalFormGame::zero_sum(vec![
        vec![0.0, -1.0, 1.0],
        vec![1.0, 0.0, -1.0],
        vec![-1.0, 1.0, 0.0],
    ])
    .and_then(|g| g.with_row_actions(names()))
    .and_then(|g| g.with_col_actions(names()))
    .expect("static game is valid")
}

/// Merit and worth of the two parties an AI decision may harm.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarmScenario {
    pub m_x: f64,
    pub v_x: f64,
    pub m_y: f64,
    pub v_y: f64,
}

impl HarmScenario {
    pub fn new(m_x: f64, v_x: f64, m_y: f64, v_y: f64) -> Result<Self> {
        let s = HarmScenario { m_x, v_x, m_y, v_y };
        if [m_x, v_x, m_y, v_y].iter().any(|v| !v.is_finite()) {
            return Err(Error::input("harm scenario values must be finite"));
        }
        if m_x < 0.0 || m_y < 0.0 {
            return Err(Error::input("merits must be non-negative"));
        }
        if v_x <= 0.0 || v_y <= 0.0 {
            return Err(Error::input("worth values must be positive"));
        }
        if s.loss_x() + s.loss_y() <= 0.0 {
            return Err(Error::input("at least one side must carry positive merit"));
        }
        Ok(s)
    }

    /// Loss from harming X when Y was at fault.
    pub fn loss_x(&self) -> f64 {
        self.m_x * self.v_x
    }

    pub fn loss_y(&self) -> f64 {
        self.m_y * self.v_y
    }
}

/// Zero-sum game between the AI (rows: harm X, harm Y) and the environment
/// (columns: X at fault, Y at fault). Harming the party at fault costs
/// nothing; harming the innocent party costs its merit times its worth.
pub fn build_harm_game(s: &HarmScenario) -> Result<NormalFormGame> {
    let s = HarmScenario::new(s.m_x, s.v_x, s.m_y, s.v_y)?;
    NormalFormGame::zero_sum(vec![vec![0.0, -s.loss_x()], vec![-s.loss_y(), 0.0]])?
        .with_row_actions(vec!["harm X".into(), "harm Y".into()])?
        .with_col_actions(vec!["X at fault".into(), "Y at fault".into()])
}

/// Probability distribution over one player's actions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct MixedStrategy {
    probs: Vec<f64>,
}

impl MixedStrategy {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::input("strategy needs at least one action"));
        }
        if probs.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::input(format!(
                "strategy probabilities must be non-negative, got {probs:?}"
            )));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > PROB_TOL {
            return Err(Error::input(format!(
                "strategy probabilities must sum to 1, got {total}"
            )));
        }
        Ok(MixedStrategy { probs })
    }

    pub fn pure(n: usize, action: usize) -> Result<Self> {
        if action >= n {
            return Err(Error::input(format!(
                "action {action} out of range for {n} actions"
            )));
        }
        let mut probs = vec![0.0; n];
        probs[action] = 1.0;
        Ok(MixedStrategy { probs })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("strategy needs at least one action"));
        }
        Ok(MixedStrategy {
            probs: vec![1.0 / n as f64; n],
        })
    }

    /// Normalizes non-negative counts into frequencies.
    pub fn from_counts(counts: &[f64]) -> Result<Self> {
        let total: f64 = counts.iter().sum();
        if total.is_nan() || total <= 0.0 {
            return Err(Error::input("counts must have positive total"));
        }
        Ok(MixedStrategy {
            probs: counts.iter().map(|c| c / total).collect(),
        })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, p)| **p > 0.0)
            .map(|(i, _)| i)
    }

    pub fn pure_action(&self) -> Option<usize> {
        self.probs.iter().position(|p| *p == 1.0)
    }
}

impl TryFrom<Vec<f64>> for MixedStrategy {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        MixedStrategy::new(v)
    }
}

impl From<MixedStrategy> for Vec<f64> {
    fn from(s: MixedStrategy) -> Self {
        s.probs
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixedProfile {
    pub row: MixedStrategy,
    pub col: MixedStrategy,
}

impl MixedProfile {
    pub fn new(row: MixedStrategy, col: MixedStrategy) -> Self {
        MixedProfile { row, col }
    }

    pub fn pure(game: &NormalFormGame, i: usize, j: usize) -> Result<Self> {
        Ok(MixedProfile {
            row: MixedStrategy::pure(game.num_row_actions(), i)?,
            col: MixedStrategy::pure(game.num_col_actions(), j)?,
        })
    }

    fn fits(&self, game: &NormalFormGame) -> bool {
        self.row.len() == game.num_row_actions() && self.col.len() == game.num_col_actions()
    }
}

/// `(p^T A q, p^T B q)`.
pub fn expected_payoff(game: &NormalFormGame, profile: &MixedProfile) -> Result<(f64, f64)> {
    if profile.row.len() != game.num_row_actions() {
        return Err(Error::Dimension {
            expected: game.num_row_actions(),
            got: profile.row.len(),
        });
    }
    if profile.col.len() != game.num_col_actions() {
        return Err(Error::Dimension {
            expected: game.num_col_actions(),
            got: profile.col.len(),
        });
    }
    let (p, q) = (profile.row.probs(), profile.col.probs());
    Ok((
        game.row_payoff.bilinear(p, q),
        game.col_payoff.bilinear(p, q),
    ))
}

/// Every pure profile `(i, j)` in which each action is a best response to the
/// other.
pub fn find_pure_nash(game: &NormalFormGame) -> Vec<(usize, usize)> {
    let (a, b) = (&game.row_payoff, &game.col_payoff);
    let col_best: Vec<f64> = (0..a.cols)
        .map(|j| {
            (0..a.rows)
                .map(|i| a.get(i, j))
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect();
    let row_best: Vec<f64> = (0..a.rows)
        .map(|i| {
            (0..a.cols)
                .map(|j| b.get(i, j))
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect();
    let mut out = Vec::new();
    for (i, rb) in row_best.iter().enumerate() {
        for (j, cb) in col_best.iter().enumerate() {
            if a.get(i, j) >= *cb && b.get(i, j) >= *rb {
                out.push((i, j));
            }
        }
    }
    out
}

/// Equilibrium profile with the row player's value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub profile: MixedProfile,
    pub value: f64,
}

/// Exact equilibrium of a 2x2 zero-sum game. A saddle point is returned as a
/// pure profile; otherwise both players mix so the opponent is indifferent.
pub fn solve_2x2_zero_sum(game: &NormalFormGame) -> Result<Equilibrium> {
    if game.num_row_actions() != 2 || game.num_col_actions() != 2 {
        return Err(Error::input("exact solver handles 2x2 games only"));
    }
    if !game.is_zero_sum() {
        return Err(Error::input("exact solver needs a zero-sum game"));
    }
    if let Some(&(i, j)) = find_pure_nash(game).first() {
        return Ok(Equilibrium {
            profile: MixedProfile::pure(game, i, j)?,
            value: game.row_payoff.get(i, j),
        });
    }
    let m = &game.row_payoff;
    let (a, b, c, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    // no saddle point means a - b - c + d is non-zero
    let denom = a - b - c + d;
    let p = (d - c) / denom;
    let q = (d - b) / denom;
    let value = (a * d - b * c) / denom;
    Ok(Equilibrium {
        profile: MixedProfile {
            row: MixedStrategy {
                probs: vec![p, (a - b) / denom],
            },
            col: MixedStrategy {
                probs: vec![q, (a - c) / denom],
            },
        },
        value,
    })
}

/// No player gains more than `tol` by deviating to a pure action, and every
/// supported action earns within `tol` of the best pure payoff.
pub fn is_nash(game: &NormalFormGame, profile: &MixedProfile, tol: f64) -> bool {
    if !profile.fits(game) || tol.is_nan() || tol <= 0.0 {
        return false;
    }
    let (p, q) = (profile.row.probs(), profile.col.probs());
    let row_pure = game.row_payoff.against_col(q);
    let col_pure = game.col_payoff.against_row(p);
    let check = |pure: &[f64], own: &MixedStrategy, current: f64| {
        let best = pure.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        best <= current + tol && own.support().all(|i| pure[i] >= best - tol)
    };
    check(&row_pure, &profile.row, game.row_payoff.bilinear(p, q))
        && check(&col_pure, &profile.col, game.col_payoff.bilinear(p, q))
}

/// Indices within a relative `1e-12` of the maximum.
pub(crate) fn argmax_set(values: &[f64]) -> Vec<usize> {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let slack = 1e-12 * (1.0 + max.abs());
    values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v >= max - slack)
        .map(|(i, _)| i)
        .collect()
}

/// Outcome of fictitious play.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FictitiousPlay {
    /// Empirical frequencies of the actions actually played.
    pub profile: MixedProfile,
    /// Row payoff of the empirical profile; converges to the game value.
    pub value: f64,
    /// Worst row payoff over column replies to the empirical row mix.
    pub lower_bound: f64,
    /// Best row payoff against the empirical column mix.
    pub upper_bound: f64,
    /// Mean row payoff realized along the play path.
    pub average_payoff: f64,
    pub iterations: usize,
}

/// Simultaneous fictitious play on a zero-sum game. Each player starts with
/// one virtual observation of every opponent action, then best-responds to
/// the opponent's empirical history; best-response ties are broken uniformly
/// from stream 0 of `tie_seed`.
pub fn fictitious_play(
    game: &NormalFormGame,
    iterations: usize,
    tie_seed: u64,
) -> Result<FictitiousPlay> {
    if !game.is_zero_sum() {
        return Err(Error::input(
            "fictitious play is only offered for zero-sum games",
        ));
    }
    if iterations == 0 {
        return Err(Error::input("fictitious play needs at least one iteration"));
    }
    let (a, b) = (&game.row_payoff, &game.col_payoff);
    let (r, c) = (a.rows, a.cols);
    let mut rng = rng::stream(tie_seed, 0);
    let mut row_beliefs = vec![1.0; c];
    let mut col_beliefs = vec![1.0; r];
    let mut row_counts = vec![0.0; r];
    let mut col_counts = vec![0.0; c];
    // payoff of each own action against the opponent's belief counts, kept incrementally
    let mut row_scores = a.against_col(&row_beliefs);
    let mut col_scores = b.against_row(&col_beliefs);
    let mut realized = 0.0;
    for _ in 0..iterations {
        let i = rng::choose(&argmax_set(&row_scores), &mut rng);
        let j = rng::choose(&argmax_set(&col_scores), &mut rng);
        realized += a.get(i, j);
        row_counts[i] += 1.0;
        col_counts[j] += 1.0;
        row_beliefs[j] += 1.0;
        col_beliefs[i] += 1.0;
        for (k, s) in row_scores.iter_mut().enumerate() {
            *s += a.get(k, j);
        }
        for (l, s) in col_scores.iter_mut().enumerate() {
            *s += b.get(i, l);
        }
    }
    let row = MixedStrategy::from_counts(&row_counts)?;
    let col = MixedStrategy::from_counts(&col_counts)?;
    let value = a.bilinear(row.probs(), col.probs());
    let lower_bound = a
        .against_row(row.probs())
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let upper_bound = a
        .against_col(col.probs())
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(FictitiousPlay {
        profile: MixedProfile { row, col },
        value,
        lower_bound,
        upper_bound,
        average_payoff: realized / iterations as f64,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn example_harm() -> NormalFormGame {
        build_harm_game(&HarmScenario::new(1.0, 2.0, 1.0, 6.0).unwrap()).unwrap()
    }

    #[test]
    fn matching_pennies_layout() {
        let g = build_matching_pennies();
        assert_eq!(g.payoffs(0, 0).0, 1.0);
        assert_eq!(g.payoffs(0, 1).0, -1.0);
        assert!(g.is_zero_sum());
    }

    #[test]
    fn rock_paper_scissors_layout() {
        let g = build_rock_paper_scissors();
        assert_eq!(g.payoffs(0, 2).0, 1.0);
        assert_eq!(g.payoffs(1, 1).0, 0.0);
        assert_eq!(g.payoffs(1, 0).0, 1.0);
        let m = g.row_payoff();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m.get(i, j), -m.get(j, i));
            }
        }
    }

    #[test]
    fn harm_game_layout() {
        let g = example_harm();
        assert_eq!(
            g.row_payoff().to_rows(),
            vec![vec![0.0, -2.0], vec![-6.0, 0.0]]
        );
        assert_eq!(g.payoffs(0, 0).0, 0.0);
        assert_eq!(g.col_payoff(), &g.row_payoff().negated());
    }

    #[test]
    fn harm_scenario_validation() {
        assert!(HarmScenario::new(0.0, 1.0, 0.0, 1.0).is_err());
        assert!(HarmScenario::new(-1.0, 1.0, 1.0, 1.0).is_err());
        assert!(HarmScenario::new(1.0, 0.0, 1.0, 1.0).is_err());
        assert!(HarmScenario::new(0.0, 1.0, 1.0, 1.0).is_ok());
    }

    #[test]
    fn expected_payoff_examples() {
        let mp = build_matching_pennies();
        let u = MixedProfile::new(
            MixedStrategy::uniform(2).unwrap(),
            MixedStrategy::uniform(2).unwrap(),
        );
        assert_eq!(expected_payoff(&mp, &u).unwrap(), (0.0, 0.0));
        assert_eq!(
            expected_payoff(&mp, &MixedProfile::pure(&mp, 0, 0).unwrap()).unwrap(),
            (1.0, -1.0)
        );
        let h = example_harm();
        let prof = MixedProfile::new(
            MixedStrategy::new(vec![0.75, 0.25]).unwrap(),
            MixedStrategy::new(vec![0.5, 0.5]).unwrap(),
        );
        assert_eq!(expected_payoff(&h, &prof).unwrap().0, -1.5);
        let bad = MixedProfile::new(
            MixedStrategy::uniform(3).unwrap(),
            MixedStrategy::uniform(2).unwrap(),
        );
        assert!(expected_payoff(&mp, &bad).is_err());
    }

    #[test]
    fn pure_nash_examples() {
        assert!(find_pure_nash(&build_matching_pennies()).is_empty());
        assert!(find_pure_nash(&example_harm()).is_empty());
        let saddle = NormalFormGame::zero_sum(vec![vec![2.0, 1.0], vec![4.0, 3.0]]).unwrap();
        assert_eq!(find_pure_nash(&saddle), vec![(1, 1)]);
        let eq = solve_2x2_zero_sum(&saddle).unwrap();
        assert_eq!(eq.value, 3.0);
        assert_eq!(eq.profile, MixedProfile::pure(&saddle, 1, 1).unwrap());
    }

    #[test]
    fn solve_examples() {
        let eq = solve_2x2_zero_sum(&example_harm()).unwrap();
        assert_eq!(eq.profile.row.probs(), &[0.75, 0.25]);
        assert_eq!(eq.value, -1.5);

        let eq = solve_2x2_zero_sum(&build_matching_pennies()).unwrap();
        assert_eq!(eq.profile.row.probs(), &[0.5, 0.5]);
        assert_eq!(eq.profile.col.probs(), &[0.5, 0.5]);
        assert_eq!(eq.value, 0.0);

        let g = NormalFormGame::zero_sum(vec![vec![3.0, 0.0], vec![1.0, 2.0]]).unwrap();
        let eq = solve_2x2_zero_sum(&g).unwrap();
        assert_eq!(eq.profile.row.probs(), &[0.25, 0.75]);
        assert_eq!(eq.profile.col.probs(), &[0.5, 0.5]);
        assert_eq!(eq.value, 1.5);
        assert!(is_nash(&g, &eq.profile, 1e-9));
    }

    #[test]
    fn solve_rejects_unsupported_games() {
        assert!(solve_2x2_zero_sum(&build_rock_paper_scissors()).is_err());
        let pd = NormalFormGame::bimatrix(
            vec![vec![3.0, 0.0], vec![5.0, 1.0]],
            vec![vec![3.0, 5.0], vec![0.0, 1.0]],
        )
        .unwrap();
        assert!(!pd.is_zero_sum());
        assert!(solve_2x2_zero_sum(&pd).is_err());
        assert!(fictitious_play(&pd, 10, 0).is_err());
    }

    #[test]
    fn degenerate_harm_game_is_pure() {
        // X is blameless-worthless: always harm X
        let g = build_harm_game(&HarmScenario::new(0.0, 2.0, 1.0, 6.0).unwrap()).unwrap();
        let eq = solve_2x2_zero_sum(&g).unwrap();
        assert_eq!(eq.profile.row.pure_action(), Some(0));
        assert_eq!(eq.value, 0.0);
        assert!(is_nash(&g, &eq.profile, 1e-9));
    }

    #[test]
    fn is_nash_examples() {
        let mp = build_matching_pennies();
        let u = MixedProfile::new(
            MixedStrategy::uniform(2).unwrap(),
            MixedStrategy::uniform(2).unwrap(),
        );
        assert!(is_nash(&mp, &u, 1e-9));
        assert!(!is_nash(&mp, &MixedProfile::pure(&mp, 0, 0).unwrap(), 1e-9));

        let h = example_harm();
        let eq = solve_2x2_zero_sum(&h).unwrap();
        assert!(is_nash(&h, &eq.profile, 1e-9));
        let env = h.col_payoff().against_row(eq.profile.row.probs());
        assert_eq!(env, vec![1.5, 1.5]);
        // off-equilibrium row mix is exploitable
        let off = MixedProfile::new(MixedStrategy::uniform(2).unwrap(), eq.profile.col.clone());
        assert!(!is_nash(&h, &off, 1e-9));
    }

    #[test]
    fn fictitious_play_examples() {
        let rps = fictitious_play(&build_rock_paper_scissors(), 100_000, 11).unwrap();
        for p in rps
            .profile
            .row
            .probs()
            .iter()
            .chain(rps.profile.col.probs())
        {
            assert!((p - 1.0 / 3.0).abs() <= 0.05, "{p}");
        }
        assert!(rps.value.abs() <= 0.01);
        assert!(rps.lower_bound <= 0.0 && 0.0 <= rps.upper_bound);

        let mp = fictitious_play(&build_matching_pennies(), 100_000, 11).unwrap();
        assert!(mp.value.abs() <= 0.01);

        let g = NormalFormGame::zero_sum(vec![vec![3.0, 0.0], vec![1.0, 2.0]]).unwrap();
        let fp = fictitious_play(&g, 100_000, 11).unwrap();
        let exact = solve_2x2_zero_sum(&g).unwrap().value;
        assert!((fp.value - exact).abs() <= 0.02, "{}", fp.value);
    }

    #[test]
    fn fictitious_play_is_seed_deterministic() {
        let g = build_rock_paper_scissors();
        assert_eq!(
            fictitious_play(&g, 5000, 4).unwrap(),
            fictitious_play(&g, 5000, 4).unwrap()
        );
        assert!(fictitious_play(&g, 0, 4).is_err());
    }

    #[test]
    fn game_json_forms() {
        let g =
            NormalFormGame::from_json(r#"{"row_payoff": [[1, -1], [-1, 1]], "zero_sum": true}"#)
                .unwrap();
        assert!(g.is_zero_sum());
        let g2 = NormalFormGame::from_json(
            r#"{"row_payoff": [[1, -1], [-1, 1]], "col_payoff": [[-1, 1], [1, -1]]}"#,
        )
        .unwrap();
        assert!(g2.is_zero_sum());
        assert_eq!(g.row_payoff(), g2.row_payoff());
        assert!(NormalFormGame::from_json(r#"{"row_payoff": [[1, 0]]}"#).is_err());
        assert!(NormalFormGame::from_json(
            r#"{"row_payoff": [[1, 0]], "col_payoff": [[1, 0]], "zero_sum": true}"#
        )
        .is_err());
        let mp = build_matching_pennies();
        assert_eq!(NormalFormGame::from_json(&mp.to_json()).unwrap(), mp);
    }

    /// Independent enumerator: a pure profile is an equilibrium iff no
    /// unilateral pure deviation strictly improves the deviator.
    fn brute_pure_nash(g: &NormalFormGame) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..g.num_row_actions() {
            for j in 0..g.num_col_actions() {
                let (u, v) = g.payoffs(i, j);
                let row_ok = (0..g.num_row_actions()).all(|k| g.payoffs(k, j).0 <= u);
                let col_ok = (0..g.num_col_actions()).all(|l| g.payoffs(i, l).1 <= v);
                if row_ok && col_ok {
                    out.push((i, j));
                }
            }
        }
        out
    }

    fn small_game() -> impl Strategy<Value = NormalFormGame> {
        (2usize..=4, 2usize..=4).prop_flat_map(|(r, c)| {
            let cell = (-3i32..=3).prop_map(f64::from);
            (
                proptest::collection::vec(proptest::collection::vec(cell.clone(), c), r),
                proptest::collection::vec(proptest::collection::vec(cell, c), r),
            )
                .prop_map(|(a, b)| NormalFormGame::bimatrix(a, b).unwrap())
        })
    }

    fn zero_sum_2x2() -> impl Strategy<Value = NormalFormGame> {
        proptest::collection::vec(-20i32..=20, 4).prop_map(|v| {
            NormalFormGame::zero_sum(vec![
                vec![v[0] as f64, v[1] as f64],
                vec![v[2] as f64, v[3] as f64],
            ])
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn pure_nash_matches_enumeration(g in small_game()) {
            prop_assert_eq!(find_pure_nash(&g), brute_pure_nash(&g));
        }

        #[test]
        fn solver_output_is_nash(g in zero_sum_2x2()) {
            let eq = solve_2x2_zero_sum(&g).unwrap();
            prop_assert!(is_nash(&g, &eq.profile, 1e-9));
            let (v, _) = expected_payoff(&g, &eq.profile).unwrap();
            prop_assert!((v - eq.value).abs() < 1e-9);
        }

        #[test]
        fn fully_mixed_equilibria_are_indifferent(g in zero_sum_2x2()) {
            let eq = solve_2x2_zero_sum(&g).unwrap();
            if eq.profile.row.pure_action().is_none() && eq.profile.col.pure_action().is_none() {
                let r = g.row_payoff().against_col(eq.profile.col.probs());
                let c = g.col_payoff().against_row(eq.profile.row.probs());
                prop_assert!((r[0] - r[1]).abs() < 1e-9);
                prop_assert!((c[0] - c[1]).abs() < 1e-9);
            }
        }

        #[test]
        fn scaling_preserves_profile(g in zero_sum_2x2(), k in 0.1f64..50.0) {
            let base = solve_2x2_zero_sum(&g).unwrap();
            let scaled = solve_2x2_zero_sum(&g.scaled(k).unwrap()).unwrap();
            for (x, y) in base.profile.row.probs().iter().zip(scaled.profile.row.probs()) {
                prop_assert!((x - y).abs() < 1e-9);
            }
            for (x, y) in base.profile.col.probs().iter().zip(scaled.profile.col.probs()) {
                prop_assert!((x - y).abs() < 1e-9);
            }
            prop_assert!((scaled.value - k * base.value).abs() < 1e-9 * (1.0 + scaled.value.abs()));
        }

        #[test]
        fn harm_mix_matches_closed_form(mx in 0.01f64..10.0, vx in 0.01f64..10.0, my in 0.01f64..10.0, vy in 0.01f64..10.0) {
            let s = HarmScenario::new(mx, vx, my, vy).unwrap();
            let g = build_harm_game(&s).unwrap();
            prop_assert!(find_pure_nash(&g).is_empty());
            let eq = solve_2x2_zero_sum(&g).unwrap();
            let total = s.loss_x() + s.loss_y();
            prop_assert_eq!(eq.profile.row.probs()[0], s.loss_y() / total);
            prop_assert_eq!(eq.profile.row.probs()[1], s.loss_x() / total);
        }
    }
}
