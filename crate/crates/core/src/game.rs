//! Two-player bimatrix games: file format, pure Nash enumeration, dominance,
//! Pareto comparison, subgame restriction and correlated (mediated) play.
//!
//! Game file format (UTF-8, `#` starts a comment, blank lines ignored):
//!
//! ```text
//! players: Alice Bob
//! rows: C D
//! cols: C D
//! payoffs:
//! C C 3 3
//! C D 0 5
//! D C 5 0
//! D D 1 1
//! ```
//!
//! Every `(row, col)` pair must appear exactly once, in any order.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::numfmt::format_sig9;

/// Tolerance used when comparing payoffs produced by the quantizer.
pub const COMPUTED_PAYOFF_TOL: f64 = 1e-9;

const DISTRIBUTION_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Player {
    Row,
    Col,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::Row => Player::Col,
            Player::Col => Player::Row,
        }
    }
}

/// A joint pure move, by index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Profile {
    pub row: usize,
    pub col: usize,
}

impl Profile {
    pub fn new(row: usize, col: usize) -> Self {
        Profile { row, col }
    }

    pub fn transposed(self) -> Self {
        Profile {
            row: self.col,
            col: self.row,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EquilibriumReport {
    /// Profiles where every unilateral deviation strictly hurts the deviator.
    pub strict_nash: Vec<Profile>,
    /// Profiles where no unilateral deviation strictly helps the deviator.
    pub weak_nash: Vec<Profile>,
    /// The profile of strictly dominant moves, when both players have one.
    pub dominant_profile: Option<Profile>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BimatrixGame {
    row_player: String,
    col_player: String,
    row_moves: Vec<String>,
    col_moves: Vec<String>,
    /// Row-major `(row payoff, col payoff)` pairs.
    payoffs: Vec<(f64, f64)>,
    tolerance: f64,
}

fn validate_label(label: &str) -> Result<()> {
    if label.is_empty() || label.contains(char::is_whitespace) || label.contains('#') {
        Err(Error::InvalidStrategySpec(label.to_string()))
    } else {
        Ok(())
    }
}

fn check_unique(labels: &[String]) -> Result<()> {
    let mut seen = HashSet::new();
    for label in labels {
        validate_label(label)?;
        if !seen.insert(label.as_str()) {
            return Err(Error::DuplicateLabel(label.clone()));
        }
    }
    Ok(())
}

impl BimatrixGame {
    /// Builds a game from row-major payoff pairs. Payoffs are compared exactly.
    pub fn new(
        players: (impl Into<String>, impl Into<String>),
        row_moves: Vec<String>,
        col_moves: Vec<String>,
        payoffs: Vec<(f64, f64)>,
    ) -> Result<Self> {
        let (row_player, col_player) = (players.0.into(), players.1.into());
        validate_label(&row_player)?;
        validate_label(&col_player)?;
        if row_moves.is_empty() || col_moves.is_empty() {
            return Err(Error::EmptySubset);
        }
        check_unique(&row_moves)?;
        check_unique(&col_moves)?;
        if payoffs.len() != row_moves.len() * col_moves.len() {
            return Err(Error::ShapeMismatch {
                expected_rows: row_moves.len(),
                expected_cols: col_moves.len(),
                rows: payoffs.len() / col_moves.len().max(1),
                cols: col_moves.len(),
            });
        }
        if payoffs
            .iter()
            .any(|(a, b)| !a.is_finite() || !b.is_finite())
        {
            return Err(Error::NonFinite("payoff"));
        }
        Ok(BimatrixGame {
            row_player,
            col_player,
            row_moves,
            col_moves,
            payoffs,
            tolerance: 0.0,
        })
    }

    /// Sets the payoff comparison tolerance used by the equilibrium,
    /// dominance and Pareto operations.
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance.max(0.0);
        self
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn players(&self) -> (&str, &str) {
        (&self.row_player, &self.col_player)
    }

    pub fn row_moves(&self) -> &[String] {
        &self.row_moves
    }

    pub fn col_moves(&self) -> &[String] {
        &self.col_moves
    }

    pub fn moves(&self, player: Player) -> &[String] {
        match player {
            Player::Row => &self.row_moves,
            Player::Col => &self.col_moves,
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.row_moves.len(), self.col_moves.len())
    }

    pub fn payoff(&self, p: Profile) -> (f64, f64) {
        self.payoffs[p.row * self.col_moves.len() + p.col]
    }

    pub fn payoffs(&self) -> &[(f64, f64)] {
        &self.payoffs
    }

    /// Overwrites one payoff pair.
    pub fn set_payoff(&mut self, p: Profile, value: (f64, f64)) -> Result<()> {
        self.check_profile(p)?;
        if !value.0.is_finite() || !value.1.is_finite() {
            return Err(Error::NonFinite("payoff"));
        }
        let cols = self.col_moves.len();
        self.payoffs[p.row * cols + p.col] = value;
        Ok(())
    }

    fn player_payoff(&self, player: Player, p: Profile) -> f64 {
        let (r, c) = self.payoff(p);
        match player {
            Player::Row => r,
            Player::Col => c,
        }
    }

    pub fn check_profile(&self, p: Profile) -> Result<()> {
        let (rows, cols) = self.shape();
        if p.row >= rows {
            return Err(Error::IndexOutOfBounds {
                index: p.row,
                len: rows,
            });
        }
        if p.col >= cols {
            return Err(Error::IndexOutOfBounds {
                index: p.col,
                len: cols,
            });
        }
        Ok(())
    }

    pub fn index_of(&self, player: Player, label: &str) -> Result<usize> {
        self.moves(player)
            .iter()
            .position(|m| m == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn profile_by_labels(&self, row: &str, col: &str) -> Result<Profile> {
        Ok(Profile::new(
            self.index_of(Player::Row, row)?,
            self.index_of(Player::Col, col)?,
        ))
    }

    /// `(R,C)` style label for a profile.
    pub fn profile_label(&self, p: Profile) -> String {
        format!("({},{})", self.row_moves[p.row], self.col_moves[p.col])
    }

    fn gt(&self, a: f64, b: f64) -> bool {
        a > b + self.tolerance
    }

    fn profile_with(&self, player: Player, own: usize, opponent: usize) -> Profile {
        match player {
            Player::Row => Profile::new(own, opponent),
            Player::Col => Profile::new(opponent, own),
        }
    }

    fn improves(&self, player: Player, p: Profile) -> bool {
        let (own, opponent) = match player {
            Player::Row => (p.row, p.col),
            Player::Col => (p.col, p.row),
        };
        let current = self.player_payoff(player, p);
        (0..self.moves(player).len()).any(|alt| {
            alt != own
                && self.gt(
                    self.player_payoff(player, self.profile_with(player, alt, opponent)),
                    current,
                )
        })
    }

    fn strictly_worse_everywhere(&self, player: Player, p: Profile) -> bool {
        let (own, opponent) = match player {
            Player::Row => (p.row, p.col),
            Player::Col => (p.col, p.row),
        };
        let current = self.player_payoff(player, p);
        (0..self.moves(player).len()).all(|alt| {
            alt == own
                || self.gt(
                    current,
                    self.player_payoff(player, self.profile_with(player, alt, opponent)),
                )
        })
    }

    fn profiles(&self) -> impl Iterator<Item = Profile> + '_ {
        let (rows, cols) = self.shape();
        (0..rows).flat_map(move |r| (0..cols).map(move |c| Profile::new(r, c)))
    }

    /// Exhaustive pure-strategy Nash check over every profile.
    pub fn pure_nash(&self) -> EquilibriumReport {
        let mut report = EquilibriumReport::default();
        for p in self.profiles() {
            if !self.improves(Player::Row, p) && !self.improves(Player::Col, p) {
                report.weak_nash.push(p);
                if self.strictly_worse_everywhere(Player::Row, p)
                    && self.strictly_worse_everywhere(Player::Col, p)
                {
                    report.strict_nash.push(p);
                }
            }
        }
        report.dominant_profile = match (
            self.strictly_dominant(Player::Row),
            self.strictly_dominant(Player::Col),
        ) {
            (Some(r), Some(c)) => Some(Profile::new(r, c)),
            _ => None,
        };
        report
    }

    /// All of `player`'s payoff-maximizing moves against a fixed opponent move.
    pub fn best_responses(&self, player: Player, opponent_move: usize) -> Result<Vec<usize>> {
        let opponent_len = self.moves(player.other()).len();
        if opponent_move >= opponent_len {
            return Err(Error::IndexOutOfBounds {
                index: opponent_move,
                len: opponent_len,
            });
        }
        let values: Vec<f64> = (0..self.moves(player).len())
            .map(|own| self.player_payoff(player, self.profile_with(player, own, opponent_move)))
            .collect();
        let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(values
            .iter()
            .enumerate()
            .filter(|(_, &v)| !self.gt(best, v))
            .map(|(i, _)| i)
            .collect())
    }

    /// The move that beats every other own move against every opponent move.
    pub fn strictly_dominant(&self, player: Player) -> Option<usize> {
        let own_len = self.moves(player).len();
        let opponent_len = self.moves(player.other()).len();
        (0..own_len).find(|&candidate| {
            (0..own_len).all(|alt| {
                alt == candidate
                    || (0..opponent_len).all(|o| {
                        self.gt(
                            self.player_payoff(player, self.profile_with(player, candidate, o)),
                            self.player_payoff(player, self.profile_with(player, alt, o)),
                        )
                    })
            })
        })
    }

    /// Profiles weakly better for both players and strictly better for one.
    pub fn pareto_dominated(&self, p: Profile) -> Result<Vec<Profile>> {
        self.check_profile(p)?;
        let (pr, pc) = self.payoff(p);
        Ok(self
            .profiles()
            .filter(|&q| {
                let (qr, qc) = self.payoff(q);
                !self.gt(pr, qr) && !self.gt(pc, qc) && (self.gt(qr, pr) || self.gt(qc, pc))
            })
            .collect())
    }

    /// Subgame on the given labels; original move order and payoffs are kept.
    pub fn restrict<S: AsRef<str>>(&self, row_labels: &[S], col_labels: &[S]) -> Result<Self> {
        let rows = self.select(Player::Row, row_labels)?;
        let cols = self.select(Player::Col, col_labels)?;
        let payoffs = rows
            .iter()
            .flat_map(|&r| cols.iter().map(move |&c| Profile::new(r, c)))
            .map(|p| self.payoff(p))
            .collect();
        Ok(BimatrixGame {
            row_player: self.row_player.clone(),
            col_player: self.col_player.clone(),
            row_moves: rows.iter().map(|&r| self.row_moves[r].clone()).collect(),
            col_moves: cols.iter().map(|&c| self.col_moves[c].clone()).collect(),
            payoffs,
            tolerance: self.tolerance,
        })
    }

    fn select<S: AsRef<str>>(&self, player: Player, labels: &[S]) -> Result<Vec<usize>> {
        if labels.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut wanted = vec![false; self.moves(player).len()];
        for label in labels {
            wanted[self.index_of(player, label.as_ref())?] = true;
        }
        Ok(wanted
            .iter()
            .enumerate()
            .filter(|(_, &w)| w)
            .map(|(i, _)| i)
            .collect())
    }

    /// Expected payoffs when a mediator draws the joint move from `d`.
    pub fn correlated_payoff(&self, d: &JointDistribution) -> Result<(f64, f64)> {
        let (rows, cols) = self.shape();
        if d.shape() != (rows, cols) {
            return Err(Error::ShapeMismatch {
                expected_rows: rows,
                expected_cols: cols,
                rows: d.rows,
                cols: d.cols,
            });
        }
        Ok(self
            .payoffs
            .iter()
            .zip(&d.weights)
            .fold((0.0, 0.0), |(a, b), (&(r, c), &w)| (a + w * r, b + w * c)))
    }

    /// The same game seen with the players' roles exchanged.
    pub fn transpose(&self) -> Self {
        let (rows, cols) = self.shape();
        let mut payoffs = Vec::with_capacity(rows * cols);
        for c in 0..cols {
            for r in 0..rows {
                let (a, b) = self.payoff(Profile::new(r, c));
                payoffs.push((b, a));
            }
        }
        BimatrixGame {
            row_player: self.col_player.clone(),
            col_player: self.row_player.clone(),
            row_moves: self.col_moves.clone(),
            col_moves: self.row_moves.clone(),
            payoffs,
            tolerance: self.tolerance,
        }
    }

    /// Largest absolute payoff difference; errors if the shapes differ.
    pub fn max_payoff_diff(&self, other: &BimatrixGame) -> Result<f64> {
        if self.shape() != other.shape() {
            let (expected_rows, expected_cols) = self.shape();
            let (rows, cols) = other.shape();
            return Err(Error::ShapeMismatch {
                expected_rows,
                expected_cols,
                rows,
                cols,
            });
        }
        Ok(self
            .payoffs
            .iter()
            .zip(&other.payoffs)
            .map(|(a, b)| (a.0 - b.0).abs().max((a.1 - b.1).abs()))
            .fold(0.0, f64::max))
    }

    /// Canonical serialization in the game file format.
    pub fn to_canonical_string(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for BimatrixGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "players: {} {}", self.row_player, self.col_player)?;
        writeln!(f, "rows: {}", self.row_moves.join(" "))?;
        writeln!(f, "cols: {}", self.col_moves.join(" "))?;
        writeln!(f, "payoffs:")?;
        for p in self.profiles() {
            let (r, c) = self.payoff(p);
            writeln!(
                f,
                "{} {} {} {}",
                self.row_moves[p.row],
                self.col_moves[p.col],
                format_sig9(r),
                format_sig9(c)
            )?;
        }
        Ok(())
    }
}

impl std::str::FromStr for BimatrixGame {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_game(s)
    }
}

fn header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    key: &str,
    last_line: usize,
) -> Result<(usize, Vec<&'a str>)> {
    let (line, text) = lines.next().ok_or_else(|| Error::Syntax {
        line: last_line + 1,
        message: format!("expected `{key}:` header, found end of input"),
    })?;
    let rest = text
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix(':'))
        .ok_or_else(|| Error::Syntax {
            line,
            message: format!("expected `{key}:` header"),
        })?;
    Ok((line, rest.split_whitespace().collect()))
}

fn to_labels(tokens: &[&str], line: usize, key: &str) -> Result<Vec<String>> {
    if tokens.is_empty() {
        return Err(Error::Syntax {
            line,
            message: format!("`{key}:` needs at least one label"),
        });
    }
    let labels: Vec<String> = tokens.iter().map(|t| t.to_string()).collect();
    check_unique(&labels)?;
    Ok(labels)
}

fn parse_number(token: &str, line: usize) -> Result<f64> {
    match token.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::Syntax {
            line,
            message: format!("invalid payoff {token:?}"),
        }),
    }
}

/// Parses the line-oriented game file format.
pub fn parse_game(text: &str) -> Result<BimatrixGame> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (line, players) = header(&mut lines, "players", 0)?;
    if players.len() != 2 {
        return Err(Error::Syntax {
            line,
            message: "`players:` needs exactly two names".to_string(),
        });
    }
    let (line, rows) = header(&mut lines, "rows", line)?;
    let row_moves = to_labels(&rows, line, "rows")?;
    let (line, cols) = header(&mut lines, "cols", line)?;
    let col_moves = to_labels(&cols, line, "cols")?;
    let (line, rest) = header(&mut lines, "payoffs", line)?;
    if !rest.is_empty() {
        return Err(Error::Syntax {
            line,
            message: "unexpected text after `payoffs:`".to_string(),
        });
    }

    let ncols = col_moves.len();
    let mut cells: Vec<Option<(f64, f64)>> = vec![None; row_moves.len() * ncols];
    for (line, text) in lines {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.len() != 4 {
            return Err(Error::Syntax {
                line,
                message: format!(
                    "expected `<row> <col> <rowPayoff> <colPayoff>`, got {} fields",
                    tokens.len()
                ),
            });
        }
        let lookup = |labels: &[String], token: &str| {
            labels
                .iter()
                .position(|l| l == token)
                .ok_or_else(|| Error::Syntax {
                    line,
                    message: format!("unknown move label {token:?}"),
                })
        };
        let r = lookup(&row_moves, tokens[0])?;
        let c = lookup(&col_moves, tokens[1])?;
        let value = (parse_number(tokens[2], line)?, parse_number(tokens[3], line)?);
        let cell = &mut cells[r * ncols + c];
        if cell.is_some() {
            return Err(Error::DuplicateEntry {
                line,
                row: tokens[0].to_string(),
                col: tokens[1].to_string(),
            });
        }
        *cell = Some(value);
    }

    let mut payoffs = Vec::with_capacity(cells.len());
    for (i, cell) in cells.into_iter().enumerate() {
        match cell {
            Some(v) => payoffs.push(v),
            None => {
                return Err(Error::MissingEntry {
                    row: row_moves[i / ncols].clone(),
                    col: col_moves[i % ncols].clone(),
                })
            }
        }
    }
    BimatrixGame::new((players[0], players[1]), row_moves, col_moves, payoffs)
}

/// A mediator's probability distribution over joint moves.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    rows: usize,
    cols: usize,
    weights: Vec<f64>,
}

impl JointDistribution {
    /// Row-major weights; must be non-negative and sum to 1 within 1e-12.
    pub fn new(rows: usize, cols: usize, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != rows * cols || rows == 0 || cols == 0 {
            return Err(Error::InvalidDistribution(format!(
                "{} weights for a {rows}x{cols} shape",
                weights.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidDistribution(
                "weights must be finite and non-negative".to_string(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > DISTRIBUTION_SUM_TOL {
            return Err(Error::InvalidDistribution(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(JointDistribution {
            rows,
            cols,
            weights,
        })
    }

    pub fn point_mass(rows: usize, cols: usize, at: Profile) -> Result<Self> {
        if at.row >= rows || at.col >= cols {
            return Err(Error::InvalidDistribution(format!(
                "point ({},{}) outside {rows}x{cols}",
                at.row, at.col
            )));
        }
        let mut weights = vec![0.0; rows * cols];
        weights[at.row * cols + at.col] = 1.0;
        Self::new(rows, cols, weights)
    }

    pub fn uniform(rows: usize, cols: usize) -> Result<Self> {
        let n = rows * cols;
        Self::new(rows, cols, vec![1.0 / n as f64; n])
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn weight(&self, p: Profile) -> f64 {
        self.weights[p.row * self.cols + p.col]
    }
}
