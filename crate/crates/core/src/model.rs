//! Explicit classical model of the quantized game.
//!
//! The table stores, for every strategy profile, the outcome distribution of
//! the quantum pipeline and the resulting payoffs. A mediator holding the
//! table can reproduce every statistic of the quantum game with ordinary
//! randomness, since the final measurement happens in one place.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{BimatrixGame, COMPUTED_PAYOFF_TOL};
use crate::numfmt::format_sig9;
use crate::quantizer::{
    check_strategy_set, require_two_by_two, OutcomeDistribution, QuantizationConfig, Quantizer,
    StrategyUnitary, OUTCOME_LABELS,
};

#[derive(Debug, Clone, PartialEq)]
pub struct ModelEntry {
    pub row: String,
    pub col: String,
    pub distribution: OutcomeDistribution,
    pub payoffs: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalModelTable {
    players: (String, String),
    gamma: f64,
    strategies: Vec<StrategyUnitary>,
    /// Row-major over `strategies × strategies`.
    entries: Vec<ModelEntry>,
}

impl ClassicalModelTable {
    /// Writes down the outcome distribution and payoffs of every profile.
    pub fn build(
        game: &BimatrixGame,
        strategies: &[StrategyUnitary],
        config: QuantizationConfig,
    ) -> Result<Self> {
        require_two_by_two(game)?;
        check_strategy_set(strategies)?;
        let quantizer = Quantizer::new(config);
        let mut entries = Vec::with_capacity(strategies.len() * strategies.len());
        for alice in strategies {
            for bob in strategies {
                let distribution = quantizer.outcome_distribution(alice, bob)?;
                entries.push(ModelEntry {
                    row: alice.label().to_string(),
                    col: bob.label().to_string(),
                    payoffs: distribution.expectation(game)?,
                    distribution,
                });
            }
        }
        let (a, b) = game.players();
        Ok(ClassicalModelTable {
            players: (a.to_string(), b.to_string()),
            gamma: config.gamma(),
            strategies: strategies.to_vec(),
            entries,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn strategies(&self) -> &[StrategyUnitary] {
        &self.strategies
    }

    pub fn entries(&self) -> &[ModelEntry] {
        &self.entries
    }

    pub fn entry(&self, row: &str, col: &str) -> Result<&ModelEntry> {
        self.entries
            .iter()
            .find(|e| e.row == row && e.col == col)
            .ok_or_else(|| Error::UnknownProfile {
                row: row.to_string(),
                col: col.to_string(),
            })
    }

    /// Overwrites the stored payoffs of one profile.
    pub fn set_payoffs(&mut self, row: &str, col: &str, payoffs: (f64, f64)) -> Result<()> {
        let entry = self
            .entries
            .iter_mut()
            .find(|e| e.row == row && e.col == col)
            .ok_or_else(|| Error::UnknownProfile {
                row: row.to_string(),
                col: col.to_string(),
            })?;
        entry.payoffs = payoffs;
        Ok(())
    }

    /// Drops one profile from the table.
    pub fn remove_entry(&mut self, row: &str, col: &str) -> Result<ModelEntry> {
        let index = self
            .entries
            .iter()
            .position(|e| e.row == row && e.col == col)
            .ok_or_else(|| Error::UnknownProfile {
                row: row.to_string(),
                col: col.to_string(),
            })?;
        Ok(self.entries.remove(index))
    }

    fn labels(&self) -> Vec<String> {
        self.strategies.iter().map(|s| s.label().to_string()).collect()
    }

    fn check_layout(&self) -> Result<()> {
        let labels = self.labels();
        let n = labels.len();
        if self.entries.len() != n * n {
            return Err(Error::StrategySetMismatch(format!(
                "{} entries for {n} strategies",
                self.entries.len()
            )));
        }
        for (k, entry) in self.entries.iter().enumerate() {
            let (row, col) = (&labels[k / n], &labels[k % n]);
            if &entry.row != row || &entry.col != col {
                return Err(Error::StrategySetMismatch(format!(
                    "entry {k} is ({},{}), expected ({row},{col})",
                    entry.row, entry.col
                )));
            }
        }
        Ok(())
    }

    /// The stored payoffs as a plain classical game.
    pub fn payoff_game(&self) -> Result<BimatrixGame> {
        self.check_layout()?;
        let labels = self.labels();
        Ok(BimatrixGame::new(
            (self.players.0.as_str(), self.players.1.as_str()),
            labels.clone(),
            labels,
            self.entries.iter().map(|e| e.payoffs).collect(),
        )?
        .with_tolerance(COMPUTED_PAYOFF_TOL))
    }

    /// Recomputes every profile through the quantum pipeline and compares it
    /// with the stored payoffs and with the extended matrix.
    pub fn verify_equivalence(
        &self,
        game: &BimatrixGame,
        config: QuantizationConfig,
        tol: f64,
    ) -> Result<EquivalenceReport> {
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::ParameterOutOfRange {
                name: "tol",
                value: tol,
                min: f64::MIN_POSITIVE,
                max: f64::INFINITY,
            });
        }
        require_two_by_two(game)?;
        self.check_layout()?;
        let quantizer = Quantizer::new(config);
        let extended = quantizer.extended_matrix(game, &self.strategies)?;
        let n = self.strategies.len();
        let mut mismatches = Vec::new();
        for (k, entry) in self.entries.iter().enumerate() {
            let fresh = quantizer.expected_payoffs(
                game,
                &self.strategies[k / n],
                &self.strategies[k % n],
            )?;
            let from_matrix = extended.payoffs()[k];
            let from_distribution = entry.distribution.expectation(game)?;
            let far = |a: (f64, f64), b: (f64, f64)| {
                (a.0 - b.0).abs() > tol || (a.1 - b.1).abs() > tol
            };
            if far(entry.payoffs, fresh)
                || far(entry.payoffs, from_matrix)
                || far(entry.payoffs, from_distribution)
            {
                mismatches.push(Mismatch {
                    row: entry.row.clone(),
                    col: entry.col.clone(),
                    stored: entry.payoffs,
                    recomputed: fresh,
                });
            }
        }
        Ok(EquivalenceReport { tol, mismatches })
    }

    /// Draws `trials` i.i.d. outcomes for one profile from its stored
    /// distribution, by inverse CDF over CC, CD, DC, DD.
    pub fn sample_play(&self, row: &str, col: &str, seed: u64, trials: u64) -> Result<SampleReport> {
        if trials == 0 {
            return Err(Error::NoTrials);
        }
        let entry = self.entry(row, col)?;
        let probs = entry.distribution.probabilities();
        let mut cumulative = [0.0; 4];
        let mut running = 0.0;
        for (c, p) in cumulative.iter_mut().zip(probs) {
            running += p;
            *c = running;
        }
        // Rounding can leave the last cumulative value just below u.
        let last_supported = probs.iter().rposition(|&p| p > 0.0).unwrap_or(3);

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut counts = [0u64; 4];
        for _ in 0..trials {
            let u: f64 = rng.random();
            let outcome = cumulative
                .iter()
                .position(|&c| u < c)
                .unwrap_or(last_supported);
            counts[outcome] += 1;
        }
        let empirical = counts.map(|c| c as f64 / trials as f64);
        Ok(SampleReport {
            row: entry.row.clone(),
            col: entry.col.clone(),
            trials,
            counts,
            l1_distance: entry.distribution.l1_distance(&empirical),
        })
    }

    /// Payoff view in the game file format, followed by a `distributions:`
    /// section with one `<row> <col> <pCC> <pCD> <pDC> <pDD>` line per profile.
    pub fn to_export_string(&self) -> Result<String> {
        let mut out = self.payoff_game()?.to_canonical_string();
        out.push_str("distributions:\n");
        for entry in &self.entries {
            let p = entry.distribution.probabilities();
            out.push_str(&format!(
                "{} {} {} {} {} {}\n",
                entry.row,
                entry.col,
                format_sig9(p[0]),
                format_sig9(p[1]),
                format_sig9(p[2]),
                format_sig9(p[3])
            ));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub row: String,
    pub col: String,
    pub stored: (f64, f64),
    pub recomputed: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub tol: f64,
    pub mismatches: Vec<Mismatch>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

impl fmt::Display for EquivalenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return writeln!(f, "equivalence: PASS (tol {:e})", self.tol);
        }
        writeln!(f, "equivalence: FAIL (tol {:e})", self.tol)?;
        for m in &self.mismatches {
            writeln!(
                f,
                "  ({},{}) stored ({}, {}) recomputed ({}, {})",
                m.row,
                m.col,
                format_sig9(m.stored.0),
                format_sig9(m.stored.1),
                format_sig9(m.recomputed.0),
                format_sig9(m.recomputed.1)
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleReport {
    pub row: String,
    pub col: String,
    pub trials: u64,
    /// Counts of CC, CD, DC, DD.
    pub counts: [u64; 4],
    pub l1_distance: f64,
}

impl fmt::Display for SampleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let counts: Vec<String> = OUTCOME_LABELS
            .iter()
            .zip(self.counts)
            .map(|(l, c)| format!("{l}={c}"))
            .collect();
        writeln!(
            f,
            "sample ({},{}) trials {}: {} l1 {}",
            self.row,
            self.col,
            self.trials,
            counts.join(" "),
            format_sig9(self.l1_distance)
        )
    }
}
