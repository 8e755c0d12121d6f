//! Entangling quantization of a 2x2 game.
//!
//! The two qubits start in `|CC⟩`, pass through the entangler `J(γ)`, each
//! player applies a local unitary, `J(γ)†` undoes the entangling step and the
//! pair is measured in the `{C, D}` basis. Basis state 0 is the first
//! classical move, Alice is the first tensor factor, and the outcome index is
//! `2 * alice_bit + bob_bit`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use rayon::prelude::*;

use crate::complexmath::{Complex, ComplexMatrix, ComplexVector};
use crate::error::{Error, Result};
use crate::game::{BimatrixGame, Profile, COMPUTED_PAYOFF_TOL};
use crate::numfmt::format_sig9;

/// Structural tolerance for unitarity and normalization checks.
pub const STRUCTURAL_TOL: f64 = 1e-12;

/// Tolerance for ties in a best-response scan.
pub const SCAN_TIE_TOL: f64 = 1e-12;

/// Slack admitted on angle range checks so computed endpoints such as
/// `π * k / k` are accepted.
const ANGLE_SLACK: f64 = 1e-12;

const PROBABILITY_RESIDUE: f64 = 1e-15;

/// Labels of the four measurement outcomes, in basis order.
pub const OUTCOME_LABELS: [&str; 4] = ["CC", "CD", "DC", "DD"];

fn check_range(name: &'static str, value: f64, min: f64, max: f64) -> Result<f64> {
    if value.is_finite() && value >= min - ANGLE_SLACK && value <= max + ANGLE_SLACK {
        Ok(value.clamp(min, max))
    } else {
        Err(Error::ParameterOutOfRange {
            name,
            value,
            min,
            max,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrategyParams {
    pub theta: f64,
    pub phi: f64,
}

/// A player's local move: a 2x2 unitary with a label.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyUnitary {
    label: String,
    matrix: ComplexMatrix,
    params: Option<StrategyParams>,
}

fn angle_matrix(theta: f64, phi: f64) -> ComplexMatrix {
    let (s, c) = (theta / 2.0).sin_cos();
    let phase = Complex::from_polar(1.0, phi);
    ComplexMatrix::from_rows([
        [phase * c, Complex::new(s, 0.0)],
        [Complex::new(-s, 0.0), phase.conj() * c],
    ])
    .expect("finite 2x2 entries")
}

impl StrategyUnitary {
    /// `U(θ, φ) = [[e^{iφ} cos(θ/2), sin(θ/2)], [−sin(θ/2), e^{−iφ} cos(θ/2)]]`
    /// with `θ ∈ [0, π]` and `φ ∈ [0, π/2]`.
    pub fn from_angles(theta: f64, phi: f64) -> Result<Self> {
        let theta = check_range("theta", theta, 0.0, PI)?;
        let phi = check_range("phi", phi, 0.0, FRAC_PI_2)?;
        Ok(StrategyUnitary {
            label: format!("U({},{})", format_sig9(theta), format_sig9(phi)),
            matrix: angle_matrix(theta, phi),
            params: Some(StrategyParams { theta, phi }),
        })
    }

    /// An arbitrary 2x2 unitary. No angle parameters are attached.
    pub fn explicit(label: impl Into<String>, matrix: ComplexMatrix) -> Result<Self> {
        let label = label.into();
        if matrix.dim() != 2 {
            return Err(Error::UnsupportedDimension(matrix.dim()));
        }
        if !matrix.is_unitary(STRUCTURAL_TOL) {
            return Err(Error::NotUnitary(label));
        }
        Ok(StrategyUnitary {
            label,
            matrix,
            params: None,
        })
    }

    /// The classical move C, `U(0, 0) = I`.
    pub fn cooperate() -> Self {
        Self::from_angles(0.0, 0.0).unwrap().with_label("C")
    }

    /// The classical move D, `U(π, 0)`.
    pub fn defect() -> Self {
        Self::from_angles(PI, 0.0).unwrap().with_label("D")
    }

    /// The move Q, `U(0, π/2) = diag(i, −i)`.
    pub fn quantum() -> Self {
        Self::from_angles(0.0, FRAC_PI_2).unwrap().with_label("Q")
    }

    pub fn named(label: &str) -> Option<Self> {
        match label {
            "C" => Some(Self::cooperate()),
            "D" => Some(Self::defect()),
            "Q" => Some(Self::quantum()),
            _ => None,
        }
    }

    /// `C`, `D`, `Q`, or an angle pair written `theta:phi` or `theta,phi`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if let Some(named) = Self::named(spec) {
            return Ok(named);
        }
        let (theta, phi) = spec
            .split_once(':')
            .or_else(|| spec.split_once(','))
            .ok_or_else(|| Error::InvalidStrategySpec(spec.to_string()))?;
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidStrategySpec(spec.to_string()))
        };
        Self::from_angles(parse(theta)?, parse(phi)?)
    }

    /// Comma-separated list of `C`, `D`, `Q` or `theta:phi` items.
    pub fn parse_list(spec: &str) -> Result<Vec<Self>> {
        let strategies = spec
            .split(',')
            .map(Self::parse)
            .collect::<Result<Vec<_>>>()?;
        check_strategy_set(&strategies)?;
        Ok(strategies)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn params(&self) -> Option<StrategyParams> {
        self.params
    }
}

pub(crate) fn check_strategy_set(strategies: &[StrategyUnitary]) -> Result<()> {
    if strategies.is_empty() {
        return Err(Error::NoStrategies);
    }
    for (i, s) in strategies.iter().enumerate() {
        if strategies[..i].iter().any(|t| t.label == s.label) {
            return Err(Error::DuplicateLabel(s.label.clone()));
        }
    }
    Ok(())
}

/// The entangling parameter γ ∈ [0, π/2]; π/2 is maximal entanglement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantizationConfig {
    gamma: f64,
}

impl QuantizationConfig {
    pub fn new(gamma: f64) -> Result<Self> {
        Ok(QuantizationConfig {
            gamma: check_range("gamma", gamma, 0.0, FRAC_PI_2)?,
        })
    }

    pub fn maximal() -> Self {
        QuantizationConfig { gamma: FRAC_PI_2 }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

impl Default for QuantizationConfig {
    fn default() -> Self {
        Self::maximal()
    }
}

/// `J(γ) = cos(γ/2)·I₄ + i·sin(γ/2)·(D⊗D)`, the closed form of
/// `exp(i·(γ/2)·(D⊗D))` since `(D⊗D)² = I₄`.
pub fn build_entangler(gamma: f64) -> Result<ComplexMatrix> {
    let gamma = check_range("gamma", gamma, 0.0, FRAC_PI_2)?;
    let (s, c) = (gamma / 2.0).sin_cos();
    let d = ComplexMatrix::from_real_rows([[0.0, 1.0], [-1.0, 0.0]])?;
    let dd = d.tensor(&d)?;
    ComplexMatrix::identity(4)?
        .scale(Complex::new(c, 0.0))
        .add(&dd.scale(Complex::new(0.0, s)))
}

/// Probabilities of the outcomes CC, CD, DC, DD.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutcomeDistribution {
    probs: [f64; 4],
}

impl OutcomeDistribution {
    /// The sum must be 1 within 1e-12. Entries with magnitude below 1e-15 are
    /// squared-amplitude residue: they are set to 0 and the rest renormalized.
    pub fn new(probs: [f64; 4]) -> Result<Self> {
        if probs.iter().any(|p| !p.is_finite() || *p < -PROBABILITY_RESIDUE) {
            return Err(Error::InvalidDistribution(format!(
                "outcome probabilities {probs:?}"
            )));
        }
        let probs = probs.map(|p| if p < PROBABILITY_RESIDUE { 0.0 } else { p });
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > STRUCTURAL_TOL {
            return Err(Error::InvalidDistribution(format!(
                "outcome probabilities sum to {total}"
            )));
        }
        Ok(OutcomeDistribution {
            probs: probs.map(|p| p / total),
        })
    }

    pub fn probabilities(&self) -> [f64; 4] {
        self.probs
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Expected `(row, col)` payoff under a 2x2 base game.
    pub fn expectation(&self, game: &BimatrixGame) -> Result<(f64, f64)> {
        require_two_by_two(game)?;
        Ok(self
            .probs
            .iter()
            .enumerate()
            .fold((0.0, 0.0), |(a, b), (k, &p)| {
                let (r, c) = game.payoff(Profile::new(k / 2, k % 2));
                (a + p * r, b + p * c)
            }))
    }

    pub fn l1_distance(&self, other: &[f64; 4]) -> f64 {
        self.probs
            .iter()
            .zip(other)
            .map(|(a, b)| (a - b).abs())
            .sum()
    }
}

pub(crate) fn require_two_by_two(game: &BimatrixGame) -> Result<()> {
    match game.shape() {
        (2, 2) => Ok(()),
        (rows, cols) => Err(Error::NotTwoByTwo { rows, cols }),
    }
}

/// Precomputed entangler and its adjoint for one configuration.
#[derive(Debug, Clone)]
pub struct Quantizer {
    config: QuantizationConfig,
    entangler: ComplexMatrix,
    disentangler: ComplexMatrix,
}

impl Quantizer {
    pub fn new(config: QuantizationConfig) -> Self {
        let entangler = build_entangler(config.gamma()).expect("gamma validated by config");
        let disentangler = entangler.adjoint();
        Quantizer {
            config,
            entangler,
            disentangler,
        }
    }

    pub fn config(&self) -> QuantizationConfig {
        self.config
    }

    /// `J† · (U_A ⊗ U_B) · J · |CC⟩`.
    pub fn final_state(
        &self,
        alice: &StrategyUnitary,
        bob: &StrategyUnitary,
    ) -> Result<ComplexVector> {
        let initial = ComplexVector::basis(4, 0)?;
        let local = alice.matrix().tensor(bob.matrix())?;
        let entangled = self.entangler.mat_vec(&initial)?;
        let moved = local.mat_vec(&entangled)?;
        self.disentangler.mat_vec(&moved)
    }

    pub fn outcome_distribution(
        &self,
        alice: &StrategyUnitary,
        bob: &StrategyUnitary,
    ) -> Result<OutcomeDistribution> {
        let state = self.final_state(alice, bob)?;
        let probs = [0, 1, 2, 3].map(|k| state[k].norm_sqr());
        OutcomeDistribution::new(probs)
    }

    pub fn expected_payoffs(
        &self,
        game: &BimatrixGame,
        alice: &StrategyUnitary,
        bob: &StrategyUnitary,
    ) -> Result<(f64, f64)> {
        require_two_by_two(game)?;
        self.outcome_distribution(alice, bob)?.expectation(game)
    }

    /// The classical game induced on a finite strategy set.
    pub fn extended_matrix(
        &self,
        game: &BimatrixGame,
        strategies: &[StrategyUnitary],
    ) -> Result<BimatrixGame> {
        require_two_by_two(game)?;
        check_strategy_set(strategies)?;
        let mut payoffs = Vec::with_capacity(strategies.len() * strategies.len());
        for alice in strategies {
            for bob in strategies {
                payoffs.push(self.expected_payoffs(game, alice, bob)?);
            }
        }
        let labels: Vec<String> = strategies.iter().map(|s| s.label.clone()).collect();
        Ok(
            BimatrixGame::new(game.players(), labels.clone(), labels, payoffs)?
                .with_tolerance(COMPUTED_PAYOFF_TOL),
        )
    }

    /// Row player's payoff at every grid point against a fixed opponent.
    pub fn best_response_scan(
        &self,
        game: &BimatrixGame,
        opponent: &StrategyUnitary,
        grid: GridSpec,
    ) -> Result<ScanResult> {
        require_two_by_two(game)?;
        grid.validate()?;
        let points = grid.points();
        let values = points
            .par_iter()
            .map(|p| self.expected_payoffs(game, &p.strategy(), opponent).map(|v| v.0))
            .collect::<Result<Vec<f64>>>()?;
        let max_payoff = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let argmax_points = points
            .into_iter()
            .zip(&values)
            .filter(|(_, &v)| v >= max_payoff - SCAN_TIE_TOL)
            .map(|(p, _)| p)
            .collect();
        Ok(ScanResult {
            max_payoff,
            argmax_points,
            grid,
        })
    }

    /// All grid profiles from which neither player gains more than 1e-9 by
    /// moving to another grid point, in row-major order over
    /// `(alice point, bob point)`.
    pub fn find_grid_equilibria(
        &self,
        game: &BimatrixGame,
        grid: GridSpec,
    ) -> Result<Vec<GridProfile>> {
        require_two_by_two(game)?;
        grid.validate()?;
        let points = grid.points();
        let strategies: Vec<StrategyUnitary> = points.iter().map(GridPoint::strategy).collect();
        let n = points.len();
        let table: Vec<Vec<(f64, f64)>> = strategies
            .par_iter()
            .map(|alice| {
                strategies
                    .iter()
                    .map(|bob| self.expected_payoffs(game, alice, bob))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;

        let best_row_vs: Vec<f64> = (0..n)
            .map(|b| (0..n).map(|a| table[a][b].0).fold(f64::NEG_INFINITY, f64::max))
            .collect();
        let best_col_vs: Vec<f64> = (0..n)
            .map(|a| table[a].iter().map(|v| v.1).fold(f64::NEG_INFINITY, f64::max))
            .collect();

        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let (row, col) = table[a][b];
                if row >= best_row_vs[b] - COMPUTED_PAYOFF_TOL
                    && col >= best_col_vs[a] - COMPUTED_PAYOFF_TOL
                {
                    out.push(GridProfile {
                        alice: points[a],
                        bob: points[b],
                        payoffs: (row, col),
                    });
                }
            }
        }
        Ok(out)
    }
}

/// Inclusive uniform grid over θ ∈ [0, π] and φ ∈ [0, π/2]. Odd step counts
/// of at least 3 place C, D and Q exactly on the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub theta_steps: usize,
    pub phi_steps: usize,
}

impl GridSpec {
    pub fn new(theta_steps: usize, phi_steps: usize) -> Result<Self> {
        let grid = GridSpec {
            theta_steps,
            phi_steps,
        };
        grid.validate()?;
        Ok(grid)
    }

    fn validate(&self) -> Result<()> {
        if self.theta_steps < 2 || self.phi_steps < 2 {
            Err(Error::GridTooSmall {
                theta_steps: self.theta_steps,
                phi_steps: self.phi_steps,
            })
        } else {
            Ok(())
        }
    }

    pub fn point(&self, theta_index: usize, phi_index: usize) -> GridPoint {
        GridPoint {
            theta_index,
            phi_index,
            theta: PI * theta_index as f64 / (self.theta_steps - 1) as f64,
            phi: FRAC_PI_2 * phi_index as f64 / (self.phi_steps - 1) as f64,
        }
    }

    /// Row-major: θ index outer, φ index inner.
    pub fn points(&self) -> Vec<GridPoint> {
        (0..self.theta_steps)
            .flat_map(|i| (0..self.phi_steps).map(move |j| (i, j)))
            .map(|(i, j)| self.point(i, j))
            .collect()
    }
}

impl std::str::FromStr for GridSpec {
    type Err = Error;

    /// `TxP`, e.g. `101x51`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidStrategySpec(format!("grid {s:?}"));
        let (t, p) = s.split_once(['x', 'X']).ok_or_else(bad)?;
        GridSpec::new(
            t.trim().parse().map_err(|_| bad())?,
            p.trim().parse().map_err(|_| bad())?,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub theta_index: usize,
    pub phi_index: usize,
    pub theta: f64,
    pub phi: f64,
}

impl GridPoint {
    pub fn strategy(&self) -> StrategyUnitary {
        StrategyUnitary::from_angles(self.theta, self.phi).expect("grid points are in range")
    }

    /// `C`, `D` or `Q` when the point is exactly that move. With θ = π the
    /// phase is irrelevant, so every such point is D.
    pub fn move_name(&self) -> Option<&'static str> {
        if self.theta == 0.0 && self.phi == 0.0 {
            Some("C")
        } else if self.theta == PI {
            Some("D")
        } else if self.theta == 0.0 && self.phi == FRAC_PI_2 {
            Some("Q")
        } else {
            None
        }
    }
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(theta={}, phi={})",
            crate::numfmt::format_fixed_trimmed(self.theta, 9),
            crate::numfmt::format_fixed_trimmed(self.phi, 9)
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub max_payoff: f64,
    /// Every grid point within 1e-12 of the maximum, row-major.
    pub argmax_points: Vec<GridPoint>,
    pub grid: GridSpec,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridProfile {
    pub alice: GridPoint,
    pub bob: GridPoint,
    pub payoffs: (f64, f64),
}
