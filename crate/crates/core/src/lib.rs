//! Entangling quantization of two-player bimatrix games.
//!
//! The crate derives the extended classical payout matrix a quantized game
//! induces, analyzes pure equilibria of the original and extended games, and
//! builds an explicit classical mediator model that reproduces the quantum
//! game's statistics.
//!
//! ```
//! use qgame::{reference, QuantizationConfig, Quantizer, StrategyUnitary};
//!
//! let pd = reference::prisoners_dilemma();
//! let moves = StrategyUnitary::parse_list("C,D,Q").unwrap();
//! let extended = Quantizer::new(QuantizationConfig::maximal())
//!     .extended_matrix(&pd, &moves)
//!     .unwrap();
//! let report = extended.pure_nash();
//! assert_eq!(extended.profile_label(report.strict_nash[0]), "(Q,Q)");
//! ```

pub mod cli;
pub mod complexmath;
pub mod error;
pub mod game;
pub mod model;
pub mod numfmt;
pub mod quantizer;
pub mod reference;

pub use complexmath::{Complex, ComplexMatrix, ComplexVector};
pub use error::{Error, Result};
pub use game::{parse_game, BimatrixGame, EquilibriumReport, JointDistribution, Player, Profile};
pub use model::{ClassicalModelTable, EquivalenceReport, SampleReport};
pub use quantizer::{
    build_entangler, GridPoint, GridProfile, GridSpec, OutcomeDistribution, QuantizationConfig,
    Quantizer, ScanResult, StrategyUnitary,
};
