//! Reference games: the Prisoner's Dilemma and its extension by the move Q
//! under maximal entanglement.

use crate::game::BimatrixGame;

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

pub fn prisoners_dilemma() -> BimatrixGame {
    BimatrixGame::new(
        ("Alice", "Bob"),
        labels(&["C", "D"]),
        labels(&["C", "D"]),
        vec![(3.0, 3.0), (0.0, 5.0), (5.0, 0.0), (1.0, 1.0)],
    )
    .expect("valid reference game")
}

/// Payouts over `{C, D, Q}` for both players at γ = π/2.
pub fn extended_prisoners_dilemma() -> BimatrixGame {
    BimatrixGame::new(
        ("Alice", "Bob"),
        labels(&["C", "D", "Q"]),
        labels(&["C", "D", "Q"]),
        vec![
            (3.0, 3.0),
            (0.0, 5.0),
            (1.0, 1.0),
            (5.0, 0.0),
            (1.0, 1.0),
            (0.0, 5.0),
            (1.0, 1.0),
            (5.0, 0.0),
            (3.0, 3.0),
        ],
    )
    .expect("valid reference game")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::parse_game;

    #[test]
    fn fixtures_match_reference_games() {
        let pd = parse_game(include_str!("../fixtures/pd.game")).unwrap();
        assert_eq!(pd, prisoners_dilemma());
        let ext = parse_game(include_str!("../fixtures/pd_extended.game")).unwrap();
        assert_eq!(ext, extended_prisoners_dilemma());
    }
}
