mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use qgame::{
    build_entangler, reference, BimatrixGame, Complex, ComplexMatrix, GridSpec, Profile,
    QuantizationConfig, Quantizer, StrategyUnitary,
};

fn cfg(gamma: f64) -> Quantizer {
    Quantizer::new(QuantizationConfig::new(gamma).unwrap())
}

fn pd() -> BimatrixGame {
    reference::prisoners_dilemma()
}

fn close2(a: (f64, f64), b: (f64, f64), tol: f64) -> bool {
    (a.0 - b.0).abs() <= tol && (a.1 - b.1).abs() <= tol
}

#[test]
fn entangler_matches_series_oracle() {
    for gamma in [0.0, 0.3, 0.7, 1.0, FRAC_PI_2] {
        let closed = build_entangler(gamma).unwrap();
        let oracle = common::entangler_series(gamma);
        for r in 0..4 {
            for c in 0..4 {
                assert!((closed[(r, c)] - oracle[r][c]).norm() < 1e-12);
            }
        }
        // The library's own scaling-and-squaring series agrees too.
        let d = ComplexMatrix::from_real_rows([[0.0, 1.0], [-1.0, 0.0]]).unwrap();
        let generator = d.tensor(&d).unwrap().scale(Complex::new(0.0, gamma / 2.0));
        let series = generator.exp_series(1e-14).unwrap();
        assert!(series.max_abs_diff(&closed).unwrap() < 1e-10);
    }
}

#[test]
fn final_states_match_oracle() {
    let cases = [
        (common::C_MOVE, common::D_MOVE, FRAC_PI_2),
        (common::Q_MOVE, common::Q_MOVE, FRAC_PI_2),
        ((1.234, 0.567), (0.3, 1.2), 0.9),
        ((PI, 0.4), (FRAC_PI_2, 0.0), 0.2),
    ];
    for (a, b, gamma) in cases {
        let ua = StrategyUnitary::from_angles(a.0, a.1).unwrap();
        let ub = StrategyUnitary::from_angles(b.0, b.1).unwrap();
        let got = cfg(gamma).final_state(&ua, &ub).unwrap();
        let want = common::final_state(a, b, gamma);
        for k in 0..4 {
            assert!((got[k] - want[k]).norm() < 1e-12, "{a:?} {b:?} {gamma}");
        }
    }
    // Frozen oracle values.
    let want_cd = common::final_state(common::C_MOVE, common::D_MOVE, FRAC_PI_2);
    assert!((want_cd[1] - Complex::new(-1.0, 0.0)).norm() < 1e-12);
    let want_qq = common::final_state(common::Q_MOVE, common::Q_MOVE, FRAC_PI_2);
    assert!((want_qq[0] - Complex::new(-1.0, 0.0)).norm() < 1e-12);
}

#[test]
fn outcome_distributions_match_oracle() {
    let (d, q, c) = (
        StrategyUnitary::defect(),
        StrategyUnitary::quantum(),
        StrategyUnitary::cooperate(),
    );
    let got = cfg(FRAC_PI_2).outcome_distribution(&d, &q).unwrap();
    let want = common::probabilities(common::D_MOVE, common::Q_MOVE, FRAC_PI_2);
    assert!(got.l1_distance(&want) < 1e-12);
    assert!(got.l1_distance(&[0.0, 1.0, 0.0, 0.0]) < 1e-12);

    let got = cfg(FRAC_PI_2).outcome_distribution(&c, &q).unwrap();
    assert!(got.l1_distance(&[0.0, 0.0, 0.0, 1.0]) < 1e-12);

    let half = StrategyUnitary::from_angles(FRAC_PI_2, 0.0).unwrap();
    let got = cfg(FRAC_PI_2).outcome_distribution(&half, &c).unwrap();
    let want = common::probabilities((FRAC_PI_2, 0.0), common::C_MOVE, FRAC_PI_2);
    assert!(got.l1_distance(&want) < 1e-12);
    assert!(got.l1_distance(&[0.5, 0.0, 0.5, 0.0]) < 1e-12);
}

#[test]
fn extended_matrix_matches_oracle_for_random_parameters() {
    let params = [(0.1, 0.2), (2.9, 1.5), (1.0, 0.0), (0.0, 0.7)];
    let strategies: Vec<StrategyUnitary> = params
        .iter()
        .map(|&(t, p)| StrategyUnitary::from_angles(t, p).unwrap())
        .collect();
    for gamma in [0.0, 0.6, FRAC_PI_2] {
        let m = cfg(gamma).extended_matrix(&pd(), &strategies).unwrap();
        for (i, &a) in params.iter().enumerate() {
            for (j, &b) in params.iter().enumerate() {
                let want = common::payoffs(&common::PD, a, b, gamma);
                assert!(close2(m.payoff(Profile::new(i, j)), want, 1e-9));
            }
        }
    }
}

/// Sequential dense-grid evaluation with the oracle.
fn oracle_scan(opponent: (f64, f64), gamma: f64, grid: GridSpec) -> (f64, Vec<(usize, usize)>) {
    let mut values = Vec::new();
    for i in 0..grid.theta_steps {
        for j in 0..grid.phi_steps {
            let p = grid.point(i, j);
            values.push(((i, j), common::payoffs(&common::PD, (p.theta, p.phi), opponent, gamma).0));
        }
    }
    let max = values.iter().map(|v| v.1).fold(f64::NEG_INFINITY, f64::max);
    let at = values
        .iter()
        .filter(|v| v.1 >= max - 1e-12)
        .map(|v| v.0)
        .collect();
    (max, at)
}

#[test]
fn best_response_scans_match_oracle() {
    let grid = GridSpec::new(101, 51).unwrap();
    let cases = [
        (StrategyUnitary::quantum(), common::Q_MOVE, FRAC_PI_2, 3.0),
        (StrategyUnitary::defect(), common::D_MOVE, FRAC_PI_2, 5.0),
        (StrategyUnitary::defect(), common::D_MOVE, 0.0, 1.0),
    ];
    for (opponent, opponent_angles, gamma, expected_max) in cases {
        let result = cfg(gamma)
            .best_response_scan(&pd(), &opponent, grid)
            .unwrap();
        let (oracle_max, oracle_at) = oracle_scan(opponent_angles, gamma, grid);
        assert!((oracle_max - expected_max).abs() < 1e-9);
        assert!((result.max_payoff - expected_max).abs() < 1e-9);
        let got: Vec<(usize, usize)> = result
            .argmax_points
            .iter()
            .map(|p| (p.theta_index, p.phi_index))
            .collect();
        assert_eq!(got, oracle_at);
    }
}

#[test]
fn scan_argmax_points() {
    let grid = GridSpec::new(101, 51).unwrap();
    let vs_q = cfg(FRAC_PI_2)
        .best_response_scan(&pd(), &StrategyUnitary::quantum(), grid)
        .unwrap();
    assert_eq!(vs_q.argmax_points.len(), 1);
    assert_eq!(vs_q.argmax_points[0].move_name(), Some("Q"));
    assert_eq!((vs_q.argmax_points[0].theta, vs_q.argmax_points[0].phi), (0.0, FRAC_PI_2));

    let vs_d = cfg(FRAC_PI_2)
        .best_response_scan(&pd(), &StrategyUnitary::defect(), grid)
        .unwrap();
    assert!(vs_d.argmax_points.iter().any(|p| p.move_name() == Some("Q")));

    // At gamma = 0 every theta = pi point is the classical move D.
    let classical = cfg(0.0)
        .best_response_scan(&pd(), &StrategyUnitary::defect(), grid)
        .unwrap();
    assert_eq!(classical.argmax_points.len(), 51);
    assert!(classical.argmax_points.iter().all(|p| p.theta == PI));
}

#[test]
fn scan_is_independent_of_thread_count() {
    let grid = GridSpec::new(41, 21).unwrap();
    let opponent = StrategyUnitary::from_angles(0.8, 0.3).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| cfg(1.1).best_response_scan(&pd(), &opponent, grid).unwrap())
    };
    let single = run(1);
    assert_eq!(single, run(4));
    assert_eq!(single, run(7));
}

#[test]
fn grid_equilibria_examples() {
    let grid = GridSpec::new(5, 3).unwrap();
    let named = |p: &qgame::GridProfile| (p.alice.move_name(), p.bob.move_name());

    let found = cfg(FRAC_PI_2).find_grid_equilibria(&pd(), grid).unwrap();
    assert!(found.iter().any(|p| named(p) == (Some("Q"), Some("Q"))));

    let found = cfg(0.0).find_grid_equilibria(&pd(), grid).unwrap();
    assert!(found.iter().any(|p| named(p) == (Some("D"), Some("D"))));
    assert!(!found.iter().any(|p| named(p) == (Some("Q"), Some("Q"))));
    // Deviating to D against Q pays 5 at gamma = 0.
    let q = StrategyUnitary::quantum();
    let dev = cfg(0.0)
        .expected_payoffs(&pd(), &StrategyUnitary::defect(), &q)
        .unwrap();
    assert!((dev.0 - 5.0).abs() < 1e-9);

    let flat = BimatrixGame::new(
        ("A", "B"),
        vec!["C".into(), "D".into()],
        vec!["C".into(), "D".into()],
        vec![(2.0, 2.0); 4],
    )
    .unwrap();
    for gamma in [0.0, 0.8, FRAC_PI_2] {
        let found = cfg(gamma).find_grid_equilibria(&flat, grid).unwrap();
        assert_eq!(found.len(), 15 * 15);
    }
}

#[test]
fn grid_equilibria_match_brute_force() {
    let grid = GridSpec::new(5, 3).unwrap();
    let points = grid.points();
    for gamma in [0.0, 0.7, FRAC_PI_2] {
        let table: Vec<Vec<(f64, f64)>> = points
            .iter()
            .map(|a| {
                points
                    .iter()
                    .map(|b| common::payoffs(&common::PD, (a.theta, a.phi), (b.theta, b.phi), gamma))
                    .collect()
            })
            .collect();
        let mut expected = Vec::new();
        for a in 0..points.len() {
            for b in 0..points.len() {
                let row_ok = (0..points.len()).all(|x| table[x][b].0 <= table[a][b].0 + 1e-9);
                let col_ok = (0..points.len()).all(|y| table[a][y].1 <= table[a][b].1 + 1e-9);
                if row_ok && col_ok {
                    expected.push((a, b));
                }
            }
        }
        let index = |p: &qgame::GridPoint| p.theta_index * grid.phi_steps + p.phi_index;
        let got: Vec<(usize, usize)> = cfg(gamma)
            .find_grid_equilibria(&pd(), grid)
            .unwrap()
            .iter()
            .map(|p| (index(&p.alice), index(&p.bob)))
            .collect();
        assert_eq!(got, expected, "gamma {gamma}");
    }
}
