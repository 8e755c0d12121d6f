//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when an analysis check fails, 2 on usage,
//! input or parse errors. Reports go to stdout, diagnostics to stderr.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::game::{parse_game, BimatrixGame, Player, Profile, COMPUTED_PAYOFF_TOL};
use crate::model::ClassicalModelTable;
use crate::numfmt::format_sig9;
use crate::quantizer::{GridSpec, QuantizationConfig, Quantizer, StrategyUnitary};
use crate::reference;

/// Gamma values at which the classical subgame is checked.
pub const SUBGAME_GAMMAS: [f64; 5] = [0.0, 0.25, 0.5, 1.0, FRAC_PI_2];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Parser)]
#[command(
    name = "qgame",
    version,
    about = "Quantize 2x2 bimatrix games and analyze their equilibria"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print a game in canonical form.
    Show(GameArg),
    /// Pure Nash equilibria (strict and weak).
    Equilibria(GameArg),
    /// Strictly dominant moves of each player.
    Dominance(GameArg),
    /// Pareto comparison of every profile.
    Pareto(GameArg),
    /// Extended payout matrix over a strategy set.
    Quantize(QuantizeArgs),
    /// Grid search over U(theta, phi) against a fixed opponent.
    Scan(ScanArgs),
    /// Build and verify the classical mediator table.
    Model(ModelArgs),
    /// Run every check on the Prisoner's Dilemma and report PASS/FAIL.
    Reproduce(GameArg),
}

#[derive(Debug, Args)]
struct GameArg {
    /// Game file.
    game: PathBuf,
}

#[derive(Debug, Args)]
struct QuantizeArgs {
    game: PathBuf,
    /// Entangling parameter in radians, or `max` for pi/2.
    #[arg(long, default_value = "max")]
    gamma: String,
    /// Comma-separated strategies: C, D, Q or theta:phi.
    #[arg(long, default_value = "C,D,Q")]
    strategies: String,
}

#[derive(Debug, Args)]
struct ScanArgs {
    game: PathBuf,
    /// Opponent move: C, D, Q or theta,phi.
    #[arg(long, required_unless_present = "equilibria")]
    opponent: Option<String>,
    #[arg(long, default_value = "max")]
    gamma: String,
    /// Grid size as THETAxPHI point counts.
    #[arg(long, default_value = "101x51")]
    grid: String,
    /// List grid profiles that are Nash against every grid deviation.
    #[arg(long, conflicts_with = "opponent")]
    equilibria: bool,
}

#[derive(Debug, Args)]
struct ModelArgs {
    game: PathBuf,
    #[arg(long, default_value = "max")]
    gamma: String,
    #[arg(long, default_value = "C,D,Q")]
    strategies: String,
    /// Verification tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Sample one profile, given by its row and column labels.
    #[arg(long, num_args = 2, value_names = ["ROW", "COL"])]
    sample: Option<Vec<String>>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
}

/// Failure surfaced to the caller: message plus exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: 2,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

/// Parses `max` or a decimal radian value.
pub fn parse_gamma(text: &str) -> Result<QuantizationConfig, Error> {
    if text.trim() == "max" {
        return Ok(QuantizationConfig::maximal());
    }
    let gamma = text
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::InvalidStrategySpec(format!("gamma {text:?}")))?;
    QuantizationConfig::new(gamma)
}

fn load_game(path: &Path) -> Result<BimatrixGame, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    parse_game(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// Runs the CLI on `argv` (without the program name).
pub fn run<I, S>(argv: I) -> CliOutput
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args = std::iter::once(std::ffi::OsString::from("qgame"))
        .chain(argv.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    CliOutput {
                        code: 0,
                        stdout: text,
                        stderr: String::new(),
                    }
                }
                _ => CliOutput {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    match dispatch(cli.command) {
        Ok((code, stdout)) => CliOutput {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(f) => CliOutput {
            code: f.code,
            stdout: String::new(),
            stderr: format!("error: {}\n", f.message),
        },
    }
}

fn dispatch(command: Command) -> Result<(i32, String), Failure> {
    match command {
        Command::Show(a) => Ok((0, load_game(&a.game)?.to_canonical_string())),
        Command::Equilibria(a) => Ok((0, equilibria_text(&load_game(&a.game)?))),
        Command::Dominance(a) => Ok((0, dominance_text(&load_game(&a.game)?))),
        Command::Pareto(a) => pareto_text(&load_game(&a.game)?).map(|s| (0, s)),
        Command::Quantize(a) => {
            let game = load_game(&a.game)?;
            let config = parse_gamma(&a.gamma)?;
            let strategies = StrategyUnitary::parse_list(&a.strategies)?;
            let extended = Quantizer::new(config).extended_matrix(&game, &strategies)?;
            Ok((0, extended.to_canonical_string()))
        }
        Command::Scan(a) => cmd_scan(a).map(|s| (0, s)),
        Command::Model(a) => cmd_model(a),
        Command::Reproduce(a) => {
            let game = load_game(&a.game)?;
            let report = cmd_reproduce(&game)?;
            Ok((if report.all_passed() { 0 } else { 1 }, report.text))
        }
    }
}

fn profile_list(game: &BimatrixGame, profiles: &[Profile]) -> String {
    if profiles.is_empty() {
        "none".to_string()
    } else {
        profiles
            .iter()
            .map(|&p| game.profile_label(p))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn pair(v: (f64, f64)) -> String {
    format!("({}, {})", format_sig9(v.0), format_sig9(v.1))
}

fn equilibria_text(game: &BimatrixGame) -> String {
    let report = game.pure_nash();
    let mut out = String::new();
    writeln!(out, "strict Nash: {}", profile_list(game, &report.strict_nash)).unwrap();
    writeln!(out, "weak Nash: {}", profile_list(game, &report.weak_nash)).unwrap();
    let dominant = report
        .dominant_profile
        .map(|p| game.profile_label(p))
        .unwrap_or_else(|| "none".to_string());
    writeln!(out, "dominant profile: {dominant}").unwrap();
    if report.weak_nash.len() == 1 && report.strict_nash == report.weak_nash {
        writeln!(
            out,
            "unique pure Nash equilibrium: {}",
            game.profile_label(report.weak_nash[0])
        )
        .unwrap();
    }
    out
}

fn dominance_text(game: &BimatrixGame) -> String {
    let (row_name, col_name) = game.players();
    let mut out = String::new();
    for (player, name) in [(Player::Row, row_name), (Player::Col, col_name)] {
        let dominant = game
            .strictly_dominant(player)
            .map(|m| game.moves(player)[m].clone())
            .unwrap_or_else(|| "none".to_string());
        writeln!(out, "{name} strictly dominant: {dominant}").unwrap();
    }
    out
}

fn pareto_text(game: &BimatrixGame) -> Result<String, Failure> {
    let (rows, cols) = game.shape();
    let mut out = String::new();
    for r in 0..rows {
        for c in 0..cols {
            let p = Profile::new(r, c);
            let dominators = game.pareto_dominated(p)?;
            let verdict = if dominators.is_empty() {
                "Pareto-optimal".to_string()
            } else {
                format!("dominated by {}", profile_list(game, &dominators))
            };
            writeln!(
                out,
                "{} {}: {verdict}",
                game.profile_label(p),
                pair(game.payoff(p))
            )
            .unwrap();
        }
    }
    Ok(out)
}

fn grid_point_label(point: &crate::quantizer::GridPoint) -> String {
    match point.move_name() {
        Some(name) => format!("{point} [{name}]"),
        None => point.to_string(),
    }
}

fn cmd_scan(a: ScanArgs) -> Result<String, Failure> {
    let game = load_game(&a.game)?;
    let config = parse_gamma(&a.gamma)?;
    let grid: GridSpec = a.grid.parse()?;
    let quantizer = Quantizer::new(config);
    let mut out = String::new();
    let gamma = crate::numfmt::format_fixed_trimmed(config.gamma(), 9);

    if a.equilibria {
        let found = quantizer.find_grid_equilibria(&game, grid)?;
        writeln!(
            out,
            "grid equilibria: gamma {gamma}, grid {}x{}, {} profile(s)",
            grid.theta_steps,
            grid.phi_steps,
            found.len()
        )
        .unwrap();
        for profile in &found {
            writeln!(
                out,
                "{} vs {} payoffs {}",
                grid_point_label(&profile.alice),
                grid_point_label(&profile.bob),
                pair(profile.payoffs)
            )
            .unwrap();
        }
        return Ok(out);
    }

    let spec = a.opponent.expect("clap enforces --opponent without --equilibria");
    let opponent = StrategyUnitary::parse(&spec)
        .map_err(|e| usage(format!("malformed opponent spec {spec:?}: {e}")))?;
    let result = quantizer.best_response_scan(&game, &opponent, grid)?;
    writeln!(
        out,
        "best response scan: opponent {}, gamma {gamma}, grid {}x{}",
        opponent.label(),
        grid.theta_steps,
        grid.phi_steps
    )
    .unwrap();
    let max = format!("{:.9}", result.max_payoff);
    let max = if max == "-0.000000000" {
        "0.000000000".to_string()
    } else {
        max
    };
    if let [only] = result.argmax_points.as_slice() {
        writeln!(out, "max {max} at {only}").unwrap();
    } else {
        writeln!(out, "max {max} at {} points:", result.argmax_points.len()).unwrap();
        for point in &result.argmax_points {
            writeln!(out, "  {point}").unwrap();
        }
    }
    Ok(out)
}

fn cmd_model(a: ModelArgs) -> Result<(i32, String), Failure> {
    let game = load_game(&a.game)?;
    let config = parse_gamma(&a.gamma)?;
    let strategies = StrategyUnitary::parse_list(&a.strategies)?;
    let table = ClassicalModelTable::build(&game, &strategies, config)?;
    let verdict = table.verify_equivalence(&game, config, a.tol)?;
    let mut out = table.to_export_string()?;
    out.push_str(&verdict.to_string());
    if let Some([row, col]) = a.sample.as_deref() {
        let report = table.sample_play(row, col, a.seed, a.trials)?;
        out.push_str(&report.to_string());
    }
    Ok((if verdict.passed() { 0 } else { 1 }, out))
}

/// One PASS/FAIL block of the reproduction report.
#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub title: String,
    pub passed: bool,
    pub body: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReproduceReport {
    pub sections: Vec<Section>,
    pub text: String,
}

impl ReproduceReport {
    pub fn all_passed(&self) -> bool {
        self.sections.iter().all(|s| s.passed)
    }
}

fn indent(text: &str) -> String {
    text.lines().map(|l| format!("  {l}\n")).collect()
}

/// Full reproduction report for a 2x2 Prisoner's-Dilemma-style input.
pub fn cmd_reproduce(game: &BimatrixGame) -> Result<ReproduceReport, Error> {
    crate::quantizer::require_two_by_two(game)?;
    let mut sections = Vec::new();
    let mut section = |title: String, passed: bool, body: String| {
        sections.push(Section {
            title,
            passed,
            body,
        })
    };
    let row_label = |g: &BimatrixGame, m: usize| g.row_moves()[m].clone();

    // Classical game.
    let reference_pd = reference::prisoners_dilemma();
    let deviation = game.max_payoff_diff(&reference_pd)?;
    section(
        "classical payout matrix".into(),
        deviation <= COMPUTED_PAYOFF_TOL,
        format!(
            "{}matches the Prisoner's Dilemma reference: max deviation {}\n",
            game.to_canonical_string(),
            format_sig9(deviation)
        ),
    );

    let classical = game.pure_nash();
    let (row_name, col_name) = game.players();
    let dominant_row = game.strictly_dominant(Player::Row);
    let dominant_col = game.strictly_dominant(Player::Col);
    let name_or_none = |m: Option<usize>, moves: &[String]| {
        m.map(|i| moves[i].clone()).unwrap_or_else(|| "none".into())
    };
    let equilibrium_ok = classical.dominant_profile.is_some()
        && classical.strict_nash == classical.weak_nash
        && classical.weak_nash == classical.dominant_profile.into_iter().collect::<Vec<_>>();
    section(
        "classical equilibrium".into(),
        equilibrium_ok,
        format!(
            "strict Nash: {}\nweak Nash: {}\n{row_name} strictly dominant: {}\n{col_name} strictly dominant: {}\n",
            profile_list(game, &classical.strict_nash),
            profile_list(game, &classical.weak_nash),
            name_or_none(dominant_row, game.row_moves()),
            name_or_none(dominant_col, game.col_moves()),
        ),
    );

    let (dilemma_ok, dilemma_body) = match classical.dominant_profile {
        Some(p) => {
            let better = game.pareto_dominated(p)?;
            let mut body = format!(
                "{} {} is Pareto-dominated by: {}\n",
                game.profile_label(p),
                pair(game.payoff(p)),
                profile_list(game, &better)
            );
            for q in &better {
                writeln!(body, "  {} {}", game.profile_label(*q), pair(game.payoff(*q))).unwrap();
            }
            (!better.is_empty(), body)
        }
        None => (false, "no dominant profile\n".to_string()),
    };
    section("dilemma".into(), dilemma_ok, dilemma_body);

    // Extended game at maximal entanglement.
    let strategies = vec![
        StrategyUnitary::cooperate().with_label(row_label(game, 0)),
        StrategyUnitary::defect().with_label(row_label(game, 1)),
        StrategyUnitary::quantum(),
    ];
    let config = QuantizationConfig::maximal();
    let quantizer = Quantizer::new(config);
    let extended = quantizer.extended_matrix(game, &strategies)?;
    let golden = reference::extended_prisoners_dilemma();
    let deviation = extended.max_payoff_diff(&golden)?;
    section(
        format!(
            "extended payout matrix at gamma {}",
            crate::numfmt::format_fixed_trimmed(config.gamma(), 9)
        ),
        deviation <= COMPUTED_PAYOFF_TOL,
        format!(
            "{}matches the reference extended matrix: max deviation {}\n",
            extended.to_canonical_string(),
            format_sig9(deviation)
        ),
    );

    let quantum = extended.pure_nash();
    let q_profile = Profile::new(2, 2);
    section(
        "extended equilibrium".into(),
        quantum.strict_nash == vec![q_profile] && quantum.weak_nash == vec![q_profile],
        format!(
            "strict Nash: {}\nweak Nash: {}\n",
            profile_list(&extended, &quantum.strict_nash),
            profile_list(&extended, &quantum.weak_nash)
        ),
    );

    let mut subgame_ok = true;
    let mut body = String::new();
    let classical_labels = [row_label(game, 0), row_label(game, 1)];
    for gamma in SUBGAME_GAMMAS {
        let at = Quantizer::new(QuantizationConfig::new(gamma)?).extended_matrix(game, &strategies)?;
        let sub = at.restrict(&classical_labels, &classical_labels)?;
        let deviation = sub.max_payoff_diff(game)?;
        subgame_ok &= deviation <= COMPUTED_PAYOFF_TOL;
        writeln!(
            body,
            "gamma {}: max deviation {}",
            crate::numfmt::format_fixed_trimmed(gamma, 9),
            format_sig9(deviation)
        )
        .unwrap();
    }
    section("classical subgame embedding".into(), subgame_ok, body);

    let (deviation_ok, body) = match classical.dominant_profile {
        Some(p) => {
            let mut body = String::new();
            let base = extended.payoff(p);
            let mut row_gain = Vec::new();
            let mut col_gain = Vec::new();
            for alt in 0..strategies.len() {
                let r = extended.payoff(Profile::new(alt, p.col)).0;
                let c = extended.payoff(Profile::new(p.row, alt)).1;
                writeln!(
                    body,
                    "{row_name} plays {}: {} | {col_name} plays {}: {}",
                    extended.row_moves()[alt],
                    format_sig9(r),
                    extended.col_moves()[alt],
                    format_sig9(c)
                )
                .unwrap();
                if r > base.0 + COMPUTED_PAYOFF_TOL {
                    row_gain.push(extended.row_moves()[alt].clone());
                }
                if c > base.1 + COMPUTED_PAYOFF_TOL {
                    col_gain.push(extended.col_moves()[alt].clone());
                }
            }
            let ok = row_gain.iter().any(|m| m == "Q") && col_gain.iter().any(|m| m == "Q");
            writeln!(
                body,
                "{} is {}an equilibrium of the extended game; profitable switches: {row_name} [{}], {col_name} [{}]",
                extended.profile_label(p),
                if row_gain.is_empty() && col_gain.is_empty() { "" } else { "no longer " },
                row_gain.join(" "),
                col_gain.join(" ")
            )
            .unwrap();
            (ok, body)
        }
        None => (false, "no dominant profile\n".to_string()),
    };
    section(
        "unilateral deviations from the classical equilibrium".into(),
        deviation_ok,
        body,
    );

    let table = ClassicalModelTable::build(game, &strategies, config)?;
    let verdict = table.verify_equivalence(game, config, COMPUTED_PAYOFF_TOL)?;
    let table_game = table.payoff_game()?;
    let table_nash = table_game.pure_nash();
    let same_nash = table_nash.weak_nash == quantum.weak_nash
        && table_nash.strict_nash == quantum.strict_nash;
    section(
        "classical model".into(),
        verdict.passed() && same_nash,
        format!(
            "{verdict}model table Nash: {} (extended game: {})\n",
            profile_list(&table_game, &table_nash.weak_nash),
            profile_list(&extended, &quantum.weak_nash)
        ),
    );

    let mut text = String::new();
    for s in &sections {
        writeln!(text, "[{}] {}", if s.passed { "PASS" } else { "FAIL" }, s.title).unwrap();
        text.push_str(&indent(&s.body));
    }
    let passed = sections.iter().filter(|s| s.passed).count();
    writeln!(text, "summary: {passed}/{} sections PASS", sections.len()).unwrap();
    Ok(ReproduceReport { sections, text })
}
