//! C ABI over `qgame`.
//!
//! Every fallible function returns a [`QgStatus`]. On failure the message is
//! available from [`qg_last_error_message`] on the same thread. Handles are
//! opaque and must be released with their matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use qgame::{
    BimatrixGame, ClassicalModelTable, Error, Profile, QuantizationConfig, Quantizer,
    StrategyUnitary,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    NotFound = 5,
    Numerical = 6,
    Panic = 7,
}

/// Which pure Nash set to read.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QgNashKind {
    Weak = 0,
    Strict = 1,
}

/// Angles of the two-parameter strategy family.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QgAngles {
    pub theta: f64,
    pub phi: f64,
}

/// Opaque bimatrix game.
pub struct QgGame {
    inner: BimatrixGame,
}

/// Opaque classical model table.
pub struct QgModel {
    inner: ClassicalModelTable,
    config: QuantizationConfig,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(QgStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Syntax { .. }
            | Error::MissingEntry { .. }
            | Error::DuplicateEntry { .. }
            | Error::DuplicateLabel(_)
            | Error::InvalidStrategySpec(_) => QgStatus::ParseError,
            Error::UnknownLabel(_)
            | Error::UnknownProfile { .. }
            | Error::IndexOutOfBounds { .. } => QgStatus::NotFound,
            Error::NonFinite(_)
            | Error::NonConvergence(_)
            | Error::NotUnitary(_)
            | Error::InvalidDistribution(_) => QgStatus::Numerical,
            _ => QgStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn set_last_error(message: String) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = text);
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> QgStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => QgStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            QgStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(QgStatus::NullPointer, format!("null pointer: {what}"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(QgStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

fn strategy(angles: QgAngles) -> Result<StrategyUnitary, Failure> {
    Ok(StrategyUnitary::from_angles(angles.theta, angles.phi)?)
}

fn quantizer(gamma: f64) -> Result<Quantizer, Failure> {
    Ok(Quantizer::new(QuantizationConfig::new(gamma)?))
}

/// Message of the last failed call on this thread, or an empty string.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Parses a game in the text format.
///
/// # Safety
/// `source` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qg_game_parse(source: *const c_char, out: *mut *mut QgGame) -> QgStatus {
    guard(|| {
        let game = qgame::parse_game(text(source, "source")?)?;
        write(out, Box::into_raw(Box::new(QgGame { inner: game })), "out")
    })
}

/// # Safety
/// `game` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn qg_game_free(game: *mut QgGame) {
    if !game.is_null() {
        drop(Box::from_raw(game));
    }
}

/// Canonical text form. Release the string with [`qg_string_free`].
///
/// # Safety
/// `game` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qg_game_to_string(game: *const QgGame, out: *mut *mut c_char) -> QgStatus {
    guard(|| {
        let g = handle(game, "game")?;
        write(out, into_c_string(g.inner.to_canonical_string()), "out")
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn qg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `game` must be a live handle; both outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn qg_game_shape(
    game: *const QgGame,
    out_rows: *mut usize,
    out_cols: *mut usize,
) -> QgStatus {
    guard(|| {
        let (rows, cols) = handle(game, "game")?.inner.shape();
        write(out_rows, rows, "out_rows")?;
        write(out_cols, cols, "out_cols")
    })
}

/// # Safety
/// `game` must be a live handle; both outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn qg_game_payoff(
    game: *const QgGame,
    row: usize,
    col: usize,
    out_row_payoff: *mut f64,
    out_col_payoff: *mut f64,
) -> QgStatus {
    guard(|| {
        let g = &handle(game, "game")?.inner;
        let p = Profile::new(row, col);
        g.check_profile(p)?;
        let (a, b) = g.payoff(p);
        write(out_row_payoff, a, "out_row_payoff")?;
        write(out_col_payoff, b, "out_col_payoff")
    })
}

/// Writes up to `capacity` equilibrium profiles in row-major order and the
/// total count to `out_count`. Call with `capacity` 0 to size the buffers.
///
/// # Safety
/// `game` must be a live handle; `out_count` must be writable; `rows` and
/// `cols` must hold `capacity` elements when `capacity` > 0.
#[no_mangle]
pub unsafe extern "C" fn qg_game_pure_nash(
    game: *const QgGame,
    kind: QgNashKind,
    rows: *mut usize,
    cols: *mut usize,
    capacity: usize,
    out_count: *mut usize,
) -> QgStatus {
    guard(|| {
        let report = handle(game, "game")?.inner.pure_nash();
        let found = match kind {
            QgNashKind::Weak => report.weak_nash,
            QgNashKind::Strict => report.strict_nash,
        };
        if capacity > 0 && (rows.is_null() || cols.is_null()) {
            return Err(null("rows/cols"));
        }
        for (k, p) in found.iter().take(capacity).enumerate() {
            rows.add(k).write(p.row);
            cols.add(k).write(p.col);
        }
        write(out_count, found.len(), "out_count")
    })
}

/// Extended payout matrix over a comma-separated strategy list such as
/// `"C,D,Q"` or `"C,1.2:0.4"`.
///
/// # Safety
/// `game` must be a live handle; `strategies` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qg_quantize(
    game: *const QgGame,
    gamma: f64,
    strategies: *const c_char,
    out: *mut *mut QgGame,
) -> QgStatus {
    guard(|| {
        let g = &handle(game, "game")?.inner;
        let moves = StrategyUnitary::parse_list(text(strategies, "strategies")?)?;
        let extended = quantizer(gamma)?.extended_matrix(g, &moves)?;
        write(out, Box::into_raw(Box::new(QgGame { inner: extended })), "out")
    })
}

/// Outcome probabilities over CC, CD, DC, DD.
///
/// # Safety
/// `out` must hold 4 doubles.
#[no_mangle]
pub unsafe extern "C" fn qg_outcome_distribution(
    gamma: f64,
    alice: QgAngles,
    bob: QgAngles,
    out: *mut f64,
) -> QgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let dist = quantizer(gamma)?.outcome_distribution(&strategy(alice)?, &strategy(bob)?)?;
        for (k, p) in dist.probabilities().into_iter().enumerate() {
            out.add(k).write(p);
        }
        Ok(())
    })
}

/// # Safety
/// `game` must be a live 2×2 game handle; both outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn qg_expected_payoffs(
    game: *const QgGame,
    gamma: f64,
    alice: QgAngles,
    bob: QgAngles,
    out_row_payoff: *mut f64,
    out_col_payoff: *mut f64,
) -> QgStatus {
    guard(|| {
        let g = &handle(game, "game")?.inner;
        let (a, b) = quantizer(gamma)?.expected_payoffs(g, &strategy(alice)?, &strategy(bob)?)?;
        write(out_row_payoff, a, "out_row_payoff")?;
        write(out_col_payoff, b, "out_col_payoff")
    })
}

/// Builds the classical model table for a 2×2 game.
///
/// # Safety
/// `game` must be a live handle; `strategies` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qg_model_build(
    game: *const QgGame,
    gamma: f64,
    strategies: *const c_char,
    out: *mut *mut QgModel,
) -> QgStatus {
    guard(|| {
        let g = &handle(game, "game")?.inner;
        let moves = StrategyUnitary::parse_list(text(strategies, "strategies")?)?;
        let config = QuantizationConfig::new(gamma)?;
        let inner = ClassicalModelTable::build(g, &moves, config)?;
        write(out, Box::into_raw(Box::new(QgModel { inner, config })), "out")
    })
}

/// # Safety
/// `model` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn qg_model_free(model: *mut QgModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Checks the table against the quantum pipeline at the model's gamma.
///
/// # Safety
/// Handles must be live; both outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn qg_model_verify(
    model: *const QgModel,
    game: *const QgGame,
    tol: f64,
    out_passed: *mut bool,
    out_mismatches: *mut usize,
) -> QgStatus {
    guard(|| {
        let m = handle(model, "model")?;
        let g = &handle(game, "game")?.inner;
        let report = m.inner.verify_equivalence(g, m.config, tol)?;
        write(out_passed, report.passed(), "out_passed")?;
        write(out_mismatches, report.mismatches.len(), "out_mismatches")
    })
}

/// Seeded sampling of one profile. Counts are ordered CC, CD, DC, DD.
///
/// # Safety
/// `model` must be live; labels NUL-terminated; `out_counts` must hold 4
/// values; `out_l1` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qg_model_sample(
    model: *const QgModel,
    row: *const c_char,
    col: *const c_char,
    seed: u64,
    trials: u64,
    out_counts: *mut u64,
    out_l1: *mut f64,
) -> QgStatus {
    guard(|| {
        let m = handle(model, "model")?;
        if out_counts.is_null() {
            return Err(null("out_counts"));
        }
        let report = m
            .inner
            .sample_play(text(row, "row")?, text(col, "col")?, seed, trials)?;
        for (k, c) in report.counts.into_iter().enumerate() {
            out_counts.add(k).write(c);
        }
        write(out_l1, report.l1_distance, "out_l1")
    })
}

/// Model export text. Release the string with [`qg_string_free`].
///
/// # Safety
/// `model` must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qg_model_to_string(model: *const QgModel, out: *mut *mut c_char) -> QgStatus {
    guard(|| {
        let text = handle(model, "model")?.inner.to_export_string()?;
        write(out, into_c_string(text), "out")
    })
}
