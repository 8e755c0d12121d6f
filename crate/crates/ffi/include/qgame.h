#ifndef QGAME_H
#define QGAME_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Which pure Nash set to read.
 */
typedef enum QgNashKind {
  QG_NASH_KIND_WEAK = 0,
  QG_NASH_KIND_STRICT = 1,
} QgNashKind;

/**
 * Result code of every fallible call.
 */
typedef enum QgStatus {
  QG_STATUS_OK = 0,
  QG_STATUS_NULL_POINTER = 1,
  QG_STATUS_INVALID_UTF8 = 2,
  QG_STATUS_PARSE_ERROR = 3,
  QG_STATUS_INVALID_ARGUMENT = 4,
  QG_STATUS_NOT_FOUND = 5,
  QG_STATUS_NUMERICAL = 6,
  QG_STATUS_PANIC = 7,
} QgStatus;

/**
 * Opaque bimatrix game.
 */
typedef struct QgGame QgGame;

/**
 * Opaque classical model table.
 */
typedef struct QgModel QgModel;

/**
 * Angles of the two-parameter strategy family.
 */
typedef struct QgAngles {
  double theta;
  double phi;
} QgAngles;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or an empty string.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *qg_last_error_message(void);

/**
 * Parses a game in the text format.
 *
 * # Safety
 * `source` must be a NUL-terminated string; `out` must be writable.
 */
enum QgStatus qg_game_parse(const char *source, struct QgGame **out);

/**
 * # Safety
 * `game` must come from this library and not be used afterwards. Null is ignored.
 */
void qg_game_free(struct QgGame *game);

/**
 * Canonical text form. Release the string with [`qg_string_free`].
 *
 * # Safety
 * `game` must be a live handle; `out` must be writable.
 */
enum QgStatus qg_game_to_string(const struct QgGame *game, char **out);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards. Null is ignored.
 */
void qg_string_free(char *s);

/**
 * # Safety
 * `game` must be a live handle; both outputs must be writable.
 */
enum QgStatus qg_game_shape(const struct QgGame *game, size_t *out_rows, size_t *out_cols);

/**
 * # Safety
 * `game` must be a live handle; both outputs must be writable.
 */
enum QgStatus qg_game_payoff(const struct QgGame *game,
                             size_t row,
                             size_t col,
                             double *out_row_payoff,
                             double *out_col_payoff);

/**
 * Writes up to `capacity` equilibrium profiles in row-major order and the
 * total count to `out_count`. Call with `capacity` 0 to size the buffers.
 *
 * # Safety
 * `game` must be a live handle; `out_count` must be writable; `rows` and
 * `cols` must hold `capacity` elements when `capacity` > 0.
 */
enum QgStatus qg_game_pure_nash(const struct QgGame *game,
                                enum QgNashKind kind,
                                size_t *rows,
                                size_t *cols,
                                size_t capacity,
                                size_t *out_count);

/**
 * Extended payout matrix over a comma-separated strategy list such as
 * `"C,D,Q"` or `"C,1.2:0.4"`.
 *
 * # Safety
 * `game` must be a live handle; `strategies` NUL-terminated; `out` writable.
 */
enum QgStatus qg_quantize(const struct QgGame *game,
                          double gamma,
                          const char *strategies,
                          struct QgGame **out);

/**
 * Outcome probabilities over CC, CD, DC, DD.
 *
 * # Safety
 * `out` must hold 4 doubles.
 */
enum QgStatus qg_outcome_distribution(double gamma,
                                      struct QgAngles alice,
                                      struct QgAngles bob,
                                      double *out);

/**
 * # Safety
 * `game` must be a live 2×2 game handle; both outputs must be writable.
 */
enum QgStatus qg_expected_payoffs(const struct QgGame *game,
                                  double gamma,
                                  struct QgAngles alice,
                                  struct QgAngles bob,
                                  double *out_row_payoff,
                                  double *out_col_payoff);

/**
 * Builds the classical model table for a 2×2 game.
 *
 * # Safety
 * `game` must be a live handle; `strategies` NUL-terminated; `out` writable.
 */
enum QgStatus qg_model_build(const struct QgGame *game,
                             double gamma,
                             const char *strategies,
                             struct QgModel **out);

/**
 * # Safety
 * `model` must come from this library and not be used afterwards. Null is ignored.
 */
void qg_model_free(struct QgModel *model);

/**
 * Checks the table against the quantum pipeline at the model's gamma.
 *
 * # Safety
 * Handles must be live; both outputs must be writable.
 */
enum QgStatus qg_model_verify(const struct QgModel *model,
                              const struct QgGame *game,
                              double tol,
                              bool *out_passed,
                              size_t *out_mismatches);

/**
 * Seeded sampling of one profile. Counts are ordered CC, CD, DC, DD.
 *
 * # Safety
 * `model` must be live; labels NUL-terminated; `out_counts` must hold 4
 * values; `out_l1` must be writable.
 */
enum QgStatus qg_model_sample(const struct QgModel *model,
                              const char *row,
                              const char *col,
                              uint64_t seed,
                              uint64_t trials,
                              uint64_t *out_counts,
                              double *out_l1);

/**
 * Model export text. Release the string with [`qg_string_free`].
 *
 * # Safety
 * `model` must be live; `out` writable.
 */
enum QgStatus qg_model_to_string(const struct QgModel *model, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QGAME_H */
