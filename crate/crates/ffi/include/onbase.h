/* C interface of the onbase basestation-allocation library. */

#ifndef ONBASE_H
#define ONBASE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call in this interface.
typedef enum OnbaseStatus {
  // The call succeeded.
  ONBASE_STATUS_OK = 0,
  // A required pointer argument was null.
  ONBASE_STATUS_NULL_POINTER = 1,
  // A string argument was not valid UTF-8.
  ONBASE_STATUS_INVALID_UTF8 = 2,
  // The request itself is invalid: unknown name, bad shape, bad index.
  ONBASE_STATUS_INVALID_ARGUMENT = 3,
  // The request is well-formed but failed: overflow, I/O, too large.
  ONBASE_STATUS_RUNTIME_ERROR = 4,
  // The library panicked; the call had no effect.
  ONBASE_STATUS_PANIC = 5,
} OnbaseStatus;

// A `users x basestations` weight matrix behind an opaque handle.
typedef struct OnbaseMatrix OnbaseMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the most recent failure on this thread. Empty when no
// call has failed yet; the pointer stays valid until the next failing call
// on the same thread.
const char *onbase_last_error_message(void);

// Library version as a static string; never freed by the caller.
const char *onbase_version(void);

// Builds a matrix from `n * m` row-major weights. On success writes a new
// handle to `out`; release it with `onbase_matrix_free`.
//
// # Safety
// `data` must point to `n * m` readable doubles and `out` to a writable
// pointer slot.
enum OnbaseStatus onbase_matrix_new(size_t n,
                                    size_t m,
                                    const double *data,
                                    struct OnbaseMatrix **out);

// Reads a matrix from a `.csv` or `.json` file written by this library or
// the `onbase gen` command.
//
// # Safety
// `path` must be a NUL-terminated string and `out` a writable pointer slot.
enum OnbaseStatus onbase_matrix_read_file(const char *path, struct OnbaseMatrix **out);

// Writes the matrix to `path`; a `.json` extension selects JSON, anything
// else CSV. Values round-trip bit-exactly through either format.
//
// # Safety
// `w` must be a live handle and `path` a NUL-terminated string.
enum OnbaseStatus onbase_matrix_write_file(const struct OnbaseMatrix *w, const char *path);

// Releases a handle created by a `*_new`/`*_read` call. Null is a no-op.
//
// # Safety
// `w` must be null or a handle that has not been freed before.
void onbase_matrix_free(struct OnbaseMatrix *w);

// Writes the number of users to `n_out` and of basestations to `m_out`;
// either out parameter may be null to skip it.
//
// # Safety
// `w` must be a live handle; non-null out parameters must be writable.
enum OnbaseStatus onbase_matrix_shape(const struct OnbaseMatrix *w, size_t *n_out, size_t *m_out);

// Reads one weight; requires `user < n` and `basestation < m`.
//
// # Safety
// `w` must be a live handle and `value_out` writable.
enum OnbaseStatus onbase_matrix_get(const struct OnbaseMatrix *w,
                                    size_t user,
                                    size_t basestation,
                                    double *value_out);

// Runs an online algorithm by registry name (for example `"max-weight"`,
// `"k-secretary"`, `"hide-and-seek"`) over the users in row order.
//
// `sample_len < 0` and `sample_prob < 0` select the algorithm defaults.
// `seed` feeds the algorithm's internal randomness; results are
// deterministic in `(matrix, algorithm, parameters, seed)`. A non-null
// `assignment_out` receives one basestation index per user; a non-null
// `value_out` receives the time-shared utility of the final allocation.
//
// # Safety
// `assignment_out`, when non-null, must have room for one `size_t` per
// user of `w`.
enum OnbaseStatus onbase_run_online(const struct OnbaseMatrix *w,
                                    const char *algorithm,
                                    uint64_t seed,
                                    int64_t sample_len,
                                    double sample_prob,
                                    size_t *assignment_out,
                                    double *value_out);

// Time-shared utility of a caller-provided allocation; `assignment` holds
// one basestation index per user.
//
// # Safety
// `assignment` must point to one `size_t` per user of `w`.
enum OnbaseStatus onbase_ts_utility(const struct OnbaseMatrix *w,
                                    const size_t *assignment,
                                    double *value_out);

// Exact offline optimum by exhaustive search; only for small instances
// (all `m^n` allocations are enumerated).
//
// # Safety
// `w` must be a live handle and `value_out` writable.
enum OnbaseStatus onbase_brute_force_value(const struct OnbaseMatrix *w, double *value_out);

// Exact offline optimum for matrices whose rows are constant (identical
// basestations); fails with `INVALID_ARGUMENT` otherwise.
//
// # Safety
// `w` must be a live handle and `value_out` writable.
enum OnbaseStatus onbase_identical_optimal_value(const struct OnbaseMatrix *w, double *value_out);

// Weight of a maximum bipartite matching of users to basestations — an
// upper bound on the time-shared optimum, tight when every basestation
// may hold at most one user.
//
// # Safety
// `w` must be a live handle and `value_out` writable.
enum OnbaseStatus onbase_matching_upper_bound(const struct OnbaseMatrix *w, double *value_out);

// Probability that the single-pick threshold rule with sample length `r`
// isolates the best of `n` users under a uniformly random arrival order.
//
// # Safety
// `value_out` must be writable.
enum OnbaseStatus onbase_secretary_success(size_t n, size_t r, double *value_out);

// Lower bound on the expected utility fraction kept by the multi-slot
// threshold rule: sampled fraction `alpha`, `m` basestations, per-slot
// load capped at `dmax` when truncating the series.
//
// # Safety
// `value_out` must be writable.
enum OnbaseStatus onbase_threshold_bound(double alpha, size_t dmax, size_t m, double *value_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ONBASE_H */
