#ifndef QHEAT_H
#define QHEAT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QheatStatus {
  QHEAT_STATUS_OK = 0,
  QHEAT_STATUS_NULL_POINTER = 1,
  QHEAT_STATUS_INVALID_ARGUMENT = 2,
  QHEAT_STATUS_INVALID_STATE = 3,
  QHEAT_STATUS_CONFIG = 4,
  QHEAT_STATUS_IO = 5,
  QHEAT_STATUS_BUFFER_TOO_SMALL = 6,
  QHEAT_STATUS_PANIC = 7,
} QheatStatus;

/**
 * Opaque list of ledger rows.
 */
typedef struct QheatLedger QheatLedger;

/**
 * Opaque density matrix.
 */
typedef struct QheatState QheatState;

/**
 * Opaque collision trace.
 */
typedef struct QheatTrace QheatTrace;

/**
 * One ledger row; energies in peV, entropies in nats.
 */
typedef struct QheatThermoRow {
  double tau_ms;
  double e_a;
  double e_b;
  double q_a;
  double q_b;
  double s_a;
  double s_b;
  double s_ab;
  double mutual_info;
  double delta_mi;
  double relent_a;
  double relent_b;
  double discord;
  double eq5_lhs;
  double eq5_rhs;
  double eq5_residual;
  double clausius_slack;
} QheatThermoRow;

/**
 * Collision-model parameters. Temperatures are given as excited-state
 * populations of the hot system qubit and the cold bath qubits.
 */
typedef struct QheatCollisionParams {
  size_t n_bath;
  size_t steps;
  double lambda_sigma;
  double alpha;
  double hot_p1;
  double cold_p1;
  double nu0_hz;
  uint64_t seed;
  size_t smoothing_window;
} QheatCollisionParams;

/**
 * Summary of a finished collision run; energies in peV.
 */
typedef struct QheatTraceSummary {
  size_t steps;
  double e_hot_init;
  double e_cold_init;
  double e_mean;
  double max_energy_drift;
  double final_trace;
  double final_min_eigenvalue;
} QheatTraceSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *qheat_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *qheat_version(void);

/**
 * Initial state of a named preset ("uncorrelated", "correlated_phi_pi",
 * "correlated_phi_half_pi").
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum QheatStatus qheat_state_new_scenario(const char *name, double nu0_hz, struct QheatState **out);

/**
 * ρ_A ⊗ ρ_B + α|01⟩⟨10| + α*|10⟩⟨01| from excited populations.
 *
 * # Safety
 * `out` must be writable.
 */
enum QheatStatus qheat_state_new_correlated(double p_a1,
                                            double p_b1,
                                            double alpha_re,
                                            double alpha_im,
                                            double nu0_hz,
                                            struct QheatState **out);

/**
 * # Safety
 * `state` must be null or a handle from this library, not yet freed.
 */
void qheat_state_free(struct QheatState *state);

/**
 * # Safety
 * Pointers must be valid.
 */
enum QheatStatus qheat_state_dim(const struct QheatState *state, size_t *out);

/**
 * Copies the matrix in row-major order into `re` and `im`, each of length
 * at least dim².
 *
 * # Safety
 * `re` and `im` must point to `len` writable doubles.
 */
enum QheatStatus qheat_state_copy_matrix(const struct QheatState *state,
                                         double *re,
                                         double *im,
                                         size_t len);

/**
 * State after the exchange interaction acts for `tau_ms`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum QheatStatus qheat_state_evolve(const struct QheatState *state,
                                    double tau_ms,
                                    double coupling_hz,
                                    struct QheatState **out);

/**
 * # Safety
 * Pointers must be valid.
 */
enum QheatStatus qheat_mutual_information(const struct QheatState *state, double *out);

/**
 * # Safety
 * Pointers must be valid.
 */
enum QheatStatus qheat_geometric_discord(const struct QheatState *state, double *out);

/**
 * Ledger of a preset over `count` points spanning [0, t_max_ms].
 *
 * # Safety
 * `scenario` must be a NUL-terminated string; `out` must be writable.
 */
enum QheatStatus qheat_ledger_run(const char *scenario,
                                  size_t count,
                                  double t_max_ms,
                                  double coupling_hz,
                                  double nu0_hz,
                                  struct QheatLedger **out);

/**
 * # Safety
 * `ledger` must be null or a live handle.
 */
void qheat_ledger_free(struct QheatLedger *ledger);

/**
 * # Safety
 * Pointers must be valid.
 */
enum QheatStatus qheat_ledger_len(const struct QheatLedger *ledger, size_t *out);

/**
 * # Safety
 * Pointers must be valid.
 */
enum QheatStatus qheat_ledger_row(const struct QheatLedger *ledger,
                                  size_t index,
                                  struct QheatThermoRow *out);

/**
 * Fills `out` with the canonical parameters (8 bath qubits, 10⁴ steps,
 * σ = π/50, populations 0.3 / 0.2, α = 0, seed 0).
 *
 * # Safety
 * `out` must be writable.
 */
enum QheatStatus qheat_collision_params_default(struct QheatCollisionParams *out);

/**
 * # Safety
 * Pointers must be valid.
 */
enum QheatStatus qheat_collision_run(const struct QheatCollisionParams *params,
                                     struct QheatTrace **out);

/**
 * # Safety
 * `trace` must be null or a live handle.
 */
void qheat_trace_free(struct QheatTrace *trace);

/**
 * # Safety
 * Pointers must be valid.
 */
enum QheatStatus qheat_trace_summary(const struct QheatTrace *trace, struct QheatTraceSummary *out);

/**
 * Copies the system energy at steps 0..=steps (steps + 1 values), raw or
 * smoothed.
 *
 * # Safety
 * `out` must point to `len` writable doubles.
 */
enum QheatStatus qheat_trace_system_energies(const struct QheatTrace *trace,
                                             int smoothed,
                                             double *out,
                                             size_t len);

/**
 * Number of band crossings, on the raw or smoothed system energy.
 *
 * # Safety
 * Pointers must be valid.
 */
enum QheatStatus qheat_trace_crossings(const struct QheatTrace *trace, int smoothed, size_t *out);

/**
 * Runs an experiment described by a JSON config (same schema as the
 * `simulate` config file) and writes its outputs. `checks_passed` receives
 * 1 or 0.
 *
 * # Safety
 * `config_json` must be a NUL-terminated string; `checks_passed` writable.
 */
enum QheatStatus qheat_run_config(const char *config_json, int *checks_passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QHEAT_H */
