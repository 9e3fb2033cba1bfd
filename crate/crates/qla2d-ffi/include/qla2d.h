#ifndef QLA2D_H
#define QLA2D_H

/* Generated by cbindgen from the qla2d-ffi crate; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every qla2d C API function.
 */
typedef enum Qla2dStatus {
  QLA2D_STATUS_OK = 0,
  /**
   * a required pointer argument was null or otherwise unusable
   */
  QLA2D_STATUS_NULL_ARGUMENT = 1,
  /**
   * configuration text failed to parse or validate
   */
  QLA2D_STATUS_INVALID_CONFIG = 2,
  /**
   * the operation itself failed
   */
  QLA2D_STATUS_RUNTIME_ERROR = 3,
} Qla2dStatus;

/**
 * Opaque parsed configuration.
 */
typedef struct Qla2dConfig Qla2dConfig;

/**
 * Opaque simulation: medium, state and region bookkeeping.
 */
typedef struct Qla2dSim Qla2dSim;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy the last error message for this thread into `buf` (NUL-terminated,
 * truncated to `cap` bytes). Returns the full message length in bytes,
 * excluding the NUL.
 *
 * # Safety
 * `buf` must point to at least `cap` writable bytes, or be null (then only
 * the length is returned).
 */
size_t qla2d_last_error(char *buf, size_t cap);

/**
 * Library version as a static NUL-terminated string.
 */
const char *qla2d_version(void);

/**
 * Parse a configuration text. On success writes a new handle to `out`.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be a valid pointer.
 */
enum Qla2dStatus qla2d_config_parse(const char *text, struct Qla2dConfig **out);

/**
 * Destroy a config handle. Null is a no-op.
 *
 * # Safety
 * `cfg` must be a handle from `qla2d_config_parse`, not yet freed.
 */
void qla2d_config_free(struct Qla2dConfig *cfg);

/**
 * Build a simulation (medium, initial pulse, schedule) from a config.
 *
 * # Safety
 * `cfg` must be a live config handle; `out` must be valid.
 */
enum Qla2dStatus qla2d_sim_create(const struct Qla2dConfig *cfg, struct Qla2dSim **out);

/**
 * Destroy a simulation handle. Null is a no-op.
 *
 * # Safety
 * `sim` must be a handle from `qla2d_sim_create`, not yet freed.
 */
void qla2d_sim_free(struct Qla2dSim *sim);

/**
 * Advance the simulation by `n_steps` iterations.
 *
 * # Safety
 * `sim` must be a live simulation handle.
 */
enum Qla2dStatus qla2d_sim_step(struct Qla2dSim *sim, uint64_t n_steps);

/**
 * Current iteration count.
 *
 * # Safety
 * `sim` must be live; `out` valid.
 */
enum Qla2dStatus qla2d_sim_iteration(const struct Qla2dSim *sim, uint64_t *out);

/**
 * Lattice dimensions.
 *
 * # Safety
 * `sim` must be live; `nx`, `ny` valid.
 */
enum Qla2dStatus qla2d_sim_grid(const struct Qla2dSim *sim, uint32_t *nx, uint32_t *ny);

/**
 * Total electromagnetic energy of the current field.
 *
 * # Safety
 * `sim` must be live; `out` valid.
 */
enum Qla2dStatus qla2d_sim_total_energy(const struct Qla2dSim *sim, double *out);

/**
 * Copy one qubit amplitude component (0..5) into `buf`, row-major with x
 * fastest; `len` must be at least nx·ny.
 *
 * # Safety
 * `sim` must be live; `buf` must point to `len` writable doubles.
 */
enum Qla2dStatus qla2d_sim_copy_component(const struct Qla2dSim *sim,
                                          uint32_t component,
                                          double *buf,
                                          size_t len);

/**
 * Parse a config file and execute it like the `qla2d run` subcommand.
 * Returns the CLI exit code: 0 ok, 1 config error, 2 runtime error.
 *
 * # Safety
 * `path` must be a NUL-terminated string.
 */
int32_t qla2d_run_scenario_file(const char *path);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QLA2D_H */
