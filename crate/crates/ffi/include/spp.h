#ifndef SPP_H
#define SPP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum SppStatus {
  SPP_STATUS_OK = 0,
  SPP_STATUS_NULL_ARGUMENT = 1,
  SPP_STATUS_INVALID_UTF8 = 2,
  SPP_STATUS_IO = 3,
  SPP_STATUS_PARSE = 4,
  SPP_STATUS_SCHEMA = 5,
  SPP_STATUS_INVALID_SCENARIO = 6,
  SPP_STATUS_SOLVER = 7,
  SPP_STATUS_INDEX_OUT_OF_RANGE = 8,
  SPP_STATUS_BUFFER_TOO_SMALL = 9,
  /**
   * The requested value does not exist, e.g. the latest start of an
   * unreachable vehicle.
   */
  SPP_STATUS_NOT_AVAILABLE = 10,
  SPP_STATUS_PANIC = 11,
} SppStatus;

/**
 * The outcome of planning a scenario.
 */
typedef struct SppPlan SppPlan;

/**
 * A validated scenario.
 */
typedef struct SppScenario SppScenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread, or null if the last
 * call succeeded. Valid until the next call into this library on the same
 * thread.
 */
const char *spp_last_error_message(void);

/**
 * Library version as a static nul-terminated string.
 */
const char *spp_version(void);

/**
 * Loads and validates a scenario file.
 *
 * # Safety
 * `path` must be a nul-terminated string; `out` must be valid for writes.
 */
enum SppStatus spp_scenario_from_file(const char *path, struct SppScenario **out);

/**
 * Parses and validates a scenario from JSON text.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be valid for writes.
 */
enum SppStatus spp_scenario_from_json(const char *json, struct SppScenario **out);

/**
 * # Safety
 * `scenario` must be a live handle; `out` must be valid for writes.
 */
enum SppStatus spp_scenario_vehicle_count(const struct SppScenario *scenario, size_t *out);

/**
 * Releases a scenario. Null is ignored.
 *
 * # Safety
 * `scenario` must be null or a handle from this library not yet freed.
 */
void spp_scenario_free(struct SppScenario *scenario);

/**
 * Plans every vehicle in priority order. Infeasible vehicles and safety
 * violations are part of a successful result; query them on the plan.
 *
 * # Safety
 * `scenario` must be a live handle; `out` must be valid for writes.
 */
enum SppStatus spp_plan_run(const struct SppScenario *scenario, struct SppPlan **out);

/**
 * Releases a plan. Null is ignored.
 *
 * # Safety
 * `plan` must be null or a handle from this library not yet freed.
 */
void spp_plan_free(struct SppPlan *plan);

/**
 * # Safety
 * `plan` must be a live handle; `out` must be valid for writes.
 */
enum SppStatus spp_plan_vehicle_count(const struct SppPlan *plan, size_t *out);

/**
 * Whether vehicle `index` (0 = highest priority) was planned.
 *
 * # Safety
 * `plan` must be a live handle; `out` must be valid for writes.
 */
enum SppStatus spp_plan_vehicle_feasible(const struct SppPlan *plan, size_t index, bool *out);

/**
 * Latest start time of vehicle `index`; `SPP_STATUS_NOT_AVAILABLE` if its
 * target is unreachable within the horizon.
 *
 * # Safety
 * `plan` must be a live handle; `out` must be valid for writes.
 */
enum SppStatus spp_plan_latest_start(const struct SppPlan *plan, size_t index, double *out);

/**
 * Arrival time of vehicle `index`; `SPP_STATUS_NOT_AVAILABLE` if it was
 * not planned.
 *
 * # Safety
 * `plan` must be a live handle; `out` must be valid for writes.
 */
enum SppStatus spp_plan_arrival_time(const struct SppPlan *plan, size_t index, double *out);

/**
 * Shape of vehicle `index`'s trajectory: `rows` samples of `columns`
 * values each (time, then the state, then the control). A vehicle without
 * a trajectory has zero rows.
 *
 * # Safety
 * `plan` must be a live handle; `rows` and `columns` must be valid for
 * writes.
 */
enum SppStatus spp_plan_trajectory_shape(const struct SppPlan *plan,
                                         size_t index,
                                         size_t *rows,
                                         size_t *columns);

/**
 * Copies vehicle `index`'s trajectory, row-major, into `buffer` of
 * `capacity` doubles. Fails with `SPP_STATUS_BUFFER_TOO_SMALL` unless
 * `capacity >= rows * columns`.
 *
 * # Safety
 * `plan` must be a live handle; `buffer` must be valid for `capacity`
 * writes.
 */
enum SppStatus spp_plan_trajectory_copy(const struct SppPlan *plan,
                                        size_t index,
                                        double *buffer,
                                        size_t capacity);

/**
 * Whether the a-posteriori check found no violations.
 *
 * # Safety
 * `plan` must be a live handle; `out` must be valid for writes.
 */
enum SppStatus spp_plan_is_safe(const struct SppPlan *plan, bool *out);

/**
 * # Safety
 * `plan` must be a live handle; `out` must be valid for writes.
 */
enum SppStatus spp_plan_violation_count(const struct SppPlan *plan, size_t *out);

/**
 * Smallest separation between any two planned vehicles;
 * `SPP_STATUS_NOT_AVAILABLE` with fewer than two.
 *
 * # Safety
 * `plan` must be a live handle; `out` must be valid for writes.
 */
enum SppStatus spp_plan_min_pairwise_distance(const struct SppPlan *plan, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPP_H */
