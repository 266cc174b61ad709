#ifndef ENGAGEMENT_H
#define ENGAGEMENT_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum EngageStatus {
  ENGAGE_STATUS_OK = 0,
  ENGAGE_STATUS_NULL_POINTER = 1,
  ENGAGE_STATUS_DOMAIN = 2,
  ENGAGE_STATUS_NO_INTERCEPT = 3,
  ENGAGE_STATUS_UNSUPPORTED = 4,
  ENGAGE_STATUS_CONFIG = 5,
  ENGAGE_STATUS_INSUFFICIENT_DATA = 6,
  ENGAGE_STATUS_RESOURCE = 7,
  ENGAGE_STATUS_OUT_OF_BAND = 8,
  ENGAGE_STATUS_PARSE = 9,
  ENGAGE_STATUS_INDEX_OUT_OF_RANGE = 10,
  ENGAGE_STATUS_PANIC = 11,
} EngageStatus;

/**
 * Completed pure-pursuit run.
 */
typedef struct EngagePursuit EngagePursuit;

/**
 * Range-advantage scenario parsed from JSON.
 */
typedef struct EngageScenario EngageScenario;

typedef struct EngageDuelOutcome {
  double p_red_destroyed;
  double p_blue_destroyed;
  double p_mutual;
  double p_both_survive;
} EngageDuelOutcome;

typedef struct EngageNvnResult {
  double p_salvo;
  double survivability;
  double expected_survivors;
} EngageNvnResult;

/**
 * Speeds in m/s; `rho` in radians.
 */
typedef struct EngageKinematics {
  double v_blue;
  double v_red;
  double rho;
  double v_missile_blue;
  double v_missile_red;
} EngageKinematics;

typedef struct EngageIntercept {
  double beta;
  double alpha;
  double v_closure;
  double mu_blue;
  double alpha_missile;
  double v_closure_missile;
  double sine_ratio;
} EngageIntercept;

typedef struct EngageRangeBin {
  uint32_t index;
  uint64_t folds;
  bool aliased;
  double folded_delay;
  double echo_delay;
} EngageRangeBin;

typedef struct EngageSnrParams {
  double p_t;
  double g_t;
  double a_r;
  double rcs;
  double t_pulse;
  double range;
  double t_s;
  double losses;
} EngageSnrParams;

typedef struct EngageDuelOutcomes {
  double blue_win;
  double red_win;
  /**
   * 1 − blue_win − red_win, unclamped.
   */
  double mutual_kill;
  bool out_of_range;
} EngageDuelOutcomes;

typedef struct EngagePursuitRow {
  size_t step;
  double target_x;
  double target_y;
  double follower_x;
  double follower_y;
  double distance;
  double cos;
  double sin;
} EngagePursuitRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *engage_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *engage_version(void);

/**
 * Probability that a salvo of `k` shots kills its target.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum EngageStatus engage_salvo_kill(double p, uint32_t k, double *out);

/**
 * Probability that the target survives a salvo of `k` shots.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum EngageStatus engage_salvo_survive(double p, uint32_t k, double *out);

/**
 * Discrete duel of `n` shots (or volleys) per side.
 * `red_first` is ignored for simultaneous duels.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum EngageStatus engage_duel(double p_blue,
                              double p_red,
                              uint32_t n,
                              bool red_first,
                              bool simultaneous,
                              struct EngageDuelOutcome *out);

/**
 * Attackers each fire `weapons_per_attacker` shots; `attackers` must equal
 * `targets`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum EngageStatus engage_nvn(double p,
                             uint32_t weapons_per_attacker,
                             uint32_t attackers,
                             uint32_t targets,
                             struct EngageNvnResult *out);

/**
 * # Safety
 * `kin` must be valid for reads and `out` valid for writes.
 */
enum EngageStatus engage_solve_intercept(const struct EngageKinematics *kin,
                                         struct EngageIntercept *out);

/**
 * Aircraft separation when blue's missile launched at `d_launch` arrives.
 * `kinematic_tof` selects TOF = R_MB/(V_MB + V_B) instead of R_MB/V_CMB.
 *
 * # Safety
 * `kin` must be valid for reads and `out` valid for writes.
 */
enum EngageStatus engage_post_intercept_separation(const struct EngageKinematics *kin,
                                                   double d_launch,
                                                   bool kinematic_tof,
                                                   double *out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum EngageStatus engage_unambiguous_range(double prf, bool exact_light_speed, double *out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum EngageStatus engage_range_bin(double range,
                                   double prf,
                                   uint32_t n_bins,
                                   bool exact_light_speed,
                                   struct EngageRangeBin *out);

/**
 * Doppler shift in Hz; positive for a closing target.
 */
double engage_doppler_shift(double f_tx, double radial_velocity, bool exact_light_speed);

/**
 * Single-pulse SNR, linear and in dB.
 *
 * # Safety
 * `params` must be valid for reads; `linear` and `db` valid for writes.
 */
enum EngageStatus engage_snr(const struct EngageSnrParams *params, double *linear, double *db);

/**
 * Parses a scenario of the form
 * `{"kinematics": {...}, "blue": {...}, "red": {...}, "tof_convention": "literal"}`
 * with `rho` in radians. On success `*out` owns a new handle.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` valid for writes.
 */
enum EngageStatus engage_scenario_from_json(const char *json, struct EngageScenario **out);

/**
 * Releases a scenario handle; null is ignored.
 *
 * # Safety
 * `handle` must come from `engage_scenario_from_json` and not be used again.
 */
void engage_scenario_free(struct EngageScenario *handle);

/**
 * Probability that blue's SAR missile kills first.
 *
 * # Safety
 * `handle` must be a live scenario handle and `out` valid for writes.
 */
enum EngageStatus engage_scenario_sar(const struct EngageScenario *handle, double *out);

/**
 * Probability that blue's AR missile kills first.
 *
 * # Safety
 * `handle` must be a live scenario handle and `out` valid for writes.
 */
enum EngageStatus engage_scenario_ar(const struct EngageScenario *handle, double *out);

/**
 * # Safety
 * `handle` must be a live scenario handle and `out` valid for writes.
 */
enum EngageStatus engage_scenario_duel(const struct EngageScenario *handle,
                                       struct EngageDuelOutcomes *out);

/**
 * Runs a pursuit over `n_waypoints` (x, y) pairs stored contiguously in
 * `waypoints_xy`. On success `*out` owns a new handle.
 *
 * # Safety
 * `waypoints_xy` must hold `2 * n_waypoints` readable doubles and `out` must
 * be valid for writes.
 */
enum EngageStatus engage_pursuit_run(const double *waypoints_xy,
                                     size_t n_waypoints,
                                     double start_x,
                                     double start_y,
                                     double speed,
                                     double kill_radius,
                                     struct EngagePursuit **out);

/**
 * Number of recorded rows; 0 for a null handle.
 *
 * # Safety
 * `handle` must be null or a live pursuit handle.
 */
size_t engage_pursuit_row_count(const struct EngagePursuit *handle);

/**
 * 1 when the target was destroyed, 0 when it escaped, −1 for a null handle.
 *
 * # Safety
 * `handle` must be null or a live pursuit handle.
 */
int32_t engage_pursuit_destroyed(const struct EngagePursuit *handle);

/**
 * # Safety
 * `handle` must be a live pursuit handle and `out` valid for writes.
 */
enum EngageStatus engage_pursuit_row(const struct EngagePursuit *handle,
                                     size_t index,
                                     struct EngagePursuitRow *out);

/**
 * Releases a pursuit handle; null is ignored.
 *
 * # Safety
 * `handle` must come from `engage_pursuit_run` and not be used again.
 */
void engage_pursuit_free(struct EngagePursuit *handle);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* ENGAGEMENT_H */
