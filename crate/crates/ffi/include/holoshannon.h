#ifndef HOLOSHANNON_H
#define HOLOSHANNON_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HcStatus {
  HC_STATUS_OK = 0,
  HC_STATUS_NULL_POINTER = 1,
  HC_STATUS_INVALID_UTF8 = 2,
  /**
   * Scenario text or parameter rejected.
   */
  HC_STATUS_CONFIG = 3,
  /**
   * Argument outside the domain of the computation.
   */
  HC_STATUS_DOMAIN = 4,
  /**
   * A Rust panic was caught at the boundary.
   */
  HC_STATUS_PANIC = 5,
} HcStatus;

typedef struct HcMeraNetwork HcMeraNetwork;

typedef struct HcReport HcReport;

typedef struct HcScenario HcScenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until
 * the next call into this library from the same thread.
 */
const char *hc_last_error_message(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void hc_string_free(char *s);

/**
 * The built-in ground-state scenario.
 */
struct HcScenario *hc_scenario_ground(void);

/**
 * Parses and validates a TOML scenario.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum HcStatus hc_scenario_from_toml(const char *text, struct HcScenario **out);

/**
 * Sets a scalar field by dotted path, e.g. `"geometry.l"`.
 *
 * # Safety
 * `scenario` must come from this library; `path` must be NUL-terminated.
 */
enum HcStatus hc_scenario_set_param(struct HcScenario *scenario, const char *path, double value);

/**
 * # Safety
 * `scenario` must be null or come from this library, and is not used after.
 */
void hc_scenario_free(struct HcScenario *scenario);

/**
 * Runs every pipeline. Failing checks are recorded in the report, not in
 * the status.
 *
 * # Safety
 * `scenario` must come from this library; `out` must be writable.
 */
enum HcStatus hc_run_scenario(const struct HcScenario *scenario, struct HcReport **out);

/**
 * # Safety
 * `report` must come from this library.
 */
bool hc_report_all_passed(const struct HcReport *report);

/**
 * # Safety
 * `report` must come from this library.
 */
size_t hc_report_failed_checks(const struct HcReport *report);

/**
 * Looks up a named metric. `HC_STATUS_DOMAIN` when the report has none.
 *
 * # Safety
 * `report` must come from this library; `name` NUL-terminated; `out` writable.
 */
enum HcStatus hc_report_metric(const struct HcReport *report, const char *name, double *out);

/**
 * The report as pretty-printed JSON; free with [`hc_string_free`].
 *
 * # Safety
 * `report` must come from this library.
 */
char *hc_report_json(const struct HcReport *report);

/**
 * # Safety
 * `report` must be null or come from this library, and is not used after.
 */
void hc_report_free(struct HcReport *report);

/**
 * Acceptance suite as JSON; `all_passed` may be null.
 *
 * # Safety
 * `all_passed` must be null or writable.
 */
char *hc_acceptance_json(uint64_t seed, bool *all_passed);

/**
 * Binary network over `l0` boundary sites; `m_h < 0` means no thermal
 * truncation.
 *
 * # Safety
 * `out` must be writable.
 */
enum HcStatus hc_mera_build(uint64_t l0, int64_t m_h, struct HcMeraNetwork **out);

/**
 * Bits per ensemble member `(1 + replicas) * sum_m l_m`.
 * `HC_STATUS_DOMAIN` if the value does not fit in 64 bits.
 *
 * # Safety
 * `net` must come from this library; `out` must be writable.
 */
enum HcStatus hc_mera_area_bits(const struct HcMeraNetwork *net, uint64_t replicas, uint64_t *out);

/**
 * Number of coarse-graining steps of one tower.
 *
 * # Safety
 * `net` must come from this library.
 */
size_t hc_mera_depth(const struct HcMeraNetwork *net);

/**
 * # Safety
 * `net` must be null or come from this library, and is not used after.
 */
void hc_mera_free(struct HcMeraNetwork *net);

/**
 * # Safety
 * `out` must be writable.
 */
enum HcStatus hc_geodesic_length(double l, double eps, double r_ads, double *out);

/**
 * Wedge area in units of `R_AdS^2`; zero for `l <= 2 eps`.
 *
 * # Safety
 * `out` must be writable.
 */
enum HcStatus hc_wedge_area(double l, double eps, double *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum HcStatus hc_holographic_complexity(double l,
                                        double eps,
                                        double r_ads,
                                        double g_newton,
                                        double *out);

/**
 * Minimum time to an orthogonal state, `h / (4 eps_kin)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum HcStatus hc_margolus_levitin(double eps_kin, double *out);

/**
 * # Safety
 * `alpha` and `beta` must be writable.
 */
enum HcStatus hc_multipliers(double g_newton, double r_ads, double *alpha, double *beta);

/**
 * Shannon entropy in bits of `n` non-negative weights (renormalized).
 *
 * # Safety
 * `probabilities` must point to `n` doubles; `out` must be writable.
 */
enum HcStatus hc_shannon_entropy_bits(const double *probabilities, size_t n, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HOLOSHANNON_H */
