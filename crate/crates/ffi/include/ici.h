#ifndef ICI_H
#define ICI_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every call. Zero is success.
typedef enum IciStatus {
  ICI_STATUS_OK = 0,
  ICI_STATUS_NULL_POINTER = 1,
  ICI_STATUS_INVALID_UTF8 = 2,
  ICI_STATUS_INVALID_CONFIG = 3,
  ICI_STATUS_DOMAIN = 4,
  ICI_STATUS_OVERFLOW = 5,
  ICI_STATUS_NON_CONVERGENCE = 6,
  ICI_STATUS_COMPLEXITY_BUDGET = 7,
  ICI_STATUS_PARSE = 8,
  ICI_STATUS_IO = 9,
  ICI_STATUS_BUFFER_TOO_SMALL = 10,
  ICI_STATUS_PANIC = 11,
} IciStatus;

typedef enum IciScheme {
  ICI_SCHEME_GREEDY = 0,
  ICI_SCHEME_PROPORTIONAL_FAIR = 1,
  ICI_SCHEME_ROUND_ROBIN = 2,
  ICI_SCHEME_LOCATION_ROUND_ROBIN = 3,
  ICI_SCHEME_GREEDY_ROUND_ROBIN = 4,
} IciScheme;

// Opaque network scenario.
typedef struct IciScenario IciScenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *ici_version(void);

// Copies the last error of the calling thread into `buf` (NUL-terminated,
// truncated to `len`). Returns the full message length without the NUL.
//
// # Safety
// `buf` must be null or point to `len` writable bytes.
size_t ici_last_error_message(char *buf, size_t len);

// Builds a scenario from a flat JSON object of overrides. An empty string
// gives the default network.
//
// # Safety
// `config_json` must be a NUL-terminated string and `out` a writable pointer.
enum IciStatus ici_scenario_new(const char *config_json, struct IciScenario **out);

// Releases a scenario. Null is ignored.
//
// # Safety
// `handle` must come from [`ici_scenario_new`] and not be used afterwards.
void ici_scenario_free(struct IciScenario *handle);

// Number of rings, which is the length of a location PMF.
//
// # Safety
// `handle` must be a live scenario and `out` writable.
enum IciStatus ici_ring_count(const struct IciScenario *handle, size_t *out);

// Probability that each ring is scheduled. `out` must hold the ring count.
//
// # Safety
// `handle` must be a live scenario and `out` must point to `len` doubles.
enum IciStatus ici_location_pmf(const struct IciScenario *handle,
                                enum IciScheme scheme,
                                size_t slot,
                                double *out,
                                size_t len);

// Ergodic capacity in bits per channel use.
//
// # Safety
// `handle` must be a live scenario and `bits` writable.
enum IciStatus ici_capacity(const struct IciScenario *handle,
                            enum IciScheme scheme,
                            size_t slot,
                            double *bits);

// Outage probability at each linear SIR threshold.
//
// # Safety
// `handle` must be a live scenario; `thresholds` and `out` must hold `n` doubles.
enum IciStatus ici_outage(const struct IciScenario *handle,
                          enum IciScheme scheme,
                          size_t slot,
                          const double *thresholds,
                          size_t n,
                          double *out);

// Average fairness of the scheduler, in `[0, 1]`.
//
// # Safety
// `handle` must be a live scenario and `out` writable.
enum IciStatus ici_fairness(const struct IciScenario *handle,
                            enum IciScheme scheme,
                            size_t slot,
                            double *out);

// Distribution function of the aggregate interference at each point.
//
// # Safety
// `handle` must be a live scenario; `xs` and `out` must hold `n` doubles.
enum IciStatus ici_interference_cdf(const struct IciScenario *handle,
                                    enum IciScheme scheme,
                                    size_t slot,
                                    const double *xs,
                                    size_t n,
                                    double *out);

// Mean aggregate interference.
//
// # Safety
// `handle` must be a live scenario and `out` writable.
enum IciStatus ici_interference_mean(const struct IciScenario *handle,
                                     enum IciScheme scheme,
                                     size_t slot,
                                     double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ICI_H */
