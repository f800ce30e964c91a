/*
 * C interface to the unmasking library.
 *
 * Objects are opaque handles created by *_new / *_from_* functions and
 * released with the matching *_free. Every fallible call returns an
 * unmask_status; on failure a message is available from unmask_last_error()
 * (thread-local, valid until the next failing call on the same thread).
 * Strings returned through char** are owned by the caller and released with
 * unmask_string_free. Information quantities are in bits.
 */
#ifndef UNMASK_UNMASK_H
#define UNMASK_UNMASK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define UNMASK_API __declspec(dllexport)
#else
#define UNMASK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum unmask_status {
  UNMASK_OK = 0,
  UNMASK_ERR_NOT_A_DISTRIBUTION,
  UNMASK_ERR_POSITION_OUT_OF_RANGE,
  UNMASK_ERR_DIMENSION_MISMATCH,
  UNMASK_ERR_INFEASIBLE_ENUMERATION,
  UNMASK_ERR_HAN_VIOLATION,
  UNMASK_ERR_NON_MONOTONE_NODES,
  UNMASK_ERR_INVALID_TOLERANCE,
  UNMASK_ERR_NOT_PRIME,
  UNMASK_ERR_RANK_DEFICIENT,
  UNMASK_ERR_DUPLICATE_EVAL_POINTS,
  UNMASK_ERR_FIELD_TOO_SMALL,
  UNMASK_ERR_INVALID_ARGUMENT,
  UNMASK_ERR_PARSE,
  UNMASK_ERR_NULL_ARGUMENT,
  UNMASK_ERR_BUFFER_TOO_SMALL,
  UNMASK_ERR_INTERNAL
} unmask_status;

typedef enum unmask_format { UNMASK_FORMAT_JSON = 0, UNMASK_FORMAT_CSV = 1 } unmask_format;

typedef struct unmask_dist unmask_dist;
typedef struct unmask_curve unmask_curve;

UNMASK_API const char* unmask_last_error(void);
UNMASK_API const char* unmask_status_name(unmask_status status);
UNMASK_API void unmask_string_free(char* s);

/* ---- distributions ---------------------------------------------------- */

/* Any distribution spec JSON (explicit, uniform, affine_code, rs, mixture,
 * elevated). */
UNMASK_API unmask_status unmask_dist_from_json(const char* spec_json, unmask_dist** out);
/* Explicit table of q^n probabilities, first position most significant. */
UNMASK_API unmask_status unmask_dist_from_probs(int q, int n, const double* probs, size_t len,
                                                unmask_dist** out);
UNMASK_API void unmask_dist_free(unmask_dist* d);
UNMASK_API int unmask_dist_q(const unmask_dist* d);
UNMASK_API int unmask_dist_n(const unmask_dist* d);

/* ---- information curves ----------------------------------------------- */

UNMASK_API unmask_status unmask_curve_exact(const unmask_dist* d, unmask_curve** out);
/* Subset-sampling estimate; `lenient` only clamps Han violations. */
UNMASK_API unmask_status unmask_curve_mc(const unmask_dist* d, uint64_t samples, uint64_t seed,
                                         int dedup, int lenient, unmask_curve** out);
UNMASK_API unmask_status unmask_curve_from_values(const double* z, size_t n, unmask_curve** out);
/* Curve CSV (j,Z_bits,H_bits[,Z_stderr]) or curve JSON. */
UNMASK_API unmask_status unmask_curve_from_text(const char* text, unmask_curve** out);
UNMASK_API unmask_status unmask_curve_to_text(const unmask_curve* c, unmask_format format,
                                              char** out);
UNMASK_API void unmask_curve_free(unmask_curve* c);
UNMASK_API int unmask_curve_n(const unmask_curve* c);
/* Copies Z_1..Z_n into out[0..n-1]. */
UNMASK_API unmask_status unmask_curve_values(const unmask_curve* c, double* out, size_t cap);
UNMASK_API unmask_status unmask_curve_summary(const unmask_curve* c, double* tc, double* dtc);

/* ---- schedules -------------------------------------------------------- */
/* Schedules are step arrays; *len receives the step count. When cap is too
 * small the call fails with UNMASK_ERR_BUFFER_TOO_SMALL and *len holds the
 * size needed. */

UNMASK_API unmask_status unmask_plan_optimal(const unmask_curve* c, int k, int* steps, size_t cap,
                                             size_t* len, double* error);
UNMASK_API unmask_status unmask_plan_tc(double tc_hat, double eps, int n, int* steps, size_t cap,
                                        size_t* len);
UNMASK_API unmask_status unmask_plan_dtc(double dtc_hat, double eps, int n, int* steps, size_t cap,
                                         size_t* len);
UNMASK_API unmask_status unmask_plan_austin(double dtc_hat, double eps, int n, int* steps,
                                            size_t cap, size_t* len);
UNMASK_API unmask_status unmask_riemann_error(const unmask_curve* c, const int* steps, size_t len,
                                              double* out);
UNMASK_API unmask_status unmask_licai_bound(const unmask_curve* c, int s_max, double* out);

/* ---- sampling and expected KL ----------------------------------------- */

UNMASK_API unmask_status unmask_expected_kl_exact(const unmask_dist* d, const int* steps,
                                                  size_t len, double* out);
UNMASK_API unmask_status unmask_expected_kl_mc(const unmask_dist* d, const int* steps, size_t len,
                                               uint64_t trials, uint64_t seed, double* value,
                                               double* std_error);
/* KL(mu || law of the random sampler). */
UNMASK_API unmask_status unmask_mixture_kl(const unmask_dist* d, const int* steps, size_t len,
                                           double* out);
/* One draw of the random sampler with an oracle smoothed by eta; writes n
 * symbols into out. */
UNMASK_API unmask_status unmask_sample(const unmask_dist* d, const int* steps, size_t len,
                                       double eta, uint64_t seed, int* out, size_t cap);
/* Decoupling identity on the fixed partition whose block b holds the
 * positions with block_of[pos] == b (0-based, blocks in order). */
UNMASK_API unmask_status unmask_decoupling(const unmask_dist* d, const int* block_of, size_t n,
                                           double eta, double* lhs, double* rhs, double* gap);

/* ---- reports (JSON options in, JSON or CSV text out) ------------------- */
/* Options objects mirror the command-line flags, e.g.
 *   curve/summary/verify: {"method":"exact"|"mc","samples":M,"seed":S,"dedup":b}
 *   plan:     {"mode":"optimal"|"tc"|"dtc"|"austin","k":K,"hat":X,"eps":E,"n":N}
 *   simulate: {"steps":[...],"method":"auto"|"exact"|"mc","trials":T,"seed":S,
 *              "draws":D,"eta":h}
 *   sweep:    {"eps":E,"grid":"value"|"exponent"}
 *   hardcurve:{"n_grid":[...],"eps":E (<=0: 1/ln n),"c":C}
 * verify additionally sets *passed. */

UNMASK_API unmask_status unmask_report_curve(const unmask_dist* d, const char* options,
                                             unmask_format format, char** out);
UNMASK_API unmask_status unmask_report_summary(const unmask_dist* d, const char* options,
                                               unmask_format format, char** out);
/* c may be NULL for the closed-form modes. */
UNMASK_API unmask_status unmask_report_plan(const unmask_curve* c, const char* options,
                                            unmask_format format, char** out);
UNMASK_API unmask_status unmask_report_simulate(const unmask_dist* d, const char* options,
                                                unmask_format format, char** out);
/* options {"steps":[...],"count":N,"eta":h,"seed":S}; CSV is one tuple per
 * line, comma-separated; JSON is {"samples":[[...],...]}. */
UNMASK_API unmask_status unmask_report_sample(const unmask_dist* d, const char* options,
                                              unmask_format format, char** out);
UNMASK_API unmask_status unmask_report_verify(const unmask_dist* d, const char* options,
                                              unmask_format format, char** out, int* passed);
UNMASK_API unmask_status unmask_report_sweep(const unmask_dist* d, const char* options,
                                             unmask_format format, char** out);
UNMASK_API unmask_status unmask_report_hardcurve(const char* options, unmask_format format,
                                                 char** out);

/* Schedule JSON ({"steps":[...]} or a plan report) into a step array. */
UNMASK_API unmask_status unmask_schedule_from_json(const char* text, int* steps, size_t cap,
                                                   size_t* len);

#ifdef __cplusplus
}
#endif

#endif /* UNMASK_UNMASK_H */
