#ifndef REGEN_REGEN_H
#define REGEN_REGEN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(REGEN_BUILDING)
#    define REGEN_API __declspec(dllexport)
#  else
#    define REGEN_API __declspec(dllimport)
#  endif
#else
#  define REGEN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum regen_status {
  REGEN_OK = 0,
  REGEN_DOMAIN_ERROR = 1,
  REGEN_INVALID_STOCHASTIC_MATRIX = 2,
  REGEN_INVALID_SMALL_SET = 3,
  REGEN_MINORIZATION_VIOLATED = 4,
  REGEN_TOUR_LENGTH_OVERFLOW = 5,
  REGEN_INSUFFICIENT_TRAJECTORY = 6,
  REGEN_EMPTY_TOUR_LIST = 7,
  REGEN_NONPOSITIVE_M = 8,
  REGEN_STOPPING_RULE_VIOLATED = 9,
  REGEN_NOT_DOEBLIN = 10,
  REGEN_EMPTY_SAMPLE_LIST = 11,
  REGEN_NOT_IRREDUCIBLE = 12,
  REGEN_PERIODIC = 13,
  REGEN_SINGULAR_SYSTEM = 14,
  REGEN_V_NOT_BOUNDED_BELOW_BY_ONE = 15,
  REGEN_UNSUPPORTED_TARGET = 16,
  REGEN_DRIFT_NOT_SATISFIED = 17,
  REGEN_STATE_SPACE_TOO_LARGE = 18,
  REGEN_PARSE_ERROR = 19,
  REGEN_CONFIG_ERROR = 20,
  REGEN_DENSITY_RATIO_UNDEFINED = 21,
  REGEN_INTERNAL = 99
} regen_status;

typedef enum regen_mode {
  REGEN_MODE_EXPLICIT = 0,
  REGEN_MODE_MYKLAND = 1
} regen_mode;

typedef struct regen_model regen_model;

typedef struct regen_tour_moments {
  double m;
  double sigma_tau_sq;
  double sigma_as_sq;
  double sigma_unb_sq;
  double rho_f1;
  double c0;
  double theta;
} regen_tour_moments;

typedef struct regen_plan {
  uint64_t n;
  uint64_t l;
  double a_star;
  double expected_cost;
  double asymptotic_cost;
} regen_plan;

REGEN_API const char* regen_version(void);
REGEN_API const char* regen_status_name(regen_status status);
/* Message of the last failed call on this thread; empty when none. */
REGEN_API const char* regen_last_error(void);
/* Nonzero when the status reports bad input rather than a failed run. */
REGEN_API int regen_is_config_error(regen_status status);

/* Model from key=value text: model=two-state|imh|drift-bd|file:<path> and its parameters. */
REGEN_API regen_status regen_model_open(const char* config_text, regen_model** out);
/* Model from a row-major S x S matrix; `members` flags J, nu has S entries. */
REGEN_API regen_status regen_model_from_matrix(size_t states, const double* matrix,
                                               const unsigned char* members, double beta,
                                               const double* nu, regen_model** out);
REGEN_API void regen_model_free(regen_model* model);
REGEN_API size_t regen_model_states(const regen_model* model);
REGEN_API int regen_model_is_doeblin(const regen_model* model);
REGEN_API double regen_model_beta(const regen_model* model);
/* Writes the model's default function (S values). */
REGEN_API regen_status regen_model_default_function(const regen_model* model, double* f);

REGEN_API regen_status regen_stationary(const regen_model* model, double* pi);
REGEN_API regen_status regen_asymptotic_variance(const regen_model* model, const double* f,
                                                 double* out);
REGEN_API regen_status regen_tour_moments_exact(const regen_model* model, const double* f,
                                                regen_tour_moments* out);

/* First `count` tours from stream (seed, replicate). Any output pointer may be NULL. */
REGEN_API regen_status regen_simulate_tours(const regen_model* model, const double* f,
                                            uint64_t count, uint64_t seed, uint64_t replicate,
                                            regen_mode mode, double* xi, uint64_t* tau,
                                            size_t* last_state);
REGEN_API regen_status regen_estimate_reg_seq(const regen_model* model, const double* f,
                                              uint64_t n, uint64_t seed, uint64_t replicate,
                                              regen_mode mode, double* value, uint64_t* steps);

REGEN_API regen_status regen_make_plan(double sigma_as_bound, double c0_bound, double eps,
                                       double alpha, regen_plan* out);
REGEN_API double regen_chernoff_failure(double a, uint64_t l);
REGEN_API regen_status regen_reg_tail_bound(uint64_t r, double m, double sigma_as_sq,
                                            double sigma_tau_sq, double eps, double delta,
                                            double* out);
REGEN_API regen_status regen_optimal_delta(double sigma_as_sq, double sigma_tau_sq, double eps,
                                           double m, double* out);
REGEN_API regen_status regen_drift_bounds(double lambda, double k, double beta, double pi_v,
                                          double pi_sqrt_v, double f_norm, double* sigma_as_bound,
                                          double* c0_bound);

/* Runs a subcommand (estimate, plan, bounds, coverage, compare, verify) with key=value config
 * text. On success *output holds the report (free with regen_string_free) and *exit_status is
 * 0, or 1 when verify found a failing check. */
REGEN_API regen_status regen_run_command(const char* command, const char* config_text,
                                         char** output, int* exit_status);
REGEN_API void regen_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif
