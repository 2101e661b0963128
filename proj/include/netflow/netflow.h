/*
 * C interface to the net-flow ranking library.
 *
 * Objects are opaque handles created by *_create / *_load functions and
 * released with the matching *_free. Every fallible call returns an
 * nf_status; on failure nf_last_error() describes the problem (the message
 * is thread-local and valid until the next failing call on that thread).
 * Strings returned by accessors are owned by their handle.
 */
#ifndef NETFLOW_NETFLOW_H
#define NETFLOW_NETFLOW_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(NETFLOW_BUILDING_LIBRARY)
#    define NF_API __declspec(dllexport)
#  else
#    define NF_API __declspec(dllimport)
#  endif
#else
#  define NF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nf_status {
  NF_OK = 0,
  NF_ERR_WEIGHT_SUM = 1,
  NF_ERR_NEGATIVE_WEIGHT = 2,
  NF_ERR_THRESHOLD_ORDER = 3,
  NF_ERR_LENGTH_MISMATCH = 4,
  NF_ERR_INDEX_OUT_OF_RANGE = 5,
  NF_ERR_INVALID_ARGUMENT = 6,
  NF_ERR_ALPHA_OUT_OF_RANGE = 7,
  NF_ERR_NONPOSITIVE_DT = 8,
  NF_ERR_STEP_OUT_OF_RANGE = 9,
  NF_ERR_NOT_A_PERMUTATION = 10,
  NF_ERR_DIMENSION_MISMATCH = 11,
  NF_ERR_PARSE = 12,
  NF_ERR_DUPLICATE_ID = 13,
  NF_ERR_EMPTY_FILE = 14,
  NF_ERR_SCHEMA = 15,
  NF_ERR_IO = 16,
  NF_ERR_BIND = 17,
  NF_ERR_NULL_ARGUMENT = 18,
  NF_ERR_INTERNAL = 99
} nf_status;

typedef struct nf_criteria nf_criteria;
typedef struct nf_model nf_model;
typedef struct nf_ranking nf_ranking;
typedef struct nf_scenario nf_scenario;
typedef struct nf_trajectory nf_trajectory;
typedef struct nf_identified nf_identified;
typedef struct nf_server nf_server;

typedef struct nf_thresholds {
  double q; /* indifference */
  double p; /* preference */
  double v; /* veto */
} nf_thresholds;

typedef struct nf_rank_event {
  const char* upper_id;
  const char* lower_id;
  size_t step_before;
  size_t step_after;
  double crossing_time;
} nf_rank_event;

NF_API const char* nf_version(void);
NF_API const char* nf_last_error(void);
NF_API const char* nf_status_name(nf_status status);
/* Non-zero for file-system and socket failures, zero for invalid input. */
NF_API int nf_status_is_environmental(nf_status status);

/* ---- criteria ---------------------------------------------------------- */

NF_API nf_status nf_criteria_load_csv(const char* path, nf_criteria** out);
/* values is row-major, m rows of n criteria. */
NF_API nf_status nf_criteria_create(size_t m, size_t n, const char* const* ids, const char* const* labels,
                                    const double* values, nf_criteria** out);
NF_API size_t nf_criteria_alternatives(const nf_criteria* criteria);
NF_API size_t nf_criteria_criteria(const nf_criteria* criteria);
NF_API const char* nf_criteria_id(const nf_criteria* criteria, size_t i);
NF_API const char* nf_criteria_label(const nf_criteria* criteria, size_t k);
NF_API nf_status nf_criteria_value(const nf_criteria* criteria, size_t i, size_t k, double* out);
NF_API void nf_criteria_free(nf_criteria* criteria);

/* ---- preference model --------------------------------------------------- */

/* n_thresholds is n, or 1 to share one triple across all criteria. */
NF_API nf_status nf_model_create(size_t n, const double* weights, const nf_thresholds* thresholds,
                                 size_t n_thresholds, int exponent, nf_model** out);
NF_API void nf_model_free(nf_model* model);

/* ---- static ranking ------------------------------------------------------ */

NF_API nf_status nf_rank(const nf_criteria* criteria, const nf_model* model, nf_ranking** out);
NF_API size_t nf_ranking_size(const nf_ranking* ranking);
/* position 0 is the best alternative; rank is 1-based. */
NF_API nf_status nf_ranking_entry(const nf_ranking* ranking, size_t position, const char** id, double* score,
                                  size_t* rank);
NF_API nf_status nf_ranking_flows(const nf_ranking* ranking, size_t position, double* phi_plus,
                                  double* phi_minus);
NF_API nf_status nf_ranking_write_json(const nf_ranking* ranking, const char* path);
NF_API void nf_ranking_free(nf_ranking* ranking);

/* ---- dynamics ------------------------------------------------------------ */

NF_API nf_status nf_scenario_load(const char* path, nf_scenario** out);
NF_API nf_status nf_scenario_set_alpha(nf_scenario* scenario, double alpha);
NF_API size_t nf_scenario_horizon(const nf_scenario* scenario);
NF_API void nf_scenario_free(nf_scenario* scenario);

NF_API nf_status nf_simulate(const nf_scenario* scenario, nf_trajectory** out);
NF_API size_t nf_trajectory_steps(const nf_trajectory* trajectory);
NF_API size_t nf_trajectory_alternatives(const nf_trajectory* trajectory);
NF_API const char* nf_trajectory_alternative_id(const nf_trajectory* trajectory, size_t i);
NF_API nf_status nf_trajectory_score(const nf_trajectory* trajectory, size_t step, size_t i, double* out);
NF_API size_t nf_trajectory_event_count(const nf_trajectory* trajectory);
NF_API nf_status nf_trajectory_event(const nf_trajectory* trajectory, size_t e, nf_rank_event* out);
/* Writes the CSV at path and the events next to it as <path>.events.json. */
NF_API nf_status nf_trajectory_write(const nf_trajectory* trajectory, const char* path);
NF_API void nf_trajectory_free(nf_trajectory* trajectory);

/* ---- weight identification ---------------------------------------------- */

/* Target scores keyed by alternative id; every alternative exactly once. */
NF_API nf_status nf_identify_scores(const nf_criteria* criteria, const nf_thresholds* thresholds,
                                    size_t n_thresholds, int exponent, const char* const* ids,
                                    const double* scores, size_t count, nf_identified** out);
/* ranking lists alternative ids best first. */
NF_API nf_status nf_identify_ranking(const nf_criteria* criteria, const nf_thresholds* thresholds,
                                     size_t n_thresholds, int exponent, const char* const* ranking,
                                     size_t count, nf_identified** out);
NF_API size_t nf_identified_count(const nf_identified* fit);
NF_API const double* nf_identified_weights(const nf_identified* fit);
NF_API double nf_identified_residual(const nf_identified* fit);
NF_API int nf_identified_ranking_reproduced(const nf_identified* fit);
NF_API int nf_identified_degenerate(const nf_identified* fit);
NF_API const char* nf_identified_note(const nf_identified* fit);
NF_API void nf_identified_free(nf_identified* fit);

/* ---- decision service ---------------------------------------------------- */

typedef void (*nf_log_fn)(const char* line, void* user);

/* static_dir may be NULL. idle_expiry_seconds <= 0 selects the default (1 h). */
NF_API nf_status nf_server_create(const char* static_dir, double idle_expiry_seconds, nf_log_fn log,
                                  void* user, nf_server** out);
/* port 0 picks a free port; see nf_server_port. */
NF_API nf_status nf_server_bind(nf_server* server, const char* host, int port);
NF_API int nf_server_port(const nf_server* server);
/* Blocks until nf_server_stop is called from another thread. */
NF_API nf_status nf_server_run(nf_server* server);
NF_API void nf_server_stop(nf_server* server);
NF_API int nf_server_is_running(const nf_server* server);
NF_API void nf_server_free(nf_server* server);

#ifdef __cplusplus
}
#endif

#endif /* NETFLOW_NETFLOW_H */
