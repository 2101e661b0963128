#include "netflow/netflow.h"

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "netflow/core.hpp"
#include "netflow/dataset_io.hpp"
#include "netflow/dynamics.hpp"
#include "netflow/identification.hpp"
#include "netflow/service.hpp"

struct nf_criteria {
  netflow::CriteriaMatrix value;
};

struct nf_model {
  netflow::PreferenceModel value;
};

struct nf_ranking {
  netflow::Ranking ranking;
  netflow::FlowResult flows;
  std::vector<std::size_t> source_index;  // ranking position -> input row
};

struct nf_scenario {
  netflow::dynamics::Scenario value;
};

struct nf_trajectory {
  netflow::dynamics::Trajectory value;
};

struct nf_identified {
  netflow::ident::IdentifiedWeights value;
};

struct nf_server {
  std::unique_ptr<netflow::service::DecisionService> service;
  std::unique_ptr<netflow::service::HttpServer> http;
};

namespace {

thread_local std::string g_last_error;

nf_status status_of(netflow::ErrorCode code) {
  using netflow::ErrorCode;
  switch (code) {
    case ErrorCode::WeightSum: return NF_ERR_WEIGHT_SUM;
    case ErrorCode::NegativeWeight: return NF_ERR_NEGATIVE_WEIGHT;
    case ErrorCode::ThresholdOrder: return NF_ERR_THRESHOLD_ORDER;
    case ErrorCode::LengthMismatch: return NF_ERR_LENGTH_MISMATCH;
    case ErrorCode::IndexOutOfRange: return NF_ERR_INDEX_OUT_OF_RANGE;
    case ErrorCode::InvalidArgument: return NF_ERR_INVALID_ARGUMENT;
    case ErrorCode::AlphaOutOfRange: return NF_ERR_ALPHA_OUT_OF_RANGE;
    case ErrorCode::NonpositiveDt: return NF_ERR_NONPOSITIVE_DT;
    case ErrorCode::StepOutOfRange: return NF_ERR_STEP_OUT_OF_RANGE;
    case ErrorCode::NotAPermutation: return NF_ERR_NOT_A_PERMUTATION;
    case ErrorCode::DimensionMismatch: return NF_ERR_DIMENSION_MISMATCH;
    case ErrorCode::Parse: return NF_ERR_PARSE;
    case ErrorCode::DuplicateId: return NF_ERR_DUPLICATE_ID;
    case ErrorCode::EmptyFile: return NF_ERR_EMPTY_FILE;
    case ErrorCode::Schema: return NF_ERR_SCHEMA;
    case ErrorCode::Io: return NF_ERR_IO;
    case ErrorCode::Bind: return NF_ERR_BIND;
  }
  return NF_ERR_INTERNAL;
}

nf_status fail(nf_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <class Fn>
nf_status guarded(Fn&& fn) {
  try {
    fn();
    return NF_OK;
  } catch (const netflow::Error& err) {
    return fail(status_of(err.code()), err.what());
  } catch (const std::bad_alloc&) {
    return fail(NF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& err) {
    return fail(NF_ERR_INTERNAL, err.what());
  } catch (...) {
    return fail(NF_ERR_INTERNAL, "unknown error");
  }
}

#define NF_REQUIRE(ptr)                                                \
  do {                                                                 \
    if ((ptr) == nullptr) return fail(NF_ERR_NULL_ARGUMENT, #ptr " is null"); \
  } while (0)

std::vector<netflow::ThresholdTriple> thresholds_for(const nf_thresholds* t, std::size_t count, std::size_t n) {
  std::vector<netflow::ThresholdTriple> out;
  if (count == 1 && n > 1) {
    out.assign(n, {t[0].q, t[0].p, t[0].v});
  } else {
    for (std::size_t k = 0; k < count; ++k) out.push_back({t[k].q, t[k].p, t[k].v});
  }
  return out;
}

}  // namespace

extern "C" {

NF_API const char* nf_version(void) { return "1.0.0"; }

NF_API const char* nf_last_error(void) { return g_last_error.c_str(); }

NF_API const char* nf_status_name(nf_status status) {
  switch (status) {
    case NF_OK: return "ok";
    case NF_ERR_NULL_ARGUMENT: return "NullArgument";
    case NF_ERR_INTERNAL: return "InternalError";
    default: break;
  }
  for (int c = 0; c <= static_cast<int>(netflow::ErrorCode::Bind); ++c) {
    const auto code = static_cast<netflow::ErrorCode>(c);
    if (status_of(code) == status) return netflow::to_string(code);
  }
  return "UnknownStatus";
}

NF_API int nf_status_is_environmental(nf_status status) {
  return status == NF_ERR_IO || status == NF_ERR_BIND ? 1 : 0;
}

NF_API nf_status nf_criteria_load_csv(const char* path, nf_criteria** out) {
  NF_REQUIRE(path);
  NF_REQUIRE(out);
  return guarded([&] { *out = new nf_criteria{netflow::io::load_criteria(path)}; });
}

NF_API nf_status nf_criteria_create(size_t m, size_t n, const char* const* ids, const char* const* labels,
                                    const double* values, nf_criteria** out) {
  NF_REQUIRE(out);
  if (m > 0) NF_REQUIRE(ids);
  if (n > 0) NF_REQUIRE(labels);
  if (m > 0 && n > 0) NF_REQUIRE(values);
  return guarded([&] {
    std::vector<std::string> id_list, label_list;
    for (size_t i = 0; i < m; ++i) id_list.emplace_back(ids[i] ? ids[i] : "");
    for (size_t k = 0; k < n; ++k) label_list.emplace_back(labels[k] ? labels[k] : "");
    std::vector<std::vector<double>> rows(m, std::vector<double>(n));
    for (size_t i = 0; i < m; ++i) {
      for (size_t k = 0; k < n; ++k) rows[i][k] = values[i * n + k];
    }
    *out = new nf_criteria{netflow::CriteriaMatrix(std::move(id_list), std::move(label_list), std::move(rows))};
  });
}

NF_API size_t nf_criteria_alternatives(const nf_criteria* criteria) {
  return criteria ? criteria->value.alternatives() : 0;
}

NF_API size_t nf_criteria_criteria(const nf_criteria* criteria) { return criteria ? criteria->value.criteria() : 0; }

NF_API const char* nf_criteria_id(const nf_criteria* criteria, size_t i) {
  if (!criteria || i >= criteria->value.alternatives()) return nullptr;
  return criteria->value.alternative_ids()[i].c_str();
}

NF_API const char* nf_criteria_label(const nf_criteria* criteria, size_t k) {
  if (!criteria || k >= criteria->value.criteria()) return nullptr;
  return criteria->value.criterion_labels()[k].c_str();
}

NF_API nf_status nf_criteria_value(const nf_criteria* criteria, size_t i, size_t k, double* out) {
  NF_REQUIRE(criteria);
  NF_REQUIRE(out);
  if (i >= criteria->value.alternatives() || k >= criteria->value.criteria()) {
    return fail(NF_ERR_INDEX_OUT_OF_RANGE, "criteria index out of range");
  }
  *out = criteria->value.value(i, k);
  return NF_OK;
}

NF_API void nf_criteria_free(nf_criteria* criteria) { delete criteria; }

NF_API nf_status nf_model_create(size_t n, const double* weights, const nf_thresholds* thresholds,
                                 size_t n_thresholds, int exponent, nf_model** out) {
  NF_REQUIRE(out);
  if (n > 0) NF_REQUIRE(weights);
  if (n_thresholds > 0) NF_REQUIRE(thresholds);
  return guarded([&] {
    netflow::PreferenceModel model{std::vector<double>(weights, weights + n),
                                   thresholds_for(thresholds, n_thresholds, n), exponent};
    netflow::validate_model(model, n);
    *out = new nf_model{std::move(model)};
  });
}

NF_API void nf_model_free(nf_model* model) { delete model; }

NF_API nf_status nf_rank(const nf_criteria* criteria, const nf_model* model, nf_ranking** out) {
  NF_REQUIRE(criteria);
  NF_REQUIRE(model);
  NF_REQUIRE(out);
  return guarded([&] {
    auto result = std::make_unique<nf_ranking>();
    result->flows = netflow::static_scores(criteria->value, model->value);
    result->ranking = netflow::rank(result->flows, criteria->value.alternative_ids());
    for (const auto& entry : result->ranking) {
      result->source_index.push_back(criteria->value.index_of(entry.alternative_id));
    }
    *out = result.release();
  });
}

NF_API size_t nf_ranking_size(const nf_ranking* ranking) { return ranking ? ranking->ranking.size() : 0; }

NF_API nf_status nf_ranking_entry(const nf_ranking* ranking, size_t position, const char** id, double* score,
                                  size_t* rank) {
  NF_REQUIRE(ranking);
  if (position >= ranking->ranking.size()) return fail(NF_ERR_INDEX_OUT_OF_RANGE, "ranking position out of range");
  const auto& e = ranking->ranking[position];
  if (id) *id = e.alternative_id.c_str();
  if (score) *score = e.score;
  if (rank) *rank = e.rank;
  return NF_OK;
}

NF_API nf_status nf_ranking_flows(const nf_ranking* ranking, size_t position, double* phi_plus,
                                  double* phi_minus) {
  NF_REQUIRE(ranking);
  if (position >= ranking->ranking.size()) return fail(NF_ERR_INDEX_OUT_OF_RANGE, "ranking position out of range");
  const auto row = ranking->source_index[position];
  if (phi_plus) *phi_plus = ranking->flows.phi_plus[row];
  if (phi_minus) *phi_minus = ranking->flows.phi_minus[row];
  return NF_OK;
}

NF_API nf_status nf_ranking_write_json(const nf_ranking* ranking, const char* path) {
  NF_REQUIRE(ranking);
  NF_REQUIRE(path);
  return guarded([&] {
    netflow::io::json entries = netflow::io::json::array();
    for (std::size_t pos = 0; pos < ranking->ranking.size(); ++pos) {
      const auto& e = ranking->ranking[pos];
      const auto row = ranking->source_index[pos];
      entries.push_back({{"id", e.alternative_id},
                         {"score", e.score},
                         {"rank", e.rank},
                         {"phi_plus", ranking->flows.phi_plus[row]},
                         {"phi_minus", ranking->flows.phi_minus[row]}});
    }
    netflow::io::write_text_file(path, netflow::io::json{{"ranking", entries}}.dump(2) + "\n");
  });
}

NF_API void nf_ranking_free(nf_ranking* ranking) { delete ranking; }

NF_API nf_status nf_scenario_load(const char* path, nf_scenario** out) {
  NF_REQUIRE(path);
  NF_REQUIRE(out);
  return guarded([&] { *out = new nf_scenario{netflow::io::load_scenario(path)}; });
}

NF_API nf_status nf_scenario_set_alpha(nf_scenario* scenario, double alpha) {
  NF_REQUIRE(scenario);
  return guarded([&] { scenario->value.filter = netflow::dynamics::make_filter(alpha); });
}

NF_API size_t nf_scenario_horizon(const nf_scenario* scenario) { return scenario ? scenario->value.horizon : 0; }

NF_API void nf_scenario_free(nf_scenario* scenario) { delete scenario; }

NF_API nf_status nf_simulate(const nf_scenario* scenario, nf_trajectory** out) {
  NF_REQUIRE(scenario);
  NF_REQUIRE(out);
  return guarded([&] { *out = new nf_trajectory{netflow::dynamics::simulate(scenario->value)}; });
}

NF_API size_t nf_trajectory_steps(const nf_trajectory* trajectory) {
  return trajectory ? trajectory->value.steps.size() : 0;
}

NF_API size_t nf_trajectory_alternatives(const nf_trajectory* trajectory) {
  return trajectory ? trajectory->value.alternative_ids.size() : 0;
}

NF_API const char* nf_trajectory_alternative_id(const nf_trajectory* trajectory, size_t i) {
  if (!trajectory || i >= trajectory->value.alternative_ids.size()) return nullptr;
  return trajectory->value.alternative_ids[i].c_str();
}

NF_API nf_status nf_trajectory_score(const nf_trajectory* trajectory, size_t step, size_t i, double* out) {
  NF_REQUIRE(trajectory);
  NF_REQUIRE(out);
  const auto& t = trajectory->value;
  if (step >= t.steps.size() || i >= t.alternative_ids.size()) {
    return fail(NF_ERR_INDEX_OUT_OF_RANGE, "trajectory index out of range");
  }
  *out = t.steps[step].scores[i];
  return NF_OK;
}

NF_API size_t nf_trajectory_event_count(const nf_trajectory* trajectory) {
  return trajectory ? trajectory->value.events.size() : 0;
}

NF_API nf_status nf_trajectory_event(const nf_trajectory* trajectory, size_t e, nf_rank_event* out) {
  NF_REQUIRE(trajectory);
  NF_REQUIRE(out);
  if (e >= trajectory->value.events.size()) return fail(NF_ERR_INDEX_OUT_OF_RANGE, "event index out of range");
  const auto& ev = trajectory->value.events[e];
  *out = nf_rank_event{ev.upper_id.c_str(), ev.lower_id.c_str(), ev.step_before, ev.step_after, ev.crossing_time};
  return NF_OK;
}

NF_API nf_status nf_trajectory_write(const nf_trajectory* trajectory, const char* path) {
  NF_REQUIRE(trajectory);
  NF_REQUIRE(path);
  return guarded([&] { netflow::io::write_trajectory(trajectory->value, path); });
}

NF_API void nf_trajectory_free(nf_trajectory* trajectory) { delete trajectory; }

NF_API nf_status nf_identify_scores(const nf_criteria* criteria, const nf_thresholds* thresholds,
                                    size_t n_thresholds, int exponent, const char* const* ids,
                                    const double* scores, size_t count, nf_identified** out) {
  NF_REQUIRE(criteria);
  NF_REQUIRE(thresholds);
  NF_REQUIRE(out);
  if (count > 0) {
    NF_REQUIRE(ids);
    NF_REQUIRE(scores);
  }
  return guarded([&] {
    const auto& c = criteria->value;
    if (count != c.alternatives()) {
      throw netflow::Error(netflow::ErrorCode::DimensionMismatch,
                           "scores: got " + std::to_string(count) + " values for " +
                               std::to_string(c.alternatives()) + " alternatives");
    }
    std::vector<double> targets(c.alternatives());
    std::vector<bool> seen(c.alternatives(), false);
    for (size_t s = 0; s < count; ++s) {
      const std::string id = ids[s] ? ids[s] : "";
      const auto i = c.index_of(id);
      if (seen[i]) throw netflow::Error(netflow::ErrorCode::DuplicateId, "scores: alternative '" + id + "' given twice");
      seen[i] = true;
      targets[i] = scores[s];
    }
    *out = new nf_identified{netflow::ident::fit_weights_from_scores(
        c, thresholds_for(thresholds, n_thresholds, c.criteria()), targets, exponent)};
  });
}

NF_API nf_status nf_identify_ranking(const nf_criteria* criteria, const nf_thresholds* thresholds,
                                     size_t n_thresholds, int exponent, const char* const* ranking,
                                     size_t count, nf_identified** out) {
  NF_REQUIRE(criteria);
  NF_REQUIRE(thresholds);
  NF_REQUIRE(out);
  if (count > 0) NF_REQUIRE(ranking);
  return guarded([&] {
    std::vector<std::string> order;
    for (size_t r = 0; r < count; ++r) order.emplace_back(ranking[r] ? ranking[r] : "");
    const auto& c = criteria->value;
    *out = new nf_identified{netflow::ident::fit_weights_from_ranking(
        c, thresholds_for(thresholds, n_thresholds, c.criteria()), order, exponent)};
  });
}

NF_API size_t nf_identified_count(const nf_identified* fit) { return fit ? fit->value.weights.size() : 0; }

NF_API const double* nf_identified_weights(const nf_identified* fit) {
  return fit ? fit->value.weights.data() : nullptr;
}

NF_API double nf_identified_residual(const nf_identified* fit) { return fit ? fit->value.residual : 0.0; }

NF_API int nf_identified_ranking_reproduced(const nf_identified* fit) {
  return fit && fit->value.ranking_reproduced ? 1 : 0;
}

NF_API int nf_identified_degenerate(const nf_identified* fit) { return fit && fit->value.degenerate ? 1 : 0; }

NF_API const char* nf_identified_note(const nf_identified* fit) {
  return fit ? fit->value.method_note.c_str() : "";
}

NF_API void nf_identified_free(nf_identified* fit) { delete fit; }

NF_API nf_status nf_server_create(const char* static_dir, double idle_expiry_seconds, nf_log_fn log, void* user,
                                  nf_server** out) {
  NF_REQUIRE(out);
  return guarded([&] {
    netflow::service::ServiceConfig config;
    if (idle_expiry_seconds > 0.0) {
      config.idle_expiry = std::chrono::seconds(static_cast<long long>(idle_expiry_seconds));
    }
    auto server = std::make_unique<nf_server>();
    server->service = std::make_unique<netflow::service::DecisionService>(config);
    netflow::service::HttpServer::LogFn sink;
    if (log) sink = [log, user](const std::string& line) { log(line.c_str(), user); };
    std::optional<std::filesystem::path> dir;
    if (static_dir) dir = static_dir;
    server->http = std::make_unique<netflow::service::HttpServer>(*server->service, dir, std::move(sink));
    *out = server.release();
  });
}

NF_API nf_status nf_server_bind(nf_server* server, const char* host, int port) {
  NF_REQUIRE(server);
  return guarded([&] { server->http->bind(host ? host : "0.0.0.0", port); });
}

NF_API int nf_server_port(const nf_server* server) { return server ? server->http->port() : -1; }

NF_API nf_status nf_server_run(nf_server* server) {
  NF_REQUIRE(server);
  return guarded([&] { server->http->run(); });
}

NF_API void nf_server_stop(nf_server* server) {
  if (server) server->http->stop();
}

NF_API int nf_server_is_running(const nf_server* server) {
  return server && server->http->is_running() ? 1 : 0;
}

NF_API void nf_server_free(nf_server* server) { delete server; }

}  // extern "C"
