#include "netflow/service.hpp"

#include <atomic>
#include <cstdio>
#include <mutex>
#include <random>

#include "netflow/dataset_io.hpp"
#include "netflow/identification.hpp"

namespace netflow::service {

using dynamics::Scenario;
using dynamics::ScheduleEntry;
using dynamics::Trajectory;
using dynamics::TrajectoryStep;

struct DecisionService::Session {
  std::string id;
  Scenario scenario;
  Trajectory history;
  mutable std::shared_mutex mutex;
  mutable std::atomic<Clock::rep> last_used{0};

  Session(std::string id_, Scenario scenario_) : id(std::move(id_)), scenario(std::move(scenario_)) {}
  void touch(Clock::time_point now) const { last_used.store(now.time_since_epoch().count()); }
};

namespace {

Response error(int status, const std::string& message, const char* code = nullptr) {
  json body = {{"error", message}};
  if (code) body["code"] = code;
  return {status, std::move(body)};
}

Response error(const Error& err) { return error(400, err.what(), to_string(err.code())); }

Response not_found(const std::string& id) { return error(404, "unknown session '" + id + "'", "NotFound"); }

json step_to_json(const TrajectoryStep& step) {
  return {{"step", step.step}, {"scores", step.scores}, {"ranking", io::ranking_to_json(step.ranking)}};
}

std::size_t positive_count(const json& body, const char* key, std::size_t fallback, std::size_t cap,
                           bool allow_zero) {
  if (!body.is_object() || !body.contains(key)) return fallback;
  const auto& v = body[key];
  if (!v.is_number_integer()) throw Error(ErrorCode::Schema, std::string(key) + ": expected an integer");
  const auto value = v.get<long long>();
  if (value < (allow_zero ? 0 : 1)) {
    throw Error(ErrorCode::InvalidArgument,
                std::string(key) + (allow_zero ? ": must be non-negative" : ": must be a positive integer"));
  }
  if (static_cast<unsigned long long>(value) > cap) {
    throw Error(ErrorCode::InvalidArgument, std::string(key) + ": exceeds the per-request limit of " + std::to_string(cap));
  }
  return static_cast<std::size_t>(value);
}

// Replaces or inserts the model override at `step`, keeping the schedule sorted.
void schedule_model(Scenario& scenario, std::size_t step, PreferenceModel model) {
  auto it = scenario.schedule.begin();
  while (it != scenario.schedule.end() && it->step < step) ++it;
  if (it != scenario.schedule.end() && it->step == step) {
    it->model = std::move(model);
  } else {
    ScheduleEntry entry;
    entry.step = step;
    entry.model = std::move(model);
    scenario.schedule.insert(it, std::move(entry));
  }
  if (scenario.horizon < step) scenario.horizon = step;
}

std::size_t criteria_count_at(const Scenario& scenario, std::size_t step) {
  std::size_t n = scenario.criteria.criteria();
  for (const auto& entry : scenario.schedule) {
    if (entry.step > step) break;
    if (entry.criteria) n = entry.criteria->criteria();
  }
  return n;
}

}  // namespace

DecisionService::DecisionService(ServiceConfig config) : config_(std::move(config)) {
  std::random_device rd;
  id_salt_ = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

DecisionService::~DecisionService() = default;

Response DecisionService::health() const { return {200, {{"status", "ok"}}}; }

std::string DecisionService::new_session_id() {
  // splitmix64 over a salted counter: unique per service, hard to guess.
  std::uint64_t z = id_salt_ + 0x9E3779B97F4A7C15ULL * ++counter_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  char buf[40];
  std::snprintf(buf, sizeof buf, "s%04llx-%016llx", static_cast<unsigned long long>(counter_ & 0xffff),
                static_cast<unsigned long long>(z));
  return buf;
}

std::shared_ptr<DecisionService::Session> DecisionService::find(const std::string& id) const {
  std::shared_lock lock(sessions_mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) return nullptr;
  it->second->touch(config_.clock());
  return it->second;
}

std::size_t DecisionService::session_count() const {
  std::shared_lock lock(sessions_mutex_);
  return sessions_.size();
}

std::size_t DecisionService::expire_idle() {
  const auto now = config_.clock().time_since_epoch().count();
  const auto limit = std::chrono::duration_cast<Clock::duration>(config_.idle_expiry).count();
  std::unique_lock lock(sessions_mutex_);
  std::size_t dropped = 0;
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    if (now - it->second->last_used.load() > limit) {
      it = sessions_.erase(it);
      ++dropped;
    } else {
      ++it;
    }
  }
  return dropped;
}

Response DecisionService::create_session(const json& body) {
  try {
    expire_idle();
    const json& scenario_json = (body.is_object() && body.contains("scenario")) ? body["scenario"] : body;
    auto scenario = io::scenario_from_json(scenario_json);  // inline criteria only

    Trajectory history;
    history.alternative_ids = scenario.criteria.alternative_ids();
    auto scores = dynamics::initial_scores(scenario);
    auto ranking = rank(std::span<const double>(scores), history.alternative_ids);
    history.steps.push_back({0, std::move(scores), std::move(ranking)});

    std::shared_ptr<Session> session;
    {
      std::unique_lock lock(sessions_mutex_);
      std::string id;
      do {
        id = new_session_id();
      } while (sessions_.contains(id));
      session = std::make_shared<Session>(id, std::move(scenario));
      session->history = std::move(history);
      session->touch(config_.clock());
      sessions_.emplace(id, session);
    }
    json out = step_to_json(session->history.steps.front());
    out["session_id"] = session->id;
    return {201, std::move(out)};
  } catch (const Error& err) {
    return error(err);
  }
}

Response DecisionService::advance(const std::string& id, const json& body) {
  auto session = find(id);
  if (!session) return not_found(id);
  try {
    const auto count = positive_count(body, "count", 1, config_.max_steps_per_request, false);
    std::unique_lock lock(session->mutex);
    const std::size_t target = session->history.steps.back().step + count;
    if (session->scenario.horizon < target) session->scenario.horizon = target;
    const auto fresh = dynamics::extend(session->scenario, session->history, count);
    json out = step_to_json(session->history.steps.back());
    out["new_events"] = io::events_to_json(fresh);
    return {200, std::move(out)};
  } catch (const Error& err) {
    return error(err);
  }
}

Response DecisionService::update_preferences(const std::string& id, const json& body) {
  auto session = find(id);
  if (!session) return not_found(id);
  try {
    if (!body.is_object()) throw Error(ErrorCode::Schema, "body: expected an object");
    const json& model_json = body.contains("model") ? body["model"] : body;
    std::unique_lock lock(session->mutex);
    const std::size_t step = session->history.steps.back().step;
    auto model = io::model_from_json(model_json, criteria_count_at(session->scenario, step), "model");
    schedule_model(session->scenario, step, std::move(model));
    return {200, {{"acknowledged_at_step", step}}};
  } catch (const Error& err) {
    return error(err);
  }
}

Response DecisionService::what_if(const std::string& id, const json& body) const {
  auto session = find(id);
  if (!session) return not_found(id);
  try {
    if (!body.is_object()) throw Error(ErrorCode::Schema, "body: expected an object");
    if (!body.contains("horizon")) throw Error(ErrorCode::Schema, "horizon: missing");
    const auto horizon = positive_count(body, "horizon", 0, config_.max_steps_per_request, true);
    std::optional<double> alpha;
    if (body.contains("alpha")) {
      if (!body["alpha"].is_number()) throw Error(ErrorCode::Schema, "alpha: expected a number");
      alpha = body["alpha"].get<double>();
      dynamics::validate_filter({*alpha, std::nullopt, std::nullopt});
    }

    std::optional<Scenario> copy;
    Trajectory preview;
    {
      std::shared_lock lock(session->mutex);
      copy = session->scenario;
      preview.alternative_ids = session->history.alternative_ids;
      preview.steps.push_back(session->history.steps.back());
    }
    Scenario& scenario = *copy;
    const std::size_t start = preview.steps.front().step;
    if (body.contains("model")) {
      schedule_model(scenario, start, io::model_from_json(body["model"], criteria_count_at(scenario, start), "model"));
    }
    if (scenario.horizon < start + horizon) scenario.horizon = start + horizon;
    dynamics::extend(scenario, preview, horizon, alpha);

    json steps = json::array();
    for (const auto& step : preview.steps) steps.push_back(step_to_json(step));
    return {200, {{"trajectory", std::move(steps)}, {"events", io::events_to_json(preview.events)}}};
  } catch (const Error& err) {
    return error(err);
  }
}

Response DecisionService::get_state(const std::string& id) const {
  auto session = find(id);
  if (!session) return not_found(id);
  std::shared_lock lock(session->mutex);
  json history = json::array();
  for (const auto& step : session->history.steps) history.push_back(step_to_json(step));
  json out = step_to_json(session->history.steps.back());
  out["session_id"] = session->id;
  out["history"] = std::move(history);
  out["events"] = io::events_to_json(session->history.events);
  return {200, std::move(out)};
}

Response DecisionService::identify(const json& body) const {
  try {
    if (!body.is_object()) throw Error(ErrorCode::Schema, "body: expected an object");
    const bool has_scores = body.contains("scores");
    const bool has_ranking = body.contains("ranking");
    if (has_scores == has_ranking) {
      throw Error(ErrorCode::InvalidArgument, "exactly one of 'scores' or 'ranking' is required");
    }
    if (!body.contains("criteria")) throw Error(ErrorCode::Schema, "criteria: missing");
    if (!body.contains("thresholds")) throw Error(ErrorCode::Schema, "thresholds: missing");
    const auto criteria = io::criteria_from_json(body["criteria"]);
    const auto thresholds = io::thresholds_from_json(body["thresholds"], criteria.criteria());
    int exponent = 3;
    if (body.contains("exponent")) {
      if (!body["exponent"].is_number_integer() || body["exponent"].get<int>() < 1) {
        throw Error(ErrorCode::Schema, "exponent: expected a positive integer");
      }
      exponent = body["exponent"].get<int>();
    }

    ident::IdentifiedWeights fit;
    if (has_scores) {
      const auto& s = body["scores"];
      std::vector<double> targets(criteria.alternatives());
      if (s.is_array()) {
        if (s.size() != targets.size()) throw Error(ErrorCode::DimensionMismatch, "scores: one value per alternative required");
        for (std::size_t i = 0; i < s.size(); ++i) {
          if (!s[i].is_number()) throw Error(ErrorCode::Schema, "scores[" + std::to_string(i) + "]: expected a number");
          targets[i] = s[i].get<double>();
        }
      } else if (s.is_object()) {
        if (s.size() != targets.size()) throw Error(ErrorCode::DimensionMismatch, "scores: one value per alternative required");
        for (auto it = s.begin(); it != s.end(); ++it) {
          if (!it->is_number()) throw Error(ErrorCode::Schema, "scores." + it.key() + ": expected a number");
          targets[criteria.index_of(it.key())] = it->get<double>();
        }
      } else {
        throw Error(ErrorCode::Schema, "scores: expected an array or an object keyed by id");
      }
      fit = ident::fit_weights_from_scores(criteria, thresholds, targets, exponent);
    } else {
      const auto& r = body["ranking"];
      if (!r.is_array()) throw Error(ErrorCode::Schema, "ranking: expected an array of ids, best first");
      std::vector<std::string> order;
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (!r[i].is_string()) throw Error(ErrorCode::Schema, "ranking[" + std::to_string(i) + "]: expected a string");
        order.push_back(r[i].get<std::string>());
      }
      fit = ident::fit_weights_from_ranking(criteria, thresholds, order, exponent);
    }
    return {200,
            {{"weights", fit.weights},
             {"residual", fit.residual},
             {"ranking_reproduced", fit.ranking_reproduced},
             {"degenerate", fit.degenerate},
             {"method_note", fit.method_note}}};
  } catch (const Error& err) {
    return error(err);
  }
}

}  // namespace netflow::service
