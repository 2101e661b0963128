#include "netflow/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace netflow::dynamics {

namespace {

int strict_sign(double d) {
  if (d > kCompareTolerance) return 1;
  if (d < -kCompareTolerance) return -1;
  return 0;
}

// Schedule lookup without the horizon bound, for extend().
ActiveParameters parameters_at(const Scenario& scenario, std::size_t t) {
  ActiveParameters active{scenario.criteria, scenario.initial_model};
  for (const auto& entry : scenario.schedule) {
    if (entry.step > t) break;
    if (entry.criteria) active.criteria = *entry.criteria;
    if (entry.model) active.model = *entry.model;
  }
  return active;
}

void append_events(const Trajectory& trajectory, std::size_t first_new_interval,
                   std::vector<RankEvent>& out) {
  const auto& ids = trajectory.alternative_ids;
  const std::size_t m = ids.size();
  const auto& steps = trajectory.steps;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      int last_sign = 0;
      for (std::size_t t = 0; t < steps.size(); ++t) {
        const double d = steps[t].scores[a] - steps[t].scores[b];
        const int sign = strict_sign(d);
        if (sign == 0) continue;
        if (t > 0 && last_sign != 0 && sign != last_sign && t >= first_new_interval) {
          const double prev = steps[t - 1].scores[a] - steps[t - 1].scores[b];
          const double fraction = (prev == d) ? 0.0 : prev / (prev - d);
          RankEvent ev;
          ev.upper_id = sign > 0 ? ids[a] : ids[b];
          ev.lower_id = sign > 0 ? ids[b] : ids[a];
          ev.step_before = steps[t - 1].step;
          ev.step_after = steps[t].step;
          ev.crossing_time = static_cast<double>(ev.step_before) + std::clamp(fraction, 0.0, 1.0);
          out.push_back(std::move(ev));
        }
        last_sign = sign;
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const RankEvent& x, const RankEvent& y) {
    return x.crossing_time < y.crossing_time;
  });
}

}  // namespace

FilterConfig make_filter(double alpha) {
  FilterConfig f{alpha, std::nullopt, std::nullopt};
  validate_filter(f);
  return f;
}

FilterConfig make_filter_from_damping(double tau, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorCode::NonpositiveDt, "filter.dt: step length must be positive");
  }
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    throw Error(ErrorCode::AlphaOutOfRange, "filter.tau: damping time must be non-negative");
  }
  FilterConfig f{1.0 / (1.0 + tau / dt), tau, dt};
  validate_filter(f);
  return f;
}

void validate_filter(const FilterConfig& filter) {
  if (!(filter.alpha > 0.0 && filter.alpha <= 1.0)) {
    std::ostringstream os;
    os << "filter.alpha: " << filter.alpha << " outside (0, 1]";
    throw Error(ErrorCode::AlphaOutOfRange, os.str());
  }
  if (filter.tau.has_value() != filter.dt.has_value()) {
    throw Error(ErrorCode::Schema, "filter: tau and dt must be given together");
  }
  if (filter.dt) {
    if (!(*filter.dt > 0.0)) throw Error(ErrorCode::NonpositiveDt, "filter.dt: step length must be positive");
    if (!(*filter.tau >= 0.0)) throw Error(ErrorCode::AlphaOutOfRange, "filter.tau: damping time must be non-negative");
    const double expected = 1.0 / (1.0 + *filter.tau / *filter.dt);
    if (std::abs(expected - filter.alpha) > 1e-12) {
      throw Error(ErrorCode::AlphaOutOfRange, "filter.alpha: inconsistent with tau and dt");
    }
  }
}

void validate_scenario(const Scenario& scenario) {
  validate_filter(scenario.filter);
  if (scenario.horizon < 1) throw Error(ErrorCode::Schema, "horizon: must be a positive step count");
  validate_model(scenario.initial_model, scenario.criteria.criteria());

  CriteriaMatrix criteria = scenario.criteria;
  PreferenceModel model = scenario.initial_model;
  for (std::size_t e = 0; e < scenario.schedule.size(); ++e) {
    const auto& entry = scenario.schedule[e];
    const std::string where = "schedule[" + std::to_string(e) + "]";
    if (e > 0 && entry.step <= scenario.schedule[e - 1].step) {
      throw Error(ErrorCode::Schema, where + ".step: schedule steps must be strictly increasing");
    }
    if (entry.step > scenario.horizon) {
      throw Error(ErrorCode::Schema, where + ".step: beyond horizon");
    }
    if (!entry.model && !entry.criteria) {
      throw Error(ErrorCode::Schema, where + ": needs a model or criteria override");
    }
    if (entry.criteria) {
      if (entry.criteria->alternative_ids() != scenario.criteria.alternative_ids()) {
        throw Error(ErrorCode::Schema, where + ".criteria: must keep the same alternatives in the same order");
      }
      criteria = *entry.criteria;
    }
    if (entry.model) model = *entry.model;
    try {
      validate_model(model, criteria.criteria());
    } catch (const Error& err) {
      throw Error(err.code(), where + ": " + err.what());
    }
  }
}

ActiveParameters active_parameters(const Scenario& scenario, std::size_t t) {
  if (t > scenario.horizon) {
    std::ostringstream os;
    os << "step " << t << " beyond horizon " << scenario.horizon;
    throw Error(ErrorCode::StepOutOfRange, os.str());
  }
  return parameters_at(scenario, t);
}

std::vector<double> filter_step(std::span<const double> current, std::span<const double> target,
                                double alpha) {
  if (current.size() != target.size()) {
    throw Error(ErrorCode::LengthMismatch, "filter_step: scores and targets differ in length");
  }
  std::vector<double> next(current.size());
  for (std::size_t i = 0; i < current.size(); ++i) {
    next[i] = (1.0 - alpha) * current[i] + alpha * target[i];
  }
  return next;
}

std::vector<double> initial_scores(const Scenario& scenario) {
  return static_scores(scenario.criteria, scenario.initial_model).scores;
}

Trajectory simulate(const Scenario& scenario) {
  validate_scenario(scenario);
  Trajectory trajectory;
  trajectory.alternative_ids = scenario.criteria.alternative_ids();
  auto s0 = initial_scores(scenario);
  auto ranking = rank(std::span<const double>(s0), trajectory.alternative_ids);
  trajectory.steps.push_back({0, std::move(s0), std::move(ranking)});
  extend(scenario, trajectory, scenario.horizon);
  return trajectory;
}

std::vector<RankEvent> extend(const Scenario& scenario, Trajectory& trajectory, std::size_t count,
                              std::optional<double> alpha_override) {
  if (trajectory.steps.empty()) {
    throw Error(ErrorCode::InvalidArgument, "extend: trajectory needs a starting step");
  }
  const double alpha = alpha_override.value_or(scenario.filter.alpha);
  if (alpha_override) validate_filter(FilterConfig{alpha, std::nullopt, std::nullopt});

  const std::size_t first_new = trajectory.steps.size();
  // Parameters only change at schedule steps; reuse the flows in between.
  std::optional<std::size_t> cached_for;
  std::vector<double> target;
  for (std::size_t n = 0; n < count; ++n) {
    const auto& last = trajectory.steps.back();
    const std::size_t t = last.step;
    bool changes = !cached_for.has_value();
    for (const auto& entry : scenario.schedule) {
      if (cached_for && entry.step > *cached_for && entry.step <= t) changes = true;
    }
    if (changes) {
      const auto params = parameters_at(scenario, t);
      target = static_scores(params.criteria, params.model).scores;
      cached_for = t;
    }
    auto next = filter_step(last.scores, target, alpha);
    auto ranking = rank(std::span<const double>(next), trajectory.alternative_ids);
    trajectory.steps.push_back({t + 1, std::move(next), std::move(ranking)});
  }

  std::vector<RankEvent> fresh;
  append_events(trajectory, first_new, fresh);
  trajectory.events.insert(trajectory.events.end(), fresh.begin(), fresh.end());
  return fresh;
}

double closed_form_constant_schedule(double s0, double target, double alpha, std::size_t t) {
  return target + (s0 - target) * std::pow(1.0 - alpha, static_cast<double>(t));
}

std::vector<RankEvent> detect_rank_events(const Trajectory& trajectory) {
  std::vector<RankEvent> out;
  if (trajectory.steps.size() < 2) return out;
  append_events(trajectory, 1, out);
  return out;
}

FlowResult steady_state(const Scenario& scenario) {
  validate_scenario(scenario);
  const auto params = active_parameters(scenario, scenario.horizon);
  return static_scores(params.criteria, params.model);
}

std::optional<std::size_t> convergence_step(const Trajectory& trajectory, double tolerance) {
  for (std::size_t t = 1; t < trajectory.steps.size(); ++t) {
    double worst = 0.0;
    const auto& prev = trajectory.steps[t - 1].scores;
    const auto& cur = trajectory.steps[t].scores;
    for (std::size_t i = 0; i < cur.size(); ++i) worst = std::max(worst, std::abs(cur[i] - prev[i]));
    if (worst < tolerance) return trajectory.steps[t].step;
  }
  return std::nullopt;
}

}  // namespace netflow::dynamics
