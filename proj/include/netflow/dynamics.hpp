#pragma once

// Dynamic net-flow scores. Each alternative's score follows a first-order
// low-pass filter driven by its static net flow:
//
//   s(t + 1) = (1 - alpha) s(t) + alpha (phi_plus(t) - phi_minus(t)),
//   alpha    = 1 / (1 + tau / dt).
//
// Time is an integer step index. Preferences and criteria are piecewise
// constant, switched by a schedule; flows at step t use the parameters active
// at step t.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netflow/core.hpp"

namespace netflow::dynamics {

inline constexpr double kConvergenceTolerance = 1e-8;

struct FilterConfig {
  double alpha = 1.0;
  std::optional<double> tau;
  std::optional<double> dt;
};

FilterConfig make_filter(double alpha);
FilterConfig make_filter_from_damping(double tau, double dt);
void validate_filter(const FilterConfig& filter);

struct ScheduleEntry {
  std::size_t step = 0;
  std::optional<PreferenceModel> model;
  std::optional<CriteriaMatrix> criteria;
};

struct Scenario {
  CriteriaMatrix criteria;
  PreferenceModel initial_model;
  FilterConfig filter;
  std::size_t horizon = 1;
  std::vector<ScheduleEntry> schedule;
};

/// Throws Schema for ordering / empty entries, LengthMismatch or Schema for
/// criteria overrides that change the alternative set, and the usual model
/// errors for every model against the criteria active alongside it.
void validate_scenario(const Scenario& scenario);

struct ActiveParameters {
  CriteriaMatrix criteria;
  PreferenceModel model;
};

/// Base parameters overridden by every entry with step <= t (later wins).
ActiveParameters active_parameters(const Scenario& scenario, std::size_t t);

std::vector<double> filter_step(std::span<const double> current, std::span<const double> target,
                                double alpha);

struct TrajectoryStep {
  std::size_t step = 0;
  std::vector<double> scores;
  Ranking ranking;
};

struct RankEvent {
  std::string upper_id;  // ahead after the crossing
  std::string lower_id;
  std::size_t step_before = 0;
  std::size_t step_after = 0;
  double crossing_time = 0.0;
};

struct Trajectory {
  std::vector<std::string> alternative_ids;
  std::vector<TrajectoryStep> steps;
  std::vector<RankEvent> events;
};

/// Static scores of the base criteria under initial_model: the filter's
/// starting point, even when a schedule entry overrides step 0.
std::vector<double> initial_scores(const Scenario& scenario);

/// horizon + 1 steps starting at t = 0, plus rank events.
Trajectory simulate(const Scenario& scenario);

/// Appends `count` filter steps to a trajectory that already holds at least
/// one step, using the scenario's schedule (which may run past its horizon).
/// Returns the rank events found in the new intervals; they are also appended
/// to trajectory.events.
std::vector<RankEvent> extend(const Scenario& scenario, Trajectory& trajectory, std::size_t count,
                              std::optional<double> alpha_override = std::nullopt);

/// s(t) = target + (s0 - target)(1 - alpha)^t on a constant segment.
double closed_form_constant_schedule(double s0, double target, double alpha, std::size_t t);

/// One event per consecutive step pair and alternative pair whose strict
/// order flips. Differences within kCompareTolerance count as ties and
/// attach to the following interval.
std::vector<RankEvent> detect_rank_events(const Trajectory& trajectory);

/// Static scores under the parameters active at the horizon.
FlowResult steady_state(const Scenario& scenario);

/// First step whose maximum per-alternative change from the previous step is
/// below `tolerance`, if any.
std::optional<std::size_t> convergence_step(const Trajectory& trajectory,
                                            double tolerance = kConvergenceTolerance);

}  // namespace netflow::dynamics
