#pragma once

// File formats:
//   criteria-csv    header `id,<label1>,...,<labelN>`, one row per alternative
//   model-json      {"weights": [...], "thresholds": [{"q","p","v"}...], "exponent": 3}
//   scenario-json   {"criteria": {...} | "<csv path>", "initial_model": {...},
//                    "filter": {"alpha"} | {"tau","dt"}, "horizon": N,
//                    "schedule": [{"step", "model"?, "criteria"?}]}
//   trajectory-csv  header `step,alternative_id,score,rank`, rows sorted by
//                   (step, rank), scores with 8 decimals
//   events-json     [{"upper_id","lower_id","step_before","step_after","crossing_time"}]
//
// Numbers use a decimal point regardless of locale. Text is UTF-8.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "netflow/core.hpp"
#include "netflow/dynamics.hpp"

namespace netflow::io {

using nlohmann::json;

enum class DatasetFormat { CriteriaCsv, ModelJson, ScenarioJson, TrajectoryCsv, EventsJson };

struct DatasetFile {
  std::filesystem::path path;
  DatasetFormat format;
};

const char* to_string(DatasetFormat format) noexcept;

/// Infers the format from the extension and checks it against the content.
DatasetFile inspect_dataset(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// Fixed-point with 8 decimals; never prints "-0.00000000".
std::string format_score(double value);

// criteria-csv
CriteriaMatrix parse_criteria_csv(std::string_view text, std::string_view source = "<memory>");
CriteriaMatrix load_criteria(const std::filesystem::path& path);
std::string format_criteria_csv(const CriteriaMatrix& criteria);
void write_criteria(const CriteriaMatrix& criteria, const std::filesystem::path& path);

// JSON conversions; `where` prefixes error messages with a field path.
json criteria_to_json(const CriteriaMatrix& criteria);
CriteriaMatrix criteria_from_json(const json& j, const std::string& where = "criteria");
json thresholds_to_json(const std::vector<ThresholdTriple>& thresholds);
std::vector<ThresholdTriple> thresholds_from_json(const json& j, std::size_t n,
                                                  const std::string& where = "thresholds");
json model_to_json(const PreferenceModel& model);
/// Parses and validates against n criteria. A single threshold object (not
/// an array) is broadcast to all criteria.
PreferenceModel model_from_json(const json& j, std::size_t n, const std::string& where = "model");
json filter_to_json(const dynamics::FilterConfig& filter);
dynamics::FilterConfig filter_from_json(const json& j, const std::string& where = "filter");
json ranking_to_json(const Ranking& ranking);
json events_to_json(const std::vector<dynamics::RankEvent>& events);
std::vector<dynamics::RankEvent> events_from_json(const json& j);

PreferenceModel load_model(const std::filesystem::path& path, std::size_t n);
void save_model(const PreferenceModel& model, const std::filesystem::path& path);

struct ScenarioOptions {
  /// Directory that relative criteria paths resolve against. File references
  /// are rejected when empty.
  std::filesystem::path base_dir;
};

json scenario_to_json(const dynamics::Scenario& scenario);
dynamics::Scenario scenario_from_json(const json& j, const ScenarioOptions& options = {});
dynamics::Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const dynamics::Scenario& scenario, const std::filesystem::path& path);

// trajectory-csv + events-json
std::string format_trajectory_csv(const dynamics::Trajectory& trajectory);
dynamics::Trajectory parse_trajectory_csv(std::string_view text, std::string_view source = "<memory>");
std::filesystem::path events_path_for(const std::filesystem::path& trajectory_path);
void write_trajectory(const dynamics::Trajectory& trajectory, const std::filesystem::path& path);
/// Reads the CSV and, when present, the sibling events file.
dynamics::Trajectory load_trajectory(const std::filesystem::path& path);

}  // namespace netflow::io
