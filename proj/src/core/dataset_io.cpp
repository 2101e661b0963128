#include "netflow/dataset_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

namespace netflow::io {

namespace fs = std::filesystem;
using dynamics::FilterConfig;
using dynamics::RankEvent;
using dynamics::Scenario;
using dynamics::ScheduleEntry;
using dynamics::Trajectory;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

struct Line {
  std::size_t number;
  std::string_view text;
};

std::vector<Line> content_lines(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::vector<Line> out;
  std::size_t number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto pos = text.find('\n', start);
    const auto raw = text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
    ++number;
    if (!trim(raw).empty()) out.push_back({number, raw});
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string at(std::string_view source, std::size_t line) {
  std::ostringstream os;
  os << source << ":" << line << ": ";
  return os.str();
}

bool parse_number(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

bool parse_count(std::string_view s, std::size_t& out) {
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

[[noreturn]] void schema(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::Schema, where + ": " + what);
}

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) schema(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema(where + "." + key, "missing");
  return *it;
}

double number_at(const json& j, const std::string& where) {
  if (!j.is_number()) schema(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema(where, "expected a finite number");
  return v;
}

std::size_t count_at(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) schema(where, "expected a non-negative integer");
  return j.get<std::size_t>();
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> known, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) schema(where + "." + it.key(), "unknown field");
  }
}

template <class Fn>
auto with_path(const std::string& where, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& err) {
    if (err.code() == ErrorCode::Schema) throw;
    throw Error(err.code(), where + ": " + err.what());
  }
}

}  // namespace

const char* to_string(DatasetFormat format) noexcept {
  switch (format) {
    case DatasetFormat::CriteriaCsv: return "criteria-csv";
    case DatasetFormat::ModelJson: return "model-json";
    case DatasetFormat::ScenarioJson: return "scenario-json";
    case DatasetFormat::TrajectoryCsv: return "trajectory-csv";
    case DatasetFormat::EventsJson: return "events-json";
  }
  return "unknown";
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::Io, "error reading '" + path.string() + "'");
  return os.str();
}

void write_text_file(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "error writing '" + path.string() + "'");
}

std::string format_score(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.8f", value);
  std::string s(buf);
  if (s == "-0.00000000") s = "0.00000000";
  return s;
}

DatasetFile inspect_dataset(const fs::path& path) {
  const std::string name = path.filename().string();
  const std::string ext = path.extension().string();
  if (name.ends_with(".events.json")) {
    const auto j = json::parse(read_text_file(path), nullptr, false);
    if (!j.is_array()) throw Error(ErrorCode::Schema, path.string() + ": events file must hold a JSON array");
    return {path, DatasetFormat::EventsJson};
  }
  if (ext == ".json") {
    const auto j = json::parse(read_text_file(path), nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::Parse, path.string() + ": not valid JSON");
    if (j.is_object() && j.contains("initial_model")) return {path, DatasetFormat::ScenarioJson};
    if (j.is_object() && j.contains("weights")) return {path, DatasetFormat::ModelJson};
    if (j.is_array()) return {path, DatasetFormat::EventsJson};
    throw Error(ErrorCode::Schema, path.string() + ": neither a model, scenario nor events file");
  }
  if (ext == ".csv") {
    const auto text = read_text_file(path);
    const auto lines = content_lines(text);
    if (lines.empty()) throw Error(ErrorCode::EmptyFile, path.string() + ": empty file");
    const auto header = split(lines.front().text, ',');
    if (header.size() == 4 && header[0] == "step" && header[1] == "alternative_id") {
      return {path, DatasetFormat::TrajectoryCsv};
    }
    if (!header.empty() && header[0] == "id") return {path, DatasetFormat::CriteriaCsv};
    throw Error(ErrorCode::Parse, path.string() + ":1: unrecognised CSV header");
  }
  throw Error(ErrorCode::Parse, path.string() + ": unknown file extension '" + ext + "'");
}

CriteriaMatrix parse_criteria_csv(std::string_view text, std::string_view source) {
  const auto lines = content_lines(text);
  if (lines.empty()) throw Error(ErrorCode::EmptyFile, std::string(source) + ": empty file");
  const auto header = split(lines.front().text, ',');
  if (header.size() < 2 || header[0] != "id") {
    throw Error(ErrorCode::Parse, at(source, lines.front().number) + "header must be 'id,<label1>,...'");
  }
  std::vector<std::string> labels;
  for (std::size_t k = 1; k < header.size(); ++k) {
    if (header[k].empty()) throw Error(ErrorCode::Parse, at(source, lines.front().number) + "empty criterion label");
    labels.emplace_back(header[k]);
  }
  if (lines.size() < 2) throw Error(ErrorCode::EmptyFile, std::string(source) + ": no alternatives");

  std::vector<std::string> ids;
  std::vector<std::vector<double>> values;
  std::unordered_set<std::string> seen;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto& line = lines[r];
    const auto fields = split(line.text, ',');
    const std::string id(fields[0]);
    if (fields.size() != header.size()) {
      std::ostringstream os;
      os << at(source, line.number) << "row '" << id << "' has " << fields.size() - 1 << " values, expected "
         << labels.size();
      throw Error(ErrorCode::Parse, os.str());
    }
    if (id.empty()) throw Error(ErrorCode::Parse, at(source, line.number) + "empty alternative id");
    if (!seen.insert(id).second) {
      throw Error(ErrorCode::DuplicateId, at(source, line.number) + "duplicate alternative id '" + id + "'");
    }
    std::vector<double> row(labels.size());
    for (std::size_t k = 0; k < labels.size(); ++k) {
      if (!parse_number(fields[k + 1], row[k])) {
        throw Error(ErrorCode::Parse, at(source, line.number) + "row '" + id + "', column '" + labels[k] +
                                          "': not a number: '" + std::string(fields[k + 1]) + "'");
      }
    }
    ids.push_back(id);
    values.push_back(std::move(row));
  }
  return CriteriaMatrix(std::move(ids), std::move(labels), std::move(values));
}

CriteriaMatrix load_criteria(const fs::path& path) {
  return parse_criteria_csv(read_text_file(path), path.string());
}

std::string format_criteria_csv(const CriteriaMatrix& criteria) {
  std::ostringstream os;
  os << "id";
  for (const auto& label : criteria.criterion_labels()) os << ',' << label;
  os << '\n';
  char buf[64];
  for (std::size_t i = 0; i < criteria.alternatives(); ++i) {
    os << criteria.alternative_ids()[i];
    for (std::size_t k = 0; k < criteria.criteria(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", criteria.value(i, k));
      os << ',' << buf;
    }
    os << '\n';
  }
  return os.str();
}

void write_criteria(const CriteriaMatrix& criteria, const fs::path& path) {
  write_text_file(path, format_criteria_csv(criteria));
}

json criteria_to_json(const CriteriaMatrix& criteria) {
  json values = json::array();
  for (std::size_t i = 0; i < criteria.alternatives(); ++i) {
    const auto row = criteria.row(i);
    values.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return {{"ids", criteria.alternative_ids()}, {"labels", criteria.criterion_labels()}, {"values", values}};
}

CriteriaMatrix criteria_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) schema(where, "expected an object with ids, labels and values");
  reject_unknown_keys(j, {"ids", "labels", "values"}, where);
  const auto& ids_j = require(j, "ids", where);
  const auto& labels_j = require(j, "labels", where);
  const auto& values_j = require(j, "values", where);
  if (!ids_j.is_array()) schema(where + ".ids", "expected an array of strings");
  if (!labels_j.is_array()) schema(where + ".labels", "expected an array of strings");
  if (!values_j.is_array()) schema(where + ".values", "expected an array of rows");
  std::vector<std::string> ids, labels;
  for (std::size_t i = 0; i < ids_j.size(); ++i) {
    if (!ids_j[i].is_string()) schema(where + ".ids[" + std::to_string(i) + "]", "expected a string");
    ids.push_back(ids_j[i].get<std::string>());
  }
  for (std::size_t k = 0; k < labels_j.size(); ++k) {
    if (!labels_j[k].is_string()) schema(where + ".labels[" + std::to_string(k) + "]", "expected a string");
    labels.push_back(labels_j[k].get<std::string>());
  }
  std::vector<std::vector<double>> values;
  for (std::size_t i = 0; i < values_j.size(); ++i) {
    const std::string row_where = where + ".values[" + std::to_string(i) + "]";
    if (!values_j[i].is_array()) schema(row_where, "expected an array of numbers");
    std::vector<double> row;
    for (std::size_t k = 0; k < values_j[i].size(); ++k) {
      row.push_back(number_at(values_j[i][k], row_where + "[" + std::to_string(k) + "]"));
    }
    values.push_back(std::move(row));
  }
  return with_path(where, [&] { return CriteriaMatrix(ids, labels, values); });
}

json thresholds_to_json(const std::vector<ThresholdTriple>& thresholds) {
  json out = json::array();
  for (const auto& t : thresholds) out.push_back({{"q", t.q}, {"p", t.p}, {"v", t.v}});
  return out;
}

std::vector<ThresholdTriple> thresholds_from_json(const json& j, std::size_t n, const std::string& where) {
  auto triple = [](const json& t, const std::string& w) {
    if (!t.is_object()) schema(w, "expected an object {q, p, v}");
    reject_unknown_keys(t, {"q", "p", "v"}, w);
    return ThresholdTriple{number_at(require(t, "q", w), w + ".q"), number_at(require(t, "p", w), w + ".p"),
                           number_at(require(t, "v", w), w + ".v")};
  };
  if (j.is_object()) return std::vector<ThresholdTriple>(n, triple(j, where));
  if (!j.is_array()) schema(where, "expected an array of {q, p, v} or a single triple");
  std::vector<ThresholdTriple> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(triple(j[k], where + "[" + std::to_string(k) + "]"));
  if (out.size() == 1 && n > 1) out.assign(n, out.front());
  return out;
}

json model_to_json(const PreferenceModel& model) {
  return {{"weights", model.weights},
          {"thresholds", thresholds_to_json(model.thresholds)},
          {"exponent", model.discordance_exponent}};
}

PreferenceModel model_from_json(const json& j, std::size_t n, const std::string& where) {
  if (!j.is_object()) schema(where, "expected an object");
  reject_unknown_keys(j, {"weights", "thresholds", "exponent"}, where);
  const auto& weights_j = require(j, "weights", where);
  if (!weights_j.is_array()) schema(where + ".weights", "expected an array of numbers");
  PreferenceModel model;
  for (std::size_t k = 0; k < weights_j.size(); ++k) {
    model.weights.push_back(number_at(weights_j[k], where + ".weights[" + std::to_string(k) + "]"));
  }
  model.thresholds = thresholds_from_json(require(j, "thresholds", where), n, where + ".thresholds");
  if (auto it = j.find("exponent"); it != j.end()) {
    if (!it->is_number_integer() || it->get<long long>() < 1) {
      schema(where + ".exponent", "expected a positive integer");
    }
    model.discordance_exponent = it->get<int>();
  }
  with_path(where, [&] { return validate_model(model, n); });
  return model;
}

json filter_to_json(const FilterConfig& filter) {
  if (filter.tau && filter.dt) return {{"tau", *filter.tau}, {"dt", *filter.dt}};
  return {{"alpha", filter.alpha}};
}

FilterConfig filter_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) schema(where, "expected an object {alpha} or {tau, dt}");
  reject_unknown_keys(j, {"alpha", "tau", "dt"}, where);
  const bool has_tau = j.contains("tau");
  const bool has_dt = j.contains("dt");
  if (has_tau != has_dt) schema(where, "tau and dt must be given together");
  if (has_tau) {
    const auto f = dynamics::make_filter_from_damping(number_at(j["tau"], where + ".tau"),
                                                      number_at(j["dt"], where + ".dt"));
    if (j.contains("alpha")) {
      FilterConfig given = f;
      given.alpha = number_at(j["alpha"], where + ".alpha");
      dynamics::validate_filter(given);
    }
    return f;
  }
  if (!j.contains("alpha")) schema(where, "needs alpha or tau and dt");
  return dynamics::make_filter(number_at(j["alpha"], where + ".alpha"));
}

json ranking_to_json(const Ranking& ranking) {
  json out = json::array();
  for (const auto& e : ranking) out.push_back({{"id", e.alternative_id}, {"score", e.score}, {"rank", e.rank}});
  return out;
}

json events_to_json(const std::vector<RankEvent>& events) {
  json out = json::array();
  for (const auto& e : events) {
    out.push_back({{"upper_id", e.upper_id},
                   {"lower_id", e.lower_id},
                   {"step_before", e.step_before},
                   {"step_after", e.step_after},
                   {"crossing_time", e.crossing_time}});
  }
  return out;
}

std::vector<RankEvent> events_from_json(const json& j) {
  if (!j.is_array()) schema("events", "expected an array");
  std::vector<RankEvent> out;
  for (std::size_t e = 0; e < j.size(); ++e) {
    const std::string where = "events[" + std::to_string(e) + "]";
    const auto& ev = j[e];
    RankEvent r;
    const auto& upper = require(ev, "upper_id", where);
    const auto& lower = require(ev, "lower_id", where);
    if (!upper.is_string()) schema(where + ".upper_id", "expected a string");
    if (!lower.is_string()) schema(where + ".lower_id", "expected a string");
    r.upper_id = upper.get<std::string>();
    r.lower_id = lower.get<std::string>();
    r.step_before = count_at(require(ev, "step_before", where), where + ".step_before");
    r.step_after = count_at(require(ev, "step_after", where), where + ".step_after");
    r.crossing_time = number_at(require(ev, "crossing_time", where), where + ".crossing_time");
    out.push_back(std::move(r));
  }
  return out;
}

PreferenceModel load_model(const fs::path& path, std::size_t n) {
  const auto j = json::parse(read_text_file(path), nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::Parse, path.string() + ": not valid JSON");
  return model_from_json(j, n);
}

void save_model(const PreferenceModel& model, const fs::path& path) {
  write_text_file(path, model_to_json(model).dump(2) + "\n");
}

json scenario_to_json(const Scenario& scenario) {
  json schedule = json::array();
  for (const auto& entry : scenario.schedule) {
    json e = {{"step", entry.step}};
    if (entry.model) e["model"] = model_to_json(*entry.model);
    if (entry.criteria) e["criteria"] = criteria_to_json(*entry.criteria);
    schedule.push_back(std::move(e));
  }
  return {{"criteria", criteria_to_json(scenario.criteria)},
          {"initial_model", model_to_json(scenario.initial_model)},
          {"filter", filter_to_json(scenario.filter)},
          {"horizon", scenario.horizon},
          {"schedule", schedule}};
}

Scenario scenario_from_json(const json& j, const ScenarioOptions& options) {
  const std::string root = "scenario";
  if (!j.is_object()) schema(root, "expected an object");
  reject_unknown_keys(j, {"criteria", "initial_model", "filter", "horizon", "schedule"}, root);

  auto criteria_at = [&](const json& c, const std::string& where) {
    if (c.is_string()) {
      if (options.base_dir.empty()) schema(where, "file references are not allowed here");
      fs::path p = c.get<std::string>();
      if (p.is_relative()) p = options.base_dir / p;
      return load_criteria(p);
    }
    return criteria_from_json(c, where);
  };

  auto criteria = criteria_at(require(j, "criteria", root), root + ".criteria");
  auto initial = model_from_json(require(j, "initial_model", root), criteria.criteria(), root + ".initial_model");
  auto filter = filter_from_json(require(j, "filter", root), root + ".filter");
  const std::size_t horizon = count_at(require(j, "horizon", root), root + ".horizon");
  if (horizon < 1) schema(root + ".horizon", "must be a positive step count");

  std::vector<ScheduleEntry> schedule;
  if (auto it = j.find("schedule"); it != j.end()) {
    if (!it->is_array()) schema(root + ".schedule", "expected an array");
    std::size_t n = criteria.criteria();
    for (std::size_t e = 0; e < it->size(); ++e) {
      const std::string where = root + ".schedule[" + std::to_string(e) + "]";
      const auto& ej = (*it)[e];
      if (!ej.is_object()) schema(where, "expected an object");
      reject_unknown_keys(ej, {"step", "model", "criteria"}, where);
      ScheduleEntry entry;
      entry.step = count_at(require(ej, "step", where), where + ".step");
      if (!schedule.empty() && entry.step <= schedule.back().step) {
        schema(where + ".step", "schedule steps must be strictly increasing");
      }
      if (entry.step > horizon) schema(where + ".step", "beyond horizon");
      if (ej.contains("criteria")) {
        entry.criteria = criteria_at(ej["criteria"], where + ".criteria");
        n = entry.criteria->criteria();
      }
      if (ej.contains("model")) entry.model = model_from_json(ej["model"], n, where + ".model");
      if (!entry.model && !entry.criteria) schema(where, "needs a model or criteria override");
      schedule.push_back(std::move(entry));
    }
  }
  Scenario scenario{std::move(criteria), std::move(initial), filter, horizon, std::move(schedule)};
  dynamics::validate_scenario(scenario);
  return scenario;
}

Scenario load_scenario(const fs::path& path) {
  const auto j = json::parse(read_text_file(path), nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::Parse, path.string() + ": not valid JSON");
  ScenarioOptions options;
  options.base_dir = path.parent_path().empty() ? fs::path(".") : path.parent_path();
  return scenario_from_json(j, options);
}

void save_scenario(const Scenario& scenario, const fs::path& path) {
  write_text_file(path, scenario_to_json(scenario).dump(2) + "\n");
}

std::string format_trajectory_csv(const Trajectory& trajectory) {
  std::string out = "step,alternative_id,score,rank\n";
  for (const auto& step : trajectory.steps) {
    for (const auto& entry : step.ranking) {
      out += std::to_string(step.step);
      out += ',';
      out += entry.alternative_id;
      out += ',';
      out += format_score(entry.score);
      out += ',';
      out += std::to_string(entry.rank);
      out += '\n';
    }
  }
  return out;
}

Trajectory parse_trajectory_csv(std::string_view text, std::string_view source) {
  const auto lines = content_lines(text);
  if (lines.empty()) throw Error(ErrorCode::EmptyFile, std::string(source) + ": empty file");
  const auto header = split(lines.front().text, ',');
  if (header.size() != 4 || header[0] != "step" || header[1] != "alternative_id" || header[2] != "score" ||
      header[3] != "rank") {
    throw Error(ErrorCode::Parse, at(source, lines.front().number) + "header must be 'step,alternative_id,score,rank'");
  }
  Trajectory trajectory;
  std::map<std::string, std::size_t> column;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto fields = split(lines[r].text, ',');
    const auto where = at(source, lines[r].number);
    if (fields.size() != 4) throw Error(ErrorCode::Parse, where + "expected 4 fields");
    std::size_t step = 0, rank_value = 0;
    double score = 0.0;
    if (!parse_count(fields[0], step)) throw Error(ErrorCode::Parse, where + "bad step '" + std::string(fields[0]) + "'");
    if (!parse_number(fields[2], score)) throw Error(ErrorCode::Parse, where + "bad score '" + std::string(fields[2]) + "'");
    if (!parse_count(fields[3], rank_value)) throw Error(ErrorCode::Parse, where + "bad rank '" + std::string(fields[3]) + "'");
    const std::string id(fields[1]);

    if (trajectory.steps.empty() || trajectory.steps.back().step != step) {
      if (!trajectory.steps.empty() && step < trajectory.steps.back().step) {
        throw Error(ErrorCode::Parse, where + "rows must be sorted by step");
      }
      trajectory.steps.push_back({step, std::vector<double>(trajectory.alternative_ids.size(), 0.0), {}});
    }
    auto& current = trajectory.steps.back();
    if (trajectory.steps.size() == 1) {
      if (column.contains(id)) throw Error(ErrorCode::DuplicateId, where + "alternative '" + id + "' repeated");
      column[id] = trajectory.alternative_ids.size();
      trajectory.alternative_ids.push_back(id);
      current.scores.push_back(score);
    } else {
      auto it = column.find(id);
      if (it == column.end()) throw Error(ErrorCode::Parse, where + "unknown alternative '" + id + "'");
      current.scores[it->second] = score;
    }
    current.ranking.push_back({id, score, rank_value});
  }
  const std::size_t m = trajectory.alternative_ids.size();
  for (const auto& step : trajectory.steps) {
    if (step.ranking.size() != m) {
      throw Error(ErrorCode::Parse, std::string(source) + ": step " + std::to_string(step.step) +
                                        " does not list every alternative once");
    }
  }
  return trajectory;
}

fs::path events_path_for(const fs::path& trajectory_path) {
  return fs::path(trajectory_path.string() + ".events.json");
}

void write_trajectory(const Trajectory& trajectory, const fs::path& path) {
  write_text_file(path, format_trajectory_csv(trajectory));
  write_text_file(events_path_for(path), events_to_json(trajectory.events).dump(2) + "\n");
}

Trajectory load_trajectory(const fs::path& path) {
  auto trajectory = parse_trajectory_csv(read_text_file(path), path.string());
  const auto events_path = events_path_for(path);
  if (fs::exists(events_path)) {
    const auto j = json::parse(read_text_file(events_path), nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::Parse, events_path.string() + ": not valid JSON");
    trajectory.events = events_from_json(j);
  }
  return trajectory;
}

}  // namespace netflow::io
