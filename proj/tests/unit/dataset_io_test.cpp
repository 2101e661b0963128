#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <unistd.h>

#include "netflow/dataset_io.hpp"
#include "netflow/errors.hpp"
#include "netflow/fixtures.hpp"

using namespace netflow;
using namespace netflow::io;
namespace fs = std::filesystem;

namespace {

const fs::path kData = NETFLOW_DATA_DIR;

class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() /
            ("netflow-" + std::string(info->name()) + "-" + std::to_string(::getpid()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

template <class F>
std::string expect_error(ErrorCode code, F&& f) {
  try {
    f();
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
    return e.what();
  }
  return {};
}

double round8(double x) { return std::round(x * 1e8) / 1e8; }

json switch_json() { return json::parse(read_text_file(kData / "e1_switch.json")); }

}  // namespace

TEST(Criteria, BundledFileMatchesFixture) {
  const auto c = load_criteria(kData / "e1.csv");
  const auto fixture = fixtures::e1_criteria();
  EXPECT_EQ(c.alternative_ids(), fixture.alternative_ids());
  EXPECT_EQ(c.criterion_labels(), fixture.criterion_labels());
  EXPECT_EQ(c.values(), fixture.values());
  EXPECT_EQ(c.value(0, 0), 0.62093);
  EXPECT_EQ(c.value(3, 3), 0.0);
  EXPECT_EQ(c.value(4, 1), 0.17637);
}

TEST(Criteria, Errors) {
  expect_error(ErrorCode::DuplicateId, [] { parse_criteria_csv("id,C1\n613,0.1\n613,0.2\n"); });
  const auto msg = expect_error(ErrorCode::Parse, [] {
    parse_criteria_csv("id,C1,C2,C3,C4\n613,1,2,3,4\n2573,1,2,3\n", "short.csv");
  });
  EXPECT_NE(msg.find("short.csv:3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("2573"), std::string::npos) << msg;
  expect_error(ErrorCode::Parse, [] { parse_criteria_csv("id,C1\n613,abc\n"); });
  expect_error(ErrorCode::Parse, [] { parse_criteria_csv("id,C1\n613,0,5\n"); });
  expect_error(ErrorCode::EmptyFile, [] { parse_criteria_csv(""); });
  expect_error(ErrorCode::EmptyFile, [] { parse_criteria_csv("\n\n"); });
  expect_error(ErrorCode::Io, [] { load_criteria(kData / "does-not-exist.csv"); });
}

TEST(Criteria, RoundTrip) {
  TempDir dir;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::vector<std::vector<double>> values(6, std::vector<double>(3));
  for (auto& r : values) {
    for (auto& x : r) x = u(rng);
  }
  const CriteriaMatrix c({"a", "b", "c", "d", "e", "f"}, {"x", "y", "z"}, values);
  write_criteria(c, dir / "c.csv");
  const auto back = load_criteria(dir / "c.csv");
  EXPECT_EQ(back.values(), c.values());
  EXPECT_EQ(format_criteria_csv(back), read_text_file(dir / "c.csv"));
}

TEST(Scenario, BundledSwitch) {
  const auto s = load_scenario(kData / "e1_switch.json");
  EXPECT_DOUBLE_EQ(s.filter.alpha, 0.3);
  EXPECT_EQ(s.horizon, 40u);
  EXPECT_EQ(s.initial_model.weights, fixtures::e1_traditional_model().weights);
  ASSERT_EQ(s.schedule.size(), 1u);
  EXPECT_EQ(s.schedule[0].step, 0u);
  ASSERT_TRUE(s.schedule[0].model);
  EXPECT_EQ(s.schedule[0].model->weights, fixtures::e1_mild_model().weights);
  EXPECT_EQ(s.criteria.values(), fixtures::e1_criteria().values());
  EXPECT_TRUE(load_scenario(kData / "e1_static.json").schedule.empty());
}

TEST(Scenario, SchemaErrors) {
  auto j = switch_json();
  j["schedule"] = json::array({{{"step", 5}, {"model", j["initial_model"]}}, {{"step", 2}, {"model", j["initial_model"]}}});
  auto msg = expect_error(ErrorCode::Schema, [&] { scenario_from_json(j); });
  EXPECT_NE(msg.find("schedule[1]"), std::string::npos) << msg;

  j = switch_json();
  j["filter"] = {{"alpha", 1.5}};
  expect_error(ErrorCode::AlphaOutOfRange, [&] { scenario_from_json(j); });

  j = switch_json();
  j["filter"] = {{"tau", 1.0}, {"dt", 0.0}};
  expect_error(ErrorCode::NonpositiveDt, [&] { scenario_from_json(j); });

  j = switch_json();
  j.erase("horizon");
  msg = expect_error(ErrorCode::Schema, [&] { scenario_from_json(j); });
  EXPECT_NE(msg.find("horizon"), std::string::npos) << msg;

  j = switch_json();
  j["colour"] = "blue";
  expect_error(ErrorCode::Schema, [&] { scenario_from_json(j); });

  j = switch_json();
  j["initial_model"]["weights"] = {0.5, 0.6, 0.0, 0.0};
  expect_error(ErrorCode::WeightSum, [&] { scenario_from_json(j); });

  j = switch_json();
  j["schedule"][0]["step"] = 41;
  expect_error(ErrorCode::Schema, [&] { scenario_from_json(j); });
}

TEST(Scenario, DampingFilter) {
  auto j = switch_json();
  j["filter"] = {{"tau", 1.0}, {"dt", 1.0}};
  const auto s = scenario_from_json(j);
  EXPECT_DOUBLE_EQ(s.filter.alpha, 0.5);
}

TEST(Scenario, CriteriaFileReference) {
  TempDir dir;
  fs::copy_file(kData / "e1.csv", dir / "e1.csv");
  auto j = switch_json();
  j["criteria"] = "e1.csv";
  write_text_file(dir / "s.json", j.dump(2));
  const auto s = load_scenario(dir / "s.json");
  EXPECT_EQ(s.criteria.values(), fixtures::e1_criteria().values());
  // in-memory parsing has no base directory to resolve against
  expect_error(ErrorCode::Schema, [&] { scenario_from_json(j); });
}

TEST(Scenario, RoundTrip) {
  TempDir dir;
  const auto s = load_scenario(kData / "e1_switch.json");
  save_scenario(s, dir / "s.json");
  const auto back = load_scenario(dir / "s.json");
  EXPECT_EQ(scenario_to_json(back), scenario_to_json(s));
  EXPECT_EQ(read_text_file(dir / "s.json"), scenario_to_json(back).dump(2) + "\n");
}

TEST(Model, RoundTripAndBroadcast) {
  TempDir dir;
  const auto m = fixtures::e1_mild_model();
  save_model(m, dir / "m.json");
  const auto back = load_model(dir / "m.json", 4);
  EXPECT_EQ(back.weights, m.weights);
  EXPECT_EQ(back.discordance_exponent, 3);
  ASSERT_EQ(back.thresholds.size(), 4u);
  EXPECT_EQ(back.thresholds[2].v, 0.3);

  const auto single = model_from_json(json::parse(R"({"weights":[0.5,0.5],"thresholds":{"q":0,"p":0.1,"v":0.3}})"), 2);
  ASSERT_EQ(single.thresholds.size(), 2u);
  EXPECT_EQ(single.thresholds[1].p, 0.1);
  expect_error(ErrorCode::ThresholdOrder, [] {
    model_from_json(json::parse(R"({"weights":[1],"thresholds":[{"q":0.2,"p":0.1,"v":0.3}]})"), 1);
  });
  expect_error(ErrorCode::LengthMismatch, [] {
    model_from_json(json::parse(R"({"weights":[0.5,0.5],"thresholds":{"q":0,"p":0.1,"v":0.3}})"), 3);
  });
}

TEST(ScoreFormat, EightDecimals) {
  EXPECT_EQ(format_score(1.881072764), "1.88107276");
  EXPECT_EQ(format_score(-0.64209385), "-0.64209385");
  EXPECT_EQ(format_score(-1e-12), "0.00000000");
  EXPECT_EQ(format_score(0.0), "0.00000000");
}

TEST(Trajectory, FirstRowAndOrdering) {
  auto s = load_scenario(kData / "e1_switch.json");
  s.filter = dynamics::make_filter(0.5);
  const auto traj = dynamics::simulate(s);
  const auto csv = format_trajectory_csv(traj);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "step,alternative_id,score,rank");
  EXPECT_NE(csv.find("\n0,613,1.88107276,1\n"), std::string::npos);
  // step 1 is ordered by rank: 2573 already leads
  EXPECT_NE(csv.find("\n1,2573,1.93499229,1\n1,613,1.88107276,2\n"), std::string::npos);
  std::size_t rows = 0;
  for (char ch : csv) rows += ch == '\n';
  EXPECT_EQ(rows, 1 + 41 * 5u);
}

TEST(Trajectory, SingleStep) {
  auto traj = dynamics::simulate(load_scenario(kData / "e1_switch.json"));
  traj.steps.resize(1);
  traj.events.clear();
  const auto csv = format_trajectory_csv(traj);
  EXPECT_EQ(csv,
            "step,alternative_id,score,rank\n"
            "0,613,1.88107276,1\n"
            "0,2573,1.74601871,2\n"
            "0,292,-0.64209385,3\n"
            "0,162,-1.42206757,4\n"
            "0,3062,-1.56293005,5\n");
}

TEST(Trajectory, RoundTrip) {
  TempDir dir;
  const auto traj = dynamics::simulate(load_scenario(kData / "e1_switch.json"));
  const auto path = dir / "traj.csv";
  write_trajectory(traj, path);
  EXPECT_TRUE(fs::exists(events_path_for(path)));
  EXPECT_EQ(events_path_for(path).filename(), "traj.csv.events.json");

  const auto back = load_trajectory(path);
  EXPECT_EQ(back.alternative_ids, traj.alternative_ids);
  ASSERT_EQ(back.steps.size(), traj.steps.size());
  for (std::size_t t = 0; t < traj.steps.size(); ++t) {
    EXPECT_EQ(back.steps[t].step, traj.steps[t].step);
    for (std::size_t i = 0; i < traj.alternative_ids.size(); ++i) {
      EXPECT_NEAR(back.steps[t].scores[i], round8(traj.steps[t].scores[i]), 1e-9);
      EXPECT_NEAR(back.steps[t].scores[i], traj.steps[t].scores[i], 5e-9);
    }
    EXPECT_EQ(ranking_order(back.steps[t].ranking), ranking_order(traj.steps[t].ranking));
  }
  ASSERT_EQ(back.events.size(), traj.events.size());
  for (std::size_t e = 0; e < traj.events.size(); ++e) {
    EXPECT_EQ(back.events[e].upper_id, traj.events[e].upper_id);
    EXPECT_EQ(back.events[e].step_before, traj.events[e].step_before);
    EXPECT_NEAR(back.events[e].crossing_time, traj.events[e].crossing_time, 1e-12);
  }

  const auto again = dir / "again.csv";
  write_trajectory(back, again);
  EXPECT_EQ(read_text_file(again), read_text_file(path));
  EXPECT_EQ(read_text_file(events_path_for(again)), read_text_file(events_path_for(path)));
}

TEST(Trajectory, ParseErrors) {
  expect_error(ErrorCode::Parse, [] { parse_trajectory_csv("step,alternative_id,score\n0,a,1\n"); });
  expect_error(ErrorCode::Parse, [] { parse_trajectory_csv("step,alternative_id,score,rank\n0,a,x,1\n"); });
  expect_error(ErrorCode::EmptyFile, [] { parse_trajectory_csv(""); });
}

TEST(Inspect, Formats) {
  TempDir dir;
  EXPECT_EQ(inspect_dataset(kData / "e1.csv").format, DatasetFormat::CriteriaCsv);
  EXPECT_EQ(inspect_dataset(kData / "e1_switch.json").format, DatasetFormat::ScenarioJson);
  save_model(fixtures::e1_mild_model(), dir / "m.json");
  EXPECT_EQ(inspect_dataset(dir / "m.json").format, DatasetFormat::ModelJson);
  write_trajectory(dynamics::simulate(load_scenario(kData / "e1_switch.json")), dir / "t.csv");
  EXPECT_EQ(inspect_dataset(dir / "t.csv").format, DatasetFormat::TrajectoryCsv);
  EXPECT_EQ(inspect_dataset(dir / "t.csv.events.json").format, DatasetFormat::EventsJson);
  write_text_file(dir / "x.txt", "hello");
  expect_error(ErrorCode::Parse, [&] { inspect_dataset(dir / "x.txt"); });
  write_text_file(dir / "bad.json", "{\"something\": 1}");
  expect_error(ErrorCode::Schema, [&] { inspect_dataset(dir / "bad.json"); });
}
