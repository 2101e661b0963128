// Exercises libnetflow through its C header only.

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <unistd.h>

#include "netflow/netflow.h"

namespace {

const std::string kData = NETFLOW_DATA_DIR;
const double kTraditionalScores[5] = {1.88107276, 1.74601871, -0.64209385, -1.42206757, -1.56293005};
const double kMildScores[5] = {1.88107276, 2.12396587, -1.02711495, -1.21806757, -1.75985611};
const nf_thresholds kThr = {0.0, 0.1, 0.3};

nf_criteria* e1() {
  nf_criteria* c = nullptr;
  EXPECT_EQ(nf_criteria_load_csv((kData + "/e1.csv").c_str(), &c), NF_OK) << nf_last_error();
  return c;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(CApi, Version) { EXPECT_STREQ(nf_version(), "1.0.0"); }

TEST(CApi, StatusNames) {
  EXPECT_STREQ(nf_status_name(NF_OK), "ok");
  EXPECT_STREQ(nf_status_name(NF_ERR_WEIGHT_SUM), "WeightSumError");
  EXPECT_STREQ(nf_status_name(NF_ERR_BIND), "BindError");
  EXPECT_TRUE(nf_status_is_environmental(NF_ERR_IO));
  EXPECT_TRUE(nf_status_is_environmental(NF_ERR_BIND));
  EXPECT_FALSE(nf_status_is_environmental(NF_ERR_SCHEMA));
}

TEST(CApi, Criteria) {
  nf_criteria* c = e1();
  ASSERT_NE(c, nullptr);
  EXPECT_EQ(nf_criteria_alternatives(c), 5u);
  EXPECT_EQ(nf_criteria_criteria(c), 4u);
  EXPECT_STREQ(nf_criteria_id(c, 1), "2573");
  EXPECT_STREQ(nf_criteria_label(c, 3), "C4");
  EXPECT_EQ(nf_criteria_id(c, 9), nullptr);
  double v = 0.0;
  EXPECT_EQ(nf_criteria_value(c, 0, 3, &v), NF_OK);
  EXPECT_EQ(v, 0.99189);
  EXPECT_EQ(nf_criteria_value(c, 5, 0, &v), NF_ERR_INDEX_OUT_OF_RANGE);
  nf_criteria_free(c);

  const char* ids[] = {"x", "x"};
  const char* labels[] = {"C1"};
  const double values[] = {0.1, 0.2};
  nf_criteria* dup = nullptr;
  EXPECT_EQ(nf_criteria_create(2, 1, ids, labels, values, &dup), NF_ERR_DUPLICATE_ID);
  EXPECT_EQ(dup, nullptr);
  EXPECT_NE(std::string(nf_last_error()).find("x"), std::string::npos);

  EXPECT_EQ(nf_criteria_load_csv("/nonexistent/e1.csv", &dup), NF_ERR_IO);
  EXPECT_EQ(nf_criteria_load_csv(nullptr, &dup), NF_ERR_NULL_ARGUMENT);
}

TEST(CApi, Rank) {
  nf_criteria* c = e1();
  const double w[] = {0.1, 0.4, 0.1, 0.4};
  nf_model* m = nullptr;
  ASSERT_EQ(nf_model_create(4, w, &kThr, 1, 3, &m), NF_OK) << nf_last_error();
  nf_ranking* r = nullptr;
  ASSERT_EQ(nf_rank(c, m, &r), NF_OK) << nf_last_error();
  ASSERT_EQ(nf_ranking_size(r), 5u);
  const char* expected[] = {"613", "2573", "292", "162", "3062"};
  double total = 0.0;
  for (size_t pos = 0; pos < 5; ++pos) {
    const char* id = nullptr;
    double score = 0.0;
    size_t rank = 0;
    ASSERT_EQ(nf_ranking_entry(r, pos, &id, &score, &rank), NF_OK);
    EXPECT_STREQ(id, expected[pos]);
    EXPECT_EQ(rank, pos + 1);
    EXPECT_NEAR(score, kTraditionalScores[pos], 1e-8);
    double plus = 0.0, minus = 0.0;
    ASSERT_EQ(nf_ranking_flows(r, pos, &plus, &minus), NF_OK);
    EXPECT_NEAR(plus - minus, score, 1e-12);
    total += score;
  }
  EXPECT_NEAR(total, 0.0, 1e-9);
  EXPECT_EQ(nf_ranking_entry(r, 5, nullptr, nullptr, nullptr), NF_ERR_INDEX_OUT_OF_RANGE);
  nf_ranking_free(r);
  nf_model_free(m);

  const double bad[] = {0.5, 0.6, 0.0, 0.0};
  EXPECT_EQ(nf_model_create(4, bad, &kThr, 1, 3, &m), NF_ERR_WEIGHT_SUM);
  const double neg[] = {1.2, -0.2, 0.0, 0.0};
  EXPECT_EQ(nf_model_create(4, neg, &kThr, 1, 3, &m), NF_ERR_NEGATIVE_WEIGHT);
  const nf_thresholds swapped = {0.2, 0.1, 0.3};
  EXPECT_EQ(nf_model_create(4, w, &swapped, 1, 3, &m), NF_ERR_THRESHOLD_ORDER);
  const double three[] = {0.2, 0.4, 0.4};
  ASSERT_EQ(nf_model_create(3, three, &kThr, 1, 3, &m), NF_OK);
  EXPECT_EQ(nf_rank(c, m, &r), NF_ERR_LENGTH_MISMATCH);
  nf_model_free(m);
  nf_criteria_free(c);
}

TEST(CApi, Simulate) {
  nf_scenario* s = nullptr;
  ASSERT_EQ(nf_scenario_load((kData + "/e1_switch.json").c_str(), &s), NF_OK) << nf_last_error();
  EXPECT_EQ(nf_scenario_horizon(s), 40u);
  EXPECT_EQ(nf_scenario_set_alpha(s, 1.5), NF_ERR_ALPHA_OUT_OF_RANGE);
  ASSERT_EQ(nf_scenario_set_alpha(s, 0.5), NF_OK);
  nf_trajectory* t = nullptr;
  ASSERT_EQ(nf_simulate(s, &t), NF_OK) << nf_last_error();
  EXPECT_EQ(nf_trajectory_steps(t), 41u);
  EXPECT_EQ(nf_trajectory_alternatives(t), 5u);
  EXPECT_STREQ(nf_trajectory_alternative_id(t, 0), "613");
  double v = 0.0;
  ASSERT_EQ(nf_trajectory_score(t, 1, 1, &v), NF_OK);
  EXPECT_NEAR(v, 1.93499229, 1e-8);
  ASSERT_EQ(nf_trajectory_score(t, 40, 2, &v), NF_OK);
  EXPECT_NEAR(v, kMildScores[2], 1e-6);
  EXPECT_EQ(nf_trajectory_score(t, 41, 0, &v), NF_ERR_INDEX_OUT_OF_RANGE);
  ASSERT_EQ(nf_trajectory_event_count(t), 1u);
  nf_rank_event e{};
  ASSERT_EQ(nf_trajectory_event(t, 0, &e), NF_OK);
  EXPECT_STREQ(e.upper_id, "2573");
  EXPECT_STREQ(e.lower_id, "613");
  EXPECT_EQ(e.step_before, 0u);
  EXPECT_NEAR(e.crossing_time, 0.7147, 1e-3);

  const std::string out = ::testing::TempDir() + "capi_traj_" + std::to_string(::getpid()) + ".csv";
  ASSERT_EQ(nf_trajectory_write(t, out.c_str()), NF_OK) << nf_last_error();
  EXPECT_NE(slurp(out).find("\n0,613,1.88107276,1\n"), std::string::npos);
  EXPECT_NE(slurp(out + ".events.json").find("\"upper_id\": \"2573\""), std::string::npos);
  std::remove(out.c_str());
  std::remove((out + ".events.json").c_str());
  EXPECT_EQ(nf_trajectory_write(t, "/nonexistent/dir/t.csv"), NF_ERR_IO);

  nf_trajectory_free(t);
  nf_scenario_free(s);
}

TEST(CApi, Identify) {
  nf_criteria* c = e1();
  const char* ids[] = {"3062", "162", "292", "2573", "613"};
  const double scores[] = {kTraditionalScores[4], kTraditionalScores[3], kTraditionalScores[2], kTraditionalScores[1], kTraditionalScores[0]};
  nf_identified* fit = nullptr;
  ASSERT_EQ(nf_identify_scores(c, &kThr, 1, 3, ids, scores, 5, &fit), NF_OK) << nf_last_error();
  ASSERT_EQ(nf_identified_count(fit), 4u);
  const double* w = nf_identified_weights(fit);
  const double expected[] = {0.1, 0.4, 0.1, 0.4};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(w[k], expected[k], 1e-3);
  EXPECT_LT(nf_identified_residual(fit), 1e-10);
  EXPECT_TRUE(nf_identified_ranking_reproduced(fit));
  EXPECT_FALSE(nf_identified_degenerate(fit));
  EXPECT_NE(nf_identified_note(fit), nullptr);
  nf_identified_free(fit);

  const char* order[] = {"2573", "613", "292", "162", "3062"};
  ASSERT_EQ(nf_identify_ranking(c, &kThr, 1, 3, order, 5, &fit), NF_OK) << nf_last_error();
  EXPECT_TRUE(nf_identified_ranking_reproduced(fit));
  nf_identified_free(fit);

  const char* short_order[] = {"2573", "613"};
  EXPECT_EQ(nf_identify_ranking(c, &kThr, 1, 3, short_order, 2, &fit), NF_ERR_NOT_A_PERMUTATION);
  nf_criteria_free(c);
}

TEST(CApi, NullArguments) {
  EXPECT_EQ(nf_rank(nullptr, nullptr, nullptr), NF_ERR_NULL_ARGUMENT);
  EXPECT_EQ(nf_simulate(nullptr, nullptr), NF_ERR_NULL_ARGUMENT);
  EXPECT_EQ(nf_ranking_size(nullptr), 0u);
  nf_criteria_free(nullptr);
  nf_model_free(nullptr);
  nf_server_free(nullptr);
}

TEST(CApi, Server) {
  nf_server* srv = nullptr;
  ASSERT_EQ(nf_server_create(nullptr, 0, nullptr, nullptr, &srv), NF_OK) << nf_last_error();
  ASSERT_EQ(nf_server_bind(srv, "127.0.0.1", 0), NF_OK) << nf_last_error();
  const int port = nf_server_port(srv);
  EXPECT_GT(port, 0);

  nf_server* clash = nullptr;
  ASSERT_EQ(nf_server_create(nullptr, 0, nullptr, nullptr, &clash), NF_OK);
  EXPECT_EQ(nf_server_bind(clash, "127.0.0.1", port), NF_ERR_BIND);
  nf_server_free(clash);

  std::thread runner([srv] { nf_server_run(srv); });
  for (int i = 0; i < 1000 && !nf_server_is_running(srv); ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  EXPECT_TRUE(nf_server_is_running(srv));
  nf_server_stop(srv);
  runner.join();
  EXPECT_FALSE(nf_server_is_running(srv));
  nf_server_free(srv);

  EXPECT_EQ(nf_server_create("/nonexistent/static", 0, nullptr, nullptr, &srv), NF_ERR_IO);
}
