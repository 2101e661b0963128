// Randomized invariants of the static model. Seeds are fixed so failures
// reproduce; each property runs kCases instances.

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "../support/generators.hpp"
#include "../support/naive_netflow.hpp"
#include "netflow/core.hpp"

using namespace netflow;

namespace {

constexpr int kCases = 1000;

std::vector<oracle::Thresholds> oracle_thresholds(const PreferenceModel& model) {
  std::vector<oracle::Thresholds> out;
  for (const auto& t : model.thresholds) out.push_back({t.q, t.p, t.v});
  return out;
}

std::vector<std::vector<double>> rows_of(const CriteriaMatrix& c) {
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < c.alternatives(); ++i) {
    auto r = c.row(i);
    out.emplace_back(r.begin(), r.end());
  }
  return out;
}

}  // namespace

TEST(CoreProperties, ZeroSumAndBounds) {
  gen::Rng rng(101);
  for (int c = 0; c < kCases; ++c) {
    const auto inst = gen::instance(rng, gen::between(rng, 1, 8), gen::between(rng, 1, 5));
    const double m1 = static_cast<double>(inst.criteria.alternatives() - 1);
    const auto sigma = outranking_matrix(inst.criteria, inst.model);
    for (std::size_t i = 0; i < sigma.sigma.rows(); ++i) {
      for (std::size_t j = 0; j < sigma.sigma.cols(); ++j) {
        ASSERT_GE(sigma.sigma(i, j), 0.0);
        ASSERT_LE(sigma.sigma(i, j), 1.0 + 1e-12);
      }
    }
    const auto f = flows(sigma);
    const double total = std::accumulate(f.scores.begin(), f.scores.end(), 0.0);
    ASSERT_NEAR(total, 0.0, 1e-9) << "case " << c;
    for (std::size_t i = 0; i < f.scores.size(); ++i) {
      ASSERT_GE(f.phi_plus[i], 0.0);
      ASSERT_LE(f.phi_plus[i], m1 + 1e-12);
      ASSERT_GE(f.phi_minus[i], 0.0);
      ASSERT_LE(f.phi_minus[i], m1 + 1e-12);
      ASSERT_LE(std::abs(f.scores[i]), m1 + 1e-12);
    }
    const auto mu = criterion_net_flows(inst.criteria, inst.model);
    for (std::size_t i = 0; i < mu.alternatives(); ++i) {
      for (std::size_t k = 0; k < mu.criteria(); ++k) {
        ASSERT_GE(mu.mu_plus(i, k), 0.0);
        ASSERT_LE(mu.mu_plus(i, k), m1 + 1e-12);
        ASSERT_GE(mu.mu_minus(i, k), 0.0);
        ASSERT_LE(mu.mu_minus(i, k), m1 + 1e-12);
      }
    }
  }
}

TEST(CoreProperties, ConcordanceAndDiscordanceMonotone) {
  gen::Rng rng(202);
  for (int c = 0; c < kCases; ++c) {
    const auto t = gen::thresholds(rng);
    double a = gen::uniform(rng, -1.0, 1.0);
    double b = gen::uniform(rng, -1.0, 1.0);
    if (a > b) std::swap(a, b);
    ASSERT_LE(concordance(a, t, false), concordance(b, t, false));
    ASSERT_GE(discordance(a, t), discordance(b, t));
    for (double x : {a, b}) {
      ASSERT_GE(concordance(x, t, false), 0.0);
      ASSERT_LE(concordance(x, t, false), 1.0);
      ASSERT_GE(discordance(x, t), 0.0);
      ASSERT_LE(discordance(x, t), 1.0);
    }
  }
}

TEST(CoreProperties, WeightLinearity) {
  gen::Rng rng(303);
  for (int c = 0; c < kCases; ++c) {
    auto inst = gen::instance(rng, gen::between(rng, 2, 7), gen::between(rng, 1, 5));
    const auto mu = criterion_net_flows(inst.criteria, inst.model);
    for (int w = 0; w < 3; ++w) {
      inst.model.weights = gen::simplex_weights(rng, inst.criteria.criteria());
      const auto direct = static_scores(inst.criteria, inst.model).scores;
      const auto linear = weighted_scores(mu, inst.model.weights);
      for (std::size_t i = 0; i < direct.size(); ++i) ASSERT_NEAR(direct[i], linear[i], 1e-10);
    }
  }
}

TEST(CoreProperties, TranslationInvariancePerCriterion) {
  gen::Rng rng(404);
  for (int c = 0; c < kCases; ++c) {
    const auto inst = gen::instance(rng, gen::between(rng, 2, 6), gen::between(rng, 1, 4), /*grid=*/true);
    auto rows = rows_of(inst.criteria);
    const std::size_t k = gen::between(rng, 0, inst.criteria.criteria() - 1);
    const double shift = static_cast<double>(static_cast<int>(gen::between(rng, 0, 32)) - 16) / 8.0;
    for (auto& r : rows) r[k] += shift;
    const CriteriaMatrix shifted(inst.criteria.alternative_ids(), inst.criteria.criterion_labels(), rows);

    const auto a = outranking_matrix(inst.criteria, inst.model).sigma;
    const auto b = outranking_matrix(shifted, inst.model).sigma;
    ASSERT_EQ(a, b) << "case " << c;
    const auto ma = criterion_net_flows(inst.criteria, inst.model);
    const auto mb = criterion_net_flows(shifted, inst.model);
    ASSERT_EQ(ma.mu_plus, mb.mu_plus);
    ASSERT_EQ(ma.mu_minus, mb.mu_minus);
  }
}

TEST(CoreProperties, PermutationEquivariance) {
  gen::Rng rng(505);
  for (int c = 0; c < kCases; ++c) {
    const auto inst = gen::instance(rng, gen::between(rng, 1, 8), gen::between(rng, 1, 4));
    const std::size_t m = inst.criteria.alternatives();
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto rows = rows_of(inst.criteria);
    std::vector<std::vector<double>> prow;
    std::vector<std::string> pids;
    for (auto p : perm) {
      prow.push_back(rows[p]);
      pids.push_back(inst.criteria.alternative_ids()[p]);
    }
    const CriteriaMatrix permuted(pids, inst.criteria.criterion_labels(), prow);
    const auto a = static_scores(inst.criteria, inst.model).scores;
    const auto b = static_scores(permuted, inst.model).scores;
    for (std::size_t i = 0; i < m; ++i) ASSERT_NEAR(b[i], a[perm[i]], 1e-12);
  }
}

TEST(CoreProperties, BruteForceEquivalence) {
  gen::Rng rng(606);
  for (int c = 0; c < kCases; ++c) {
    const auto inst = gen::instance(rng, gen::between(rng, 1, 4), gen::between(rng, 1, 3));
    const int e = static_cast<int>(gen::between(rng, 1, 4));
    auto model = inst.model;
    model.discordance_exponent = e;
    const auto expected =
        oracle::naive_scores(rows_of(inst.criteria), model.weights, oracle_thresholds(model), e);
    const auto got = static_scores(inst.criteria, model).scores;
    for (std::size_t i = 0; i < got.size(); ++i) ASSERT_NEAR(got[i], expected[i], 1e-12) << "case " << c;
  }
}
