#include <cmath>

#include <gtest/gtest.h>

#include "sinrsched/generators.hpp"
#include "sinrsched/json_io.hpp"
#include "sinrsched/threshold_capacity.hpp"
#include "support.hpp"

namespace sinrsched {
namespace {

Instance weight_example() { return gen_line({{0, 1, 2}, {10, 11, 2}}); }

Ranking rank_all(const Instance& inst) {
  const auto ids = inst.link_ids();
  return Ranking(sensitivity_order(inst, ids));
}

TEST(WeightParams, TauFromAlpha) {
  EXPECT_DOUBLE_EQ(WeightParams::for_alpha(2.0).tau, 1.0 / 56.0);
  EXPECT_DOUBLE_EQ(WeightParams::for_alpha(2.0).secondary_tau, 0.25);
  for (double alpha : {1.0, 2.0, 2.5, 4.0, 6.0}) {
    const double tau = WeightParams::for_alpha(alpha).tau;
    EXPECT_GT(tau, 0.0);
    EXPECT_LE(tau, 0.125);
  }
}

TEST(Weight, SelfIsZero) {
  const Instance inst = weight_example();
  const auto th = link_thresholds(inst, inst.link_ids());
  EXPECT_EQ(weight(inst, 0, 0, th, rank_all(inst)), 0.0);
}

TEST(Weight, ZeroTowardsLessSensitive) {
  const Instance inst = weight_example();
  const auto th = link_thresholds(inst, inst.link_ids());
  // Equal sensitivity: id 0 ranks first, so the weight from 0 onto 1 is 0.
  EXPECT_EQ(weight(inst, 0, 1, th, rank_all(inst)), 0.0);
}

TEST(Weight, ThreeTermFormula) {
  const Instance inst = weight_example();
  const auto th = link_thresholds(inst, inst.link_ids());
  const double expected = 4.0 / 9801.0 + 2.0 / 121.0 + 2.0 / 81.0;
  EXPECT_NEAR(weight(inst, 1, 0, th, rank_all(inst)), expected, 1e-15);
  EXPECT_NEAR(expected, 0.0416284, 1e-7);
}

TEST(Weight, CoincidentNodesSaturate) {
  auto metric = MetricSpace::euclidean(1, {{0.0}, {1.0}, {1.0}, {3.0}});
  const Instance inst(metric, 2.0, 0.1, kUnbounded,
                      {{0, 0, 1, 1.0, {}, {}, {}}, {1, 2, 3, 1.0, {}, {}, {}}});
  const auto th = link_thresholds(inst, inst.link_ids());
  // Link 1 (length 2) is more sensitive; its sender sits on link 0's receiver.
  EXPECT_EQ(weight(inst, 0, 1, th, rank_all(inst)), 1.0);
}

TEST(Affectance, SilentSenderIsHarmless) {
  const Instance inst = gen_line({{0, 1, 1}, {4, 5, 1}});
  const auto th = link_thresholds(inst, inst.link_ids());
  EXPECT_EQ(affectance(inst, 1, 0, th, {{0, 1.0}, {1, 0.0}}), 0.0);
}

TEST(Affectance, HandEvaluation) {
  const Instance inst = gen_line({{0, 1, 1}, {4, 5, 1}});
  const auto th = link_thresholds(inst, inst.link_ids());
  EXPECT_NEAR(affectance(inst, 1, 0, th, {{0, 1.0}, {1, 1.0}}), 10.0 / 81.0, 1e-15);
}

TEST(Affectance, SaturatesWhenNoiseWins) {
  const Instance inst = gen_line({{0, 1, 1}, {4, 5, 1}});
  const auto th = link_thresholds(inst, inst.link_ids());
  EXPECT_EQ(affectance(inst, 1, 0, th, {{0, 0.1}, {1, 1.0}}), 1.0);
}

TEST(SolveUnlimited, SingleLinkGetsTwiceItsThreshold) {
  const Instance inst = gen_line({{0, 1, 2}});
  const Solution sol = solve_unlimited(inst, inst.link_ids());
  ASSERT_EQ(sol.selected, std::vector<LinkId>{0});
  EXPECT_NEAR(sol.powers.at(0), 0.4, 1e-15);
  EXPECT_NEAR(sol.sinr.at(0), 4.0, 1e-12);
}

TEST(SolveUnlimited, EmptyInput) {
  const Instance inst = gen_line({{0, 1, 2}});
  const Solution sol = solve_unlimited(inst, std::vector<LinkId>{});
  EXPECT_TRUE(sol.selected.empty());
  EXPECT_EQ(sol.objective, 0.0);
}

TEST(SolveUnlimited, FarApartLinksBothSelected) {
  const Instance inst = gen_line({{0, 1, 1}, {1000, 1001, 1}});
  const auto th = link_thresholds(inst, inst.link_ids());
  const Ranking ranking = rank_all(inst);
  const double tau = WeightParams::for_alpha(2.0).tau;
  EXPECT_LT(weight(inst, 1, 0, th, ranking), tau);
  const Solution sol = solve_unlimited(inst, inst.link_ids());
  ASSERT_EQ(sol.selected, (std::vector<LinkId>{0, 1}));
  for (LinkId id : sol.selected) {
    EXPECT_GE(sinr(inst, sol.selected, sol.powers, id), inst.threshold(id));
  }
}

TEST(SolveFixed, SingleFeasibleLink) {
  const Instance inst = gen_line({{0, 1, 1}});
  const Solution sol = solve_fixed(inst, inst.link_ids(), link_thresholds(inst, inst.link_ids()),
                                   {{0, 1.0}});
  EXPECT_EQ(sol.selected, std::vector<LinkId>{0});
}

TEST(SolveFixed, NoiseInfeasibleLinkDropped) {
  const Instance inst = gen_line({{0, 1, 1}});
  const Solution sol = solve_fixed(inst, inst.link_ids(), link_thresholds(inst, inst.link_ids()),
                                   {{0, 0.05}});
  EXPECT_TRUE(sol.selected.empty());
}

TEST(SolveFixed, CloseLinksKeepFirstScanned) {
  const Instance inst = gen_line({{0, 1, 1}, {1.5, 0.5, 1}});
  const auto ids = inst.link_ids();
  const auto th = link_thresholds(inst, ids);
  const PowerAssignment p{{0, 1.0}, {1, 1.0}};
  EXPECT_GT(affectance(inst, 0, 1, th, p), 0.5);
  EXPECT_GT(affectance(inst, 1, 0, th, p), 0.5);
  const auto order = sensitivity_order(inst, ids);
  const Solution sol = solve_fixed(inst, ids, th, p);
  EXPECT_EQ(sol.selected, std::vector<LinkId>{order.back()});
}

TEST(SolveFixed, ReportsNonMonotonePowers) {
  const Instance inst = gen_line({{0, 1, 1}, {10, 12, 1}});
  const auto ids = inst.link_ids();
  // Link 1 is more sensitive but gets less power.
  const Solution sol = solve_fixed(inst, ids, link_thresholds(inst, ids), {{0, 2.0}, {1, 1.0}});
  EXPECT_FALSE(sol.warnings.empty());
}

TEST(SolveLimited, CheapDistantLinksAllSelectedUnderCap) {
  LineOptions opts;
  opts.p_max = 10.0;
  const Instance inst = gen_line({{0, 1, 1}, {1000, 1001, 1}, {2000, 2001, 1}}, opts);
  const Solution sol = solve_limited(inst, inst.link_ids());
  EXPECT_EQ(sol.selected.size(), 3u);
  for (const auto& [id, p] : sol.powers) EXPECT_LE(p, 10.0);
}

TEST(SolveLimited, NoiseInfeasibleEverywhere) {
  LineOptions opts;
  opts.p_max = 0.05;
  const Instance inst = gen_line({{0, 1, 1}, {100, 101, 1}}, opts);
  EXPECT_TRUE(solve_limited(inst, inst.link_ids()).selected.empty());
}

TEST(SolveLimited, UnlimitedCapMatchesUnlimited) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Instance inst = testing::random_instance(seed);
    const auto ids = inst.link_ids();
    Solution a = solve_limited(inst, ids);
    const Solution b = solve_unlimited(inst, ids);
    EXPECT_EQ(a.selected, b.selected);
    EXPECT_EQ(a.powers, b.powers);
  }
}

// Properties over seeded random instances.

class CapacityProperty : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(CapacityProperty, UnlimitedOutputIsFeasible) {
  const Instance inst = testing::random_instance(GetParam(), 50);
  const Solution sol = solve_unlimited(inst, inst.link_ids());
  for (LinkId id : sol.selected) {
    EXPECT_TRUE(meets_threshold(sinr(inst, sol.selected, sol.powers, id), inst.threshold(id)));
  }
}

TEST_P(CapacityProperty, LimitedRespectsCapAndThresholds) {
  const Instance base = testing::random_instance(GetParam(), 50);
  const CounterRng rng(GetParam());
  const double p_max = std::exp(rng.uniform(std::log(1e-5), 0.0, {77}));
  const Instance inst(base.metric(), base.alpha(), base.noise(), p_max, base.links());
  const Solution sol = solve_limited(inst, inst.link_ids());
  for (LinkId id : sol.selected) {
    EXPECT_LE(sol.powers.at(id), p_max * (1.0 + 1e-12));
    EXPECT_TRUE(meets_threshold(sinr(inst, sol.selected, sol.powers, id), inst.threshold(id)));
  }
}

TEST_P(CapacityProperty, GreedyMaximalityReplay) {
  const Instance inst = testing::random_instance(GetParam(), 50);
  const auto ids = inst.link_ids();
  const auto th = link_thresholds(inst, ids);
  const Solution sol = solve_unlimited(inst, ids);
  const Ranking ranking = rank_all(inst);
  const double tau = WeightParams::for_alpha(inst.alpha()).tau;
  std::vector<LinkId> accepted;
  for (const TraceEntry& e : sol.trace) {
    ASSERT_EQ(e.phase, "select");
    double sum = 0.0;
    for (LinkId l : accepted) sum += weight(inst, l, e.id, th, ranking);
    EXPECT_DOUBLE_EQ(sum, e.score);
    EXPECT_EQ(e.accepted, sum <= tau);
    if (e.accepted) accepted.push_back(e.id);
  }
  std::sort(accepted.begin(), accepted.end());
  EXPECT_EQ(accepted, sol.selected);
}

TEST_P(CapacityProperty, FixedFilterReplay) {
  const Instance inst = testing::random_instance(GetParam(), 30);
  const auto ids = inst.link_ids();
  const auto th = link_thresholds(inst, ids);
  const PowerAssignment p = testing::uniform_powers(inst, 1.0);
  const Solution sol = solve_fixed(inst, ids, th, p);
  std::vector<LinkId> tentative;
  for (const TraceEntry& e : sol.trace) {
    if (e.phase == "tentative" && e.accepted) tentative.push_back(e.id);
  }
  std::vector<LinkId> expected;
  for (LinkId cand : tentative) {
    double incoming = 0.0;
    for (LinkId l : tentative) incoming += affectance(inst, l, cand, th, p);
    if (incoming < 1.0) expected.push_back(cand);
  }
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(expected, sol.selected);
  for (LinkId id : sol.selected) {
    EXPECT_TRUE(meets_threshold(sinr(inst, sol.selected, p, id), th.at(id)));
  }
}

TEST_P(CapacityProperty, Deterministic) {
  const Instance inst = testing::random_instance(GetParam(), 30);
  const auto ids = inst.link_ids();
  EXPECT_EQ(to_json(solve_unlimited(inst, ids)).dump(), to_json(solve_unlimited(inst, ids)).dump());
  EXPECT_EQ(to_json(solve_limited(inst, ids)).dump(), to_json(solve_limited(inst, ids)).dump());
}

INSTANTIATE_TEST_SUITE_P(Seeds, CapacityProperty, ::testing::Range<std::uint64_t>(0, 60));

}  // namespace
}  // namespace sinrsched
