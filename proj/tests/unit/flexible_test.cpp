#include <cmath>

#include <gtest/gtest.h>

#include "sinrsched/error.hpp"
#include "sinrsched/flexible.hpp"
#include "sinrsched/generators.hpp"
#include "sinrsched/oracles.hpp"
#include "sinrsched/verify.hpp"
#include "support.hpp"

namespace sinrsched {
namespace {

const StepUtility kSteps{{{1.0, 0.5}, {4.0, 2.0}}};

Link utility_link(LinkId id, NodeIndex s, NodeIndex r, UtilitySpec u,
                  std::optional<double> demand = {}, std::optional<double> power = {}) {
  return {id, s, r, {}, std::move(u), demand, power};
}

Instance far_pair(std::optional<double> demand = {}) {
  auto metric = MetricSpace::euclidean(1, {{0.0}, {1.0}, {1000.0}, {1001.0}});
  return Instance(metric, 2.0, 0.1, kUnbounded,
                  {utility_link(0, 0, 1, kSteps, demand), utility_link(1, 2, 3, kSteps, demand)});
}

Instance single(UtilitySpec u, std::optional<double> demand = {},
                std::optional<double> power = {}) {
  auto metric = MetricSpace::euclidean(1, {{0.0}, {1.0}});
  return Instance(metric, 2.0, 0.1, kUnbounded, {utility_link(0, 0, 1, std::move(u), demand, power)});
}

TEST(CeilLog2, SmallValues) {
  EXPECT_EQ(ceil_log2(1), 0u);
  EXPECT_EQ(ceil_log2(2), 1u);
  EXPECT_EQ(ceil_log2(3), 2u);
  EXPECT_EQ(ceil_log2(8), 3u);
  EXPECT_EQ(ceil_log2(9), 4u);
}

TEST(GammaCap, PerMode) {
  const Instance inst = single(kSteps, {}, 0.3);
  EXPECT_EQ(gamma_cap(inst, 0, PowerMode::Unlimited), kUnbounded);
  EXPECT_NEAR(gamma_cap(inst, 0, PowerMode::Fixed, {{0, 0.3}}), 3.0, 1e-12);
}

TEST(SolveFlexible, ShannonLinkAtFixedPower) {
  const Instance inst = single(ShannonUtility{1.0, 1.0}, {}, 0.3);
  const FlexibleRun run = solve_flexible(inst, PowerMode::Fixed);
  EXPECT_NEAR(run.B, 2.0, 1e-12);
  ASSERT_EQ(run.levels.size(), 1u);
  EXPECT_NEAR(run.levels[0].thresholds.at(0), 3.0, 1e-9);
  EXPECT_EQ(run.best().selected, std::vector<LinkId>{0});
  EXPECT_NEAR(run.best().objective, 2.0, 1e-9);
}

TEST(SolveFlexible, FarLinksEarnTwiceTheTop) {
  const Instance inst = far_pair();
  const FlexibleRun run = solve_flexible(inst, PowerMode::Unlimited);
  EXPECT_DOUBLE_EQ(run.B, 2.0);
  EXPECT_EQ(run.levels.size(), 2u);
  EXPECT_DOUBLE_EQ(run.best().objective, 4.0);
  EXPECT_EQ(run.best_index, 0u);
}

TEST(SolveFlexible, LevelTargetsHalve) {
  const Instance inst = far_pair();
  const FlexibleRun run = solve_flexible(inst, PowerMode::Unlimited);
  EXPECT_DOUBLE_EQ(run.levels[0].target, 2.0);
  EXPECT_DOUBLE_EQ(run.levels[1].target, 1.0);
}

TEST(RoundedStepUtility, FloorsToMultiplesOfOneOverTwoN) {
  const StepUtility r = rounded_step_utility(kSteps, 4.0, 1, kUnbounded);
  // floor(2 u / 4): 0 below SINR 4, 1 from SINR 4 on; values are k / 2.
  EXPECT_EQ(evaluate(r, 2.0), 0.0);
  EXPECT_EQ(evaluate(r, 4.0), 0.5);
  EXPECT_EQ(evaluate(r, 100.0), 0.5);
}

TEST(RoundedStepUtility, CapsAtOne) {
  const StepUtility r = rounded_step_utility(kSteps, 0.1, 2, kUnbounded);
  EXPECT_EQ(evaluate(r, 1.0), 1.0);
}

TEST(SolveLatency, DemandEqualToTopTakesOneSlot) {
  const Instance inst = single(kSteps, 2.0);
  const LatencyResult res = solve_latency(inst, PowerMode::Unlimited);
  EXPECT_EQ(res.schedule.slots.size(), 1u);
  EXPECT_TRUE(verify_schedule(inst, res.schedule).ok);
}

TEST(SolveLatency, TripleDemandTakesThreeSlots) {
  const Instance inst = single(kSteps, 6.0);
  const LatencyResult res = solve_latency(inst, PowerMode::Unlimited);
  EXPECT_EQ(res.schedule.slots.size(), 3u);
  EXPECT_TRUE(verify_schedule(inst, res.schedule).ok);
}

TEST(SolveLatency, FarLinksShareASlot) {
  const Instance inst = far_pair(2.0);
  const LatencyResult res = solve_latency(inst, PowerMode::Unlimited);
  EXPECT_EQ(res.schedule.slots.size(), 1u);
}

TEST(SolveLatency, ZeroDemandsGiveEmptySchedule) {
  const Instance inst = far_pair(0.0);
  const LatencyResult res = solve_latency(inst, PowerMode::Unlimited);
  EXPECT_TRUE(res.schedule.slots.empty());
  EXPECT_EQ(res.dropped, (std::vector<LinkId>{0, 1}));
}

TEST(SolveLatency, UnreachableDemandIsAnError) {
  // Fixed power below the noise floor: the link never earns anything.
  const Instance inst = single(kSteps, 1.0, 0.01);
  EXPECT_THROW(solve_latency(inst, PowerMode::Fixed), Unbounded);
}

// Properties over seeded random instances with utilities.

class FlexibleProperty : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(FlexibleProperty, EveryLevelIsFeasibleAndEarnsItsTarget) {
  const Instance inst = testing::random_instance(GetParam(), 12, UtilityFamily::Step);
  const FlexibleRun run = solve_flexible(inst, PowerMode::Unlimited);
  double best = 0.0;
  for (const FlexibleLevel& level : run.levels) {
    const Solution& sol = level.solution;
    EXPECT_TRUE(is_feasible(inst, sol.selected, level.thresholds, sol.powers));
    for (LinkId id : sol.selected) {
      const double u = evaluate(*inst.link(id).utility, credited_sinr(sol.sinr.at(id),
                                                                      level.thresholds.at(id)));
      EXPECT_GE(u, level.target * (1.0 - 1e-12));
    }
    best = std::max(best, sol.objective);
  }
  EXPECT_EQ(run.best().objective, best);
  EXPECT_GE(run.best().objective, run.B * (1.0 - 1e-12));
}

TEST_P(FlexibleProperty, LatencyScheduleMeetsDemands) {
  GenConfig cfg;
  cfg.n = 1 + GetParam() % 8;
  cfg.utility = UtilityFamily::Step;
  cfg.demand_min = 0.5;
  cfg.demand_max = 5.0;
  cfg.seed = GetParam();
  const Instance inst = gen_random(cfg);
  const LatencyResult res = solve_latency(inst, PowerMode::Unlimited);
  EXPECT_TRUE(verify_schedule(inst, res.schedule).ok);
  for (bool p : res.scheme2.progress) EXPECT_TRUE(p);
  EXPECT_LE(res.schedule.slots.size(), res.scheme2.slots.size());
}

INSTANTIATE_TEST_SUITE_P(Seeds, FlexibleProperty, ::testing::Range<std::uint64_t>(0, 40));

}  // namespace
}  // namespace sinrsched
