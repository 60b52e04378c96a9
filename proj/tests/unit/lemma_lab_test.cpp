#include <gtest/gtest.h>

#include "sinrsched/error.hpp"
#include "sinrsched/generators.hpp"
#include "sinrsched/json_io.hpp"
#include "sinrsched/lemma_lab.hpp"
#include "sinrsched/oracles.hpp"
#include "sinrsched/threshold_capacity.hpp"
#include "support.hpp"

namespace sinrsched {
namespace {

Instance facing_pair(double beta) {
  LineOptions opts;
  opts.noise = 1e-6;
  return gen_line({{0, 1, beta}, {3, 2, beta}}, opts);
}

PowerAssignment witness(const Instance& inst, std::span<const LinkId> set) {
  const auto cert = check_admissible(inst, set, kUnbounded);
  EXPECT_TRUE(cert.feasible);
  return cert.powers;
}

TEST(Strengthen, SingletonIsOnePart) {
  const Instance inst = gen_line({{0, 1, 1}});
  const std::vector<LinkId> set{0};
  const Decomposition d = strengthen(inst, set, {{0, 1.0}}, 3.0);
  ASSERT_EQ(d.parts.size(), 1u);
  EXPECT_TRUE(d.certified[0]);
  EXPECT_EQ(d.part_bound(), 36u);
}

TEST(Strengthen, PairSeparatesAtFactorTwo) {
  const Instance inst = facing_pair(1);
  const auto ids = inst.link_ids();
  const Decomposition d = strengthen(inst, ids, witness(inst, ids), 2.0);
  EXPECT_EQ(d.parts.size(), 2u);
  for (bool ok : d.certified) EXPECT_TRUE(ok);
}

TEST(Strengthen, FactorOneKeepsAFeasibleSetWithinBound) {
  const Instance inst = facing_pair(1);
  const auto ids = inst.link_ids();
  const Decomposition d = strengthen(inst, ids, witness(inst, ids), 1.0);
  EXPECT_LE(d.parts.size(), d.part_bound());
  EXPECT_EQ(d.part_bound(), 4u);
}

TEST(Strengthen, Errors) {
  const Instance inst = facing_pair(1);
  const auto ids = inst.link_ids();
  const PowerAssignment p = witness(inst, ids);
  EXPECT_THROW(strengthen(inst, ids, p, 0.5), InvalidInput);
  EXPECT_THROW(strengthen(inst, ids, {{0, 1.0}}, 2.0), InvalidInput);
  EXPECT_THROW(strengthen(inst, ids, {{0, 1.0}, {1, 1e-9}}, 2.0), InvalidInput);
}

TEST(ReverseDual, SingletonSurvives) {
  const Instance inst = gen_line({{0, 1, 2}});
  const std::vector<LinkId> set{0};
  const ReversalResult r = reverse_dual(inst, set, {{0, 1.0}});
  EXPECT_EQ(r.subset, set);
  EXPECT_TRUE(r.certified);
}

TEST(ReverseDual, SymmetricPairKeepsALink) {
  const Instance inst = facing_pair(1);
  const auto ids = inst.link_ids();
  const ReversalResult r = reverse_dual(inst, ids, witness(inst, ids));
  EXPECT_FALSE(r.subset.empty());
  EXPECT_TRUE(r.certified);
  const Instance rev = reversed_instance(inst, r.subset, link_thresholds(inst, r.subset));
  EXPECT_TRUE(is_feasible(rev, r.subset, link_thresholds(rev, r.subset), r.reversed_powers));
}

TEST(ReversedInstance, SwapsEndpoints) {
  const Instance inst = gen_line({{0, 1, 1}, {5, 7, 1}});
  const std::vector<LinkId> both{0, 1};
  const Instance rev = reversed_instance(inst, both, {{0, 1.0}, {1, 1.0}});
  EXPECT_EQ(rev.link(1).sender, inst.link(1).receiver);
  EXPECT_EQ(rev.link(1).receiver, inst.link(1).sender);
  EXPECT_DOUBLE_EQ(rev.own_loss(1), inst.own_loss(1));
}

TEST(GreedyAdversary, SingleReversedLink) {
  const Instance inst = gen_greedy_adversary(1);
  EXPECT_EQ(inst.links().size(), 2u);
  EXPECT_EQ(sensitivity_order(inst, inst.link_ids()).back(), 0);
}

TEST(GreedyAdversary, GreedyKeepsOnlyTheForwardLink) {
  const Instance inst = gen_greedy_adversary(4);
  const auto ids = inst.link_ids();
  EXPECT_EQ(solve_unlimited(inst, ids).selected, std::vector<LinkId>{0});
  const std::vector<LinkId> reversed{1, 2, 3, 4};
  EXPECT_TRUE(check_admissible(inst, reversed, kUnbounded).feasible);
}

TEST(GreedyAdversary, RejectsZero) { EXPECT_THROW(gen_greedy_adversary(0), InvalidInput); }

TEST(Aloha, RejectsOddOrZeroK) {
  AlohaConfig cfg;
  cfg.k = 3;
  EXPECT_THROW(simulate_aloha(cfg), InvalidInput);
  cfg.k = 0;
  EXPECT_THROW(simulate_aloha(cfg), InvalidInput);
  cfg.k = 4;
  cfg.trials = 0;
  EXPECT_THROW(simulate_aloha(cfg), InvalidInput);
}

TEST(Aloha, EveryoneAlwaysTransmittingNeverSucceeds) {
  AlohaConfig cfg;
  cfg.k = 2;
  cfg.probs = {1.0};
  cfg.trials = 3;
  cfg.max_rounds = 20;
  const AlohaReport rep = simulate_aloha(cfg);
  ASSERT_EQ(rep.rounds.size(), 3u);
  for (const auto& r : rep.rounds) EXPECT_FALSE(r);
  ASSERT_EQ(rep.first_trial_trace.size(), 20u);
  for (const AlohaRound& round : rep.first_trial_trace) {
    EXPECT_EQ(round.transmitted.size(), 4u);
    EXPECT_TRUE(round.succeeded.empty());
  }
}

TEST(Aloha, DeterministicPerSeed) {
  AlohaConfig cfg;
  cfg.k = 8;
  cfg.trials = 20;
  cfg.seed = 11;
  EXPECT_EQ(to_json(simulate_aloha(cfg)).dump(), to_json(simulate_aloha(cfg)).dump());
  const AlohaReport rep = simulate_aloha(cfg);
  EXPECT_TRUE(rep.monotone);
  EXPECT_TRUE(rep.dropouts_silent);
  for (const auto& r : rep.rounds) {
    ASSERT_TRUE(r);
    EXPECT_GE(*r, 1u);
  }
}

// Properties over admissible random sets.

class ConstructionProperty : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(ConstructionProperty, StrengthenPartsAreCertifiedAndCover) {
  const Instance inst = testing::random_instance(GetParam(), 15);
  const auto ids = inst.link_ids();
  const Solution sol = solve_unlimited(inst, ids);
  for (double c : {1.0, 2.0, 3.0}) {
    const Decomposition d = strengthen(inst, sol.selected, sol.powers, c);
    EXPECT_LE(d.parts.size(), d.part_bound());
    std::vector<LinkId> all;
    for (std::size_t k = 0; k < d.parts.size(); ++k) {
      EXPECT_TRUE(d.certified[k]);
      all.insert(all.end(), d.parts[k].begin(), d.parts[k].end());
    }
    std::sort(all.begin(), all.end());
    EXPECT_EQ(all, sol.selected);
  }
}

TEST_P(ConstructionProperty, ReversalKeepsAConstantFraction) {
  const Instance inst = testing::random_instance(GetParam(), 15);
  const Solution sol = solve_unlimited(inst, inst.link_ids());
  const ReversalResult r = reverse_dual(inst, sol.selected, sol.powers);
  EXPECT_TRUE(r.certified);
  EXPECT_GE(72 * r.subset.size(), sol.selected.size());
}

INSTANTIATE_TEST_SUITE_P(Seeds, ConstructionProperty, ::testing::Range<std::uint64_t>(0, 40));

}  // namespace
}  // namespace sinrsched
