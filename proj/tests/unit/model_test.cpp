#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "sinrsched/error.hpp"
#include "sinrsched/generators.hpp"
#include "sinrsched/model.hpp"
#include "support.hpp"

namespace sinrsched {
namespace {

Instance two_links_on_line(double noise = 0.1) {
  LineOptions opts;
  opts.noise = noise;
  return gen_line({{0, 1, 1}, {4, 5, 1}}, opts);
}

TEST(MetricSpace, EuclideanUnitSegment) {
  auto m = MetricSpace::euclidean(1, {{0.0}, {1.0}});
  EXPECT_DOUBLE_EQ(m.distance(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(m.distance(1, 1), 0.0);
}

TEST(MetricSpace, MatrixReadBack) {
  auto m = MetricSpace::matrix({{0, 2}, {2, 0}});
  EXPECT_DOUBLE_EQ(m.distance(0, 1), 2.0);
  EXPECT_DOUBLE_EQ(m.distance(1, 0), 2.0);
}

TEST(MetricSpace, RejectsBrokenMatrices) {
  EXPECT_THROW(MetricSpace::matrix({{0, 1}, {2, 0}}), InvalidInput);
  EXPECT_THROW(MetricSpace::matrix({{1, 1}, {1, 0}}), InvalidInput);
  EXPECT_THROW(MetricSpace::matrix({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}), InvalidInput);
  EXPECT_NO_THROW(MetricSpace::matrix({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}, true));
  EXPECT_THROW(MetricSpace::euclidean(2, {{0.0, 0.0}, {1.0}}), InvalidInput);
}

TEST(MetricSpace, IndexOutOfRange) {
  auto m = MetricSpace::euclidean(1, {{0.0}, {1.0}});
  EXPECT_THROW(m.distance(0, 2), InvalidInput);
}

TEST(Instance, RejectsInvalidPhysics) {
  auto metric = MetricSpace::euclidean(1, {{0.0}, {1.0}});
  std::vector<Link> one{{0, 0, 1, 1.0, {}, {}, {}}};
  EXPECT_THROW(Instance(metric, 2.0, 0.0, kUnbounded, one), InvalidInput);
  EXPECT_THROW(Instance(metric, 0.0, 0.1, kUnbounded, one), InvalidInput);
  EXPECT_THROW(Instance(metric, 2.0, 0.1, kUnbounded, {{0, 0, 0, 1.0, {}, {}, {}}}),
               InvalidInput);
  EXPECT_THROW(Instance(metric, 2.0, 0.1, kUnbounded, {{0, 0, 1, 0.5, {}, {}, {}}}),
               InvalidInput);
  InstanceOptions sub;
  sub.allow_sub_unit_threshold = true;
  EXPECT_NO_THROW(
      Instance(metric, 2.0, 0.1, kUnbounded, {{0, 0, 1, 0.5, {}, {}, {}}}, sub));
  EXPECT_THROW(Instance(metric, 2.0, 0.1, kUnbounded, {{0, 0, 1, 1.0, {}, -1.0, {}}}),
               InvalidInput);
}

TEST(Instance, ZeroLengthLinkRejected) {
  auto metric = MetricSpace::euclidean(1, {{0.0}, {0.0}});
  EXPECT_THROW(Instance(metric, 2.0, 0.1, kUnbounded, {{0, 0, 1, 1.0, {}, {}, {}}}),
               InvalidInput);
}

TEST(Sinr, SingleLinkIsSignalOverNoise) {
  const Instance inst = gen_line({{0, 1, 1}});
  const std::vector<LinkId> active{0};
  EXPECT_DOUBLE_EQ(sinr(inst, active, {{0, 1.0}}, 0), 10.0);
}

TEST(Sinr, TwoLinksOnLine) {
  const Instance inst = two_links_on_line();
  const std::vector<LinkId> active{0, 1};
  EXPECT_NEAR(sinr(inst, active, {{0, 1.0}, {1, 1.0}}, 0), 90.0 / 19.0, 1e-12);
}

TEST(Sinr, ZeroPowerInterfererVanishes) {
  const Instance inst = two_links_on_line();
  const std::vector<LinkId> active{0, 1};
  EXPECT_DOUBLE_EQ(sinr(inst, active, {{0, 1.0}, {1, 0.0}}, 0), 10.0);
}

TEST(Sinr, Errors) {
  const Instance inst = two_links_on_line();
  const std::vector<LinkId> only_first{0};
  EXPECT_THROW(sinr(inst, only_first, {{0, 1.0}}, 1), InvalidInput);
  const std::vector<LinkId> both{0, 1};
  EXPECT_THROW(sinr(inst, both, {{0, 1.0}}, 0), InvalidInput);
}

TEST(SensitivityOrder, StrictOrder) {
  // beta d^alpha = 8 for link 0 and 2 for link 1.
  const Instance inst = gen_line({{0, 2, 2}, {10, 11, 2}});
  const std::vector<LinkId> ids{1, 0};
  EXPECT_EQ(sensitivity_order(inst, ids), (std::vector<LinkId>{0, 1}));
}

TEST(SensitivityOrder, TieBrokenByAscendingId) {
  auto metric = MetricSpace::euclidean(1, {{0.0}, {1.0}, {5.0}, {6.0}});
  const Instance inst(metric, 2.0, 0.1, kUnbounded,
                      {{7, 2, 3, 1.0, {}, {}, {}}, {3, 0, 1, 1.0, {}, {}, {}}});
  const std::vector<LinkId> ids{7, 3};
  EXPECT_EQ(sensitivity_order(inst, ids).front(), 3);
}

TEST(SensitivityOrder, ProductComparison) {
  // beta = (1, 2), d^alpha = (4, 1): sensitivities (4, 2).
  const Instance inst = gen_line({{0, 2, 1}, {10, 11, 2}});
  const std::vector<LinkId> ids{0, 1};
  EXPECT_EQ(sensitivity_order(inst, ids).front(), 0);
}

TEST(SensitivityOrder, MissingThreshold) {
  auto metric = MetricSpace::euclidean(1, {{0.0}, {1.0}});
  const Instance inst(metric, 2.0, 0.1, kUnbounded, {{0, 0, 1, {}, {}, {}, {}}});
  const std::vector<LinkId> ids{0};
  EXPECT_THROW(sensitivity_order(inst, ids), InvalidInput);
}

// Properties over seeded random instances.

class SinrProperty : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(SinrProperty, HomogeneousInPowersAndNoise) {
  const Instance inst = testing::random_instance(GetParam());
  const auto ids = inst.link_ids();
  const CounterRng rng(GetParam());
  PowerAssignment p;
  for (LinkId id : ids) p[id] = rng.uniform(0.01, 10.0, {static_cast<std::uint64_t>(id)});
  const double lambda = rng.uniform(0.1, 100.0, {999});
  const Instance scaled(inst.metric(), inst.alpha(), inst.noise() * lambda, inst.p_max(),
                        inst.links(), inst.options());
  PowerAssignment q;
  for (const auto& [id, x] : p) q[id] = x * lambda;
  for (LinkId id : ids) {
    const double a = sinr(inst, ids, p, id);
    const double b = sinr(scaled, ids, q, id);
    EXPECT_NEAR(a, b, 1e-12 * std::max(1.0, a));
  }
}

TEST_P(SinrProperty, ZeroPowerLinkChangesNothing) {
  const Instance inst = testing::random_instance(GetParam());
  auto ids = inst.link_ids();
  if (ids.size() < 2) GTEST_SKIP();
  PowerAssignment p = testing::uniform_powers(inst, 1.0);
  const LinkId silent = ids.back();
  p[silent] = 0.0;
  std::vector<LinkId> without(ids.begin(), ids.end() - 1);
  for (LinkId id : without) {
    EXPECT_DOUBLE_EQ(sinr(inst, ids, p, id), sinr(inst, without, p, id));
  }
}

TEST_P(SinrProperty, RemovingInterfererNeverHurts) {
  const Instance inst = testing::random_instance(GetParam());
  auto ids = inst.link_ids();
  if (ids.size() < 2) GTEST_SKIP();
  const PowerAssignment p = testing::uniform_powers(inst, 1.0);
  std::vector<LinkId> fewer(ids.begin() + 1, ids.end());
  for (LinkId id : fewer) {
    EXPECT_GE(sinr(inst, fewer, p, id), sinr(inst, ids, p, id));
  }
}

TEST_P(SinrProperty, OrderInvariantUnderPermutation) {
  const Instance inst = testing::random_instance(GetParam());
  auto ids = inst.link_ids();
  const auto base = sensitivity_order(inst, ids);
  std::reverse(ids.begin(), ids.end());
  EXPECT_EQ(sensitivity_order(inst, ids), base);
  std::rotate(ids.begin(), ids.begin() + ids.size() / 2, ids.end());
  EXPECT_EQ(sensitivity_order(inst, ids), base);
  for (std::size_t k = 1; k < base.size(); ++k) {
    const double a = inst.threshold(base[k - 1]) * inst.own_loss(base[k - 1]);
    const double b = inst.threshold(base[k]) * inst.own_loss(base[k]);
    EXPECT_TRUE(a > b || (a == b && base[k - 1] < base[k]));
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, SinrProperty, ::testing::Range<std::uint64_t>(0, 50));

}  // namespace
}  // namespace sinrsched
