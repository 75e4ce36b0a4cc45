// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "mixture_oracle.hpp"
#include "pandora/generators.hpp"
#include "pandora/mixture.hpp"
#include "pandora/oracles.hpp"
#include "pandora/simulate.hpp"

namespace pandora {
namespace {

using testing::Q;

Distribution two_point(const char* p0, long v0 = 0, long v1 = 1) {
  return Distribution({{Rational(v0), Q(p0)}, {Rational(v1), 1 - Q(p0)}});
}

/// m=2; box 0 separates the components completely, box 1 is shared.
MixtureInstance disjoint_pair() {
  MixtureInstance inst;
  inst.costs = {1, 1};
  inst.weights = {Q("1/2"), Q("1/2")};
  inst.epsilon = 1;
  inst.dists = {{Distribution::point(0), Distribution::point(5)}, {two_point("1/2"), two_point("1/2")}};
  return inst;
}

TEST(TvDistance, Examples) {
  EXPECT_EQ(tv_distance(two_point("1/2"), two_point("1/2")), 0);
  EXPECT_EQ(tv_distance(Distribution::point(0), Distribution::point(1)), 1);
  EXPECT_EQ(tv_distance(two_point("0.5"), two_point("0.8")), Q("0.3"));
  EXPECT_THROW(tv_distance(Distribution({{Rational(0), Q("1/2")}}), two_point("1/2")), Error);
}

TEST(ClassifyBoxes, Examples) {
  auto inst = disjoint_pair();
  auto one = classify_boxes(inst, 0b01);
  EXPECT_TRUE(one.informative.empty());
  EXPECT_EQ(one.noninformative.size(), 2u);
  auto both = classify_boxes(inst, 0b11);
  EXPECT_EQ(both.informative, (std::vector<std::size_t>{0}));
  EXPECT_EQ(both.noninformative, (std::vector<std::size_t>{1}));

  inst.epsilon = Q("1/2");
  inst.dists[1][1] = two_point("3/4");
  EXPECT_THROW(classify_boxes(inst, 0b11), Error);
}

TEST(ClassifyBoxes, StableWhenDroppingDuplicateComponent) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto inst = gen_mixture(4, 2, seed, Q("1/2"), 3);
    // Component 2 copies component 0, so it adds no separating pair of its own.
    inst.weights = {Q("1/3"), Q("1/3"), Q("1/3")};
    for (auto& row : inst.dists) row.push_back(row[0]);
    auto full = classify_boxes(inst, 0b111);
    auto dropped = classify_boxes(inst, 0b011);
    EXPECT_EQ(full.informative, dropped.informative) << seed;
    EXPECT_EQ(full.noninformative, dropped.noninformative) << seed;
  }
}

TEST(BestNoninformative, Examples) {
  MixtureInstance inst;
  inst.costs = {1, 1};
  inst.weights = {1};
  inst.dists = {{two_point("1/2", 0, 9)}, {two_point("9/10", 0, 9)}};
  EXPECT_EQ(best_noninformative(inst, 1, 1, 0), 1u);
  EXPECT_EQ(best_noninformative(inst, 1, 1, 1), 0u);
  EXPECT_THROW(best_noninformative(inst, 1, 1, 2), Error);

  inst.costs = {1, 10};
  EXPECT_EQ(best_noninformative(inst, 1, 1, 0), 0u);
}

TEST(Evidence, Updates) {
  MixtureInstance inst;
  inst.costs = {1};
  inst.weights = {Q("1/2"), Q("1/2")};
  inst.epsilon = Q("1/2");
  inst.dists = {{Distribution({{Rational(0), Q("3/4")}, {Rational(1), Q("1/4")}, {Rational(2), Q("0")}}),
                 Distribution({{Rational(0), Q("1/4")}, {Rational(1), Q("1/4")}, {Rational(2), Q("1/2")}})}};
  Evidence e(2);
  // Value 0 favors component 0.
  e = update_evidence(e, 0, 0, inst, 0b11);
  EXPECT_EQ(e.z[e.at(0, 1)], 1);
  EXPECT_EQ(e.t[e.at(0, 1)], 1);
  EXPECT_EQ(e.z[e.at(1, 0)], 0);
  EXPECT_EQ(e.t[e.at(1, 0)], 1);
  // Value 1 is equally likely: the lower index gets the credit.
  e = update_evidence(e, 0, 1, inst, 0b11);
  EXPECT_EQ(e.z[e.at(0, 1)], 2);
  EXPECT_EQ(e.z[e.at(1, 0)], 0);
  for (int k = 0; k < 5; ++k) e = update_evidence(e, 0, 2, inst, 0b11);
  EXPECT_EQ(e.t[e.at(0, 1)], 7);
  EXPECT_EQ(e.z[e.at(1, 0)], 5);
  // A single-component S has no pairs.
  Evidence lone = update_evidence(Evidence(2), 0, 0, inst, 0b01);
  EXPECT_EQ(lone, Evidence(2));
}

TEST(Eliminate, Examples) {
  auto inst = disjoint_pair();
  Evidence e(2);
  EXPECT_EQ(eliminate(e, 0b11, inst, Q("1/10")), 0b11u);
  EXPECT_EQ(eliminate(e, 0b10, inst, Q("1/10")), 0b10u);
  // ln 10 < 3: three openings of the separating box decide.
  for (int k = 0; k < 3; ++k) e = update_evidence(e, 0, 5, inst, 0b11);
  EXPECT_EQ(eliminate(e, 0b11, inst, Q("1/10")), 0b10u);
}

TEST(Eliminate, WrongEliminationIsRare) {
  // Components ((1+eps)/2, (1-eps)/2) and the reverse on {0, 1}; draws from 0.
  const Rational eps = Q("1/2");
  const Rational delta = Q("1/10");
  MixtureInstance inst;
  inst.costs = {1};
  inst.weights = {Q("1/2"), Q("1/2")};
  inst.epsilon = eps;
  inst.dists = {{Distribution({{Rational(0), (1 + eps) / 2}, {Rational(1), (1 - eps) / 2}}),
                 Distribution({{Rational(0), (1 - eps) / 2}, {Rational(1), (1 + eps) / 2}})}};
  auto k = static_cast<int>(std::ceil(elimination_threshold(eps, delta)));
  EXPECT_EQ(k, 10);
  int kept = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    std::mt19937_64 rng(seed);
    Evidence e(2);
    for (int i = 0; i < k; ++i) {
      Rational v = unit_draw(rng) < to_double((1 + eps) / 2) ? 0 : 1;
      e = update_evidence(e, 0, v, inst, 0b11);
    }
    ComponentSet s = eliminate(e, 0b11, inst, delta);
    ASSERT_NE(s, 0u);
    if (s == 0b01) ++kept;
  }
  EXPECT_GE(kept, 900);
}

TEST(DPSolve, SingleComponentMatchesGreedyFormula) {
  MixtureInstance inst;
  inst.costs = {1, 2};
  inst.weights = {1};
  inst.dists = {{two_point("1/2", 0, 9)}, {two_point("9/10", 0, 9)}};
  Rational t = 5;
  // Order by q/c: box 0 (1/2) before box 1 (9/20).
  Rational inner = std::min(t, 2 + Q("1/10") * t);
  Rational expected = std::min(t, 1 + Q("1/2") * inner);
  auto r = dp_solve(inst, t, Q("1/2"));
  EXPECT_EQ(r.cost, expected);
  EXPECT_EQ(r.cost, eval_mixture_threshold(inst, t, r.policy.to_tree()));
}

TEST(DPSolve, CheapThresholdQuitsAtRoot) {
  auto inst = disjoint_pair();
  auto r = dp_solve(inst, 1, Q("1/2"));
  EXPECT_EQ(r.cost, 1);
  EXPECT_TRUE(r.policy.next({}).outside);
  EXPECT_EQ(r.policy.to_tree().kind(), PolicyTree::Kind::Outside);
}

TEST(DPSolve, WithinBetaOfOptimumOnDisjointMixture) {
  MixtureInstance inst;
  inst.costs = {1, 1, 1};
  inst.weights = {Q("1/3"), Q("2/3")};
  inst.epsilon = 1;
  inst.dists = {{Distribution::point(0), Distribution::point(1)},
                {two_point("1/2", 0, 4), two_point("1/2", 0, 4)},
                {two_point("1/4", 0, 4), two_point("1/4", 0, 4)}};
  for (long t : {1L, 2L, 3L, 5L}) {
    auto r = dp_solve(inst, t, Q("1/2"));
    Rational opt = testing::mixture_threshold_optimum(inst, t);
    EXPECT_GE(r.cost, opt);
    EXPECT_LE(r.cost, Q("3/2") * opt) << t;
  }
}

TEST(DPSolve, CostTwoWaysAndMemo) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    auto inst = gen_mixture(1 + seed % 4, 1 + seed % 2, seed, Q("1/2"), 2);
    Rational t = Rational(static_cast<long>(1 + seed % 5));
    auto r = dp_solve(inst, t, Q("1/2"));
    EXPECT_EQ(r.cost, eval_mixture_threshold(inst, t, r.policy.to_tree())) << seed;
    DPOptions no_memo;
    no_memo.use_memo = false;
    auto r2 = dp_solve(inst, t, Q("1/2"), no_memo);
    EXPECT_EQ(r.cost, r2.cost) << seed;
    EXPECT_EQ(r.policy.to_tree(), r2.policy.to_tree()) << seed;
    EXPECT_LE(r.cost, t);
  }
}

TEST(DPSolve, CostPerUnitThresholdNonincreasing) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto inst = gen_mixture(3, 2, seed, Q("1/2"), 2);
    std::optional<Rational> prev;
    for (long t = 1; t <= 12; ++t) {
      Rational ratio = dp_solve(inst, t, Q("1/2")).cost / t;
      if (prev) EXPECT_LE(ratio, *prev) << seed << " T=" << t;
      prev = ratio;
    }
  }
}

TEST(DPSolve, OptimumMonotoneInBoxCost) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto inst = gen_mixture(3, 2, seed, Q("1/2"), 2);
    Rational base = testing::mixture_threshold_optimum(inst, 4);
    for (std::size_t b = 0; b < inst.boxes(); ++b) {
      auto dearer = inst;
      dearer.costs[b] += 1;
      EXPECT_GE(testing::mixture_threshold_optimum(dearer, 4), base) << seed << " box " << b;
    }
  }
}

// Choices weigh components by their prior weights rather than by the
// posterior, so a dearer box can steer the DP to a better policy.
TEST(DPSolve, DearerBoxCanLowerCost) {
  auto inst = gen_mixture(3, 2, 8, Q("1/2"), 2);
  auto dearer = inst;
  dearer.costs[2] += 1;
  Rational base = dp_solve(inst, 4, Q("1/2")).cost;
  Rational raised = dp_solve(dearer, 4, Q("1/2")).cost;
  EXPECT_EQ(base, Q("5287/1848"));
  EXPECT_EQ(raised, Q("431/154"));
  EXPECT_LT(raised, base);
  EXPECT_LE(base, Q("3/2") * testing::mixture_threshold_optimum(inst, 4));
}

TEST(DPSolve, Errors) {
  auto inst = disjoint_pair();
  EXPECT_THROW(dp_solve(inst, 0, Q("1/2")), Error);
  EXPECT_THROW(dp_solve(inst, 1, 0), Error);
  DPOptions tiny;
  tiny.max_states = 1;
  EXPECT_THROW(dp_solve(inst, 4, Q("1/2"), tiny), CapExceeded);
}

TEST(MixturePB, SingleComponentWithinTwo) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto inst = gen_mixture(2, 1, seed, 1, 2, MixtureOptions{seed % 2 ? CostMode::Random : CostMode::Unit, false});
    auto r = mixture_pb_solve(inst, Q("1/2"));
    Rational opt = opt_pb(mixture_to_explicit(inst)).cost;
    EXPECT_GE(r.cost, opt);
    EXPECT_LE(r.cost, 2 * opt) << seed;
  }
}

TEST(MixturePB, TwoComponentsAboveOptimum) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto inst = gen_mixture(3, 2, seed, Q("1/2"), 2);
    auto r = mixture_pb_solve(inst, Q("1/2"));
    PBInstance ex = mixture_to_explicit(inst);
    EXPECT_GE(r.cost, opt_pb(ex).cost) << seed;
    EXPECT_TRUE(policy_violations(r.policy, outcome_table(ex)).empty());
  }
}

TEST(MixturePB, IdenticalComponentsBehaveLikeOne) {
  auto inst = gen_mixture(3, 2, 7, 1, 2, MixtureOptions{CostMode::Unit, true});
  auto single = inst;
  single.weights = {1};
  for (auto& row : single.dists) row.resize(1);
  for (long t : {1L, 3L, 6L}) {
    EXPECT_EQ(dp_solve(inst, t, Q("1/2")).cost, dp_solve(single, t, Q("1/2")).cost);
  }
  EXPECT_EQ(mixture_pb_solve(inst, Q("1/2")).cost, mixture_pb_solve(single, Q("1/2")).cost);
}

}  // namespace
}  // namespace pandora
