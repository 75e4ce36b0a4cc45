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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fixtures.hpp"
#include "pandora/generators.hpp"
#include "pandora/oracles.hpp"
#include "pandora/solvers.hpp"

namespace pandora {
namespace {

using testing::F;
using testing::Q;

TEST(GreedyMsscf, Examples) {
  auto inst = testing::two_singletons(Q("9/10"));
  auto universal = inst;
  universal.costs.push_back(1);
  universal.member.push_back({true, true});
  universal.feedback.push_back({"", ""});
  auto pu = greedy_msscf(universal);
  EXPECT_EQ(pu.index(), 2u);
  EXPECT_EQ(eval_msscf(universal, pu), 1);

  auto p = greedy_msscf(inst);
  EXPECT_EQ(p.index(), 0u);
}

TEST(GreedyMsscf, MostlyWithinFourOfOptimal) {
  int within = 0;
  const int total = 60;
  for (std::uint64_t seed = 0; seed < total; ++seed) {
    auto inst = gen_msscf(4, 4, seed, seed % 2 ? CostMode::Random : CostMode::Unit);
    Rational g = eval_msscf(inst, greedy_msscf(inst));
    Rational o = opt_msscf(inst).cost;
    EXPECT_GE(g, o);
    if (g <= 4 * o) {
      ++within;
    } else {
      std::cout << "greedy_msscf ratio above 4 on seed " << seed << ": " << to_double(g / o) << "\n";
    }
  }
  EXPECT_GE(within * 100, total * 95);
}

TEST(GreedyDT, Examples) {
  DTInstance one;
  one.costs = {1};
  one.probs = {1};
  one.outcomes = {{"a"}};
  EXPECT_EQ(greedy_dt(one), PolicyTree::identified(0));

  DTInstance pair;
  pair.costs = {3, 1, 2};
  pair.probs = {Q("1/2"), Q("1/2")};
  pair.outcomes = {{"a", "b"}, {"a", "b"}, {"x", "y"}};
  EXPECT_EQ(greedy_dt(pair).index(), 1u);
}

TEST(GreedyDT, DepthAndRatio) {
  int within = 0;
  const int total = 60;
  const double bound = 1 + std::log(4.0);
  for (std::uint64_t seed = 0; seed < total; ++seed) {
    auto inst = gen_dt(4, 4, seed, seed % 2 ? CostMode::Random : CostMode::Unit);
    auto p = greedy_dt(inst);
    EXPECT_LE(p.depth(), inst.scenarios() - 1);
    Rational g = eval_dt(inst, p);
    Rational o = opt_dt(inst).cost;
    EXPECT_GE(g, o);
    if (o == 0 || to_double(g / o) <= bound) {
      ++within;
    } else {
      std::cout << "greedy_dt ratio above 1+ln 4 on seed " << seed << ": " << to_double(g / o) << "\n";
    }
  }
  EXPECT_GE(within * 100, total * 95);
}

Rational best_fixed_order(const MSSCfInstance& inst) {
  std::vector<std::size_t> order(inst.elements());
  std::iota(order.begin(), order.end(), 0);
  std::optional<Rational> best;
  do {
    Rational c = eval_msscf(inst, order_policy(inst, order));
    if (!best || c < *best) best = c;
  } while (std::next_permutation(order.begin(), order.end()));
  return *best;
}

TEST(NonadaptiveOrder, Examples) {
  auto inst = testing::two_singletons(Q("9/10"));
  EXPECT_EQ(nonadaptive_mssc_order(inst), (std::vector<std::size_t>{0, 1}));
  inst.costs.push_back(1);
  inst.member.push_back({true, true});
  inst.feedback.push_back({"", ""});
  EXPECT_EQ(nonadaptive_mssc_order(inst).front(), 2u);
}

TEST(NonadaptiveOrder, WithinFourOfBestOrderAndBlindToFeedback) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    std::size_t n = 1 + seed % 6;
    auto inst = gen_msscf(n, 1 + seed % 5, seed, seed % 2 ? CostMode::Random : CostMode::Unit);
    auto order = nonadaptive_mssc_order(inst);
    Rational c = eval_msscf(inst, order_policy(inst, order));
    Rational best = best_fixed_order(inst);
    EXPECT_GE(c, best);
    EXPECT_LE(c, 4 * best) << seed;

    auto relabeled = inst;
    for (auto& row : relabeled.feedback) {
      for (auto& f : row) f = f == "a" ? "zz" : "a";
    }
    EXPECT_EQ(nonadaptive_mssc_order(relabeled), order);
  }
}

TEST(GreedyThreshold, FeasibleAndAboveOptimum) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    ExplicitOptions eo;
    eo.cost_mode = seed % 2 ? CostMode::Random : CostMode::Unit;
    eo.infinite_percent = seed % 3 == 0 ? 20 : 0;
    auto pb = gen_explicit(1 + seed % 4, 1 + seed % 5, seed, eo);
    ThresholdInstance ti{pb, Rational(static_cast<long>(1 + seed % 6))};
    auto p = greedy_threshold(ti);
    EXPECT_GE(eval_threshold(ti, p), opt_threshold(ti).cost) << seed;
    EXPECT_TRUE(policy_violations(p, outcome_table(pb)).empty()) << seed;
  }
}

TEST(Pipelines, SingleScenarioWithinTwo) {
  auto src = testing::single_box(2, 3);
  src.costs.push_back(1);
  src.values.push_back({F(7)});
  Rational opt = opt_pb(src).cost;
  for (const auto& r : {pipeline_pb_via_udt(src), pipeline_pb_direct(src)}) {
    EXPECT_GE(r.cost, opt);
    EXPECT_LE(r.cost, 2 * opt);
  }
}

TEST(Pipelines, AllZeroValuesDirectWithinTwo) {
  auto src = testing::two_by_two();
  src.values = {{F(0), F(0)}, {F(0), F(0)}};
  auto r = pipeline_pb_direct(src);
  EXPECT_LE(r.cost, 2 * opt_pb(src).cost);
}

TEST(Pipelines, FeasibleOnSmallCorpus) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    ExplicitOptions eo;
    eo.cost_mode = seed % 2 ? CostMode::Random : CostMode::Unit;
    eo.infinite_percent = seed % 3 == 0 ? 20 : 0;
    auto src = gen_explicit(1 + seed % 3, 1 + seed % 4, seed, eo);
    Rational opt = opt_pb(src).cost;
    for (const auto& r : {pipeline_pb_via_udt(src), pipeline_pb_direct(src)}) {
      EXPECT_EQ(r.cost, eval_pb(src, r.policy));
      EXPECT_GE(r.cost, opt) << seed;
      EXPECT_TRUE(policy_violations(r.policy, outcome_table(src)).empty()) << seed;
      EXPECT_FALSE(r.stages.empty());
    }
  }
}

}  // namespace
}  // namespace pandora
