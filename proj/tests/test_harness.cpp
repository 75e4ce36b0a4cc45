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

#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "pandora/corpus.hpp"
#include "pandora/generators.hpp"
#include "pandora/io.hpp"
#include "pandora/mixture.hpp"

namespace pandora {
namespace {

std::vector<AnyInstance> generated(std::uint64_t seed) {
  std::size_t n = 1 + seed % 5, m = 1 + seed % 6;
  CostMode mode = seed % 2 ? CostMode::Random : CostMode::Unit;
  ExplicitOptions eo;
  eo.cost_mode = mode;
  eo.infinite_percent = static_cast<unsigned>(seed * 7 % 60);
  PBInstance pb = gen_explicit(n, m, seed, eo);
  return {pb,
          ThresholdInstance{pb, 3},
          gen_msscf(n, m, seed, mode),
          gen_dt(n, m, seed, mode, seed % 3 == 0, std::max<std::size_t>(2, m)),
          gen_mixture(n, m, seed, Rational(1 + seed % 4, 4), 3)};
}

TEST(Generators, ByteIdenticalPerSeed) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto a = generated(seed);
    auto b = generated(seed);
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(dump_instance(a[k]), dump_instance(b[k])) << seed << " " << k;
  }
  EXPECT_NE(dump_instance(gen_msscf(4, 4, 1, CostMode::Random)), dump_instance(gen_msscf(4, 4, 2, CostMode::Random)));
}

TEST(Generators, AlwaysValid) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    for (const auto& inst : generated(seed)) {
      auto v = std::visit([](const auto& x) { return validate(x); }, inst);
      EXPECT_TRUE(v.empty()) << seed << " " << problem_name(inst) << ": " << (v.empty() ? "" : v.front());
    }
  }
}

TEST(Generators, UnitCostsAndSingleScenario) {
  auto pb = gen_explicit(5, 4, 3, 3, CostMode::Unit);
  for (const auto& c : pb.costs) EXPECT_EQ(c, 1);
  auto one = gen_explicit(4, 1, 9, 2, CostMode::Random);
  ASSERT_EQ(one.probs.size(), 1u);
  EXPECT_EQ(one.probs[0], 1);
}

TEST(Generators, SmallDenominatorsAndSupport) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    ExplicitOptions eo;
    eo.support = 1 + seed % 4;
    auto pb = gen_explicit(3, 1 + seed % 7, seed, eo);
    for (const auto& p : pb.probs) EXPECT_LE(denominator_of(p), 120);
    std::set<Rational> seen;
    for (const auto& row : pb.values) {
      for (const auto& v : row) {
        ASSERT_TRUE(v.is_finite());
        EXPECT_GE(v.number(), 0);
        EXPECT_LE(v.number(), 9);
        seen.insert(v.number());
      }
    }
    EXPECT_LE(seen.size(), eo.support);
  }
}

TEST(Generators, NoScenarioIsAllInfinite) {
  ExplicitOptions eo;
  eo.infinite_percent = 100;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto pb = gen_explicit(3, 5, seed, eo);
    for (std::size_t j = 0; j < pb.scenarios(); ++j) {
      bool finite = false;
      for (std::size_t i = 0; i < pb.boxes(); ++i) finite = finite || pb.values[i][j].is_finite();
      EXPECT_TRUE(finite) << seed << " " << j;
    }
  }
}

TEST(GenMixture, FullSeparationGivesDisjointSupports) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto inst = gen_mixture(4, 3, seed, 1, 3);
    for (std::size_t b = 0; b < inst.boxes(); ++b) {
      for (std::size_t i = 0; i < inst.components(); ++i) {
        for (std::size_t j = i + 1; j < inst.components(); ++j) {
          const auto& di = inst.dists[b][i];
          const auto& dj = inst.dists[b][j];
          if (tv_distance(di, dj) == 0) continue;
          EXPECT_EQ(tv_distance(di, dj), 1);
          for (const auto& [v, p] : di.atoms()) EXPECT_EQ(dj.prob(v), 0);
        }
      }
    }
  }
}

TEST(GenMixture, PassesClassification) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rational eps(1 + seed % 5, 5);
    auto inst = gen_mixture(1 + seed % 4, 1 + seed % 4, seed, eps, 2 + seed % 3);
    for (ComponentSet s = 1; s <= all_components(inst.components()); ++s) {
      EXPECT_NO_THROW(classify_boxes(inst, s)) << seed;
    }
    auto all = classify_boxes(inst, all_components(inst.components()));
    if (inst.components() > 1) {
      EXPECT_FALSE(all.informative.empty()) << seed;
    }
  }
}

TEST(GenMixture, IdenticalComponentsActLikeOne) {
  MixtureOptions mo;
  mo.all_identical = true;
  auto inst = gen_mixture(3, 4, 11, Rational(1, 2), 3, mo);
  auto cls = classify_boxes(inst, all_components(4));
  EXPECT_TRUE(cls.informative.empty());
  EXPECT_EQ(cls.noninformative.size(), 3u);
  EXPECT_EQ(mixture_to_explicit(inst).scenarios(), mixture_to_explicit([&] {
              auto single = inst;
              single.weights = {1};
              for (auto& row : single.dists) row.resize(1);
              return single;
            }()).scenarios());
}

TEST(GenMixture, Errors) {
  EXPECT_THROW(gen_mixture(2, 2, 0, 0, 2), Error);
  EXPECT_THROW(gen_mixture(2, 2, 0, Rational(3, 2), 2), Error);
  EXPECT_THROW(gen_mixture(2, 2, 0, Rational(1, 2), 1), Error);
}

TEST(RunCorpus, EmptyTaskListGivesHeaderOnly) {
  CorpusConfig cfg;
  cfg.count = 5;
  cfg.tasks.clear();
  auto r = run_corpus(cfg);
  EXPECT_TRUE(r.rows.empty());
  EXPECT_EQ(r.csv(), "instance_id,n,m,kind,name,algo_cost,oracle_cost,ratio,wall_ms,pass\n");
  EXPECT_TRUE(r.ok());
}

TEST(RunCorpus, TrivialInstanceHasUnitRatios) {
  CorpusConfig cfg;
  cfg.count = 1;
  cfg.max_n = 1;
  cfg.max_m = 1;
  auto r = run_corpus(cfg);
  EXPECT_TRUE(r.ok()) << r.summary_text();
  std::size_t algos = 0;
  for (const auto& row : r.rows) {
    if (row.kind != "algo") continue;
    ++algos;
    ASSERT_TRUE(row.ratio()) << row.name;
    EXPECT_EQ(*row.ratio(), 1) << row.name;
  }
  EXPECT_EQ(algos, corpus_algorithms().size());
}

TEST(RunCorpus, RowsOrderedAndCsvShape) {
  CorpusConfig cfg;
  cfg.count = 8;
  cfg.max_n = 3;
  cfg.max_m = 3;
  cfg.threads = 3;
  auto r = run_corpus(cfg);
  EXPECT_TRUE(r.ok()) << r.summary_text();
  ASSERT_EQ(r.rows.size(), 8 * cfg.tasks.size());
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    EXPECT_EQ(r.rows[k].instance_id, k / cfg.tasks.size());
    EXPECT_EQ(r.rows[k].name, cfg.tasks[k % cfg.tasks.size()]);
  }
  std::istringstream lines(r.csv());
  std::size_t count = 0;
  for (std::string line; std::getline(lines, line); ++count) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 9) << line;
  }
  EXPECT_EQ(count, r.rows.size() + 1);

  cfg.threads = 1;
  auto serial = run_corpus(cfg);
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    EXPECT_EQ(serial.rows[k].algo_cost, r.rows[k].algo_cost);
    EXPECT_EQ(serial.rows[k].pass, r.rows[k].pass);
  }
}

TEST(RunCorpus, DefaultCorpusHasNoExactFailures) {
  auto r = run_corpus(CorpusConfig{});
  EXPECT_EQ(r.rows.size(), 200 * corpus_default_tasks().size());
  EXPECT_TRUE(r.ok()) << r.summary_text();
}

TEST(RunCorpus, UnknownTaskRejected) {
  CorpusConfig cfg;
  cfg.tasks = {"nope"};
  EXPECT_THROW(run_corpus(cfg), Error);
}

TEST(RunCorpus, FailingCheckMakesReportFail) {
  CorpusReport r;
  CorpusRow row;
  row.pass = true;
  r.rows.push_back(row);
  EXPECT_TRUE(r.ok());
  row.pass = false;
  r.rows.push_back(row);
  EXPECT_FALSE(r.ok());
}

}  // namespace
}  // namespace pandora
