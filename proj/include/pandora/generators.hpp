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

// Seeded random instance generators. All draws go through mt19937_64 and
// rejection sampling, so output is identical across platforms.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pandora/instances.hpp"

namespace pandora {

enum class CostMode { Unit, Random };

inline CostMode parse_cost_mode(const std::string& s) {
  if (s == "unit") return CostMode::Unit;
  if (s == "random") return CostMode::Random;
  throw Error("unknown cost mode '" + s + "'");
}

/// Uniform integer in [lo, hi].
inline std::uint64_t draw_int(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
  std::uint64_t span = hi - lo + 1;
  if (span == 0) return rng();
  std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % span);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return lo + x % span;
}

namespace detail {

/// Random positive integer weights normalized to sum to 1. Denominators
/// stay at most 120.
inline std::vector<Rational> random_probs(std::mt19937_64& rng, std::size_t m, bool uniform) {
  std::vector<Rational> out;
  if (uniform) {
    out.assign(m, Rational(1, static_cast<long>(m)));
    return out;
  }
  std::uint64_t top = std::max<std::uint64_t>(1, 120 / m);
  std::vector<std::uint64_t> w;
  std::uint64_t total = 0;
  for (std::size_t j = 0; j < m; ++j) {
    w.push_back(draw_int(rng, 1, top));
    total += w.back();
  }
  for (auto x : w) out.push_back(Rational(static_cast<long>(x), static_cast<long>(total)));
  return out;
}

inline std::vector<Rational> random_costs(std::mt19937_64& rng, std::size_t n, CostMode mode) {
  std::vector<Rational> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(mode == CostMode::Unit ? Rational(1) : Rational(static_cast<long>(draw_int(rng, 1, 6)), 2));
  }
  return out;
}

/// `k` distinct integers from {0,...,9}.
inline std::vector<long> random_support(std::mt19937_64& rng, std::size_t k) {
  std::vector<long> pool = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  if (k == 0 || k > pool.size()) throw Error("value support size must be in [1,10]");
  for (std::size_t i = 0; i < k; ++i) std::swap(pool[i], pool[draw_int(rng, i, pool.size() - 1)]);
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace detail

struct ExplicitOptions {
  std::size_t support = 3;
  CostMode cost_mode = CostMode::Unit;
  bool uniform = false;
  /// Chance (in percent) that a cell holds a tagged infinite value.
  unsigned infinite_percent = 0;
};

inline PBInstance gen_explicit(std::size_t n, std::size_t m, std::uint64_t seed, const ExplicitOptions& opt) {
  if (n == 0 || m == 0) throw Error("gen_explicit: n and m must be positive");
  std::mt19937_64 rng(seed);
  PBInstance inst;
  inst.costs = detail::random_costs(rng, n, opt.cost_mode);
  inst.probs = detail::random_probs(rng, m, opt.uniform);
  auto support = detail::random_support(rng, opt.support);
  inst.values.assign(n, std::vector<Value>(m));
  for (std::size_t j = 0; j < m; ++j) {
    bool any_finite = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (opt.infinite_percent > 0 && draw_int(rng, 0, 99) < opt.infinite_percent) {
        inst.values[i][j] = Value::infinite("t" + std::to_string(draw_int(rng, 0, 1)));
      } else {
        inst.values[i][j] = Value::finite(support[draw_int(rng, 0, support.size() - 1)]);
        any_finite = true;
      }
    }
    if (!any_finite) {
      inst.values[draw_int(rng, 0, n - 1)][j] = Value::finite(support[draw_int(rng, 0, support.size() - 1)]);
    }
  }
  return inst;
}

inline PBInstance gen_explicit(std::size_t n, std::size_t m, std::uint64_t seed, std::size_t support,
                               CostMode mode) {
  ExplicitOptions opt;
  opt.support = support;
  opt.cost_mode = mode;
  return gen_explicit(n, m, seed, opt);
}

/// Random coverable set cover instance; each membership holds with
/// probability 1/3 and feedback labels come from {a, b}.
inline MSSCfInstance gen_msscf(std::size_t n, std::size_t m, std::uint64_t seed, CostMode mode,
                               bool uniform = false, std::size_t feedback_labels = 2) {
  if (n == 0 || m == 0) throw Error("gen_msscf: n and m must be positive");
  std::mt19937_64 rng(seed);
  MSSCfInstance inst;
  inst.costs = detail::random_costs(rng, n, mode);
  inst.probs = detail::random_probs(rng, m, uniform);
  inst.member.assign(n, std::vector<bool>(m, false));
  inst.feedback.assign(n, std::vector<std::string>(m));
  for (std::size_t j = 0; j < m; ++j) {
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) {
      inst.member[i][j] = draw_int(rng, 0, 2) == 0;
      any = any || inst.member[i][j];
      inst.feedback[i][j] = std::string(1, static_cast<char>('a' + draw_int(rng, 0, feedback_labels - 1)));
    }
    if (!any) inst.member[draw_int(rng, 0, n - 1)][j] = true;
  }
  return inst;
}

/// Random identifiable decision tree instance. Redraws until every pair of
/// scenarios is split by some test.
inline DTInstance gen_dt(std::size_t n, std::size_t m, std::uint64_t seed, CostMode mode, bool uniform = false,
                         std::size_t outcomes = 2) {
  if (n == 0 || m == 0) throw Error("gen_dt: n and m must be positive");
  std::mt19937_64 rng(seed);
  DTInstance inst;
  inst.costs = detail::random_costs(rng, n, mode);
  inst.probs = detail::random_probs(rng, m, uniform);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    inst.outcomes.assign(n, std::vector<std::string>(m));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        inst.outcomes[i][j] = std::string(1, static_cast<char>('a' + draw_int(rng, 0, outcomes - 1)));
      }
    }
    if (validate(inst).empty()) return inst;
  }
  throw Error("gen_dt: could not draw an identifiable instance");
}

struct MixtureOptions {
  CostMode cost_mode = CostMode::Unit;
  /// Every box gets the same marginal under every component.
  bool all_identical = false;
};

/// Random separable mixture. Each box is either non-informative (one shared
/// marginal) or informative: component k gets (1-eps)*B + eps*point(x_k) for
/// a shared base B, so two components differ by exactly eps in TV when
/// their points differ and coincide otherwise.
inline MixtureInstance gen_mixture(std::size_t n, std::size_t m, std::uint64_t seed, const Rational& epsilon,
                                   std::size_t support, const MixtureOptions& opt = {}) {
  if (n == 0 || m == 0) throw Error("gen_mixture: n and m must be positive");
  if (epsilon <= 0 || epsilon > 1) throw Error("gen_mixture: epsilon must lie in (0,1]");
  if (m >= 2 && !opt.all_identical && support < 2) {
    throw Error("gen_mixture: informative boxes need a support of at least 2 values");
  }
  std::mt19937_64 rng(seed);
  MixtureInstance inst;
  inst.epsilon = epsilon;
  inst.costs = detail::random_costs(rng, n, opt.cost_mode);
  inst.weights = detail::random_probs(rng, m, false);
  std::size_t forced = m >= 2 && !opt.all_identical ? draw_int(rng, 0, n - 1) : n;
  for (std::size_t i = 0; i < n; ++i) {
    auto pts = detail::random_support(rng, support);
    std::vector<std::uint64_t> w;
    std::uint64_t total = 0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      w.push_back(draw_int(rng, 1, 4));
      total += w.back();
    }
    std::vector<std::pair<Rational, Rational>> base;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      base.emplace_back(pts[k], Rational(static_cast<long>(w[k]), static_cast<long>(total)));
    }
    bool informative = i == forced || (m >= 2 && !opt.all_identical && draw_int(rng, 0, 1) == 0);
    std::vector<Distribution> row;
    if (!informative) {
      row.assign(m, Distribution(base));
    } else {
      std::vector<std::size_t> point(m);
      for (auto& p : point) p = draw_int(rng, 0, pts.size() - 1);
      if (std::all_of(point.begin(), point.end(), [&](std::size_t p) { return p == point[0]; })) {
        point[1] = (point[0] + 1 + draw_int(rng, 0, pts.size() - 2)) % pts.size();
      }
      for (std::size_t k = 0; k < m; ++k) {
        std::vector<std::pair<Rational, Rational>> atoms;
        for (const auto& [v, p] : base) {
          if (epsilon < 1) atoms.emplace_back(v, (1 - epsilon) * p);
        }
        atoms.emplace_back(pts[point[k]], epsilon);
        row.emplace_back(std::move(atoms));
      }
    }
    inst.dists.push_back(std::move(row));
  }
  require_valid(inst);
  return inst;
}

}  // namespace pandora
