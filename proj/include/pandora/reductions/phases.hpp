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

// Pandora's box solved through repeated outside-option runs. Each phase
// picks the smallest threshold at which the solver leaves at most a fixed
// fraction of the remaining mass on the outside option, drops the covered
// scenarios, and repeats. The phase policies are then stitched: phase i is
// followed while its probing budget T_i lasts, the search stops once a
// value at most T_i is in hand, and otherwise moves on to phase i+1.

#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pandora/evaluate.hpp"
#include "pandora/instances.hpp"
#include "pandora/policy.hpp"

namespace pandora {

/// Any procedure returning a feasible policy for an outside-option instance.
using ThresholdSolver = std::function<PolicyTree(const ThresholdInstance&)>;

/// A scenario counts as covered at threshold T when the policy stops on a
/// value at most T after probing at most T.
inline bool covered_within(const ThresholdTrace& trace, const Rational& t) {
  return trace.covered && trace.opening <= t;
}

/// Largest threshold ever needed: above it the outside option is never
/// worth taking.
inline Rational top_threshold(const PBInstance& inst) {
  Rational max_value = 0;
  for (const auto& row : inst.values) {
    for (const auto& v : row) {
      if (v.is_finite()) max_value = std::max(max_value, v.number());
    }
  }
  return sum(inst.costs) + max_value + 1;
}

struct ThresholdSearchOptions {
  Rational accept_frac = Rational(1, 5);
  /// Search integers 1..ceil(T_top) only.
  bool integer_grid = false;
};

struct ThresholdSearch {
  Rational threshold;
  PolicyTree policy;
  /// Mass (renormalized over the searched instance) not covered.
  Rational failure_mass;
  /// Set when no grid point satisfies the predicate; the largest is returned.
  bool warning = false;
  std::vector<Rational> grid;
  std::size_t solver_calls = 0;
};

/// Mass of scenarios not covered within t.
inline Rational failure_mass(const ThresholdInstance& inst, const PolicyTree& policy) {
  Rational failed = 0;
  for (std::size_t j = 0; j < inst.scenarios(); ++j) {
    if (!covered_within(threshold_trace(inst, policy, j), inst.threshold)) failed += inst.base.probs[j];
  }
  return failed;
}

/// Smallest grid threshold whose failure mass is at most accept_frac,
/// searched on `inst` (already restricted and renormalized). Assumes the
/// predicate is monotone along the grid.
inline ThresholdSearch search_threshold(const PBInstance& inst, const ThresholdSolver& solver,
                                        const ThresholdSearchOptions& opt = {}) {
  ThresholdSearch out;
  Rational top = top_threshold(inst);
  std::set<Rational> grid;
  Integer top_int = ceil_of(top);
  for (Integer k = 1; k <= top_int; ++k) grid.insert(Rational(k));
  if (!opt.integer_grid) {
    grid.insert(top);
    PolicyTree at_top = solver(ThresholdInstance{inst, top});
    ++out.solver_calls;
    for (std::size_t j = 0; j < inst.scenarios(); ++j) {
      auto trace = threshold_trace(ThresholdInstance{inst, top}, at_top, j);
      if (trace.opening > 0) grid.insert(trace.opening);
    }
    for (const auto& row : inst.values) {
      for (const auto& v : row) {
        if (v.is_finite() && v.number() > 0) grid.insert(v.number());
      }
    }
  }
  out.grid.assign(grid.begin(), grid.end());

  auto run = [&](std::size_t k) {
    ThresholdInstance ti{inst, out.grid[k]};
    PolicyTree p = solver(ti);
    ++out.solver_calls;
    Rational failed = failure_mass(ti, p);
    return std::make_pair(std::move(p), failed);
  };
  std::size_t lo = 0;
  std::size_t hi = out.grid.size() - 1;
  auto [top_policy, top_failed] = run(hi);
  if (top_failed > opt.accept_frac) {
    out.warning = true;
    out.threshold = out.grid[hi];
    out.policy = std::move(top_policy);
    out.failure_mass = top_failed;
    return out;
  }
  PolicyTree best_policy = std::move(top_policy);
  Rational best_failed = top_failed;
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    auto [p, failed] = run(mid);
    if (failed <= opt.accept_frac) {
      hi = mid;
      best_policy = std::move(p);
      best_failed = failed;
    } else {
      lo = mid + 1;
    }
  }
  out.threshold = out.grid[hi];
  out.policy = std::move(best_policy);
  out.failure_mass = best_failed;
  return out;
}

/// Threshold search over a subset of the scenarios of `src`.
inline ThresholdSearch binary_search_threshold(const PBInstance& src, const std::vector<std::size_t>& remaining,
                                               const ThresholdSolver& solver, const Rational& accept_frac = Rational(1, 5)) {
  ThresholdSearchOptions opt;
  opt.accept_frac = accept_frac;
  return search_threshold(restrict_scenarios(src, remaining), solver, opt);
}

/// One phase of the reduction.
struct Phase {
  Rational threshold;
  PolicyTree policy;
  /// Source scenarios the phase ran on (after dropping low-mass ones).
  std::vector<std::size_t> scenarios;
  /// Source scenarios removed after this phase.
  std::vector<std::size_t> covered;
  /// Covered mass renormalized over the phase's instance.
  Rational covered_fraction;
  bool warning = false;
  /// Low-probability scenarios set aside during this phase.
  std::vector<std::size_t> set_aside;
};

struct PhaseResult {
  PolicyTree policy;
  std::vector<Phase> phases;
};

/// Follows phase policies in order as described at the top of the file.
/// A phase is abandoned when its next box would exceed the budget, when its
/// tree ends, or when it has no branch for an observed outcome.
inline PolicyTree stitch_phases(const PBInstance& src, const std::vector<Phase>& phases) {
  std::vector<bool> opened(src.boxes(), false);
  auto walk = [&](auto&& self, std::size_t k, const PolicyTree* node, Rational spent,
                  const std::vector<std::size_t>& open, const std::optional<Rational>& best) -> PolicyTree {
    while (true) {
      if (k >= phases.size()) {
        throw Error("phase stitching ran out of phases with scenario " + std::to_string(open.front()) +
                    " still uncovered");
      }
      const Rational& t = phases[k].threshold;
      if (best && *best <= t) return PolicyTree::stop();
      if (node != nullptr && node->is_act() && node->index() < src.boxes()) {
        std::size_t b = node->index();
        if (opened[b]) {
          node = node->child(src.label(b, open.front()));
          continue;
        }
        if (spent + src.costs[b] <= t) {
          PolicyTree out = PolicyTree::act(b);
          opened[b] = true;
          std::vector<std::string> labels;
          for (auto j : open) {
            std::string l = src.label(b, j);
            if (std::find(labels.begin(), labels.end(), l) == labels.end()) labels.push_back(l);
          }
          for (const auto& l : labels) {
            std::vector<std::size_t> part;
            for (auto j : open) {
              if (src.label(b, j) == l) part.push_back(j);
            }
            std::optional<Rational> nb = best;
            const Value& v = src.values[b][part.front()];
            if (v.is_finite() && (!nb || v.number() < *nb)) nb = v.number();
            out.with(l, self(self, k, node->child(l), spent + src.costs[b], part, nb));
          }
          opened[b] = false;
          return out;
        }
      }
      ++k;
      node = k < phases.size() ? &phases[k].policy : nullptr;
      spent = 0;
    }
  };
  std::vector<std::size_t> all;
  for (std::size_t j = 0; j < src.scenarios(); ++j) all.push_back(j);
  if (phases.empty()) throw Error("no phases to stitch");
  return walk(walk, 0, &phases[0].policy, Rational(0), all, std::nullopt);
}

/// Phases with the given threshold solver; each phase must cover at least
/// one scenario.
inline PhaseResult pb_phases(const PBInstance& src, const ThresholdSolver& solver,
                             const ThresholdSearchOptions& opt = {}) {
  require_valid(src);
  PhaseResult result;
  std::vector<std::size_t> remaining(src.scenarios());
  std::iota(remaining.begin(), remaining.end(), 0);
  while (!remaining.empty()) {
    if (result.phases.size() >= src.scenarios()) throw Error("pb_phases: phase cap reached");
    PBInstance sub = restrict_scenarios(src, remaining);
    ThresholdSearch found = search_threshold(sub, solver, opt);
    Phase phase;
    phase.threshold = found.threshold;
    phase.scenarios = remaining;
    phase.warning = found.warning;
    phase.covered_fraction = 1 - found.failure_mass;
    std::vector<std::size_t> rest;
    ThresholdInstance ti{sub, found.threshold};
    for (std::size_t k = 0; k < remaining.size(); ++k) {
      if (covered_within(threshold_trace(ti, found.policy, k), found.threshold)) {
        phase.covered.push_back(remaining[k]);
      } else {
        rest.push_back(remaining[k]);
      }
    }
    if (phase.covered.empty()) throw Error("pb_phases: a phase covered no scenario");
    phase.policy = std::move(found.policy);
    result.phases.push_back(std::move(phase));
    remaining = std::move(rest);
  }
  result.policy = stitch_phases(src, result.phases);
  return result;
}

/// Copy counts that make the given probabilities uniform: count_s is
/// proportional to p_s, scaled to the smallest integers.
struct Expansion {
  std::vector<std::size_t> counts;
  /// copy index -> position in the input list
  std::vector<std::size_t> copy_of;
  Rational copy_prob;
};

inline Expansion expand(const std::vector<Rational>& probs, std::size_t max_copies = 10000) {
  if (probs.empty()) throw Error("expand: empty input");
  Integer lcm = 1;
  for (const auto& p : probs) {
    if (p <= 0) throw Error("expand: probabilities must be positive");
    lcm = boost::multiprecision::lcm(lcm, denominator_of(p));
  }
  std::vector<Integer> scaled;
  Integer g = 0;
  for (const auto& p : probs) {
    scaled.push_back(numerator_of(p) * (lcm / denominator_of(p)));
    g = boost::multiprecision::gcd(g, scaled.back());
  }
  Integer total = 0;
  for (auto& s : scaled) {
    s /= g;
    total += s;
  }
  if (total > max_copies) {
    throw CapExceeded("expand: " + total.str() + " copies exceed cap " + std::to_string(max_copies));
  }
  Expansion out;
  for (std::size_t s = 0; s < scaled.size(); ++s) {
    out.counts.push_back(scaled[s].convert_to<std::size_t>());
    for (std::size_t c = 0; c < out.counts.back(); ++c) out.copy_of.push_back(s);
  }
  out.copy_prob = Rational(1, static_cast<long>(out.copy_of.size()));
  return out;
}

struct UniformPhaseOptions {
  Rational c = Rational(1, 10);
  Rational delta = Rational(1, 10);
  bool integer_grid = true;
  std::size_t max_copies = 10000;
};

/// Low-probability scenarios of a phase: renormalized mass at most c/|S|.
inline std::vector<std::size_t> low_mass_scenarios(const PBInstance& src, const std::vector<std::size_t>& s,
                                                   const Rational& c) {
  Rational mass = 0;
  for (auto j : s) mass += src.probs[j];
  Rational cut = c / static_cast<long>(s.size());
  std::vector<std::size_t> out;
  for (auto j : s) {
    if (src.probs[j] / mass <= cut) out.push_back(j);
  }
  return out;
}

/// Phase reduction for solvers that need uniform scenario probabilities.
/// Low-mass scenarios sit out a phase, the rest are replicated into a
/// uniform instance, and uncovered plus set-aside scenarios carry over.
inline PhaseResult pb_phases_uniform(const PBInstance& src, const ThresholdSolver& solver,
                                     const UniformPhaseOptions& opt = {}) {
  require_valid(src);
  PhaseResult result;
  std::vector<std::size_t> s(src.scenarios());
  std::iota(s.begin(), s.end(), 0);
  while (!s.empty()) {
    if (result.phases.size() >= src.scenarios()) throw Error("pb_phases_uniform: phase cap reached");
    std::vector<std::size_t> low = low_mass_scenarios(src, s, opt.c);
    std::vector<std::size_t> kept;
    for (auto j : s) {
      if (std::find(low.begin(), low.end(), j) == low.end()) kept.push_back(j);
    }
    std::vector<Rational> kept_probs;
    for (auto j : kept) kept_probs.push_back(src.probs[j]);
    Expansion ex = expand(kept_probs, opt.max_copies);
    std::vector<std::size_t> copies;
    for (auto k : ex.copy_of) copies.push_back(kept[k]);
    PBInstance uniform = restrict_scenarios(src, copies);
    for (auto& p : uniform.probs) p = ex.copy_prob;

    ThresholdSearchOptions so;
    so.accept_frac = opt.delta;
    so.integer_grid = opt.integer_grid;
    ThresholdSearch found = search_threshold(uniform, solver, so);
    Phase phase;
    phase.threshold = found.threshold;
    phase.scenarios = kept;
    phase.set_aside = low;
    phase.warning = found.warning;
    phase.covered_fraction = 1 - found.failure_mass;
    ThresholdInstance ti{uniform, found.threshold};
    std::vector<bool> covered(src.scenarios(), false);
    for (std::size_t k = 0; k < copies.size(); ++k) {
      if (covered_within(threshold_trace(ti, found.policy, k), found.threshold)) covered[copies[k]] = true;
    }
    std::vector<std::size_t> next;
    for (auto j : kept) {
      if (covered[j]) {
        phase.covered.push_back(j);
      } else {
        next.push_back(j);
      }
    }
    if (phase.covered.empty()) throw Error("pb_phases_uniform: a phase covered no scenario");
    next.insert(next.end(), low.begin(), low.end());
    std::sort(next.begin(), next.end());
    phase.policy = std::move(found.policy);
    result.phases.push_back(std::move(phase));
    s = std::move(next);
  }
  result.policy = stitch_phases(src, result.phases);
  return result;
}

}  // namespace pandora
