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

// Exact optimal adaptive policies by memoized search over information
// states. Scenario and action sets are 64-bit masks, so both counts are
// limited to 63; the default caps are much lower because the search is
// exponential.
//
// Values are stored unnormalized: V(S) = sum over j in S of p_j * cost_j.

#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pandora/evaluate.hpp"
#include "pandora/instances.hpp"
#include "pandora/policy.hpp"

namespace pandora {

using Mask = std::uint64_t;

struct OracleOptions {
  std::size_t max_actions = 12;
  std::size_t max_scenarios = 12;
  bool use_memo = true;
};

struct OracleResult {
  PolicyTree policy;
  Rational cost;
  std::size_t states = 0;
};

namespace detail {

inline void check_caps(std::size_t actions, std::size_t scenarios, const OracleOptions& opt) {
  if (opt.max_actions > 63 || opt.max_scenarios > 63) throw Error("oracle caps cannot exceed 63");
  if (actions > opt.max_actions) {
    throw CapExceeded("exact oracle: " + std::to_string(actions) + " actions exceed cap " +
                      std::to_string(opt.max_actions));
  }
  if (scenarios > opt.max_scenarios) {
    throw CapExceeded("exact oracle: " + std::to_string(scenarios) + " scenarios exceed cap " +
                      std::to_string(opt.max_scenarios));
  }
}

inline Mask full_mask(std::size_t m) { return m == 64 ? ~Mask{0} : (Mask{1} << m) - 1; }

/// Splits a scenario set by the outcome of one action, in label-id order.
inline std::vector<std::pair<int, Mask>> split(const OutcomeTable& table, std::size_t action, Mask s) {
  std::vector<Mask> parts(table.distinct(action), 0);
  for (Mask rest = s; rest; rest &= rest - 1) {
    auto j = static_cast<std::size_t>(std::countr_zero(rest));
    parts[table.id(action, j)] |= Mask{1} << j;
  }
  std::vector<std::pair<int, Mask>> out;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (parts[k]) out.emplace_back(static_cast<int>(k), parts[k]);
  }
  return out;
}

inline Rational mass(const std::vector<Rational>& probs, Mask s) {
  Rational total = 0;
  for (Mask rest = s; rest; rest &= rest - 1) total += probs[std::countr_zero(rest)];
  return total;
}

/// Shared search for the three problems whose state is just the set of
/// consistent, not yet finished scenarios. `finished(action, label)` says
/// whether that outcome ends the search for the scenarios that show it.
/// Only actions that finish someone or split the set are considered: any
/// other action leaves the state unchanged, so it cannot help, and this is
/// also why the opened set need not be part of the key.
class SetSearch {
 public:
  struct Entry {
    Rational value;
    int action = -1;  // -1: terminal (outside option, or identified)
  };

  SetSearch(const std::vector<Rational>& costs, const std::vector<Rational>& probs, const OutcomeTable& table,
            std::function<bool(std::size_t, int)> finished, std::optional<Rational> outside, bool use_memo)
      : costs_(costs),
        probs_(probs),
        table_(table),
        finished_(std::move(finished)),
        outside_(std::move(outside)),
        use_memo_(use_memo) {}

  /// Returns nullopt when the set cannot be finished (uncoverable, or
  /// indistinguishable scenarios in identification mode).
  std::optional<Entry> solve(Mask s, bool identify) {
    if (use_memo_) {
      if (auto it = memo_.find(s); it != memo_.end()) return it->second;
    }
    std::optional<Entry> best;
    if (identify && std::popcount(s) == 1) {
      best = Entry{0, -1};
    } else {
      Rational m = mass(probs_, s);
      if (outside_) best = Entry{*outside_ * m, -1};
      for (std::size_t a = 0; a < table_.actions(); ++a) {
        auto parts = split(table_, a, s);
        bool progress = parts.size() > 1;
        for (const auto& [id, part] : parts) progress = progress || finished_(a, id);
        if (!progress) continue;
        Rational v = costs_[a] * m;
        bool feasible = true;
        for (const auto& [id, part] : parts) {
          if (finished_(a, id)) continue;
          auto sub = solve(part, identify);
          if (!sub) {
            feasible = false;
            break;
          }
          v += sub->value;
          if (best && (v > best->value || (v == best->value && best->action >= 0))) break;
        }
        // Any action beats quitting at equal cost; among actions the lowest id wins.
        if (feasible && (!best || v < best->value || (v == best->value && best->action < 0))) {
          best = Entry{v, static_cast<int>(a)};
        }
      }
    }
    ++states_;
    if (use_memo_) memo_.emplace(s, best);
    return best;
  }

  template <typename Leaf>
  PolicyTree build(Mask s, bool identify, Leaf&& leaf) {
    auto e = solve(s, identify);
    if (e->action < 0) return leaf(s);
    auto a = static_cast<std::size_t>(e->action);
    PolicyTree node = PolicyTree::act(a);
    for (const auto& [id, part] : split(table_, a, s)) {
      node.with(table_.name(a, id), finished_(a, id) ? PolicyTree::stop() : build(part, identify, leaf));
    }
    return node;
  }

  std::size_t states() const { return states_; }

 private:
  const std::vector<Rational>& costs_;
  const std::vector<Rational>& probs_;
  const OutcomeTable& table_;
  std::function<bool(std::size_t, int)> finished_;
  std::optional<Rational> outside_;
  bool use_memo_;
  std::unordered_map<Mask, std::optional<Entry>> memo_;
  std::size_t states_ = 0;
};

}  // namespace detail

/// Optimal policy for the outside-option problem: stop at the first value
/// at most T or quit paying T. Ties prefer the lowest box id, then quitting.
inline OracleResult opt_threshold(const ThresholdInstance& inst, const OracleOptions& opt = {}) {
  require_valid(inst);
  detail::check_caps(inst.boxes(), inst.scenarios(), opt);
  OutcomeTable table = outcome_table(inst.base);
  std::vector<std::vector<bool>> low(inst.boxes());
  for (std::size_t i = 0; i < inst.boxes(); ++i) {
    for (std::size_t k = 0; k < table.distinct(i); ++k) {
      low[i].push_back(Value::parse(table.name(i, static_cast<int>(k))).at_most(inst.threshold));
    }
  }
  detail::SetSearch search(
      inst.base.costs, inst.base.probs, table, [&](std::size_t a, int id) { return static_cast<bool>(low[a][id]); },
      inst.threshold, opt.use_memo);
  Mask all = detail::full_mask(inst.scenarios());
  auto root = search.solve(all, false);
  OracleResult r;
  r.cost = root->value;
  r.policy = search.build(all, false, [](Mask) { return PolicyTree::outside(); });
  r.states = search.states();
  return r;
}

/// Optimal min-sum set cover policy with feedback. Ties: lowest element id.
inline OracleResult opt_msscf(const MSSCfInstance& inst, const OracleOptions& opt = {}) {
  require_valid(inst);
  detail::check_caps(inst.elements(), inst.sets(), opt);
  OutcomeTable table = outcome_table(inst);
  detail::SetSearch search(
      inst.costs, inst.probs, table,
      [&](std::size_t a, int id) { return table.name(a, id) == MSSCfInstance::kHit; }, std::nullopt,
      opt.use_memo);
  Mask all = detail::full_mask(inst.sets());
  auto root = search.solve(all, false);
  if (!root) throw InfeasiblePolicy("opt_msscf: some set cannot be covered");
  OracleResult r;
  r.cost = root->value;
  r.policy = search.build(all, false, [](Mask) { return PolicyTree::stop(); });
  r.states = search.states();
  return r;
}

/// Optimal decision tree. Ties: lowest test id.
inline OracleResult opt_dt(const DTInstance& inst, const OracleOptions& opt = {}) {
  require_valid(inst);
  detail::check_caps(inst.tests(), inst.scenarios(), opt);
  OutcomeTable table = outcome_table(inst);
  detail::SetSearch search(inst.costs, inst.probs, table, [](std::size_t, int) { return false; }, std::nullopt,
                           opt.use_memo);
  Mask all = detail::full_mask(inst.scenarios());
  auto root = search.solve(all, true);
  if (!root) throw Error("opt_dt: instance is not identifiable");
  OracleResult r;
  r.cost = root->value;
  r.policy = search.build(all, true, [](Mask s) {
    return PolicyTree::identified(static_cast<std::size_t>(std::countr_zero(s)));
  });
  r.states = search.states();
  return r;
}

namespace detail {

/// Search over (consistent scenarios, opened boxes). The opened set matters
/// here because the payoff depends on the smallest value seen so far.
class PBSearch {
 public:
  struct Entry {
    Rational value;
    int action = -1;  // -1: stop
  };
  struct KeyHash {
    std::size_t operator()(const std::pair<Mask, Mask>& k) const {
      return std::hash<Mask>()(k.first * 0x9E3779B97F4A7C15ULL ^ k.second);
    }
  };

  PBSearch(const PBInstance& inst, const OutcomeTable& table, bool use_memo)
      : inst_(inst), table_(table), use_memo_(use_memo) {}

  std::optional<Rational> stop_value(Mask s, Mask opened) const {
    Rational total = 0;
    for (Mask rest = s; rest; rest &= rest - 1) {
      auto j = static_cast<std::size_t>(std::countr_zero(rest));
      std::optional<Rational> best;
      for (Mask o = opened; o; o &= o - 1) {
        const Value& v = inst_.values[std::countr_zero(o)][j];
        if (v.is_finite() && (!best || v.number() < *best)) best = v.number();
      }
      if (!best) return std::nullopt;
      total += inst_.probs[j] * *best;
    }
    return total;
  }

  std::optional<Entry> solve(Mask s, Mask opened) {
    std::pair<Mask, Mask> key{s, opened};
    if (use_memo_) {
      if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    }
    std::optional<Entry> best;
    if (auto stop = stop_value(s, opened)) best = Entry{*stop, -1};
    Rational m = mass(inst_.probs, s);
    for (std::size_t b = 0; b < inst_.boxes(); ++b) {
      if (opened >> b & 1) continue;
      Rational v = inst_.costs[b] * m;
      if (best && v >= best->value) continue;
      bool feasible = true;
      for (const auto& [id, part] : split(table_, b, s)) {
        auto sub = solve(part, opened | Mask{1} << b);
        if (!sub) {
          feasible = false;
          break;
        }
        v += sub->value;
        if (best && v >= best->value) break;
      }
      if (feasible && (!best || v < best->value)) best = Entry{v, static_cast<int>(b)};
    }
    ++states_;
    if (use_memo_) memo_.emplace(key, best);
    return best;
  }

  PolicyTree build(Mask s, Mask opened) {
    auto e = solve(s, opened);
    if (e->action < 0) return PolicyTree::stop();
    auto b = static_cast<std::size_t>(e->action);
    PolicyTree node = PolicyTree::act(b);
    for (const auto& [id, part] : split(table_, b, s)) {
      node.with(table_.name(b, id), build(part, opened | Mask{1} << b));
    }
    return node;
  }

  std::size_t states() const { return states_; }

 private:
  const PBInstance& inst_;
  const OutcomeTable& table_;
  bool use_memo_;
  std::unordered_map<std::pair<Mask, Mask>, std::optional<Entry>, KeyHash> memo_;
  std::size_t states_ = 0;
};

}  // namespace detail

/// Optimal Pandora's box policy (expected opening cost plus minimum value).
/// Ties prefer stopping, then the lowest box id.
inline OracleResult opt_pb(const PBInstance& inst, const OracleOptions& opt = {}) {
  require_valid(inst);
  detail::check_caps(inst.boxes(), inst.scenarios(), opt);
  OutcomeTable table = outcome_table(inst);
  detail::PBSearch search(inst, table, opt.use_memo);
  Mask all = detail::full_mask(inst.scenarios());
  auto root = search.solve(all, 0);
  if (!root) throw InfeasiblePolicy("opt_pb: some scenario has no finite value, stopping is never feasible");
  OracleResult r;
  r.cost = root->value;
  r.policy = search.build(all, 0);
  r.states = search.states();
  return r;
}

}  // namespace pandora
