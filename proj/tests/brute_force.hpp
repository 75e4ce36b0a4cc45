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

// Reference optimum by listing every decision tree and scoring each with
// the evaluators. Shares no code with the memoized oracles; only usable on
// tiny instances.

#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "pandora/evaluate.hpp"
#include "pandora/instances.hpp"
#include "pandora/policy.hpp"

namespace pandora::testing {

/// Every tree over the table's actions, with children for exactly the
/// realizable labels and any of `leaves` at the bottom.
inline std::vector<PolicyTree> all_trees(const OutcomeTable& table, const std::vector<std::size_t>& consistent,
                                         std::vector<bool>& used, const std::vector<PolicyTree>& leaves) {
  std::vector<PolicyTree> out = leaves;
  for (std::size_t a = 0; a < table.actions(); ++a) {
    if (used[a]) continue;
    std::vector<std::string> labels;
    std::vector<std::vector<std::size_t>> groups;
    for (auto j : consistent) {
      const std::string& l = table.name(a, table.id(a, j));
      auto it = std::find(labels.begin(), labels.end(), l);
      if (it == labels.end()) {
        labels.push_back(l);
        groups.push_back({j});
      } else {
        groups[it - labels.begin()].push_back(j);
      }
    }
    used[a] = true;
    std::vector<std::vector<PolicyTree>> options;
    for (const auto& g : groups) options.push_back(all_trees(table, g, used, leaves));
    used[a] = false;
    std::vector<std::size_t> pick(groups.size(), 0);
    while (true) {
      PolicyTree t = PolicyTree::act(a);
      for (std::size_t k = 0; k < groups.size(); ++k) t.with(labels[k], options[k][pick[k]]);
      out.push_back(std::move(t));
      std::size_t k = 0;
      while (k < pick.size() && ++pick[k] == options[k].size()) pick[k++] = 0;
      if (k == pick.size()) break;
    }
  }
  return out;
}

/// Minimum of `eval` over all trees; infeasible trees are skipped.
template <typename Eval>
std::optional<Rational> brute_force_min(const OutcomeTable& table, const std::vector<PolicyTree>& leaves,
                                        Eval&& eval) {
  std::vector<std::size_t> all;
  for (std::size_t j = 0; j < table.scenarios(); ++j) all.push_back(j);
  std::vector<bool> used(table.actions(), false);
  std::optional<Rational> best;
  for (const auto& t : all_trees(table, all, used, leaves)) {
    try {
      Rational c = eval(t);
      if (!best || c < *best) best = c;
    } catch (const InfeasiblePolicy&) {
    }
  }
  return best;
}

inline std::optional<Rational> brute_pb(const PBInstance& inst) {
  return brute_force_min(outcome_table(inst), {PolicyTree::stop()},
                         [&](const PolicyTree& t) { return eval_pb(inst, t); });
}

inline std::optional<Rational> brute_threshold(const ThresholdInstance& inst) {
  return brute_force_min(outcome_table(inst.base), {PolicyTree::stop(), PolicyTree::outside()},
                         [&](const PolicyTree& t) { return eval_threshold(inst, t); });
}

inline std::optional<Rational> brute_msscf(const MSSCfInstance& inst) {
  return brute_force_min(outcome_table(inst), {PolicyTree::stop()},
                         [&](const PolicyTree& t) { return eval_msscf(inst, t); });
}

inline std::optional<Rational> brute_dt(const DTInstance& inst) {
  std::vector<PolicyTree> leaves;
  for (std::size_t j = 0; j < inst.scenarios(); ++j) leaves.push_back(PolicyTree::identified(j));
  return brute_force_min(outcome_table(inst), leaves, [&](const PolicyTree& t) { return eval_dt(inst, t); });
}

}  // namespace pandora::testing
