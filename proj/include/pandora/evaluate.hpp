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

#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pandora/instances.hpp"
#include "pandora/policy.hpp"
#include "pandora/rational.hpp"

namespace pandora {

namespace detail {

inline const PolicyTree& follow(const PolicyTree& node, const std::string& label) {
  const PolicyTree* next = node.child(label);
  if (next == nullptr) {
    throw InfeasiblePolicy("policy has no branch for outcome '" + label + "' after action " +
                           std::to_string(node.index()));
  }
  return *next;
}

inline void check_action(std::size_t action, std::size_t count, std::vector<bool>& used) {
  if (action >= count) throw InfeasiblePolicy("action " + std::to_string(action) + " out of range");
  if (used[action]) throw InfeasiblePolicy("action " + std::to_string(action) + " repeats on a path");
  used[action] = true;
}

}  // namespace detail

/// Walk of one scenario through a Pandora's box policy.
struct PBPath {
  Rational opening = 0;
  Rational best = 0;
  std::vector<std::size_t> opened;

  Rational cost() const { return opening + best; }
};

inline PBPath pb_path(const PBInstance& inst, const PolicyTree& policy, std::size_t scenario) {
  PBPath path;
  std::vector<bool> used(inst.boxes(), false);
  std::optional<Rational> best;
  const PolicyTree* node = &policy;
  while (node->is_act()) {
    std::size_t box = node->index();
    detail::check_action(box, inst.boxes(), used);
    path.opening += inst.costs[box];
    path.opened.push_back(box);
    const Value& v = inst.values[box][scenario];
    if (v.is_finite() && (!best || v.number() < *best)) best = v.number();
    node = &detail::follow(*node, v.label());
  }
  if (node->kind() != PolicyTree::Kind::Stop) {
    throw InfeasiblePolicy(std::string("pandora's box policy ends in a ") + kind_name(node->kind()) + " leaf");
  }
  if (!best) {
    throw InfeasiblePolicy("scenario " + std::to_string(scenario) + " stops with only infinite values revealed");
  }
  path.best = *best;
  return path;
}

inline std::vector<Rational> pb_scenario_costs(const PBInstance& inst, const PolicyTree& policy) {
  std::vector<Rational> out;
  for (std::size_t j = 0; j < inst.scenarios(); ++j) out.push_back(pb_path(inst, policy, j).cost());
  return out;
}

/// Expected opening cost plus minimum revealed value.
inline Rational eval_pb(const PBInstance& inst, const PolicyTree& policy) {
  Rational total = 0;
  for (std::size_t j = 0; j < inst.scenarios(); ++j) total += inst.probs[j] * pb_path(inst, policy, j).cost();
  return total;
}

/// Walk of one scenario through a threshold policy. `cost` includes the
/// outside option payment, `opening` does not.
struct ThresholdTrace {
  Rational cost = 0;
  Rational opening = 0;
  bool covered = false;
  std::vector<std::size_t> opened;
};

inline ThresholdTrace threshold_trace(const ThresholdInstance& inst, const PolicyTree& policy,
                                      std::size_t scenario) {
  const PBInstance& base = inst.base;
  ThresholdTrace trace;
  std::vector<bool> used(base.boxes(), false);
  const PolicyTree* node = &policy;
  while (node->is_act()) {
    std::size_t box = node->index();
    detail::check_action(box, base.boxes(), used);
    trace.opening += base.costs[box];
    trace.opened.push_back(box);
    const Value& v = base.values[box][scenario];
    if (v.at_most(inst.threshold)) {
      trace.covered = true;
      trace.cost = trace.opening;
      return trace;
    }
    node = &detail::follow(*node, v.label());
  }
  if (node->kind() != PolicyTree::Kind::Outside) {
    throw InfeasiblePolicy("scenario " + std::to_string(scenario) + " reaches a " + kind_name(node->kind()) +
                           " leaf without a value at most the threshold");
  }
  trace.cost = trace.opening + inst.threshold;
  return trace;
}

inline std::vector<ThresholdTrace> threshold_traces(const ThresholdInstance& inst, const PolicyTree& policy) {
  std::vector<ThresholdTrace> out;
  for (std::size_t j = 0; j < inst.scenarios(); ++j) out.push_back(threshold_trace(inst, policy, j));
  return out;
}

/// Expected cost of finding a value at most T, or T for quitting.
inline Rational eval_threshold(const ThresholdInstance& inst, const PolicyTree& policy) {
  Rational total = 0;
  for (std::size_t j = 0; j < inst.scenarios(); ++j) {
    total += inst.base.probs[j] * threshold_trace(inst, policy, j).cost;
  }
  return total;
}

/// Test cost paid by one scenario until the policy identifies it.
inline Rational dt_cost(const DTInstance& inst, const PolicyTree& policy, std::size_t scenario) {
  std::vector<bool> used(inst.tests(), false);
  std::vector<std::size_t> consistent;
  for (std::size_t k = 0; k < inst.scenarios(); ++k) consistent.push_back(k);
  Rational cost = 0;
  const PolicyTree* node = &policy;
  while (node->is_act()) {
    std::size_t test = node->index();
    detail::check_action(test, inst.tests(), used);
    cost += inst.costs[test];
    const std::string& label = inst.outcomes[test][scenario];
    std::erase_if(consistent, [&](std::size_t k) { return inst.outcomes[test][k] != label; });
    node = &detail::follow(*node, label);
  }
  if (node->kind() != PolicyTree::Kind::Identified) {
    throw InfeasiblePolicy(std::string("decision tree ends in a ") + kind_name(node->kind()) + " leaf");
  }
  if (consistent.size() != 1) {
    throw InfeasiblePolicy("leaf reached by scenario " + std::to_string(scenario) + " holds " +
                           std::to_string(consistent.size()) + " consistent scenarios");
  }
  if (node->index() != scenario) {
    throw InfeasiblePolicy("leaf reached by scenario " + std::to_string(scenario) + " names scenario " +
                           std::to_string(node->index()));
  }
  return cost;
}

inline Rational eval_dt(const DTInstance& inst, const PolicyTree& policy) {
  Rational total = 0;
  for (std::size_t j = 0; j < inst.scenarios(); ++j) total += inst.probs[j] * dt_cost(inst, policy, j);
  return total;
}

/// Cost paid by one set until the first selected element that covers it.
inline Rational msscf_cost(const MSSCfInstance& inst, const PolicyTree& policy, std::size_t set) {
  std::vector<bool> used(inst.elements(), false);
  Rational cost = 0;
  const PolicyTree* node = &policy;
  while (node->is_act()) {
    std::size_t e = node->index();
    detail::check_action(e, inst.elements(), used);
    cost += inst.costs[e];
    if (inst.member[e][set]) return cost;
    node = &detail::follow(*node, inst.feedback[e][set]);
  }
  throw InfeasiblePolicy("set " + std::to_string(set) + " is never covered");
}

inline std::vector<Rational> msscf_set_costs(const MSSCfInstance& inst, const PolicyTree& policy) {
  std::vector<Rational> out;
  for (std::size_t j = 0; j < inst.sets(); ++j) out.push_back(msscf_cost(inst, policy, j));
  return out;
}

inline Rational eval_msscf(const MSSCfInstance& inst, const PolicyTree& policy) {
  Rational total = 0;
  for (std::size_t j = 0; j < inst.sets(); ++j) total += inst.probs[j] * msscf_cost(inst, policy, j);
  return total;
}

/// Structural check against an outcome table: no action repeats on a path
/// and every Act node's labels are exactly those realizable by the
/// scenarios consistent with the path. Returns violation descriptions.
inline std::vector<std::string> policy_violations(const PolicyTree& policy, const OutcomeTable& table) {
  std::vector<std::string> out;
  std::vector<bool> used(table.actions(), false);
  auto rec = [&](auto&& self, const PolicyTree& node, const std::vector<std::size_t>& consistent) -> void {
    if (!node.is_act()) return;
    std::size_t a = node.index();
    if (a >= table.actions()) {
      out.push_back("action " + std::to_string(a) + " out of range");
      return;
    }
    if (used[a]) {
      out.push_back("action " + std::to_string(a) + " repeats on a path");
      return;
    }
    std::set<std::string> realizable;
    for (auto j : consistent) realizable.insert(table.name(a, table.id(a, j)));
    std::set<std::string> keys;
    for (const auto& b : node.children()) keys.insert(b.label);
    if (keys != realizable) {
      out.push_back("action " + std::to_string(a) + " has branches that differ from the realizable outcomes");
    }
    used[a] = true;
    for (const auto& b : node.children()) {
      std::vector<std::size_t> next;
      for (auto j : consistent) {
        if (table.name(a, table.id(a, j)) == b.label) next.push_back(j);
      }
      self(self, b.subtree, next);
    }
    used[a] = false;
  };
  std::vector<std::size_t> all;
  for (std::size_t j = 0; j < table.scenarios(); ++j) all.push_back(j);
  rec(rec, policy, all);
  return out;
}

}  // namespace pandora
