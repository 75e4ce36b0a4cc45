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

// Set cover with feedback embedded into Pandora's box (member -> value 0,
// otherwise an infinite value tagged by the feedback) and into decision
// trees (member -> the test names the set, otherwise it reports feedback).

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pandora/evaluate.hpp"
#include "pandora/instances.hpp"
#include "pandora/reductions/certificate.hpp"

namespace pandora {

namespace detail {

inline PolicyTree relabel(const PolicyTree& t, const std::function<std::string(const std::string&)>& f) {
  if (!t.is_act()) return t;
  PolicyTree out = PolicyTree::act(t.index());
  for (const auto& b : t.children()) out.with(f(b.label), relabel(b.subtree, f));
  return out;
}

inline std::string pb_label_to_msscf(const std::string& label) {
  if (label == "0") return MSSCfInstance::kHit;
  if (label.rfind("inf:", 0) == 0) return label.substr(4);
  throw InfeasiblePolicy("outcome '" + label + "' cannot come from a set cover instance");
}

inline std::string msscf_label_to_pb(const std::string& label) {
  return label == MSSCfInstance::kHit ? "0" : "inf:" + label;
}

}  // namespace detail

/// Element ids become box ids; the tree is unchanged apart from labels.
/// Claimed bound: equal cost in both directions.
inline Certificate<PBInstance> msscf_to_pb(const MSSCfInstance& src) {
  require_valid(src);
  Certificate<PBInstance> cert;
  PBInstance& pb = cert.forward;
  pb.costs = src.costs;
  pb.probs = src.probs;
  pb.values.assign(src.elements(), {});
  for (std::size_t i = 0; i < src.elements(); ++i) {
    for (std::size_t j = 0; j < src.sets(); ++j) {
      pb.values[i].push_back(src.member[i][j] ? Value::finite(0) : Value::infinite(src.feedback[i][j]));
    }
  }
  cert.back = [](const PolicyTree& t) { return detail::relabel(t, detail::pb_label_to_msscf); };
  cert.claimed_bound = "c(back(pi)) = c(pi)";
  return cert;
}

/// The same tree read as a Pandora's box policy on msscf_to_pb's instance.
inline PolicyTree msscf_policy_as_pb(const PolicyTree& t) { return detail::relabel(t, detail::msscf_label_to_pb); }

inline std::string isolated_label(std::size_t set) { return "isolated:" + std::to_string(set); }
inline std::string feedback_label(const std::string& f) { return "fb:" + f; }

/// Tests mirror elements. The back map replays the tree's element choices
/// and, at a leaf whose set was never hit, selects that set's cheapest
/// element. Claimed bound: c(back(pi)) <= c(pi) + E_s[min_{i in s} c_i].
inline Certificate<DTInstance> msscf_to_dt(const MSSCfInstance& src) {
  require_valid(src);
  Certificate<DTInstance> cert;
  DTInstance& dt = cert.forward;
  dt.costs = src.costs;
  dt.probs = src.probs;
  dt.outcomes.assign(src.elements(), {});
  for (std::size_t i = 0; i < src.elements(); ++i) {
    for (std::size_t j = 0; j < src.sets(); ++j) {
      dt.outcomes[i].push_back(src.member[i][j] ? isolated_label(j) : feedback_label(src.feedback[i][j]));
    }
  }
  cert.back = [src](const PolicyTree& target) {
    // Covers every set in `open` by repeatedly selecting the cheapest member
    // of the lowest-numbered remaining set.
    auto cover_rest = [&](auto&& self, std::vector<std::size_t> open) -> PolicyTree {
      if (open.empty()) return PolicyTree::stop();
      std::size_t j = open.front();
      std::size_t pick = src.elements();
      for (std::size_t i = 0; i < src.elements(); ++i) {
        if (src.member[i][j] && (pick == src.elements() || src.costs[i] < src.costs[pick])) pick = i;
      }
      PolicyTree node = PolicyTree::act(pick);
      std::vector<std::string> labels;
      for (auto k : open) {
        std::string l = src.label(pick, k);
        if (std::find(labels.begin(), labels.end(), l) == labels.end()) labels.push_back(l);
      }
      for (const auto& l : labels) {
        if (l == MSSCfInstance::kHit) {
          node.with(l, PolicyTree::stop());
          continue;
        }
        std::vector<std::size_t> rest;
        for (auto k : open) {
          if (src.label(pick, k) == l) rest.push_back(k);
        }
        node.with(l, self(self, rest));
      }
      return node;
    };
    auto walk = [&](auto&& self, const PolicyTree& node, std::vector<std::size_t> open) -> PolicyTree {
      if (!node.is_act()) return cover_rest(cover_rest, open);
      std::size_t e = node.index();
      PolicyTree out = PolicyTree::act(e);
      std::vector<std::string> labels;
      for (auto k : open) {
        std::string l = src.label(e, k);
        if (std::find(labels.begin(), labels.end(), l) == labels.end()) labels.push_back(l);
      }
      for (const auto& l : labels) {
        if (l == MSSCfInstance::kHit) {
          out.with(l, PolicyTree::stop());
          continue;
        }
        std::vector<std::size_t> rest;
        for (auto k : open) {
          if (src.label(e, k) == l) rest.push_back(k);
        }
        const PolicyTree* next = node.child(feedback_label(l));
        if (next == nullptr) throw InfeasiblePolicy("decision tree lacks branch '" + feedback_label(l) + "'");
        out.with(l, self(self, *next, rest));
      }
      return out;
    };
    std::vector<std::size_t> all;
    for (std::size_t j = 0; j < src.sets(); ++j) all.push_back(j);
    return walk(walk, target, all);
  };
  cert.claimed_bound = "c(back(pi)) <= c(pi) + E_s[min_{i in s} c_i]";
  return cert;
}

/// E_s[min_{i in s} c_i], the additive slack of msscf_to_dt.
inline Rational expected_cheapest_member(const MSSCfInstance& inst) {
  Rational total = 0;
  for (std::size_t j = 0; j < inst.sets(); ++j) {
    std::optional<Rational> best;
    for (std::size_t i = 0; i < inst.elements(); ++i) {
      if (inst.member[i][j] && (!best || inst.costs[i] < *best)) best = inst.costs[i];
    }
    total += inst.probs[j] * best.value_or(0);
  }
  return total;
}

}  // namespace pandora
