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

// Uniform-prior gadgets into set cover with feedback.
//
// pbT_to_umsscf: each scenario i becomes T copies s_{i,k}. Box elements keep
// the box's cost and cover every copy when the value is at most T. Outside
// element k costs 1 and covers copy k of every scenario. A policy that has
// picked T/2 outside elements on a path takes the outside option instead.
//
// udt_to_umsscf: sets are scenarios, tests become elements that cover
// nothing but report their outcome, and isolating element B^i covers only
// s_i. Reading the cover policy back, the first isolating element on a path
// is skipped and remembered; the next one runs the cheapest test that tells
// the two scenarios apart.

#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pandora/evaluate.hpp"
#include "pandora/instances.hpp"
#include "pandora/reductions/certificate.hpp"

namespace pandora {

inline const char* kOutsideFeedback = "out";
inline const char* kIsolatingMiss = "none";

inline bool uniform_probs(const std::vector<Rational>& probs) {
  return std::all_of(probs.begin(), probs.end(), [&](const Rational& p) { return p == probs.front(); });
}

inline std::string test_label(const std::string& outcome) { return "t:" + outcome; }

/// Set index of copy k of scenario i.
inline std::size_t copy_set(std::size_t scenario, std::size_t copy, std::size_t t) { return scenario * t + copy; }

/// Claimed bound: per scenario i, c(back(pi), i) <= 3 (1/T) sum_k c(pi, s_{i,k}).
inline Certificate<MSSCfInstance> pbT_to_umsscf(const ThresholdInstance& src) {
  require_valid(src);
  if (src.threshold < 1 || denominator_of(src.threshold) != 1) {
    throw Error("pbT_to_umsscf: threshold must be a positive integer, got " + to_string(src.threshold));
  }
  if (!uniform_probs(src.base.probs)) throw Error("pbT_to_umsscf: scenario probabilities must be uniform");
  const PBInstance& pb = src.base;
  const std::size_t n = pb.boxes();
  const std::size_t m = pb.scenarios();
  const std::size_t t = numerator_of(src.threshold).convert_to<std::size_t>();
  Certificate<MSSCfInstance> cert;
  MSSCfInstance& out = cert.forward;
  out.probs.assign(m * t, Rational(1, static_cast<long>(m * t)));
  for (std::size_t b = 0; b < n; ++b) {
    out.costs.push_back(pb.costs[b]);
    std::vector<bool> mem;
    std::vector<std::string> fb;
    for (std::size_t i = 0; i < m; ++i) {
      const Value& v = pb.values[b][i];
      for (std::size_t k = 0; k < t; ++k) {
        mem.push_back(v.at_most(src.threshold));
        fb.push_back(v.at_most(src.threshold) ? std::string() : v.label());
      }
    }
    out.member.push_back(std::move(mem));
    out.feedback.push_back(std::move(fb));
  }
  for (std::size_t k = 0; k < t; ++k) {
    out.costs.push_back(1);
    std::vector<bool> mem;
    std::vector<std::string> fb;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t c = 0; c < t; ++c) {
        mem.push_back(c == k);
        fb.push_back(c == k ? std::string() : kOutsideFeedback);
      }
    }
    out.member.push_back(std::move(mem));
    out.feedback.push_back(std::move(fb));
  }

  cert.back = [src, n, m, t](const PolicyTree& target) {
    const PBInstance& pb = src.base;
    auto walk = [&](auto&& self, const PolicyTree* node, const std::vector<std::size_t>& open,
                    std::size_t outside_seen, std::vector<bool>& used) -> PolicyTree {
      while (true) {
        if (2 * outside_seen >= t) return PolicyTree::outside();
        if (node == nullptr || !node->is_act()) return PolicyTree::outside();
        std::size_t e = node->index();
        if (e >= n) {
          ++outside_seen;
          node = node->child(kOutsideFeedback);
          continue;
        }
        if (used[e]) {
          // Repeats are infeasible in the target; treat as the end of the path.
          return PolicyTree::outside();
        }
        PolicyTree out = PolicyTree::act(e);
        used[e] = true;
        std::vector<std::string> labels;
        for (auto i : open) {
          std::string l = pb.label(e, i);
          if (std::find(labels.begin(), labels.end(), l) == labels.end()) labels.push_back(l);
        }
        for (const auto& l : labels) {
          if (Value::parse(l).at_most(src.threshold)) {
            out.with(l, PolicyTree::stop());
            continue;
          }
          std::vector<std::size_t> part;
          for (auto i : open) {
            if (pb.label(e, i) == l) part.push_back(i);
          }
          out.with(l, self(self, node->child(l), part, outside_seen, used));
        }
        used[e] = false;
        return out;
      }
    };
    std::vector<std::size_t> all(m);
    for (std::size_t i = 0; i < m; ++i) all[i] = i;
    std::vector<bool> used(n, false);
    return walk(walk, &target, all, 0, used);
  };
  cert.claimed_bound = "c(back(pi), i) <= 3 (1/T) sum_k c(pi, s_ik)";
  return cert;
}

/// Cheapest test separating scenarios a and b, lowest id on ties.
inline std::optional<std::size_t> cheapest_separating_test(const DTInstance& inst, std::size_t a, std::size_t b) {
  std::optional<std::size_t> best;
  for (std::size_t t = 0; t < inst.tests(); ++t) {
    if (inst.label(t, a) != inst.label(t, b) && (!best || inst.costs[t] < inst.costs[*best])) best = t;
  }
  return best;
}

/// max over k != i of the cheapest test separating i from k; 0 when i is the
/// only scenario.
inline Rational isolating_cost(const DTInstance& inst, std::size_t i) {
  Rational worst = 0;
  for (std::size_t k = 0; k < inst.scenarios(); ++k) {
    if (k == i) continue;
    auto t = cheapest_separating_test(inst, i, k);
    if (!t) throw Error("scenarios " + std::to_string(i) + " and " + std::to_string(k) + " cannot be separated");
    worst = std::max(worst, inst.costs[*t]);
  }
  return worst;
}

/// Claimed bounds: c(back(pi)) <= 2 c(pi) and OPT(forward) <= 3 OPT(src).
inline Certificate<MSSCfInstance> udt_to_umsscf(const DTInstance& src) {
  require_valid(src);
  if (!uniform_probs(src.probs)) throw Error("udt_to_umsscf: scenario probabilities must be uniform");
  const std::size_t n = src.tests();
  const std::size_t m = src.scenarios();
  Certificate<MSSCfInstance> cert;
  MSSCfInstance& out = cert.forward;
  out.probs = src.probs;
  for (std::size_t t = 0; t < n; ++t) {
    out.costs.push_back(src.costs[t]);
    out.member.emplace_back(m, false);
    std::vector<std::string> fb;
    for (std::size_t j = 0; j < m; ++j) fb.push_back(test_label(src.label(t, j)));
    out.feedback.push_back(std::move(fb));
  }
  for (std::size_t i = 0; i < m; ++i) {
    out.costs.push_back(isolating_cost(src, i));
    std::vector<bool> mem(m, false);
    mem[i] = true;
    out.member.push_back(std::move(mem));
    std::vector<std::string> fb(m, kIsolatingMiss);
    fb[i].clear();
    out.feedback.push_back(std::move(fb));
  }

  cert.back = [src, n](const PolicyTree& target) {
    // Groups `s` by the outcome of test t, in order of first appearance.
    auto classes = [&](std::size_t t, const std::vector<std::size_t>& s) {
      std::vector<std::pair<std::string, std::vector<std::size_t>>> out;
      for (auto j : s) {
        const std::string& l = src.label(t, j);
        auto it = std::find_if(out.begin(), out.end(), [&](const auto& c) { return c.first == l; });
        if (it == out.end()) {
          out.push_back({l, {j}});
        } else {
          it->second.push_back(j);
        }
      }
      return out;
    };
    auto contains = [](const std::vector<std::size_t>& s, std::size_t j) {
      return std::find(s.begin(), s.end(), j) != s.end();
    };
    // Separates whatever is left, one cheapest pairwise test at a time.
    auto finish = [&](auto&& self, const std::vector<std::size_t>& s, std::vector<bool>& used) -> PolicyTree {
      if (s.size() == 1) return PolicyTree::identified(s.front());
      std::size_t t = *cheapest_separating_test(src, s[0], s[1]);
      PolicyTree node = PolicyTree::act(t);
      used[t] = true;
      for (const auto& [l, part] : classes(t, s)) node.with(l, self(self, part, used));
      used[t] = false;
      return node;
    };
    auto walk = [&](auto&& self, const PolicyTree* node, const std::vector<std::size_t>& s,
                    std::optional<std::size_t> remembered, std::vector<bool>& used) -> PolicyTree {
      while (true) {
        if (s.size() == 1) return PolicyTree::identified(s.front());
        if (node == nullptr || !node->is_act()) return finish(finish, s, used);
        std::size_t e = node->index();
        if (e < n) {
          if (used[e]) {
            node = node->child(test_label(src.label(e, s.front())));
            continue;
          }
          PolicyTree out = PolicyTree::act(e);
          used[e] = true;
          for (const auto& [l, part] : classes(e, s)) {
            std::optional<std::size_t> keep;
            if (remembered && contains(part, *remembered)) keep = remembered;
            out.with(l, self(self, node->child(test_label(l)), part, keep, used));
          }
          used[e] = false;
          return out;
        }
        std::size_t j = e - n;
        if (!contains(s, j) || (remembered && *remembered == j)) {
          node = node->child(kIsolatingMiss);
          continue;
        }
        if (!remembered) {
          remembered = j;
          node = node->child(kIsolatingMiss);
          continue;
        }
        std::size_t k = *remembered;
        std::size_t t = *cheapest_separating_test(src, j, k);
        if (used[t]) throw Error("udt_to_umsscf: separating test already used on this path");
        PolicyTree out = PolicyTree::act(t);
        used[t] = true;
        const PolicyTree* next = node->child(kIsolatingMiss);
        for (const auto& [l, part] : classes(t, s)) {
          std::optional<std::size_t> keep;
          if (contains(part, j)) keep = j;
          if (contains(part, k)) keep = k;
          out.with(l, self(self, next, part, keep, used));
        }
        used[t] = false;
        return out;
      }
    };
    std::vector<std::size_t> all(src.scenarios());
    for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
    std::vector<bool> used(n, false);
    return walk(walk, &target, all, std::nullopt, used);
  };
  cert.claimed_bound = "c(back(pi)) <= 2 c(pi); OPT(forward) <= 3 OPT(src)";
  return cert;
}

/// A decision tree read as a cover policy on udt_to_umsscf's instance: tests
/// map to test elements and each identified leaf selects its isolating
/// element.
inline PolicyTree dt_policy_as_umsscf(const DTInstance& src, const PolicyTree& tree) {
  const std::size_t n = src.tests();
  auto walk = [&](auto&& self, const PolicyTree& node, std::vector<std::size_t> s) -> PolicyTree {
    if (node.kind() == PolicyTree::Kind::Identified) {
      PolicyTree leaf = PolicyTree::act(n + node.index());
      leaf.with(MSSCfInstance::kHit, PolicyTree::stop());
      std::vector<std::size_t> rest;
      for (auto j : s) {
        if (j != node.index()) rest.push_back(j);
      }
      if (!rest.empty()) throw InfeasiblePolicy("decision tree leaf is not a single scenario");
      return leaf;
    }
    if (!node.is_act()) throw InfeasiblePolicy(std::string("decision tree has a ") + kind_name(node.kind()) + " leaf");
    PolicyTree out = PolicyTree::act(node.index());
    for (const auto& b : node.children()) {
      std::vector<std::size_t> part;
      for (auto j : s) {
        if (src.label(node.index(), j) == b.label) part.push_back(j);
      }
      if (!part.empty()) out.with(test_label(b.label), self(self, b.subtree, part));
    }
    return out;
  };
  std::vector<std::size_t> all(src.scenarios());
  for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
  return walk(walk, tree, all);
}

}  // namespace pandora
