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

// Pandora's box to the outside-option problem by adding "final" boxes.
//
// With T above every cost-plus-value, original boxes keep their branching
// (value v becomes v+T+1, never low enough to stop) and final box (j, v)
// costs c_j + v and shows 0 exactly when box j holds v. Stopping on a
// final box therefore pays for the value through the box cost.

#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pandora/evaluate.hpp"
#include "pandora/instances.hpp"
#include "pandora/reductions/certificate.hpp"

namespace pandora {

/// Layout of the forward instance: boxes [0, n) are the originals and box
/// n + j*|support| + k is the final box (j, support[k]).
struct NaiveLayout {
  std::size_t boxes = 0;
  std::vector<Rational> support;
  Rational threshold;

  bool is_final(std::size_t box) const { return box >= boxes; }
  std::size_t final_box(std::size_t j, std::size_t k) const { return boxes + j * support.size() + k; }
  std::size_t source_box(std::size_t box) const {
    return is_final(box) ? (box - boxes) / support.size() : box;
  }
  const Rational& final_value(std::size_t box) const { return support[(box - boxes) % support.size()]; }
};

inline NaiveLayout naive_layout(const PBInstance& src) {
  NaiveLayout layout;
  layout.boxes = src.boxes();
  std::set<Rational> support;
  Rational max_value = 0;
  for (const auto& row : src.values) {
    for (const auto& v : row) {
      if (v.is_finite()) {
        support.insert(v.number());
        max_value = std::max(max_value, v.number());
      }
    }
  }
  layout.support.assign(support.begin(), support.end());
  layout.threshold = sum(src.costs) + max_value + 1;
  return layout;
}

namespace detail {

/// Lowest-id completion that opens boxes until every scenario in `open` has
/// a finite value, then stops.
inline PolicyTree finish_pb(const PBInstance& src, const std::vector<std::size_t>& open, std::vector<bool>& opened,
                            const std::vector<bool>& has_finite) {
  bool all_finite = true;
  for (auto j : open) all_finite = all_finite && has_finite[j];
  if (all_finite) return PolicyTree::stop();
  std::size_t b = 0;
  while (b < src.boxes() && opened[b]) ++b;
  if (b == src.boxes()) throw InfeasiblePolicy("some scenario has no finite value");
  PolicyTree node = PolicyTree::act(b);
  opened[b] = true;
  std::vector<std::string> labels;
  for (auto j : open) {
    std::string l = src.label(b, j);
    if (std::find(labels.begin(), labels.end(), l) == labels.end()) labels.push_back(l);
  }
  for (const auto& l : labels) {
    std::vector<std::size_t> part;
    std::vector<bool> fin = has_finite;
    for (auto j : open) {
      if (src.label(b, j) == l) {
        part.push_back(j);
        fin[j] = fin[j] || src.values[b][j].is_finite();
      }
    }
    node.with(l, finish_pb(src, part, opened, fin));
  }
  opened[b] = false;
  return node;
}

}  // namespace detail

/// Claimed bounds: OPT(forward) <= 2 OPT(src) and, per scenario,
/// c_pb(back(pi)) <= c_threshold(pi).
inline Certificate<ThresholdInstance> pb_to_pbT_naive(const PBInstance& src) {
  require_valid(src);
  NaiveLayout layout = naive_layout(src);
  const Rational& t = layout.threshold;
  Certificate<ThresholdInstance> cert;
  ThresholdInstance& fwd = cert.forward;
  fwd.threshold = t;
  fwd.base.probs = src.probs;
  fwd.base.costs = src.costs;
  for (std::size_t i = 0; i < src.boxes(); ++i) {
    std::vector<Value> row;
    for (const auto& v : src.values[i]) row.push_back(v.is_finite() ? Value::finite(v.number() + t + 1) : v);
    fwd.base.values.push_back(std::move(row));
  }
  for (std::size_t i = 0; i < src.boxes(); ++i) {
    for (const auto& s : layout.support) {
      fwd.base.costs.push_back(src.costs[i] + s);
      std::vector<Value> row;
      for (const auto& v : src.values[i]) {
        row.push_back(v.is_finite() && v.number() == s ? Value::finite(0) : Value::finite(t + 1));
      }
      fwd.base.values.push_back(std::move(row));
    }
  }

  cert.back = [src, layout, fwd](const PolicyTree& target) {
    // open: source scenarios consistent with the path. opened: source boxes
    // already opened (their value is shared by every scenario in `open`).
    auto walk = [&](auto&& self, const PolicyTree* node, const std::vector<std::size_t>& open,
                    std::vector<bool>& opened) -> PolicyTree {
      if (node == nullptr || !node->is_act()) {
        std::vector<bool> fin(src.scenarios(), false);
        for (auto j : open) {
          for (std::size_t b = 0; b < src.boxes(); ++b) fin[j] = fin[j] || (opened[b] && src.values[b][j].is_finite());
        }
        return detail::finish_pb(src, open, opened, fin);
      }
      std::size_t a = node->index();
      if (a >= fwd.boxes()) throw InfeasiblePolicy("forward box " + std::to_string(a) + " out of range");
      std::size_t b = layout.source_box(a);
      bool final = layout.is_final(a);
      // Forward label of this node's box for scenario j.
      auto forward_label = [&](std::size_t j) { return fwd.base.label(a, j); };
      auto follow = [&](std::size_t j) -> const PolicyTree* {
        std::string l = forward_label(j);
        if (final && l == "0") return nullptr;  // covered in the forward run
        const PolicyTree* next = node->child(l);
        if (next == nullptr) throw InfeasiblePolicy("forward policy lacks branch '" + l + "'");
        return next;
      };
      if (opened[b]) {
        // Value of b is known; the forward outcome is shared by all of `open`.
        std::size_t j = open.front();
        if (final && forward_label(j) == "0") return PolicyTree::stop();
        return self(self, follow(j), open, opened);
      }
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
        if (final && forward_label(part.front()) == "0") {
          out.with(l, PolicyTree::stop());
        } else {
          out.with(l, self(self, follow(part.front()), part, opened));
        }
      }
      opened[b] = false;
      return out;
    };
    std::vector<std::size_t> all;
    for (std::size_t j = 0; j < src.scenarios(); ++j) all.push_back(j);
    std::vector<bool> opened(src.boxes(), false);
    return walk(walk, &target, all, opened);
  };
  cert.claimed_bound = "OPT(forward) <= 2 OPT(src); c(back(pi)) <= c(pi)";
  return cert;
}

}  // namespace pandora
