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

// Polynomial-time greedy solvers and the end-to-end Pandora's box pipelines
// built from them.

#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pandora/evaluate.hpp"
#include "pandora/instances.hpp"
#include "pandora/policy.hpp"
#include "pandora/reductions/from_msscf.hpp"
#include "pandora/reductions/naive_threshold.hpp"
#include "pandora/reductions/phases.hpp"
#include "pandora/reductions/uniform_gadgets.hpp"

namespace pandora {

namespace detail {

/// Benefit per unit cost; zero cost with positive benefit beats everything.
struct Ratio {
  Rational benefit;
  Rational cost;

  bool better_than(const Ratio& o) const {
    bool inf = cost == 0 && benefit > 0;
    bool o_inf = o.cost == 0 && o.benefit > 0;
    if (inf || o_inf) return inf && !o_inf;
    if (cost == 0) return false;
    if (o.cost == 0) return benefit > 0;
    return benefit * o.cost > o.benefit * cost;
  }
};

template <typename LabelFn>
std::vector<std::pair<std::string, std::vector<std::size_t>>> group_by(const std::vector<std::size_t>& s,
                                                                       LabelFn label) {
  std::vector<std::pair<std::string, std::vector<std::size_t>>> out;
  for (auto j : s) {
    std::string l = label(j);
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& c) { return c.first == l; });
    if (it == out.end()) {
      out.push_back({l, {j}});
    } else {
      it->second.push_back(j);
    }
  }
  return out;
}

inline std::vector<std::size_t> iota_vec(std::size_t m) {
  std::vector<std::size_t> v(m);
  for (std::size_t j = 0; j < m; ++j) v[j] = j;
  return v;
}

}  // namespace detail

/// Adaptive greedy for set cover with feedback: at each state pick the
/// element covering the most uncovered consistent mass per unit cost.
inline PolicyTree greedy_msscf(const MSSCfInstance& inst) {
  require_valid(inst);
  auto build = [&](auto&& self, const std::vector<std::size_t>& s) -> PolicyTree {
    std::optional<std::size_t> pick;
    detail::Ratio best{0, 1};
    for (std::size_t e = 0; e < inst.elements(); ++e) {
      Rational covered = 0;
      for (auto j : s) {
        if (inst.member[e][j]) covered += inst.probs[j];
      }
      if (covered == 0) continue;
      detail::Ratio r{covered, inst.costs[e]};
      if (!pick || r.better_than(best)) {
        pick = e;
        best = r;
      }
    }
    if (!pick) throw InfeasiblePolicy("greedy_msscf: uncoverable set");
    PolicyTree node = PolicyTree::act(*pick);
    for (const auto& [l, part] : detail::group_by(s, [&](std::size_t j) { return inst.label(*pick, j); })) {
      node.with(l, l == MSSCfInstance::kHit ? PolicyTree::stop() : self(self, part));
    }
    return node;
  };
  return build(build, detail::iota_vec(inst.sets()));
}

/// Greedy identification: pick the test separating the most pairs of
/// consistent scenarios per unit cost.
inline PolicyTree greedy_dt(const DTInstance& inst) {
  require_valid(inst);
  auto build = [&](auto&& self, const std::vector<std::size_t>& s) -> PolicyTree {
    if (s.size() == 1) return PolicyTree::identified(s.front());
    std::optional<std::size_t> pick;
    detail::Ratio best{0, 1};
    for (std::size_t t = 0; t < inst.tests(); ++t) {
      auto classes = detail::group_by(s, [&](std::size_t j) { return inst.label(t, j); });
      if (classes.size() < 2) continue;
      long pairs = static_cast<long>(s.size() * s.size());
      for (const auto& c : classes) pairs -= static_cast<long>(c.second.size() * c.second.size());
      detail::Ratio r{Rational(pairs / 2), inst.costs[t]};
      if (!pick || r.better_than(best)) {
        pick = t;
        best = r;
      }
    }
    if (!pick) throw Error("greedy_dt: scenarios cannot be separated");
    PolicyTree node = PolicyTree::act(*pick);
    for (const auto& [l, part] : detail::group_by(s, [&](std::size_t j) { return inst.label(*pick, j); })) {
      node.with(l, self(self, part));
    }
    return node;
  };
  return build(build, detail::iota_vec(inst.scenarios()));
}

/// Feedback-blind greedy order over all elements.
inline std::vector<std::size_t> nonadaptive_mssc_order(const MSSCfInstance& inst) {
  require_valid(inst);
  std::vector<bool> covered(inst.sets(), false);
  std::vector<bool> used(inst.elements(), false);
  std::vector<std::size_t> order;
  while (order.size() < inst.elements()) {
    std::optional<std::size_t> pick;
    detail::Ratio best{0, 1};
    for (std::size_t e = 0; e < inst.elements(); ++e) {
      if (used[e]) continue;
      Rational gain = 0;
      for (std::size_t j = 0; j < inst.sets(); ++j) {
        if (!covered[j] && inst.member[e][j]) gain += inst.probs[j];
      }
      detail::Ratio r{gain, inst.costs[e]};
      if (!pick || r.better_than(best)) {
        pick = e;
        best = r;
      }
    }
    used[*pick] = true;
    order.push_back(*pick);
    for (std::size_t j = 0; j < inst.sets(); ++j) covered[j] = covered[j] || inst.member[*pick][j];
  }
  return order;
}

/// The policy that selects elements in `order` and stops at the first hit.
inline PolicyTree order_policy(const MSSCfInstance& inst, const std::vector<std::size_t>& order) {
  auto build = [&](auto&& self, std::size_t pos, const std::vector<std::size_t>& s) -> PolicyTree {
    if (s.empty()) return PolicyTree::stop();
    if (pos == order.size()) throw InfeasiblePolicy("order leaves a set uncovered");
    std::size_t e = order[pos];
    PolicyTree node = PolicyTree::act(e);
    for (const auto& [l, part] : detail::group_by(s, [&](std::size_t j) { return inst.label(e, j); })) {
      node.with(l, l == MSSCfInstance::kHit ? PolicyTree::stop() : self(self, pos + 1, part));
    }
    return node;
  };
  return build(build, 0, detail::iota_vec(inst.sets()));
}

/// Set cover view of an outside-option instance: box elements cover the
/// scenarios whose value is at most T, and one extra element of cost T
/// covers everything.
inline MSSCfInstance threshold_as_msscf(const ThresholdInstance& inst) {
  const PBInstance& pb = inst.base;
  MSSCfInstance out;
  out.probs = pb.probs;
  out.costs = pb.costs;
  for (std::size_t b = 0; b < pb.boxes(); ++b) {
    std::vector<bool> mem;
    std::vector<std::string> fb;
    for (std::size_t j = 0; j < pb.scenarios(); ++j) {
      bool low = pb.values[b][j].at_most(inst.threshold);
      mem.push_back(low);
      fb.push_back(low ? std::string() : pb.label(b, j));
    }
    out.member.push_back(std::move(mem));
    out.feedback.push_back(std::move(fb));
  }
  out.costs.push_back(inst.threshold);
  out.member.emplace_back(pb.scenarios(), true);
  out.feedback.emplace_back(pb.scenarios(), std::string());
  return out;
}

/// Reads a cover policy on threshold_as_msscf's instance as an
/// outside-option policy.
inline PolicyTree msscf_policy_as_threshold(const ThresholdInstance& inst, const PolicyTree& tree) {
  const PBInstance& pb = inst.base;
  auto walk = [&](auto&& self, const PolicyTree& node, const std::vector<std::size_t>& s) -> PolicyTree {
    if (!node.is_act() || node.index() >= pb.boxes()) return PolicyTree::outside();
    std::size_t b = node.index();
    PolicyTree out = PolicyTree::act(b);
    for (const auto& [l, part] : detail::group_by(s, [&](std::size_t j) { return pb.label(b, j); })) {
      if (pb.values[b][part.front()].at_most(inst.threshold)) {
        out.with(l, PolicyTree::stop());
        continue;
      }
      const PolicyTree* next = node.child(l);
      if (next == nullptr) throw InfeasiblePolicy("cover policy lacks branch '" + l + "'");
      out.with(l, self(self, *next, part));
    }
    return out;
  };
  return walk(walk, tree, detail::iota_vec(pb.scenarios()));
}

/// Outside-option solver: greedy_dt on the identification instance of the
/// set cover view, translated back twice.
inline PolicyTree greedy_threshold(const ThresholdInstance& inst) {
  MSSCfInstance cover = threshold_as_msscf(inst);
  auto to_dt = msscf_to_dt(cover);
  PolicyTree dt = greedy_dt(to_dt.forward);
  return msscf_policy_as_threshold(inst, to_dt.back_translate(dt));
}

/// Outside-option solver for uniform priors and integer T through the
/// copy gadget, identification and greedy_dt.
inline PolicyTree uniform_threshold_via_udt(const ThresholdInstance& inst) {
  auto cover = pbT_to_umsscf(inst);
  auto to_dt = msscf_to_dt(cover.forward);
  PolicyTree dt = greedy_dt(to_dt.forward);
  return cover.back_translate(to_dt.back_translate(dt));
}

struct PipelineStage {
  std::string name;
  Rational cost;
};

struct PipelineResult {
  PolicyTree policy;
  Rational cost;
  std::vector<PipelineStage> stages;
};

/// Phases over uniform expansions, each solved through the copy gadget and
/// greedy identification.
inline PipelineResult pipeline_pb_via_udt(const PBInstance& src) {
  PipelineResult out;
  std::vector<PipelineStage> inner;
  ThresholdSolver solver = [&](const ThresholdInstance& ti) {
    PolicyTree p = uniform_threshold_via_udt(ti);
    inner.push_back({"threshold T=" + to_string(ti.threshold), eval_threshold(ti, p)});
    return p;
  };
  PhaseResult phases = pb_phases_uniform(src, solver);
  for (std::size_t k = 0; k < phases.phases.size(); ++k) {
    out.stages.push_back({"phase " + std::to_string(k) + " T", phases.phases[k].threshold});
  }
  out.stages.insert(out.stages.end(), inner.begin(), inner.end());
  out.policy = std::move(phases.policy);
  out.cost = eval_pb(src, out.policy);
  out.stages.push_back({"pb", out.cost});
  return out;
}

/// Final-box reduction solved with greedy_threshold.
inline PipelineResult pipeline_pb_direct(const PBInstance& src) {
  PipelineResult out;
  auto cert = pb_to_pbT_naive(src);
  PolicyTree fwd = greedy_threshold(cert.forward);
  out.stages.push_back({"threshold", eval_threshold(cert.forward, fwd)});
  out.policy = cert.back_translate(fwd);
  out.cost = eval_pb(src, out.policy);
  out.stages.push_back({"pb", out.cost});
  return out;
}

}  // namespace pandora
