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

// Outside-option search when box values come from a mixture of product
// distributions.
//
// The dynamic program tracks a set S of components still considered
// possible. Boxes on which two components of S differ (by at least epsilon
// in total variation) are informative; opening them feeds pairwise evidence
// counters, and once a pair has enough observations a Hoeffding-style test
// drops one of the two. Non-informative boxes look the same under every
// component of S and are opened in a fixed greedy order.
//
// A component that gives zero probability to an observed value is dropped
// from S at once.
//
// Each DP entry carries the cost of its subpolicy under every component
// separately, so the expected cost of the returned policy is exact. Choices
// weigh these costs by the prior weights renormalized over S.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pandora/instances.hpp"
#include "pandora/policy.hpp"
#include "pandora/reductions/phases.hpp"

namespace pandora {

using ComponentSet = std::uint64_t;

inline ComponentSet all_components(std::size_t m) {
  return m >= 64 ? ~ComponentSet{0} : (ComponentSet{1} << m) - 1;
}

inline bool has(ComponentSet s, std::size_t k) { return (s >> k) & 1U; }

struct BoxClasses {
  std::vector<std::size_t> informative;
  std::vector<std::size_t> noninformative;
};

/// Splits boxes by whether some pair of components in S differs on them.
inline BoxClasses classify_boxes(const MixtureInstance& inst, ComponentSet s) {
  BoxClasses out;
  for (std::size_t b = 0; b < inst.boxes(); ++b) {
    bool informative = false;
    for (std::size_t i = 0; i < inst.components(); ++i) {
      for (std::size_t j = i + 1; j < inst.components(); ++j) {
        if (!has(s, i) || !has(s, j)) continue;
        Rational tv = tv_distance(inst.dists[b][i], inst.dists[b][j]);
        if (tv > 0 && tv < inst.epsilon) {
          throw Error("separability: box " + std::to_string(b) + " components " + std::to_string(i) + "," +
                      std::to_string(j) + " have TV " + to_string(tv));
        }
        informative = informative || tv >= inst.epsilon;
      }
    }
    (informative ? out.informative : out.noninformative).push_back(b);
  }
  return out;
}

/// Lowest-indexed component of S; its marginals stand for all of S on a
/// non-informative box.
inline std::size_t first_component(ComponentSet s) {
  std::size_t k = 0;
  while (!has(s, k)) ++k;
  return k;
}

/// Non-informative boxes of S by descending Pr[v <= T]/c; zero-cost boxes
/// first, ties by lowest id.
inline std::vector<std::size_t> noninformative_order(const MixtureInstance& inst, ComponentSet s, const Rational& t) {
  std::vector<std::size_t> boxes = classify_boxes(inst, s).noninformative;
  std::size_t k = first_component(s);
  auto key_less = [&](std::size_t a, std::size_t b) {
    Rational qa = inst.dists[a][k].prob_at_most(t);
    Rational qb = inst.dists[b][k].prob_at_most(t);
    const Rational& ca = inst.costs[a];
    const Rational& cb = inst.costs[b];
    if (ca == 0 || cb == 0) {
      if (ca == 0 && cb == 0) return a < b;
      return ca == 0;
    }
    Rational lhs = qa * cb;
    Rational rhs = qb * ca;
    if (lhs != rhs) return lhs > rhs;
    return a < b;
  };
  std::sort(boxes.begin(), boxes.end(), key_less);
  return boxes;
}

/// The (already_opened + 1)-th box of noninformative_order.
inline std::size_t best_noninformative(const MixtureInstance& inst, ComponentSet s, const Rational& t,
                                       std::size_t already_opened) {
  auto order = noninformative_order(inst, s, t);
  if (already_opened >= order.size()) throw Error("best_noninformative: no non-informative box left");
  return order[already_opened];
}

/// Pairwise evidence. For the ordered pair (i,j): t counts informative
/// openings, z those whose value was at least as likely under i (ties go to
/// the lower index), and expect sums Pr_i of i's favored values per opening.
struct Evidence {
  std::size_t m = 0;
  std::vector<long> z;
  std::vector<long> t;
  std::vector<Rational> expect;

  explicit Evidence(std::size_t components = 0)
      : m(components), z(m * m, 0), t(m * m, 0), expect(m * m, Rational(0)) {}

  std::size_t at(std::size_t i, std::size_t j) const { return i * m + j; }
  friend bool operator==(const Evidence&, const Evidence&) = default;
};

namespace detail {

inline bool favors(const MixtureInstance& inst, std::size_t box, const Rational& v, std::size_t i, std::size_t j) {
  Rational pi = inst.dists[box][i].prob(v);
  Rational pj = inst.dists[box][j].prob(v);
  return i < j ? pi >= pj : pi > pj;
}

inline Rational favored_mass(const MixtureInstance& inst, std::size_t box, std::size_t i, std::size_t j) {
  Rational total = 0;
  for (const auto& [v, p] : inst.dists[box][i].atoms()) {
    if (favors(inst, box, v, i, j)) total += p;
  }
  return total;
}

}  // namespace detail

inline Evidence update_evidence(Evidence e, std::size_t box, const Rational& value, const MixtureInstance& inst,
                                ComponentSet s) {
  for (std::size_t i = 0; i < inst.components(); ++i) {
    for (std::size_t j = 0; j < inst.components(); ++j) {
      if (i == j || !has(s, i) || !has(s, j)) continue;
      if (tv_distance(inst.dists[box][i], inst.dists[box][j]) < inst.epsilon) continue;
      std::size_t k = e.at(i, j);
      ++e.t[k];
      if (detail::favors(inst, box, value, i, j)) ++e.z[k];
      e.expect[k] += detail::favored_mass(inst, box, i, j);
    }
  }
  return e;
}

/// Observations a pair needs before it is tested: ln(1/delta)/eps^2.
inline double elimination_threshold(const Rational& epsilon, const Rational& delta) {
  double eps = to_double(epsilon);
  return std::max(0.0, std::log(1.0 / to_double(delta))) / (eps * eps);
}

/// Tests every pair i < j of S with more than ln(1/delta)/eps^2
/// observations: if z_ij/t_ij is within eps/2 of its expectation under i,
/// j is removed, otherwise i. Repeats until no pair qualifies.
inline ComponentSet eliminate(const Evidence& e, ComponentSet s, const MixtureInstance& inst, const Rational& delta) {
  double need = elimination_threshold(inst.epsilon, delta);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < inst.components() && !changed; ++i) {
      for (std::size_t j = i + 1; j < inst.components() && !changed; ++j) {
        if (!has(s, i) || !has(s, j)) continue;
        std::size_t k = e.at(i, j);
        if (!(static_cast<double>(e.t[k]) > need)) continue;
        Rational dev = Rational(e.z[k], e.t[k]) - e.expect[k] / e.t[k];
        if (dev < 0) dev = -dev;
        s &= ~(ComponentSet{1} << (dev <= inst.epsilon / 2 ? j : i));
        changed = true;
      }
    }
  }
  return s;
}

struct DPOptions {
  std::size_t max_states = 2'000'000;
  bool use_memo = true;
};

/// Lazily materializable policy produced by dp_solve. A history is the list
/// of (box, value) pairs observed so far, all above T.
class MixturePolicy {
 public:
  struct Action {
    bool outside = false;
    std::size_t box = 0;
  };

  Action next(const std::vector<std::pair<std::size_t, Rational>>& history) const { return step_(history); }

  /// Full policy tree: Act nodes branch on every value any component can
  /// produce; values at most T lead to Stop.
  PolicyTree to_tree() const { return tree_(); }

  std::function<Action(const std::vector<std::pair<std::size_t, Rational>>&)> step_;
  std::function<PolicyTree()> tree_;
};

struct DPResult {
  MixturePolicy policy;
  /// Exact expected cost of `policy` under the mixture.
  Rational cost;
  /// Cost under each component.
  std::vector<Rational> component_costs;
  std::size_t states = 0;
  /// Cap on informative openings along a path.
  std::size_t informative_budget = 0;
  Rational delta;
  double elimination_threshold = 0;
};

namespace detail {

class MixtureDP {
 public:
  struct Key {
    std::uint64_t opened;
    ComponentSet s;
    std::size_t informative_opened;
    std::vector<long> z;
    auto operator<=>(const Key&) const = default;
  };
  struct Entry {
    int action = -1;  // -1: outside option
    std::vector<Rational> costs;
  };
  struct State {
    std::uint64_t opened = 0;
    ComponentSet s = 0;
    std::size_t informative_opened = 0;
    Evidence evidence;
  };

  MixtureDP(const MixtureInstance& inst, Rational t, Rational delta, std::size_t budget, DPOptions opt)
      : inst_(inst), t_(std::move(t)), delta_(std::move(delta)), budget_(budget), opt_(opt) {
    for (std::size_t b = 0; b < inst.boxes(); ++b) {
      std::map<Rational, bool> vals;
      for (const auto& d : inst.dists[b]) {
        for (const auto& [v, p] : d.atoms()) vals[v] = true;
      }
      std::vector<Rational> vs;
      for (const auto& [v, unused] : vals) vs.push_back(v);
      support_.push_back(std::move(vs));
    }
  }

  State root() const {
    State st;
    st.s = all_components(inst_.components());
    st.evidence = Evidence(inst_.components());
    return st;
  }

  Key key(const State& st) const {
    Key k{st.opened, st.s, st.informative_opened, {}};
    for (std::size_t i = 0; i < inst_.components(); ++i) {
      for (std::size_t j = i + 1; j < inst_.components(); ++j) {
        k.z.push_back(has(st.s, i) && has(st.s, j) ? st.evidence.z[st.evidence.at(i, j)] : -1);
      }
    }
    return k;
  }

  /// Boxes the recursion may open from `st`, in tie-break order.
  std::vector<std::size_t> options(const State& st) const {
    std::vector<std::size_t> out;
    BoxClasses cls = classify_boxes(inst_, st.s);
    if (std::popcount(st.s) > 1 && st.informative_opened < budget_) {
      for (auto b : cls.informative) {
        if (!((st.opened >> b) & 1U)) out.push_back(b);
      }
    }
    for (auto b : noninformative_order(inst_, st.s, t_)) {
      if (!((st.opened >> b) & 1U)) {
        if (std::find(out.begin(), out.end(), b) == out.end()) out.push_back(b);
        break;
      }
    }
    return out;
  }

  State advance(const State& st, std::size_t box, const Rational& value) const {
    State next = st;
    next.opened |= std::uint64_t{1} << box;
    BoxClasses cls = classify_boxes(inst_, st.s);
    if (std::find(cls.informative.begin(), cls.informative.end(), box) != cls.informative.end()) {
      ++next.informative_opened;
      next.evidence = update_evidence(st.evidence, box, value, inst_, st.s);
      next.s = eliminate(next.evidence, st.s, inst_, delta_);
    }
    next.s = drop_impossible(next.s, box, value);
    return next;
  }

  /// Components that cannot produce `value` at `box` leave S, unless that
  /// would empty it.
  ComponentSet drop_impossible(ComponentSet s, std::size_t box, const Rational& value) const {
    ComponentSet kept = s;
    for (std::size_t c = 0; c < inst_.components(); ++c) {
      if (has(s, c) && inst_.dists[box][c].prob(value) == 0) kept &= ~(ComponentSet{1} << c);
    }
    return kept == 0 ? s : kept;
  }

  const Entry& solve(const State& st) {
    Key k = key(st);
    if (opt_.use_memo) {
      if (auto it = memo_.find(k); it != memo_.end()) return it->second;
    }
    if (++states_ > opt_.max_states) {
      throw CapExceeded("dp_solve: more than " + std::to_string(opt_.max_states) + " states");
    }
    const std::size_t m = inst_.components();
    Entry best{-1, std::vector<Rational>(m, t_)};
    Rational best_score = score(st.s, best.costs);
    for (auto b : options(st)) {
      std::vector<Rational> costs(m, inst_.costs[b]);
      for (const auto& v : support_[b]) {
        if (v <= t_) continue;
        bool reachable = false;
        for (std::size_t c = 0; c < m && !reachable; ++c) reachable = inst_.dists[b][c].prob(v) > 0;
        if (!reachable) continue;
        std::vector<Rational> sub = solve(advance(st, b, v)).costs;
        for (std::size_t c = 0; c < m; ++c) costs[c] += inst_.dists[b][c].prob(v) * sub[c];
      }
      Rational sc = score(st.s, costs);
      if (sc < best_score) {
        best_score = sc;
        best = Entry{static_cast<int>(b), std::move(costs)};
      }
    }
    if (!opt_.use_memo) {
      scratch_.push_back(std::move(best));
      return scratch_.back();
    }
    return memo_.emplace(std::move(k), std::move(best)).first->second;
  }

  Rational score(ComponentSet s, const std::vector<Rational>& costs) const {
    Rational total = 0;
    for (std::size_t c = 0; c < costs.size(); ++c) {
      if (has(s, c)) total += inst_.weights[c] * costs[c];
    }
    return total;
  }

  PolicyTree build(const State& st) {
    const Entry& e = solve(st);
    if (e.action < 0) return PolicyTree::outside();
    auto b = static_cast<std::size_t>(e.action);
    PolicyTree node = PolicyTree::act(b);
    for (const auto& v : support_[b]) {
      if (v <= t_) {
        node.with(Value::finite(v).label(), PolicyTree::stop());
      } else {
        node.with(Value::finite(v).label(), build(advance(st, b, v)));
      }
    }
    return node;
  }

  std::size_t states() const { return states_; }

 private:
  const MixtureInstance& inst_;
  Rational t_;
  Rational delta_;
  std::size_t budget_;
  DPOptions opt_;
  std::vector<std::vector<Rational>> support_;
  std::map<Key, Entry> memo_;
  std::deque<Entry> scratch_;
  std::size_t states_ = 0;
};

}  // namespace detail

/// delta = beta * c_min / (m^2 T).
inline Rational dp_delta(const MixtureInstance& inst, const Rational& t, const Rational& beta) {
  Rational c_min = *std::min_element(inst.costs.begin(), inst.costs.end());
  if (c_min <= 0) throw Error("dp_solve: needs positive box costs");
  long m = static_cast<long>(inst.components());
  return beta * c_min / (Rational(m * m) * t);
}

inline DPResult dp_solve(const MixtureInstance& inst, const Rational& t, const Rational& beta,
                         const DPOptions& opt = {}) {
  require_valid(inst);
  if (t <= 0) throw Error("dp_solve: T must be positive");
  if (beta <= 0) throw Error("dp_solve: beta must be positive");
  if (inst.boxes() > 63) throw CapExceeded("dp_solve: more than 63 boxes");
  DPResult r;
  r.delta = dp_delta(inst, t, beta);
  r.elimination_threshold = elimination_threshold(inst.epsilon, r.delta);
  double m = static_cast<double>(inst.components());
  r.informative_budget = static_cast<std::size_t>(std::ceil(m * m * r.elimination_threshold));
  if (inst.components() > 1) r.informative_budget = std::max<std::size_t>(r.informative_budget, 1);

  auto dp = std::make_shared<detail::MixtureDP>(inst, t, r.delta, r.informative_budget, opt);
  const auto& root = dp->solve(dp->root());
  r.component_costs = root.costs;
  r.cost = 0;
  for (std::size_t c = 0; c < inst.components(); ++c) r.cost += inst.weights[c] * root.costs[c];
  r.states = dp->states();

  // The policy keeps its own copy of the instance; the DP refers to it.
  auto owned = std::make_shared<MixtureInstance>(inst);
  auto policy_dp = std::make_shared<detail::MixtureDP>(*owned, t, r.delta, r.informative_budget, opt);
  Rational threshold = t;
  r.policy.step_ = [owned, policy_dp, threshold](const std::vector<std::pair<std::size_t, Rational>>& history) {
    auto st = policy_dp->root();
    for (const auto& [box, v] : history) {
      if (v <= threshold) throw Error("history continues after a value at most T");
      st = policy_dp->advance(st, box, v);
    }
    const auto& e = policy_dp->solve(st);
    MixturePolicy::Action a;
    a.outside = e.action < 0;
    a.box = e.action < 0 ? 0 : static_cast<std::size_t>(e.action);
    return a;
  };
  r.policy.tree_ = [owned, policy_dp]() { return policy_dp->build(policy_dp->root()); };
  return r;
}

/// Exact expected cost of an outside-option policy tree when values follow
/// the mixture. Walks the tree carrying each component's weight times the
/// likelihood of the observed values.
inline Rational eval_mixture_threshold(const MixtureInstance& inst, const Rational& t, const PolicyTree& tree) {
  auto walk = [&](auto&& self, const PolicyTree& node, const std::vector<Rational>& mass,
                  std::vector<bool>& used) -> Rational {
    Rational total_mass = 0;
    for (const auto& x : mass) total_mass += x;
    if (total_mass == 0) return 0;
    if (node.kind() == PolicyTree::Kind::Outside) return t * total_mass;
    if (!node.is_act()) {
      throw InfeasiblePolicy(std::string("mixture policy reaches a ") + kind_name(node.kind()) +
                             " leaf without a value at most T");
    }
    std::size_t b = node.index();
    if (b >= inst.boxes() || used[b]) throw InfeasiblePolicy("mixture policy opens box " + std::to_string(b) + " twice or out of range");
    used[b] = true;
    Rational total = inst.costs[b] * total_mass;
    std::map<Rational, bool> values;
    for (const auto& d : inst.dists[b]) {
      for (const auto& [v, p] : d.atoms()) values[v] = true;
    }
    for (const auto& [v, unused] : values) {
      if (v <= t) continue;
      std::vector<Rational> next(mass.size());
      for (std::size_t c = 0; c < mass.size(); ++c) next[c] = mass[c] * inst.dists[b][c].prob(v);
      const PolicyTree* child = node.child(Value::finite(v).label());
      if (child == nullptr) {
        bool any = std::any_of(next.begin(), next.end(), [](const Rational& x) { return x > 0; });
        if (any) throw InfeasiblePolicy("mixture policy lacks branch for value " + to_string(v));
        continue;
      }
      total += self(self, *child, next, used);
    }
    used[b] = false;
    return total;
  };
  std::vector<bool> used(inst.boxes(), false);
  return walk(walk, tree, inst.weights, used);
}

/// The mixture written out as explicit scenarios: one per value vector,
/// carrying the total probability of that vector over all components.
inline PBInstance mixture_to_explicit(const MixtureInstance& inst, std::size_t max_scenarios = 4096) {
  require_valid(inst);
  std::map<std::vector<Rational>, Rational> scenarios;
  std::vector<Rational> values(inst.boxes());
  for (std::size_t c = 0; c < inst.components(); ++c) {
    auto rec = [&](auto&& self, std::size_t b, const Rational& p) -> void {
      if (b == inst.boxes()) {
        scenarios[values] += p;
        if (scenarios.size() > max_scenarios) throw CapExceeded("mixture_to_explicit: too many scenarios");
        return;
      }
      for (const auto& [v, q] : inst.dists[b][c].atoms()) {
        values[b] = v;
        self(self, b + 1, p * q);
      }
    };
    rec(rec, 0, inst.weights[c]);
  }
  PBInstance out;
  out.costs = inst.costs;
  out.values.assign(inst.boxes(), {});
  for (const auto& [vals, p] : scenarios) {
    out.probs.push_back(p);
    for (std::size_t b = 0; b < inst.boxes(); ++b) out.values[b].push_back(Value::finite(vals[b]));
  }
  return out;
}

struct MixturePhase {
  Rational threshold;
  Rational dp_cost;
  /// T <= (beta + 1) * dp_cost / 0.2, the per-phase sanity relation.
  bool within_diagnostic = false;
};

struct MixturePBResult {
  PolicyTree policy;
  Rational cost;
  std::vector<MixturePhase> phases;
};

/// Pandora's box under the mixture: phases over the explicit scenario list,
/// with dp_solve on the whole mixture as the outside-option solver.
inline MixturePBResult mixture_pb_solve(const MixtureInstance& inst, const Rational& beta,
                                        const DPOptions& opt = {}) {
  PBInstance explicit_inst = mixture_to_explicit(inst);
  std::map<Rational, Rational> dp_costs;
  ThresholdSolver solver = [&](const ThresholdInstance& ti) {
    DPResult r = dp_solve(inst, ti.threshold, beta, opt);
    dp_costs[ti.threshold] = r.cost;
    return r.policy.to_tree();
  };
  PhaseResult phases = pb_phases(explicit_inst, solver);
  MixturePBResult out;
  out.policy = std::move(phases.policy);
  out.cost = eval_pb(explicit_inst, out.policy);
  for (const auto& ph : phases.phases) {
    MixturePhase mp;
    mp.threshold = ph.threshold;
    mp.dp_cost = dp_costs.at(ph.threshold);
    mp.within_diagnostic = ph.threshold <= (beta + 1) * mp.dp_cost * 5;
    out.phases.push_back(mp);
  }
  return out;
}

}  // namespace pandora
