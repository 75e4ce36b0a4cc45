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

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pandora/rational.hpp"
#include "pandora/value.hpp"

namespace pandora {

/// Pandora's box with explicitly listed scenarios. values[i][j] is the value
/// of box i in scenario j.
struct PBInstance {
  std::vector<Rational> costs;
  std::vector<Rational> probs;
  std::vector<std::vector<Value>> values;

  std::size_t boxes() const { return costs.size(); }
  std::size_t scenarios() const { return probs.size(); }
  std::string label(std::size_t box, std::size_t scenario) const {
    return values[box][scenario].label();
  }
};

/// Pandora's box with an outside option: the search may stop once a value at
/// most `threshold` is revealed, or quit at any time paying `threshold`.
struct ThresholdInstance {
  PBInstance base;
  Rational threshold = 0;

  std::size_t boxes() const { return base.boxes(); }
  std::size_t scenarios() const { return base.scenarios(); }
};

/// Decision tree instance: identify the realized scenario by running tests.
/// outcomes[i][j] is the result of test i on scenario j.
struct DTInstance {
  std::vector<Rational> costs;
  std::vector<Rational> probs;
  std::vector<std::vector<std::string>> outcomes;

  std::size_t tests() const { return costs.size(); }
  std::size_t scenarios() const { return probs.size(); }
  const std::string& label(std::size_t test, std::size_t scenario) const {
    return outcomes[test][scenario];
  }
};

/// Min-sum set cover with feedback. Selecting element i when set j is
/// realized either covers j (member[i][j]) or reveals feedback[i][j].
struct MSSCfInstance {
  std::vector<Rational> costs;
  std::vector<Rational> probs;
  std::vector<std::vector<bool>> member;
  std::vector<std::vector<std::string>> feedback;

  static constexpr const char* kHit = "hit";

  std::size_t elements() const { return costs.size(); }
  std::size_t sets() const { return probs.size(); }
  std::string label(std::size_t element, std::size_t set) const {
    return member[element][set] ? kHit : feedback[element][set];
  }
};

/// Finite-support distribution over nonnegative rationals, kept sorted by
/// value with merged duplicates.
class Distribution {
 public:
  Distribution() = default;
  explicit Distribution(std::vector<std::pair<Rational, Rational>> atoms) {
    std::map<Rational, Rational> merged;
    for (auto& [v, p] : atoms) merged[v] += p;
    for (auto& [v, p] : merged) atoms_.emplace_back(v, p);
  }
  static Distribution point(const Rational& v) { return Distribution({{v, 1}}); }

  const std::vector<std::pair<Rational, Rational>>& atoms() const { return atoms_; }

  Rational prob(const Rational& v) const {
    for (const auto& [x, p] : atoms_) {
      if (x == v) return p;
    }
    return 0;
  }
  Rational prob_at_most(const Rational& t) const {
    Rational total = 0;
    for (const auto& [x, p] : atoms_) {
      if (x <= t) total += p;
    }
    return total;
  }
  Rational total() const {
    Rational t = 0;
    for (const auto& [x, p] : atoms_) t += p;
    return t;
  }

  friend bool operator==(const Distribution& a, const Distribution& b) {
    return a.atoms_ == b.atoms_;
  }

 private:
  std::vector<std::pair<Rational, Rational>> atoms_;
};

/// Total variation distance: half the L1 distance over the union support.
inline Rational tv_distance(const Distribution& a, const Distribution& b) {
  if (a.total() != 1 || b.total() != 1) {
    throw Error("tv_distance: distribution does not sum to 1");
  }
  std::map<Rational, Rational> diff;
  for (const auto& [v, p] : a.atoms()) diff[v] += p;
  for (const auto& [v, p] : b.atoms()) diff[v] -= p;
  Rational l1 = 0;
  for (auto& [v, d] : diff) l1 += d < 0 ? Rational(-d) : d;
  return l1 / 2;
}

/// Pandora's box where the joint value vector is drawn from a mixture of
/// product distributions. dists[i][k] is box i's marginal under component k.
struct MixtureInstance {
  std::vector<Rational> costs;
  std::vector<Rational> weights;
  std::vector<std::vector<Distribution>> dists;
  Rational epsilon = 1;

  std::size_t boxes() const { return costs.size(); }
  std::size_t components() const { return weights.size(); }
};

namespace detail {

inline std::string at(const char* what, std::size_t i) {
  return std::string(what) + " " + std::to_string(i);
}

inline void check_distribution(const std::vector<Rational>& probs, const char* name,
                               std::vector<std::string>& out) {
  if (probs.empty()) {
    out.push_back(std::string("dimensions: no ") + name);
    return;
  }
  for (std::size_t j = 0; j < probs.size(); ++j) {
    if (probs[j] <= 0) out.push_back("positivity: probability of " + at(name, j) + " is " + to_string(probs[j]));
  }
  Rational total = sum(probs);
  if (total != 1) out.push_back("probability-sum: " + std::string(name) + " probabilities sum to " + to_string(total));
}

inline void check_costs(const std::vector<Rational>& costs, const char* name,
                        std::vector<std::string>& out) {
  if (costs.empty()) out.push_back(std::string("dimensions: no ") + name);
  for (std::size_t i = 0; i < costs.size(); ++i) {
    if (costs[i] < 0) out.push_back("nonnegative-cost: " + at(name, i) + " costs " + to_string(costs[i]));
  }
}

template <typename Matrix>
bool check_shape(const Matrix& mat, std::size_t rows, std::size_t cols, const char* what,
                 std::vector<std::string>& out) {
  bool ok = true;
  if (mat.size() != rows) {
    out.push_back(std::string("dimensions: ") + what + " has " + std::to_string(mat.size()) +
                  " rows, expected " + std::to_string(rows));
    return false;
  }
  for (std::size_t i = 0; i < rows; ++i) {
    if (mat[i].size() != cols) {
      out.push_back(std::string("dimensions: ") + what + " row " + std::to_string(i) + " has " +
                    std::to_string(mat[i].size()) + " entries, expected " + std::to_string(cols));
      ok = false;
    }
  }
  return ok;
}

}  // namespace detail

/// Returns one description per violated invariant; empty means valid.
inline std::vector<std::string> validate(const PBInstance& inst) {
  std::vector<std::string> out;
  detail::check_costs(inst.costs, "box", out);
  detail::check_distribution(inst.probs, "scenario", out);
  detail::check_shape(inst.values, inst.boxes(), inst.scenarios(), "values", out);
  return out;
}

inline std::vector<std::string> validate(const ThresholdInstance& inst) {
  auto out = validate(inst.base);
  if (inst.threshold < 0) out.push_back("threshold: negative threshold " + to_string(inst.threshold));
  return out;
}

inline std::vector<std::string> validate(const DTInstance& inst) {
  std::vector<std::string> out;
  detail::check_costs(inst.costs, "test", out);
  detail::check_distribution(inst.probs, "scenario", out);
  if (!detail::check_shape(inst.outcomes, inst.tests(), inst.scenarios(), "outcomes", out)) return out;
  for (std::size_t a = 0; a < inst.scenarios(); ++a) {
    for (std::size_t b = a + 1; b < inst.scenarios(); ++b) {
      bool split = false;
      for (std::size_t i = 0; i < inst.tests() && !split; ++i) {
        split = inst.outcomes[i][a] != inst.outcomes[i][b];
      }
      if (!split) {
        out.push_back("identifiability: scenarios " + std::to_string(a) + " and " +
                      std::to_string(b) + " agree on every test");
      }
    }
  }
  return out;
}

inline std::vector<std::string> validate(const MSSCfInstance& inst) {
  std::vector<std::string> out;
  detail::check_costs(inst.costs, "element", out);
  detail::check_distribution(inst.probs, "set", out);
  bool ok = detail::check_shape(inst.member, inst.elements(), inst.sets(), "membership", out);
  ok = detail::check_shape(inst.feedback, inst.elements(), inst.sets(), "feedback", out) && ok;
  if (!ok) return out;
  for (std::size_t j = 0; j < inst.sets(); ++j) {
    bool covered = false;
    for (std::size_t i = 0; i < inst.elements(); ++i) covered = covered || inst.member[i][j];
    if (!covered) out.push_back("coverability: set " + std::to_string(j) + " has no element");
  }
  for (std::size_t i = 0; i < inst.elements(); ++i) {
    for (std::size_t j = 0; j < inst.sets(); ++j) {
      if (!inst.member[i][j] && inst.feedback[i][j] == MSSCfInstance::kHit) {
        out.push_back("feedback: element " + std::to_string(i) + " gives reserved label 'hit' on set " +
                      std::to_string(j));
      }
    }
  }
  return out;
}

inline std::vector<std::string> validate(const MixtureInstance& inst) {
  std::vector<std::string> out;
  detail::check_costs(inst.costs, "box", out);
  detail::check_distribution(inst.weights, "component", out);
  if (inst.epsilon <= 0 || inst.epsilon > 1) out.push_back("epsilon: " + to_string(inst.epsilon) + " outside (0,1]");
  if (!detail::check_shape(inst.dists, inst.boxes(), inst.components(), "dists", out)) return out;
  bool sums_ok = true;
  for (std::size_t i = 0; i < inst.boxes(); ++i) {
    for (std::size_t k = 0; k < inst.components(); ++k) {
      const auto& d = inst.dists[i][k];
      for (const auto& [v, p] : d.atoms()) {
        if (v < 0) out.push_back("nonnegative-value: box " + std::to_string(i) + " component " + std::to_string(k));
        if (p <= 0) out.push_back("positivity: box " + std::to_string(i) + " component " + std::to_string(k) + " has a nonpositive atom");
      }
      if (d.total() != 1) {
        out.push_back("probability-sum: box " + std::to_string(i) + " component " + std::to_string(k) +
                      " sums to " + to_string(d.total()));
        sums_ok = false;
      }
    }
  }
  if (!sums_ok) return out;
  for (std::size_t i = 0; i < inst.boxes(); ++i) {
    for (std::size_t a = 0; a < inst.components(); ++a) {
      for (std::size_t b = a + 1; b < inst.components(); ++b) {
        Rational tv = tv_distance(inst.dists[i][a], inst.dists[i][b]);
        if (tv > 0 && tv < inst.epsilon) {
          out.push_back("separability: box " + std::to_string(i) + " components " + std::to_string(a) +
                        "," + std::to_string(b) + " have TV " + to_string(tv) + " < epsilon");
        }
      }
    }
  }
  return out;
}

template <typename Instance>
void require_valid(const Instance& inst) {
  auto v = validate(inst);
  if (!v.empty()) throw Error("invalid instance: " + v.front());
}

/// Outcome labels interned to small integers, per action. Oracles and
/// solvers partition scenario sets through this table.
class OutcomeTable {
 public:
  template <typename LabelFn>
  OutcomeTable(std::size_t actions, std::size_t scenarios, LabelFn&& label)
      : actions_(actions), scenarios_(scenarios), ids_(actions * scenarios), names_(actions) {
    for (std::size_t i = 0; i < actions; ++i) {
      for (std::size_t j = 0; j < scenarios; ++j) {
        std::string name = label(i, j);
        auto& names = names_[i];
        auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end()) {
          names.push_back(name);
          it = names.end() - 1;
        }
        ids_[i * scenarios + j] = static_cast<int>(it - names.begin());
      }
    }
  }

  std::size_t actions() const { return actions_; }
  std::size_t scenarios() const { return scenarios_; }
  int id(std::size_t action, std::size_t scenario) const { return ids_[action * scenarios_ + scenario]; }
  const std::string& name(std::size_t action, int id) const { return names_[action][id]; }
  std::size_t distinct(std::size_t action) const { return names_[action].size(); }

 private:
  std::size_t actions_;
  std::size_t scenarios_;
  std::vector<int> ids_;
  std::vector<std::vector<std::string>> names_;
};

inline OutcomeTable outcome_table(const PBInstance& inst) {
  return OutcomeTable(inst.boxes(), inst.scenarios(),
                      [&](std::size_t i, std::size_t j) { return inst.label(i, j); });
}
inline OutcomeTable outcome_table(const DTInstance& inst) {
  return OutcomeTable(inst.tests(), inst.scenarios(),
                      [&](std::size_t i, std::size_t j) { return inst.label(i, j); });
}
inline OutcomeTable outcome_table(const MSSCfInstance& inst) {
  return OutcomeTable(inst.elements(), inst.sets(),
                      [&](std::size_t i, std::size_t j) { return inst.label(i, j); });
}

/// Restricts a PB instance to a subset of scenarios, renormalizing the
/// probabilities. `keep` lists original scenario ids in the new order.
inline PBInstance restrict_scenarios(const PBInstance& inst, const std::vector<std::size_t>& keep) {
  if (keep.empty()) throw Error("restrict_scenarios: empty scenario subset");
  PBInstance out;
  out.costs = inst.costs;
  Rational mass = 0;
  for (auto j : keep) mass += inst.probs.at(j);
  for (auto j : keep) out.probs.push_back(inst.probs[j] / mass);
  out.values.assign(inst.boxes(), {});
  for (std::size_t i = 0; i < inst.boxes(); ++i) {
    for (auto j : keep) out.values[i].push_back(inst.values[i][j]);
  }
  return out;
}

}  // namespace pandora
