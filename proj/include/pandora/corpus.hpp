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

// Experiment runner: random instances, every requested algorithm against
// its exact oracle, and the reduction inequalities checked exactly.
//
// CSV columns: instance_id,n,m,kind,name,algo_cost,oracle_cost,ratio,wall_ms,pass
//   kind=algo   algo_cost is the algorithm's expected cost, oracle_cost the
//               exact optimum; pass means feasible and algo_cost >= optimum.
//   kind=check  algo_cost is the measured side of an inequality, oracle_cost
//               the reference side; pass is the exact comparison. For
//               per-scenario checks the worst scenario is reported.
// ratio is algo_cost/oracle_cost as an exact fraction (1 when both are 0).

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "pandora/evaluate.hpp"
#include "pandora/generators.hpp"
#include "pandora/oracles.hpp"
#include "pandora/reductions/from_msscf.hpp"
#include "pandora/reductions/naive_threshold.hpp"
#include "pandora/reductions/phases.hpp"
#include "pandora/reductions/uniform_gadgets.hpp"
#include "pandora/solvers.hpp"

namespace pandora {

inline const std::vector<std::string>& corpus_algorithms() {
  static const std::vector<std::string> names = {
      "greedy_msscf", "nonadaptive_msscf", "greedy_dt", "greedy_threshold", "pipeline_pb_via_udt",
      "pipeline_pb_direct"};
  return names;
}

inline const std::vector<std::string>& corpus_checks() {
  static const std::vector<std::string> names = {
      "msscf_to_pb_equal", "msscf_to_dt_slack", "naive_opt_2x", "naive_back_le", "phase_mass_4/5",
      "ski_rental_2x",     "pbT_back_3x",       "udt_back_2x",  "udt_opt_3x"};
  return names;
}

inline std::vector<std::string> corpus_default_tasks() {
  auto out = corpus_algorithms();
  const auto& checks = corpus_checks();
  out.insert(out.end(), checks.begin(), checks.end());
  return out;
}

struct CorpusConfig {
  std::size_t count = 200;
  std::size_t max_n = 6;
  std::size_t max_m = 6;
  std::uint64_t seed = 1;
  std::vector<std::string> tasks = corpus_default_tasks();
  /// Worker threads; 0 picks the hardware concurrency.
  std::size_t threads = 0;
};

struct CorpusRow {
  std::size_t instance_id = 0;
  std::size_t n = 0;
  std::size_t m = 0;
  std::string kind;
  std::string name;
  std::optional<Rational> algo_cost;
  std::optional<Rational> oracle_cost;
  double wall_ms = 0;
  bool pass = false;
  std::string error;

  std::optional<Rational> ratio() const {
    if (!algo_cost || !oracle_cost) return std::nullopt;
    if (*oracle_cost == 0) return *algo_cost == 0 ? std::optional<Rational>(1) : std::nullopt;
    return *algo_cost / *oracle_cost;
  }
};

struct CorpusStats {
  std::size_t rows = 0;
  std::size_t failures = 0;
  double max_ratio = 0;
  double mean_ratio = 0;
};

struct CorpusReport {
  std::vector<CorpusRow> rows;

  bool ok() const {
    return std::all_of(rows.begin(), rows.end(), [](const CorpusRow& r) { return r.pass; });
  }
  std::map<std::string, CorpusStats> summary() const;
  std::string csv() const;
  std::string summary_text() const;
};

inline const char* corpus_csv_header() {
  return "instance_id,n,m,kind,name,algo_cost,oracle_cost,ratio,wall_ms,pass\n";
}

inline std::string CorpusReport::csv() const {
  std::ostringstream os;
  os << corpus_csv_header();
  auto opt = [](const std::optional<Rational>& q) { return q ? to_string(*q) : std::string(); };
  for (const auto& r : rows) {
    os << r.instance_id << ',' << r.n << ',' << r.m << ',' << r.kind << ',' << r.name << ',' << opt(r.algo_cost)
       << ',' << opt(r.oracle_cost) << ',' << opt(r.ratio()) << ',' << r.wall_ms << ','
       << (r.pass ? "true" : "false") << '\n';
  }
  return os.str();
}

inline std::map<std::string, CorpusStats> CorpusReport::summary() const {
  std::map<std::string, CorpusStats> out;
  std::map<std::string, std::size_t> with_ratio;
  for (const auto& r : rows) {
    auto& s = out[r.name];
    ++s.rows;
    if (!r.pass) ++s.failures;
    if (auto q = r.ratio()) {
      double x = to_double(*q);
      s.max_ratio = std::max(s.max_ratio, x);
      s.mean_ratio += x;
      ++with_ratio[r.name];
    }
  }
  for (auto& [name, s] : out) {
    if (with_ratio[name] > 0) s.mean_ratio /= static_cast<double>(with_ratio[name]);
  }
  return out;
}

inline std::string CorpusReport::summary_text() const {
  std::ostringstream os;
  for (const auto& [name, s] : summary()) {
    os << name << ": rows=" << s.rows << " failures=" << s.failures << " max_ratio=" << s.max_ratio
       << " mean_ratio=" << s.mean_ratio << '\n';
  }
  for (const auto& r : rows) {
    if (!r.error.empty()) os << "instance " << r.instance_id << " " << r.name << ": " << r.error << '\n';
  }
  os << (ok() ? "all exact checks pass" : "EXACT CHECK FAILURES") << '\n';
  return os.str();
}

namespace detail {

struct CheckOutcome {
  Rational lhs;
  Rational rhs;
  bool pass = false;
};

/// Keeps the per-scenario comparison with the largest lhs/rhs; any failure
/// wins over a passing entry.
struct WorstOf {
  std::optional<CheckOutcome> worst;
  void add(const Rational& lhs, const Rational& rhs, bool pass) {
    auto key = [](const CheckOutcome& c) { return c.rhs == 0 ? Rational(c.lhs == 0 ? 0 : 1000000) : c.lhs / c.rhs; };
    CheckOutcome c{lhs, rhs, pass};
    if (!worst || (worst->pass && !pass) || (worst->pass == pass && key(c) > key(*worst))) worst = c;
  }
  CheckOutcome get() const { return worst ? *worst : CheckOutcome{0, 0, true}; }
};

struct CorpusInstance {
  std::size_t id, n, m;
  std::uint64_t seed;
  CostMode mode;
  MSSCfInstance msscf;
  PBInstance pb;
  PBInstance uniform_pb;
  DTInstance dt;
  Rational threshold;
  std::size_t uniform_threshold;
};

inline CorpusInstance corpus_instance(const CorpusConfig& cfg, std::size_t k) {
  CorpusInstance c;
  c.id = k;
  c.n = 1 + k % cfg.max_n;
  c.m = 1 + (k / cfg.max_n) % cfg.max_m;
  c.seed = cfg.seed * 1000003 + k;
  c.mode = k % 2 ? CostMode::Random : CostMode::Unit;
  c.msscf = gen_msscf(c.n, c.m, c.seed, c.mode);
  ExplicitOptions eo;
  eo.cost_mode = c.mode;
  eo.infinite_percent = k % 3 == 0 ? 20 : 0;
  c.pb = gen_explicit(c.n, c.m, c.seed, eo);
  ExplicitOptions uo;
  uo.uniform = true;
  c.uniform_pb = gen_explicit(c.n, c.m, c.seed, uo);
  c.dt = gen_dt(c.n, c.m, c.seed, c.mode, true, std::max<std::size_t>(2, c.m));
  c.threshold = Rational(static_cast<long>(1 + k % 6));
  c.uniform_threshold = 1 + k % c.m;
  return c;
}

inline OracleOptions wide_oracle() {
  OracleOptions o;
  o.max_actions = 40;
  o.max_scenarios = 40;
  return o;
}

inline PolicyTree exact_threshold_solver(const ThresholdInstance& ti) { return opt_threshold(ti, wide_oracle()).policy; }

inline CheckOutcome run_check(const std::string& name, const CorpusInstance& c) {
  if (name == "msscf_to_pb_equal") {
    auto cert = msscf_to_pb(c.msscf);
    CheckOutcome out{0, 0, true};
    for (const auto& p : {greedy_msscf(c.msscf), opt_msscf(c.msscf).policy}) {
      out.lhs = eval_pb(cert.forward, msscf_policy_as_pb(p));
      out.rhs = eval_msscf(c.msscf, p);
      out.pass = out.pass && out.lhs == out.rhs;
    }
    return out;
  }
  if (name == "msscf_to_dt_slack") {
    auto cert = msscf_to_dt(c.msscf);
    Rational slack = expected_cheapest_member(c.msscf);
    WorstOf w;
    for (const auto& p : {greedy_dt(cert.forward), opt_dt(cert.forward).policy}) {
      Rational lhs = eval_msscf(c.msscf, cert.back_translate(p));
      Rational rhs = eval_dt(cert.forward, p) + slack;
      w.add(lhs, rhs, lhs <= rhs);
    }
    return w.get();
  }
  if (name == "naive_opt_2x") {
    auto cert = pb_to_pbT_naive(c.pb);
    Rational fwd = opt_threshold(cert.forward, wide_oracle()).cost;
    Rational opt = opt_pb(c.pb).cost;
    return {fwd, opt, fwd <= 2 * opt};
  }
  if (name == "naive_back_le") {
    auto cert = pb_to_pbT_naive(c.pb);
    WorstOf w;
    for (const auto& p : {opt_threshold(cert.forward, wide_oracle()).policy, greedy_threshold(cert.forward)}) {
      PolicyTree back = cert.back_translate(p);
      Rational lhs = eval_pb(c.pb, back);
      Rational rhs = eval_threshold(cert.forward, p);
      w.add(lhs, rhs, lhs <= rhs && policy_violations(back, outcome_table(c.pb)).empty());
    }
    return w.get();
  }
  if (name == "phase_mass_4/5") {
    auto r = pb_phases(c.pb, exact_threshold_solver);
    Rational worst = 1;
    for (const auto& ph : r.phases) worst = std::min(worst, ph.covered_fraction);
    return {worst, Rational(4, 5), worst >= Rational(4, 5)};
  }
  if (name == "ski_rental_2x") {
    auto r = pb_phases(c.pb, exact_threshold_solver);
    WorstOf w;
    Rational budget = 0;
    for (const auto& ph : r.phases) {
      budget += ph.threshold;
      for (auto j : ph.covered) {
        PBPath path = pb_path(c.pb, r.policy, j);
        w.add(path.cost(), budget, path.opening <= budget && path.cost() <= 2 * budget);
      }
    }
    return w.get();
  }
  if (name == "pbT_back_3x") {
    std::size_t t = c.uniform_threshold;
    ThresholdInstance ti{c.uniform_pb, Rational(static_cast<long>(t))};
    auto cert = pbT_to_umsscf(ti);
    std::vector<PolicyTree> targets{greedy_msscf(cert.forward)};
    if (cert.forward.sets() <= 20) {
      OracleOptions o;
      o.max_scenarios = 20;
      targets.push_back(opt_msscf(cert.forward, o).policy);
    }
    WorstOf w;
    for (const auto& p : targets) {
      PolicyTree back = cert.back_translate(p);
      auto set_costs = msscf_set_costs(cert.forward, p);
      for (std::size_t i = 0; i < c.m; ++i) {
        Rational avg = 0;
        for (std::size_t k = 0; k < t; ++k) avg += set_costs[copy_set(i, k, t)];
        avg /= static_cast<long>(t);
        Rational lhs = threshold_trace(ti, back, i).cost;
        w.add(lhs, avg, lhs <= 3 * avg);
      }
    }
    return w.get();
  }
  if (name == "udt_back_2x") {
    auto cert = udt_to_umsscf(c.dt);
    WorstOf w;
    for (const auto& p : {opt_msscf(cert.forward, wide_oracle()).policy, greedy_msscf(cert.forward)}) {
      Rational lhs = eval_dt(c.dt, cert.back_translate(p));
      Rational rhs = eval_msscf(cert.forward, p);
      w.add(lhs, rhs, lhs <= 2 * rhs);
    }
    return w.get();
  }
  if (name == "udt_opt_3x") {
    auto cert = udt_to_umsscf(c.dt);
    Rational fwd = opt_msscf(cert.forward, wide_oracle()).cost;
    Rational opt = opt_dt(c.dt).cost;
    return {fwd, opt, fwd <= 3 * opt};
  }
  throw Error("run_corpus: unknown task " + name);
}

struct AlgoOutcome {
  Rational cost;
  Rational optimum;
  bool feasible = false;
};

inline AlgoOutcome run_algorithm(const std::string& name, const CorpusInstance& c) {
  if (name == "greedy_msscf" || name == "nonadaptive_msscf") {
    PolicyTree p = name == "greedy_msscf" ? greedy_msscf(c.msscf) : order_policy(c.msscf, nonadaptive_mssc_order(c.msscf));
    return {eval_msscf(c.msscf, p), opt_msscf(c.msscf).cost, policy_violations(p, outcome_table(c.msscf)).empty()};
  }
  if (name == "greedy_dt") {
    PolicyTree p = greedy_dt(c.dt);
    return {eval_dt(c.dt, p), opt_dt(c.dt).cost, policy_violations(p, outcome_table(c.dt)).empty()};
  }
  if (name == "greedy_threshold") {
    ThresholdInstance ti{c.pb, c.threshold};
    PolicyTree p = greedy_threshold(ti);
    return {eval_threshold(ti, p), opt_threshold(ti).cost, policy_violations(p, outcome_table(c.pb)).empty()};
  }
  if (name == "pipeline_pb_via_udt" || name == "pipeline_pb_direct") {
    PipelineResult r = name == "pipeline_pb_via_udt" ? pipeline_pb_via_udt(c.pb) : pipeline_pb_direct(c.pb);
    return {r.cost, opt_pb(c.pb).cost, policy_violations(r.policy, outcome_table(c.pb)).empty()};
  }
  throw Error("run_corpus: unknown algorithm " + name);
}

inline std::vector<CorpusRow> corpus_rows(const CorpusConfig& cfg, std::size_t k) {
  std::vector<CorpusRow> rows;
  if (cfg.tasks.empty()) return rows;
  CorpusInstance c = corpus_instance(cfg, k);
  const auto& algos = corpus_algorithms();
  for (const auto& name : cfg.tasks) {
    CorpusRow row;
    row.instance_id = k;
    row.n = c.n;
    row.m = c.m;
    row.name = name;
    bool is_algo = std::find(algos.begin(), algos.end(), name) != algos.end();
    row.kind = is_algo ? "algo" : "check";
    auto start = std::chrono::steady_clock::now();
    try {
      if (is_algo) {
        AlgoOutcome a = run_algorithm(name, c);
        row.algo_cost = a.cost;
        row.oracle_cost = a.optimum;
        row.pass = a.feasible && a.cost >= a.optimum;
      } else {
        CheckOutcome o = run_check(name, c);
        row.algo_cost = o.lhs;
        row.oracle_cost = o.rhs;
        row.pass = o.pass;
      }
    } catch (const std::exception& e) {
      row.pass = false;
      row.error = e.what();
    }
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

/// Runs every task on `count` instances in parallel; rows come back ordered
/// by instance and then by task.
inline CorpusReport run_corpus(const CorpusConfig& cfg) {
  if (cfg.max_n == 0 || cfg.max_m == 0) throw Error("run_corpus: sizes must be positive");
  const auto& algos = corpus_algorithms();
  const auto& checks = corpus_checks();
  for (const auto& t : cfg.tasks) {
    if (std::find(algos.begin(), algos.end(), t) == algos.end() &&
        std::find(checks.begin(), checks.end(), t) == checks.end()) {
      throw Error("run_corpus: unknown task " + t);
    }
  }
  std::vector<std::vector<CorpusRow>> per(cfg.count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < cfg.count; k = next++) per[k] = detail::corpus_rows(cfg, k);
  };
  std::size_t threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(cfg.count, 1));
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  CorpusReport report;
  for (auto& rows : per) {
    for (auto& r : rows) report.rows.push_back(std::move(r));
  }
  return report;
}

}  // namespace pandora
