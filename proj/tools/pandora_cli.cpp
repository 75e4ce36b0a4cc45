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

#include <chrono>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "pandora/pandora.hpp"

namespace {

using namespace pandora;

struct Reduced {
  AnyInstance forward;
  std::function<PolicyTree(const PolicyTree&)> back;
  std::string claimed_bound;
};

template <typename T>
const T& expect_kind(const AnyInstance& inst, const char* kind, const std::string& reduction) {
  if (const T* p = std::get_if<T>(&inst)) return *p;
  throw Error(reduction + " expects a '" + kind + "' instance, got '" + problem_name(inst) + "'");
}

template <typename T>
Reduced wrap(Certificate<T> cert) {
  return {AnyInstance(cert.forward), cert.back, cert.claimed_bound};
}

Reduced reduce_any(const std::string& kind, const AnyInstance& src) {
  if (kind == "msscf_to_pb") return wrap(msscf_to_pb(expect_kind<MSSCfInstance>(src, "msscf", kind)));
  if (kind == "msscf_to_dt") return wrap(msscf_to_dt(expect_kind<MSSCfInstance>(src, "msscf", kind)));
  if (kind == "pb_to_pbT_naive") return wrap(pb_to_pbT_naive(expect_kind<PBInstance>(src, "pb", kind)));
  if (kind == "pbT_to_umsscf") return wrap(pbT_to_umsscf(expect_kind<ThresholdInstance>(src, "pbt", kind)));
  if (kind == "udt_to_umsscf") return wrap(udt_to_umsscf(expect_kind<DTInstance>(src, "dt", kind)));
  throw Error("unknown reduction '" + kind + "'");
}

Rational evaluate_any(const AnyInstance& inst, const PolicyTree& policy) {
  return std::visit(
      [&](const auto& x) -> Rational {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PBInstance>) {
          return eval_pb(x, policy);
        } else if constexpr (std::is_same_v<T, ThresholdInstance>) {
          return eval_threshold(x, policy);
        } else if constexpr (std::is_same_v<T, DTInstance>) {
          return eval_dt(x, policy);
        } else if constexpr (std::is_same_v<T, MSSCfInstance>) {
          return eval_msscf(x, policy);
        } else {
          throw Error("mixture policies are evaluated by mixture-solve");
        }
      },
      inst);
}

struct Output {
  std::string format = "text";
  std::string out;

  void emit(const Rational& cost, const PolicyTree& policy, const Json& extra = Json::object()) const {
    if (!out.empty()) write_file(out, to_json(policy).dump(2) + "\n");
    if (format == "json") {
      Json doc = extra;
      doc["cost"] = to_string(cost);
      doc["policy"] = to_json(policy);
      std::cout << doc.dump(2) << "\n";
    } else {
      std::cout << "cost " << to_string(cost) << " (" << to_double(cost) << ")\n";
      for (const auto& [k, v] : extra.items()) std::cout << k << " " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
      if (out.empty()) std::cout << to_text(policy);
    }
  }
};

void add_output(CLI::App* cmd, Output& o) {
  cmd->add_option("--format", o.format, "stdout rendering")->check(CLI::IsMember({"text", "json"}));
  cmd->add_option("-o,--out", o.out, "write the policy as JSON to this file");
}

void require_valid_any(const AnyInstance& inst) {
  std::visit([](const auto& x) { require_valid(x); }, inst);
}

double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pandora's box search toolkit: exact oracles, reductions, approximate solvers."};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "write a random instance");
  std::string gen_kind;
  std::size_t n = 3, m = 3, support = 3;
  std::uint64_t seed = 0;
  std::string cost_mode = "unit", threshold = "2", epsilon = "1/2", gen_out;
  bool uniform = false, identical = false;
  unsigned infinite_percent = 0;
  gen->add_option("kind", gen_kind)->required()->check(CLI::IsMember({"pb", "pbt", "msscf", "dt", "mixture"}));
  gen->add_option("--n", n, "boxes, elements or tests");
  gen->add_option("--m", m, "scenarios, sets or components");
  gen->add_option("--seed", seed);
  gen->add_option("--support", support, "value support size");
  gen->add_option("--cost-mode", cost_mode)->check(CLI::IsMember({"unit", "random"}));
  gen->add_option("--threshold", threshold, "T for pbt");
  gen->add_option("--epsilon", epsilon, "separation for mixture");
  gen->add_option("--infinite-percent", infinite_percent, "chance of an infinite cell (pb, pbt)");
  gen->add_flag("--uniform", uniform, "uniform scenario probabilities");
  gen->add_flag("--identical", identical, "mixture with identical components");
  gen->add_option("-o,--out", gen_out);

  // oracle
  auto* orc = app.add_subcommand("oracle", "exact optimum by memoized search");
  std::string orc_file;
  OracleOptions orc_opt;
  Output orc_outp;
  orc->add_option("file", orc_file)->required();
  orc->add_option("--max-actions", orc_opt.max_actions);
  orc->add_option("--max-scenarios", orc_opt.max_scenarios);
  add_output(orc, orc_outp);

  // solve
  auto* sol = app.add_subcommand("solve", "run an approximate solver");
  std::string algo, sol_file, beta = "1/2";
  Output sol_outp;
  sol->add_option("algo", algo)
      ->required()
      ->check(CLI::IsMember({"greedy_msscf", "nonadaptive_msscf", "greedy_dt", "greedy_threshold",
                             "uniform_threshold_via_udt", "pipeline_pb_via_udt", "pipeline_pb_direct", "mixture_pb"}));
  sol->add_option("file", sol_file)->required();
  sol->add_option("--beta", beta, "accuracy for mixture_pb");
  add_output(sol, sol_outp);

  // reduce
  auto* red = app.add_subcommand("reduce", "map an instance forward; writes <out>.map.json for backtranslate");
  std::string red_kind, red_in, red_out;
  red->add_option("kind", red_kind)
      ->required()
      ->check(CLI::IsMember({"msscf_to_pb", "msscf_to_dt", "pb_to_pbT_naive", "pbT_to_umsscf", "udt_to_umsscf"}));
  red->add_option("in", red_in)->required();
  red->add_option("out", red_out)->required();

  // backtranslate
  auto* bt = app.add_subcommand("backtranslate", "turn a forward policy into a source policy");
  std::string bt_map, bt_policy;
  Output bt_outp;
  bt->add_option("mapping", bt_map, "the .map.json written by reduce")->required();
  bt->add_option("policy", bt_policy, "policy JSON for the forward instance")->required();
  add_output(bt, bt_outp);

  // pipeline
  auto* pipe = app.add_subcommand("pipeline", "run an end-to-end pipeline on a pb instance");
  std::string pipe_name, pipe_file, pipe_report;
  Output pipe_outp;
  pipe->add_option("name", pipe_name)->required()->check(CLI::IsMember({"via_udt", "direct"}));
  pipe->add_option("file", pipe_file)->required();
  pipe->add_option("--report", pipe_report, "CSV: instance_id,n,m,algo_cost,oracle_cost,ratio,wall_ms");
  add_output(pipe, pipe_outp);

  // mixture-solve
  auto* mix = app.add_subcommand("mixture-solve", "approximate DP for a mixture with an outside option");
  std::string mix_file, mix_t, mix_beta = "1/2";
  DPOptions mix_opt;
  bool no_memo = false;
  Output mix_outp;
  mix->add_option("file", mix_file)->required();
  mix->add_option("--T", mix_t, "outside option")->required();
  mix->add_option("--beta", mix_beta);
  mix->add_option("--max-states", mix_opt.max_states);
  mix->add_flag("--no-memo", no_memo);
  add_output(mix, mix_outp);

  // corpus
  auto* cor = app.add_subcommand("corpus", "ratio table and exact inequality checks on random instances");
  CorpusConfig cfg;
  std::string tasks, cor_report;
  cor->add_option("--count", cfg.count);
  cor->add_option("--max-n", cfg.max_n);
  cor->add_option("--max-m", cfg.max_m);
  cor->add_option("--seed", cfg.seed);
  cor->add_option("--threads", cfg.threads);
  cor->add_option("--tasks", tasks, "comma-separated task names, or none; default all");
  cor->add_option("--report", cor_report, "CSV output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      Rational eps = parse_rational(epsilon);
      CostMode mode = parse_cost_mode(cost_mode);
      AnyInstance inst;
      if (gen_kind == "pb" || gen_kind == "pbt") {
        ExplicitOptions eo;
        eo.support = support;
        eo.cost_mode = mode;
        eo.uniform = uniform;
        eo.infinite_percent = infinite_percent;
        PBInstance pb = gen_explicit(n, m, seed, eo);
        if (gen_kind == "pb") {
          inst = pb;
        } else {
          inst = ThresholdInstance{pb, parse_rational(threshold)};
        }
      } else if (gen_kind == "msscf") {
        inst = gen_msscf(n, m, seed, mode, uniform);
      } else if (gen_kind == "dt") {
        inst = gen_dt(n, m, seed, mode, uniform, std::max<std::size_t>(2, m));
      } else {
        MixtureOptions mo;
        mo.cost_mode = mode;
        mo.all_identical = identical;
        inst = gen_mixture(n, m, seed, eps, support, mo);
      }
      std::string text = dump_instance(inst);
      if (gen_out.empty()) {
        std::cout << text;
      } else {
        write_file(gen_out, text);
      }
      return 0;
    }

    if (*orc) {
      AnyInstance inst = load_instance(orc_file);
      require_valid_any(inst);
      auto start = std::chrono::steady_clock::now();
      OracleResult r = std::visit(
          [&](const auto& x) -> OracleResult {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, PBInstance>) {
              return opt_pb(x, orc_opt);
            } else if constexpr (std::is_same_v<T, ThresholdInstance>) {
              return opt_threshold(x, orc_opt);
            } else if constexpr (std::is_same_v<T, DTInstance>) {
              return opt_dt(x, orc_opt);
            } else if constexpr (std::is_same_v<T, MSSCfInstance>) {
              return opt_msscf(x, orc_opt);
            } else {
              throw Error("no exact oracle for mixtures; use mixture-solve");
            }
          },
          inst);
      orc_outp.emit(r.cost, r.policy, Json{{"states", r.states}, {"elapsed_ms", ms_since(start)}});
      return 0;
    }

    if (*sol) {
      AnyInstance inst = load_instance(sol_file);
      require_valid_any(inst);
      auto start = std::chrono::steady_clock::now();
      PolicyTree p;
      Rational cost;
      if (algo == "greedy_msscf" || algo == "nonadaptive_msscf") {
        const auto& x = expect_kind<MSSCfInstance>(inst, "msscf", algo);
        p = algo == "greedy_msscf" ? greedy_msscf(x) : order_policy(x, nonadaptive_mssc_order(x));
        cost = eval_msscf(x, p);
      } else if (algo == "greedy_dt") {
        const auto& x = expect_kind<DTInstance>(inst, "dt", algo);
        p = greedy_dt(x);
        cost = eval_dt(x, p);
      } else if (algo == "greedy_threshold" || algo == "uniform_threshold_via_udt") {
        const auto& x = expect_kind<ThresholdInstance>(inst, "pbt", algo);
        p = algo == "greedy_threshold" ? greedy_threshold(x) : uniform_threshold_via_udt(x);
        cost = eval_threshold(x, p);
      } else if (algo == "mixture_pb") {
        auto r = mixture_pb_solve(expect_kind<MixtureInstance>(inst, "mixture", algo), parse_rational(beta));
        p = r.policy;
        cost = r.cost;
      } else {
        const auto& x = expect_kind<PBInstance>(inst, "pb", algo);
        auto r = algo == "pipeline_pb_via_udt" ? pipeline_pb_via_udt(x) : pipeline_pb_direct(x);
        p = r.policy;
        cost = r.cost;
      }
      sol_outp.emit(cost, p, Json{{"elapsed_ms", ms_since(start)}});
      return 0;
    }

    if (*red) {
      AnyInstance src = load_instance(red_in);
      require_valid_any(src);
      Reduced r = reduce_any(red_kind, src);
      write_file(red_out, dump_instance(r.forward));
      Json map{{"reduction", red_kind}, {"claimed_bound", r.claimed_bound}, {"source", to_json(src)}};
      write_file(red_out + ".map.json", map.dump(2) + "\n");
      std::cout << "wrote " << red_out << " and " << red_out << ".map.json\n";
      return 0;
    }

    if (*bt) {
      Json map = Json::parse(read_file(bt_map));
      AnyInstance src = instance_from_json(map.at("source"));
      Reduced r = reduce_any(map.at("reduction").get<std::string>(), src);
      PolicyTree fwd = policy_from_json(Json::parse(read_file(bt_policy)));
      PolicyTree back = r.back(fwd);
      bt_outp.emit(evaluate_any(src, back), back, Json{{"forward_cost", to_string(evaluate_any(r.forward, fwd))}});
      return 0;
    }

    if (*pipe) {
      const PBInstance src = std::get<PBInstance>([&] {
        AnyInstance inst = load_instance(pipe_file);
        expect_kind<PBInstance>(inst, "pb", "pipeline");
        return inst;
      }());
      require_valid(src);
      auto start = std::chrono::steady_clock::now();
      PipelineResult r = pipe_name == "via_udt" ? pipeline_pb_via_udt(src) : pipeline_pb_direct(src);
      double wall = ms_since(start);
      std::optional<Rational> opt;
      try {
        opt = opt_pb(src).cost;
      } catch (const CapExceeded&) {
      }
      Json stages = Json::array();
      for (const auto& s : r.stages) stages.push_back(Json{{"stage", s.name}, {"cost", to_string(s.cost)}});
      pipe_outp.emit(r.cost, r.policy, Json{{"stages", stages}, {"elapsed_ms", wall}});
      if (!pipe_report.empty()) {
        std::ostringstream os;
        os << "instance_id,n,m,algo_cost,oracle_cost,ratio,wall_ms\n";
        os << "0," << src.boxes() << ',' << src.scenarios() << ',' << to_string(r.cost) << ','
           << (opt ? to_string(*opt) : "") << ',' << (opt && *opt != 0 ? to_string(r.cost / *opt) : "") << ','
           << wall << '\n';
        write_file(pipe_report, os.str());
      }
      return opt && r.cost < *opt ? 1 : 0;
    }

    if (*mix) {
      AnyInstance inst = load_instance(mix_file);
      const auto& x = expect_kind<MixtureInstance>(inst, "mixture", "mixture-solve");
      require_valid(x);
      mix_opt.use_memo = !no_memo;
      auto start = std::chrono::steady_clock::now();
      DPResult r = dp_solve(x, parse_rational(mix_t), parse_rational(mix_beta), mix_opt);
      double wall = ms_since(start);
      mix_outp.emit(r.cost, r.policy.to_tree(),
                    Json{{"states", r.states}, {"L", r.informative_budget}, {"delta", to_string(r.delta)},
                         {"elapsed_ms", wall}});
      return 0;
    }

    if (*cor) {
      if (cor->count("--tasks") > 0) {
        cfg.tasks.clear();
        std::stringstream ss(tasks);
        for (std::string t; std::getline(ss, t, ',');) {
          if (!t.empty() && t != "none") cfg.tasks.push_back(t);
        }
      }
      CorpusReport report = run_corpus(cfg);
      if (!cor_report.empty()) write_file(cor_report, report.csv());
      std::cout << report.summary_text();
      return report.ok() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
