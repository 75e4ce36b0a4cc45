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

// JSON instance and policy files. Rationals are strings ("3/2"), infinite
// values are "inf:<tag>". Writing is canonical, so read-then-write
// reproduces a file byte for byte.

#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "pandora/instances.hpp"
#include "pandora/policy.hpp"

namespace pandora {

using Json = nlohmann::json;

using AnyInstance = std::variant<PBInstance, ThresholdInstance, DTInstance, MSSCfInstance, MixtureInstance>;

inline const char* problem_name(const AnyInstance& inst) {
  switch (inst.index()) {
    case 0: return "pb";
    case 1: return "pbt";
    case 2: return "dt";
    case 3: return "msscf";
    default: return "mixture";
  }
}

namespace detail {

inline Rational rational_from(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  throw Error("expected a rational string, got " + j.dump());
}

inline std::vector<Rational> rationals_from(const Json& j) {
  std::vector<Rational> out;
  for (const auto& x : j) out.push_back(rational_from(x));
  return out;
}

inline Json to_json(const std::vector<Rational>& xs) {
  Json out = Json::array();
  for (const auto& x : xs) out.push_back(to_string(x));
  return out;
}

inline std::vector<std::vector<std::string>> labels_from(const Json& j) {
  std::vector<std::vector<std::string>> out;
  for (const auto& row : j) {
    out.emplace_back();
    for (const auto& x : row) out.back().push_back(x.is_string() ? x.get<std::string>() : x.dump());
  }
  return out;
}

inline const Json& field(const Json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw Error(std::string("instance file lacks field '") + key + "'");
  return *it;
}

inline Json values_json(const PBInstance& inst) {
  Json rows = Json::array();
  for (const auto& row : inst.values) {
    Json r = Json::array();
    for (const auto& v : row) r.push_back(v.label());
    rows.push_back(r);
  }
  return rows;
}

inline PBInstance pb_from(const Json& doc) {
  PBInstance inst;
  inst.costs = rationals_from(field(doc, "costs"));
  inst.probs = rationals_from(field(doc, "probs"));
  for (const auto& row : field(doc, "values")) {
    inst.values.emplace_back();
    for (const auto& x : row) {
      inst.values.back().push_back(x.is_string() ? Value::parse(x.get<std::string>())
                                                 : Value::finite(rational_from(x)));
    }
  }
  return inst;
}

}  // namespace detail

inline Json to_json(const AnyInstance& any) {
  Json doc;
  doc["problem"] = problem_name(any);
  std::visit(
      [&](const auto& inst) {
        using T = std::decay_t<decltype(inst)>;
        if constexpr (std::is_same_v<T, PBInstance>) {
          doc["costs"] = detail::to_json(inst.costs);
          doc["probs"] = detail::to_json(inst.probs);
          doc["values"] = detail::values_json(inst);
        } else if constexpr (std::is_same_v<T, ThresholdInstance>) {
          doc["costs"] = detail::to_json(inst.base.costs);
          doc["probs"] = detail::to_json(inst.base.probs);
          doc["values"] = detail::values_json(inst.base);
          doc["threshold"] = to_string(inst.threshold);
        } else if constexpr (std::is_same_v<T, DTInstance>) {
          doc["costs"] = detail::to_json(inst.costs);
          doc["probs"] = detail::to_json(inst.probs);
          doc["outcomes"] = inst.outcomes;
        } else if constexpr (std::is_same_v<T, MSSCfInstance>) {
          doc["costs"] = detail::to_json(inst.costs);
          doc["probs"] = detail::to_json(inst.probs);
          Json mem = Json::array();
          for (const auto& row : inst.member) {
            Json r = Json::array();
            for (bool b : row) r.push_back(b);
            mem.push_back(r);
          }
          doc["membership"] = mem;
          doc["feedback"] = inst.feedback;
        } else {
          doc["costs"] = detail::to_json(inst.costs);
          doc["weights"] = detail::to_json(inst.weights);
          doc["epsilon"] = to_string(inst.epsilon);
          Json boxes = Json::array();
          for (const auto& row : inst.dists) {
            Json comps = Json::array();
            for (const auto& d : row) {
              Json atoms = Json::array();
              for (const auto& [v, p] : d.atoms()) atoms.push_back(Json::array({to_string(v), to_string(p)}));
              comps.push_back(atoms);
            }
            boxes.push_back(comps);
          }
          doc["dists"] = boxes;
        }
      },
      any);
  return doc;
}

inline AnyInstance instance_from_json(const Json& doc) {
  std::string problem = detail::field(doc, "problem").get<std::string>();
  if (problem == "pb") return detail::pb_from(doc);
  if (problem == "pbt") {
    ThresholdInstance inst;
    inst.base = detail::pb_from(doc);
    inst.threshold = detail::rational_from(detail::field(doc, "threshold"));
    return inst;
  }
  if (problem == "dt") {
    DTInstance inst;
    inst.costs = detail::rationals_from(detail::field(doc, "costs"));
    inst.probs = detail::rationals_from(detail::field(doc, "probs"));
    inst.outcomes = detail::labels_from(detail::field(doc, "outcomes"));
    return inst;
  }
  if (problem == "msscf") {
    MSSCfInstance inst;
    inst.costs = detail::rationals_from(detail::field(doc, "costs"));
    inst.probs = detail::rationals_from(detail::field(doc, "probs"));
    for (const auto& row : detail::field(doc, "membership")) {
      inst.member.emplace_back();
      for (const auto& x : row) inst.member.back().push_back(x.get<bool>());
    }
    inst.feedback = detail::labels_from(detail::field(doc, "feedback"));
    return inst;
  }
  if (problem == "mixture") {
    MixtureInstance inst;
    inst.costs = detail::rationals_from(detail::field(doc, "costs"));
    inst.weights = detail::rationals_from(detail::field(doc, "weights"));
    inst.epsilon = detail::rational_from(detail::field(doc, "epsilon"));
    for (const auto& row : detail::field(doc, "dists")) {
      inst.dists.emplace_back();
      for (const auto& comp : row) {
        std::vector<std::pair<Rational, Rational>> atoms;
        for (const auto& a : comp) atoms.emplace_back(detail::rational_from(a.at(0)), detail::rational_from(a.at(1)));
        inst.dists.back().emplace_back(std::move(atoms));
      }
    }
    return inst;
  }
  throw Error("unknown problem kind '" + problem + "'");
}

inline std::string dump_instance(const AnyInstance& inst) { return to_json(inst).dump(2) + "\n"; }

inline AnyInstance parse_instance(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(std::string("malformed instance file: ") + e.what());
  }
  return instance_from_json(doc);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

inline AnyInstance load_instance(const std::string& path) { return parse_instance(read_file(path)); }

inline Json to_json(const PolicyTree& t) {
  Json node;
  node["kind"] = kind_name(t.kind());
  if (t.kind() == PolicyTree::Kind::Act || t.kind() == PolicyTree::Kind::Identified) node["index"] = t.index();
  if (t.is_act()) {
    Json kids = Json::array();
    for (const auto& b : t.children()) kids.push_back(Json{{"label", b.label}, {"subtree", to_json(b.subtree)}});
    node["children"] = kids;
  }
  return node;
}

inline PolicyTree policy_from_json(const Json& node) {
  std::string kind = detail::field(node, "kind").get<std::string>();
  if (kind == "stop") return PolicyTree::stop();
  if (kind == "outside") return PolicyTree::outside();
  if (kind == "identified") return PolicyTree::identified(detail::field(node, "index").get<std::size_t>());
  if (kind != "act") throw Error("unknown policy node kind '" + kind + "'");
  PolicyTree t = PolicyTree::act(detail::field(node, "index").get<std::size_t>());
  for (const auto& b : detail::field(node, "children")) {
    t.with(detail::field(b, "label").get<std::string>(), policy_from_json(detail::field(b, "subtree")));
  }
  return t;
}

}  // namespace pandora
