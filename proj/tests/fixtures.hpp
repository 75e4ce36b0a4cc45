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

// Small hand-built instances shared by the unit tests.

#pragma once

#include <string>
#include <vector>

#include "pandora/instances.hpp"
#include "pandora/rational.hpp"

namespace pandora::testing {

inline Rational Q(const char* s) { return parse_rational(s); }
inline Value F(long v) { return Value::finite(Rational(v)); }

/// c=(1,1), p=(1/2,1/2), v=[[0,10],[10,0]].
inline PBInstance two_by_two() {
  PBInstance inst;
  inst.costs = {1, 1};
  inst.probs = {Q("1/2"), Q("1/2")};
  inst.values = {{F(0), F(10)}, {F(10), F(0)}};
  return inst;
}

inline PBInstance single_box(long cost, long value) {
  PBInstance inst;
  inst.costs = {cost};
  inst.probs = {1};
  inst.values = {{F(value)}};
  return inst;
}

/// Three uniform scenarios, unit tests with outcomes (a,a,b) and (a,b,b).
inline DTInstance three_scenario_dt() {
  DTInstance inst;
  inst.costs = {1, 1};
  inst.probs = {Q("1/3"), Q("1/3"), Q("1/3")};
  inst.outcomes = {{"a", "a", "b"}, {"a", "b", "b"}};
  return inst;
}

/// Two disjoint singleton sets, unit costs, feedback names the set.
inline MSSCfInstance two_singletons(Rational p0 = Rational(1, 2)) {
  MSSCfInstance inst;
  inst.costs = {1, 1};
  inst.probs = {p0, 1 - p0};
  inst.member = {{true, false}, {false, true}};
  inst.feedback = {{"s0", "s1"}, {"s0", "s1"}};
  return inst;
}

}  // namespace pandora::testing
