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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "pandora/evaluate.hpp"

namespace pandora {

struct SimulationResult {
  double mean = 0;
  double std_error = 0;
};

/// Uniform double in [0, 1) from the top 53 bits; identical on every
/// platform, unlike std::uniform_real_distribution.
inline double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Samples an index from a discrete distribution given by rationals.
class DiscreteSampler {
 public:
  explicit DiscreteSampler(const std::vector<Rational>& probs) {
    Rational acc = 0;
    for (const auto& p : probs) {
      acc += p;
      cumulative_.push_back(to_double(acc));
    }
  }
  std::size_t operator()(std::mt19937_64& rng) const {
    double u = unit_draw(rng) * cumulative_.back();
    for (std::size_t i = 0; i < cumulative_.size(); ++i) {
      if (u < cumulative_[i]) return i;
    }
    return cumulative_.size() - 1;
  }

 private:
  std::vector<double> cumulative_;
};

/// Accumulates a sample mean and its standard error.
class RunningMean {
 public:
  void add(double x) {
    ++n_;
    double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }
  SimulationResult result() const {
    SimulationResult r;
    r.mean = mean_;
    r.std_error = n_ > 1 ? std::sqrt(m2_ / static_cast<double>(n_ - 1) / static_cast<double>(n_)) : 0.0;
    return r;
  }

 private:
  std::size_t n_ = 0;
  double mean_ = 0;
  double m2_ = 0;
};

namespace detail {

template <typename CostFn>
SimulationResult simulate_scenarios(const std::vector<Rational>& probs, std::size_t trials,
                                    std::uint64_t seed, CostFn&& cost_of) {
  if (trials == 0) throw Error("no trials");
  std::mt19937_64 rng(seed);
  DiscreteSampler draw(probs);
  std::vector<std::optional<double>> cache(probs.size());
  RunningMean acc;
  for (std::size_t t = 0; t < trials; ++t) {
    std::size_t j = draw(rng);
    if (!cache[j]) cache[j] = to_double(cost_of(j));
    acc.add(*cache[j]);
  }
  return acc.result();
}

}  // namespace detail

inline SimulationResult simulate(const PBInstance& inst, const PolicyTree& policy, std::size_t trials,
                                 std::uint64_t seed) {
  return detail::simulate_scenarios(inst.probs, trials, seed,
                                    [&](std::size_t j) { return pb_path(inst, policy, j).cost(); });
}

inline SimulationResult simulate(const ThresholdInstance& inst, const PolicyTree& policy, std::size_t trials,
                                 std::uint64_t seed) {
  return detail::simulate_scenarios(inst.base.probs, trials, seed,
                                    [&](std::size_t j) { return threshold_trace(inst, policy, j).cost; });
}

inline SimulationResult simulate(const DTInstance& inst, const PolicyTree& policy, std::size_t trials,
                                 std::uint64_t seed) {
  return detail::simulate_scenarios(inst.probs, trials, seed,
                                    [&](std::size_t j) { return dt_cost(inst, policy, j); });
}

inline SimulationResult simulate(const MSSCfInstance& inst, const PolicyTree& policy, std::size_t trials,
                                 std::uint64_t seed) {
  return detail::simulate_scenarios(inst.probs, trials, seed,
                                    [&](std::size_t j) { return msscf_cost(inst, policy, j); });
}

}  // namespace pandora
