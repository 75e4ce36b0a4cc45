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

#include <functional>
#include <string>
#include <utility>

#include "pandora/policy.hpp"

namespace pandora {

/// A forward instance map together with the map that turns a policy for the
/// forward instance back into one for the source instance. The back map
/// captures only immutable copies of the instances.
template <typename Target>
struct Certificate {
  Target forward;
  std::function<PolicyTree(const PolicyTree&)> back;
  std::string claimed_bound;

  PolicyTree back_translate(const PolicyTree& target_policy) const { return back(target_policy); }
};

}  // namespace pandora
