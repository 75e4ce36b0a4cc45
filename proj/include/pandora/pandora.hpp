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

// Umbrella header.

#pragma once

#include "pandora/corpus.hpp"
#include "pandora/evaluate.hpp"
#include "pandora/generators.hpp"
#include "pandora/instances.hpp"
#include "pandora/io.hpp"
#include "pandora/mixture.hpp"
#include "pandora/oracles.hpp"
#include "pandora/policy.hpp"
#include "pandora/rational.hpp"
#include "pandora/reductions/certificate.hpp"
#include "pandora/reductions/from_msscf.hpp"
#include "pandora/reductions/naive_threshold.hpp"
#include "pandora/reductions/phases.hpp"
#include "pandora/reductions/uniform_gadgets.hpp"
#include "pandora/simulate.hpp"
#include "pandora/solvers.hpp"
#include "pandora/value.hpp"
