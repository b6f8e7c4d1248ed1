// Copyright 2026 The Holant Toolkit Authors
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

#include <vector>

#include "holant/scalar.hpp"

namespace holant {

// Dense factor over distinct variables; table is row-major, vars[0] most significant.
struct Factor {
  std::vector<int> vars;
  std::vector<GQ> table;
};

// Builds a factor from a function applied to a variable tuple that may repeat
// variables (diagonal extraction).
Factor makeFactor(int q, const std::vector<int>& args, const std::vector<GQ>& entries);

// Sum-product over all variables 0..numVars-1 with domain [q]. The result is
// indexed by `outputs` (distinct variables, first most significant). Unused
// non-output variables contribute a factor q. Greedy min-size elimination;
// intermediate factors beyond the entry cap raise ResourceError.
std::vector<GQ> contract(int q, int numVars, std::vector<Factor> factors, const std::vector<int>& outputs);

}  // namespace holant
