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

#include <cstdint>
#include <random>

#include "holant/gadget.hpp"

namespace holant {

using SampleRng = std::mt19937_64;

// Random expression of shape (m, d) over E leaves and F leaves of fitting
// arity (any rotation, orientation or conjugation), nested up to depth.
ExprPtr sampleExpr(SampleRng& rng, const SignatureSet& fs, int m, int d, int depth);

struct SampledGadget {
  ExprPtr expr;
  Gadget gadget;
};

// Rejection-samples sampleExpr until the built gadget has at most
// maxVertices vertices; gives up with ResourceError after maxTries draws.
SampledGadget samplePlanarGadget(SampleRng& rng, const SignatureSet& fs, int m, int d, int maxVertices,
                                 int depth = 3, int maxTries = 10000);

}  // namespace holant
