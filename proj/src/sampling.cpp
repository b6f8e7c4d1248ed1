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

#include "holant/sampling.hpp"

#include <string>
#include <vector>

#include "holant/errors.hpp"

namespace holant {

namespace {

int pick(SampleRng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

ExprPtr sampleLeaf(SampleRng& rng, const SignatureSet& fs, int m, int d) {
  std::vector<std::string> fitting;
  for (const auto& [name, f] : fs.all())
    if (f->arity() == m + d) fitting.push_back(name);
  if (fitting.empty() || pick(rng, 0, 3) == 0) return m + d == 0 ? emptyExpr() : eExpr(m, d);
  LeafSpec l;
  l.kind = LeafSpec::F;
  l.fn = fitting[pick(rng, 0, static_cast<int>(fitting.size()) - 1)];
  if (m + d == 0) return leafExpr(l);
  l.rot = pick(rng, 0, m + d - 1);
  l.conj = pick(rng, 0, 3) == 0;
  // a dagger leaf has the CCW gadget's shape (d, m) before the flip
  l.dagger = pick(rng, 0, 2) == 0;
  l.m = m;
  l.d = d;
  return leafExpr(l);
}

}  // namespace

ExprPtr sampleExpr(SampleRng& rng, const SignatureSet& fs, int m, int d, int depth) {
  int choice = depth <= 0 ? 0 : pick(rng, 0, 5);
  if (choice == 0) return sampleLeaf(rng, fs, m, d);
  if (choice <= 2) {
    int k = pick(rng, 0, 3);
    return composeExpr(sampleExpr(rng, fs, m, k, depth - 1), sampleExpr(rng, fs, k, d, depth - 1));
  }
  if (choice <= 4) {
    int m1 = pick(rng, 0, m), d1 = pick(rng, 0, d);
    return tensorExpr(sampleExpr(rng, fs, m1, d1, depth - 1), sampleExpr(rng, fs, m - m1, d - d1, depth - 1));
  }
  return daggerExpr(sampleExpr(rng, fs, d, m, depth - 1));
}

SampledGadget samplePlanarGadget(SampleRng& rng, const SignatureSet& fs, int m, int d, int maxVertices, int depth,
                                 int maxTries) {
  for (int t = 0; t < maxTries; ++t) {
    ExprPtr e = sampleExpr(rng, fs, m, d, depth);
    Gadget g = buildGadget(e, fs);
    if (static_cast<int>(g.vertices.size()) <= maxVertices) return {e, std::move(g)};
  }
  throw ResourceError("no sampled gadget with at most " + std::to_string(maxVertices) + " vertices");
}

}  // namespace holant
