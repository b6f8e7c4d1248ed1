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
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "holant/gadget.hpp"

namespace holant {

struct CspConstraint {
  std::string fn;
  std::vector<int> args;  // variable indices
};

struct CSPInstance {
  int numVariables = 0;
  std::vector<std::string> names;  // optional display names, one per variable
  std::vector<CspConstraint> constraints;
  std::vector<int> labels;  // labeled variables v_1..v_k, repeats allowed

  std::string variableName(int v) const;
};

// Throws ParseError for unknown functions or variables, ArityError on
// tuple-length mismatch.
void checkInstance(const CSPInstance& k, const SignatureSet& fs);

// Holant grid: one equality vertex per variable, one constraint vertex per
// constraint with arguments counterclockwise, one output dangling edge per
// label. Variables touching nothing count as free loops so the Holant value
// equals Z. Rotations at equality vertices are arbitrary; use
// isPlanarInstance for an embedded grid.
Gadget toSignatureGrid(const CSPInstance& k, const SignatureSet& fs, bool withLabels = true);

// Label index -> domain value.
using Pin = std::map<int, int>;

// Z(K) (labels ignored) or Z^psi(K) when a pin is given. Computed by grid
// contraction. Throws PinError for unknown labels, missing labels or values
// outside the domain.
GQ partitionFunction(const CSPInstance& k, const SignatureSet& fs, const std::optional<Pin>& pin = std::nullopt);

struct PlanarityResult {
  bool planar = false;
  std::optional<Gadget> grid;  // validated plane grid when planar
};

// Planarity of the grid with every constraint's arguments in cyclic order
// (clockwise or counterclockwise per vertex) and labels in order on the
// outer face.
PlanarityResult isPlanarInstance(const CSPInstance& k, const SignatureSet& fs);

void checkCompatible(const SignatureSet& f, const SignatureSet& g, const std::map<std::string, std::string>& map);
CSPInstance rewriteInstance(const CSPInstance& k, const SignatureSet& f, const SignatureSet& g,
                            const std::map<std::string, std::string>& map);

struct SimpleGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
};

// Instance with constraint `fn` on every edge.
CSPInstance edgeInstance(const SimpleGraph& g, const std::string& fn);
GQ homCount(const SimpleGraph& k, const ConstraintFunction& x);

// Adjacency-matrix signature of a graph.
ConstraintFunction adjacencyFunction(const SimpleGraph& g);
SimpleGraph cycleGraph(int n);
SimpleGraph completeGraph(int n);
SimpleGraph pathGraph(int n);
SimpleGraph petersenGraph();

struct CorpusParams {
  int maxVariables = 5;
  int maxConstraints = 6;
  int count = 100;
  std::uint64_t seed = 1;
};

// Deterministic corpus of planar instances over fs: classic families first
// (by size), then random samples filtered by isPlanarInstance. Deduplicated by
// a canonical form of the constraint multiset.
std::vector<CSPInstance> planarCorpus(const SignatureSet& fs, const CorpusParams& p);
std::string canonicalForm(const CSPInstance& k);

struct CompareRecord {
  std::size_t index = 0;
  CSPInstance instance;
  GQ zF, zG;
  bool equal = true;
};

struct CompareReport {
  std::vector<CompareRecord> records;
  std::optional<std::size_t> firstRefutation;  // index into records
  bool domainSizesDiffer = false;
  CorpusParams params;
};

// Refutation harness over a planar corpus. Arity must match pairwise; the
// domain sizes may differ (then the sets are not compatible in the strict
// sense and the report says so). onRecord sees records in corpus order.
CompareReport planarEquivalenceTest(const SignatureSet& f, const SignatureSet& g,
                                    const std::map<std::string, std::string>& map, const CorpusParams& p,
                                    int jobs = 1, const std::function<void(const CompareRecord&)>& onRecord = {});

}  // namespace holant
