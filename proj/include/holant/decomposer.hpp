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

#include <optional>
#include <string>
#include <vector>

#include "holant/gadget.hpp"

namespace holant {

enum class Rule {
  NewLeftE,
  NewLeftF,
  NewRightE,
  NewRightF,
  NewTopE,
  NewTopF,
  NewBottomE,
  NewBottomF,
  NoDanglingF,
  NoDanglingE,
};

const char* ruleName(Rule r);

enum class Side { Left, Right, Top, Bottom, None };

// A vertex of the stub-suppressed view whose dangling ends are consecutive.
struct Candidate {
  int vertex = -1;  // -1: no dangling edges, the NoDangling rule applies
  Side side = Side::None;
  int start = 0;  // first dangling position of the block (counterclockwise)
  int len = 0;
  bool pocket = false;  // constraint vertex enclosing a region without dangling edges
};

// Lowest-id vertex whose dangling ends (arms of constraint vertices included)
// are consecutive and match one of the four extraction sides, tried in the
// order Left, Right, Top, Bottom. Constraint vertices with pockets are skipped.
// Returns nullopt only when dangling edges exist but every consecutive vertex
// is a pocketed constraint vertex.
std::optional<Candidate> findConsecutiveVertex(const Gadget& k);

struct DecompositionStep {
  Rule rule = Rule::NoDanglingF;
  int vertex = -1;  // vertex id in the step's input gadget
  LeafSpec extracted;
  // identity padding: above (r) and below (t) the extracted piece; for the
  // top/bottom rules r counts the wrapped inputs and t the untouched outputs
  int r = 0;
  int t = 0;
  int m = 0;  // outputs of the extracted piece on the K side
  int d = 0;  // edges joining the piece to the residual
  bool pocket = false;
  std::string note;
  int inM = 0, inD = 0;
  Gadget residual;
};

struct Decomposition {
  std::vector<DecompositionStep> steps;
  LeafSpec final;
  int finalM = 0, finalD = 0;
  ExprPtr expr;  // full expression over elementary leaves
};

// Measures reported per residual to check progress.
struct ProgressMeasure {
  int constraints = 0;
  int loops = 0;
  int hatEqualities = 0;  // equality vertices not suppressed as stubs
  int highEqualities = 0;  // equality vertices of arity > 2
};
ProgressMeasure progressMeasure(const Gadget& k);

SignatureSet functionsOf(const Gadget& k);

// Recognizes elementary gadgets E^{m,d}, (F^{(r)})^{m,d} (either
// orientation) and the empty gadget.
std::optional<LeafSpec> elementaryLeaf(const Gadget& k);

Decomposition decompose(const Gadget& k);

// Expression for the step's input given an expression for its residual.
ExprPtr stepExpr(const DecompositionStep& s, ExprPtr residual);

struct SequenceFactor {
  int r = 0, m = 0, d = 0, t = 0;
  LeafSpec leaf;
};

// Ordered factors V_1..V_p of a closed grid's decomposition (NoDangling and
// NewLeft steps only). Throws InternalError otherwise.
std::vector<SequenceFactor> factorSequence(const Decomposition& dec);
Matrix factorMatrix(const SequenceFactor& f, const SignatureSet& fs);
// Conditions on r/m/d/t linking consecutive factors.
bool shapeChainHolds(const std::vector<SequenceFactor>& seq, std::string* why = nullptr);
// Product of the factor sequence (closed grids) or the full expression.
Matrix replayDecomposition(const Decomposition& dec, const SignatureSet& fs);

}  // namespace holant
