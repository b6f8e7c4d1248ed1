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

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "holant/csp.hpp"
#include "holant/gadget.hpp"

namespace holant {

struct IntertwinerMember {
  Matrix matrix;  // equals M(buildGadget(expr))
  ExprPtr expr;
  int size = 0;  // vertices in the expression
};

struct IntertwinerBasis {
  int m = 0, d = 0;
  int budget = 0;
  int maxDangling = 0;
  std::vector<IntertwinerMember> members;  // linearly independent, in generation order
  RowEchelon rref;                         // over vectorized q^m x q^d matrices
  std::size_t dimension() const { return members.size(); }
};

struct IntertwinerOptions {
  int budget = 8;        // total vertices of a generated expression
  int maxDangling = -1;  // shape cap m'+d' on intermediates; -1: max(m+d, max arity) + 2
};

// Spans of M(Q) over expressions in E^{1,0}, E^{1,2}, F^{n,0}, their daggers
// and identities, closed under ∘, ⊗, † up to the budget. Spans are kept per
// shape, so products only combine basis members (bilinearity). Deterministic.
IntertwinerBasis generateIntertwiners(const SignatureSet& fs, int m, int d, const IntertwinerOptions& opt = {});

// Vectorization of a q^m x q^d matrix used by the bases (row-major).
std::vector<GQ> vectorize(const Matrix& a);
bool inSpan(const IntertwinerBasis& b, const Matrix& a);

struct Separation {
  int x = 0, y = 0;
  int member = -1;  // index into the (1,0) basis
  CSPInstance instance;  // one label
  SignatureSet functions;  // fs plus conjugates used by the instance
  GQ zx, zy;
  bool planar = false;
};

struct OrbitPartition {
  std::vector<int> classOf;  // element -> class id, classes numbered by first element
  int classes = 0;
  IntertwinerBasis basis;
  std::vector<Separation> separations;  // one per pair of classes, via first elements
  static constexpr const char* semantics = "separations are sound; merges are inconclusive";
};

// Common refinement of level sets of the (1,0) intertwiners. Separated
// elements lie in different orbits; merged ones may or may not.
OrbitPartition orbitCoarsening(const SignatureSet& fs, int budget = 8);

// 1-labeled #CSP instance from a (1,0) gadget: equality classes become
// variables, constraint vertices constraints (conjugated ones use "<fn>*"
// added to fs), the dangling edge the label.
std::pair<CSPInstance, SignatureSet> gadgetToLabeledInstance(const Gadget& g, const SignatureSet& fs);

struct PairColoring {
  int q = 0;
  std::vector<int> color;  // color[u*q+v]
  int classCount = 0;
  int rounds = 0;
  int at(int u, int v) const { return color[u * q + v]; }
  Matrix classMatrix(int c) const;
};

// Weisfeiler-Leman pair refinement from (A_uv, A_vu, u == v) to a fixed point.
PairColoring coherentClosure(const Matrix& a);
PairColoring coherentClosure(const ConstraintFunction& a);

// Support graph of the marginal X_{uv} = Σ F_{x..uv}, symmetrized, is connected.
bool isProjectivelyConnected(const ConstraintFunction& f);
// X for isProjectivelyConnected.
ConstraintFunction marginalGraph(const ConstraintFunction& f);

struct GammaAugmentation {
  SignatureSet f;                 // F' over [q+1], 0_F = q
  std::optional<SignatureSet> g;  // G' when a partner set was given
  GQ gamma;
  int zero = 0;  // index of the new element
};

// Appends 0_F as the last element. Functions of arity n ≥ 2 get γ at
// (0_F,..,0_F,c), c ≠ 0_F; unary ones get 0 at 0_F. γ = 1 + max over pairs of
// (Σ|f| + max|g|), with |a+bi| bounded by |a|+|b|; without a partner G = F.
GammaAugmentation gammaAugment(const SignatureSet& f, const SignatureSet* g = nullptr,
                               const std::map<std::string, std::string>* map = nullptr);

struct AllOnesAugmentation {
  SignatureSet functions;
  std::string name;  // added function
  ExprPtr witness;   // E^{1,0} ∘ E^{0,1}
};
AllOnesAugmentation allOnesAugment(const SignatureSet& fs);

// Classical symmetries by backtracking. perm maps V(F) -> V(G) with
// G(π x) = F(x) for every mapped pair. The callback returns false to stop.
std::size_t forEachIsomorphism(const SignatureSet& f, const SignatureSet& g,
                               const std::map<std::string, std::string>& map,
                               const std::function<bool(const std::vector<int>&)>& visit);
std::optional<std::vector<int>> findIsomorphism(const SignatureSet& f, const SignatureSet& g,
                                                const std::map<std::string, std::string>& map);
std::vector<std::vector<int>> automorphisms(const SignatureSet& fs);
// Orbits of the automorphism group on ordered pairs, as a coloring.
PairColoring classicalOrbitals(const SignatureSet& fs);

}  // namespace holant
