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

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "holant/tensor.hpp"

namespace holant {

using FunctionPtr = std::shared_ptr<const ConstraintFunction>;

struct NamedFunction {
  std::string name;
  FunctionPtr f;
};

// Name-keyed signature set; all members share q.
class SignatureSet {
 public:
  SignatureSet() = default;
  explicit SignatureSet(int q) : q_(q) {}
  void add(const std::string& name, ConstraintFunction f);
  bool has(const std::string& name) const { return fns_.count(name) != 0; }
  const FunctionPtr& get(const std::string& name) const;
  const std::map<std::string, FunctionPtr>& all() const { return fns_; }
  int q() const { return q_; }
  std::size_t size() const { return fns_.size(); }
  int maxArity() const;

 private:
  int q_ = 0;
  std::map<std::string, FunctionPtr> fns_;
};

enum class VertexKind { Equality, Constraint };

struct Vertex {
  VertexKind kind = VertexKind::Equality;
  int fn = -1;        // index into Gadget::functions
  bool cw = false;    // arguments laid out clockwise
  bool conj = false;  // value is the conjugate of the function
  std::vector<int> rot;  // incident half-edges, counterclockwise
  bool removed = false;  // pending deletion by Gadget::compact
};

struct HalfEdge {
  int vertex = -1;
  int twin = -1;  // -1 for a dangling edge
};

// Planar Holant(F | EQ) gadget as a rotation system.
//
// dangling lists the dangling half-edges counterclockwise around the outer
// face: outputs o_1..o_m top to bottom, then inputs i_1..i_d bottom to top.
// freeLoops counts closed equality circles, each worth a factor q.
struct Gadget {
  int q = 0;
  std::vector<NamedFunction> functions;
  std::vector<Vertex> vertices;
  std::vector<HalfEdge> halfEdges;
  std::vector<int> dangling;
  int m = 0;
  int d = 0;
  int freeLoops = 0;

  int addVertex(Vertex v);
  int addHalfEdge(int vertex);
  void link(int a, int b);
  int functionIndex(const std::string& name, const FunctionPtr& f);
  int numConstraints() const;
  int degree(int v) const { return static_cast<int>(vertices[v].rot.size()); }
  // Position of half-edge h in its vertex's rotation.
  int rotIndex(int h) const;
  // Counterclockwise successor of h around its vertex.
  int next(int h) const;
  int prev(int h) const;
  // Half-edge feeding argument j of a constraint vertex.
  int argHalfEdge(int v, int j) const;
  // Drops isolated equality vertices, removes dead half-edges and renumbers.
  void compact();
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> errors;
  int faces = 0;
};

ValidationReport validate(const Gadget& k, bool requirePlanar = true);
void requireValid(const Gadget& k);

// Tensor indexed by the dangling edges in counterclockwise order.
ConstraintFunction danglingTensor(const Gadget& k);
Matrix signatureMatrix(const Gadget& k);
Matrix signatureMatrix(const Gadget& k, int m, int d);

struct ComposeOptions {
  bool mergeEqualities = true;
};
Gadget compose(const Gadget& k1, const Gadget& k2, ComposeOptions opt = {});
Gadget tensorProduct(const Gadget& k1, const Gadget& k2);
Gadget daggerGadget(const Gadget& k);
Gadget emptyGadget(int q);
// I^{⊗k}
Gadget identityGadget(int q, int k);

Gadget elementaryE(int q, int m, int d);
enum class Orientation { CCW, CW };
Gadget elementaryF(const std::string& name, const FunctionPtr& f, int r, int m, int d,
                   Orientation o = Orientation::CCW, bool conj = false);

// Formal linear combination of gadgets sharing (m, d).
struct QuantumGadget {
  std::vector<std::pair<GQ, Gadget>> terms;
  Matrix signature() const;
};

// Expression over elementary gadgets.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct LeafSpec {
  enum Kind { Empty, E, F } kind = Empty;
  int m = 0;
  int d = 0;
  std::string fn;   // F only
  int rot = 0;      // rotation of the function
  bool conj = false;
  bool dagger = false;  // leaf is the dagger of the CCW (rot, d, m) gadget
};

struct Expr {
  enum Op { Leaf, Compose, Tensor, Dagger } op = Leaf;
  LeafSpec leaf;
  ExprPtr a, b;
  int m = 0;
  int d = 0;
};

ExprPtr leafExpr(LeafSpec l);
ExprPtr emptyExpr();
ExprPtr eExpr(int m, int d);
ExprPtr idExpr(int k);
ExprPtr composeExpr(ExprPtr a, ExprPtr b);
ExprPtr tensorExpr(ExprPtr a, ExprPtr b);
ExprPtr daggerExpr(ExprPtr a);

Matrix leafMatrix(const LeafSpec& l, const SignatureSet& fs);
Gadget leafGadget(const LeafSpec& l, const SignatureSet& fs);
Matrix evalExpr(const ExprPtr& e, const SignatureSet& fs);
// M(e) B, applying tensor factors to digit slices so identity padding is never
// materialized.
Matrix applyExpr(const ExprPtr& e, const Matrix& b, const SignatureSet& fs);
// Same value as evalExpr, computed through applyExpr.
Matrix evalExprSliced(const ExprPtr& e, const SignatureSet& fs);
Gadget buildGadget(const ExprPtr& e, const SignatureSet& fs);
std::string exprToString(const ExprPtr& e);
int exprLeafCount(const ExprPtr& e);

// Lower every leaf to the generators E^{1,0}, E^{1,2} and F^{n,0} (conjugate
// leaves use the conjugated F^{n,0}), using pivot chains for F leaves.
ExprPtr expandToGenerators(const ExprPtr& e, const SignatureSet& fs);
// True iff every leaf is E^{1,0}, E^{1,2}, an F^{n,0}, or Empty; offending
// leaves are appended to bad.
bool auditGenerators(const ExprPtr& e, const SignatureSet& fs, std::vector<std::string>* bad = nullptr);

// Chain of E^{2,0}, E^{0,2} and I gadgets turning F^{m1,d1} into (F^{(r)})^{m2,d2}.
ExprPtr pivotChainExpr(const std::string& fn, int n, int m1, int d1, int r, int m2, int d2,
                       bool conj = false);
Gadget pivotChain(const SignatureSet& fs, const std::string& fn, int m1, int d1, int r, int m2, int d2);

}  // namespace holant
