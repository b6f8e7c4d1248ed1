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

#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "holant/decomposer.hpp"
#include "holant/gadget.hpp"

namespace holant {

// Per-scalar helpers; GQ is exact, complex<double> compares against epsilon.
template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<GQ> {
  static constexpr bool exact = true;
  static GQ fromGQ(const GQ& x) { return x; }
  static GQ conj(const GQ& x) { return x.conj(); }
  static double abs2(const GQ& x) { return x.norm2().get_d(); }
  static bool isZero(const GQ& x) { return x.isZero(); }
  static void fma(GQ& acc, const GQ& a, const GQ& b) { acc.addProduct(a, b); }
};

template <>
struct ScalarTraits<std::complex<double>> {
  static constexpr bool exact = false;
  static std::complex<double> fromGQ(const GQ& x) { return x.toComplex(); }
  static std::complex<double> conj(const std::complex<double>& x) { return std::conj(x); }
  static double abs2(const std::complex<double>& x) { return std::norm(x); }
  static bool isZero(const std::complex<double>& x) { return x == 0.0; }
  static void fma(std::complex<double>& acc, const std::complex<double>& a, const std::complex<double>& b) {
    acc += a * b;
  }
};

// Dense dim x dim operator.
template <class T>
class Op {
 public:
  Op() = default;
  explicit Op(int dim) : dim_(dim), a_(static_cast<std::size_t>(dim) * dim, T(0)) {}
  static Op identity(int dim);
  static Op scalar(int dim, const T& s);

  int dim() const { return dim_; }
  const T& operator()(int r, int c) const { return a_[static_cast<std::size_t>(r) * dim_ + c]; }
  T& operator()(int r, int c) { return a_[static_cast<std::size_t>(r) * dim_ + c]; }

  Op adjoint() const;
  Op& operator+=(const Op& o);
  Op& operator-=(const Op& o);
  Op scaled(const T& s) const;
  // this += s * o
  void addScaled(const Op& o, const T& s);
  // this += a * b
  void addProduct(const Op& a, const Op& b);
  // Frobenius norm, an upper bound on the operator norm.
  double norm() const;
  bool isZero() const;

  friend Op operator*(const Op& a, const Op& b) {
    Op r(a.dim_);
    r.addProduct(a, b);
    return r;
  }
  friend Op operator+(Op a, const Op& b) { return a += b; }
  friend Op operator-(Op a, const Op& b) { return a -= b; }
  bool operator==(const Op& o) const { return dim_ == o.dim_ && a_ == o.a_; }

 private:
  int dim_ = 0;
  std::vector<T> a_;
};

// Quantum permutation matrix: q x q array of dim x dim operators.
template <class T>
struct QPM {
  int q = 0;
  int dim = 1;
  std::vector<Op<T>> u;  // row-major, u[i*q+j] = u_{ij}

  const Op<T>& at(int i, int j) const { return u[static_cast<std::size_t>(i) * q + j]; }
  Op<T>& at(int i, int j) { return u[static_cast<std::size_t>(i) * q + j]; }
};

using ExactQPM = QPM<GQ>;
using FloatQPM = QPM<std::complex<double>>;

constexpr double kDefaultEpsilon = 1e-9;

// Matrix of operators.
template <class T>
struct OperatorMatrix {
  std::size_t rows = 0, cols = 0;
  int dim = 1;
  std::vector<Op<T>> e;

  OperatorMatrix() = default;
  OperatorMatrix(std::size_t r, std::size_t c, int dim);
  const Op<T>& operator()(std::size_t r, std::size_t c) const { return e[r * cols + c]; }
  Op<T>& operator()(std::size_t r, std::size_t c) { return e[r * cols + c]; }
  // s * 1 in every entry of a scalar matrix
  static OperatorMatrix lift(const Matrix& m, int dim);
};

// Largest entry norm of a - b ⊗ 1.
template <class T>
double residualAgainst(const OperatorMatrix<T>& a, const Matrix& b);

struct QPMReport {
  bool ok = true;
  double projector = 0, rowSum = 0, colSum = 0, orthogonality = 0, unitarity = 0;
  double maxViolation = 0;
  double epsilon = 0;
  std::vector<std::string> failures;
};

// Exact mode ignores eps and requires every relation to hold exactly.
template <class T>
QPMReport validateQPM(const QPM<T>& u, double eps = kDefaultEpsilon);

template <class T>
QPM<T> convertQPM(const ExactQPM& u);
ExactQPM liftPermutation(const std::vector<int>& perm);
// Block magic unitary from P = [[1,0],[0,0]] and Q = ½[[1,1],[1,1]] (q = 4, dim 2).
ExactQPM blockMagicUnitary();
// u_{ij} replaced by u_{ij} + delta * E_{00}; used to exhibit failures.
template <class T>
QPM<T> perturb(const QPM<T>& u, int i, int j, const T& delta);

// U^{⊗k}; entry (x, y) = u_{x1y1}..u_{xkyk}. Throws ResourceError above the cap.
template <class T>
OperatorMatrix<T> tensorPower(const QPM<T>& u, int k);

// Digit-wise products, never forming U^{⊗k}. The operand has q^k rows
// (left) or q^k columns (right).
template <class T>
OperatorMatrix<T> leftPower(const QPM<T>& u, int k, const OperatorMatrix<T>& a, bool dagger = false);
template <class T>
OperatorMatrix<T> rightPower(const OperatorMatrix<T>& a, const QPM<T>& u, int k, bool dagger = false);
// A (I_pre ⊗ X ⊗ I_post) with scalar X.
template <class T>
OperatorMatrix<T> rightApplyOnSlice(const OperatorMatrix<T>& a, const Matrix& x, std::size_t pre, std::size_t post);

// Residual of U^{⊗k} e_k - e_k ⊗ 1 with e_k = E^{k,0}.
template <class T>
double equalityFixationResidual(const QPM<T>& u, int k, bool* exactZero = nullptr);

struct SplitCheck {
  int m = 0, d = 0;
  bool pass = false;
  double residual = 0;
};

struct IsoCheck {
  bool pass = false;  // U^{⊗n} f = g · 1
  double residual = 0;
  std::vector<SplitCheck> splits;  // U^{⊗m}F^{m,d} = G^{m,d}U^{⊗d} for every m
  bool splitsAgree = true;
};

// Throws ArityError on shape mismatch.
template <class T>
IsoCheck checkQuantumIso(const QPM<T>& u, const ConstraintFunction& f, const ConstraintFunction& g,
                         double eps = kDefaultEpsilon);
template <class T>
SplitCheck checkSplit(const QPM<T>& u, const ConstraintFunction& f, const ConstraintFunction& g, int m,
                      double eps = kDefaultEpsilon);

struct TransportCheck {
  bool base = false;
  bool rotated = false;
  bool daggered = false;
  bool consistent = false;
};

// Intertwining at (m, d) for (F, G), for (F^{(r)}, G^{(r)}) and, when
// reflected, for (F†, G†) at (d, m).
template <class T>
TransportCheck invarianceTransport(const QPM<T>& u, const ConstraintFunction& f, const ConstraintFunction& g,
                                   int m, int r, bool reflected, double eps = kDefaultEpsilon);

// Equality leaves wider than this are not conjugated one by one.
constexpr int kLeafCheckEqualityArity = 4;

struct QuantumHolantResult {
  GQ scalarF, scalarG;
  GQ scalarGDirect;  // contraction of the rewritten grid
  double operatorResidual = 0;
  std::vector<double> leafResiduals;  // one per checked factor, in sequence order
  int factors = 0;
  bool equal = false;
  bool operatorExact = false;  // exact mode and residual exactly zero
};

// Closed planar grid over fsF; map sends every function used to one in fsG.
// Throws WitnessError when U is not a QPM or a mapped pair fails checkQuantumIso.
template <class T>
QuantumHolantResult quantumHolantEvaluate(const Gadget& grid, const QPM<T>& u, const SignatureSet& fsF,
                                          const SignatureSet& fsG, const std::map<std::string, std::string>& map,
                                          double eps = kDefaultEpsilon);

// Isomorphism game over V(F) ⊔ V(G) for binary F, G. Element ids: 0..qF-1 are
// V(F), qF..qF+qG-1 are V(G).
struct GameInstance {
  ConstraintFunction f, g;
  int size() const { return f.q() + g.q(); }
};
GameInstance makeGame(const ConstraintFunction& f, const ConstraintFunction& g);
bool gameReferee(const GameInstance& game, int xA, int yA, int xB, int yB);

// Deterministic strategy: answer[x] for each input x (both players use it).
struct StrategyVerdict {
  bool perfect = true;
  int xA = -1, xB = -1;  // first losing input pair
};
StrategyVerdict checkStrategy(const GameInstance& game, const std::vector<int>& alice, const std::vector<int>& bob);
// Strategy from a bijection V(F) -> V(G): x -> sigma(x), y -> sigma^{-1}(y).
std::vector<int> bijectionStrategy(const GameInstance& game, const std::vector<int>& sigma);
// Exhaustive search for a perfect deterministic strategy. Perfect ones are
// synchronous (same input forces the same answer), so a backtracking search
// over one answer function covers all of them.
std::optional<std::vector<int>> findPerfectStrategy(const GameInstance& game);

}  // namespace holant
