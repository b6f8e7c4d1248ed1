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


#include "holant/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "holant/errors.hpp"

namespace holant {

// ---- Op ----

template <class T>
Op<T> Op<T>::identity(int dim) {
  return scalar(dim, T(1));
}

template <class T>
Op<T> Op<T>::scalar(int dim, const T& s) {
  Op r(dim);
  for (int i = 0; i < dim; ++i) r(i, i) = s;
  return r;
}

template <class T>
Op<T> Op<T>::adjoint() const {
  Op r(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) r(j, i) = ScalarTraits<T>::conj((*this)(i, j));
  return r;
}

template <class T>
Op<T>& Op<T>::operator+=(const Op& o) {
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

template <class T>
Op<T>& Op<T>::operator-=(const Op& o) {
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

template <class T>
Op<T> Op<T>::scaled(const T& s) const {
  Op r = *this;
  for (auto& v : r.a_) v *= s;
  return r;
}

template <class T>
void Op<T>::addScaled(const Op& o, const T& s) {
  if (ScalarTraits<T>::isZero(s)) return;
  for (std::size_t i = 0; i < a_.size(); ++i) ScalarTraits<T>::fma(a_[i], o.a_[i], s);
}

template <class T>
void Op<T>::addProduct(const Op& a, const Op& b) {
  const int n = dim_;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const T& x = a(i, k);
      if (ScalarTraits<T>::isZero(x)) continue;
      for (int j = 0; j < n; ++j) ScalarTraits<T>::fma((*this)(i, j), x, b(k, j));
    }
}

template <class T>
double Op<T>::norm() const {
  double s = 0;
  for (const auto& v : a_) s += ScalarTraits<T>::abs2(v);
  return std::sqrt(s);
}

template <class T>
bool Op<T>::isZero() const {
  return std::all_of(a_.begin(), a_.end(), [](const T& v) { return ScalarTraits<T>::isZero(v); });
}

// ---- OperatorMatrix ----

template <class T>
OperatorMatrix<T>::OperatorMatrix(std::size_t r, std::size_t c, int dim_) : rows(r), cols(c), dim(dim_) {
  std::size_t n = r * c;
  if (c != 0 && n / c != r) throw ResourceError("operator matrix too large");
  if (n * static_cast<std::size_t>(dim_) * dim_ > entryCap()) throw ResourceError("operator matrix exceeds entry cap");
  e.assign(n, Op<T>(dim_));
}

template <class T>
OperatorMatrix<T> OperatorMatrix<T>::lift(const Matrix& m, int dim) {
  OperatorMatrix<T> r(m.rows(), m.cols(), dim);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!m(i, j).isZero()) r(i, j) = Op<T>::scalar(dim, ScalarTraits<T>::fromGQ(m(i, j)));
  return r;
}

template <class T>
double residualAgainst(const OperatorMatrix<T>& a, const Matrix& b) {
  if (a.rows != b.rows() || a.cols != b.cols()) throw ArityError("residual: shape mismatch");
  double worst = 0;
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) {
      Op<T> diff = a(i, j) - Op<T>::scalar(a.dim, ScalarTraits<T>::fromGQ(b(i, j)));
      worst = std::max(worst, diff.norm());
    }
  return worst;
}

namespace {

template <class T>
bool exactlyMatches(const OperatorMatrix<T>& a, const Matrix& b) {
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j)
      if (!(a(i, j) - Op<T>::scalar(a.dim, ScalarTraits<T>::fromGQ(b(i, j)))).isZero()) return false;
  return true;
}

template <class T>
bool withinTolerance(double residual, bool exactZero, double eps) {
  return ScalarTraits<T>::exact ? exactZero : residual <= eps;
}

std::size_t ipow(int q, int k) {
  std::size_t r = 1;
  for (int i = 0; i < k; ++i) r *= static_cast<std::size_t>(q);
  return r;
}

// Entrywise U† viewed as a q x q operator array: w_{ab} = u_{ba}†.
template <class T>
std::vector<Op<T>> daggerArray(const QPM<T>& u) {
  std::vector<Op<T>> w(u.u.size());
  for (int a = 0; a < u.q; ++a)
    for (int b = 0; b < u.q; ++b) w[a * u.q + b] = u.at(b, a).adjoint();
  return w;
}

// One digit of the row axis (left) or column axis (right), stride s.
// right: out[.. b ..] = Σ_a in[.. a ..] w_{ab}; left: out[.. b ..] = Σ_a w_{ba} in[.. a ..]
template <class T>
OperatorMatrix<T> applyDigit(const OperatorMatrix<T>& in, const std::vector<Op<T>>& w, int q, std::size_t s,
                             bool right) {
  OperatorMatrix<T> out(in.rows, in.cols, in.dim);
  const std::size_t axis = right ? in.cols : in.rows;
  const std::size_t block = s * q;
  for (std::size_t hi = 0; hi < axis; hi += block)
    for (std::size_t lo = 0; lo < s; ++lo)
      for (int a = 0; a < q; ++a) {
        std::size_t ia = hi + a * s + lo;
        for (int b = 0; b < q; ++b) {
          std::size_t ib = hi + b * s + lo;
          if (right) {
            const Op<T>& wab = w[a * q + b];
            if (wab.isZero()) continue;
            for (std::size_t r = 0; r < in.rows; ++r)
              if (!in(r, ia).isZero()) out(r, ib).addProduct(in(r, ia), wab);
          } else {
            const Op<T>& wba = w[b * q + a];
            if (wba.isZero()) continue;
            for (std::size_t c = 0; c < in.cols; ++c)
              if (!in(ia, c).isZero()) out(ib, c).addProduct(wba, in(ia, c));
          }
        }
      }
  return out;
}

}  // namespace

// ---- QPM construction and validation ----

template <class T>
QPMReport validateQPM(const QPM<T>& u, double eps) {
  QPMReport rep;
  rep.epsilon = ScalarTraits<T>::exact ? 0.0 : eps;
  const int q = u.q, dim = u.dim;
  if (q < 1 || dim < 1 || u.u.size() != static_cast<std::size_t>(q) * q) {
    rep.ok = false;
    rep.failures.push_back("shape: expected q*q entries of positive dimension");
    return rep;
  }
  for (const auto& e : u.u)
    if (e.dim() != dim) {
      rep.ok = false;
      rep.failures.push_back("shape: entry dimension differs from dim");
      return rep;
    }
  const Op<T> one = Op<T>::identity(dim);
  bool exactOk = true;
  auto record = [&](double& slot, const Op<T>& diff) {
    slot = std::max(slot, diff.norm());
    if (!diff.isZero()) exactOk = false;
  };
  double projector = 0, rowSum = 0, colSum = 0, orth = 0, unit = 0;
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) {
      const Op<T>& x = u.at(i, j);
      record(projector, x * x - x);
      record(projector, x.adjoint() - x);
    }
  for (int i = 0; i < q; ++i) {
    Op<T> r(dim), c(dim);
    for (int j = 0; j < q; ++j) {
      r += u.at(i, j);
      c += u.at(j, i);
    }
    record(rowSum, r - one);
    record(colSum, c - one);
  }
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j)
      for (int k = 0; k < q; ++k) {
        Op<T> expect = j == k ? u.at(i, j) : Op<T>(dim);
        record(orth, u.at(i, j) * u.at(i, k) - expect);  // rows
        Op<T> expectC = j == k ? u.at(j, i) : Op<T>(dim);
        record(orth, u.at(j, i) * u.at(k, i) - expectC);  // columns
      }
  // (U U†)_{ij} = Σ_k u_ik u_jk†, (U† U)_{ij} = Σ_k u_ki† u_kj
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) {
      Op<T> a(dim), b(dim);
      for (int k = 0; k < q; ++k) {
        a.addProduct(u.at(i, k), u.at(j, k).adjoint());
        b.addProduct(u.at(k, i).adjoint(), u.at(k, j));
      }
      Op<T> expect = i == j ? one : Op<T>(dim);
      record(unit, a - expect);
      record(unit, b - expect);
    }
  rep.projector = projector;
  rep.rowSum = rowSum;
  rep.colSum = colSum;
  rep.orthogonality = orth;
  rep.unitarity = unit;
  rep.maxViolation = std::max({projector, rowSum, colSum, orth, unit});
  auto check = [&](double v, const char* name) {
    bool bad = ScalarTraits<T>::exact ? v != 0.0 : v > eps;
    if (bad) rep.failures.push_back(std::string(name) + " violated (" + std::to_string(v) + ")");
  };
  check(projector, "projector");
  check(rowSum, "row sum");
  check(colSum, "column sum");
  check(orth, "orthogonality");
  check(unit, "unitarity");
  // a nonzero exact difference can round to 0.0 as a double
  if (ScalarTraits<T>::exact && !exactOk && rep.failures.empty()) rep.failures.push_back("relation violated below double precision");
  rep.ok = rep.failures.empty();
  return rep;
}

template <class T>
QPM<T> convertQPM(const ExactQPM& u) {
  QPM<T> r;
  r.q = u.q;
  r.dim = u.dim;
  for (const auto& e : u.u) {
    Op<T> o(u.dim);
    for (int i = 0; i < u.dim; ++i)
      for (int j = 0; j < u.dim; ++j) o(i, j) = ScalarTraits<T>::fromGQ(e(i, j));
    r.u.push_back(std::move(o));
  }
  return r;
}

ExactQPM liftPermutation(const std::vector<int>& perm) {
  const int q = static_cast<int>(perm.size());
  std::vector<bool> seen(q, false);
  for (int v : perm) {
    if (v < 0 || v >= q || seen[v]) throw ArityError("liftPermutation: not a permutation");
    seen[v] = true;
  }
  ExactQPM u;
  u.q = q;
  u.dim = 1;
  u.u.assign(static_cast<std::size_t>(q) * q, Op<GQ>(1));
  // row x has its 1 in column perm[x]: (U f)_x = f_{perm(x)}
  for (int x = 0; x < q; ++x) u.at(x, perm[x]) = Op<GQ>::identity(1);
  return u;
}

ExactQPM blockMagicUnitary() {
  Op<GQ> p(2), q(2), one = Op<GQ>::identity(2);
  p(0, 0) = 1;
  GQ half(mpq_class(1, 2));
  q(0, 0) = q(0, 1) = q(1, 0) = q(1, 1) = half;
  Op<GQ> zero(2);
  ExactQPM u;
  u.q = 4;
  u.dim = 2;
  u.u = {p, one - p, zero, zero,  //
         one - p, p, zero, zero,  //
         zero, zero, q, one - q,  //
         zero, zero, one - q, q};
  return u;
}

template <class T>
QPM<T> perturb(const QPM<T>& u, int i, int j, const T& delta) {
  QPM<T> r = u;
  r.at(i, j)(0, 0) += delta;
  return r;
}

// ---- tensor powers ----

template <class T>
OperatorMatrix<T> tensorPower(const QPM<T>& u, int k) {
  if (k < 0) throw ArityError("tensorPower: negative exponent");
  const std::size_t n = checkedPow(u.q, k);
  OperatorMatrix<T> r(n, n, u.dim);
  std::vector<int> x(k), y(k);
  for (std::size_t row = 0; row < n; ++row)
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t a = row, b = col;
      for (int i = k - 1; i >= 0; --i) {
        x[i] = static_cast<int>(a % u.q);
        y[i] = static_cast<int>(b % u.q);
        a /= u.q;
        b /= u.q;
      }
      Op<T> acc = Op<T>::identity(u.dim);
      for (int i = 0; i < k && !acc.isZero(); ++i) acc = acc * u.at(x[i], y[i]);
      r(row, col) = std::move(acc);
    }
  return r;
}

// U^{⊗k} A: innermost factor u_{x_k y_k} first. (U^{⊗k})† A: entries are
// u_{y_k x_k}† .. u_{y_1 x_1}†, so digit 1 goes first.
template <class T>
OperatorMatrix<T> leftPower(const QPM<T>& u, int k, const OperatorMatrix<T>& a, bool dagger) {
  if (a.rows != ipow(u.q, k)) throw ArityError("leftPower: row count is not q^k");
  const std::vector<Op<T>> w = dagger ? daggerArray(u) : u.u;
  OperatorMatrix<T> cur = a;
  for (int step = 0; step < k; ++step) {
    int j = dagger ? step + 1 : k - step;  // 1-based digit, most significant first
    cur = applyDigit(cur, w, u.q, ipow(u.q, k - j), false);
  }
  return cur;
}

// A U^{⊗k}: digit 1 first. A (U^{⊗k})†: digit k first.
template <class T>
OperatorMatrix<T> rightPower(const OperatorMatrix<T>& a, const QPM<T>& u, int k, bool dagger) {
  if (a.cols != ipow(u.q, k)) throw ArityError("rightPower: column count is not q^k");
  const std::vector<Op<T>> w = dagger ? daggerArray(u) : u.u;
  OperatorMatrix<T> cur = a;
  for (int step = 0; step < k; ++step) {
    int j = dagger ? k - step : step + 1;
    cur = applyDigit(cur, w, u.q, ipow(u.q, k - j), true);
  }
  return cur;
}

template <class T>
OperatorMatrix<T> rightApplyOnSlice(const OperatorMatrix<T>& a, const Matrix& x, std::size_t pre, std::size_t post) {
  if (a.cols != pre * x.rows() * post) throw ArityError("rightApplyOnSlice: shape mismatch");
  OperatorMatrix<T> out(a.rows, pre * x.cols() * post, a.dim);
  for (std::size_t p = 0; p < pre; ++p)
    for (std::size_t i = 0; i < x.rows(); ++i)
      for (std::size_t j = 0; j < x.cols(); ++j) {
        if (x(i, j).isZero()) continue;
        T s = ScalarTraits<T>::fromGQ(x(i, j));
        for (std::size_t t = 0; t < post; ++t) {
          std::size_t src = (p * x.rows() + i) * post + t, dst = (p * x.cols() + j) * post + t;
          for (std::size_t r = 0; r < a.rows; ++r) out(r, dst).addScaled(a(r, src), s);
        }
      }
  return out;
}

template <class T>
double equalityFixationResidual(const QPM<T>& u, int k, bool* exactZero) {
  Matrix e = flatten(equality(u.q, k), k, 0);
  auto lhs = leftPower(u, k, OperatorMatrix<T>::lift(e, u.dim));
  if (exactZero) *exactZero = exactlyMatches(lhs, e);
  return residualAgainst(lhs, e);
}

// ---- intertwining checks ----

template <class T>
SplitCheck checkSplit(const QPM<T>& u, const ConstraintFunction& f, const ConstraintFunction& g, int m, double eps) {
  if (f.arity() != g.arity()) throw ArityError("checkQuantumIso: arities differ");
  if (f.q() != u.q || g.q() != u.q) throw ArityError("checkQuantumIso: domain size differs from U");
  const int n = f.arity();
  if (m < 0 || m > n) throw ArityError("checkQuantumIso: split out of range");
  SplitCheck s;
  s.m = m;
  s.d = n - m;
  auto lhs = leftPower(u, m, OperatorMatrix<T>::lift(flatten(f, m, s.d), u.dim));
  auto rhs = rightPower(OperatorMatrix<T>::lift(flatten(g, m, s.d), u.dim), u, s.d);
  double worst = 0;
  bool zero = true;
  for (std::size_t i = 0; i < lhs.e.size(); ++i) {
    Op<T> diff = lhs.e[i] - rhs.e[i];
    worst = std::max(worst, diff.norm());
    if (zero && !diff.isZero()) zero = false;
  }
  s.residual = worst;
  s.pass = withinTolerance<T>(worst, zero, eps);
  return s;
}

template <class T>
IsoCheck checkQuantumIso(const QPM<T>& u, const ConstraintFunction& f, const ConstraintFunction& g, double eps) {
  IsoCheck r;
  const int n = f.arity();
  for (int m = 0; m <= n; ++m) r.splits.push_back(checkSplit(u, f, g, m, eps));
  // m = n is the column form U^{⊗n} f = g · 1
  r.pass = r.splits.back().pass;
  r.residual = r.splits.back().residual;
  for (const auto& s : r.splits) r.splitsAgree = r.splitsAgree && s.pass == r.pass;
  return r;
}

template <class T>
TransportCheck invarianceTransport(const QPM<T>& u, const ConstraintFunction& f, const ConstraintFunction& g, int m,
                                   int r, bool reflected, double eps) {
  TransportCheck t;
  const int n = f.arity();
  t.base = checkSplit(u, f, g, m, eps).pass;
  t.rotated = n == 0 ? t.base : checkSplit(u, rotate(f, r), rotate(g, r), m, eps).pass;
  t.daggered = reflected ? checkSplit(u, dagger(f), dagger(g), n - m, eps).pass : t.base;
  t.consistent = t.base == t.rotated && t.base == t.daggered;
  return t;
}

// ---- Quantum Holant ----

template <class T>
QuantumHolantResult quantumHolantEvaluate(const Gadget& grid, const QPM<T>& u, const SignatureSet& fsF,
                                          const SignatureSet& fsG, const std::map<std::string, std::string>& map,
                                          double eps) {
  requireValid(grid);
  if (grid.m != 0 || grid.d != 0) throw ArityError("quantumHolantEvaluate: grid has dangling edges");
  if (grid.q != u.q) throw WitnessError("quantumHolantEvaluate: U has the wrong size");
  QPMReport rep = validateQPM(u, eps);
  if (!rep.ok) throw WitnessError("quantumHolantEvaluate: U is not a quantum permutation matrix: " + rep.failures[0]);

  SignatureSet used = functionsOf(grid), renamed(grid.q);
  for (const auto& [name, fp] : used.all()) {
    auto it = map.find(name);
    if (it == map.end()) throw WitnessError("quantumHolantEvaluate: no image for " + name);
    if (!fsG.has(it->second)) throw WitnessError("quantumHolantEvaluate: unknown function " + it->second);
    if (fsF.has(name) && *fsF.get(name) != *fp) throw WitnessError("quantumHolantEvaluate: grid disagrees with F on " + name);
    const auto& gp = fsG.get(it->second);
    if (gp->arity() != fp->arity() || gp->q() != fp->q())
      throw WitnessError("quantumHolantEvaluate: " + name + " and " + it->second + " differ in shape");
    if (!checkQuantumIso(u, *fp, *gp, eps).pass)
      throw WitnessError("quantumHolantEvaluate: U does not carry " + name + " to " + it->second);
    renamed.add(name, *gp);
  }

  QuantumHolantResult res;
  Decomposition dec = decompose(grid);
  res.scalarF = replayDecomposition(dec, used)(0, 0);
  res.scalarG = replayDecomposition(dec, renamed)(0, 0);
  Gadget rewritten = grid;
  for (auto& nf : rewritten.functions) nf.f = renamed.get(nf.name);
  res.scalarGDirect = danglingTensor(rewritten)[0];

  auto seq = factorSequence(dec);
  res.factors = static_cast<int>(seq.size());
  const int dim = u.dim;
  bool allExact = true;

  // per factor: U^{⊗m} X_F (U^{⊗d})† = X_G ⊗ 1, once per distinct leaf. Wide
  // equality leaves are skipped; they cost q^{m+d} operators and follow
  // from equality fixation.
  std::map<std::string, std::pair<double, bool>> seen;
  for (const auto& f : seq) {
    const LeafSpec& l = f.leaf;
    if (l.kind != LeafSpec::F && l.m + l.d > kLeafCheckEqualityArity) continue;
    std::string key = std::to_string(l.kind) + ":" + std::to_string(l.m) + ":" + std::to_string(l.d) + ":" + l.fn +
                      ":" + std::to_string(l.rot) + ":" + std::to_string(l.conj) + std::to_string(l.dagger);
    auto it = seen.find(key);
    if (it == seen.end()) {
      Matrix xf = leafMatrix(l, used), xg = leafMatrix(l, renamed);
      auto conj = rightPower(leftPower(u, f.m, OperatorMatrix<T>::lift(xf, dim)), u, f.d, true);
      it = seen.emplace(key, std::make_pair(residualAgainst(conj, xg), exactlyMatches(conj, xg))).first;
    }
    res.leafResiduals.push_back(it->second.first);
    allExact = allExact && it->second.second;
  }

  // V_1 (U^{⊗w_1})† [U^{⊗w_1} V_2 (U^{⊗w_2})†] .. U^{⊗w_{p-1}} V_p, left to right
  auto slice = [&](const SequenceFactor& f) {
    return std::pair<std::size_t, std::size_t>(checkedPow(u.q, f.r), checkedPow(u.q, f.t));
  };
  Matrix first = leafMatrix(seq.front().leaf, used);
  OperatorMatrix<T> row = OperatorMatrix<T>::lift(first, dim);
  for (std::size_t i = 1; i < seq.size(); ++i) {
    int w = seq[i - 1].r + seq[i - 1].d + seq[i - 1].t;
    row = rightPower(row, u, w, true);
    row = rightPower(row, u, w, false);
    auto [pre, post] = slice(seq[i]);
    row = rightApplyOnSlice(row, leafMatrix(seq[i].leaf, used), pre, post);
  }
  if (row.rows != 1 || row.cols != 1) throw InternalError("quantumHolantEvaluate: sandwich is not 1x1");
  Matrix target(1, 1);
  target(0, 0) = res.scalarG;
  res.operatorResidual = residualAgainst(row, target);
  allExact = allExact && exactlyMatches(row, target);
  res.operatorExact = ScalarTraits<T>::exact && allExact;
  res.equal = res.scalarF == res.scalarG && res.scalarG == res.scalarGDirect;
  return res;
}

// ---- isomorphism game ----

GameInstance makeGame(const ConstraintFunction& f, const ConstraintFunction& g) {
  if (f.arity() != 2 || g.arity() != 2) throw ArityError("isomorphism game needs binary functions");
  return GameInstance{f, g};
}

bool gameReferee(const GameInstance& game, int xA, int yA, int xB, int yB) {
  const int qF = game.f.q(), n = game.size();
  for (int v : {xA, yA, xB, yB})
    if (v < 0 || v >= n) throw ArityError("gameReferee: element out of range");
  auto inF = [&](int v) { return v < qF; };
  // (i) exactly one of input/output lies in V(F)
  if (inF(xA) == inF(yA) || inF(xB) == inF(yB)) return false;
  int fA = inF(xA) ? xA : yA, gA = inF(xA) ? yA : xA;
  int fB = inF(xB) ? xB : yB, gB = inF(xB) ? yB : xB;
  if ((fA == fB) != (gA == gB)) return false;
  return game.f.at({fA, fB}) == game.g.at({gA - qF, gB - qF});
}

StrategyVerdict checkStrategy(const GameInstance& game, const std::vector<int>& alice, const std::vector<int>& bob) {
  const int n = game.size();
  if (static_cast<int>(alice.size()) != n || static_cast<int>(bob.size()) != n)
    throw ArityError("checkStrategy: one answer per element expected");
  StrategyVerdict v;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (!gameReferee(game, a, alice[a], b, bob[b])) {
        v.perfect = false;
        v.xA = a;
        v.xB = b;
        return v;
      }
  return v;
}

std::vector<int> bijectionStrategy(const GameInstance& game, const std::vector<int>& sigma) {
  const int qF = game.f.q(), qG = game.g.q();
  if (static_cast<int>(sigma.size()) != qF || qF != qG) throw ArityError("bijectionStrategy: size mismatch");
  std::vector<int> s(qF + qG, -1);
  for (int x = 0; x < qF; ++x) {
    if (sigma[x] < 0 || sigma[x] >= qG || s[qF + sigma[x]] != -1) throw ArityError("bijectionStrategy: not a bijection");
    s[x] = qF + sigma[x];
    s[qF + sigma[x]] = x;
  }
  return s;
}

std::optional<std::vector<int>> findPerfectStrategy(const GameInstance& game) {
  const int n = game.size(), qF = game.f.q();
  std::vector<int> a(n, -1);
  std::function<bool(int)> go = [&](int x) {
    if (x == n) return true;
    int lo = x < qF ? qF : 0, hi = x < qF ? n : qF;
    for (int y = lo; y < hi; ++y) {
      a[x] = y;
      bool ok = gameReferee(game, x, y, x, y);
      for (int z = 0; ok && z < x; ++z) ok = gameReferee(game, x, y, z, a[z]) && gameReferee(game, z, a[z], x, y);
      if (ok && go(x + 1)) return true;
    }
    a[x] = -1;
    return false;
  };
  if (go(0)) return a;
  return std::nullopt;
}

// ---- instantiations ----

#define HOLANT_QUANTUM_INSTANTIATE(T)                                                                            \
  template class Op<T>;                                                                                          \
  template struct OperatorMatrix<T>;                                                                             \
  template double residualAgainst(const OperatorMatrix<T>&, const Matrix&);                                      \
  template QPMReport validateQPM(const QPM<T>&, double);                                                         \
  template QPM<T> convertQPM(const ExactQPM&);                                                                    \
  template QPM<T> perturb(const QPM<T>&, int, int, const T&);                                                    \
  template OperatorMatrix<T> tensorPower(const QPM<T>&, int);                                                    \
  template OperatorMatrix<T> leftPower(const QPM<T>&, int, const OperatorMatrix<T>&, bool);                      \
  template OperatorMatrix<T> rightPower(const OperatorMatrix<T>&, const QPM<T>&, int, bool);                     \
  template OperatorMatrix<T> rightApplyOnSlice(const OperatorMatrix<T>&, const Matrix&, std::size_t, std::size_t); \
  template double equalityFixationResidual(const QPM<T>&, int, bool*);                                           \
  template SplitCheck checkSplit(const QPM<T>&, const ConstraintFunction&, const ConstraintFunction&, int, double); \
  template IsoCheck checkQuantumIso(const QPM<T>&, const ConstraintFunction&, const ConstraintFunction&, double); \
  template TransportCheck invarianceTransport(const QPM<T>&, const ConstraintFunction&, const ConstraintFunction&, \
                                              int, int, bool, double);                                           \
  template QuantumHolantResult quantumHolantEvaluate(const Gadget&, const QPM<T>&, const SignatureSet&,          \
                                                     const SignatureSet&, const std::map<std::string, std::string>&, \
                                                     double);

HOLANT_QUANTUM_INSTANTIATE(GQ)
HOLANT_QUANTUM_INSTANTIATE(std::complex<double>)

#undef HOLANT_QUANTUM_INSTANTIATE

}  // namespace holant
