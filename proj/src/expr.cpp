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

#include <functional>
#include <sstream>

#include "holant/errors.hpp"
#include "holant/gadget.hpp"

namespace holant {

ExprPtr leafExpr(LeafSpec l) {
  auto e = std::make_shared<Expr>();
  e->op = Expr::Leaf;
  e->m = l.m;
  e->d = l.d;
  e->leaf = std::move(l);
  return e;
}

ExprPtr emptyExpr() { return leafExpr({}); }

ExprPtr eExpr(int m, int d) {
  if (m == 0 && d == 0) return emptyExpr();
  LeafSpec l;
  l.kind = LeafSpec::E;
  l.m = m;
  l.d = d;
  return leafExpr(l);
}

namespace {
bool isEmpty(const ExprPtr& e) { return e->op == Expr::Leaf && e->leaf.kind == LeafSpec::Empty; }
}  // namespace

ExprPtr idExpr(int k) {
  ExprPtr r = emptyExpr();
  for (int i = 0; i < k; ++i) r = tensorExpr(r, eExpr(1, 1));
  return r;
}

ExprPtr composeExpr(ExprPtr a, ExprPtr b) {
  if (a->d != b->m) {
    throw CompositionError("expression compose shape mismatch (" + std::to_string(a->d) + " vs " +
                           std::to_string(b->m) + ")");
  }
  if (isEmpty(a)) return b;
  if (isEmpty(b)) return a;
  auto e = std::make_shared<Expr>();
  e->op = Expr::Compose;
  e->m = a->m;
  e->d = b->d;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

ExprPtr tensorExpr(ExprPtr a, ExprPtr b) {
  if (isEmpty(a)) return b;
  if (isEmpty(b)) return a;
  auto e = std::make_shared<Expr>();
  e->op = Expr::Tensor;
  e->m = a->m + b->m;
  e->d = a->d + b->d;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

ExprPtr daggerExpr(ExprPtr a) {
  if (isEmpty(a)) return a;
  auto e = std::make_shared<Expr>();
  e->op = Expr::Dagger;
  e->m = a->d;
  e->d = a->m;
  e->a = std::move(a);
  return e;
}

Matrix leafMatrix(const LeafSpec& l, const SignatureSet& fs) {
  const int q = fs.q();
  switch (l.kind) {
    case LeafSpec::Empty: {
      Matrix r = Matrix::identity(1);
      r.q = q;
      r.m = r.d = 0;
      return r;
    }
    case LeafSpec::E:
      return flatten(equality(q, l.m + l.d), l.m, l.d);
    case LeafSpec::F: {
      const auto& f = *fs.get(l.fn);
      ConstraintFunction v = rotate(l.conj ? conjugate(f) : f, l.rot);
      if (!l.dagger) return flatten(v, l.m, l.d);
      return flatten(v, l.d, l.m).adjoint();
    }
  }
  throw InternalError("bad leaf");
}

Gadget leafGadget(const LeafSpec& l, const SignatureSet& fs) {
  switch (l.kind) {
    case LeafSpec::Empty:
      return emptyGadget(fs.q());
    case LeafSpec::E:
      return elementaryE(fs.q(), l.m, l.d);
    case LeafSpec::F: {
      const auto& f = fs.get(l.fn);
      if (!l.dagger) return elementaryF(l.fn, f, l.rot, l.m, l.d, Orientation::CCW, l.conj);
      return daggerGadget(elementaryF(l.fn, f, l.rot, l.d, l.m, Orientation::CCW, l.conj));
    }
  }
  throw InternalError("bad leaf");
}

Matrix evalExpr(const ExprPtr& e, const SignatureSet& fs) {
  switch (e->op) {
    case Expr::Leaf:
      return leafMatrix(e->leaf, fs);
    case Expr::Compose:
      return evalExpr(e->a, fs) * evalExpr(e->b, fs);
    case Expr::Tensor:
      return kronecker(evalExpr(e->a, fs), evalExpr(e->b, fs));
    case Expr::Dagger:
      return evalExpr(e->a, fs).adjoint();
  }
  throw InternalError("bad expression");
}

namespace {

Matrix applyRec(const Expr& e, bool dag, std::size_t pre, std::size_t post, Matrix b, const SignatureSet& fs) {
  switch (e.op) {
    case Expr::Leaf: {
      const auto& l = e.leaf;
      if (l.kind == LeafSpec::Empty || (l.kind == LeafSpec::E && l.m == 1 && l.d == 1)) return b;
      Matrix x = leafMatrix(l, fs);
      return applyOnSlice(dag ? x.adjoint() : x, pre, post, b);
    }
    case Expr::Compose:
      if (!dag) return applyRec(*e.a, false, pre, post, applyRec(*e.b, false, pre, post, std::move(b), fs), fs);
      return applyRec(*e.b, true, pre, post, applyRec(*e.a, true, pre, post, std::move(b), fs), fs);
    case Expr::Tensor: {
      const int q = fs.q();
      std::size_t inA = checkedPow(q, dag ? e.a->m : e.a->d);
      std::size_t outB = checkedPow(q, dag ? e.b->d : e.b->m);
      Matrix mid = applyRec(*e.b, dag, pre * inA, post, std::move(b), fs);
      return applyRec(*e.a, dag, pre, outB * post, std::move(mid), fs);
    }
    case Expr::Dagger:
      return applyRec(*e.a, !dag, pre, post, std::move(b), fs);
  }
  throw InternalError("bad expression");
}

}  // namespace

Matrix applyExpr(const ExprPtr& e, const Matrix& b, const SignatureSet& fs) {
  Matrix r = applyRec(*e, false, 1, 1, b, fs);
  r.q = fs.q();
  r.m = e->m;
  r.d = b.d;
  return r;
}

Matrix evalExprSliced(const ExprPtr& e, const SignatureSet& fs) {
  Matrix id = identityPower(fs.q(), e->d);
  return applyExpr(e, id, fs);
}

Gadget buildGadget(const ExprPtr& e, const SignatureSet& fs) {
  switch (e->op) {
    case Expr::Leaf:
      return leafGadget(e->leaf, fs);
    case Expr::Compose:
      return compose(buildGadget(e->a, fs), buildGadget(e->b, fs));
    case Expr::Tensor:
      return tensorProduct(buildGadget(e->a, fs), buildGadget(e->b, fs));
    case Expr::Dagger:
      return daggerGadget(buildGadget(e->a, fs));
  }
  throw InternalError("bad expression");
}

namespace {

std::string leafString(const LeafSpec& l) {
  std::ostringstream os;
  switch (l.kind) {
    case LeafSpec::Empty:
      return "1";
    case LeafSpec::E:
      if (l.m == 1 && l.d == 1) return "I";
      os << "E^{" << l.m << "," << l.d << "}";
      return os.str();
    case LeafSpec::F:
      if (l.dagger) os << "dag(";
      os << l.fn << (l.conj ? "*" : "");
      if (l.rot) os << "^(" << l.rot << ")";
      if (l.dagger) os << "^{" << l.d << "," << l.m << "})";
      else os << "^{" << l.m << "," << l.d << "}";
      return os.str();
  }
  return "?";
}

}  // namespace

std::string exprToString(const ExprPtr& e) {
  switch (e->op) {
    case Expr::Leaf:
      return leafString(e->leaf);
    case Expr::Compose:
      return "(" + exprToString(e->a) + " o " + exprToString(e->b) + ")";
    case Expr::Tensor:
      return "(" + exprToString(e->a) + " x " + exprToString(e->b) + ")";
    case Expr::Dagger:
      return "dag(" + exprToString(e->a) + ")";
  }
  return "?";
}

int exprLeafCount(const ExprPtr& e) {
  if (e->op == Expr::Leaf) return e->leaf.kind == LeafSpec::Empty ? 0 : 1;
  return exprLeafCount(e->a) + (e->b ? exprLeafCount(e->b) : 0);
}

// ---------------------------------------------------------------------------
// pivot chains

namespace {

// (G ⊗ I^k) ∘ S_0 ∘ .. ∘ S_{k-1}, S_j = I^{d-1-j} ⊗ E^{2,0} ⊗ I^{k-1-j}:
// moves the bottom k inputs of G to new bottom outputs.
ExprPtr bottomInToOut(ExprPtr g, int k) {
  const int d = g->d;
  ExprPtr chain;
  for (int j = k - 1; j >= 0; --j) {
    ExprPtr s = tensorExpr(tensorExpr(idExpr(d - 1 - j), eExpr(2, 0)), idExpr(k - 1 - j));
    chain = j == k - 1 ? s : composeExpr(s, chain);
  }
  return composeExpr(tensorExpr(std::move(g), idExpr(k)), chain);
}

// T_{k-1} ∘ .. ∘ T_0 ∘ (G ⊗ I^k), T_j = I^{m-1-j} ⊗ E^{0,2} ⊗ I^{k-1-j}:
// moves the bottom k outputs of G to new bottom inputs.
ExprPtr bottomOutToIn(ExprPtr g, int k) {
  const int m = g->m;
  ExprPtr r = tensorExpr(std::move(g), idExpr(k));
  for (int j = 0; j < k; ++j) {
    ExprPtr t = tensorExpr(tensorExpr(idExpr(m - 1 - j), eExpr(0, 2)), idExpr(k - 1 - j));
    r = composeExpr(t, r);
  }
  return r;
}

ExprPtr bottomShift(ExprPtr g, int m2, int d2) {
  const int kd = g->d - d2, km = g->m - m2;
  if (kd > 0) return bottomInToOut(std::move(g), kd);
  if (km > 0) return bottomOutToIn(std::move(g), km);
  return g;
}

// (I ⊗ G) ∘ (E^{2,0} ⊗ I^{d-1}): the top input becomes the top output.
ExprPtr topInToOut(ExprPtr g) {
  const int d = g->d;
  return composeExpr(tensorExpr(idExpr(1), g), tensorExpr(eExpr(2, 0), idExpr(d - 1)));
}

}  // namespace

ExprPtr pivotChainExpr(const std::string& fn, int n, int m1, int d1, int r, int m2, int d2, bool conj) {
  if (m1 < 0 || d1 < 0 || m2 < 0 || d2 < 0 || m1 + d1 != n || m2 + d2 != n) {
    throw ArityError("pivot chain splits must match arity " + std::to_string(n));
  }
  if (n == 0 ? r != 0 : (r < 0 || r >= n)) throw ArityError("rotation out of range");
  LeafSpec base;
  base.kind = LeafSpec::F;
  base.fn = fn;
  base.m = m1;
  base.d = d1;
  base.conj = conj;
  ExprPtr g = leafExpr(base);
  if (r > 0) {
    g = bottomShift(std::move(g), n - r, r);
    for (int i = 0; i < r; ++i) g = topInToOut(std::move(g));
  }
  return bottomShift(std::move(g), m2, d2);
}

Gadget pivotChain(const SignatureSet& fs, const std::string& fn, int m1, int d1, int r, int m2, int d2) {
  const int n = fs.get(fn)->arity();
  return buildGadget(pivotChainExpr(fn, n, m1, d1, r, m2, d2), fs);
}

// ---------------------------------------------------------------------------
// generator lowering

namespace {

ExprPtr gen10() { return eExpr(1, 0); }
ExprPtr gen12() { return eExpr(1, 2); }

ExprPtr eGen(int m, int d);

ExprPtr idGen(int k) {
  ExprPtr r = emptyExpr();
  for (int i = 0; i < k; ++i) r = tensorExpr(r, eGen(1, 1));
  return r;
}

ExprPtr eGen(int m, int d) {
  if (m == 0 && d == 0) return emptyExpr();
  if (m == 1 && d == 0) return gen10();
  if (m == 1 && d == 2) return gen12();
  if (m == 0 && d == 1) return daggerExpr(gen10());
  if (m == 2 && d == 1) return daggerExpr(gen12());
  if (m == 1 && d == 1) return composeExpr(gen12(), daggerExpr(gen12()));
  if (m == 1) return composeExpr(eGen(1, d - 1), tensorExpr(idGen(d - 2), gen12()));
  if (m == 0) return daggerExpr(eGen(d, 0));
  if (d == 0) return composeExpr(daggerExpr(eGen(1, m)), gen10());
  return composeExpr(daggerExpr(eGen(1, m)), eGen(1, d));
}

}  // namespace

ExprPtr expandToGenerators(const ExprPtr& e, const SignatureSet& fs) {
  switch (e->op) {
    case Expr::Leaf: {
      const LeafSpec& l = e->leaf;
      if (l.kind == LeafSpec::Empty) return e;
      if (l.kind == LeafSpec::E) return eGen(l.m, l.d);
      const int n = fs.get(l.fn)->arity();
      ExprPtr chain = l.dagger ? pivotChainExpr(l.fn, n, n, 0, l.rot, l.d, l.m, l.conj)
                               : pivotChainExpr(l.fn, n, n, 0, l.rot, l.m, l.d, l.conj);
      // the chain's own E/I leaves still need lowering; its F leaf is F^{n,0}
      std::function<ExprPtr(const ExprPtr&)> lower = [&](const ExprPtr& x) -> ExprPtr {
        switch (x->op) {
          case Expr::Leaf:
            return x->leaf.kind == LeafSpec::E ? eGen(x->leaf.m, x->leaf.d) : x;
          case Expr::Compose:
            return composeExpr(lower(x->a), lower(x->b));
          case Expr::Tensor:
            return tensorExpr(lower(x->a), lower(x->b));
          case Expr::Dagger:
            return daggerExpr(lower(x->a));
        }
        return x;
      };
      ExprPtr low = lower(chain);
      return l.dagger ? daggerExpr(low) : low;
    }
    case Expr::Compose:
      return composeExpr(expandToGenerators(e->a, fs), expandToGenerators(e->b, fs));
    case Expr::Tensor:
      return tensorExpr(expandToGenerators(e->a, fs), expandToGenerators(e->b, fs));
    case Expr::Dagger:
      return daggerExpr(expandToGenerators(e->a, fs));
  }
  throw InternalError("bad expression");
}

bool auditGenerators(const ExprPtr& e, const SignatureSet& fs, std::vector<std::string>* bad) {
  if (e->op != Expr::Leaf) {
    bool ok = auditGenerators(e->a, fs, bad);
    if (e->b) ok = auditGenerators(e->b, fs, bad) && ok;
    return ok;
  }
  const LeafSpec& l = e->leaf;
  bool ok = false;
  switch (l.kind) {
    case LeafSpec::Empty:
      ok = true;
      break;
    case LeafSpec::E:
      ok = (l.m == 1 && l.d == 0) || (l.m == 1 && l.d == 2);
      break;
    case LeafSpec::F:
      ok = fs.has(l.fn) && !l.dagger && l.rot == 0 && l.d == 0 && l.m == fs.get(l.fn)->arity();
      break;
  }
  if (!ok && bad) bad->push_back(leafString(l));
  return ok;
}

}  // namespace holant
