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


#include "holant/qaut.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <tuple>

#include "holant/errors.hpp"

namespace holant {

std::vector<GQ> vectorize(const Matrix& a) { return a.data(); }

bool inSpan(const IntertwinerBasis& b, const Matrix& a) {
  if (b.members.empty()) {
    const auto& v = a.data();
    return std::all_of(v.begin(), v.end(), [](const GQ& x) { return x.isZero(); });
  }
  return rrefContains(b.rref, vectorize(a));
}

namespace {

using Shape = std::pair<int, int>;

struct ShapeSpan {
  std::vector<IntertwinerMember> members;
  RowEchelon rref;
  std::size_t full = 0;  // q^{m+d}
  bool isFull() const { return members.size() >= full; }
};

class Generator {
 public:
  Generator(const SignatureSet& fs, int cap) : fs_(fs), q_(fs.q()), cap_(cap) {}

  void run(int budget) {
    for (int s = 1; s <= budget; ++s) {
      work_.clear();
      if (s == 1) {
        seed();
      } else {
        for (int s1 = 1; s1 < s; ++s1) combine(s1, s - s1, s);
      }
      // same-level closure under dagger and identity padding
      for (std::size_t i = 0; i < work_.size(); ++i) {
        auto [shape, idx] = work_[i];
        IntertwinerMember x = spans_[shape].members[idx];
        auto [m, d] = shape;
        insert({d, m}, x.matrix.adjoint(), daggerExpr(x.expr), s);
        if (m + d + 2 <= cap_) {
          Matrix id = Matrix::identity(q_);
          insert({m + 1, d + 1}, kronecker(id, x.matrix), tensorExpr(idExpr(1), x.expr), s);
          insert({m + 1, d + 1}, kronecker(x.matrix, id), tensorExpr(x.expr, idExpr(1)), s);
        }
      }
    }
  }

  ShapeSpan& span(const Shape& s) { return spans_[s]; }

 private:
  void seed() {
    insert({1, 0}, evalExpr(eExpr(1, 0), fs_), eExpr(1, 0), 1);
    if (cap_ >= 3) insert({1, 2}, evalExpr(eExpr(1, 2), fs_), eExpr(1, 2), 1);
    for (const auto& [name, f] : fs_.all()) {
      if (f->arity() > cap_) continue;
      LeafSpec l;
      l.kind = LeafSpec::F;
      l.m = f->arity();
      l.fn = name;
      auto e = leafExpr(l);
      insert({l.m, 0}, evalExpr(e, fs_), e, 1);
    }
  }

  void combine(int s1, int s2, int s) {
    // snapshot: members inserted at this level have size s > s1, s2
    std::vector<Shape> shapes;
    for (const auto& [sh, sp] : spans_) shapes.push_back(sh);
    for (const Shape& a : shapes)
      for (const Shape& b : shapes) {
        const auto& A = spans_[a];
        const auto& B = spans_[b];
        std::size_t na = A.members.size(), nb = B.members.size();
        if (a.second == b.first) {
          Shape t{a.first, b.second};
          if (t.first + t.second <= cap_)
            for (std::size_t i = 0; i < na; ++i) {
              if (spans_[a].members[i].size != s1) continue;
              for (std::size_t j = 0; j < nb; ++j) {
                if (spans_[b].members[j].size != s2) continue;
                if (fullShape(t)) break;
                const auto& x = spans_[a].members[i];
                const auto& y = spans_[b].members[j];
                insert(t, x.matrix * y.matrix, composeExpr(x.expr, y.expr), s);
              }
            }
        }
        Shape t{a.first + b.first, a.second + b.second};
        if (t.first + t.second <= cap_)
          for (std::size_t i = 0; i < na; ++i) {
            if (spans_[a].members[i].size != s1) continue;
            for (std::size_t j = 0; j < nb; ++j) {
              if (spans_[b].members[j].size != s2) continue;
              if (fullShape(t)) break;
              const auto& x = spans_[a].members[i];
              const auto& y = spans_[b].members[j];
              insert(t, kronecker(x.matrix, y.matrix), tensorExpr(x.expr, y.expr), s);
            }
          }
      }
  }

  bool fullShape(const Shape& t) {
    auto it = spans_.find(t);
    return it != spans_.end() && it->second.isFull();
  }

  void insert(const Shape& t, Matrix mat, ExprPtr e, int size) {
    ShapeSpan& sp = spans_[t];
    if (sp.full == 0) sp.full = checkedPow(q_, t.first + t.second);
    if (sp.isFull()) return;
    if (!rrefInsert(sp.rref, vectorize(mat))) return;
    sp.members.push_back({std::move(mat), std::move(e), size});
    work_.emplace_back(t, sp.members.size() - 1);
  }

  const SignatureSet& fs_;
  int q_;
  int cap_;
  std::map<Shape, ShapeSpan> spans_;
  std::vector<std::pair<Shape, std::size_t>> work_;
};

}  // namespace

IntertwinerBasis generateIntertwiners(const SignatureSet& fs, int m, int d, const IntertwinerOptions& opt) {
  if (m < 0 || d < 0) throw ArityError("generateIntertwiners: negative shape");
  if (fs.q() < 1) throw ArityError("generateIntertwiners: signature set has no domain size");
  int cap = opt.maxDangling >= 0 ? opt.maxDangling : std::max(m + d, fs.maxArity()) + 2;
  if (cap < m + d) throw ArityError("generateIntertwiners: dangling cap below m+d");
  checkedPow(fs.q(), cap);  // ResourceError if the largest shape cannot be held
  Generator gen(fs, cap);
  gen.run(opt.budget);
  IntertwinerBasis b;
  b.m = m;
  b.d = d;
  b.budget = opt.budget;
  b.maxDangling = cap;
  ShapeSpan& sp = gen.span({m, d});
  b.members = sp.members;
  b.rref = sp.rref;
  return b;
}

// ---- gadget -> 1-labeled instance ----

std::pair<CSPInstance, SignatureSet> gadgetToLabeledInstance(const Gadget& g, const SignatureSet& fs) {
  SignatureSet out(g.q);
  for (const auto& [name, f] : fs.all()) out.add(name, *f);
  const int nv = static_cast<int>(g.vertices.size());
  std::vector<int> parent(nv);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  auto isEq = [&](int v) { return g.vertices[v].kind == VertexKind::Equality; };
  for (std::size_t h = 0; h < g.halfEdges.size(); ++h) {
    int t = g.halfEdges[h].twin;
    if (t < 0) continue;
    int a = g.halfEdges[h].vertex, b = g.halfEdges[t].vertex;
    if (isEq(a) && isEq(b)) parent[find(a)] = find(b);
  }
  CSPInstance k;
  std::map<int, int> classVar;
  std::vector<int> edgeVar(g.halfEdges.size(), -1);
  auto varOf = [&](int h) {
    int v = g.halfEdges[h].vertex, t = g.halfEdges[h].twin;
    int eqv = isEq(v) ? v : (t >= 0 && isEq(g.halfEdges[t].vertex) ? g.halfEdges[t].vertex : -1);
    if (eqv >= 0) {
      auto [it, fresh] = classVar.emplace(find(eqv), k.numVariables);
      if (fresh) ++k.numVariables;
      return it->second;
    }
    if (edgeVar[h] < 0) {
      edgeVar[h] = k.numVariables++;
      if (t >= 0) edgeVar[t] = edgeVar[h];
    }
    return edgeVar[h];
  };
  for (int v = 0; v < nv; ++v) {
    const Vertex& vx = g.vertices[v];
    if (vx.removed || isEq(v)) continue;
    const NamedFunction& nf = g.functions[vx.fn];
    std::string name = nf.name;
    if (vx.conj) {
      name += "*";
      if (!out.has(name)) out.add(name, conjugate(*nf.f));
    } else if (!out.has(name)) {
      out.add(name, *nf.f);
    }
    CspConstraint c;
    c.fn = name;
    for (int j = 0; j < g.degree(v); ++j) c.args.push_back(varOf(g.argHalfEdge(v, j)));
    k.constraints.push_back(std::move(c));
  }
  for (int h : g.dangling) k.labels.push_back(varOf(h));
  // equality classes touching nothing else still sum over [q]
  for (int v = 0; v < nv; ++v)
    if (isEq(v) && !g.vertices[v].removed && g.degree(v) > 0) varOf(g.vertices[v].rot[0]);
  k.numVariables += g.freeLoops;
  return {std::move(k), std::move(out)};
}

OrbitPartition orbitCoarsening(const SignatureSet& fs, int budget) {
  OrbitPartition p;
  IntertwinerOptions opt;
  opt.budget = budget;
  opt.maxDangling = std::max(1, fs.maxArity() + 1);
  p.basis = generateIntertwiners(fs, 1, 0, opt);
  const int q = fs.q();
  std::map<std::vector<GQ>, int> ids;
  p.classOf.assign(q, 0);
  for (int x = 0; x < q; ++x) {
    std::vector<GQ> key;
    for (const auto& mem : p.basis.members) key.push_back(mem.matrix(x, 0));
    auto [it, fresh] = ids.emplace(key, static_cast<int>(ids.size()));
    p.classOf[x] = it->second;
  }
  p.classes = static_cast<int>(ids.size());
  std::vector<int> first(p.classes, -1);
  for (int x = 0; x < q; ++x)
    if (first[p.classOf[x]] < 0) first[p.classOf[x]] = x;
  for (int a = 0; a < p.classes; ++a)
    for (int b = a + 1; b < p.classes; ++b) {
      Separation s;
      s.x = first[a];
      s.y = first[b];
      for (std::size_t i = 0; i < p.basis.members.size(); ++i)
        if (p.basis.members[i].matrix(s.x, 0) != p.basis.members[i].matrix(s.y, 0)) {
          s.member = static_cast<int>(i);
          break;
        }
      if (s.member < 0) throw InternalError("orbitCoarsening: separated elements agree on every member");
      Gadget gad = buildGadget(p.basis.members[s.member].expr, fs);
      auto [inst, funcs] = gadgetToLabeledInstance(gad, fs);
      s.instance = std::move(inst);
      s.functions = std::move(funcs);
      s.planar = isPlanarInstance(s.instance, s.functions).planar;
      s.zx = partitionFunction(s.instance, s.functions, Pin{{0, s.x}});
      s.zy = partitionFunction(s.instance, s.functions, Pin{{0, s.y}});
      p.separations.push_back(std::move(s));
    }
  return p;
}

// ---- coherent closure ----

Matrix PairColoring::classMatrix(int c) const {
  Matrix m(q, q);
  for (int u = 0; u < q; ++u)
    for (int v = 0; v < q; ++v)
      if (at(u, v) == c) m(u, v) = 1;
  return m;
}

PairColoring coherentClosure(const Matrix& a) {
  if (a.rows() != a.cols()) throw ArityError("coherentClosure: matrix is not square");
  const int q = static_cast<int>(a.rows());
  PairColoring pc;
  pc.q = q;
  pc.color.assign(static_cast<std::size_t>(q) * q, 0);
  std::map<std::tuple<GQ, GQ, bool>, int> init;
  for (int u = 0; u < q; ++u)
    for (int v = 0; v < q; ++v) init.emplace(std::make_tuple(a(u, v), a(v, u), u == v), 0);
  int id = 0;
  for (auto& [key, val] : init) val = id++;
  for (int u = 0; u < q; ++u)
    for (int v = 0; v < q; ++v) pc.color[u * q + v] = init[std::make_tuple(a(u, v), a(v, u), u == v)];
  pc.classCount = id;
  while (true) {
    using Sig = std::pair<int, std::vector<std::pair<int, int>>>;
    std::vector<Sig> sig(pc.color.size());
    std::map<Sig, int> ids;
    for (int u = 0; u < q; ++u)
      for (int v = 0; v < q; ++v) {
        Sig s{pc.at(u, v), {}};
        for (int w = 0; w < q; ++w) s.second.emplace_back(pc.at(u, w), pc.at(w, v));
        std::sort(s.second.begin(), s.second.end());
        ids.emplace(s, 0);
        sig[u * q + v] = std::move(s);
      }
    int n = 0;
    for (auto& [key, val] : ids) val = n++;
    ++pc.rounds;
    // refinement only splits classes, so an unchanged count is a fixed point
    if (n == pc.classCount) break;
    for (std::size_t i = 0; i < sig.size(); ++i) pc.color[i] = ids[sig[i]];
    pc.classCount = n;
  }
  return pc;
}

PairColoring coherentClosure(const ConstraintFunction& a) {
  if (a.arity() != 2) throw ArityError("coherentClosure: binary function expected");
  return coherentClosure(flatten(a, 1, 1));
}

// ---- connectivity and augmentations ----

ConstraintFunction marginalGraph(const ConstraintFunction& f) {
  if (f.arity() < 2) throw ArityError("projective connectivity needs arity >= 2");
  ConstraintFunction x = f;
  while (x.arity() > 2) x = arityReduce(x);
  return x;
}

bool isProjectivelyConnected(const ConstraintFunction& f) {
  ConstraintFunction x = marginalGraph(f);
  const int q = f.q();
  std::vector<int> parent(q);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
  int comps = q;
  for (int u = 0; u < q; ++u)
    for (int v = 0; v < q; ++v)
      if (!x.at({u, v}).isZero()) {
        int a = find(u), b = find(v);
        if (a != b) {
          parent[a] = b;
          --comps;
        }
      }
  return comps <= 1;
}

namespace {

mpq_class l1Sum(const ConstraintFunction& f) {
  mpq_class s = 0;
  for (const auto& v : f.entries()) s += v.l1();
  return s;
}

mpq_class l1Max(const ConstraintFunction& f) {
  mpq_class s = 0;
  for (const auto& v : f.entries()) s = std::max(s, v.l1());
  return s;
}

ConstraintFunction augmentOne(const ConstraintFunction& f, const GQ& gamma) {
  const int q = f.q(), n = f.arity();
  ConstraintFunction r(q + 1, n);
  for (std::size_t i = 0; i < r.size(); ++i) {
    auto x = r.decode(i);
    bool inside = std::all_of(x.begin(), x.end(), [&](int v) { return v < q; });
    if (inside) {
      r[i] = f.at(x);
    } else if (n >= 2 && x.back() != q &&
               std::all_of(x.begin(), x.end() - 1, [&](int v) { return v == q; })) {
      r[i] = gamma;
    }
  }
  return r;
}

}  // namespace

GammaAugmentation gammaAugment(const SignatureSet& f, const SignatureSet* g,
                               const std::map<std::string, std::string>* map) {
  if (g && !map) throw CompatibilityError("gammaAugment: partner set needs a map");
  mpq_class bound = 0;
  for (const auto& [name, fp] : f.all()) {
    const ConstraintFunction* gp = fp.get();
    if (g) {
      auto it = map->find(name);
      if (it == map->end() || !g->has(it->second)) throw CompatibilityError("gammaAugment: no partner for " + name);
      gp = g->get(it->second).get();
      if (gp->arity() != fp->arity()) throw ArityError("gammaAugment: arity differs for " + name);
    }
    mpq_class b = l1Sum(*fp) + l1Max(*gp);
    if (b > bound) bound = b;
  }
  GammaAugmentation out;
  out.gamma = GQ(bound + 1);
  out.zero = f.q();
  out.f = SignatureSet(f.q() + 1);
  for (const auto& [name, fp] : f.all()) out.f.add(name, augmentOne(*fp, out.gamma));
  if (g) {
    SignatureSet gs(g->q() + 1);
    for (const auto& [name, gp] : g->all()) gs.add(name, augmentOne(*gp, out.gamma));
    out.g = std::move(gs);
  }
  return out;
}

AllOnesAugmentation allOnesAugment(const SignatureSet& fs) {
  AllOnesAugmentation r;
  r.functions = SignatureSet(fs.q());
  for (const auto& [name, f] : fs.all()) r.functions.add(name, *f);
  r.name = "J";
  for (int i = 1; r.functions.has(r.name); ++i) r.name = "J" + std::to_string(i);
  r.witness = composeExpr(eExpr(1, 0), eExpr(0, 1));
  r.functions.add(r.name, unflatten(evalExpr(r.witness, fs), fs.q(), 1, 1));
  return r;
}

// ---- classical symmetries ----

std::size_t forEachIsomorphism(const SignatureSet& f, const SignatureSet& g,
                               const std::map<std::string, std::string>& map,
                               const std::function<bool(const std::vector<int>&)>& visit) {
  const int q = f.q();
  if (g.q() != q) return 0;
  std::vector<std::pair<const ConstraintFunction*, const ConstraintFunction*>> pairs;
  for (const auto& [name, fp] : f.all()) {
    auto it = map.find(name);
    if (it == map.end() || !g.has(it->second)) throw CompatibilityError("isomorphism: no partner for " + name);
    const auto& gp = g.get(it->second);
    if (gp->arity() != fp->arity()) return 0;
    if (fp->arity() == 0 && (*fp)[0] != (*gp)[0]) return 0;
    pairs.emplace_back(fp.get(), gp.get());
  }
  std::vector<int> pi(q, -1);
  std::vector<bool> used(q, false);
  std::size_t count = 0;
  bool stop = false;
  // all tuples over [0..x] that contain x agree under pi
  auto consistent = [&](int x) {
    for (const auto& [fp, gp] : pairs) {
      const int n = fp->arity();
      if (n == 0) continue;
      std::vector<int> t(n, 0), img(n);
      while (true) {
        if (std::find(t.begin(), t.end(), x) != t.end()) {
          for (int i = 0; i < n; ++i) img[i] = pi[t[i]];
          if (fp->at(t) != gp->at(img)) return false;
        }
        int i = n - 1;
        while (i >= 0 && t[i] == x) t[i--] = 0;
        if (i < 0) break;
        ++t[i];
      }
    }
    return true;
  };
  std::function<void(int)> go = [&](int x) {
    if (stop) return;
    if (x == q) {
      ++count;
      if (!visit(pi)) stop = true;
      return;
    }
    for (int y = 0; y < q && !stop; ++y) {
      if (used[y]) continue;
      pi[x] = y;
      used[y] = true;
      if (consistent(x)) go(x + 1);
      used[y] = false;
    }
    pi[x] = -1;
  };
  go(0);
  return count;
}

std::optional<std::vector<int>> findIsomorphism(const SignatureSet& f, const SignatureSet& g,
                                                const std::map<std::string, std::string>& map) {
  std::optional<std::vector<int>> r;
  forEachIsomorphism(f, g, map, [&](const std::vector<int>& p) {
    r = p;
    return false;
  });
  return r;
}

std::vector<std::vector<int>> automorphisms(const SignatureSet& fs) {
  std::map<std::string, std::string> id;
  for (const auto& [name, f] : fs.all()) id[name] = name;
  std::vector<std::vector<int>> out;
  forEachIsomorphism(fs, fs, id, [&](const std::vector<int>& p) {
    out.push_back(p);
    return true;
  });
  return out;
}

PairColoring classicalOrbitals(const SignatureSet& fs) {
  const int q = fs.q();
  std::vector<int> parent(static_cast<std::size_t>(q) * q);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
  for (const auto& p : automorphisms(fs))
    for (int u = 0; u < q; ++u)
      for (int v = 0; v < q; ++v) parent[find(u * q + v)] = find(p[u] * q + p[v]);
  PairColoring pc;
  pc.q = q;
  pc.color.assign(parent.size(), -1);
  std::map<int, int> ids;
  for (std::size_t i = 0; i < parent.size(); ++i) {
    auto [it, fresh] = ids.emplace(find(static_cast<int>(i)), static_cast<int>(ids.size()));
    pc.color[i] = it->second;
  }
  pc.classCount = static_cast<int>(ids.size());
  return pc;
}

}  // namespace holant
