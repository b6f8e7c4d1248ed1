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

#include "holant/gadget.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "holant/contract.hpp"
#include "holant/errors.hpp"

namespace holant {

void SignatureSet::add(const std::string& name, ConstraintFunction f) {
  if (name.empty()) throw ParseError("empty function name");
  if (q_ == 0) q_ = f.q();
  if (f.q() != q_) throw ArityError("function '" + name + "' has domain size " + std::to_string(f.q()) +
                                    ", set uses " + std::to_string(q_));
  fns_[name] = std::make_shared<const ConstraintFunction>(std::move(f));
}

const FunctionPtr& SignatureSet::get(const std::string& name) const {
  auto it = fns_.find(name);
  if (it == fns_.end()) throw ParseError("unknown function '" + name + "'");
  return it->second;
}

int SignatureSet::maxArity() const {
  int a = 0;
  for (const auto& [n, f] : fns_) a = std::max(a, f->arity());
  return a;
}

int Gadget::addVertex(Vertex v) {
  vertices.push_back(std::move(v));
  return static_cast<int>(vertices.size()) - 1;
}

int Gadget::addHalfEdge(int vertex) {
  halfEdges.push_back({vertex, -1});
  int h = static_cast<int>(halfEdges.size()) - 1;
  vertices[vertex].rot.push_back(h);
  return h;
}

void Gadget::link(int a, int b) {
  halfEdges[a].twin = b;
  halfEdges[b].twin = a;
}

int Gadget::functionIndex(const std::string& name, const FunctionPtr& f) {
  for (std::size_t i = 0; i < functions.size(); ++i) {
    if (functions[i].name == name) {
      if (functions[i].f != f && *functions[i].f != *f) {
        throw CompositionError("function name '" + name + "' bound to two different tensors");
      }
      return static_cast<int>(i);
    }
  }
  functions.push_back({name, f});
  return static_cast<int>(functions.size()) - 1;
}

int Gadget::numConstraints() const {
  int c = 0;
  for (const auto& v : vertices) c += v.kind == VertexKind::Constraint;
  return c;
}

int Gadget::rotIndex(int h) const {
  const auto& rot = vertices[halfEdges[h].vertex].rot;
  return static_cast<int>(std::find(rot.begin(), rot.end(), h) - rot.begin());
}

int Gadget::next(int h) const {
  const auto& rot = vertices[halfEdges[h].vertex].rot;
  return rot[(rotIndex(h) + 1) % rot.size()];
}

int Gadget::prev(int h) const {
  const auto& rot = vertices[halfEdges[h].vertex].rot;
  return rot[(rotIndex(h) + rot.size() - 1) % rot.size()];
}

int Gadget::argHalfEdge(int v, int j) const {
  const auto& vx = vertices[v];
  const int n = static_cast<int>(vx.rot.size());
  return vx.cw ? vx.rot[(n - j) % n] : vx.rot[j];
}

void Gadget::compact() {
  std::vector<int> vmap(vertices.size(), -1);
  std::vector<Vertex> nv;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const auto& v = vertices[i];
    if (v.removed) continue;
    if (v.kind == VertexKind::Equality && v.rot.empty()) continue;  // E_0 = 1
    vmap[i] = static_cast<int>(nv.size());
    nv.push_back(v);
  }
  std::vector<int> hmap(halfEdges.size(), -1);
  std::vector<HalfEdge> nh;
  for (auto& v : nv)
    for (int& h : v.rot) {
      if (hmap[h] < 0) {
        hmap[h] = static_cast<int>(nh.size());
        nh.push_back(halfEdges[h]);
      }
      h = hmap[h];
    }
  for (auto& he : nh) {
    he.vertex = vmap[he.vertex];
    if (he.twin >= 0) he.twin = hmap[he.twin];
  }
  for (int& h : dangling) h = hmap[h];
  vertices = std::move(nv);
  halfEdges = std::move(nh);
}

// ---------------------------------------------------------------------------
// validation

ValidationReport validate(const Gadget& k, bool requirePlanar) {
  ValidationReport rep;
  auto fail = [&](std::string msg) {
    rep.ok = false;
    rep.errors.push_back(std::move(msg));
  };
  const int nh = static_cast<int>(k.halfEdges.size());
  const int nv = static_cast<int>(k.vertices.size());
  std::vector<int> seen(nh, 0);
  for (int v = 0; v < nv; ++v) {
    const auto& vx = k.vertices[v];
    for (int h : vx.rot) {
      if (h < 0 || h >= nh) {
        fail("vertex " + std::to_string(v) + " references half-edge " + std::to_string(h));
        continue;
      }
      if (k.halfEdges[h].vertex != v) fail("half-edge " + std::to_string(h) + " listed at wrong vertex");
      ++seen[h];
    }
    if (vx.kind == VertexKind::Constraint) {
      if (vx.fn < 0 || vx.fn >= static_cast<int>(k.functions.size())) {
        fail("vertex " + std::to_string(v) + " has no function");
      } else {
        const auto& f = *k.functions[vx.fn].f;
        if (f.arity() != k.degree(v)) {
          fail("vertex " + std::to_string(v) + " degree " + std::to_string(k.degree(v)) +
               " differs from arity of '" + k.functions[vx.fn].name + "'");
        }
        if (f.q() != k.q) fail("function '" + k.functions[vx.fn].name + "' has wrong domain size");
      }
    }
  }
  for (int h = 0; h < nh; ++h) {
    if (seen[h] != 1) fail("half-edge " + std::to_string(h) + " appears " + std::to_string(seen[h]) + " times");
    int t = k.halfEdges[h].twin;
    if (t >= 0) {
      if (t >= nh || t == h || k.halfEdges[t].twin != h) {
        fail("half-edge " + std::to_string(h) + " has inconsistent twin");
        continue;
      }
      auto ka = k.vertices[k.halfEdges[h].vertex].kind, kb = k.vertices[k.halfEdges[t].vertex].kind;
      if (ka == kb) fail("edge " + std::to_string(h) + "-" + std::to_string(t) + " is not bipartite");
    }
  }
  if (k.m < 0 || k.d < 0 || k.m + k.d != static_cast<int>(k.dangling.size())) fail("dangling split mismatch");
  std::vector<int> dmark(nh, 0);
  for (int h : k.dangling) {
    if (h < 0 || h >= nh) {
      fail("dangling entry out of range");
      continue;
    }
    if (dmark[h]++) fail("dangling half-edge repeated");
    if (k.halfEdges[h].twin >= 0) fail("dangling half-edge " + std::to_string(h) + " is paired");
    if (k.vertices[k.halfEdges[h].vertex].kind != VertexKind::Equality) {
      fail("dangling half-edge " + std::to_string(h) + " not on an equality vertex");
    }
  }
  for (int h = 0; h < nh; ++h)
    if (k.halfEdges[h].twin < 0 && !dmark[h]) fail("unpaired half-edge " + std::to_string(h) + " not in dangling list");
  if (!rep.ok || !requirePlanar) return rep;

  // Face tracing with a virtual vertex whose rotation is the reversed
  // dangling order; half-edge nh+j is the virtual end of dangling[j].
  const int nd = static_cast<int>(k.dangling.size());
  const int total = nh + nd;
  std::vector<int> twin(total), succ(total), owner(total);
  for (int h = 0; h < nh; ++h) {
    twin[h] = k.halfEdges[h].twin;
    owner[h] = k.halfEdges[h].vertex;
  }
  for (int v = 0; v < nv; ++v) {
    const auto& rot = k.vertices[v].rot;
    for (std::size_t i = 0; i < rot.size(); ++i) succ[rot[i]] = rot[(i + 1) % rot.size()];
  }
  for (int j = 0; j < nd; ++j) {
    twin[k.dangling[j]] = nh + j;
    twin[nh + j] = k.dangling[j];
    owner[nh + j] = nv;
    succ[nh + j] = nh + (j + nd - 1) % nd;  // reversed order
  }
  const int nvt = nv + (nd > 0 ? 1 : 0);
  std::vector<int> comp(nvt);
  std::iota(comp.begin(), comp.end(), 0);
  std::function<int(int)> find = [&](int x) { return comp[x] == x ? x : comp[x] = find(comp[x]); };
  for (int h = 0; h < total; ++h) comp[find(owner[h])] = find(owner[twin[h]]);
  std::vector<int> cv(nvt, 0), ce(nvt, 0), cf(nvt, 0), hasEdge(nvt, 0);
  for (int v = 0; v < nvt; ++v) ++cv[find(v)];
  for (int h = 0; h < total; ++h) {
    ++ce[find(owner[h])];
    hasEdge[find(owner[h])] = 1;
  }
  std::vector<char> done(total, 0);
  for (int h = 0; h < total; ++h) {
    if (done[h]) continue;
    ++cf[find(owner[h])];
    ++rep.faces;
    for (int x = h; !done[x]; x = succ[twin[x]]) done[x] = 1;
  }
  for (int c = 0; c < nvt; ++c) {
    if (find(c) != c || !hasEdge[c]) continue;
    int chi = cv[c] - ce[c] / 2 + cf[c];
    if (chi != 2) fail("embedding is not plane (component Euler characteristic " + std::to_string(chi) + ")");
  }
  return rep;
}

void requireValid(const Gadget& k) {
  auto rep = validate(k);
  if (!rep.ok) throw MalformedGadget(rep.errors.front());
}

// ---------------------------------------------------------------------------
// contraction

ConstraintFunction danglingTensor(const Gadget& k) {
  const int nh = static_cast<int>(k.halfEdges.size());
  std::vector<int> uf(nh);
  std::iota(uf.begin(), uf.end(), 0);
  std::function<int(int)> find = [&](int x) { return uf[x] == x ? x : uf[x] = find(uf[x]); };
  for (int h = 0; h < nh; ++h)
    if (k.halfEdges[h].twin >= 0) uf[find(h)] = find(k.halfEdges[h].twin);
  for (const auto& v : k.vertices)
    if (v.kind == VertexKind::Equality)
      for (std::size_t i = 1; i < v.rot.size(); ++i) uf[find(v.rot[i])] = find(v.rot[0]);

  std::vector<int> varId(nh, -1);
  int nvars = 0;
  for (int h = 0; h < nh; ++h)
    if (varId[find(h)] < 0) varId[find(h)] = nvars++;
  auto var = [&](int h) { return varId[find(h)]; };

  std::vector<Factor> factors;
  for (int v = 0; v < static_cast<int>(k.vertices.size()); ++v) {
    const auto& vx = k.vertices[v];
    if (vx.kind != VertexKind::Constraint) continue;
    const auto& f = *k.functions.at(vx.fn).f;
    std::vector<int> args(vx.rot.size());
    for (std::size_t j = 0; j < args.size(); ++j) args[j] = var(k.argHalfEdge(v, static_cast<int>(j)));
    if (vx.conj) {
      factors.push_back(makeFactor(k.q, args, conjugate(f).entries()));
    } else {
      factors.push_back(makeFactor(k.q, args, f.entries()));
    }
  }
  std::vector<int> outs;
  std::vector<int> pos(k.dangling.size());
  for (std::size_t j = 0; j < k.dangling.size(); ++j) {
    int x = var(k.dangling[j]);
    auto it = std::find(outs.begin(), outs.end(), x);
    pos[j] = static_cast<int>(it - outs.begin());
    if (it == outs.end()) outs.push_back(x);
  }
  std::vector<GQ> r = contract(k.q, nvars, std::move(factors), outs);
  GQ loopFactor = 1;
  for (int i = 0; i < k.freeLoops; ++i) loopFactor *= GQ(k.q);

  const int n = static_cast<int>(k.dangling.size());
  ConstraintFunction t(k.q, n);
  std::vector<int> x(n, 0);
  std::vector<int> val(outs.size());
  for (std::size_t idx = 0; idx < t.size(); ++idx) {
    std::fill(val.begin(), val.end(), -1);
    bool ok = true;
    for (int j = 0; j < n && ok; ++j) {
      int& slot = val[pos[j]];
      if (slot < 0) slot = x[j];
      else ok = slot == x[j];
    }
    if (ok) {
      std::size_t src = 0;
      for (int v : val) src = src * k.q + v;
      t[idx] = r[src] * loopFactor;
    }
    for (int i = n - 1; i >= 0; --i) {
      if (++x[i] < k.q) break;
      x[i] = 0;
    }
  }
  return t;
}

Matrix signatureMatrix(const Gadget& k) { return flatten(danglingTensor(k), k.m, k.d); }

Matrix signatureMatrix(const Gadget& k, int m, int d) {
  if (m + d != static_cast<int>(k.dangling.size())) throw ArityError("split does not match dangling count");
  // Re-splitting keeps the counterclockwise order, which is the tensor's index order.
  return flatten(danglingTensor(k), m, d);
}

// ---------------------------------------------------------------------------
// operations

namespace {

// Appends a copy of src; returns the half-edge offset.
int append(Gadget& dst, const Gadget& src) {
  const int voff = static_cast<int>(dst.vertices.size());
  const int hoff = static_cast<int>(dst.halfEdges.size());
  for (const auto& v : src.vertices) {
    Vertex nv = v;
    if (v.kind == VertexKind::Constraint) nv.fn = dst.functionIndex(src.functions[v.fn].name, src.functions[v.fn].f);
    for (int& h : nv.rot) h += hoff;
    dst.vertices.push_back(std::move(nv));
  }
  for (const auto& he : src.halfEdges) dst.halfEdges.push_back({he.vertex + voff, he.twin >= 0 ? he.twin + hoff : -1});
  dst.freeLoops += src.freeLoops;
  return hoff;
}

void killHalfEdge(Gadget& g, int h) {
  auto& rot = g.vertices[g.halfEdges[h].vertex].rot;
  rot.erase(std::find(rot.begin(), rot.end(), h));
  g.halfEdges[h] = {-1, -1};
}

// Contracts the equality-equality edge through half-edge a.
void mergeEdge(Gadget& g, int a) {
  int b = g.halfEdges[a].twin;
  int u = g.halfEdges[a].vertex, w = g.halfEdges[b].vertex;
  if (u == w) {
    int before = g.degree(u);
    killHalfEdge(g, a);
    killHalfEdge(g, b);
    if (before == 2) {
      ++g.freeLoops;
      g.vertices[u].removed = true;
    }
    return;
  }
  auto ru = g.vertices[u].rot, rw = g.vertices[w].rot;
  auto ia = std::find(ru.begin(), ru.end(), a) - ru.begin();
  auto ib = std::find(rw.begin(), rw.end(), b) - rw.begin();
  std::vector<int> merged(ru.begin(), ru.begin() + ia);
  for (std::size_t s = 1; s < rw.size(); ++s) merged.push_back(rw[(ib + s) % rw.size()]);
  merged.insert(merged.end(), ru.begin() + ia + 1, ru.end());
  for (int h : rw)
    if (h != b) g.halfEdges[h].vertex = u;
  g.halfEdges[a] = {-1, -1};
  g.halfEdges[b] = {-1, -1};
  g.vertices[u].rot = std::move(merged);
  g.vertices[w].rot.clear();
  g.vertices[w].removed = true;
  if (g.vertices[u].rot.empty()) {
    ++g.freeLoops;
    g.vertices[u].removed = true;
  }
}

}  // namespace

Gadget emptyGadget(int q) {
  Gadget g;
  g.q = q;
  return g;
}

Gadget compose(const Gadget& k1, const Gadget& k2, ComposeOptions opt) {
  if (k1.d != k2.m) {
    throw CompositionError("cannot compose: left has " + std::to_string(k1.d) + " inputs, right has " +
                           std::to_string(k2.m) + " outputs");
  }
  if (k1.q != k2.q) throw CompositionError("domain size mismatch");
  Gadget r = emptyGadget(k1.q);
  r.functions = k1.functions;
  int h1 = append(r, k1);
  int h2 = append(r, k2);
  std::vector<int> joins;
  for (int i = 0; i < k1.d; ++i) {
    int a = h1 + k1.dangling[k1.m + k1.d - 1 - i];
    int b = h2 + k2.dangling[i];
    r.link(a, b);
    joins.push_back(a);
  }
  for (int i = 0; i < k1.m; ++i) r.dangling.push_back(h1 + k1.dangling[i]);
  for (int i = 0; i < k2.d; ++i) r.dangling.push_back(h2 + k2.dangling[k2.m + i]);
  r.m = k1.m;
  r.d = k2.d;
  if (opt.mergeEqualities) {
    for (int a : joins) mergeEdge(r, a);
  }
  r.compact();
  return r;
}

Gadget tensorProduct(const Gadget& k1, const Gadget& k2) {
  if (k1.q != k2.q && !k1.vertices.empty() && !k2.vertices.empty()) throw CompositionError("domain size mismatch");
  Gadget r = emptyGadget(k1.q ? k1.q : k2.q);
  r.functions = k1.functions;
  int h1 = append(r, k1);
  int h2 = append(r, k2);
  for (int i = 0; i < k1.m; ++i) r.dangling.push_back(h1 + k1.dangling[i]);
  for (int i = 0; i < k2.m + k2.d; ++i) r.dangling.push_back(h2 + k2.dangling[i]);
  for (int i = 0; i < k1.d; ++i) r.dangling.push_back(h1 + k1.dangling[k1.m + i]);
  r.m = k1.m + k2.m;
  r.d = k1.d + k2.d;
  return r;
}

Gadget daggerGadget(const Gadget& k) {
  Gadget r = k;
  for (auto& v : r.vertices) {
    if (v.rot.size() > 1) std::reverse(v.rot.begin() + 1, v.rot.end());
    if (v.kind == VertexKind::Constraint) {
      v.cw = !v.cw;
      v.conj = !v.conj;
    }
  }
  std::reverse(r.dangling.begin(), r.dangling.end());
  std::swap(r.m, r.d);
  return r;
}

Gadget identityGadget(int q, int k) {
  Gadget r = emptyGadget(q);
  for (int i = 0; i < k; ++i) r = tensorProduct(r, elementaryE(q, 1, 1));
  return r;
}

Gadget elementaryE(int q, int m, int d) {
  if (m < 0 || d < 0) throw ArityError("negative split");
  Gadget g = emptyGadget(q);
  g.m = m;
  g.d = d;
  if (m + d == 0) return g;
  int v = g.addVertex({});
  for (int i = 0; i < m + d; ++i) g.dangling.push_back(g.addHalfEdge(v));
  return g;
}

Gadget elementaryF(const std::string& name, const FunctionPtr& f, int r, int m, int d, Orientation o, bool conj) {
  const int n = f->arity();
  if (m < 0 || d < 0 || m + d != n) throw ArityError("elementary split does not match arity of '" + name + "'");
  if (n == 0 ? r != 0 : (r < 0 || r >= n)) throw ArityError("rotation out of range");
  if (o == Orientation::CW) return daggerGadget(elementaryF(name, f, r, d, m, Orientation::CCW, !conj));
  Gadget g = emptyGadget(f->q());
  g.m = m;
  g.d = d;
  Vertex c;
  c.kind = VertexKind::Constraint;
  c.fn = g.functionIndex(name, f);
  c.conj = conj;
  int cv = g.addVertex(std::move(c));
  std::vector<int> slotEdge(n);
  for (int s = 0; s < n; ++s) slotEdge[s] = g.addHalfEdge(cv);
  for (int s = 0; s < n; ++s) {
    int a = g.addVertex({});
    int inner = g.addHalfEdge(a);
    int outer = g.addHalfEdge(a);
    g.link(inner, slotEdge[s]);
    g.dangling.push_back(outer);
  }
  // argument j sits at slot (j + r) mod n
  auto& rot = g.vertices[cv].rot;
  for (int j = 0; j < n; ++j) rot[j] = slotEdge[(j + r) % n];
  return g;
}

Matrix QuantumGadget::signature() const {
  if (terms.empty()) throw ArityError("empty quantum gadget");
  Matrix acc = scale(signatureMatrix(terms[0].second), terms[0].first);
  for (std::size_t i = 1; i < terms.size(); ++i) {
    if (terms[i].second.m != terms[0].second.m || terms[i].second.d != terms[0].second.d) {
      throw ArityError("quantum gadget terms differ in shape");
    }
    acc = acc + scale(signatureMatrix(terms[i].second), terms[i].first);
  }
  acc.q = terms[0].second.q;
  acc.m = terms[0].second.m;
  acc.d = terms[0].second.d;
  return acc;
}

}  // namespace holant
