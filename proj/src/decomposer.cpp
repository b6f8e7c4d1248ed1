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

#include "holant/decomposer.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "holant/errors.hpp"

namespace holant {

const char* ruleName(Rule r) {
  switch (r) {
    case Rule::NewLeftE: return "NewLeft-E";
    case Rule::NewLeftF: return "NewLeft-F";
    case Rule::NewRightE: return "NewRight-E";
    case Rule::NewRightF: return "NewRight-F";
    case Rule::NewTopE: return "NewTop-E";
    case Rule::NewTopF: return "NewTop-F";
    case Rule::NewBottomE: return "NewBottom-E";
    case Rule::NewBottomF: return "NewBottom-F";
    case Rule::NoDanglingF: return "NoDangling";
    case Rule::NoDanglingE: return "NoDangling-E";
  }
  return "?";
}

SignatureSet functionsOf(const Gadget& k) {
  SignatureSet fs(k.q);
  for (const auto& nf : k.functions) fs.add(nf.name, *nf.f);
  return fs;
}

namespace {

bool isDanglingHe(const Gadget& k, int h) { return k.halfEdges[h].twin < 0; }

// Stub-suppressed view: arms of constraint vertices are folded into them.
struct HatView {
  std::vector<char> suppressed;
  std::vector<int> owner;  // per dangling position
  std::vector<int> rep;    // half-edge at the owner standing for the position
  std::map<int, std::vector<int>> positions;
};

HatView hatView(const Gadget& k) {
  HatView h;
  const int nv = static_cast<int>(k.vertices.size());
  h.suppressed.assign(nv, 0);
  for (int v = 0; v < nv; ++v) {
    const auto& vx = k.vertices[v];
    if (vx.kind != VertexKind::Equality || vx.rot.size() != 2) continue;
    int a = vx.rot[0], b = vx.rot[1];
    bool da = isDanglingHe(k, a), db = isDanglingHe(k, b);
    if (da == db) continue;
    int inner = da ? b : a;
    if (k.vertices[k.halfEdges[k.halfEdges[inner].twin].vertex].kind == VertexKind::Constraint) h.suppressed[v] = 1;
  }
  const int n = static_cast<int>(k.dangling.size());
  h.owner.resize(n);
  h.rep.resize(n);
  for (int j = 0; j < n; ++j) {
    int he = k.dangling[j];
    int v = k.halfEdges[he].vertex;
    if (h.suppressed[v]) {
      const auto& rot = k.vertices[v].rot;
      int inner = rot[0] == he ? rot[1] : rot[0];
      int at = k.halfEdges[inner].twin;
      h.owner[j] = k.halfEdges[at].vertex;
      h.rep[j] = at;
    } else {
      h.owner[j] = v;
      h.rep[j] = he;
    }
    h.positions[h.owner[j]].push_back(j);
  }
  return h;
}

// rot(v) rotated to begin at half-edge h
std::vector<int> rotFrom(const Gadget& k, int v, int h) {
  const auto& rot = k.vertices[v].rot;
  auto it = std::find(rot.begin(), rot.end(), h);
  if (it == rot.end()) throw InternalError("half-edge not at vertex");
  std::vector<int> out(it, rot.end());
  out.insert(out.end(), rot.begin(), it);
  return out;
}

// Classifies a vertex's block. Returns false when not consecutive or wrapping
// in an unsupported way.
bool classify(const Gadget& k, const HatView& hv, int v, const std::vector<int>& pos, Candidate& c) {
  const int n = static_cast<int>(k.dangling.size());
  const int len = static_cast<int>(pos.size());
  int start = -1;
  if (len == n) {
    start = 0;
  } else {
    std::vector<char> in(n, 0);
    for (int p : pos) in[p] = 1;
    int starts = 0;
    for (int p : pos)
      if (!in[(p - 1 + n) % n]) {
        ++starts;
        start = p;
      }
    if (starts != 1) return false;
  }
  c.vertex = v;
  c.start = start;
  c.len = len;
  const int mK = k.m;
  if (start + len <= n) {
    int end = start + len - 1;
    if (end < mK) c.side = Side::Left;
    else if (start >= mK) c.side = Side::Right;
    else c.side = Side::Bottom;
  } else {
    int e = start + len - 1 - n;
    if (start >= mK && e < mK) c.side = Side::Top;
    else return false;
  }
  c.pocket = false;
  if (k.vertices[v].kind == VertexKind::Constraint) {
    auto l = rotFrom(k, v, hv.rep[start]);
    for (int j = 0; j < len; ++j)
      if (l[j] != hv.rep[(start + j) % n]) {
        c.pocket = true;
        break;
      }
  }
  return true;
}

struct Search {
  std::optional<Candidate> clean;
  std::optional<Candidate> pocketed;
};

Search search(const Gadget& k) {
  Search s;
  HatView hv = hatView(k);
  for (const auto& [v, pos] : hv.positions) {
    Candidate c;
    if (!classify(k, hv, v, pos, c)) continue;
    if (!c.pocket) {
      s.clean = c;
      return s;
    }
    if (!s.pocketed) s.pocketed = c;
  }
  return s;
}

// Leaf for a constraint vertex whose half-edges fill the slots of an
// elementary (mX, dX) gadget in counterclockwise slot order.
LeafSpec leafFromSlots(const Gadget& k, int v, const std::vector<int>& slots, int mX, int dX) {
  const auto& vx = k.vertices[v];
  const int n = static_cast<int>(slots.size());
  LeafSpec l;
  l.kind = LeafSpec::F;
  l.fn = k.functions[vx.fn].name;
  l.m = mX;
  l.d = dX;
  if (n == 0) {
    l.conj = vx.conj;
    return l;
  }
  int rot = -1;
  for (int s = 0; s < n; ++s) {
    int idx = k.rotIndex(slots[s]);
    int arg = vx.cw ? (n - idx) % n : idx;
    int y = s;
    if (vx.cw) y = s < mX ? dX + mX - (s + 1) : dX - (s - mX + 1);
    int r = ((y - arg) % n + n) % n;
    if (rot < 0) rot = r;
    else if (rot != r) throw InternalError("argument order is not a rotation of the slot order");
  }
  l.rot = rot;
  l.conj = vx.cw ? !vx.conj : vx.conj;
  l.dagger = vx.cw;
  return l;
}

// Removes vertex v (with its arms when v is a constraint vertex). The
// half-edges in `keep` order (v-side, counterclockwise, non-block) become new
// dangling ends; returned counterclockwise in the residual's numbering before
// compaction.
std::vector<int> cutVertex(Gadget& g, int v, const std::vector<int>& nonBlock, const std::vector<int>& armReps) {
  std::vector<int> stubs;
  if (g.vertices[v].kind == VertexKind::Equality) {
    for (int e : nonBlock) {
      int t = g.halfEdges[e].twin;
      int s = g.addVertex({});
      int in = g.addHalfEdge(s);
      int out = g.addHalfEdge(s);
      g.link(in, t);
      stubs.push_back(out);
    }
  } else {
    for (int b : armReps) g.vertices[g.halfEdges[g.halfEdges[b].twin].vertex].removed = true;
    for (int e : nonBlock) {
      int t = g.halfEdges[e].twin;
      g.halfEdges[t].twin = -1;
      stubs.push_back(t);
    }
  }
  g.vertices[v].removed = true;
  std::reverse(stubs.begin(), stubs.end());
  return stubs;
}

void finishResidual(Gadget& g, std::vector<int> dangling, int m) {
  g.dangling = std::move(dangling);
  g.m = m;
  g.d = static_cast<int>(g.dangling.size()) - m;
  g.compact();
}

std::vector<int> slice(const std::vector<int>& v, int a, int b) {
  return std::vector<int>(v.begin() + a, v.begin() + b);
}

std::vector<int> concat(std::initializer_list<std::vector<int>> parts) {
  std::vector<int> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

DecompositionStep extract(const Gadget& k, const Candidate& c) {
  const int n = static_cast<int>(k.dangling.size());
  const int mK = k.m;
  HatView hv = hatView(k);
  const int v = c.vertex;
  const bool isEq = k.vertices[v].kind == VertexKind::Equality;

  std::vector<int> blockReps;
  for (int j = 0; j < c.len; ++j) blockReps.push_back(hv.rep[(c.start + j) % n]);
  std::vector<int> l = rotFrom(k, v, blockReps[0]);
  std::vector<int> nonBlock;
  for (int h : l)
    if (std::find(blockReps.begin(), blockReps.end(), h) == blockReps.end()) nonBlock.push_back(h);
  const int kk = static_cast<int>(nonBlock.size());

  DecompositionStep st;
  st.vertex = v;
  st.inM = k.m;
  st.inD = k.d;
  Gadget g = k;
  std::vector<int> stubs = cutVertex(g, v, nonBlock, blockReps);
  const auto& old = k.dangling;

  auto eLeaf = [](int m, int d) {
    LeafSpec x;
    x.kind = LeafSpec::E;
    x.m = m;
    x.d = d;
    return x;
  };

  switch (c.side) {
    case Side::Left: {
      st.rule = isEq ? Rule::NewLeftE : Rule::NewLeftF;
      st.r = c.start;
      st.t = mK - c.start - c.len;
      st.m = c.len;
      st.d = kk;
      st.extracted = isEq ? eLeaf(c.len, kk) : leafFromSlots(k, v, l, c.len, kk);
      finishResidual(g, concat({slice(old, 0, c.start), stubs, slice(old, c.start + c.len, n)}), st.r + kk + st.t);
      break;
    }
    case Side::Right: {
      st.rule = isEq ? Rule::NewRightE : Rule::NewRightF;
      st.r = n - c.start - c.len;
      st.t = c.start - mK;
      st.m = kk;
      st.d = c.len;
      if (isEq) {
        st.extracted = eLeaf(kk, c.len);
      } else {
        std::vector<int> slots = concat({slice(l, c.len, static_cast<int>(l.size())), slice(l, 0, c.len)});
        st.extracted = leafFromSlots(k, v, slots, kk, c.len);
      }
      finishResidual(g, concat({slice(old, 0, c.start), stubs, slice(old, c.start + c.len, n)}), mK);
      break;
    }
    case Side::Top: {
      const int rIn = n - c.start;
      const int mOut = c.len - rIn;
      st.rule = isEq ? Rule::NewTopE : Rule::NewTopF;
      st.r = rIn;
      st.t = mK - mOut;
      st.m = mOut;
      st.d = kk;
      if (isEq) {
        st.extracted = eLeaf(mOut, kk + 1);
      } else {
        std::vector<int> slots = concat({slice(l, rIn, static_cast<int>(l.size())), slice(l, 0, rIn)});
        st.extracted = leafFromSlots(k, v, slots, mOut, rIn + kk);
      }
      finishResidual(g, concat({stubs, slice(old, mOut, c.start)}), kk + st.t);
      break;
    }
    case Side::Bottom: {
      const int mOut = mK - c.start;
      const int rIn = c.len - mOut;
      st.rule = isEq ? Rule::NewBottomE : Rule::NewBottomF;
      st.r = rIn;
      st.t = c.start;
      st.m = mOut;
      st.d = kk;
      st.extracted = isEq ? eLeaf(mOut, kk + 1) : leafFromSlots(k, v, l, mOut, rIn + kk);
      finishResidual(g, concat({slice(old, 0, c.start), stubs, slice(old, c.start + c.len, n)}), c.start + kk);
      break;
    }
    case Side::None:
      throw InternalError("candidate without a side");
  }
  st.residual = std::move(g);
  return st;
}

// Lifts the equality vertex inside the first pocket of constraint vertex c
// onto the outer face.
DecompositionStep pocketStep(const Gadget& k, const Candidate& c) {
  const int n = static_cast<int>(k.dangling.size());
  const int mK = k.m;
  HatView hv = hatView(k);
  std::vector<int> blockReps;
  for (int j = 0; j < c.len; ++j) blockReps.push_back(hv.rep[(c.start + j) % n]);
  auto l = rotFrom(k, c.vertex, blockReps[0]);
  int seen = 0, gapAfter = -1, hp = -1;
  for (int h : l) {
    auto it = std::find(blockReps.begin(), blockReps.end(), h);
    if (it != blockReps.end()) {
      ++seen;
      continue;
    }
    if (seen < c.len) {
      hp = h;
      gapAfter = (c.start + seen - 1) % n;
      break;
    }
  }
  if (hp < 0) throw InternalError("pocket edge not found");
  const int hu = k.halfEdges[hp].twin;
  const int u = k.halfEdges[hu].vertex;
  auto lu = rotFrom(k, u, k.next(hu));

  DecompositionStep st;
  st.vertex = u;
  st.inM = k.m;
  st.inD = k.d;
  st.pocket = true;
  st.note = "pocket of vertex " + std::to_string(c.vertex);
  Gadget g = k;
  std::vector<int> stubs = cutVertex(g, u, lu, {});
  const int kk = static_cast<int>(stubs.size());
  const auto& old = k.dangling;
  LeafSpec x;
  x.kind = LeafSpec::E;
  int insertAt;
  if (gapAfter < mK - 1 || gapAfter == mK - 1 || gapAfter == n - 1) {
    insertAt = gapAfter == n - 1 && gapAfter != mK - 1 ? 0 : gapAfter + 1;
    st.rule = Rule::NewLeftE;
    st.r = insertAt;
    st.t = mK - insertAt;
    st.m = 0;
    st.d = kk;
    x.m = 0;
    x.d = kk;
    finishResidual(g, concat({slice(old, 0, insertAt), stubs, slice(old, insertAt, n)}), mK + kk);
  } else {
    insertAt = gapAfter + 1;
    st.rule = Rule::NewRightE;
    st.r = n - insertAt;
    st.t = insertAt - mK;
    st.m = kk;
    st.d = 0;
    x.m = kk;
    x.d = 0;
    finishResidual(g, concat({slice(old, 0, insertAt), stubs, slice(old, insertAt, n)}), mK);
  }
  st.extracted = x;
  st.residual = std::move(g);
  return st;
}

DecompositionStep noDanglingStep(const Gadget& k) {
  DecompositionStep st;
  st.inM = k.m;
  st.inD = k.d;
  Gadget g = k;
  for (int v = 0; v < static_cast<int>(k.vertices.size()); ++v) {
    if (k.vertices[v].kind != VertexKind::Constraint) continue;
    st.rule = Rule::NoDanglingF;
    st.vertex = v;
    const auto& rot = k.vertices[v].rot;
    st.extracted = leafFromSlots(k, v, rot, 0, static_cast<int>(rot.size()));
    st.m = 0;
    st.d = static_cast<int>(rot.size());
    std::vector<int> stubs = cutVertex(g, v, rot, {});
    finishResidual(g, stubs, static_cast<int>(stubs.size()));
    st.residual = std::move(g);
    return st;
  }
  if (k.freeLoops == 0) throw InternalError("closed gadget without constraints or loops is not elementary");
  // a free loop is E^{0,1} ∘ E^{1,0}
  st.rule = Rule::NoDanglingE;
  st.extracted.kind = LeafSpec::E;
  st.extracted.m = 0;
  st.extracted.d = 1;
  st.d = 1;
  --g.freeLoops;
  int v = g.addVertex({});
  finishResidual(g, {g.addHalfEdge(v)}, 1);
  st.residual = std::move(g);
  return st;
}

bool lexLess(const ProgressMeasure& a, const ProgressMeasure& b) {
  return std::tie(a.constraints, a.loops, a.hatEqualities) < std::tie(b.constraints, b.loops, b.hatEqualities);
}

}  // namespace

ProgressMeasure progressMeasure(const Gadget& k) {
  ProgressMeasure p;
  HatView hv = hatView(k);
  p.loops = k.freeLoops;
  for (int v = 0; v < static_cast<int>(k.vertices.size()); ++v) {
    const auto& vx = k.vertices[v];
    if (vx.kind == VertexKind::Constraint) {
      ++p.constraints;
      continue;
    }
    if (!hv.suppressed[v]) ++p.hatEqualities;
    if (vx.rot.size() > 2) ++p.highEqualities;
  }
  return p;
}

std::optional<Candidate> findConsecutiveVertex(const Gadget& k) {
  if (k.dangling.empty()) return Candidate{};
  auto s = search(k);
  return s.clean;
}

std::optional<LeafSpec> elementaryLeaf(const Gadget& k) {
  if (k.freeLoops != 0) return std::nullopt;
  const int n = static_cast<int>(k.dangling.size());
  if (k.vertices.empty()) {
    LeafSpec l;
    return l;
  }
  if (k.vertices.size() == 1) {
    const auto& vx = k.vertices[0];
    if (vx.kind == VertexKind::Equality && static_cast<int>(vx.rot.size()) == n) {
      LeafSpec l;
      l.kind = LeafSpec::E;
      l.m = k.m;
      l.d = k.d;
      return l;
    }
    if (vx.kind == VertexKind::Constraint && vx.rot.empty()) return leafFromSlots(k, 0, {}, 0, 0);
    return std::nullopt;
  }
  int c = -1;
  for (int v = 0; v < static_cast<int>(k.vertices.size()); ++v)
    if (k.vertices[v].kind == VertexKind::Constraint) {
      if (c >= 0) return std::nullopt;
      c = v;
    }
  if (c < 0 || static_cast<int>(k.vertices.size()) != n + 1 || k.degree(c) != n) return std::nullopt;
  HatView hv = hatView(k);
  std::vector<int> slots(n);
  for (int j = 0; j < n; ++j) {
    if (hv.owner[j] != c) return std::nullopt;
    slots[j] = hv.rep[j];
  }
  return leafFromSlots(k, c, slots, k.m, k.d);
}

ExprPtr stepExpr(const DecompositionStep& s, ExprPtr res) {
  ExprPtr x = leafExpr(s.extracted);
  switch (s.rule) {
    case Rule::NewLeftE:
    case Rule::NewLeftF:
      return composeExpr(tensorExpr(tensorExpr(idExpr(s.r), x), idExpr(s.t)), res);
    case Rule::NewRightE:
    case Rule::NewRightF:
      return composeExpr(res, tensorExpr(tensorExpr(idExpr(s.r), x), idExpr(s.t)));
    case Rule::NewTopE:
      return composeExpr(tensorExpr(x, idExpr(s.t)), tensorExpr(eExpr(1, s.r), res));
    case Rule::NewTopF:
      return composeExpr(tensorExpr(x, idExpr(s.t)), tensorExpr(idExpr(s.r), res));
    case Rule::NewBottomE:
      return composeExpr(tensorExpr(idExpr(s.t), x), tensorExpr(res, eExpr(1, s.r)));
    case Rule::NewBottomF:
      return composeExpr(tensorExpr(idExpr(s.t), x), tensorExpr(res, idExpr(s.r)));
    case Rule::NoDanglingF:
    case Rule::NoDanglingE:
      return composeExpr(x, res);
  }
  throw InternalError("bad rule");
}

Decomposition decompose(const Gadget& k0) {
  auto rep = validate(k0);
  if (!rep.ok) throw MalformedGadget(rep.errors.front());
  Gadget cur = k0;
  cur.compact();
  Decomposition dec;
  for (;;) {
    if (auto leaf = elementaryLeaf(cur)) {
      dec.final = *leaf;
      dec.finalM = cur.m;
      dec.finalD = cur.d;
      break;
    }
    DecompositionStep st;
    if (cur.dangling.empty()) {
      st = noDanglingStep(cur);
    } else {
      auto s = search(cur);
      if (s.clean) {
        st = extract(cur, *s.clean);
      } else if (s.pocketed) {
        st = pocketStep(cur, *s.pocketed);
      } else {
        throw InternalError("no vertex with consecutive dangling edges");
      }
    }
    auto vr = validate(st.residual);
    if (!vr.ok) {
      throw InternalError(std::string("residual after ") + ruleName(st.rule) + " is invalid: " + vr.errors.front());
    }
    ProgressMeasure before = progressMeasure(cur), after = progressMeasure(st.residual);
    if (!lexLess(after, before) || after.constraints > before.constraints ||
        (after.constraints == before.constraints && after.highEqualities > before.highEqualities)) {
      throw InternalError(std::string(ruleName(st.rule)) + " step made no progress");
    }
    cur = st.residual;
    dec.steps.push_back(std::move(st));
  }
  ExprPtr e = leafExpr(dec.final);
  for (auto it = dec.steps.rbegin(); it != dec.steps.rend(); ++it) e = stepExpr(*it, e);
  dec.expr = e;
  return dec;
}

std::vector<SequenceFactor> factorSequence(const Decomposition& dec) {
  std::vector<SequenceFactor> seq;
  for (const auto& s : dec.steps) {
    SequenceFactor f;
    f.leaf = s.extracted;
    switch (s.rule) {
      case Rule::NoDanglingF:
      case Rule::NoDanglingE:
        f.m = 0;
        f.d = s.extracted.d;
        break;
      case Rule::NewLeftE:
      case Rule::NewLeftF:
        f.r = s.r;
        f.t = s.t;
        f.m = s.extracted.m;
        f.d = s.extracted.d;
        break;
      default:
        throw InternalError(std::string("closed-grid factor sequence cannot contain ") + ruleName(s.rule));
    }
    if (s.inD != 0) throw InternalError("factor sequence requires a closed grid");
    seq.push_back(f);
  }
  SequenceFactor last;
  last.leaf = dec.final;
  last.m = dec.finalM;
  last.d = dec.finalD;
  if (last.d != 0) throw InternalError("final residual of a closed grid must have no inputs");
  seq.push_back(last);
  return seq;
}

Matrix factorMatrix(const SequenceFactor& f, const SignatureSet& fs) {
  Matrix x = leafMatrix(f.leaf, fs);
  x.q = fs.q();
  x.m = f.m;
  x.d = f.d;
  return kronecker(kronecker(identityPower(fs.q(), f.r), x), identityPower(fs.q(), f.t));
}

bool shapeChainHolds(const std::vector<SequenceFactor>& seq, std::string* why) {
  auto fail = [&](const std::string& s) {
    if (why) *why = s;
    return false;
  };
  if (seq.empty()) return fail("empty sequence");
  if (seq[0].r != 0 || seq[0].t != 0 || seq[0].m != 0) return fail("first factor must be a bare (0,n) piece");
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    const auto& a = seq[i];
    const auto& b = seq[i + 1];
    if (a.r + a.d + a.t != b.r + b.m + b.t) return fail("chain breaks between factors " + std::to_string(i + 1));
  }
  const auto& last = seq.back();
  if (last.d != 0 || last.r != 0 || last.t != 0) return fail("last factor must be a bare (m,0) piece");
  return true;
}

Matrix replayDecomposition(const Decomposition& dec, const SignatureSet& fs) {
  bool closed = dec.steps.empty() ? dec.finalM == 0 && dec.finalD == 0
                                  : dec.steps.front().inM == 0 && dec.steps.front().inD == 0;
  if (!closed) return evalExprSliced(dec.expr, fs);
  std::vector<SequenceFactor> seq = factorSequence(dec);
  std::string why;
  if (!shapeChainHolds(seq, &why)) throw InternalError("shape chain violated: " + why);
  // V_1 (V_2 (... V_p)), each padded factor applied to its digit slice
  const int q = fs.q();
  Matrix acc = leafMatrix(seq.back().leaf, fs);
  for (std::size_t i = seq.size() - 1; i-- > 0;) {
    const auto& f = seq[i];
    acc = applyOnSlice(leafMatrix(f.leaf, fs), checkedPow(q, f.r), checkedPow(q, f.t), acc);
  }
  acc.q = q;
  acc.m = 0;
  acc.d = 0;
  return acc;
}

}  // namespace holant
