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

#include "holant/csp.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/boyer_myrvold_planar_test.hpp>

#include "holant/errors.hpp"

namespace holant {

std::string CSPInstance::variableName(int v) const {
  if (v >= 0 && v < static_cast<int>(names.size()) && !names[v].empty()) return names[v];
  return std::to_string(v);
}

void checkInstance(const CSPInstance& k, const SignatureSet& fs) {
  if (k.numVariables < 0) throw ParseError("negative variable count");
  if (!k.names.empty() && static_cast<int>(k.names.size()) != k.numVariables)
    throw ParseError("variable name list does not match the variable count");
  for (std::size_t c = 0; c < k.constraints.size(); ++c) {
    const auto& con = k.constraints[c];
    if (!fs.has(con.fn)) throw ParseError("constraint " + std::to_string(c) + ": unknown function '" + con.fn + "'");
    if (static_cast<int>(con.args.size()) != fs.get(con.fn)->arity())
      throw ArityError("constraint " + std::to_string(c) + ": '" + con.fn + "' has arity " +
                       std::to_string(fs.get(con.fn)->arity()) + " but " + std::to_string(con.args.size()) +
                       " variables");
    for (int v : con.args)
      if (v < 0 || v >= k.numVariables) throw ParseError("constraint " + std::to_string(c) + ": unknown variable");
  }
  for (int v : k.labels)
    if (v < 0 || v >= k.numVariables) throw ParseError("label refers to an unknown variable");
}

namespace {

struct GridBuild {
  Gadget g;
  std::vector<int> eqVertex;                  // per variable, -1 if absent
  std::vector<std::vector<int>> argHe;        // constraint c, arg j -> half-edge at the equality side
  std::vector<int> labelHe;                   // dangling half-edge per label
  std::vector<int> conVertex;                 // per constraint
};

GridBuild buildGrid(const CSPInstance& k, const SignatureSet& fs, bool withLabels) {
  checkInstance(k, fs);
  GridBuild b;
  b.g.q = fs.q();
  std::vector<int> uses(k.numVariables, 0);
  for (const auto& c : k.constraints)
    for (int v : c.args) ++uses[v];
  if (withLabels)
    for (int v : k.labels) ++uses[v];
  b.eqVertex.assign(k.numVariables, -1);
  for (int v = 0; v < k.numVariables; ++v) {
    if (uses[v] == 0) ++b.g.freeLoops;  // a lone variable sums to q
    else b.eqVertex[v] = b.g.addVertex({});
  }
  for (const auto& c : k.constraints) {
    Vertex vx;
    vx.kind = VertexKind::Constraint;
    vx.fn = b.g.functionIndex(c.fn, fs.get(c.fn));
    int cv = b.g.addVertex(vx);
    b.conVertex.push_back(cv);
    std::vector<int> hs;
    for (int v : c.args) {
      int a = b.g.addHalfEdge(cv);
      int e = b.g.addHalfEdge(b.eqVertex[v]);
      b.g.link(a, e);
      hs.push_back(e);
    }
    b.argHe.push_back(hs);
  }
  if (withLabels) {
    for (int v : k.labels) {
      int h = b.g.addHalfEdge(b.eqVertex[v]);
      b.labelHe.push_back(h);
      b.g.dangling.push_back(h);
    }
    b.g.m = static_cast<int>(k.labels.size());
  }
  return b;
}

}  // namespace

Gadget toSignatureGrid(const CSPInstance& k, const SignatureSet& fs, bool withLabels) {
  return buildGrid(k, fs, withLabels).g;
}

GQ partitionFunction(const CSPInstance& k, const SignatureSet& fs, const std::optional<Pin>& pin) {
  if (!pin) {
    Gadget g = toSignatureGrid(k, fs, false);
    return danglingTensor(g)[0];
  }
  const int nl = static_cast<int>(k.labels.size());
  std::vector<int> x(nl, -1);
  for (const auto& [label, value] : *pin) {
    if (label < 0 || label >= nl) throw PinError("unknown label " + std::to_string(label));
    if (value < 0 || value >= fs.q()) throw PinError("pin value " + std::to_string(value) + " outside the domain");
    x[label] = value;
  }
  for (int i = 0; i < nl; ++i)
    if (x[i] < 0) throw PinError("label " + std::to_string(i) + " is not pinned");
  Gadget g = toSignatureGrid(k, fs, true);
  return danglingTensor(g).at(x);
}

namespace {

using PlanarGraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS,
                                          boost::property<boost::vertex_index_t, int>,
                                          boost::property<boost::edge_index_t, int>>;
using EdgeDesc = boost::graph_traits<PlanarGraph>::edge_descriptor;

// Auxiliary graph for the argument-order test. Every constraint (and the
// label cycle) of degree >= 3 becomes a wheel: its rim fixes the cyclic order
// up to reflection. Grid edges are subdivided so the graph is simple.
struct Aux {
  int nodes = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> heOfEdge;  // grid half-edge at the equality end, or -1
  std::vector<int> eqNode;    // per grid equality vertex
  struct Hub {
    int hub = -1;
    int rimBase = 0;
    int n = 0;
  };
  std::vector<Hub> hubs;  // per constraint, hub = -1 when degree < 3
  Hub labelHub;

  int node() { return nodes++; }
  void edge(int a, int b, int he = -1) {
    edges.push_back({a, b});
    heOfEdge.push_back(he);
  }
};

Aux buildAux(const GridBuild& b, const CSPInstance& k) {
  Aux a;
  const Gadget& g = b.g;
  a.eqNode.assign(g.vertices.size(), -1);
  for (int v = 0; v < static_cast<int>(g.vertices.size()); ++v)
    if (g.vertices[v].kind == VertexKind::Equality) a.eqNode[v] = a.node();
  auto attach = [&](const std::vector<int>& hes, Aux::Hub& hub) {
    const int n = static_cast<int>(hes.size());
    std::vector<int> ends(n);
    if (n >= 3) {
      hub.hub = a.node();
      hub.rimBase = a.nodes;
      hub.n = n;
      for (int j = 0; j < n; ++j) ends[j] = a.node();
      for (int j = 0; j < n; ++j) {
        a.edge(hub.hub, ends[j]);
        a.edge(ends[j], ends[(j + 1) % n]);
      }
    } else {
      int c = a.node();
      for (int j = 0; j < n; ++j) ends[j] = c;
    }
    for (int j = 0; j < n; ++j) {
      int s = a.node();
      a.edge(ends[j], s);
      a.edge(s, a.eqNode[g.halfEdges[hes[j]].vertex], hes[j]);
    }
  };
  a.hubs.resize(k.constraints.size());
  for (std::size_t c = 0; c < k.constraints.size(); ++c) attach(b.argHe[c], a.hubs[c]);
  if (!b.labelHe.empty()) attach(b.labelHe, a.labelHub);
  return a;
}

// +1 if the hub lists its rim in increasing cyclic order, -1 if decreasing.
int hubOrientation(const Aux::Hub& h, const std::vector<EdgeDesc>& around, const PlanarGraph& pg) {
  if (h.hub < 0) return 1;
  std::vector<int> seq;
  for (const auto& e : around) {
    int s = static_cast<int>(boost::source(e, pg)), t = static_cast<int>(boost::target(e, pg));
    int other = s == h.hub ? t : s;
    seq.push_back(other - h.rimBase);
  }
  if (static_cast<int>(seq.size()) != h.n) throw InternalError("wheel hub degree mismatch");
  bool inc = true, dec = true;
  for (int i = 0; i < h.n; ++i) {
    int x = seq[i], y = seq[(i + 1) % h.n];
    inc = inc && y == (x + 1) % h.n;
    dec = dec && x == (y + 1) % h.n;
  }
  if (inc) return 1;
  if (dec) return -1;
  throw InternalError("wheel rim is not in cyclic order");
}

void setConstraintRotation(Gadget& g, int cv, bool cw) {
  auto& vx = g.vertices[cv];
  const int n = static_cast<int>(vx.rot.size());
  std::vector<int> args = vx.rot;  // construction order = argument order
  vx.cw = cw;
  if (cw)
    for (int k = 0; k < n; ++k) vx.rot[k] = args[(n - k) % n];
}

}  // namespace

PlanarityResult isPlanarInstance(const CSPInstance& k, const SignatureSet& fs) {
  GridBuild b = buildGrid(k, fs, true);
  Aux a = buildAux(b, k);
  PlanarGraph pg(a.nodes);
  for (const auto& [x, y] : a.edges) boost::add_edge(x, y, pg);
  auto eIndex = boost::get(boost::edge_index, pg);
  int ec = 0;
  boost::graph_traits<PlanarGraph>::edge_iterator ei, eend;
  for (boost::tie(ei, eend) = boost::edges(pg); ei != eend; ++ei) boost::put(eIndex, *ei, ec++);
  // edges were added in order, so edge_index matches a.edges positions
  std::vector<std::vector<EdgeDesc>> storage(a.nodes);
  auto embedding = boost::make_iterator_property_map(storage.begin(), boost::get(boost::vertex_index, pg));
  PlanarityResult res;
  if (!boost::boyer_myrvold_planarity_test(boost::boyer_myrvold_params::graph = pg,
                                           boost::boyer_myrvold_params::embedding = embedding)) {
    return res;
  }
  res.planar = true;
  Gadget g = b.g;
  for (int v = 0; v < static_cast<int>(g.vertices.size()); ++v) {
    if (a.eqNode[v] < 0) continue;
    std::vector<int> rot;
    for (const auto& e : storage[a.eqNode[v]]) rot.push_back(a.heOfEdge[boost::get(eIndex, e)]);
    g.vertices[v].rot = rot;
  }
  for (std::size_t c = 0; c < k.constraints.size(); ++c) {
    int o = a.hubs[c].hub >= 0 ? hubOrientation(a.hubs[c], storage[a.hubs[c].hub], pg) : 1;
    setConstraintRotation(g, b.conVertex[c], o < 0);
  }
  // The embedding's handedness is unknown; the dangling order must read
  // counterclockwise, so try the reading and its mirror.
  auto mirrored = [](Gadget x) {
    for (auto& vx : x.vertices) {
      if (vx.rot.size() > 1) std::reverse(vx.rot.begin() + 1, vx.rot.end());
      if (vx.kind == VertexKind::Constraint) vx.cw = !vx.cw;
    }
    return x;
  };
  for (const Gadget& cand : {g, mirrored(g)}) {
    if (validate(cand).ok) {
      res.grid = cand;
      return res;
    }
  }
  throw InternalError("planar embedding could not be transferred to the grid: " + validate(g).errors.front());
}

void checkCompatible(const SignatureSet& f, const SignatureSet& g, const std::map<std::string, std::string>& map) {
  if (f.q() != g.q())
    throw CompatibilityError("domain sizes differ (" + std::to_string(f.q()) + " vs " + std::to_string(g.q()) + ")");
  for (const auto& [a, b] : map) {
    if (!f.has(a)) throw CompatibilityError("unknown source function '" + a + "'");
    if (!g.has(b)) throw CompatibilityError("unknown target function '" + b + "'");
    if (f.get(a)->arity() != g.get(b)->arity())
      throw CompatibilityError("'" + a + "' and '" + b + "' have different arities");
  }
  for (const auto& [a1, b1] : map)
    for (const auto& [a2, b2] : map) {
      bool fc = *f.get(a1) == conjugate(*f.get(a2));
      bool gc = *g.get(b1) == conjugate(*g.get(b2));
      if (fc != gc)
        throw CompatibilityError("conjugate pairing of '" + a1 + "','" + a2 + "' is not matched by '" + b1 + "','" +
                                 b2 + "'");
    }
}

namespace {

CSPInstance substitute(const CSPInstance& k, const std::map<std::string, std::string>& map) {
  CSPInstance out = k;
  for (auto& c : out.constraints) {
    auto it = map.find(c.fn);
    if (it == map.end()) throw CompatibilityError("function '" + c.fn + "' has no counterpart");
    c.fn = it->second;
  }
  return out;
}

}  // namespace

CSPInstance rewriteInstance(const CSPInstance& k, const SignatureSet& f, const SignatureSet& g,
                            const std::map<std::string, std::string>& map) {
  checkCompatible(f, g, map);
  checkInstance(k, f);
  return substitute(k, map);
}

CSPInstance edgeInstance(const SimpleGraph& g, const std::string& fn) {
  CSPInstance k;
  k.numVariables = g.n;
  for (const auto& [u, v] : g.edges) k.constraints.push_back({fn, {u, v}});
  return k;
}

GQ homCount(const SimpleGraph& k, const ConstraintFunction& x) {
  if (x.arity() != 2) throw ArityError("homCount needs a binary target");
  SignatureSet fs(x.q());
  fs.add("A", x);
  return partitionFunction(edgeInstance(k, "A"), fs);
}

ConstraintFunction adjacencyFunction(const SimpleGraph& g) {
  ConstraintFunction a(g.n, 2);
  for (const auto& [u, v] : g.edges) {
    a.at({u, v}) = 1;
    a.at({v, u}) = 1;
  }
  return a;
}

SimpleGraph cycleGraph(int n) {
  SimpleGraph g{n, {}};
  for (int i = 0; i < n; ++i) g.edges.push_back({i, (i + 1) % n});
  return g;
}

SimpleGraph completeGraph(int n) {
  SimpleGraph g{n, {}};
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.edges.push_back({i, j});
  return g;
}

SimpleGraph pathGraph(int n) {
  SimpleGraph g{n, {}};
  for (int i = 0; i + 1 < n; ++i) g.edges.push_back({i, i + 1});
  return g;
}

SimpleGraph petersenGraph() {
  SimpleGraph g{10, {}};
  for (int i = 0; i < 5; ++i) {
    g.edges.push_back({i, (i + 1) % 5});
    g.edges.push_back({i, i + 5});
    g.edges.push_back({5 + i, 5 + (i + 2) % 5});
  }
  return g;
}

std::string canonicalForm(const CSPInstance& k) {
  // relabel variables by first appearance in the sorted constraint list,
  // twice, so the labelling settles for most small instances
  std::vector<CspConstraint> cs = k.constraints;
  std::vector<int> labels = k.labels;
  int n = k.numVariables;
  for (int round = 0; round < 2; ++round) {
    std::sort(cs.begin(), cs.end(),
              [](const CspConstraint& a, const CspConstraint& b) { return std::tie(a.fn, a.args) < std::tie(b.fn, b.args); });
    std::vector<int> rename(n, -1);
    int next = 0;
    for (int v : labels)
      if (rename[v] < 0) rename[v] = next++;
    for (const auto& c : cs)
      for (int v : c.args)
        if (rename[v] < 0) rename[v] = next++;
    for (int v = 0; v < n; ++v)
      if (rename[v] < 0) rename[v] = next++;
    for (auto& c : cs)
      for (int& v : c.args) v = rename[v];
    for (int& v : labels) v = rename[v];
  }
  std::sort(cs.begin(), cs.end(),
            [](const CspConstraint& a, const CspConstraint& b) { return std::tie(a.fn, a.args) < std::tie(b.fn, b.args); });
  std::ostringstream os;
  os << n << "|";
  for (int v : labels) os << v << ",";
  os << "|";
  for (const auto& c : cs) {
    os << c.fn << "(";
    for (int v : c.args) os << v << ",";
    os << ")";
  }
  return os.str();
}

namespace {

bool connectedAndCovered(const CSPInstance& k) {
  if (k.numVariables == 0) return false;
  std::vector<int> parent(k.numVariables);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  std::vector<char> used(k.numVariables, 0);
  for (const auto& c : k.constraints)
    for (int v : c.args) {
      used[v] = 1;
      parent[find(v)] = find(c.args[0]);
    }
  for (int v = 0; v < k.numVariables; ++v)
    if (!used[v] || find(v) != find(0)) return false;
  return true;
}

}  // namespace

std::vector<CSPInstance> planarCorpus(const SignatureSet& fs, const CorpusParams& p) {
  std::mt19937_64 rng(p.seed);
  auto pick = [&](const std::vector<std::string>& v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
  };
  std::map<int, std::vector<std::string>> byArity;
  std::vector<std::string> all;
  for (const auto& [name, f] : fs.all()) {
    byArity[f->arity()].push_back(name);
    all.push_back(name);
  }
  std::vector<CSPInstance> out;
  std::set<std::string> seen;
  auto offer = [&](CSPInstance k) {
    if (static_cast<int>(out.size()) >= p.count) return;
    if (k.numVariables > p.maxVariables || static_cast<int>(k.constraints.size()) > p.maxConstraints) return;
    if (k.constraints.empty() || !connectedAndCovered(k)) return;
    std::string key = canonicalForm(k);
    if (seen.count(key)) return;
    if (!isPlanarInstance(k, fs).planar) return;
    seen.insert(key);
    out.push_back(std::move(k));
  };
  if (all.empty()) return out;

  // families, smallest first
  const bool binary = byArity.count(2) > 0;
  for (int n = 1; n <= p.maxVariables; ++n) {
    for (const auto& [ar, names] : byArity) {
      if (ar == 0) continue;
      for (const auto& fn : names) {
        CSPInstance k;
        k.numVariables = n;
        if (ar >= n) {
          // one constraint touching every variable, cyclically
          std::vector<int> args(ar);
          for (int j = 0; j < ar; ++j) args[j] = j % n;
          k.constraints.push_back({fn, args});
          offer(k);
        }
      }
    }
    if (!binary) continue;
    const auto& bn = byArity[2];
    auto fromGraph = [&](const SimpleGraph& g) {
      CSPInstance k;
      k.numVariables = g.n;
      for (const auto& [u, v] : g.edges) k.constraints.push_back({pick(bn), {u, v}});
      return k;
    };
    if (n >= 2) offer(fromGraph(pathGraph(n)));
    if (n >= 3) offer(fromGraph(cycleGraph(n)));
    if (n == 1) {
      CSPInstance loop;
      loop.numVariables = 1;
      loop.constraints.push_back({pick(bn), {0, 0}});
      offer(loop);
    }
    if (n == 2) {
      CSPInstance two;
      two.numVariables = 2;
      two.constraints.push_back({pick(bn), {0, 1}});
      two.constraints.push_back({pick(bn), {1, 0}});
      offer(two);
    }
    if (n >= 4) {
      SimpleGraph star{n, {}};
      for (int i = 1; i < n; ++i) star.edges.push_back({0, i});
      offer(fromGraph(star));
      SimpleGraph wheel = star;
      for (int i = 1; i < n; ++i) wheel.edges.push_back({i, i + 1 < n ? i + 1 : 1});
      offer(fromGraph(wheel));
      SimpleGraph grid{n, {}};
      int half = n / 2;
      for (int i = 0; i + 1 < half; ++i) grid.edges.push_back({i, i + 1});
      for (int i = half; i + 1 < 2 * half; ++i) grid.edges.push_back({i, i + 1});
      for (int i = 0; i < half; ++i) grid.edges.push_back({i, i + half});
      if (n % 2) grid.edges.push_back({2 * half - 1, n - 1});
      offer(fromGraph(grid));
      offer(fromGraph(completeGraph(4)));
    }
    if (byArity.count(1)) {
      for (const auto& un : byArity[1]) {
        CSPInstance k = n >= 2 ? fromGraph(pathGraph(n)) : CSPInstance{1, {}, {}, {}};
        k.constraints.push_back({un, {n - 1}});
        offer(k);
      }
    }
  }
  // random trees
  if (binary) {
    for (int attempt = 0; attempt < p.count && static_cast<int>(out.size()) < p.count; ++attempt) {
      int n = std::uniform_int_distribution<int>(2, std::max(2, p.maxVariables))(rng);
      CSPInstance k;
      k.numVariables = n;
      for (int v = 1; v < n; ++v) {
        int u = std::uniform_int_distribution<int>(0, v - 1)(rng);
        k.constraints.push_back({pick(byArity[2]), {u, v}});
      }
      offer(k);
    }
  }
  // random instances
  const int limit = 200 * std::max(1, p.count);
  for (int attempt = 0; attempt < limit && static_cast<int>(out.size()) < p.count; ++attempt) {
    CSPInstance k;
    k.numVariables = std::uniform_int_distribution<int>(1, p.maxVariables)(rng);
    int nc = std::uniform_int_distribution<int>(1, p.maxConstraints)(rng);
    for (int c = 0; c < nc; ++c) {
      std::string fn = pick(all);
      std::vector<int> args(fs.get(fn)->arity());
      for (int& v : args) v = std::uniform_int_distribution<int>(0, k.numVariables - 1)(rng);
      k.constraints.push_back({fn, args});
    }
    offer(k);
  }
  return out;
}

CompareReport planarEquivalenceTest(const SignatureSet& f, const SignatureSet& g,
                                    const std::map<std::string, std::string>& map, const CorpusParams& p, int jobs,
                                    const std::function<void(const CompareRecord&)>& onRecord) {
  CompareReport rep;
  rep.params = p;
  rep.domainSizesDiffer = f.q() != g.q();
  for (const auto& [a, b] : map) {
    if (!f.has(a)) throw CompatibilityError("unknown source function '" + a + "'");
    if (!g.has(b)) throw CompatibilityError("unknown target function '" + b + "'");
    if (f.get(a)->arity() != g.get(b)->arity())
      throw CompatibilityError("'" + a + "' and '" + b + "' have different arities");
  }
  if (!rep.domainSizesDiffer) checkCompatible(f, g, map);
  SignatureSet source(f.q());
  for (const auto& [a, b] : map) source.add(a, *f.get(a));
  std::vector<CSPInstance> corpus = planarCorpus(source, p);
  rep.records.resize(corpus.size());

  std::mutex mu;
  std::vector<char> done(corpus.size(), 0);
  std::size_t emitted = 0;
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= corpus.size()) return;
      CompareRecord r;
      r.index = i;
      r.instance = corpus[i];
      r.zF = partitionFunction(corpus[i], f);
      r.zG = partitionFunction(substitute(corpus[i], map), g);
      r.equal = r.zF == r.zG;
      std::lock_guard<std::mutex> lock(mu);
      rep.records[i] = std::move(r);
      done[i] = 1;
      while (emitted < corpus.size() && done[emitted]) {
        if (onRecord) onRecord(rep.records[emitted]);
        ++emitted;
      }
    }
  };
  const int nj = std::max(1, jobs);
  if (nj == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < nj; ++j) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (std::size_t i = 0; i < rep.records.size(); ++i)
    if (!rep.records[i].equal) {
      rep.firstRefutation = i;
      break;
    }
  return rep;
}

}  // namespace holant
