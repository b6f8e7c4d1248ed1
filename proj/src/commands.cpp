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

#include "holant/commands.hpp"

#include <atomic>
#include <condition_variable>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "holant/csp.hpp"
#include "holant/decomposer.hpp"
#include "holant/errors.hpp"
#include "holant/qaut.hpp"
#include "holant/quantum.hpp"
#include "holant/sampling.hpp"

namespace holant {

const char* const kFiniteDimensionNote =
    "finite-dimensional check: a pass certifies this witness; a failure refutes only this U, since a quantum "
    "isomorphism may require an infinite-dimensional witness";

namespace {

const std::set<std::string> kManifestKeys = {
    "functions", "g_functions", "map",   "instance", "gadget",       "qpm",          "pin",
    "budget",    "epsilon",     "seed",  "jobs",     "max_vertices", "max_constraints", "count",
    "m",         "d",           "max_dangling", "mode", "fn",       "g_fn",         "self",
    "inputs",    "strategy",    "bijection",    "permutation", "depth"};

class Manifest {
 public:
  Manifest(const Json& j, const RunOptions& opt) : j_(j), opt_(opt) {
    if (!j.is_object()) throw ParseError("manifest: expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
      if (!kManifestKeys.count(it.key())) throw ParseError("manifest: unknown key '" + it.key() + "'");
  }

  bool has(const char* key) const { return j_.contains(key) && !j_.at(key).is_null(); }
  const Json& raw(const char* key) const {
    if (!has(key)) throw ParseError(std::string("manifest: missing '") + key + "'");
    return j_.at(key);
  }

  // File reference (string) or inline object.
  Json doc(const char* key) const {
    const Json& v = raw(key);
    if (!v.is_string()) return v;
    std::filesystem::path p = v.get<std::string>();
    if (p.is_relative() && !opt_.baseDir.empty()) p = opt_.baseDir / p;
    return loadJsonFile(p);
  }

  SignatureSet functions(const char* key) const { return signatureSetFromJson(doc(key), key); }

  int integer(const char* key, int def, int lo = 0) const {
    if (!has(key)) return def;
    const Json& v = raw(key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < lo || v.get<std::int64_t>() > (1 << 30)) {
      throw ParseError(std::string("manifest: '") + key + "' must be an integer >= " + std::to_string(lo));
    }
    return static_cast<int>(v.get<std::int64_t>());
  }
  std::uint64_t seed() const {
    if (!has("seed")) return 1;
    const Json& v = raw("seed");
    if (!v.is_number_unsigned()) throw ParseError("manifest: 'seed' must be a non-negative integer");
    return v.get<std::uint64_t>();
  }
  double real(const char* key, double def) const {
    if (!has(key)) return def;
    const Json& v = raw(key);
    if (!v.is_number() || v.get<double>() < 0) throw ParseError(std::string("manifest: '") + key + "' must be >= 0");
    return v.get<double>();
  }
  bool flag(const char* key) const {
    if (!has(key)) return false;
    if (!raw(key).is_boolean()) throw ParseError(std::string("manifest: '") + key + "' must be a boolean");
    return raw(key).get<bool>();
  }
  std::string str(const char* key, const std::string& def) const {
    if (!has(key)) return def;
    if (!raw(key).is_string()) throw ParseError(std::string("manifest: '") + key + "' must be a string");
    return raw(key).get<std::string>();
  }
  std::vector<int> ints(const char* key) const {
    const Json& v = raw(key);
    std::vector<int> out;
    if (!v.is_array()) throw ParseError(std::string("manifest: '") + key + "' must be an integer array");
    for (const auto& x : v) {
      if (!x.is_number_integer()) throw ParseError(std::string("manifest: '") + key + "' must be an integer array");
      out.push_back(x.get<int>());
    }
    return out;
  }

  const RunOptions& options() const { return opt_; }

 private:
  const Json& j_;
  const RunOptions& opt_;
};

std::string text(const GQ& x) { return x.toString(); }

Json scalarReport(const GQ& x) { return Json{{"value", toJson(x)}, {"text", text(x)}}; }

// Explicit map, or the identity on F's names (all of which must exist in G).
std::map<std::string, std::string> resolveMap(const Manifest& m, const SignatureSet& f, const SignatureSet& g) {
  if (m.has("map")) return nameMapFromJson(m.doc("map"), "map");
  std::map<std::string, std::string> id;
  for (const auto& [name, fn] : f.all()) {
    if (!g.has(name)) throw CompatibilityError("no map given and G has no function '" + name + "'");
    id[name] = name;
  }
  return id;
}

std::string binaryName(const Manifest& m, const char* key, const SignatureSet& fs) {
  if (m.has(key)) {
    std::string n = m.str(key, "");
    if (!fs.has(n)) throw ParseError("unknown function '" + n + "'");
    return n;
  }
  std::string found;
  for (const auto& [name, f] : fs.all()) {
    if (f->arity() != 2) continue;
    if (!found.empty()) throw ParseError(std::string("several binary functions; choose one with '") + key + "'");
    found = name;
  }
  if (found.empty()) throw ParseError("no binary function in the set");
  return found;
}

// Runs work(0..n-1) on a pool; emit sees results in index order as soon as
// the prefix is complete.
void orderedParallel(std::size_t n, int jobs, const std::function<Json(std::size_t)>& work,
                     const std::function<void(Json&&)>& emit) {
  std::vector<std::optional<Json>> done(n);
  std::size_t next = 0;
  std::mutex mu;
  std::exception_ptr failure;
  std::atomic<std::size_t> claim{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = claim++;
      if (i >= n) return;
      Json r;
      try {
        r = work(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
        claim = n;
        return;
      }
      std::lock_guard<std::mutex> lock(mu);
      done[i] = std::move(r);
      while (!failure && next < n && done[next]) {
        emit(std::move(*done[next]));
        done[next].reset();
        ++next;
      }
    }
  };
  const int nj = std::max(1, std::min<int>(jobs, static_cast<int>(std::max<std::size_t>(n, 1))));
  if (nj == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nj; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

// Collects or streams corpus records.
class RecordSink {
 public:
  explicit RecordSink(const RunOptions& opt) : opt_(opt) {}
  void operator()(Json&& r) {
    if (opt_.stream && opt_.onRecord) {
      opt_.onRecord(r);
    } else {
      records_.push_back(std::move(r));
    }
  }
  void attach(Json& report) {
    if (!(opt_.stream && opt_.onRecord)) report["records"] = std::move(records_);
  }

 private:
  const RunOptions& opt_;
  Json records_ = Json::array();
};

// ---------------------------------------------------------------------------

CommandResult cmdEval(const Manifest& m) {
  CommandResult res;
  SignatureSet fs = m.functions("functions");
  if (m.has("instance")) {
    CSPInstance k = instanceFromJson(m.doc("instance"), fs, "instance");
    std::optional<Pin> pin;
    if (m.has("pin")) {
      pin = Pin{};
      const Json& p = m.raw("pin");
      if (p.is_array()) {
        for (std::size_t i = 0; i < p.size(); ++i) {
          if (!p[i].is_number_integer()) throw ParseError("pin: values must be integers");
          (*pin)[static_cast<int>(i)] = p[i].get<int>();
        }
      } else if (p.is_object()) {
        for (auto it = p.begin(); it != p.end(); ++it) {
          if (!it.value().is_number_integer()) throw ParseError("pin: values must be integers");
          int label = 0;
          try {
            label = std::stoi(it.key());
          } catch (const std::exception&) {
            throw ParseError("pin: keys are label positions");
          }
          (*pin)[label] = it.value().get<int>();
        }
      } else {
        throw ParseError("pin: expected an array or an object");
      }
    }
    GQ z = partitionFunction(k, fs, pin);
    res.report["kind"] = pin ? "pinned partition function" : "partition function";
    res.report["value"] = toJson(z);
    res.report["text"] = text(z);
    res.summary.push_back((pin ? "Z^psi = " : "Z = ") + text(z));
    return res;
  }
  if (!m.has("gadget")) throw ParseError("eval needs an 'instance' or a 'gadget'");
  Gadget g = gadgetFromJson(m.doc("gadget"), fs, "gadget");
  Matrix a = cachedSignatureMatrix(g, m.options().cacheDir);
  res.report["kind"] = "signature matrix";
  res.report["m"] = g.m;
  res.report["d"] = g.d;
  res.report["matrix"] = toJson(a);
  if (g.m == 0 && g.d == 0) {
    res.report["value"] = toJson(a(0, 0));
    res.report["text"] = text(a(0, 0));
    res.summary.push_back("Holant = " + text(a(0, 0)));
  } else {
    res.summary.push_back("M(K) is " + std::to_string(a.rows()) + " x " + std::to_string(a.cols()));
    for (std::size_t r = 0; r < a.rows(); ++r) {
      std::string line = " ";
      for (std::size_t c = 0; c < a.cols(); ++c) line += " " + text(a(r, c));
      res.summary.push_back(line);
    }
  }
  return res;
}

struct DecomposeCheck {
  Decomposition dec;
  bool replayOk = false;
  bool auditOk = false;
  std::vector<std::string> badLeaves;
};

DecomposeCheck checkDecomposition(const Gadget& g, const SignatureSet& fs, const std::filesystem::path& cache) {
  DecomposeCheck c;
  c.dec = decompose(g);
  c.replayOk = replayDecomposition(c.dec, fs) == cachedSignatureMatrix(g, cache);
  c.auditOk = auditGenerators(expandToGenerators(c.dec.expr, fs), fs, &c.badLeaves);
  return c;
}

CommandResult cmdDecompose(const Manifest& m) {
  CommandResult res;
  SignatureSet fs = m.functions("functions");
  const auto& cache = m.options().cacheDir;
  if (m.has("gadget")) {
    Gadget g = gadgetFromJson(m.doc("gadget"), fs, "gadget");
    DecomposeCheck c = checkDecomposition(g, fs, cache);
    res.report["trace"] = toJson(c.dec);
    if (g.m == 0 && g.d == 0) {
      Json factors = Json::array();
      for (const auto& f : factorSequence(c.dec)) {
        factors.push_back(Json{{"r", f.r}, {"m", f.m}, {"d", f.d}, {"t", f.t}, {"leaf", toJson(f.leaf)}});
      }
      std::string why;
      res.report["factors"] = std::move(factors);
      res.report["shape_chain"] = shapeChainHolds(factorSequence(c.dec), &why);
      if (!why.empty()) res.report["shape_chain_detail"] = why;
    }
    res.report["replay_ok"] = c.replayOk;
    res.report["audit_ok"] = c.auditOk;
    res.report["bad_leaves"] = c.badLeaves;
    res.status = c.replayOk && c.auditOk ? kStatusOk : kStatusRefuted;
    res.summary.push_back(std::to_string(c.dec.steps.size()) + " steps, " + std::to_string(exprLeafCount(c.dec.expr)) +
                          " leaves");
    res.summary.push_back(std::string("replay ") + (c.replayOk ? "matches M(K)" : "DIFFERS from M(K)"));
    res.summary.push_back(std::string("generator audit ") + (c.auditOk ? "clean" : "found non-generator leaves"));
    return res;
  }
  // corpus of sampled gadgets with m + d <= 4
  const int count = m.integer("count", 100, 1);
  const int maxVertices = m.integer("max_vertices", 8, 1);
  const int depth = m.integer("depth", 3, 0);
  const std::uint64_t seed = m.seed();
  RecordSink sink(m.options());
  std::size_t failures = 0;
  std::optional<std::size_t> firstFailure;
  orderedParallel(
      static_cast<std::size_t>(count), m.integer("jobs", 1, 1),
      [&](std::size_t i) {
        SampleRng rng(seed * 0x9E3779B97F4A7C15ull + i);
        int mm = std::uniform_int_distribution<int>(0, 4)(rng);
        int dd = std::uniform_int_distribution<int>(0, 4 - mm)(rng);
        SampledGadget s = samplePlanarGadget(rng, fs, mm, dd, maxVertices, depth);
        DecomposeCheck c = checkDecomposition(s.gadget, fs, cache);
        Json r{{"index", i},
               {"m", mm},
               {"d", dd},
               {"vertices", s.gadget.vertices.size()},
               {"steps", c.dec.steps.size()},
               {"replay_ok", c.replayOk},
               {"audit_ok", c.auditOk}};
        if (!c.replayOk || !c.auditOk) r["gadget"] = toJson(s.gadget);
        return r;
      },
      [&](Json&& r) {
        if (!r["replay_ok"].get<bool>() || !r["audit_ok"].get<bool>()) {
          ++failures;
          if (!firstFailure) firstFailure = r["index"].get<std::size_t>();
        }
        sink(std::move(r));
      });
  res.report["count"] = count;
  res.report["seed"] = seed;
  res.report["max_vertices"] = maxVertices;
  res.report["failures"] = failures;
  if (firstFailure) res.report["first_failure"] = *firstFailure;
  sink.attach(res.report);
  res.status = failures == 0 ? kStatusOk : kStatusRefuted;
  res.summary.push_back(std::to_string(count) + " sampled gadgets, " + std::to_string(failures) +
                        " replay or audit failures");
  return res;
}

Json qpmReportJson(const QPMReport& r) {
  return Json{{"ok", r.ok},
              {"projector", r.projector},
              {"row_sum", r.rowSum},
              {"col_sum", r.colSum},
              {"orthogonality", r.orthogonality},
              {"unitarity", r.unitarity},
              {"max_violation", r.maxViolation},
              {"failures", r.failures}};
}

Json loadQpmDoc(const Manifest& m) {
  Json j = m.doc("qpm");
  if (j.is_object() && j.contains("qpm")) return j.at("qpm");
  return j;
}

template <class T>
CommandResult verifyQiso(const QPM<T>& u, const Manifest& m, double eps) {
  CommandResult res;
  constexpr bool exact = ScalarTraits<T>::exact;
  QPMReport rep = validateQPM(u, eps);
  res.report["mode"] = exact ? "exact" : "float";
  if (!exact) res.report["epsilon"] = eps;
  res.report["q"] = u.q;
  res.report["dim"] = u.dim;
  res.report["qpm"] = qpmReportJson(rep);
  res.report["note"] = kFiniteDimensionNote;
  res.summary.push_back("QPM q=" + std::to_string(u.q) + " dim=" + std::to_string(u.dim) + " (" +
                        (exact ? "exact" : "float") + "): " + (rep.ok ? "valid" : "INVALID"));
  for (const auto& f : rep.failures) res.summary.push_back("  " + f);
  bool ok = rep.ok;
  if (m.flag("self") || !m.has("functions")) {
    Json fix = Json::array();
    for (int k = 1; k <= 4; ++k) {
      bool zero = false;
      double r = equalityFixationResidual(u, k, &zero);
      bool pass = exact ? zero : r <= eps;
      ok = ok && pass;
      fix.push_back(Json{{"k", k}, {"residual", r}, {"pass", pass}});
      res.summary.push_back("equality fixation k=" + std::to_string(k) + ": " + (pass ? "pass" : "FAIL"));
    }
    res.report["equality_fixation"] = std::move(fix);
  } else {
    SignatureSet f = m.functions("functions");
    SignatureSet g = m.has("g_functions") ? m.functions("g_functions") : f;
    auto map = resolveMap(m, f, g);
    checkCompatible(f, g, map);
    if (f.q() != u.q) throw CompatibilityError("QPM size differs from the domain size");
    Json pairs = Json::array();
    for (const auto& [fn, gn] : map) {
      IsoCheck c = checkQuantumIso(u, *f.get(fn), *g.get(gn), eps);
      Json splits = Json::array();
      for (const auto& s : c.splits) {
        splits.push_back(Json{{"m", s.m}, {"d", s.d}, {"pass", s.pass}, {"residual", s.residual}});
      }
      pairs.push_back(Json{{"f", fn},
                           {"g", gn},
                           {"pass", c.pass},
                           {"residual", c.residual},
                           {"splits_agree", c.splitsAgree},
                           {"splits", std::move(splits)}});
      ok = ok && c.pass && c.splitsAgree;
      res.summary.push_back(fn + " -> " + gn + ": " + (c.pass ? "intertwined" : "NOT intertwined") +
                            (c.splitsAgree ? "" : " (splits disagree)"));
    }
    res.report["pairs"] = std::move(pairs);
  }
  res.summary.push_back(std::string("note: ") + kFiniteDimensionNote);
  res.status = ok ? kStatusOk : kStatusRefuted;
  return res;
}

CommandResult cmdVerifyQiso(const Manifest& m) {
  AnyQPM u = qpmFromJson(loadQpmDoc(m), "qpm");
  double eps = m.real("epsilon", kDefaultEpsilon);
  return std::visit([&](const auto& x) { return verifyQiso(x, m, eps); }, u);
}

Gadget closedGrid(const Manifest& m, const SignatureSet& f) {
  if (m.has("gadget")) return gadgetFromJson(m.doc("gadget"), f, "gadget");
  if (!m.has("instance")) throw ParseError("need a closed 'gadget' or an 'instance'");
  CSPInstance k = instanceFromJson(m.doc("instance"), f, "instance");
  k.labels.clear();
  PlanarityResult p = isPlanarInstance(k, f);
  if (!p.planar) throw ParseError("instance: grid is not planar");
  return *p.grid;
}

template <class T>
CommandResult quantumHolant(const QPM<T>& u, const Manifest& m, double eps) {
  CommandResult res;
  constexpr bool exact = ScalarTraits<T>::exact;
  SignatureSet f = m.functions("functions");
  SignatureSet g = m.has("g_functions") ? m.functions("g_functions") : f;
  auto map = resolveMap(m, f, g);
  Gadget grid = closedGrid(m, f);
  res.report["mode"] = exact ? "exact" : "float";
  if (!exact) res.report["epsilon"] = eps;
  res.report["note"] = kFiniteDimensionNote;
  try {
    QuantumHolantResult r = quantumHolantEvaluate(grid, u, f, g, map, eps);
    double maxLeaf = 0;
    for (double x : r.leafResiduals) maxLeaf = std::max(maxLeaf, x);
    bool ok = r.equal && (exact ? r.operatorExact : r.operatorResidual <= eps * std::max(1, r.factors));
    res.report["holant_f"] = scalarReport(r.scalarF);
    res.report["holant_g"] = scalarReport(r.scalarG);
    res.report["holant_g_direct"] = scalarReport(r.scalarGDirect);
    res.report["equal"] = r.equal;
    res.report["factors"] = r.factors;
    res.report["operator_residual"] = r.operatorResidual;
    res.report["operator_exact"] = r.operatorExact;
    res.report["max_leaf_residual"] = maxLeaf;
    res.status = ok ? kStatusOk : kStatusRefuted;
    res.summary.push_back("Holant(F) = " + text(r.scalarF) + ", Holant(G) = " + text(r.scalarG) +
                          (r.equal ? " (equal)" : " (DIFFERENT)"));
    res.summary.push_back(std::to_string(r.factors) + " factors, operator residual " +
                          (r.operatorExact ? std::string("exactly 0") : std::to_string(r.operatorResidual)));
  } catch (const WitnessError& e) {
    res.report["witness_error"] = e.what();
    res.status = kStatusRefuted;
    res.summary.push_back(std::string("witness rejected: ") + e.what());
  }
  res.summary.push_back(std::string("note: ") + kFiniteDimensionNote);
  return res;
}

CommandResult cmdQuantumHolant(const Manifest& m) {
  AnyQPM u = qpmFromJson(loadQpmDoc(m), "qpm");
  double eps = m.real("epsilon", kDefaultEpsilon);
  return std::visit([&](const auto& x) { return quantumHolant(x, m, eps); }, u);
}

std::string classList(const std::vector<int>& classOf, int classes) {
  std::vector<std::string> parts(classes);
  for (std::size_t x = 0; x < classOf.size(); ++x) {
    auto& p = parts[classOf[x]];
    p += (p.empty() ? "" : ",") + std::to_string(x);
  }
  std::string s;
  for (const auto& p : parts) s += (s.empty() ? "{" : " {") + p + "}";
  return s;
}

CommandResult cmdOrbits(const Manifest& m) {
  CommandResult res;
  SignatureSet fs = m.functions("functions");
  OrbitPartition op = orbitCoarsening(fs, m.integer("budget", 8, 1));
  res.report["classes"] = op.classes;
  res.report["class_of"] = op.classOf;
  res.report["basis_dimension"] = op.basis.dimension();
  res.report["semantics"] = OrbitPartition::semantics;
  Json seps = Json::array();
  bool sound = true;
  for (const auto& s : op.separations) {
    Json extra = Json::object();
    for (const auto& [name, f] : s.functions.all())
      if (!fs.has(name)) extra[name] = toJson(*f);
    seps.push_back(Json{{"x", s.x},
                        {"y", s.y},
                        {"z_x", scalarReport(s.zx)},
                        {"z_y", scalarReport(s.zy)},
                        {"planar", s.planar},
                        {"instance", toJson(s.instance)},
                        {"extra_functions", std::move(extra)}});
    sound = sound && s.planar && s.zx != s.zy;
  }
  res.report["separations"] = std::move(seps);
  res.status = sound ? kStatusOk : kStatusRefuted;
  res.summary.push_back(std::to_string(op.classes) + " classes: " + classList(op.classOf, op.classes));
  res.summary.push_back(std::to_string(op.separations.size()) + " separating instances (" + OrbitPartition::semantics +
                        ")");
  return res;
}

CommandResult cmdIntertwiners(const Manifest& m) {
  CommandResult res;
  SignatureSet fs = m.functions("functions");
  IntertwinerOptions o;
  o.budget = m.integer("budget", o.budget, 1);
  o.maxDangling = m.has("max_dangling") ? m.integer("max_dangling", -1, 0) : -1;
  const int mm = m.integer("m", 1), dd = m.integer("d", 0);
  IntertwinerBasis b = generateIntertwiners(fs, mm, dd, o);
  Json members = Json::array();
  for (const auto& x : b.members) {
    members.push_back(Json{{"size", x.size}, {"expr", exprToString(x.expr)}, {"matrix", toJson(x.matrix)}});
  }
  res.report["m"] = mm;
  res.report["d"] = dd;
  res.report["budget"] = b.budget;
  res.report["max_dangling"] = b.maxDangling;
  res.report["dimension"] = b.dimension();
  res.report["members"] = std::move(members);
  res.summary.push_back("span dimension " + std::to_string(b.dimension()) + " at (" + std::to_string(mm) + "," +
                        std::to_string(dd) + "), budget " + std::to_string(b.budget));
  for (const auto& x : b.members) res.summary.push_back("  " + exprToString(x.expr));
  return res;
}

CommandResult cmdCoherent(const Manifest& m) {
  CommandResult res;
  SignatureSet fs = m.functions("functions");
  std::string fn = binaryName(m, "fn", fs);
  PairColoring c = coherentClosure(*fs.get(fn));
  SignatureSet one(fs.q());
  one.add(fn, *fs.get(fn));
  PairColoring orb = classicalOrbitals(one);
  // every classical orbital lies inside one coherent class
  std::map<int, int> colorOfOrbital;
  bool coarser = true;
  for (std::size_t i = 0; i < orb.color.size(); ++i) {
    auto [it, fresh] = colorOfOrbital.emplace(orb.color[i], c.color[i]);
    if (!fresh && it->second != c.color[i]) coarser = false;
  }
  Json rows = Json::array();
  for (int u = 0; u < c.q; ++u) {
    Json row = Json::array();
    for (int v = 0; v < c.q; ++v) row.push_back(c.at(u, v));
    rows.push_back(std::move(row));
  }
  res.report["fn"] = fn;
  res.report["classes"] = c.classCount;
  res.report["rounds"] = c.rounds;
  res.report["coloring"] = std::move(rows);
  res.report["classical_orbitals"] = orb.classCount;
  res.report["coarser_than_orbitals"] = coarser;
  res.status = coarser ? kStatusOk : kStatusRefuted;
  res.summary.push_back(fn + ": " + std::to_string(c.classCount) + " coherent classes after " +
                        std::to_string(c.rounds) + " rounds; " + std::to_string(orb.classCount) +
                        " classical orbitals");
  return res;
}

CommandResult cmdAugment(const Manifest& m) {
  CommandResult res;
  SignatureSet fs = m.functions("functions");
  std::string mode = m.str("mode", "gamma");
  res.report["mode"] = mode;
  if (mode == "ones") {
    AllOnesAugmentation a = allOnesAugment(fs);
    res.report["name"] = a.name;
    res.report["witness"] = exprToString(a.witness);
    res.report["functions"] = toJson(a.functions);
    res.summary.push_back("added all-ones function '" + a.name + "' = " + exprToString(a.witness));
    return res;
  }
  if (mode != "gamma") throw ParseError("augment: mode must be \"gamma\" or \"ones\"");
  std::optional<SignatureSet> g;
  std::map<std::string, std::string> map;
  if (m.has("g_functions")) {
    g = m.functions("g_functions");
    map = resolveMap(m, fs, *g);
  }
  GammaAugmentation a = gammaAugment(fs, g ? &*g : nullptr, g ? &map : nullptr);
  bool ok = true;
  auto connectivity = [&](const SignatureSet& s) {
    Json c = Json::object();
    for (const auto& [name, f] : s.all()) {
      if (f->arity() < 2) continue;
      bool conn = isProjectivelyConnected(*f);
      c[name] = conn;
      ok = ok && conn;
      if (!conn) res.summary.push_back("'" + name + "' is NOT projectively connected");
    }
    return c;
  };
  res.report["gamma"] = scalarReport(a.gamma);
  res.report["zero"] = a.zero;
  res.report["functions"] = toJson(a.f);
  res.report["connected"] = connectivity(a.f);
  if (a.g) {
    res.report["g_functions"] = toJson(*a.g);
    res.report["g_connected"] = connectivity(*a.g);
  }
  res.status = ok ? kStatusOk : kStatusRefuted;
  res.summary.insert(res.summary.begin(), "gamma = " + text(a.gamma) + ", new element " + std::to_string(a.zero) +
                                              (ok ? "; all functions of arity >= 2 projectively connected" : ""));
  return res;
}

CommandResult cmdCompare(const Manifest& m) {
  CommandResult res;
  SignatureSet f = m.functions("functions");
  SignatureSet g = m.functions("g_functions");
  auto map = resolveMap(m, f, g);
  CorpusParams p;
  p.count = m.integer("count", p.count, 1);
  p.maxVariables = m.integer("max_vertices", p.maxVariables, 1);
  p.maxConstraints = m.integer("max_constraints", p.maxConstraints, 1);
  p.seed = m.seed();
  RecordSink sink(m.options());
  CompareReport rep = planarEquivalenceTest(f, g, map, p, m.integer("jobs", 1, 1), [&](const CompareRecord& r) {
    sink(Json{{"index", r.index},
              {"equal", r.equal},
              {"z_f", scalarReport(r.zF)},
              {"z_g", scalarReport(r.zG)},
              {"instance", toJson(r.instance)}});
  });
  res.report["count"] = rep.records.size();
  res.report["params"] = Json{{"max_variables", p.maxVariables},
                              {"max_constraints", p.maxConstraints},
                              {"count", p.count},
                              {"seed", p.seed}};
  res.report["domain_sizes_differ"] = rep.domainSizesDiffer;
  res.report["refuted"] = rep.firstRefutation.has_value();
  if (rep.firstRefutation) {
    const auto& r = rep.records[*rep.firstRefutation];
    res.report["first_refutation"] = Json{{"index", r.index},
                                          {"z_f", scalarReport(r.zF)},
                                          {"z_g", scalarReport(r.zG)},
                                          {"instance", toJson(r.instance)}};
    res.status = kStatusRefuted;
    res.summary.push_back("refuted at instance " + std::to_string(r.index) + ": Z_F = " + text(r.zF) +
                          ", Z_G = " + text(r.zG));
    res.summary.push_back("  " + toJson(r.instance).dump());
  } else {
    res.summary.push_back(std::to_string(rep.records.size()) + " planar instances, all partition functions equal");
  }
  if (rep.domainSizesDiffer) res.summary.push_back("note: domain sizes differ");
  sink.attach(res.report);
  return res;
}

CommandResult cmdGenMagicUnitary(const Manifest& m) {
  CommandResult res;
  ExactQPM u = m.has("permutation") ? liftPermutation(m.ints("permutation")) : blockMagicUnitary();
  QPMReport rep = validateQPM(u);
  // first non-commuting pair of entries, if any
  Json nc = nullptr;
  for (int a = 0; a < u.q * u.q && nc.is_null(); ++a)
    for (int b = a + 1; b < u.q * u.q; ++b) {
      const auto& x = u.u[a];
      const auto& y = u.u[b];
      if (!(x * y == y * x)) {
        nc = Json{{"a", Json::array({a / u.q, a % u.q})}, {"b", Json::array({b / u.q, b % u.q})}};
        break;
      }
    }
  res.report["qpm"] = toJson(u);
  res.report["valid"] = rep.ok;
  res.report["noncommuting_pair"] = nc;
  res.status = rep.ok ? kStatusOk : kStatusRefuted;
  res.summary.push_back("QPM q=" + std::to_string(u.q) + " dim=" + std::to_string(u.dim) + ": " +
                        (rep.ok ? "valid" : "INVALID") +
                        (nc.is_null() ? ", entries commute" : ", entries " + nc["a"].dump() + " and " +
                                                                   nc["b"].dump() + " do not commute"));
  return res;
}

CommandResult cmdReferee(const Manifest& m) {
  CommandResult res;
  SignatureSet fs = m.functions("functions");
  SignatureSet gs = m.has("g_functions") ? m.functions("g_functions") : fs;
  GameInstance game = makeGame(*fs.get(binaryName(m, "fn", fs)), *gs.get(binaryName(m, "g_fn", gs)));
  res.report["size"] = game.size();
  auto range = [&](const std::vector<int>& v, const char* what) {
    for (int x : v)
      if (x < 0 || x >= game.size()) throw ParseError(std::string(what) + ": element out of range");
  };
  if (m.has("inputs")) {
    auto in = m.ints("inputs");
    if (in.size() != 4) throw ParseError("inputs: expected [xA, yA, xB, yB]");
    range(in, "inputs");
    bool win = gameReferee(game, in[0], in[1], in[2], in[3]);
    res.report["mode"] = "predicate";
    res.report["accepted"] = win;
    res.status = win ? kStatusOk : kStatusRefuted;
    res.summary.push_back(std::string("referee ") + (win ? "accepts" : "rejects"));
    return res;
  }
  std::vector<int> alice, bob;
  if (m.has("strategy")) {
    const Json& s = m.raw("strategy");
    auto list = [&](const char* k) {
      if (!s.is_object() || !s.contains(k) || !s.at(k).is_array()) {
        throw ParseError(std::string("strategy: missing array '") + k + "'");
      }
      std::vector<int> v;
      for (const auto& x : s.at(k)) {
        if (!x.is_number_integer()) throw ParseError("strategy: answers must be integers");
        v.push_back(x.get<int>());
      }
      if (static_cast<int>(v.size()) != game.size()) throw ParseError("strategy: one answer per element");
      range(v, "strategy");
      return v;
    };
    alice = list("alice");
    bob = list("bob");
    res.report["mode"] = "strategy";
  } else if (m.has("bijection")) {
    auto sigma = m.ints("bijection");
    if (static_cast<int>(sigma.size()) != game.f.q()) throw ParseError("bijection: one image per element of V(F)");
    alice = bob = bijectionStrategy(game, sigma);
    res.report["mode"] = "bijection";
  } else {
    res.report["mode"] = "search";
    auto found = findPerfectStrategy(game);
    res.report["found"] = found.has_value();
    if (found) res.report["strategy"] = *found;
    res.status = found ? kStatusOk : kStatusRefuted;
    res.summary.push_back(found ? "perfect deterministic strategy found" : "no perfect deterministic strategy");
    return res;
  }
  StrategyVerdict v = checkStrategy(game, alice, bob);
  res.report["perfect"] = v.perfect;
  if (!v.perfect) res.report["losing_inputs"] = Json::array({v.xA, v.xB});
  res.status = v.perfect ? kStatusOk : kStatusRefuted;
  res.summary.push_back(v.perfect ? "strategy is perfect"
                                  : "strategy loses on inputs " + std::to_string(v.xA) + ", " + std::to_string(v.xB));
  return res;
}

using Handler = CommandResult (*)(const Manifest&);

const std::vector<std::pair<std::string, Handler>>& handlers() {
  static const std::vector<std::pair<std::string, Handler>> h = {
      {"eval", cmdEval},
      {"decompose", cmdDecompose},
      {"verify-qiso", cmdVerifyQiso},
      {"quantum-holant", cmdQuantumHolant},
      {"orbits", cmdOrbits},
      {"intertwiners", cmdIntertwiners},
      {"coherent", cmdCoherent},
      {"augment", cmdAugment},
      {"compare", cmdCompare},
      {"gen-magic-unitary", cmdGenMagicUnitary},
      {"referee", cmdReferee},
  };
  return h;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

Matrix matrixFromJson(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw ParseError("cache: bad matrix");
  Matrix a(j.size(), j[0].size());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    if (j[r].size() != a.cols()) throw ParseError("cache: ragged matrix");
    for (std::size_t c = 0; c < a.cols(); ++c) a(r, c) = scalarFromJson(j[r][c]);
  }
  return a;
}

}  // namespace

const std::vector<std::string>& commandNames() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, h] : handlers()) n.push_back(name);
    return n;
  }();
  return names;
}

CommandResult runCommand(const std::string& command, const Json& manifest, const RunOptions& opt) {
  for (const auto& [name, h] : handlers()) {
    if (name != command) continue;
    Manifest m(manifest, opt);
    CommandResult r = h(m);
    Json report{{"command", command}, {"status", r.status == kStatusOk ? "ok" : "refuted"}};
    for (auto it = r.report.begin(); it != r.report.end(); ++it) report[it.key()] = std::move(it.value());
    r.report = std::move(report);
    return r;
  }
  throw ParseError("unknown command '" + command + "'");
}

std::string gadgetCacheKey(const Gadget& g) {
  std::string key = toJson(g).dump();
  for (const auto& f : g.functions) key += "|" + f.name + "=" + toJson(*f.f).dump();
  return key;
}

Matrix cachedSignatureMatrix(const Gadget& g, const std::filesystem::path& dir) {
  if (dir.empty()) return signatureMatrix(g);
  const std::string key = gadgetCacheKey(g);
  char name[40];
  std::snprintf(name, sizeof name, "sig-%016llx.json", static_cast<unsigned long long>(fnv1a(key)));
  const auto path = dir / name;
  std::error_code ec;
  if (std::filesystem::exists(path, ec)) {
    try {
      Json j = loadJsonFile(path);
      if (j.at("key").get<std::string>() == key) {
        Matrix a = matrixFromJson(j.at("matrix"));
        a.q = g.q;
        a.m = g.m;
        a.d = g.d;
        return a;
      }
    } catch (const std::exception&) {
      // unreadable entry: recompute and overwrite
    }
  }
  Matrix a = signatureMatrix(g);
  std::filesystem::create_directories(dir, ec);
  if (!ec) {
    // write-then-rename so concurrent readers never see partial files
    auto tmp = path;
    tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
    {
      std::ofstream out(tmp, std::ios::binary);
      out << Json{{"key", key}, {"matrix", toJson(a)}}.dump();
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) std::filesystem::remove(tmp, ec);
  }
  return a;
}

}  // namespace holant
