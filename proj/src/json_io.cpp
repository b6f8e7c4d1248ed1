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

#include "holant/json_io.hpp"

#include <fstream>
#include <sstream>

#include "holant/errors.hpp"

namespace holant {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& msg) {
  throw ParseError(where.empty() ? msg : where + ": " + msg);
}

std::string at(const std::string& where, const std::string& key) { return where + "/" + key; }
std::string at(const std::string& where, std::size_t i) { return where + "/" + std::to_string(i); }

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(where, std::string("missing field '") + key + "'");
  return *it;
}

const Json* optField(const Json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

int asInt(const Json& j, const std::string& where, int lo = 0) {
  if (!j.is_number_integer()) bad(where, "expected an integer");
  auto v = j.get<std::int64_t>();
  if (v < lo || v > (1 << 30)) bad(where, "integer out of range");
  return static_cast<int>(v);
}

bool asBool(const Json& j, const std::string& where) {
  if (!j.is_boolean()) bad(where, "expected a boolean");
  return j.get<bool>();
}

const std::string& asString(const Json& j, const std::string& where) {
  if (!j.is_string()) bad(where, "expected a string");
  return j.get_ref<const std::string&>();
}

const Json& asArray(const Json& j, const std::string& where) {
  if (!j.is_array()) bad(where, "expected an array");
  return j;
}

Json part(const mpz_class& z) {
  if (z.fits_slong_p()) return Json(static_cast<std::int64_t>(z.get_si()));
  return Json(z.get_str());
}

mpz_class partFromJson(const Json& j, const std::string& where) {
  if (j.is_number_unsigned()) return mpz_class(std::to_string(j.get<std::uint64_t>()));
  if (j.is_number_integer()) return mpz_class(std::to_string(j.get<std::int64_t>()));
  if (j.is_string()) {
    mpz_class z;
    if (z.set_str(j.get<std::string>(), 10) != 0) bad(where, "not a decimal integer");
    return z;
  }
  bad(where, "expected an integer or a decimal string");
}

mpq_class ratio(const mpz_class& num, const mpz_class& den, const std::string& where) {
  if (den == 0) bad(where, "zero denominator");
  mpq_class r(num, den);
  r.canonicalize();
  return r;
}

bool isFloatScalar(const Json& j) { return j.is_number_float() || j.is_object(); }

std::complex<double> floatScalar(const Json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_object()) {
    const Json& re = field(j, "re", where);
    const Json* im = optField(j, "im");
    if (!re.is_number() || (im && !im->is_number())) bad(where, "re/im must be numbers");
    return {re.get<double>(), im ? im->get<double>() : 0.0};
  }
  return scalarFromJson(j, where).toComplex();
}

Json toJson(const std::complex<double>& x) { return Json{{"re", x.real()}, {"im", x.imag()}}; }

template <class T>
Json opToJson(const Op<T>& op) {
  Json rows = Json::array();
  for (int r = 0; r < op.dim(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < op.dim(); ++c) row.push_back(toJson(op(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <class T>
Json qpmToJson(const QPM<T>& u) {
  Json rows = Json::array();
  for (int i = 0; i < u.q; ++i) {
    Json row = Json::array();
    for (int j = 0; j < u.q; ++j) row.push_back(opToJson(u.at(i, j)));
    rows.push_back(std::move(row));
  }
  return Json{{"q", u.q}, {"dim", u.dim}, {"entries", std::move(rows)}};
}

}  // namespace

Json parseJson(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(source + ": " + e.what());
  }
}

Json loadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parseJson(ss.str(), path.string());
}

Json toJson(const GQ& x) {
  return Json::array({part(x.re().get_num()), part(x.re().get_den()), part(x.im().get_num()),
                      part(x.im().get_den())});
}

GQ scalarFromJson(const Json& j, const std::string& where) {
  if (j.is_number_float()) bad(where, "floating-point entries are not supported; use [num, den, num_i, den_i]");
  if (j.is_number_integer()) return GQ(mpq_class(partFromJson(j, where)));
  if (j.is_string()) {
    try {
      return GQ::parseRational(j.get<std::string>());
    } catch (const std::exception&) {
      bad(where, "bad rational '" + j.get<std::string>() + "'");
    }
  }
  if (j.is_array() && (j.size() == 2 || j.size() == 4)) {
    mpq_class re = ratio(partFromJson(j[0], at(where, 0)), partFromJson(j[1], at(where, 1)), where);
    mpq_class im = 0;
    if (j.size() == 4) im = ratio(partFromJson(j[2], at(where, 2)), partFromJson(j[3], at(where, 3)), where);
    return GQ(re, im);
  }
  bad(where, "expected a scalar: integer, \"a/b\", [num, den] or [num, den, num_i, den_i]");
}

Json toJson(const ConstraintFunction& f) {
  Json e = Json::array();
  for (const auto& x : f.entries()) e.push_back(toJson(x));
  return Json{{"q", f.q()}, {"arity", f.arity()}, {"entries", std::move(e)}};
}

ConstraintFunction functionFromJson(const Json& j, const std::string& where) {
  int q = asInt(field(j, "q", where), at(where, "q"), 1);
  int n = asInt(field(j, "arity", where), at(where, "arity"), 0);
  const Json& e = asArray(field(j, "entries", where), at(where, "entries"));
  ConstraintFunction f(q, n);
  if (e.size() != f.size()) {
    bad(at(where, "entries"), "expected " + std::to_string(f.size()) + " entries, got " + std::to_string(e.size()));
  }
  for (std::size_t i = 0; i < e.size(); ++i) f[i] = scalarFromJson(e[i], at(at(where, "entries"), i));
  return f;
}

Json toJson(const SignatureSet& fs) {
  Json fns = Json::object();
  for (const auto& [name, f] : fs.all()) fns[name] = toJson(*f);
  return Json{{"q", fs.q()}, {"functions", std::move(fns)}};
}

SignatureSet signatureSetFromJson(const Json& j, const std::string& where) {
  const Json& fns = field(j, "functions", where);
  if (!fns.is_object()) bad(at(where, "functions"), "expected an object keyed by function name");
  int q = 0;
  if (const Json* qj = optField(j, "q")) q = asInt(*qj, at(where, "q"), 1);
  std::vector<std::pair<std::string, ConstraintFunction>> parsed;
  for (auto it = fns.begin(); it != fns.end(); ++it) {
    std::string w = at(at(where, "functions"), it.key());
    if (it.key().empty()) bad(w, "empty function name");
    parsed.emplace_back(it.key(), functionFromJson(it.value(), w));
    if (q == 0) q = parsed.back().second.q();
    if (parsed.back().second.q() != q) bad(w, "domain size differs from the set's q = " + std::to_string(q));
  }
  if (q == 0) bad(where, "empty signature set needs an explicit q");
  SignatureSet fs(q);
  for (auto& [name, f] : parsed) fs.add(name, std::move(f));
  return fs;
}

Json toJson(const CSPInstance& k) {
  Json vars = Json::array();
  for (int v = 0; v < k.numVariables; ++v) vars.push_back(k.variableName(v));
  Json cons = Json::array();
  for (const auto& c : k.constraints) {
    Json args = Json::array();
    for (int a : c.args) args.push_back(k.variableName(a));
    cons.push_back(Json{{"fn", c.fn}, {"args", std::move(args)}});
  }
  Json labels = Json::array();
  for (int l : k.labels) labels.push_back(k.variableName(l));
  return Json{{"variables", std::move(vars)}, {"constraints", std::move(cons)}, {"labels", std::move(labels)}};
}

CSPInstance instanceFromJson(const Json& j, const SignatureSet& fs, const std::string& where) {
  CSPInstance k;
  std::map<std::string, int> byName;
  const Json& vars = field(j, "variables", where);
  if (vars.is_number_integer()) {
    k.numVariables = asInt(vars, at(where, "variables"));
  } else {
    asArray(vars, at(where, "variables"));
    for (std::size_t i = 0; i < vars.size(); ++i) {
      std::string w = at(at(where, "variables"), i);
      std::string name = vars[i].is_number_integer() ? std::to_string(asInt(vars[i], w)) : asString(vars[i], w);
      if (!byName.emplace(name, static_cast<int>(i)).second) bad(w, "duplicate variable '" + name + "'");
      k.names.push_back(name);
    }
    k.numVariables = static_cast<int>(vars.size());
  }
  auto var = [&](const Json& a, const std::string& w) {
    if (a.is_string()) {
      auto it = byName.find(a.get<std::string>());
      if (it == byName.end()) bad(w, "unknown variable '" + a.get<std::string>() + "'");
      return it->second;
    }
    int v = asInt(a, w);
    if (v >= k.numVariables) bad(w, "variable index " + std::to_string(v) + " out of range");
    return v;
  };
  const Json& cons = asArray(field(j, "constraints", where), at(where, "constraints"));
  for (std::size_t i = 0; i < cons.size(); ++i) {
    std::string w = at(at(where, "constraints"), i);
    CspConstraint c;
    c.fn = asString(field(cons[i], "fn", w), at(w, "fn"));
    if (!fs.has(c.fn)) bad(at(w, "fn"), "unknown function '" + c.fn + "'");
    const Json& args = asArray(field(cons[i], "args", w), at(w, "args"));
    for (std::size_t a = 0; a < args.size(); ++a) c.args.push_back(var(args[a], at(at(w, "args"), a)));
    if (static_cast<int>(c.args.size()) != fs.get(c.fn)->arity()) {
      throw ArityError(w + ": '" + c.fn + "' has arity " + std::to_string(fs.get(c.fn)->arity()) + ", got " +
                       std::to_string(c.args.size()) + " arguments");
    }
    k.constraints.push_back(std::move(c));
  }
  if (const Json* labels = optField(j, "labels")) {
    asArray(*labels, at(where, "labels"));
    for (std::size_t i = 0; i < labels->size(); ++i) k.labels.push_back(var((*labels)[i], at(at(where, "labels"), i)));
  }
  checkInstance(k, fs);
  return k;
}

Json toJson(const Gadget& g) {
  Json vertices = Json::array();
  for (const auto& v : g.vertices) {
    if (v.removed) throw InternalError("serializing a gadget with pending removals");
    Json jv;
    if (v.kind == VertexKind::Equality) {
      jv["kind"] = "equality";
    } else {
      jv["kind"] = "constraint";
      jv["fn"] = g.functions.at(v.fn).name;
      jv["orientation"] = v.cw ? "cw" : "ccw";
      jv["conj"] = v.conj;
    }
    jv["rotation"] = v.rot;
    vertices.push_back(std::move(jv));
  }
  Json pairings = Json::array();
  for (std::size_t h = 0; h < g.halfEdges.size(); ++h) {
    int t = g.halfEdges[h].twin;
    if (t > static_cast<int>(h)) pairings.push_back(Json::array({static_cast<int>(h), t}));
  }
  return Json{{"q", g.q},           {"m", g.m},
              {"d", g.d},           {"free_loops", g.freeLoops},
              {"vertices", vertices}, {"pairings", pairings},
              {"dangling", g.dangling}};
}

Gadget gadgetFromJson(const Json& j, const SignatureSet& fs, const std::string& where) {
  Gadget g;
  g.q = fs.q();
  if (const Json* qj = optField(j, "q")) {
    if (asInt(*qj, at(where, "q"), 1) != fs.q()) bad(at(where, "q"), "differs from the signature set's q");
  }
  g.m = asInt(field(j, "m", where), at(where, "m"));
  g.d = asInt(field(j, "d", where), at(where, "d"));
  if (const Json* fl = optField(j, "free_loops")) g.freeLoops = asInt(*fl, at(where, "free_loops"));

  const Json& vs = asArray(field(j, "vertices", where), at(where, "vertices"));
  std::vector<int> owner;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    std::string w = at(at(where, "vertices"), i);
    Vertex v;
    const std::string& kind = asString(field(vs[i], "kind", w), at(w, "kind"));
    const Json& rot = asArray(field(vs[i], "rotation", w), at(w, "rotation"));
    for (std::size_t r = 0; r < rot.size(); ++r) {
      int h = asInt(rot[r], at(at(w, "rotation"), r));
      if (h >= static_cast<int>(owner.size())) owner.resize(h + 1, -1);
      if (owner[h] >= 0) bad(at(w, "rotation"), "half-edge " + std::to_string(h) + " listed twice");
      owner[h] = static_cast<int>(i);
      v.rot.push_back(h);
    }
    if (kind == "equality") {
      if (const Json* ar = optField(vs[i], "arity")) {
        if (asInt(*ar, at(w, "arity")) != static_cast<int>(rot.size())) bad(w, "arity differs from rotation length");
      }
    } else if (kind == "constraint") {
      v.kind = VertexKind::Constraint;
      const std::string& fn = asString(field(vs[i], "fn", w), at(w, "fn"));
      if (!fs.has(fn)) bad(at(w, "fn"), "unknown function '" + fn + "'");
      v.fn = g.functionIndex(fn, fs.get(fn));
      if (const Json* o = optField(vs[i], "orientation")) {
        const std::string& s = asString(*o, at(w, "orientation"));
        if (s != "ccw" && s != "cw") bad(at(w, "orientation"), "expected \"ccw\" or \"cw\"");
        v.cw = s == "cw";
      }
      if (const Json* c = optField(vs[i], "conj")) v.conj = asBool(*c, at(w, "conj"));
    } else {
      bad(at(w, "kind"), "expected \"equality\" or \"constraint\"");
    }
    g.vertices.push_back(std::move(v));
  }
  for (std::size_t h = 0; h < owner.size(); ++h) {
    if (owner[h] < 0) bad(at(where, "vertices"), "half-edge " + std::to_string(h) + " belongs to no vertex");
    g.halfEdges.push_back({owner[h], -1});
  }
  const int nh = static_cast<int>(owner.size());
  const Json& ps = asArray(field(j, "pairings", where), at(where, "pairings"));
  for (std::size_t i = 0; i < ps.size(); ++i) {
    std::string w = at(at(where, "pairings"), i);
    if (!ps[i].is_array() || ps[i].size() != 2) bad(w, "expected a pair of half-edge ids");
    int a = asInt(ps[i][0], w), b = asInt(ps[i][1], w);
    if (a >= nh || b >= nh || a == b) bad(w, "bad half-edge pair");
    if (g.halfEdges[a].twin >= 0 || g.halfEdges[b].twin >= 0) bad(w, "half-edge paired twice");
    g.link(a, b);
  }
  const Json& dg = asArray(field(j, "dangling", where), at(where, "dangling"));
  for (std::size_t i = 0; i < dg.size(); ++i) {
    int h = asInt(dg[i], at(at(where, "dangling"), i));
    if (h >= nh) bad(at(at(where, "dangling"), i), "unknown half-edge");
    g.dangling.push_back(h);
  }
  if (static_cast<int>(g.dangling.size()) != g.m + g.d) bad(where, "dangling list length differs from m + d");
  auto rep = validate(g);
  if (!rep.ok) throw MalformedGadget(where + ": " + rep.errors.front());
  return g;
}

Json toJson(const Matrix& a) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < a.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < a.cols(); ++c) row.push_back(toJson(a(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json toJson(const LeafSpec& l) {
  Json j;
  j["kind"] = l.kind == LeafSpec::Empty ? "empty" : l.kind == LeafSpec::E ? "E" : "F";
  j["m"] = l.m;
  j["d"] = l.d;
  if (l.kind == LeafSpec::F) {
    j["fn"] = l.fn;
    j["rot"] = l.rot;
    j["conj"] = l.conj;
    j["dagger"] = l.dagger;
  }
  return j;
}

Json toJson(const Decomposition& dec) {
  Json steps = Json::array();
  for (const auto& s : dec.steps) {
    Json js{{"rule", ruleName(s.rule)},
            {"vertex", s.vertex},
            {"input", Json::array({s.inM, s.inD})},
            {"extracted", toJson(s.extracted)},
            {"r", s.r},
            {"t", s.t},
            {"m", s.m},
            {"d", s.d},
            {"pocket", s.pocket},
            {"residual_vertices", s.residual.vertices.size()}};
    if (!s.note.empty()) js["note"] = s.note;
    steps.push_back(std::move(js));
  }
  return Json{{"steps", std::move(steps)},
              {"final", toJson(dec.final)},
              {"expr", exprToString(dec.expr)},
              {"leaves", exprLeafCount(dec.expr)}};
}

Json toJson(const ExactQPM& u) { return qpmToJson(u); }
Json toJson(const FloatQPM& u) { return qpmToJson(u); }

AnyQPM qpmFromJson(const Json& j, const std::string& where) {
  int q = asInt(field(j, "q", where), at(where, "q"), 1);
  int dim = asInt(field(j, "dim", where), at(where, "dim"), 1);
  const Json& e = asArray(field(j, "entries", where), at(where, "entries"));
  std::vector<std::pair<const Json*, std::string>> ops;
  if (q > 1 && e.size() == static_cast<std::size_t>(q) * q) {
    for (std::size_t i = 0; i < e.size(); ++i) ops.emplace_back(&e[i], at(at(where, "entries"), i));
  } else if (e.size() == static_cast<std::size_t>(q)) {
    for (std::size_t i = 0; i < e.size(); ++i) {
      std::string w = at(at(where, "entries"), i);
      if (!e[i].is_array() || e[i].size() != static_cast<std::size_t>(q)) bad(w, "expected " + std::to_string(q) + " operators");
      for (std::size_t k = 0; k < e[i].size(); ++k) ops.emplace_back(&e[i][k], at(w, k));
    }
  } else {
    bad(at(where, "entries"), "expected q rows of q operators or q*q operators");
  }
  bool isFloat = false;
  for (const auto& [op, w] : ops) {
    if (!op->is_array() || op->size() != static_cast<std::size_t>(dim)) bad(w, "expected " + std::to_string(dim) + " rows");
    for (std::size_t r = 0; r < op->size(); ++r) {
      const Json& row = (*op)[r];
      if (!row.is_array() || row.size() != static_cast<std::size_t>(dim)) bad(at(w, r), "expected " + std::to_string(dim) + " entries");
      for (const auto& x : row) isFloat = isFloat || isFloatScalar(x);
    }
  }
  auto fill = [&](auto& u, auto conv) {
    u.q = q;
    u.dim = dim;
    for (const auto& [op, w] : ops) {
      using OpT = typename std::decay_t<decltype(u.u)>::value_type;
      OpT o(dim);
      for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) o(r, c) = conv((*op)[r][c], at(at(w, r), c));
      u.u.push_back(std::move(o));
    }
  };
  if (isFloat) {
    FloatQPM u;
    fill(u, floatScalar);
    return u;
  }
  ExactQPM u;
  fill(u, scalarFromJson);
  return u;
}

std::map<std::string, std::string> nameMapFromJson(const Json& j, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object mapping names");
  std::map<std::string, std::string> m;
  for (auto it = j.begin(); it != j.end(); ++it) m[it.key()] = asString(it.value(), at(where, it.key()));
  return m;
}

}  // namespace holant
