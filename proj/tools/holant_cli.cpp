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

// holant: batch front end over the C API. Flags become a JSON manifest;
// --manifest supplies a base manifest that flags override.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "holant/holant_c.h"

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct Flags {
  std::string manifest, functions, gFunctions, map, instance, gadget, qpm, mode, fn, gFn;
  std::string format = "summary";
  std::vector<std::string> mapPairs;
  std::vector<int> pin, inputs, bijection, permutation, alice, bob;
  int budget = 0, maxVertices = 0, jobs = 1, m = 0, d = 0, maxDangling = 0, count = 0, maxConstraints = 0, depth = 0;
  double epsilon = 0;
  std::uint64_t seed = 0;
  bool self = false;
};

void onRecord(const char* line, void*) {
  std::fwrite(line, 1, std::char_traits<char>::length(line), stdout);
  std::fputc('\n', stdout);
  std::fflush(stdout);
}

[[noreturn]] void die(const std::string& msg, int code) {
  std::cerr << "holant: " << msg << "\n";
  std::exit(code);
}

std::string absolute(const std::string& p) { return fs::absolute(p).lexically_normal().string(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planar Holant and #CSP gadget toolkit"};
  app.set_version_flag("--version", std::string(holant_version()));
  app.require_subcommand(1, 1);
  app.fallthrough();
  Flags f;

  app.add_option("--manifest", f.manifest, "JSON manifest; other flags override its keys")->check(CLI::ExistingFile);
  app.add_option("-F,--functions", f.functions, "signature set file (F)")->check(CLI::ExistingFile);
  app.add_option("-G,--g-functions", f.gFunctions, "second signature set file (G)")->check(CLI::ExistingFile);
  app.add_option("--map", f.map, "JSON file mapping F names to G names")->check(CLI::ExistingFile);
  app.add_option("--map-pair", f.mapPairs, "F=G name pair, repeatable");
  app.add_option("-i,--instance", f.instance, "#CSP instance file")->check(CLI::ExistingFile);
  app.add_option("-k,--gadget", f.gadget, "gadget file")->check(CLI::ExistingFile);
  app.add_option("-u,--qpm", f.qpm, "quantum permutation matrix file")->check(CLI::ExistingFile);
  app.add_option("--pin", f.pin, "label values, comma separated")->delimiter(',');
  app.add_option("--budget", f.budget, "vertex budget for generated gadgets");
  app.add_option("--epsilon", f.epsilon, "tolerance for floating-point witnesses");
  app.add_option("--max-vertices", f.maxVertices, "corpus size bound");
  app.add_option("--max-constraints", f.maxConstraints, "compare: constraints per instance");
  app.add_option("--count", f.count, "corpus size");
  app.add_option("--depth", f.depth, "decompose corpus: expression depth");
  app.add_option("--seed", f.seed, "corpus seed");
  app.add_option("--jobs", f.jobs, "worker threads for corpus commands")->check(CLI::PositiveNumber);
  app.add_option("--format", f.format, "json, jsonl or summary")->check(CLI::IsMember({"json", "jsonl", "summary"}));
  app.add_option("--m", f.m, "intertwiners: outputs");
  app.add_option("--d", f.d, "intertwiners: inputs");
  app.add_option("--max-dangling", f.maxDangling, "intertwiners: shape cap");
  app.add_option("--mode", f.mode, "augment: gamma or ones");
  app.add_option("--fn", f.fn, "binary function of F");
  app.add_option("--g-fn", f.gFn, "binary function of G");
  app.add_flag("--self", f.self, "verify-qiso: check the QPM alone");
  app.add_option("--inputs", f.inputs, "referee: xA,yA,xB,yB")->delimiter(',');
  app.add_option("--bijection", f.bijection, "referee: V(F) -> V(G) images")->delimiter(',');
  app.add_option("--alice", f.alice, "referee: Alice's answers")->delimiter(',');
  app.add_option("--bob", f.bob, "referee: Bob's answers")->delimiter(',');
  app.add_option("--permutation", f.permutation, "gen-magic-unitary: lift this permutation")->delimiter(',');

  const std::map<std::string, std::string> about = {
      {"eval", "Z of an instance (optionally pinned) or the signature matrix of a gadget"},
      {"decompose", "decompose a gadget into generators, or replay a random corpus"},
      {"verify-qiso", "check a QPM witness against mapped function pairs"},
      {"quantum-holant", "transport a closed planar grid through a QPM witness"},
      {"orbits", "quantum orbit coarsening with separating instances"},
      {"intertwiners", "span of gadget matrices of a given shape"},
      {"coherent", "coherent closure of a binary function"},
      {"augment", "gamma or all-ones augmentation"},
      {"compare", "planar #CSP refutation harness for F against G"},
      {"gen-magic-unitary", "emit a witness QPM (block unitary or lifted permutation)"},
      {"referee", "isomorphism game referee and classical strategy search"},
  };
  for (std::size_t i = 0; i < holant_command_count(); ++i) {
    std::string name = holant_command_name(i);
    auto it = about.find(name);
    app.add_subcommand(name, it == about.end() ? "" : it->second);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : HOLANT_INPUT_ERROR;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  Json manifest = Json::object();
  std::string baseDir;
  if (!f.manifest.empty()) {
    std::ifstream in(f.manifest, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      manifest = Json::parse(ss.str());
    } catch (const nlohmann::json::parse_error& e) {
      die(f.manifest + ": " + e.what(), HOLANT_INPUT_ERROR);
    }
    if (!manifest.is_object()) die(f.manifest + ": expected a JSON object", HOLANT_INPUT_ERROR);
    baseDir = fs::absolute(f.manifest).parent_path().string();
  }
  auto given = [&](const char* name) { return app.count(name) > 0; };
  auto setPath = [&](const char* flag, const char* key, const std::string& v) {
    if (given(flag)) manifest[key] = absolute(v);
  };
  setPath("--functions", "functions", f.functions);
  setPath("--g-functions", "g_functions", f.gFunctions);
  setPath("--map", "map", f.map);
  setPath("--instance", "instance", f.instance);
  setPath("--gadget", "gadget", f.gadget);
  setPath("--qpm", "qpm", f.qpm);
  if (!f.mapPairs.empty()) {
    Json m = Json::object();
    for (const auto& p : f.mapPairs) {
      auto eq = p.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 == p.size()) die("--map-pair expects F=G, got '" + p + "'", 2);
      m[p.substr(0, eq)] = p.substr(eq + 1);
    }
    manifest["map"] = m;
  }
  if (given("--pin")) manifest["pin"] = f.pin;
  if (given("--budget")) manifest["budget"] = f.budget;
  if (given("--epsilon")) manifest["epsilon"] = f.epsilon;
  if (given("--max-vertices")) manifest["max_vertices"] = f.maxVertices;
  if (given("--max-constraints")) manifest["max_constraints"] = f.maxConstraints;
  if (given("--count")) manifest["count"] = f.count;
  if (given("--depth")) manifest["depth"] = f.depth;
  if (given("--seed")) manifest["seed"] = f.seed;
  if (given("--jobs")) manifest["jobs"] = f.jobs;
  if (given("--m")) manifest["m"] = f.m;
  if (given("--d")) manifest["d"] = f.d;
  if (given("--max-dangling")) manifest["max_dangling"] = f.maxDangling;
  if (given("--mode")) manifest["mode"] = f.mode;
  if (given("--fn")) manifest["fn"] = f.fn;
  if (given("--g-fn")) manifest["g_fn"] = f.gFn;
  if (f.self) manifest["self"] = true;
  if (given("--inputs")) manifest["inputs"] = f.inputs;
  if (given("--bijection")) manifest["bijection"] = f.bijection;
  if (given("--alice") || given("--bob")) manifest["strategy"] = Json{{"alice", f.alice}, {"bob", f.bob}};
  if (given("--permutation")) manifest["permutation"] = f.permutation;

  holant_context* ctx = holant_context_new();
  if (!ctx) die("out of memory", HOLANT_INTERNAL_ERROR);
  if (!baseDir.empty()) holant_context_set_base_dir(ctx, baseDir.c_str());
  if (f.format == "jsonl") holant_context_set_record_callback(ctx, onRecord, nullptr);

  holant_result* res = nullptr;
  int status = holant_run(ctx, command.c_str(), manifest.dump().c_str(), &res);
  if (!res) {
    std::string err = holant_last_error(ctx);
    holant_context_free(ctx);
    die(err, status);
  }
  if (f.format == "json") {
    std::cout << holant_result_json(res, 2) << "\n";
  } else if (f.format == "jsonl") {
    std::cout << holant_result_json(res, -1) << "\n";
  } else {
    std::cout << holant_result_summary(res);
  }
  std::cout.flush();
  holant_result_free(res);
  holant_context_free(ctx);
  return status;
}
