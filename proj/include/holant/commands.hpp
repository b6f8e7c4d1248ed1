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

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "holant/json_io.hpp"

namespace holant {

// Exit statuses shared by the C API and the CLI.
enum RunStatus { kStatusOk = 0, kStatusRefuted = 1, kStatusInputError = 2, kStatusInternalError = 3 };

struct RunOptions {
  // When set and streaming, corpus records go here instead of into the report.
  std::function<void(const Json&)> onRecord;
  bool stream = false;
  std::filesystem::path cacheDir;  // empty: no signature-matrix cache
  std::filesystem::path baseDir;   // relative file references resolve here
};

struct CommandResult {
  int status = kStatusOk;
  Json report;
  std::vector<std::string> summary;  // human-readable lines
};

const std::vector<std::string>& commandNames();

// Manifest keys: file references or inline objects for "functions",
// "g_functions", "map", "instance", "gadget", "qpm"; parameters such as
// "budget", "epsilon", "max_vertices", "seed", "jobs", "count". Unknown keys
// and unresolved names are input errors (exceptions derived from Error).
CommandResult runCommand(const std::string& command, const Json& manifest, const RunOptions& opt = {});

// Finite-dimensional scope of the quantum checks, printed with their output.
extern const char* const kFiniteDimensionNote;

// Memoized signature matrix keyed by a hash of the gadget's canonical JSON
// and the functions it uses. Plain computation when dir is empty.
Matrix cachedSignatureMatrix(const Gadget& g, const std::filesystem::path& dir);
std::string gadgetCacheKey(const Gadget& g);

}  // namespace holant
