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

#include "holant/holant_c.h"

#include <cstdlib>
#include <new>
#include <string>

#include "holant/commands.hpp"
#include "holant/errors.hpp"

struct holant_context {
  std::string lastError;
  holant::RunOptions opt;
  holant_record_fn record = nullptr;
  void* user = nullptr;
};

struct holant_result {
  int status = HOLANT_OK;
  holant::Json report;
  std::string summary;
  std::string rendered;
};

namespace {

constexpr const char* kVersion = "0.1.0";

// Input problems map to HOLANT_INPUT_ERROR; InternalError and anything
// unexpected to HOLANT_INTERNAL_ERROR.
int classify(const holant::Error& e) {
  return dynamic_cast<const holant::InternalError*>(&e) ? HOLANT_INTERNAL_ERROR : HOLANT_INPUT_ERROR;
}

}  // namespace

extern "C" {

const char* holant_version(void) { return kVersion; }

size_t holant_command_count(void) { return holant::commandNames().size(); }

const char* holant_command_name(size_t i) {
  const auto& n = holant::commandNames();
  return i < n.size() ? n[i].c_str() : nullptr;
}

holant_context* holant_context_new(void) {
  auto* ctx = new (std::nothrow) holant_context;
  if (!ctx) return nullptr;
  if (const char* dir = std::getenv("HOLANT_CACHE_DIR"); dir && *dir) ctx->opt.cacheDir = dir;
  return ctx;
}

void holant_context_free(holant_context* ctx) { delete ctx; }

int holant_context_set_cache_dir(holant_context* ctx, const char* dir) {
  if (!ctx) return HOLANT_INPUT_ERROR;
  ctx->opt.cacheDir = dir ? dir : "";
  return HOLANT_OK;
}

int holant_context_set_base_dir(holant_context* ctx, const char* dir) {
  if (!ctx) return HOLANT_INPUT_ERROR;
  ctx->opt.baseDir = dir ? dir : "";
  return HOLANT_OK;
}

int holant_context_set_record_callback(holant_context* ctx, holant_record_fn fn, void* user) {
  if (!ctx) return HOLANT_INPUT_ERROR;
  ctx->record = fn;
  ctx->user = user;
  ctx->opt.stream = fn != nullptr;
  if (fn) {
    ctx->opt.onRecord = [ctx](const holant::Json& r) { ctx->record(r.dump().c_str(), ctx->user); };
  } else {
    ctx->opt.onRecord = nullptr;
  }
  return HOLANT_OK;
}

const char* holant_last_error(const holant_context* ctx) { return ctx ? ctx->lastError.c_str() : "null context"; }

int holant_run(holant_context* ctx, const char* command, const char* manifest_json, holant_result** out) {
  if (!ctx) return HOLANT_INPUT_ERROR;
  ctx->lastError.clear();
  if (out) *out = nullptr;
  if (!command || !manifest_json || !out) {
    ctx->lastError = "null argument";
    return HOLANT_INPUT_ERROR;
  }
  try {
    holant::Json manifest = holant::parseJson(manifest_json, "manifest");
    holant::CommandResult r = holant::runCommand(command, manifest, ctx->opt);
    auto* res = new holant_result;
    res->status = r.status;
    res->report = std::move(r.report);
    for (const auto& line : r.summary) res->summary += line + "\n";
    *out = res;
    return res->status;
  } catch (const holant::Error& e) {
    ctx->lastError = std::string(e.kind()) + ": " + e.what();
    return classify(e);
  } catch (const std::bad_alloc&) {
    ctx->lastError = "out of memory";
    return HOLANT_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    ctx->lastError = std::string("internal error: ") + e.what();
    return HOLANT_INTERNAL_ERROR;
  }
}

int holant_result_status(const holant_result* r) { return r ? r->status : HOLANT_INPUT_ERROR; }

const char* holant_result_json(holant_result* r, int indent) {
  if (!r) return "";
  r->rendered = r->report.dump(indent < 0 ? -1 : indent);
  return r->rendered.c_str();
}

const char* holant_result_summary(const holant_result* r) { return r ? r->summary.c_str() : ""; }

void holant_result_free(holant_result* r) { delete r; }

}  // extern "C"
