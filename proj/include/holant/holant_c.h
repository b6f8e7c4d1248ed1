/*
 * Copyright 2026 The Holant Toolkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef HOLANT_HOLANT_C_H_
#define HOLANT_HOLANT_C_H_

#include <stddef.h>

#if defined(_WIN32)
#define HOLANT_API __declspec(dllexport)
#else
#define HOLANT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes; also the CLI exit codes. */
#define HOLANT_OK 0
#define HOLANT_REFUTED 1
#define HOLANT_INPUT_ERROR 2
#define HOLANT_INTERNAL_ERROR 3

typedef struct holant_context holant_context;
typedef struct holant_result holant_result;

/* Receives one compact JSON record per corpus item, in corpus order. */
typedef void (*holant_record_fn)(const char* json_line, void* user);

HOLANT_API const char* holant_version(void);
HOLANT_API size_t holant_command_count(void);
HOLANT_API const char* holant_command_name(size_t i);

/* The cache directory starts as $HOLANT_CACHE_DIR (unset: no cache). */
HOLANT_API holant_context* holant_context_new(void);
HOLANT_API void holant_context_free(holant_context* ctx);
/* NULL or "" disables the cache. */
HOLANT_API int holant_context_set_cache_dir(holant_context* ctx, const char* dir);
/* Relative file references in manifests resolve against dir. */
HOLANT_API int holant_context_set_base_dir(holant_context* ctx, const char* dir);
/* With a callback, corpus records are streamed and left out of the report. */
HOLANT_API int holant_context_set_record_callback(holant_context* ctx, holant_record_fn fn, void* user);
/* Message of the last failed call on ctx; "" when none. */
HOLANT_API const char* holant_last_error(const holant_context* ctx);

/*
 * Runs a subcommand on a JSON manifest. Returns HOLANT_OK or HOLANT_REFUTED
 * with *out set (free with holant_result_free), or an error status with
 * *out NULL and the message in holant_last_error.
 */
HOLANT_API int holant_run(holant_context* ctx, const char* command, const char* manifest_json, holant_result** out);

HOLANT_API int holant_result_status(const holant_result* r);
/* indent < 0: compact. The string lives as long as r. */
HOLANT_API const char* holant_result_json(holant_result* r, int indent);
/* Newline-separated human-readable lines. */
HOLANT_API const char* holant_result_summary(const holant_result* r);
HOLANT_API void holant_result_free(holant_result* r);

#ifdef __cplusplus
}
#endif

#endif /* HOLANT_HOLANT_C_H_ */
