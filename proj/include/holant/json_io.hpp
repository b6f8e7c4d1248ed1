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

#include <complex>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "holant/csp.hpp"
#include "holant/decomposer.hpp"
#include "holant/gadget.hpp"
#include "holant/quantum.hpp"

namespace holant {

// Insertion-ordered so emitted documents are stable.
using Json = nlohmann::ordered_json;

// Parses text; syntax errors become ParseError carrying line and column.
Json parseJson(const std::string& text, const std::string& source = "<input>");
Json loadJsonFile(const std::filesystem::path& path);

// [num, den, num_i, den_i]; parts outside int64 are decimal strings. Input
// also accepts an integer, an "a/b" string or [num, den].
Json toJson(const GQ& x);
GQ scalarFromJson(const Json& j, const std::string& where = "");

Json toJson(const ConstraintFunction& f);
ConstraintFunction functionFromJson(const Json& j, const std::string& where = "");

// {"q": .., "functions": {name: function}}
Json toJson(const SignatureSet& fs);
SignatureSet signatureSetFromJson(const Json& j, const std::string& where = "");

// {"variables": [names] | count, "constraints": [{"fn", "args"}], "labels": [..]};
// args and labels are variable names or indices.
Json toJson(const CSPInstance& k);
CSPInstance instanceFromJson(const Json& j, const SignatureSet& fs, const std::string& where = "");

// {"q", "m", "d", "free_loops", "vertices": [{"kind", "fn", "orientation",
// "conj", "rotation"}], "pairings": [[h, h]], "dangling": [h]}; half-edge ids
// are implied by the rotation lists. Validated before returning.
Json toJson(const Gadget& g);
Gadget gadgetFromJson(const Json& j, const SignatureSet& fs, const std::string& where = "");

Json toJson(const Matrix& a);
Json toJson(const LeafSpec& l);
Json toJson(const Decomposition& dec);

// {"q", "dim", "entries": q rows of q operators, each dim rows of dim scalars}.
// A flat list of q*q operators is accepted too. Entries given as floats
// ({"re", "im"} objects or JSON reals) make the whole matrix a float QPM.
using AnyQPM = std::variant<ExactQPM, FloatQPM>;
Json toJson(const ExactQPM& u);
Json toJson(const FloatQPM& u);
AnyQPM qpmFromJson(const Json& j, const std::string& where = "");

// {"F": "G", ..}
std::map<std::string, std::string> nameMapFromJson(const Json& j, const std::string& where = "");

}  // namespace holant
