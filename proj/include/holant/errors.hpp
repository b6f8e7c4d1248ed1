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

#include <stdexcept>
#include <string>

namespace holant {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

#define HOLANT_ERROR_CLASS(Name)                                   \
  class Name : public Error {                                      \
   public:                                                         \
    using Error::Error;                                            \
    const char* kind() const noexcept override { return #Name; }   \
  };

HOLANT_ERROR_CLASS(ArityError)
HOLANT_ERROR_CLASS(CompositionError)
HOLANT_ERROR_CLASS(ResourceError)
HOLANT_ERROR_CLASS(MalformedGadget)
HOLANT_ERROR_CLASS(InternalError)
HOLANT_ERROR_CLASS(PinError)
HOLANT_ERROR_CLASS(CompatibilityError)
HOLANT_ERROR_CLASS(WitnessError)
HOLANT_ERROR_CLASS(ParseError)

#undef HOLANT_ERROR_CLASS

}  // namespace holant
