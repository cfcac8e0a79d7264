// Copyright 2026 The OpenMax Toolkit Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace openmax {

// Coarse grouping used by the command-line front end to pick an exit code.
enum class ErrorCategory {
  kUsage,    // bad configuration or arguments
  kData,     // unreadable, malformed or inconsistent input
  kNumeric,  // fitting or calibration could not produce a valid model
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

#define OPENMAX_DEFINE_ERROR(Name, Category)                        \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string& what)                          \
        : Error(ErrorCategory::Category, #Name ": " + what) {}      \
  }

OPENMAX_DEFINE_ERROR(FormatError, kData);
OPENMAX_DEFINE_ERROR(DimensionError, kData);
OPENMAX_DEFINE_ERROR(DataError, kData);
OPENMAX_DEFINE_ERROR(IoError, kData);
OPENMAX_DEFINE_ERROR(EmptyDatasetError, kData);
OPENMAX_DEFINE_ERROR(ArityError, kUsage);
OPENMAX_DEFINE_ERROR(ConfigError, kUsage);
OPENMAX_DEFINE_ERROR(ModelCoverageError, kData);
OPENMAX_DEFINE_ERROR(EmptyClassError, kNumeric);
OPENMAX_DEFINE_ERROR(ZeroVectorError, kNumeric);
OPENMAX_DEFINE_ERROR(DegenerateTailError, kNumeric);
OPENMAX_DEFINE_ERROR(SolverError, kNumeric);
OPENMAX_DEFINE_ERROR(CalibrationError, kNumeric);

#undef OPENMAX_DEFINE_ERROR

}  // namespace openmax
