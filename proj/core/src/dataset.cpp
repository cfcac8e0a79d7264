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

#include "openmax/dataset.hpp"

#include <cmath>
#include <string>

#include "openmax/error.hpp"

namespace openmax {

std::string_view to_string(Partition partition) {
  switch (partition) {
    case Partition::kTrain:
      return "train";
    case Partition::kValidation:
      return "validation";
    case Partition::kOpenSet:
      return "openset";
    case Partition::kFooling:
      return "fooling";
  }
  return "unknown";
}

Partition partition_from_string(std::string_view name) {
  if (name == "train") return Partition::kTrain;
  if (name == "validation") return Partition::kValidation;
  if (name == "openset") return Partition::kOpenSet;
  if (name == "fooling") return Partition::kFooling;
  throw FormatError("unknown partition '" + std::string(name) + "'");
}

void Dataset::validate() const {
  if (n_classes < 2) {
    throw DimensionError("need at least 2 classes, got " +
                         std::to_string(n_classes));
  }
  if (n_channels < 1) throw DimensionError("need at least 1 channel");
  const std::size_t stride = n_classes * n_channels;
  const int n = static_cast<int>(n_classes);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const ActivationSample& s = samples[i];
    if (s.activations.size() != stride) {
      throw DimensionError("sample " + std::to_string(i) + " holds " +
                           std::to_string(s.activations.size()) +
                           " values, expected " + std::to_string(stride));
    }
    if (s.label < kFoolingLabel || s.label >= n) {
      throw DataError("sample " + std::to_string(i) + " has label " +
                      std::to_string(s.label) + " outside [-2, " +
                      std::to_string(n) + ")");
    }
    if (partition == Partition::kTrain && s.label < 0) {
      throw DataError("train sample " + std::to_string(i) +
                      " carries evaluation-only label " +
                      std::to_string(s.label));
    }
    for (float v : s.activations) {
      if (!std::isfinite(v)) {
        throw DataError("sample " + std::to_string(i) +
                        " contains a non-finite activation");
      }
    }
  }
}

std::vector<double> channel_mean(const ActivationSample& sample,
                                 std::size_t n_classes,
                                 std::size_t n_channels) {
  std::vector<double> mean(n_classes, 0.0);
  for (std::size_t c = 0; c < n_channels; ++c) {
    const auto row = sample.channel(c, n_classes);
    for (std::size_t j = 0; j < n_classes; ++j) mean[j] += row[j];
  }
  if (n_channels > 1) {
    for (double& m : mean) m /= static_cast<double>(n_channels);
  }
  return mean;
}

std::vector<double> to_double(std::span<const float> values) {
  return std::vector<double>(values.begin(), values.end());
}

}  // namespace openmax
