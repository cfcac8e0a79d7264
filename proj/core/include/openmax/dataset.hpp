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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace openmax {

// Ground-truth labels outside [0, N) used only by evaluation partitions.
inline constexpr int kOpenSetLabel = -1;
inline constexpr int kFoolingLabel = -2;

enum class Partition : std::uint8_t {
  kTrain = 0,
  kValidation = 1,
  kOpenSet = 2,
  kFooling = 3,
};

std::string_view to_string(Partition partition);
Partition partition_from_string(std::string_view name);

// One labeled activation vector. Scores are stored channel-major:
// activations[c * n_classes + j] is class j's score on channel c.
struct ActivationSample {
  int label = 0;
  std::vector<float> activations;

  std::span<const float> channel(std::size_t c, std::size_t n_classes) const {
    return std::span<const float>(activations).subspan(c * n_classes, n_classes);
  }
};

struct Dataset {
  std::size_t n_classes = 0;
  std::size_t n_channels = 0;
  Partition partition = Partition::kTrain;
  std::vector<ActivationSample> samples;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }

  std::span<const float> channel(std::size_t sample, std::size_t c) const {
    return samples[sample].channel(c, n_classes);
  }

  // Throws DimensionError or DataError when a structural or value invariant
  // does not hold.
  void validate() const;
};

// Mean over channels of each class score, in double precision.
std::vector<double> channel_mean(const ActivationSample& sample,
                                 std::size_t n_classes,
                                 std::size_t n_channels);

// Index of the largest entry; the lowest index wins ties.
template <typename T>
std::size_t argmax(std::span<const T> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

std::vector<double> to_double(std::span<const float> values);

}  // namespace openmax
