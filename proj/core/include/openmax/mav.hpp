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
#include <span>
#include <string_view>
#include <vector>

#include "openmax/dataset.hpp"
#include "openmax/evt.hpp"

namespace openmax {

enum class DistanceMetric : std::uint8_t {
  kEuclidean = 0,
  kCosine = 1,
  kEucos = 2,
};

std::string_view to_string(DistanceMetric metric);
DistanceMetric metric_from_string(std::string_view name);

inline constexpr double kDefaultEucosWeight = 1.0 / 200.0;

struct DistanceConfig {
  DistanceMetric metric = DistanceMetric::kEucos;
  // Multiplier on the Euclidean term of eucos; ignored by other metrics.
  double eucos_weight = kDefaultEucosWeight;

  bool operator==(const DistanceConfig&) const = default;
};

double euclidean_distance(std::span<const double> a, std::span<const double> b);

// 1 - cos(a, b). Throws ZeroVectorError if either vector is all zeros.
double cosine_distance(std::span<const double> a, std::span<const double> b);

// Throws DimensionError on length mismatch.
double distance(std::span<const double> av, std::span<const double> mav,
                const DistanceConfig& config);

// Per-class model: mean activation vector and one Weibull per channel.
struct ClassModel {
  int class_id = 0;
  std::size_t n_support = 0;
  // Channel-major [C x N], like ActivationSample::activations.
  std::vector<double> mav;
  std::vector<WeibullModel> weibull;

  std::span<const double> mav_channel(std::size_t c, std::size_t n) const {
    return std::span<const double>(mav).subspan(c * n, n);
  }

  bool operator==(const ClassModel&) const = default;
};

using SampleRefs = std::vector<const ActivationSample*>;

struct CorrectSubset {
  // per_class[j] holds the samples labeled j whose channel-mean argmax is j.
  std::vector<SampleRefs> per_class;
  // Classes with no correctly classified sample.
  std::vector<int> empty_classes;
};

// Pointers in the result refer into `train`, which must outlive it.
CorrectSubset correct_subset(const Dataset& train);

// Element-wise mean over samples, channel-major [C x N].
// Throws EmptyClassError for an empty list.
std::vector<double> compute_mav(const SampleRefs& samples, std::size_t n_classes,
                                std::size_t n_channels);

// distances[c][i]: distance between channel c of samples[i] and channel c of
// the MAV.
std::vector<std::vector<double>> class_distances(const SampleRefs& samples,
                                                 std::span<const double> mav,
                                                 std::size_t n_classes,
                                                 std::size_t n_channels,
                                                 const DistanceConfig& config);

}  // namespace openmax
