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

#include "openmax/mav.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "openmax/error.hpp"

namespace openmax {

std::string_view to_string(DistanceMetric metric) {
  switch (metric) {
    case DistanceMetric::kEuclidean:
      return "euclidean";
    case DistanceMetric::kCosine:
      return "cosine";
    case DistanceMetric::kEucos:
      return "eucos";
  }
  return "unknown";
}

DistanceMetric metric_from_string(std::string_view name) {
  if (name == "euclidean") return DistanceMetric::kEuclidean;
  if (name == "cosine") return DistanceMetric::kCosine;
  if (name == "eucos") return DistanceMetric::kEucos;
  throw ConfigError("unknown metric '" + std::string(name) + "'");
}

namespace {

void check_lengths(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionError("vector lengths differ: " + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()));
  }
}

}  // namespace

double euclidean_distance(std::span<const double> a,
                          std::span<const double> b) {
  check_lengths(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

double cosine_distance(std::span<const double> a, std::span<const double> b) {
  check_lengths(a, b);
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) {
    throw ZeroVectorError("cosine distance is undefined for a zero vector");
  }
  const double d = 1.0 - dot / std::sqrt(na * nb);
  return std::clamp(d, 0.0, 2.0);
}

double distance(std::span<const double> av, std::span<const double> mav,
                const DistanceConfig& config) {
  switch (config.metric) {
    case DistanceMetric::kEuclidean:
      return euclidean_distance(av, mav);
    case DistanceMetric::kCosine:
      return cosine_distance(av, mav);
    case DistanceMetric::kEucos:
      return config.eucos_weight * euclidean_distance(av, mav) +
             cosine_distance(av, mav);
  }
  throw ConfigError("unhandled metric");
}

CorrectSubset correct_subset(const Dataset& train) {
  CorrectSubset out;
  out.per_class.resize(train.n_classes);
  for (const ActivationSample& s : train.samples) {
    if (s.label < 0) continue;
    const std::vector<double> mean =
        channel_mean(s, train.n_classes, train.n_channels);
    const std::size_t top = argmax(std::span<const double>(mean));
    if (top == static_cast<std::size_t>(s.label)) {
      out.per_class[top].push_back(&s);
    }
  }
  for (std::size_t j = 0; j < out.per_class.size(); ++j) {
    if (out.per_class[j].empty()) out.empty_classes.push_back(static_cast<int>(j));
  }
  return out;
}

std::vector<double> compute_mav(const SampleRefs& samples, std::size_t n_classes,
                                std::size_t n_channels) {
  if (samples.empty()) throw EmptyClassError("cannot average an empty class");
  const std::size_t stride = n_classes * n_channels;
  std::vector<double> mav(stride, 0.0);
  for (const ActivationSample* s : samples) {
    if (s->activations.size() != stride) {
      throw DimensionError("sample shape does not match [C x N]");
    }
    for (std::size_t k = 0; k < stride; ++k) mav[k] += s->activations[k];
  }
  const double n = static_cast<double>(samples.size());
  for (double& m : mav) m /= n;
  return mav;
}

std::vector<std::vector<double>> class_distances(const SampleRefs& samples,
                                                 std::span<const double> mav,
                                                 std::size_t n_classes,
                                                 std::size_t n_channels,
                                                 const DistanceConfig& config) {
  if (mav.size() != n_classes * n_channels) {
    throw DimensionError("MAV shape does not match [C x N]");
  }
  std::vector<std::vector<double>> out(n_channels);
  std::vector<double> av;
  for (std::size_t c = 0; c < n_channels; ++c) {
    out[c].reserve(samples.size());
    const auto center = mav.subspan(c * n_classes, n_classes);
    for (const ActivationSample* s : samples) {
      const auto row = s->channel(c, n_classes);
      av.assign(row.begin(), row.end());
      out[c].push_back(distance(av, center, config));
    }
  }
  return out;
}

}  // namespace openmax
