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
#include <string>
#include <string_view>
#include <vector>

#include "openmax/dataset.hpp"
#include "openmax/evt.hpp"
#include "openmax/mav.hpp"

namespace openmax {

inline constexpr std::size_t kDefaultTailSize = 20;
inline constexpr std::size_t kDefaultAlpha = 10;

// Calibrated per-class models plus the metric they were fitted under.
// Immutable once calibrate() returns; safe to share across threads.
struct OpenMaxModel {
  std::size_t n_classes = 0;
  std::size_t n_channels = 0;
  DistanceConfig distance;
  std::size_t eta = kDefaultTailSize;
  // Sorted by class_id; classes skipped during calibration are absent.
  std::vector<ClassModel> class_models;

  // nullptr when the class was skipped.
  const ClassModel* find(int class_id) const;

  bool operator==(const OpenMaxModel&) const = default;
};

struct SkippedClass {
  int class_id = 0;
  std::size_t n_correct = 0;
  std::string reason;
};

struct CalibrationResult {
  OpenMaxModel model;
  std::vector<SkippedClass> skipped;
};

// Builds per-class MAVs from correctly classified training samples and fits a
// Weibull to the eta largest distances of each channel. Classes with fewer
// than eta correct samples or a degenerate tail are skipped and reported.
// Throws CalibrationError if every class is skipped.
CalibrationResult calibrate(const Dataset& train, const DistanceConfig& distance,
                            std::size_t eta = kDefaultTailSize);

// How the per-rank weight uses the Weibull model. kCdf penalizes inputs far
// from the MAV; kSurvival reproduces the weight with exp(-(.)) taken
// literally, kept for comparison.
enum class WeightMode : std::uint8_t { kCdf = 0, kSurvival = 1 };

std::string_view to_string(WeightMode mode);
WeightMode weight_mode_from_string(std::string_view name);

struct Hyperparams {
  std::size_t alpha = kDefaultAlpha;
  double epsilon = 0.0;
  WeightMode weight_mode = WeightMode::kCdf;
};

// probs[0] is the unknown class; probs[j + 1] is known class j.
struct OpenSetScores {
  std::vector<double> probs;
  std::vector<double> revised_av;
  double unknown_activation = 0.0;
  // Per-class weights omega; 1 for classes outside the top alpha. Averaged
  // over channels for multi-channel scores.
  std::vector<double> weights;
};

// Overflow-safe softmax (max subtracted before exponentiation).
std::vector<double> softmax(std::span<const double> v);

// Scores one channel's activation vector against the channel's class models.
// Throws ConfigError for alpha outside [1, N], DimensionError for a shape
// mismatch and ModelCoverageError when a top-alpha class has no model.
OpenSetScores openmax_scores(std::span<const double> av, const OpenMaxModel& model,
                             std::size_t channel, const Hyperparams& hp);

// Per-channel scores averaged over channels, renormalized to sum to one.
OpenSetScores openmax_multichannel(const ActivationSample& sample,
                                   const OpenMaxModel& model,
                                   const Hyperparams& hp);

// Channel-averaged SoftMax over the N known classes.
std::vector<double> mean_softmax(const ActivationSample& sample,
                                 std::size_t n_classes, std::size_t n_channels);

enum class VerdictKind : std::uint8_t { kAccept, kRejectUnknown, kRejectUncertain };

struct Verdict {
  VerdictKind kind = VerdictKind::kAccept;
  // Known class id when accepted, -1 otherwise.
  int class_id = -1;
  // Probability of the argmax entry.
  double score = 0.0;

  bool accepted() const { return kind == VerdictKind::kAccept; }
  bool operator==(const Verdict&) const = default;
};

// Decision rule over N+1 OpenMax probabilities: reject as unknown if index 0
// wins (ties included), as uncertain if the winner is below epsilon.
Verdict decide_openmax(std::span<const double> probs, double epsilon);

// Decision rule over N SoftMax probabilities: reject if the peak is below
// epsilon.
Verdict decide_softmax(std::span<const double> probs, double epsilon);

Verdict predict(const ActivationSample& sample, const OpenMaxModel& model,
                const Hyperparams& hp);

Verdict softmax_threshold_predict(const ActivationSample& sample,
                                  std::size_t n_classes, std::size_t n_channels,
                                  double epsilon);

}  // namespace openmax
