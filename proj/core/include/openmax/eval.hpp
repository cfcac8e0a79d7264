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
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "openmax/dataset.hpp"
#include "openmax/openmax.hpp"

namespace openmax {

struct OpenSetCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  bool operator==(const OpenSetCounts&) const = default;
};

// 2tp / (2tp + fp + fn); 0 when all counts are zero.
double f_measure(const OpenSetCounts& counts);

// Known-label samples (label >= 0): correct accept -> tp; wrong accept or any
// rejection -> fp. Unknown samples (label < 0): accepted as a known class ->
// fn; rejected -> nothing. Throws ArityError on length mismatch.
OpenSetCounts open_set_counts(std::span<const Verdict> verdicts,
                              std::span<const int> labels);

enum class Scorer : std::uint8_t { kOpenMax, kSoftmaxThreshold };

std::string_view to_string(Scorer scorer);
Scorer scorer_from_string(std::string_view name);

// Evaluation partitions; null or empty members are ignored.
struct EvalSets {
  const Dataset* validation = nullptr;
  const Dataset* openset = nullptr;
  const Dataset* fooling = nullptr;
};

// Threshold-independent part of one sample's decision: argmax index over the
// scorer's probability vector and its probability.
struct ScoredSample {
  int label = 0;
  std::size_t top = 0;
  double peak = 0.0;
};

// Scores every sample once. Uses hp.alpha and hp.weight_mode; epsilon is
// ignored.
std::vector<ScoredSample> score_samples(const OpenMaxModel& model,
                                        const EvalSets& sets, Scorer scorer,
                                        const Hyperparams& hp);

Verdict verdict_at(const ScoredSample& sample, Scorer scorer, double epsilon);

OpenSetCounts counts_at(std::span<const ScoredSample> scored, Scorer scorer,
                        double epsilon);

struct SweepCurve {
  std::vector<double> thresholds;
  std::vector<double> fmeasures;
  std::vector<OpenSetCounts> counts;

  // Index of the highest F-measure, earliest threshold on ties.
  std::size_t best() const;
};

// F-measure per threshold. Thresholds must be non-empty and strictly
// increasing (ConfigError otherwise); throws EmptyDatasetError when the sets
// hold no samples.
SweepCurve threshold_sweep(const OpenMaxModel& model, const EvalSets& sets,
                           Scorer scorer, const Hyperparams& hp,
                           std::span<const double> thresholds);

// Fraction of `partition` rejected at hp.epsilon, for either reason.
double detection_accuracy(const OpenMaxModel& model, const Dataset& partition,
                          Scorer scorer, const Hyperparams& hp);

struct GridSpec {
  std::vector<std::size_t> etas;
  std::vector<std::size_t> alphas;
  std::vector<double> epsilons;
};

struct GridPoint {
  std::size_t eta = 0;
  std::size_t alpha = 0;
  double epsilon = 0.0;
  OpenSetCounts counts;
  double fmeasure = 0.0;
};

struct GridResult {
  std::size_t eta = 0;
  Hyperparams hp;
  double fmeasure = 0.0;
  // Every evaluated point in (eta, alpha, epsilon) ascending order.
  std::vector<GridPoint> points;
};

// Exhaustive search maximizing F-measure over validation plus open-set
// samples. Ties go to the smallest eta, then alpha, then epsilon, so the
// result does not depend on grid order.
GridResult grid_search(const Dataset& train, const Dataset& validation,
                       const Dataset& openset, const GridSpec& grid,
                       const DistanceConfig& distance,
                       WeightMode weight_mode = WeightMode::kCdf);

// Writes rows `scorer,threshold,tp,fp,fn,fmeasure` (no header).
void write_sweep_rows(std::ostream& out, Scorer scorer, const SweepCurve& curve);
inline constexpr std::string_view kSweepCsvHeader =
    "scorer,threshold,tp,fp,fn,fmeasure";

}  // namespace openmax
