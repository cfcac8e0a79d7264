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

#include "openmax/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <string>

#include "openmax/error.hpp"

namespace openmax {

double f_measure(const OpenSetCounts& counts) {
  const double denom = 2.0 * static_cast<double>(counts.tp) +
                       static_cast<double>(counts.fp) +
                       static_cast<double>(counts.fn);
  if (denom == 0.0) return 0.0;
  return 2.0 * static_cast<double>(counts.tp) / denom;
}

OpenSetCounts open_set_counts(std::span<const Verdict> verdicts,
                              std::span<const int> labels) {
  if (verdicts.size() != labels.size()) {
    throw ArityError(std::to_string(verdicts.size()) + " verdicts for " +
                     std::to_string(labels.size()) + " labels");
  }
  OpenSetCounts counts;
  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    const Verdict& v = verdicts[i];
    if (labels[i] >= 0) {
      if (v.accepted() && v.class_id == labels[i]) {
        ++counts.tp;
      } else {
        ++counts.fp;
      }
    } else if (v.accepted()) {
      ++counts.fn;
    }
  }
  return counts;
}

std::string_view to_string(Scorer scorer) {
  return scorer == Scorer::kOpenMax ? "openmax" : "softmax_threshold";
}

Scorer scorer_from_string(std::string_view name) {
  if (name == "openmax") return Scorer::kOpenMax;
  if (name == "softmax" || name == "softmax_threshold") {
    return Scorer::kSoftmaxThreshold;
  }
  throw ConfigError("unknown scorer '" + std::string(name) + "'");
}

namespace {

void check_shape(const OpenMaxModel& model, const Dataset& d) {
  if (d.n_classes != model.n_classes || d.n_channels != model.n_channels) {
    throw DimensionError(std::string(to_string(d.partition)) +
                         " set is [C=" + std::to_string(d.n_channels) +
                         " x N=" + std::to_string(d.n_classes) +
                         "], model is [C=" + std::to_string(model.n_channels) +
                         " x N=" + std::to_string(model.n_classes) + "]");
  }
}

void score_into(std::vector<ScoredSample>& out, const OpenMaxModel& model,
                const Dataset& d, Scorer scorer, const Hyperparams& hp) {
  check_shape(model, d);
  for (const ActivationSample& s : d.samples) {
    const std::vector<double> probs =
        scorer == Scorer::kOpenMax
            ? openmax_multichannel(s, model, hp).probs
            : mean_softmax(s, model.n_classes, model.n_channels);
    const std::size_t top = argmax(std::span<const double>(probs));
    out.push_back({s.label, top, probs[top]});
  }
}

}  // namespace

std::vector<ScoredSample> score_samples(const OpenMaxModel& model,
                                        const EvalSets& sets, Scorer scorer,
                                        const Hyperparams& hp) {
  std::vector<ScoredSample> out;
  for (const Dataset* d : {sets.validation, sets.openset, sets.fooling}) {
    if (d != nullptr) score_into(out, model, *d, scorer, hp);
  }
  return out;
}

Verdict verdict_at(const ScoredSample& sample, Scorer scorer, double epsilon) {
  if (scorer == Scorer::kOpenMax) {
    if (sample.top == 0) return {VerdictKind::kRejectUnknown, -1, sample.peak};
    if (sample.peak < epsilon) {
      return {VerdictKind::kRejectUncertain, -1, sample.peak};
    }
    return {VerdictKind::kAccept, static_cast<int>(sample.top) - 1, sample.peak};
  }
  if (sample.peak < epsilon) {
    return {VerdictKind::kRejectUncertain, -1, sample.peak};
  }
  return {VerdictKind::kAccept, static_cast<int>(sample.top), sample.peak};
}

OpenSetCounts counts_at(std::span<const ScoredSample> scored, Scorer scorer,
                        double epsilon) {
  OpenSetCounts counts;
  for (const ScoredSample& s : scored) {
    const Verdict v = verdict_at(s, scorer, epsilon);
    if (s.label >= 0) {
      if (v.accepted() && v.class_id == s.label) {
        ++counts.tp;
      } else {
        ++counts.fp;
      }
    } else if (v.accepted()) {
      ++counts.fn;
    }
  }
  return counts;
}

std::size_t SweepCurve::best() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < fmeasures.size(); ++i) {
    if (fmeasures[i] > fmeasures[best]) best = i;
  }
  return best;
}

SweepCurve threshold_sweep(const OpenMaxModel& model, const EvalSets& sets,
                           Scorer scorer, const Hyperparams& hp,
                           std::span<const double> thresholds) {
  if (thresholds.empty()) throw ConfigError("threshold grid is empty");
  for (std::size_t i = 1; i < thresholds.size(); ++i) {
    if (!(thresholds[i] > thresholds[i - 1])) {
      throw ConfigError("thresholds must be strictly increasing");
    }
  }
  const std::vector<ScoredSample> scored = score_samples(model, sets, scorer, hp);
  if (scored.empty()) throw EmptyDatasetError("no samples to evaluate");

  SweepCurve curve;
  curve.thresholds.assign(thresholds.begin(), thresholds.end());
  for (double eps : thresholds) {
    const OpenSetCounts c = counts_at(scored, scorer, eps);
    curve.counts.push_back(c);
    curve.fmeasures.push_back(f_measure(c));
  }
  return curve;
}

double detection_accuracy(const OpenMaxModel& model, const Dataset& partition,
                          Scorer scorer, const Hyperparams& hp) {
  if (partition.empty()) {
    throw EmptyDatasetError(std::string(to_string(partition.partition)) +
                            " partition is empty");
  }
  std::vector<ScoredSample> scored;
  score_into(scored, model, partition, scorer, hp);
  std::size_t rejected = 0;
  for (const ScoredSample& s : scored) {
    if (!verdict_at(s, scorer, hp.epsilon).accepted()) ++rejected;
  }
  return static_cast<double>(rejected) / static_cast<double>(scored.size());
}

namespace {

template <typename T>
std::vector<T> sorted_unique(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

GridResult grid_search(const Dataset& train, const Dataset& validation,
                       const Dataset& openset, const GridSpec& grid,
                       const DistanceConfig& distance, WeightMode weight_mode) {
  if (grid.etas.empty() || grid.alphas.empty() || grid.epsilons.empty()) {
    throw ConfigError("every grid axis needs at least one value");
  }
  const auto etas = sorted_unique(grid.etas);
  const auto alphas = sorted_unique(grid.alphas);
  const auto epsilons = sorted_unique(grid.epsilons);
  const EvalSets sets{&validation, &openset, nullptr};
  if (validation.empty() && openset.empty()) {
    throw EmptyDatasetError("grid search needs validation or open-set samples");
  }

  GridResult result;
  bool have_best = false;
  for (std::size_t eta : etas) {
    const OpenMaxModel model = calibrate(train, distance, eta).model;
    for (std::size_t alpha : alphas) {
      Hyperparams hp{alpha, 0.0, weight_mode};
      const auto scored = score_samples(model, sets, Scorer::kOpenMax, hp);
      for (double eps : epsilons) {
        GridPoint point{eta, alpha, eps, counts_at(scored, Scorer::kOpenMax, eps),
                        0.0};
        point.fmeasure = f_measure(point.counts);
        if (!have_best || point.fmeasure > result.fmeasure) {
          have_best = true;
          result.eta = eta;
          result.hp = {alpha, eps, weight_mode};
          result.fmeasure = point.fmeasure;
        }
        result.points.push_back(point);
      }
    }
  }
  return result;
}

void write_sweep_rows(std::ostream& out, Scorer scorer, const SweepCurve& curve) {
  char buf[64];
  for (std::size_t i = 0; i < curve.thresholds.size(); ++i) {
    const OpenSetCounts& c = curve.counts[i];
    std::snprintf(buf, sizeof(buf), "%.6g", curve.thresholds[i]);
    out << to_string(scorer) << ',' << buf << ',' << c.tp << ',' << c.fp << ','
        << c.fn << ',';
    std::snprintf(buf, sizeof(buf), "%.6f", curve.fmeasures[i]);
    out << buf << '\n';
  }
}

}  // namespace openmax
