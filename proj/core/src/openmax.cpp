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

#include "openmax/openmax.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "openmax/error.hpp"

namespace openmax {

const ClassModel* OpenMaxModel::find(int class_id) const {
  const auto it = std::lower_bound(
      class_models.begin(), class_models.end(), class_id,
      [](const ClassModel& m, int id) { return m.class_id < id; });
  if (it == class_models.end() || it->class_id != class_id) return nullptr;
  return &*it;
}

CalibrationResult calibrate(const Dataset& train, const DistanceConfig& distance,
                            std::size_t eta) {
  if (eta < 2) throw ConfigError("tail size must be at least 2");
  if (distance.metric == DistanceMetric::kEucos &&
      !(distance.eucos_weight >= 0.0 && std::isfinite(distance.eucos_weight))) {
    throw ConfigError("eucos weight must be finite and non-negative");
  }
  if (train.partition != Partition::kTrain) {
    throw DataError("calibration needs the train partition, got " +
                    std::string(to_string(train.partition)));
  }
  train.validate();

  const std::size_t n = train.n_classes;
  const std::size_t c = train.n_channels;
  const CorrectSubset subset = correct_subset(train);

  CalibrationResult result;
  result.model.n_classes = n;
  result.model.n_channels = c;
  result.model.distance = distance;
  result.model.eta = eta;

  for (std::size_t j = 0; j < n; ++j) {
    const SampleRefs& samples = subset.per_class[j];
    const int id = static_cast<int>(j);
    if (samples.size() < eta) {
      result.skipped.push_back(
          {id, samples.size(),
           std::to_string(samples.size()) + " correct samples < tail size " +
               std::to_string(eta)});
      continue;
    }
    ClassModel cm;
    cm.class_id = id;
    cm.n_support = samples.size();
    cm.mav = compute_mav(samples, n, c);
    try {
      const auto dists = class_distances(samples, cm.mav, n, c, distance);
      cm.weibull.reserve(c);
      for (const auto& channel_dists : dists) {
        cm.weibull.push_back(fit_high(channel_dists, eta));
      }
    } catch (const DegenerateTailError& e) {
      result.skipped.push_back({id, samples.size(), e.what()});
      continue;
    } catch (const ZeroVectorError& e) {
      result.skipped.push_back({id, samples.size(), e.what()});
      continue;
    }
    result.model.class_models.push_back(std::move(cm));
  }
  if (result.model.class_models.empty()) {
    throw CalibrationError("every class was skipped; nothing to calibrate");
  }
  return result;
}

std::string_view to_string(WeightMode mode) {
  return mode == WeightMode::kCdf ? "cdf" : "survival";
}

WeightMode weight_mode_from_string(std::string_view name) {
  if (name == "cdf") return WeightMode::kCdf;
  if (name == "survival") return WeightMode::kSurvival;
  throw ConfigError("unknown weight mode '" + std::string(name) + "'");
}

std::vector<double> softmax(std::span<const double> v) {
  std::vector<double> out(v.size());
  if (v.empty()) return out;
  const double top = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = std::exp(v[i] - top);
    sum += out[i];
  }
  for (double& p : out) p /= sum;
  return out;
}

OpenSetScores openmax_scores(std::span<const double> av, const OpenMaxModel& model,
                             std::size_t channel, const Hyperparams& hp) {
  const std::size_t n = model.n_classes;
  if (av.size() != n) {
    throw DimensionError("activation vector has " + std::to_string(av.size()) +
                         " entries, model expects " + std::to_string(n));
  }
  if (channel >= model.n_channels) {
    throw DimensionError("channel " + std::to_string(channel) +
                         " out of range");
  }
  if (hp.alpha < 1 || hp.alpha > n) {
    throw ConfigError("alpha must lie in [1, " + std::to_string(n) + "]");
  }

  // Descending by activation, lowest index first on ties.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::partial_sort(order.begin(), order.begin() + hp.alpha, order.end(),
                    [&](std::size_t a, std::size_t b) {
                      return av[a] > av[b] || (av[a] == av[b] && a < b);
                    });

  OpenSetScores out;
  out.weights.assign(n, 1.0);
  const double alpha = static_cast<double>(hp.alpha);
  for (std::size_t rank = 1; rank <= hp.alpha; ++rank) {
    const std::size_t j = order[rank - 1];
    const ClassModel* cm = model.find(static_cast<int>(j));
    if (cm == nullptr) {
      throw ModelCoverageError("no calibrated model for class " +
                               std::to_string(j) + " at rank " +
                               std::to_string(rank));
    }
    const WeibullModel& rho = cm->weibull[channel];
    const double d = distance(av, cm->mav_channel(channel, n), model.distance);
    const double outlier = hp.weight_mode == WeightMode::kCdf
                               ? weibull_cdf(d, rho)
                               : weibull_survival(d, rho);
    out.weights[j] = 1.0 - ((alpha - static_cast<double>(rank)) / alpha) * outlier;
  }

  out.revised_av.resize(n);
  std::vector<double> extended(n + 1);
  for (std::size_t j = 0; j < n; ++j) {
    out.revised_av[j] = av[j] * out.weights[j];
    out.unknown_activation += av[j] * (1.0 - out.weights[j]);
    extended[j + 1] = out.revised_av[j];
  }
  extended[0] = out.unknown_activation;
  out.probs = softmax(extended);
  return out;
}

OpenSetScores openmax_multichannel(const ActivationSample& sample,
                                   const OpenMaxModel& model,
                                   const Hyperparams& hp) {
  const std::size_t n = model.n_classes;
  const std::size_t c = model.n_channels;
  if (sample.activations.size() != n * c) {
    throw DimensionError("sample shape does not match the model's [C x N]");
  }
  OpenSetScores mean;
  mean.probs.assign(n + 1, 0.0);
  mean.revised_av.assign(n, 0.0);
  mean.weights.assign(n, 0.0);
  std::vector<double> av;
  for (std::size_t ch = 0; ch < c; ++ch) {
    const auto row = sample.channel(ch, n);
    av.assign(row.begin(), row.end());
    const OpenSetScores s = openmax_scores(av, model, ch, hp);
    for (std::size_t k = 0; k <= n; ++k) mean.probs[k] += s.probs[k];
    for (std::size_t k = 0; k < n; ++k) {
      mean.revised_av[k] += s.revised_av[k];
      mean.weights[k] += s.weights[k];
    }
    mean.unknown_activation += s.unknown_activation;
  }
  if (c == 1) return mean;
  const double inv = 1.0 / static_cast<double>(c);
  for (double& v : mean.revised_av) v *= inv;
  for (double& v : mean.weights) v *= inv;
  mean.unknown_activation *= inv;
  const double total = std::accumulate(mean.probs.begin(), mean.probs.end(), 0.0);
  for (double& p : mean.probs) p /= total;
  return mean;
}

std::vector<double> mean_softmax(const ActivationSample& sample,
                                 std::size_t n_classes, std::size_t n_channels) {
  if (sample.activations.size() != n_classes * n_channels) {
    throw DimensionError("sample shape does not match [C x N]");
  }
  std::vector<double> mean(n_classes, 0.0);
  std::vector<double> av;
  for (std::size_t ch = 0; ch < n_channels; ++ch) {
    const auto row = sample.channel(ch, n_classes);
    av.assign(row.begin(), row.end());
    const std::vector<double> p = softmax(av);
    for (std::size_t j = 0; j < n_classes; ++j) mean[j] += p[j];
  }
  if (n_channels == 1) return mean;
  const double total = std::accumulate(mean.begin(), mean.end(), 0.0);
  for (double& p : mean) p /= total;
  return mean;
}

Verdict decide_openmax(std::span<const double> probs, double epsilon) {
  const std::size_t top = argmax(probs);
  const double peak = probs[top];
  if (top == 0) return {VerdictKind::kRejectUnknown, -1, peak};
  if (peak < epsilon) return {VerdictKind::kRejectUncertain, -1, peak};
  return {VerdictKind::kAccept, static_cast<int>(top) - 1, peak};
}

Verdict decide_softmax(std::span<const double> probs, double epsilon) {
  const std::size_t top = argmax(probs);
  const double peak = probs[top];
  if (peak < epsilon) return {VerdictKind::kRejectUncertain, -1, peak};
  return {VerdictKind::kAccept, static_cast<int>(top), peak};
}

Verdict predict(const ActivationSample& sample, const OpenMaxModel& model,
                const Hyperparams& hp) {
  return decide_openmax(openmax_multichannel(sample, model, hp).probs,
                        hp.epsilon);
}

Verdict softmax_threshold_predict(const ActivationSample& sample,
                                  std::size_t n_classes, std::size_t n_channels,
                                  double epsilon) {
  return decide_softmax(mean_softmax(sample, n_classes, n_channels), epsilon);
}

}  // namespace openmax
