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
#include <functional>
#include <span>
#include <vector>

#include "openmax/dataset.hpp"
#include "openmax/mav.hpp"

namespace openmax {

// Knobs for the synthetic activation benchmark. Known classes are split into
// groups of related classes; a class profile has one dominant score, elevated
// scores on the other members of its group and a low background.
struct SynthConfig {
  std::size_t n_classes = 100;
  std::size_t n_channels = 1;
  std::size_t train_per_class = 200;
  std::size_t validation_per_class = 50;
  std::size_t n_openset = 2000;
  std::size_t n_fooling = 1500;
  // Classes absent from the known set that generate open-set samples.
  std::size_t n_heldout_classes = 50;
  std::size_t group_size = 5;

  double peak_level = 25.0;
  double related_min = 2.0;
  double related_max = 5.0;
  double background_mean = -1.0;
  double background_sd = 1.0;

  // Per-coordinate Gaussian noise on closed-set samples.
  double noise = 1.0;
  // Fixed per-class, per-channel offset sd (crop-to-crop variation).
  double channel_spread = 0.5;
  // Per-coordinate sd of the class-level shift of held-out classes; each
  // held-out class scales it by U(0.8, 1.2).
  double open_shift = 0.6;
  // Fraction of held-out classes that are near-even blends of two related
  // known classes (weight U(0.5, 0.65)); the rest shift a single known class.
  double open_blend_fraction = 0.2;
  // Fraction of non-spike coordinates of a fooling vector pushed to the floor.
  double fooling_sparsity = 0.9;
  double fooling_spike_min = 1.0;  // spike = peak_level * U(min, max)
  double fooling_spike_max = 1.5;

  std::uint64_t seed = 42;

  // Throws ConfigError on an illegal combination.
  void validate() const;
};

struct Benchmark {
  Dataset train;
  Dataset validation;
  Dataset openset;
  Dataset fooling;
  // Held-out class (id >= n_classes) that produced each open-set sample.
  std::vector<int> openset_sources;
};

// Fully deterministic for a given config.
Benchmark gen_benchmark(const SynthConfig& config);

// Right-continuous empirical distribution function.
class EmpiricalCdf {
 public:
  // Throws ArityError for an empty sample.
  explicit EmpiricalCdf(std::span<const double> values);

  // Fraction of values <= x.
  double operator()(double x) const;

  std::span<const double> sorted() const { return sorted_; }

 private:
  std::vector<double> sorted_;
};

// Kolmogorov-Smirnov distance sup |F_n(x) - F(x)|, evaluated at both sides of
// every jump of the empirical CDF.
double ks_distance(const EmpiricalCdf& empirical,
                   const std::function<double(double)>& cdf);

}  // namespace openmax
