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
#include <vector>

namespace openmax {

// Three-parameter Weibull: shift tau, shape kappa, scale lambda.
struct WeibullModel {
  double tau = 0.0;
  double kappa = 1.0;
  double lambda = 1.0;

  bool valid() const;
  bool operator==(const WeibullModel&) const = default;
};

// Relative offset of the shift below the smallest tail value, as a fraction
// of the tail's range.
inline constexpr double kTailShiftFraction = 1e-6;
inline constexpr double kShapeTolerance = 1e-8;
inline constexpr int kMaxShapeIterations = 100;

// 1 - exp(-((d - tau) / lambda)^kappa), and exactly 0 for d <= tau.
double weibull_cdf(double d, const WeibullModel& model);

// exp(-((d - tau) / lambda)^kappa), and exactly 1 for d <= tau.
double weibull_survival(double d, const WeibullModel& model);

// Inverse CDF at probability q in [0, 1).
double weibull_quantile(const WeibullModel& model, double q);

// Inverse-transform draw from a uniform variate u in (0, 1):
// tau + lambda * (-ln u)^(1/kappa).
double weibull_from_uniform(const WeibullModel& model, double u);

// n independent draws, deterministic for a given seed.
std::vector<double> sample_weibull(const WeibullModel& model, std::size_t n,
                                   std::uint64_t seed);

// Fits a Weibull to the tail_size largest values. The shift sits just below
// the smallest tail value and (kappa, lambda) are the maximum-likelihood
// estimates on the shifted tail.
//
// Throws ArityError when tail_size < 2 or exceeds values.size(), DataError for
// negative or non-finite inputs, DegenerateTailError when the tail has no
// spread and SolverError if the shape iteration does not converge.
WeibullModel fit_high(std::span<const double> values, std::size_t tail_size);

// Maximum-likelihood (kappa, lambda) of a two-parameter Weibull for strictly
// positive data. Exposed for testing; fit_high calls it on the shifted tail.
WeibullModel fit_weibull_mle(std::span<const double> positive);

}  // namespace openmax
