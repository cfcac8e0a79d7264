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

#include "openmax/evt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "openmax/error.hpp"
#include "openmax/random.hpp"
#include "openmax/synth.hpp"

namespace openmax {
namespace {

TEST(WeibullCdf, ClosedForms) {
  const WeibullModel m{0.5, 2.0, 1.5};
  EXPECT_EQ(weibull_cdf(0.5, m), 0.0);
  EXPECT_EQ(weibull_cdf(-3.0, m), 0.0);
  EXPECT_NEAR(weibull_cdf(0.5 + 1.5, m), 0.6321205588285577, 1e-12);
  EXPECT_NEAR(weibull_cdf(0.5 + 3.0, m), 0.9816843611112658, 1e-12);
  for (double k : {0.3, 1.0, 7.0}) {
    EXPECT_NEAR(weibull_cdf(2.0, {1.0, k, 1.0}), 0.6321205588285577, 1e-12);
  }
}

TEST(WeibullCdf, SurvivalComplementsCdf) {
  const WeibullModel m{0.0, 1.3, 2.0};
  for (double d : {-1.0, 0.0, 0.1, 1.0, 5.0}) {
    EXPECT_NEAR(weibull_cdf(d, m) + weibull_survival(d, m), 1.0, 1e-15);
  }
}

TEST(WeibullCdf, MonotoneOnRandomPairs) {
  Rng rng(7);
  for (int i = 0; i < 20000; ++i) {
    const WeibullModel m{rng.uniform(-5, 5), rng.uniform(0.1, 10),
                         rng.uniform(0.01, 10)};
    double a = rng.uniform(-10, 30), b = rng.uniform(-10, 30);
    if (a > b) std::swap(a, b);
    ASSERT_LE(weibull_cdf(a, m), weibull_cdf(b, m));
  }
}

TEST(SampleWeibull, InverseCdfIdentity) {
  const WeibullModel m{0.25, 1.7, 3.0};
  EXPECT_DOUBLE_EQ(weibull_from_uniform(m, std::exp(-1.0)), 0.25 + 3.0);
}

TEST(SampleWeibull, DeterministicPerSeed) {
  const WeibullModel m{0.0, 2.0, 1.0};
  EXPECT_EQ(sample_weibull(m, 100, 5), sample_weibull(m, 100, 5));
  EXPECT_NE(sample_weibull(m, 100, 5), sample_weibull(m, 100, 6));
  EXPECT_THROW(sample_weibull(m, 0, 5), ArityError);
}

TEST(SampleWeibull, ExponentialMean) {
  // kappa = 1 is exponential with mean lambda.
  const auto xs = sample_weibull({0.0, 1.0, 3.0}, 100000, 11);
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  EXPECT_NEAR(mean, 3.0, 0.02 * 3.0);
}

TEST(SampleWeibull, QuantilesMatchCdf) {
  const WeibullModel m{1.0, 1.5, 2.0};
  const auto xs = sample_weibull(m, 20000, 3);
  const EmpiricalCdf ecdf(xs);
  for (int i = 1; i <= 9; ++i) {
    const double q = i / 10.0;
    EXPECT_NEAR(weibull_cdf(weibull_quantile(m, q), m), q, 1e-12);
    // Monte-Carlo: sd of the empirical fraction is below 0.004 here.
    EXPECT_NEAR(ecdf(weibull_quantile(m, q)), q, 0.015);
  }
}

TEST(FitWeibullMle, MatchesIndependentRoot) {
  // Reference values from a bracketed root of the profile equation.
  const std::vector<double> data = {0.5, 1.2, 0.8, 2.0, 1.5, 0.3, 1.1, 0.9};
  const WeibullModel m = fit_weibull_mle(data);
  EXPECT_NEAR(m.kappa, 2.1695646595509297, 1e-7);
  EXPECT_NEAR(m.lambda, 1.1740593378398805, 1e-7);
}

TEST(FitHigh, MatchesIndependentRootOnShiftedTail) {
  const std::vector<double> values = {0.5, 1.2, 0.8, 2.0, 1.5,
                                      0.3, 1.1, 0.9, 4.0, 2.5};
  const WeibullModel m = fit_high(values, 6);
  EXPECT_DOUBLE_EQ(m.tau, 1.1 - 1e-6 * (4.0 - 1.1));
  EXPECT_NEAR(m.kappa, 0.3992255635029556, 1e-7);
  EXPECT_NEAR(m.lambda, 0.5514116979690619, 1e-7);
}

TEST(FitHigh, RecoversGeneratingModel) {
  const auto xs = sample_weibull({0.0, 2.0, 1.0}, 10000, 2024);
  const WeibullModel m = fit_high(xs, xs.size());
  EXPECT_GE(m.kappa, 1.9);
  EXPECT_LE(m.kappa, 2.1);
  EXPECT_GE(m.lambda, 0.98);
  EXPECT_LE(m.lambda, 1.02);
}

TEST(FitHigh, ShiftIsBelowTailMinimum) {
  const auto xs = sample_weibull({0.0, 1.5, 2.0}, 300, 9);
  std::vector<double> sorted = xs;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const WeibullModel m = fit_high(xs, 20);
  EXPECT_LT(m.tau, sorted[19]);
  EXPECT_GT(m.tau, sorted[20]);
  EXPECT_TRUE(m.valid());
  EXPECT_EQ(weibull_cdf(sorted[20], m), 0.0);
  EXPECT_GT(weibull_cdf(sorted[19], m), 0.0);
}

TEST(FitHigh, TracksEmpiricalTail) {
  // Class-distance-like data: chi-distributed distances of 500 points.
  Rng rng(123);
  std::vector<double> dists(500);
  for (double& d : dists) {
    double s = 0.0;
    for (int k = 0; k < 50; ++k) {
      const double z = rng.normal();
      s += z * z;
    }
    d = std::sqrt(s);
  }
  const WeibullModel m = fit_high(dists, 20);
  std::sort(dists.begin(), dists.end(), std::greater<>());
  const std::vector<double> tail(dists.begin(), dists.begin() + 20);
  const EmpiricalCdf ecdf(tail);
  const double ks =
      ks_distance(ecdf, [&](double x) { return weibull_cdf(x, m); });
  EXPECT_LT(ks, 0.25);
}

TEST(FitHigh, PermutationInvariant) {
  auto xs = sample_weibull({0.0, 3.0, 2.0}, 200, 4);
  const WeibullModel a = fit_high(xs, 25);
  std::mt19937 shuffle(99);
  for (int i = 0; i < 10; ++i) {
    std::shuffle(xs.begin(), xs.end(), shuffle);
    EXPECT_EQ(fit_high(xs, 25), a);
  }
}

TEST(FitHigh, LocationEquivariance) {
  const auto xs = sample_weibull({0.0, 2.5, 1.0}, 200, 8);
  const WeibullModel a = fit_high(xs, 30);
  for (double s : {0.5, 3.0, 10.0}) {
    std::vector<double> shifted = xs;
    for (double& x : shifted) x += s;
    const WeibullModel b = fit_high(shifted, 30);
    EXPECT_NEAR(b.tau, a.tau + s, 1e-9);
    EXPECT_NEAR(b.kappa, a.kappa, 1e-6);
    EXPECT_NEAR(b.lambda, a.lambda, 1e-6);
  }
}

TEST(FitHigh, Errors) {
  const std::vector<double> ones = {1, 1, 1, 1};
  EXPECT_THROW(fit_high(ones, 4), DegenerateTailError);
  const std::vector<double> few = {1, 2, 3};
  EXPECT_THROW(fit_high(few, 4), ArityError);
  EXPECT_THROW(fit_high(few, 1), ArityError);
  const std::vector<double> negative = {1, -2, 3};
  EXPECT_THROW(fit_high(negative, 2), DataError);
  const std::vector<double> nan = {1, std::nan(""), 3};
  EXPECT_THROW(fit_high(nan, 2), DataError);
}

TEST(FitHigh, DegenerateTailAmongSpreadData) {
  // The five largest are identical even though the full list has spread.
  const std::vector<double> values = {0.1, 0.2, 5, 5, 5, 5, 5};
  EXPECT_THROW(fit_high(values, 5), DegenerateTailError);
  EXPECT_NO_THROW(fit_high(values, 6));
}

}  // namespace
}  // namespace openmax
