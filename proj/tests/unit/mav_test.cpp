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

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "openmax/error.hpp"
#include "openmax/random.hpp"

namespace openmax {
namespace {

ActivationSample make_sample(int label, std::vector<float> values) {
  return {label, std::move(values)};
}

std::vector<double> random_vector(Rng& rng, std::size_t n, double scale = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = scale * rng.normal();
  return v;
}

TEST(CorrectSubset, KeepsOnlyTopOneCorrect) {
  Dataset d{10, 1, Partition::kTrain, {}};
  std::vector<float> peak3(10, 0.0f), peak7(10, 0.0f);
  peak3[3] = 5.0f;
  peak7[7] = 5.0f;
  d.samples = {make_sample(3, peak3), make_sample(3, peak7)};
  const CorrectSubset s = correct_subset(d);
  ASSERT_EQ(s.per_class[3].size(), 1u);
  EXPECT_EQ(s.per_class[3][0], &d.samples[0]);
  EXPECT_TRUE(s.per_class[7].empty());
  EXPECT_EQ(s.empty_classes.size(), 9u);
}

TEST(CorrectSubset, TiesGoToLowestIndex) {
  Dataset d{3, 1, Partition::kTrain, {}};
  d.samples = {make_sample(1, {0, 2, 2}), make_sample(2, {0, 2, 2})};
  const CorrectSubset s = correct_subset(d);
  EXPECT_EQ(s.per_class[1].size(), 1u);
  EXPECT_TRUE(s.per_class[2].empty());
}

TEST(CorrectSubset, MatchesBruteForceFilter) {
  Rng rng(17);
  const std::size_t n = 8, c = 3;
  Dataset d{n, c, Partition::kTrain, {}};
  for (int i = 0; i < 100; ++i) {
    ActivationSample s;
    s.label = static_cast<int>(rng.index(n));
    s.activations.resize(n * c);
    for (float& v : s.activations) v = static_cast<float>(rng.normal());
    // Boost the true class on most samples.
    if (rng.uniform() < 0.7) {
      for (std::size_t ch = 0; ch < c; ++ch) s.activations[ch * n + s.label] += 2.0f;
    }
    d.samples.push_back(s);
  }
  const CorrectSubset subset = correct_subset(d);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<const ActivationSample*> expected;
    for (const auto& s : d.samples) {
      double best = -1e300;
      std::size_t arg = 0;
      for (std::size_t k = 0; k < n; ++k) {
        double sum = 0;
        for (std::size_t ch = 0; ch < c; ++ch) sum += s.activations[ch * n + k];
        if (sum / c > best) {
          best = sum / c;
          arg = k;
        }
      }
      if (s.label == static_cast<int>(j) && arg == j) expected.push_back(&s);
    }
    EXPECT_EQ(subset.per_class[j], expected) << "class " << j;
  }
}

TEST(ComputeMav, SingleSampleAndSymmetry) {
  const ActivationSample a = make_sample(0, {1.5f, -2.0f, 3.25f, 0.5f});
  const ActivationSample b = make_sample(0, {-1.5f, 2.0f, -3.25f, -0.5f});
  EXPECT_EQ(compute_mav({&a}, 2, 2), (std::vector<double>{1.5, -2.0, 3.25, 0.5}));
  EXPECT_EQ(compute_mav({&a, &b}, 2, 2), (std::vector<double>(4, 0.0)));
  EXPECT_THROW(compute_mav({}, 2, 2), EmptyClassError);
}

TEST(ComputeMav, MatchesCompensatedMean) {
  Rng rng(5);
  const std::size_t n = 20, c = 2;
  std::vector<ActivationSample> samples(50);
  SampleRefs refs;
  for (auto& s : samples) {
    s.activations.resize(n * c);
    for (float& v : s.activations) v = static_cast<float>(rng.normal(3.0, 10.0));
    refs.push_back(&s);
  }
  const std::vector<double> mav = compute_mav(refs, n, c);
  for (std::size_t k = 0; k < n * c; ++k) {
    // Neumaier summation.
    double sum = 0.0, comp = 0.0;
    for (const auto& s : samples) {
      const double x = s.activations[k];
      const double t = sum + x;
      comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
      sum = t;
    }
    const double expected = (sum + comp) / samples.size();
    EXPECT_NEAR(mav[k], expected, 1e-12 * std::max(1.0, std::abs(expected)));
  }
}

TEST(Distance, ZeroAtIdentity) {
  const std::vector<double> v = {1.0, -2.0, 0.5};
  for (auto metric : {DistanceMetric::kEuclidean, DistanceMetric::kCosine,
                      DistanceMetric::kEucos}) {
    EXPECT_EQ(distance(v, v, {metric, kDefaultEucosWeight}), 0.0);
  }
}

TEST(Distance, OrthogonalUnitVectors) {
  const std::vector<double> a = {1, 0}, b = {0, 1};
  EXPECT_NEAR(distance(a, b, {DistanceMetric::kEuclidean}), 1.4142135623730951, 1e-15);
  EXPECT_NEAR(distance(a, b, {DistanceMetric::kCosine}), 1.0, 1e-15);
  EXPECT_NEAR(distance(a, b, {DistanceMetric::kEucos, 1.0 / 200.0}),
              1.0070710678118655, 1e-15);
}

TEST(Distance, MatchesScalarLoopOracle) {
  Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_vector(rng, 1000, 5.0);
    const auto b = random_vector(rng, 1000, 5.0);
    long double ss = 0, dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      ss += (long double)(a[i] - b[i]) * (a[i] - b[i]);
      dot += (long double)a[i] * b[i];
      na += (long double)a[i] * a[i];
      nb += (long double)b[i] * b[i];
    }
    const double eu = std::sqrt((double)ss);
    const double co = 1.0 - (double)(dot / std::sqrt(na * nb));
    EXPECT_NEAR(distance(a, b, {DistanceMetric::kEuclidean}), eu, 1e-9 * eu);
    EXPECT_NEAR(distance(a, b, {DistanceMetric::kCosine}), co, 1e-9 * co);
    const double ec = 0.01 * eu + co;
    EXPECT_NEAR(distance(a, b, {DistanceMetric::kEucos, 0.01}), ec, 1e-9 * ec);
  }
}

TEST(Distance, Errors) {
  const std::vector<double> zero = {0, 0}, one = {1, 0}, three = {1, 2, 3};
  EXPECT_THROW(distance(zero, one, {DistanceMetric::kCosine}), ZeroVectorError);
  EXPECT_THROW(distance(one, zero, {DistanceMetric::kEucos}), ZeroVectorError);
  EXPECT_NO_THROW(distance(zero, one, {DistanceMetric::kEuclidean}));
  EXPECT_THROW(distance(one, three, {DistanceMetric::kEuclidean}), DimensionError);
  EXPECT_THROW(metric_from_string("manhattan"), ConfigError);
  EXPECT_EQ(metric_from_string("eucos"), DistanceMetric::kEucos);
}

TEST(DistanceProperty, MetricAxiomsOnRandomVectors) {
  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    const std::size_t n = 2 + rng.index(30);
    const auto a = random_vector(rng, n), b = random_vector(rng, n),
               c = random_vector(rng, n);
    const double ab = euclidean_distance(a, b);
    EXPECT_LE(ab, euclidean_distance(a, c) + euclidean_distance(c, b) + 1e-12);
    for (auto metric : {DistanceMetric::kEuclidean, DistanceMetric::kCosine,
                        DistanceMetric::kEucos}) {
      ASSERT_GE(distance(a, b, {metric, 0.3}), 0.0);
    }
    EXPECT_EQ(distance(a, b, {DistanceMetric::kEucos, 0.0}),
              distance(a, b, {DistanceMetric::kCosine}));
    std::vector<double> scaled = a;
    const double factor = rng.uniform(0.01, 100.0);
    for (double& x : scaled) x *= factor;
    EXPECT_NEAR(cosine_distance(scaled, b), cosine_distance(a, b), 1e-12);
  }
}

TEST(DistanceProperty, ZeroEuclideanImpliesEqual) {
  Rng rng(8);
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_vector(rng, 5);
    auto b = a;
    if (rng.uniform() < 0.5) b[rng.index(5)] += std::ldexp(1.0, -40);
    EXPECT_EQ(euclidean_distance(a, b) == 0.0, a == b);
  }
}

TEST(ClassDistances, ArityAndZeros) {
  const ActivationSample s = make_sample(0, {2, 1, 0});
  const SampleRefs refs = {&s, &s, &s};
  const auto mav = compute_mav(refs, 3, 1);
  const auto d = class_distances(refs, mav, 3, 1, {});
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0], (std::vector<double>{0, 0, 0}));
}

TEST(ClassDistances, ChannelsCompareAgainstOwnChannel) {
  const ActivationSample s = make_sample(0, {1, 0, 0, 5});
  const std::vector<double> mav = {1, 0, 0, 1};
  const auto d = class_distances({&s}, mav, 2, 2, {DistanceMetric::kEuclidean});
  EXPECT_EQ(d[0][0], 0.0);
  EXPECT_EQ(d[1][0], 4.0);
}

TEST(ClassDistances, IsotropicClusterMeanDistance) {
  // E||x - mu|| for x ~ N(mu, s^2 I_k) is s * sqrt(2) * G((k+1)/2) / G(k/2).
  Rng rng(2718);
  const std::size_t k = 40;
  const double sigma = 0.7;
  std::vector<double> center = random_vector(rng, k, 10.0);
  std::vector<ActivationSample> samples(2000);
  SampleRefs refs;
  for (auto& s : samples) {
    s.activations.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
      s.activations[i] = static_cast<float>(center[i] + sigma * rng.normal());
    }
    refs.push_back(&s);
  }
  const auto mav = compute_mav(refs, k, 1);
  const auto d = class_distances(refs, mav, k, 1, {DistanceMetric::kEuclidean});
  double mean = 0;
  for (double x : d[0]) mean += x;
  mean /= d[0].size();
  const double expected = sigma * std::sqrt(2.0) *
                          std::exp(std::lgamma((k + 1) / 2.0) - std::lgamma(k / 2.0));
  EXPECT_NEAR(mean, expected, 0.05 * expected);
}

}  // namespace
}  // namespace openmax
