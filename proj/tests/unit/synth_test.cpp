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

#include "openmax/synth.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "gtest/gtest.h"
#include "openmax/avio.hpp"
#include "openmax/error.hpp"
#include "openmax/evt.hpp"
#include "openmax/mav.hpp"
#include "openmax/openmax.hpp"

namespace openmax {
namespace {

SynthConfig small_config() {
  SynthConfig cfg;
  cfg.n_classes = 25;
  cfg.n_channels = 3;
  cfg.train_per_class = 40;
  cfg.validation_per_class = 10;
  cfg.n_openset = 100;
  cfg.n_fooling = 100;
  cfg.n_heldout_classes = 10;
  return cfg;
}

TEST(GenBenchmark, Deterministic) {
  const Benchmark a = gen_benchmark(small_config());
  const Benchmark b = gen_benchmark(small_config());
  EXPECT_EQ(encode_dataset_binary(a.train), encode_dataset_binary(b.train));
  EXPECT_EQ(encode_dataset_binary(a.validation), encode_dataset_binary(b.validation));
  EXPECT_EQ(encode_dataset_binary(a.openset), encode_dataset_binary(b.openset));
  EXPECT_EQ(encode_dataset_binary(a.fooling), encode_dataset_binary(b.fooling));
  EXPECT_EQ(a.openset_sources, b.openset_sources);

  SynthConfig other = small_config();
  other.seed = 43;
  EXPECT_NE(encode_dataset_binary(gen_benchmark(other).train), encode_dataset_binary(a.train));
}

TEST(GenBenchmark, ShapesAndLabels) {
  const SynthConfig cfg = small_config();
  const Benchmark b = gen_benchmark(cfg);
  EXPECT_EQ(b.train.size(), 25u * 40u);
  EXPECT_EQ(b.validation.size(), 25u * 10u);
  EXPECT_EQ(b.openset.size(), 100u);
  EXPECT_EQ(b.fooling.size(), 100u);
  EXPECT_EQ(b.train.partition, Partition::kTrain);
  EXPECT_EQ(b.fooling.partition, Partition::kFooling);
  for (const Dataset* d : {&b.train, &b.validation, &b.openset, &b.fooling}) {
    EXPECT_NO_THROW(d->validate());
    EXPECT_EQ(d->n_classes, 25u);
    EXPECT_EQ(d->n_channels, 3u);
  }
  for (const auto& s : b.openset.samples) EXPECT_EQ(s.label, kOpenSetLabel);
  for (const auto& s : b.fooling.samples) EXPECT_EQ(s.label, kFoolingLabel);
}

TEST(GenBenchmark, OpenSetClassesAreUnseen) {
  const SynthConfig cfg = small_config();
  const Benchmark b = gen_benchmark(cfg);
  ASSERT_EQ(b.openset_sources.size(), b.openset.size());
  std::set<int> known;
  for (const auto& s : b.train.samples) known.insert(s.label);
  for (const auto& s : b.validation.samples) known.insert(s.label);
  for (int src : b.openset_sources) {
    EXPECT_GE(src, 25);
    EXPECT_LT(src, 25 + 10);
    EXPECT_EQ(known.count(src), 0u);
  }
}

TEST(GenBenchmark, VanishingNoiseReproducesProfiles) {
  SynthConfig cfg = small_config();
  cfg.noise = 1e-12;
  const Benchmark b = gen_benchmark(cfg);
  // Every sample of a class equals the same profile.
  for (std::size_t i = 1; i < b.train.size(); ++i) {
    const auto& prev = b.train.samples[i - 1];
    const auto& cur = b.train.samples[i];
    if (prev.label == cur.label) ASSERT_EQ(prev.activations, cur.activations);
  }
  const CorrectSubset subset = correct_subset(b.train);
  const auto& refs = subset.per_class[0];
  ASSERT_FALSE(refs.empty());
  const auto mav = compute_mav(refs, 25, 3);
  const auto d = class_distances(refs, mav, 25, 3, {});
  for (double x : d[0]) EXPECT_EQ(x, 0.0);
  EXPECT_THROW(fit_high(d[0], 20), DegenerateTailError);
  EXPECT_THROW(calibrate(b.train, {}, 20), CalibrationError);
}

TEST(GenBenchmark, DefaultBaseAccuracy) {
  const SynthConfig cfg;
  ASSERT_EQ(cfg.n_classes, 100u);
  ASSERT_EQ(cfg.n_channels, 1u);
  ASSERT_EQ(cfg.train_per_class, 200u);
  const Benchmark b = gen_benchmark(cfg);
  for (const Dataset* d : {&b.train, &b.validation}) {
    std::size_t correct = 0;
    for (const auto& s : d->samples) {
      std::size_t top = 0;
      for (std::size_t k = 1; k < 100; ++k) {
        if (s.activations[k] > s.activations[top]) top = k;
      }
      if (static_cast<int>(top) == s.label) ++correct;
    }
    EXPECT_GT(static_cast<double>(correct) / static_cast<double>(d->size()), 0.95);
  }
}

TEST(GenBenchmark, FoolingBeyondClassPercentile) {
  const SynthConfig cfg = small_config();
  const Benchmark b = gen_benchmark(cfg);
  const CorrectSubset subset = correct_subset(b.train);
  const DistanceConfig eucos{};
  for (const auto& s : b.fooling.samples) {
    const auto mean = channel_mean(s, 25, 3);
    const std::size_t top = argmax(std::span<const double>(mean));
    const auto& refs = subset.per_class[top];
    ASSERT_FALSE(refs.empty());
    const auto mav = compute_mav(refs, 25, 3);
    const auto train_d = class_distances(refs, mav, 25, 3, eucos);
    for (std::size_t ch = 0; ch < 3; ++ch) {
      const double d = distance(to_double(s.channel(ch, 25)),
                                std::span<const double>(mav).subspan(ch * 25, 25), eucos);
      const auto below = std::count_if(train_d[ch].begin(), train_d[ch].end(),
                                       [&](double x) { return x < d; });
      EXPECT_GE(static_cast<double>(below), 0.95 * static_cast<double>(train_d[ch].size()));
    }
  }
}

TEST(GenBenchmark, FoolingIsSparse) {
  const SynthConfig cfg = small_config();
  const Benchmark b = gen_benchmark(cfg);
  const double floor = cfg.background_mean - 3.0 * cfg.background_sd;
  std::size_t low = 0, total = 0;
  for (const auto& s : b.fooling.samples) {
    for (float v : s.activations) {
      low += v < floor + 0.5;
      ++total;
    }
  }
  EXPECT_GT(static_cast<double>(low) / static_cast<double>(total), 0.8);
}

TEST(SynthConfig, Validation) {
  SynthConfig cfg = small_config();
  cfg.group_size = 26;
  EXPECT_THROW(gen_benchmark(cfg), ConfigError);
  cfg = small_config();
  cfg.noise = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = small_config();
  cfg.n_fooling = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = small_config();
  cfg.related_min = 6.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = small_config();
  cfg.fooling_sparsity = 1.5;
  EXPECT_THROW(cfg.validate(), ConfigError);
  EXPECT_NO_THROW(small_config().validate());
}

TEST(EmpiricalCdf, Examples) {
  const std::vector<double> v = {3, 1, 2};
  const EmpiricalCdf f(v);
  EXPECT_DOUBLE_EQ(f(2.0), 2.0 / 3.0);
  EXPECT_EQ(f(0.5), 0.0);
  EXPECT_EQ(f(3.5), 1.0);
  EXPECT_EQ(f(3.0), 1.0);
  EXPECT_DOUBLE_EQ(f(1.999), 1.0 / 3.0);
  EXPECT_THROW(EmpiricalCdf(std::vector<double>{}), ArityError);
}

TEST(EmpiricalCdf, KsAgainstGeneratingWeibull) {
  const WeibullModel m{0.5, 1.7, 2.3};
  const auto xs = sample_weibull(m, 10000, 99);
  const EmpiricalCdf f(xs);
  EXPECT_LT(ks_distance(f, [&](double x) { return weibull_cdf(x, m); }), 0.02);
  // A clearly different model is far away.
  const WeibullModel other{0.5, 1.7, 3.0};
  EXPECT_GT(ks_distance(f, [&](double x) { return weibull_cdf(x, other); }), 0.1);
}

TEST(EmpiricalCdf, KsSinglePoint) {
  const std::vector<double> one = {0.0};
  // Uniform(-1, 1) CDF is 0.5 at the jump: both sides are 0.5 away.
  EXPECT_DOUBLE_EQ(ks_distance(EmpiricalCdf(one), [](double x) { return (x + 1) / 2; }), 0.5);
}

}  // namespace
}  // namespace openmax
