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
#include <numeric>
#include <string>

#include "openmax/error.hpp"
#include "openmax/random.hpp"

namespace openmax {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

enum Stream : std::uint64_t {
  kStructure = 1,
  kTrain = 2,
  kValidation = 3,
  kOpen = 4,
  kFooling = 5,
};

// Independent generator per (stream, class); seed XOR class id keeps the
// per-class streams disjoint.
Rng stream_rng(std::uint64_t seed, Stream stream, std::uint64_t id) {
  return Rng(splitmix64(splitmix64(seed ^ id) + stream));
}

// Class profile per channel, channel-major [C x N].
using Profile = std::vector<double>;

ActivationSample noisy_sample(const Profile& profile, double noise, int label,
                              Rng& rng) {
  ActivationSample s;
  s.label = label;
  s.activations.resize(profile.size());
  for (std::size_t k = 0; k < profile.size(); ++k) {
    s.activations[k] = static_cast<float>(profile[k] + noise * rng.normal());
  }
  return s;
}

Dataset empty_dataset(const SynthConfig& cfg, Partition partition) {
  Dataset d;
  d.n_classes = cfg.n_classes;
  d.n_channels = cfg.n_channels;
  d.partition = partition;
  return d;
}

double percentile95(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const auto rank = static_cast<std::size_t>(
      std::ceil(0.95 * static_cast<double>(values.size())));
  return values[std::max<std::size_t>(rank, 1) - 1];
}

}  // namespace

void SynthConfig::validate() const {
  if (n_classes < 2) throw ConfigError("n_classes must be at least 2");
  if (n_channels < 1) throw ConfigError("n_channels must be at least 1");
  if (train_per_class < 1 || validation_per_class < 1 || n_openset < 1 ||
      n_fooling < 1 || n_heldout_classes < 1 || group_size < 1) {
    throw ConfigError("all counts must be at least 1");
  }
  if (group_size > n_classes) {
    throw ConfigError("group size " + std::to_string(group_size) +
                      " exceeds class count " + std::to_string(n_classes));
  }
  if (!(noise > 0.0) || !(background_sd > 0.0) || !(channel_spread >= 0.0) ||
      !(open_shift >= 0.0)) {
    throw ConfigError("noise scales must be positive");
  }
  if (!(related_min <= related_max) || !(fooling_spike_min <= fooling_spike_max)) {
    throw ConfigError("range bounds are inverted");
  }
  if (!(open_blend_fraction >= 0.0 && open_blend_fraction <= 1.0)) {
    throw ConfigError("open blend fraction must lie in [0, 1]");
  }
  if (!(fooling_sparsity >= 0.0 && fooling_sparsity <= 1.0)) {
    throw ConfigError("fooling sparsity must lie in [0, 1]");
  }
}

Benchmark gen_benchmark(const SynthConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.n_classes;
  const std::size_t c = cfg.n_channels;
  Rng structure = stream_rng(cfg.seed, kStructure, 0);

  // Related-class groups over a random permutation of the known classes.
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    std::swap(perm[i - 1], perm[structure.index(i)]);
  }
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> group_of(n);
  for (std::size_t i = 0; i < n; i += cfg.group_size) {
    groups.emplace_back(perm.begin() + i,
                        perm.begin() + std::min(n, i + cfg.group_size));
    for (std::size_t j : groups.back()) group_of[j] = groups.size() - 1;
  }

  // Single-channel base profiles for the known classes.
  std::vector<std::vector<double>> base(n, std::vector<double>(n));
  for (std::size_t j = 0; j < n; ++j) {
    for (double& v : base[j]) {
      v = structure.normal(cfg.background_mean, cfg.background_sd);
    }
    for (std::size_t k : groups[group_of[j]]) {
      if (k != j) base[j][k] = structure.uniform(cfg.related_min, cfg.related_max);
    }
    base[j][j] = cfg.peak_level * structure.uniform(0.9, 1.1);
  }

  auto with_channels = [&](const std::vector<double>& single) {
    Profile p(c * n);
    for (std::size_t ch = 0; ch < c; ++ch) {
      for (std::size_t k = 0; k < n; ++k) {
        p[ch * n + k] = single[k] + cfg.channel_spread * structure.normal();
      }
    }
    return p;
  };
  std::vector<Profile> known(n);
  for (std::size_t j = 0; j < n; ++j) known[j] = with_channels(base[j]);

  // Held-out classes copy or blend members of one group and are shifted off
  // the known manifold by a fixed class-level offset.
  std::vector<Profile> heldout(cfg.n_heldout_classes);
  for (Profile& p : heldout) {
    const std::size_t a = structure.index(n);
    const auto& group = groups[group_of[a]];
    const std::size_t b = group[structure.index(group.size())];
    const double mix = structure.uniform() < cfg.open_blend_fraction
                           ? structure.uniform(0.5, 0.65)
                           : 1.0;
    const double shift = cfg.open_shift * structure.uniform(0.8, 1.2);
    std::vector<double> offset(n);
    for (double& v : offset) v = shift * structure.normal();
    p.resize(c * n);
    for (std::size_t k = 0; k < c * n; ++k) {
      p[k] = mix * known[a][k] + (1.0 - mix) * known[b][k] + offset[k % n];
    }
  }

  Benchmark out;
  out.train = empty_dataset(cfg, Partition::kTrain);
  out.validation = empty_dataset(cfg, Partition::kValidation);
  out.openset = empty_dataset(cfg, Partition::kOpenSet);
  out.fooling = empty_dataset(cfg, Partition::kFooling);

  for (std::size_t j = 0; j < n; ++j) {
    Rng train_rng = stream_rng(cfg.seed, kTrain, j);
    for (std::size_t i = 0; i < cfg.train_per_class; ++i) {
      out.train.samples.push_back(
          noisy_sample(known[j], cfg.noise, static_cast<int>(j), train_rng));
    }
    Rng val_rng = stream_rng(cfg.seed, kValidation, j);
    for (std::size_t i = 0; i < cfg.validation_per_class; ++i) {
      out.validation.samples.push_back(
          noisy_sample(known[j], cfg.noise, static_cast<int>(j), val_rng));
    }
  }

  Rng open_rng = stream_rng(cfg.seed, kOpen, 0);
  for (std::size_t i = 0; i < cfg.n_openset; ++i) {
    const std::size_t h = open_rng.index(heldout.size());
    out.openset.samples.push_back(
        noisy_sample(heldout[h], cfg.noise, kOpenSetLabel, open_rng));
    out.openset_sources.push_back(static_cast<int>(n + h));
  }

  // Fooling vectors: one large spike, most other scores pushed to the floor.
  // Each must sit beyond the 95th percentile of its argmax class's training
  // distances; failing draws are redrawn.
  const DistanceConfig eucos{DistanceMetric::kEucos, kDefaultEucosWeight};
  const CorrectSubset subset = correct_subset(out.train);
  std::vector<std::vector<double>> mavs(n);
  std::vector<std::vector<double>> p95(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (subset.per_class[j].empty()) continue;
    mavs[j] = compute_mav(subset.per_class[j], n, c);
    for (const auto& d : class_distances(subset.per_class[j], mavs[j], n, c, eucos)) {
      p95[j].push_back(percentile95(d));
    }
  }
  const double floor = cfg.background_mean - 3.0 * cfg.background_sd;
  Rng fool_rng = stream_rng(cfg.seed, kFooling, 0);
  constexpr int kMaxRedraws = 100;
  for (std::size_t i = 0; i < cfg.n_fooling; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxRedraws && !placed; ++attempt) {
      const std::size_t target = fool_rng.index(n);
      const double spike =
          cfg.peak_level * fool_rng.uniform(cfg.fooling_spike_min, cfg.fooling_spike_max);
      ActivationSample s;
      s.label = kFoolingLabel;
      s.activations.resize(c * n);
      for (std::size_t ch = 0; ch < c; ++ch) {
        for (std::size_t k = 0; k < n; ++k) {
          double v;
          if (k == target) {
            v = spike + cfg.noise * fool_rng.normal();
          } else if (fool_rng.uniform() < cfg.fooling_sparsity) {
            v = floor + 0.1 * cfg.noise * fool_rng.normal();
          } else {
            v = fool_rng.normal(cfg.background_mean, cfg.background_sd);
          }
          s.activations[ch * n + k] = static_cast<float>(v);
        }
      }
      const auto mean = channel_mean(s, n, c);
      const std::size_t top = argmax(std::span<const double>(mean));
      if (mavs[top].empty()) continue;
      placed = true;
      for (std::size_t ch = 0; ch < c && placed; ++ch) {
        const auto row = to_double(s.channel(ch, n));
        const auto center = std::span<const double>(mavs[top]).subspan(ch * n, n);
        placed = distance(row, center, eucos) > p95[top][ch];
      }
      if (placed) out.fooling.samples.push_back(std::move(s));
    }
    if (!placed) {
      throw ConfigError("could not place fooling vector " + std::to_string(i) +
                        " beyond the 95th percentile of its class distances");
    }
  }
  return out;
}

EmpiricalCdf::EmpiricalCdf(std::span<const double> values)
    : sorted_(values.begin(), values.end()) {
  if (sorted_.empty()) throw ArityError("empirical CDF of an empty sample");
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) /
         static_cast<double>(sorted_.size());
}

double ks_distance(const EmpiricalCdf& empirical,
                   const std::function<double(double)>& cdf) {
  const auto xs = empirical.sorted();
  const double n = static_cast<double>(xs.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    worst = std::max(worst, std::abs(static_cast<double>(i + 1) / n - f));
    worst = std::max(worst, std::abs(f - static_cast<double>(i) / n));
  }
  return worst;
}

}  // namespace openmax
