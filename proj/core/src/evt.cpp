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
#include <functional>
#include <numbers>
#include <string>

#include "openmax/error.hpp"
#include "openmax/random.hpp"

namespace openmax {

bool WeibullModel::valid() const {
  return std::isfinite(tau) && std::isfinite(kappa) &&
         std::isfinite(lambda) && kappa > 0.0 && lambda > 0.0;
}

double weibull_cdf(double d, const WeibullModel& model) {
  if (!(d > model.tau)) return 0.0;
  const double z = (d - model.tau) / model.lambda;
  return -std::expm1(-std::pow(z, model.kappa));
}

double weibull_survival(double d, const WeibullModel& model) {
  if (!(d > model.tau)) return 1.0;
  const double z = (d - model.tau) / model.lambda;
  return std::exp(-std::pow(z, model.kappa));
}

double weibull_quantile(const WeibullModel& model, double q) {
  return model.tau +
         model.lambda * std::pow(-std::log1p(-q), 1.0 / model.kappa);
}

double weibull_from_uniform(const WeibullModel& model, double u) {
  return model.tau + model.lambda * std::pow(-std::log(u), 1.0 / model.kappa);
}

std::vector<double> sample_weibull(const WeibullModel& model, std::size_t n,
                                   std::uint64_t seed) {
  if (n == 0) throw ArityError("sample_weibull needs n >= 1");
  Rng rng(seed);
  std::vector<double> out(n);
  for (double& x : out) x = weibull_from_uniform(model, rng.uniform());
  return out;
}

namespace {

// Profile-likelihood shape equation for data rescaled so max(y) == 1:
//   g(k) = sum(y^k ln y) / sum(y^k) - 1/k - mean(ln y)
// g is strictly increasing with a single root at the MLE shape.
struct ShapeEquation {
  std::span<const double> logs;
  double mean_log;

  void eval(double k, double& g, double& dg) const {
    double b = 0.0, a = 0.0, c = 0.0;
    for (double l : logs) {
      const double w = std::exp(k * l);
      b += w;
      a += w * l;
      c += w * l * l;
    }
    const double ratio = a / b;
    g = ratio - 1.0 / k - mean_log;
    dg = c / b - ratio * ratio + 1.0 / (k * k);
  }
};

}  // namespace

WeibullModel fit_weibull_mle(std::span<const double> positive) {
  if (positive.size() < 2) throw ArityError("need at least 2 points to fit");
  const double top = *std::max_element(positive.begin(), positive.end());
  std::vector<double> logs(positive.size());
  double mean_log = 0.0;
  for (std::size_t i = 0; i < positive.size(); ++i) {
    if (!(positive[i] > 0.0) || !std::isfinite(positive[i])) {
      throw DataError("Weibull MLE needs strictly positive finite data");
    }
    logs[i] = std::log(positive[i] / top);
    mean_log += logs[i];
  }
  mean_log /= static_cast<double>(logs.size());

  double var_log = 0.0;
  for (double l : logs) var_log += (l - mean_log) * (l - mean_log);
  var_log /= static_cast<double>(logs.size() - 1);
  if (!(var_log > 0.0)) throw DegenerateTailError("data has no spread");

  const ShapeEquation eq{logs, mean_log};
  // Method-of-moments start: Var(ln X) = pi^2 / (6 k^2).
  double k = std::numbers::pi / std::sqrt(6.0 * var_log);

  double g = 0.0, dg = 0.0;
  double lo = k, hi = k;
  eq.eval(lo, g, dg);
  for (int i = 0; g > 0.0; ++i) {
    if (i == kMaxShapeIterations) throw SolverError("cannot bracket shape");
    lo *= 0.5;
    eq.eval(lo, g, dg);
  }
  eq.eval(hi, g, dg);
  for (int i = 0; g < 0.0; ++i) {
    if (i == kMaxShapeIterations) throw SolverError("cannot bracket shape");
    hi *= 2.0;
    eq.eval(hi, g, dg);
  }

  bool converged = false;
  for (int iter = 0; iter < kMaxShapeIterations; ++iter) {
    eq.eval(k, g, dg);
    if (g == 0.0) {
      converged = true;
      break;
    }
    if (g < 0.0) {
      lo = k;
    } else {
      hi = k;
    }
    double next = k - g / dg;
    // Fall back to bisection whenever the Newton step leaves the bracket.
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = next - k;
    k = next;
    if (std::abs(step) < kShapeTolerance) {
      converged = true;
      break;
    }
  }
  if (!converged || !std::isfinite(k) || k <= 0.0) {
    throw SolverError("shape iteration did not converge within " +
                      std::to_string(kMaxShapeIterations) + " steps");
  }

  double moment = 0.0;
  for (double l : logs) moment += std::exp(k * l);
  moment /= static_cast<double>(logs.size());
  const WeibullModel model{0.0, k, top * std::pow(moment, 1.0 / k)};
  if (!model.valid()) throw SolverError("fit produced invalid parameters");
  return model;
}

WeibullModel fit_high(std::span<const double> values, std::size_t tail_size) {
  if (tail_size < 2) throw ArityError("tail size must be at least 2");
  if (tail_size > values.size()) {
    throw ArityError("tail size " + std::to_string(tail_size) +
                     " exceeds the " + std::to_string(values.size()) +
                     " available values");
  }
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) {
      throw DataError("fit_high needs finite non-negative values");
    }
  }

  std::vector<double> tail(values.begin(), values.end());
  std::nth_element(tail.begin(), tail.begin() + (tail_size - 1), tail.end(),
                   std::greater<>());
  tail.resize(tail_size);
  // Sorted so the fit does not depend on input order.
  std::sort(tail.begin(), tail.end());

  const double range = tail.back() - tail.front();
  if (!(range > 0.0)) {
    throw DegenerateTailError("all " + std::to_string(tail_size) +
                              " tail values are identical");
  }
  const double tau = tail.front() - kTailShiftFraction * range;
  for (double& v : tail) v -= tau;
  if (!(tail.front() > 0.0)) {
    throw DegenerateTailError("tail spread is below floating-point resolution");
  }

  WeibullModel model = fit_weibull_mle(tail);
  model.tau = tau;
  return model;
}

}  // namespace openmax
