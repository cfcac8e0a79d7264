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

// Command-line front end: calibrate, score, predict, evaluate, sweep, synth.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "openmax/avio.hpp"
#include "openmax/error.hpp"
#include "openmax/eval.hpp"
#include "openmax/openmax.hpp"
#include "openmax/synth.hpp"

namespace {

namespace fs = std::filesystem;
using namespace openmax;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

struct Flags {
  // Paths.
  std::string train, validation, openset, fooling, data, model, out,
      detection_out, out_dir;
  // Model and decision knobs.
  std::string metric = "eucos";
  double eucos_weight = kDefaultEucosWeight;
  std::size_t eta = kDefaultTailSize;
  std::size_t alpha = kDefaultAlpha;
  double epsilon = 0.0;
  std::string weight_mode = "cdf";
  std::string scorer = "openmax";
  std::string thresholds = "0:0.99:0.01";
  std::string etas = "5,10,15,20,25,30,40,50";
  std::string alphas = "1,5,10";
  std::string format = "auto";
  std::string partition = "validation";
  std::uint64_t seed = 42;
  SynthConfig synth;
};

std::string format_double(double v, const char* spec = "%.9g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

double parse_double(std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ConfigError("not a finite number: '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) return parts;
    start = pos + 1;
  }
}

// "a,b,c" or an inclusive range "start:stop:step".
std::vector<double> parse_grid(std::string_view text) {
  std::vector<double> grid;
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ConfigError("range must be start:stop:step");
    const double start = parse_double(parts[0]);
    const double stop = parse_double(parts[1]);
    const double step = parse_double(parts[2]);
    if (!(step > 0.0) || stop < start) throw ConfigError("empty or inverted range");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) grid.push_back(start + step * static_cast<double>(i));
  } else {
    for (std::string_view p : split(text, ',')) grid.push_back(parse_double(p));
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw ConfigError("grid must be strictly increasing");
  }
  return grid;
}

std::vector<std::size_t> parse_counts(std::string_view text) {
  std::vector<std::size_t> out;
  for (std::string_view p : split(text, ',')) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), v);
    if (ec != std::errc() || ptr != p.data() + p.size()) {
      throw ConfigError("not a count: '" + std::string(p) + "'");
    }
    out.push_back(v);
  }
  return out;
}

void check_epsilon_grid(const std::vector<double>& grid) {
  for (double e : grid) {
    if (e < 0.0 || e > 1.0) throw ConfigError("thresholds must lie in [0, 1]");
  }
}

DistanceConfig distance_config(const Flags& f) {
  if (!(f.eucos_weight >= 0.0) || !std::isfinite(f.eucos_weight)) {
    throw ConfigError("--eucos-weight must be finite and non-negative");
  }
  return {metric_from_string(f.metric), f.eucos_weight};
}

Hyperparams hyperparams(const Flags& f) {
  if (f.alpha < 1) throw ConfigError("--alpha must be at least 1");
  if (!(f.epsilon >= 0.0 && f.epsilon <= 1.0)) {
    throw ConfigError("--epsilon must lie in [0, 1]");
  }
  return {f.alpha, f.epsilon, weight_mode_from_string(f.weight_mode)};
}

std::optional<DataFormat> forced_format(const Flags& f) {
  if (f.format == "auto") return std::nullopt;
  return format_from_string(f.format);
}

Dataset load(const Flags& f, const std::string& path, Partition csv_partition) {
  const DataFormat format = forced_format(f).value_or(format_from_path(path));
  return load_dataset(path, format, csv_partition);
}

void check_model_shape(const OpenMaxModel& m, const Dataset& d, const std::string& what) {
  if (d.n_classes != m.n_classes || d.n_channels != m.n_channels) {
    throw DimensionError(what + " has N=" + std::to_string(d.n_classes) +
                         ", C=" + std::to_string(d.n_channels) + " but the model has N=" +
                         std::to_string(m.n_classes) + ", C=" + std::to_string(m.n_channels));
  }
}

void check_alpha(const Hyperparams& hp, const OpenMaxModel& m) {
  if (hp.alpha > m.n_classes) {
    throw ConfigError("--alpha " + std::to_string(hp.alpha) + " exceeds class count " +
                      std::to_string(m.n_classes));
  }
}

// Output goes to `path`, or standard output when the path is empty. Written
// in one piece once all work has succeeded.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out.flush()) throw IoError("write failed: " + path);
}

void check_writable_dir(const fs::path& path) {
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  if (!fs::is_directory(dir)) throw IoError("no such directory: " + dir.string());
}

int cmd_calibrate(const Flags& f) {
  const DistanceConfig distance = distance_config(f);
  if (f.eta < 2) throw ConfigError("--eta must be at least 2");
  check_writable_dir(f.out);
  const Dataset train = load(f, f.train, Partition::kTrain);
  const CalibrationResult r = calibrate(train, distance, f.eta);
  save_model(r.model, f.out);

  std::ostringstream s;
  s << "classes fitted: " << r.model.class_models.size() << "\n"
    << "classes skipped: " << r.skipped.size() << "\n"
    << "metric: " << to_string(distance.metric) << "  eta: " << f.eta << "\n\n";
  char line[160];
  std::snprintf(line, sizeof(line), "%8s %9s %12s %12s %12s %12s\n", "class", "support",
                "kappa_min", "kappa_max", "lambda_min", "lambda_max");
  s << line;
  for (const ClassModel& cm : r.model.class_models) {
    double kmin = INFINITY, kmax = -INFINITY, lmin = INFINITY, lmax = -INFINITY;
    for (const WeibullModel& w : cm.weibull) {
      kmin = std::min(kmin, w.kappa);
      kmax = std::max(kmax, w.kappa);
      lmin = std::min(lmin, w.lambda);
      lmax = std::max(lmax, w.lambda);
    }
    std::snprintf(line, sizeof(line), "%8d %9zu %12.5g %12.5g %12.5g %12.5g\n", cm.class_id,
                  cm.n_support, kmin, kmax, lmin, lmax);
    s << line;
  }
  for (const SkippedClass& sk : r.skipped) {
    s << "skipped class " << sk.class_id << " (" << sk.n_correct
      << " correct): " << sk.reason << "\n";
  }
  std::cout << s.str();
  return kExitOk;
}

int cmd_score(const Flags& f) {
  const Hyperparams hp = hyperparams(f);
  const Partition part = partition_from_string(f.partition);
  if (!f.out.empty()) check_writable_dir(f.out);
  const OpenMaxModel model = load_model(f.model);
  check_alpha(hp, model);
  const Dataset data = load(f, f.data, part);
  check_model_shape(model, data, f.data);

  std::ostringstream s;
  s << "index,label,unknown";
  for (std::size_t j = 0; j < model.n_classes; ++j) s << ",p" << j;
  s << '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto probs = openmax_multichannel(data.samples[i], model, hp).probs;
    s << i << ',' << data.samples[i].label;
    for (double p : probs) s << ',' << format_double(p, "%.17g");
    s << '\n';
  }
  emit(f.out, s.str());
  return kExitOk;
}

int cmd_predict(const Flags& f) {
  const Hyperparams hp = hyperparams(f);
  const Scorer scorer = scorer_from_string(f.scorer);
  const Partition part = partition_from_string(f.partition);
  if (!f.out.empty()) check_writable_dir(f.out);
  const OpenMaxModel model = load_model(f.model);
  check_alpha(hp, model);
  const Dataset data = load(f, f.data, part);
  check_model_shape(model, data, f.data);

  std::ostringstream s;
  s << "index,verdict,score\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Verdict v = scorer == Scorer::kOpenMax
                          ? predict(data.samples[i], model, hp)
                          : softmax_threshold_predict(data.samples[i], model.n_classes,
                                                      model.n_channels, hp.epsilon);
    s << i << ',';
    switch (v.kind) {
      case VerdictKind::kAccept: s << v.class_id; break;
      case VerdictKind::kRejectUnknown: s << "UNKNOWN"; break;
      case VerdictKind::kRejectUncertain: s << "UNCERTAIN"; break;
    }
    s << ',' << format_double(v.score, "%.17g") << '\n';
  }
  emit(f.out, s.str());
  return kExitOk;
}

int cmd_evaluate(const Flags& f) {
  Hyperparams hp = hyperparams(f);
  const auto thresholds = parse_grid(f.thresholds);
  check_epsilon_grid(thresholds);
  if (!f.out.empty()) check_writable_dir(f.out);
  if (!f.detection_out.empty()) check_writable_dir(f.detection_out);
  const OpenMaxModel model = load_model(f.model);
  check_alpha(hp, model);
  const Dataset validation = load(f, f.validation, Partition::kValidation);
  const Dataset openset = load(f, f.openset, Partition::kOpenSet);
  const Dataset fooling = load(f, f.fooling, Partition::kFooling);
  check_model_shape(model, validation, f.validation);
  check_model_shape(model, openset, f.openset);
  check_model_shape(model, fooling, f.fooling);

  const EvalSets sets{&validation, &openset, &fooling};
  std::ostringstream sweep;
  std::ostringstream detect;
  sweep << kSweepCsvHeader << '\n';
  detect << "scorer,threshold,openset_rejection,fooling_rejection\n";
  for (Scorer scorer : {Scorer::kOpenMax, Scorer::kSoftmaxThreshold}) {
    write_sweep_rows(sweep, scorer, threshold_sweep(model, sets, scorer, hp, thresholds));
    const auto open_scored = score_samples(model, {nullptr, &openset, nullptr}, scorer, hp);
    const auto fool_scored = score_samples(model, {nullptr, nullptr, &fooling}, scorer, hp);
    auto rejection = [&](const std::vector<ScoredSample>& scored, double eps) {
      if (scored.empty()) return 0.0;
      std::size_t n = 0;
      for (const ScoredSample& s : scored) n += !verdict_at(s, scorer, eps).accepted();
      return static_cast<double>(n) / static_cast<double>(scored.size());
    };
    for (double eps : thresholds) {
      detect << to_string(scorer) << ',' << format_double(eps, "%.6g") << ','
             << format_double(rejection(open_scored, eps), "%.6f") << ','
             << format_double(rejection(fool_scored, eps), "%.6f") << '\n';
    }
  }
  if (f.detection_out.empty()) {
    emit(f.out, sweep.str() + "\n" + detect.str());
  } else {
    emit(f.out, sweep.str());
    emit(f.detection_out, detect.str());
  }
  return kExitOk;
}

int cmd_sweep(const Flags& f) {
  const DistanceConfig distance = distance_config(f);
  const WeightMode mode = weight_mode_from_string(f.weight_mode);
  GridSpec grid{parse_counts(f.etas), parse_counts(f.alphas), parse_grid(f.thresholds)};
  check_epsilon_grid(grid.epsilons);
  for (std::size_t e : grid.etas) {
    if (e < 2) throw ConfigError("every tail size must be at least 2");
  }
  for (std::size_t a : grid.alphas) {
    if (a < 1) throw ConfigError("every alpha must be at least 1");
  }
  if (!f.out.empty()) check_writable_dir(f.out);
  const Dataset train = load(f, f.train, Partition::kTrain);
  const Dataset validation = load(f, f.validation, Partition::kValidation);
  const Dataset openset = load(f, f.openset, Partition::kOpenSet);
  for (std::size_t a : grid.alphas) {
    if (a > train.n_classes) throw ConfigError("alpha exceeds class count");
  }

  const GridResult r = grid_search(train, validation, openset, grid, distance, mode);
  std::ostringstream s;
  s << "eta,alpha,epsilon,tp,fp,fn,fmeasure\n";
  for (const GridPoint& p : r.points) {
    s << p.eta << ',' << p.alpha << ',' << format_double(p.epsilon, "%.6g") << ','
      << p.counts.tp << ',' << p.counts.fp << ',' << p.counts.fn << ','
      << format_double(p.fmeasure, "%.6f") << '\n';
  }
  emit(f.out, s.str());
  (f.out.empty() ? std::cerr : std::cout)
      << "best eta=" << r.eta << " alpha=" << r.hp.alpha
      << " epsilon=" << format_double(r.hp.epsilon, "%.6g")
      << " fmeasure=" << format_double(r.fmeasure, "%.6f") << '\n';
  return kExitOk;
}

int cmd_synth(const Flags& f) {
  SynthConfig cfg = f.synth;
  cfg.seed = f.seed;
  cfg.validate();
  const std::optional<DataFormat> forced = forced_format(f);
  const DataFormat format = forced.value_or(DataFormat::kBinary);
  const fs::path dir(f.out_dir);
  if (!fs::is_directory(dir)) throw IoError("no such directory: " + dir.string());
  const Benchmark b = gen_benchmark(cfg);
  const std::string ext = format == DataFormat::kCsv ? ".csv" : ".avec";
  save_dataset(b.train, dir / ("train" + ext), format);
  save_dataset(b.validation, dir / ("validation" + ext), format);
  save_dataset(b.openset, dir / ("openset" + ext), format);
  save_dataset(b.fooling, dir / ("fooling" + ext), format);
  std::cout << "wrote " << b.train.size() << " train, " << b.validation.size()
            << " validation, " << b.openset.size() << " open-set, " << b.fooling.size()
            << " fooling samples to " << dir.string() << '\n';
  return kExitOk;
}

void add_metric(CLI::App* cmd, Flags& f) {
  cmd->add_option("--metric", f.metric, "euclidean, cosine or eucos")->capture_default_str();
  cmd->add_option("--eucos-weight", f.eucos_weight, "Euclidean weight in eucos")
      ->capture_default_str();
}

void add_decision(CLI::App* cmd, Flags& f) {
  cmd->add_option("--alpha", f.alpha, "number of top classes revised")->capture_default_str();
  cmd->add_option("--weight-mode", f.weight_mode, "cdf or survival")->capture_default_str();
}

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--format", f.format, "auto, binary or csv")->capture_default_str();
}

int run(int argc, char** argv) {
  Flags f;
  CLI::App app{"OpenMax open-set recognition toolkit"};
  app.require_subcommand(1);

  auto* cal = app.add_subcommand("calibrate", "fit per-class MAVs and Weibull tails");
  cal->add_option("--train", f.train, "training activations")->required();
  cal->add_option("-o,--out", f.out, "model file to write")->required();
  cal->add_option("--eta", f.eta, "tail size")->capture_default_str();
  add_metric(cal, f);
  add_common(cal, f);

  auto* score = app.add_subcommand("score", "write OpenMax probabilities per sample");
  score->add_option("--model", f.model)->required();
  score->add_option("--data", f.data)->required();
  score->add_option("--partition", f.partition, "partition tag for CSV input")
      ->capture_default_str();
  score->add_option("-o,--out", f.out, "output CSV (default stdout)");
  add_decision(score, f);
  add_common(score, f);

  auto* pred = app.add_subcommand("predict", "write index,verdict,score per sample");
  pred->add_option("--model", f.model)->required();
  pred->add_option("--data", f.data)->required();
  pred->add_option("--partition", f.partition, "partition tag for CSV input")
      ->capture_default_str();
  pred->add_option("--epsilon", f.epsilon, "uncertainty threshold")->capture_default_str();
  pred->add_option("--scorer", f.scorer, "openmax or softmax_threshold")->capture_default_str();
  pred->add_option("-o,--out", f.out, "output CSV (default stdout)");
  add_decision(pred, f);
  add_common(pred, f);

  auto* eval = app.add_subcommand("evaluate", "threshold sweep and detection rates");
  eval->add_option("--model", f.model)->required();
  eval->add_option("--validation", f.validation)->required();
  eval->add_option("--openset", f.openset)->required();
  eval->add_option("--fooling", f.fooling)->required();
  eval->add_option("--thresholds", f.thresholds, "start:stop:step or a,b,c")
      ->capture_default_str();
  eval->add_option("-o,--out", f.out, "sweep CSV (default stdout)");
  eval->add_option("--detection-out", f.detection_out,
                   "detection CSV (default: appended to the sweep output)");
  add_decision(eval, f);
  add_common(eval, f);

  auto* sweep = app.add_subcommand("sweep", "grid search over eta, alpha and epsilon");
  sweep->add_option("--train", f.train)->required();
  sweep->add_option("--validation", f.validation)->required();
  sweep->add_option("--openset", f.openset)->required();
  sweep->add_option("--etas", f.etas, "tail sizes")->capture_default_str();
  sweep->add_option("--alphas", f.alphas, "alpha values")->capture_default_str();
  sweep->add_option("--thresholds,--epsilons", f.thresholds, "start:stop:step or a,b,c")
      ->capture_default_str();
  sweep->add_option("--weight-mode", f.weight_mode, "cdf or survival")->capture_default_str();
  sweep->add_option("-o,--out", f.out, "grid CSV (default stdout)");
  add_metric(sweep, f);
  add_common(sweep, f);

  auto* syn = app.add_subcommand("synth", "generate the synthetic benchmark");
  syn->add_option("--out-dir", f.out_dir, "existing output directory")->required();
  syn->add_option("--classes", f.synth.n_classes)->capture_default_str();
  syn->add_option("--channels", f.synth.n_channels)->capture_default_str();
  syn->add_option("--train-per-class", f.synth.train_per_class)->capture_default_str();
  syn->add_option("--validation-per-class", f.synth.validation_per_class)
      ->capture_default_str();
  syn->add_option("--openset", f.synth.n_openset)->capture_default_str();
  syn->add_option("--fooling", f.synth.n_fooling)->capture_default_str();
  syn->add_option("--heldout-classes", f.synth.n_heldout_classes)->capture_default_str();
  syn->add_option("--group-size", f.synth.group_size)->capture_default_str();
  syn->add_option("--noise", f.synth.noise)->capture_default_str();
  syn->add_option("--open-shift", f.synth.open_shift)->capture_default_str();
  syn->add_option("--fooling-sparsity", f.synth.fooling_sparsity)->capture_default_str();
  syn->add_option("--seed", f.seed, "seed for every random draw")->capture_default_str();
  add_common(syn, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (*cal) return cmd_calibrate(f);
  if (*score) return cmd_score(f);
  if (*pred) return cmd_predict(f);
  if (*eval) return cmd_evaluate(f);
  if (*sweep) return cmd_sweep(f);
  return cmd_synth(f);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const openmax::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.category()) {
      case openmax::ErrorCategory::kUsage: return kExitUsage;
      case openmax::ErrorCategory::kData: return kExitData;
      case openmax::ErrorCategory::kNumeric: return kExitNumeric;
    }
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
}
