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

#include "openmax/avio.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "openmax/error.hpp"

namespace openmax {

namespace {

class ByteWriter {
 public:
  void raw(const char* data, std::size_t n) { out_.append(data, n); }

  template <typename T>
  void uint(T value) {
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      out_.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
    }
  }

  void u8(std::uint8_t v) { uint(v); }
  void u32(std::uint32_t v) { uint(v); }
  void u64(std::uint64_t v) { uint(v); }
  void i32(std::int32_t v) { uint(static_cast<std::uint32_t>(v)); }
  void f32(float v) { uint(std::bit_cast<std::uint32_t>(v)); }
  void f64(double v) { uint(std::bit_cast<std::uint64_t>(v)); }

  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

// Reads little-endian values; running off the end is reported through the
// error type chosen by the caller's context.
class ByteReader {
 public:
  explicit ByteReader(std::string_view bytes) : bytes_(bytes) {}

  std::size_t remaining() const { return bytes_.size() - pos_; }

  bool has(std::size_t n) const { return remaining() >= n; }

  template <typename T>
  T uint() {
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      value |= static_cast<T>(static_cast<unsigned char>(bytes_[pos_ + i]))
               << (8 * i);
    }
    pos_ += sizeof(T);
    return value;
  }

  std::string_view raw(std::size_t n) {
    const auto v = bytes_.substr(pos_, n);
    pos_ += n;
    return v;
  }
  std::uint8_t u8() { return uint<std::uint8_t>(); }
  std::uint32_t u32() { return uint<std::uint32_t>(); }
  std::uint64_t u64() { return uint<std::uint64_t>(); }
  std::int32_t i32() { return static_cast<std::int32_t>(uint<std::uint32_t>()); }
  float f32() { return std::bit_cast<float>(uint<std::uint32_t>()); }
  double f64() { return std::bit_cast<double>(uint<std::uint64_t>()); }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::uint32_t checked_u32(std::size_t v, const char* what) {
  if (v > 0xFFFFFFFFu) throw DimensionError(std::string(what) + " exceeds u32");
  return static_cast<std::uint32_t>(v);
}

// Splits one CSV line on commas; fields are never quoted in this format.
std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view field, std::size_t line_no) {
  field = trim(field);
  T value{};
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec == std::errc::result_out_of_range) {
    throw DataError("line " + std::to_string(line_no) + ": value '" +
                    std::string(field) + "' is out of range");
  }
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw FormatError("line " + std::to_string(line_no) + ": cannot parse '" +
                      std::string(field) + "'");
  }
  return value;
}

}  // namespace

std::string_view to_string(DataFormat format) {
  return format == DataFormat::kCsv ? "csv" : "binary";
}

DataFormat format_from_string(std::string_view name) {
  if (name == "binary") return DataFormat::kBinary;
  if (name == "csv") return DataFormat::kCsv;
  throw ConfigError("unknown format '" + std::string(name) + "'");
}

DataFormat format_from_path(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? DataFormat::kCsv : DataFormat::kBinary;
}

std::string encode_dataset_binary(const Dataset& dataset) {
  dataset.validate();
  ByteWriter w;
  w.raw(kDatasetMagic, 4);
  w.u32(kDatasetVersion);
  w.u32(checked_u32(dataset.n_classes, "class count"));
  w.u32(checked_u32(dataset.n_channels, "channel count"));
  w.u32(checked_u32(dataset.samples.size(), "sample count"));
  w.u8(static_cast<std::uint8_t>(dataset.partition));
  for (const ActivationSample& s : dataset.samples) {
    w.i32(s.label);
    for (float v : s.activations) w.f32(v);
  }
  return w.take();
}

Dataset decode_dataset_binary(std::string_view bytes) {
  ByteReader r(bytes);
  if (!r.has(kDatasetHeaderBytes)) throw FormatError("truncated header");
  if (std::memcmp(r.raw(4).data(), kDatasetMagic, 4) != 0) {
    throw FormatError("bad magic, expected AVEC");
  }
  const std::uint32_t version = r.u32();
  if (version != kDatasetVersion) {
    throw FormatError("unsupported dataset version " + std::to_string(version));
  }
  Dataset d;
  d.n_classes = r.u32();
  d.n_channels = r.u32();
  const std::uint32_t count = r.u32();
  const std::uint8_t tag = r.u8();
  if (tag > static_cast<std::uint8_t>(Partition::kFooling)) {
    throw FormatError("unknown partition tag " + std::to_string(tag));
  }
  d.partition = static_cast<Partition>(tag);
  if (d.n_classes < 2 || d.n_channels < 1) {
    throw DimensionError("header declares N=" + std::to_string(d.n_classes) +
                         ", C=" + std::to_string(d.n_channels));
  }

  const std::size_t stride = d.n_classes * d.n_channels;
  const std::size_t record = 4 + 4 * stride;
  if (r.remaining() != record * count) {
    throw DimensionError("header claims " + std::to_string(count) +
                         " samples of " + std::to_string(record) +
                         " bytes but payload holds " +
                         std::to_string(r.remaining()) + " bytes");
  }
  d.samples.resize(count);
  for (ActivationSample& s : d.samples) {
    s.label = r.i32();
    s.activations.resize(stride);
    for (float& v : s.activations) v = r.f32();
  }
  d.validate();
  return d;
}

std::string encode_dataset_csv(const Dataset& dataset) {
  dataset.validate();
  std::string out = "label";
  for (std::size_t c = 0; c < dataset.n_channels; ++c) {
    for (std::size_t j = 0; j < dataset.n_classes; ++j) {
      out += ",c" + std::to_string(c) + "_v" + std::to_string(j);
    }
  }
  out += '\n';
  char buf[32];
  for (const ActivationSample& s : dataset.samples) {
    out += std::to_string(s.label);
    for (float v : s.activations) {
      std::snprintf(buf, sizeof(buf), ",%.9g", static_cast<double>(v));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

Dataset decode_dataset_csv(std::string_view text, Partition partition) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const auto line = trim(text.substr(start, end - start));
    if (!line.empty()) lines.push_back(line);
    start = end + 1;
  }
  if (lines.empty()) throw FormatError("CSV has no header row");

  const auto header = split_fields(lines[0]);
  if (header.size() < 2 || trim(header[0]) != "label") {
    throw FormatError("CSV header must start with 'label'");
  }
  // Columns are c{c}_v{j} in channel-major order; infer N from the first
  // channel and check every column name against it.
  std::size_t n = 0;
  while (n + 1 < header.size() &&
         trim(header[n + 1]).starts_with("c0_")) {
    ++n;
  }
  if (n == 0 || (header.size() - 1) % n != 0) {
    throw FormatError("CSV header columns do not form a [C x N] grid");
  }
  Dataset d;
  d.partition = partition;
  d.n_classes = n;
  d.n_channels = (header.size() - 1) / n;
  for (std::size_t c = 0; c < d.n_channels; ++c) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::string expected =
          "c" + std::to_string(c) + "_v" + std::to_string(j);
      if (trim(header[1 + c * n + j]) != expected) {
        throw FormatError("CSV column " + std::to_string(1 + c * n + j) +
                          " should be '" + expected + "'");
      }
    }
  }

  d.samples.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split_fields(lines[i]);
    if (fields.size() != header.size()) {
      throw DimensionError("line " + std::to_string(i + 1) + " has " +
                           std::to_string(fields.size()) + " fields, header has " +
                           std::to_string(header.size()));
    }
    ActivationSample s;
    s.label = parse_number<int>(fields[0], i + 1);
    s.activations.reserve(fields.size() - 1);
    for (std::size_t k = 1; k < fields.size(); ++k) {
      s.activations.push_back(parse_number<float>(fields[k], i + 1));
    }
    d.samples.push_back(std::move(s));
  }
  d.validate();
  return d;
}

Dataset load_dataset(const std::filesystem::path& path, DataFormat format,
                     Partition csv_partition) {
  const std::string bytes = read_file(path);
  return format == DataFormat::kBinary ? decode_dataset_binary(bytes)
                                       : decode_dataset_csv(bytes, csv_partition);
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path,
                  DataFormat format) {
  const std::string bytes = format == DataFormat::kBinary
                                ? encode_dataset_binary(dataset)
                                : encode_dataset_csv(dataset);
  write_file(path, bytes);
}

std::string encode_model(const OpenMaxModel& model) {
  const std::size_t stride = model.n_classes * model.n_channels;
  ByteWriter w;
  w.raw(kModelMagic, 4);
  w.u32(kModelVersion);
  w.u32(checked_u32(model.n_classes, "class count"));
  w.u32(checked_u32(model.n_channels, "channel count"));
  w.u8(static_cast<std::uint8_t>(model.distance.metric));
  w.f64(model.distance.eucos_weight);
  w.u32(checked_u32(model.eta, "tail size"));
  w.u32(checked_u32(model.class_models.size(), "model count"));
  for (const ClassModel& cm : model.class_models) {
    if (cm.mav.size() != stride || cm.weibull.size() != model.n_channels) {
      throw DimensionError("class model " + std::to_string(cm.class_id) +
                           " does not match [C x N]");
    }
    w.i32(cm.class_id);
    w.u64(cm.n_support);
    for (double v : cm.mav) w.f64(v);
    for (const WeibullModel& rho : cm.weibull) {
      w.f64(rho.tau);
      w.f64(rho.kappa);
      w.f64(rho.lambda);
    }
  }
  return w.take();
}

OpenMaxModel decode_model(std::string_view bytes) {
  ByteReader r(bytes);
  constexpr std::size_t kHeader = 4 + 4 * 3 + 1 + 8 + 4 * 2;
  if (!r.has(kHeader)) throw FormatError("truncated model header");
  if (std::memcmp(r.raw(4).data(), kModelMagic, 4) != 0) {
    throw FormatError("bad magic, expected OMAX");
  }
  const std::uint32_t version = r.u32();
  if (version != kModelVersion) {
    throw FormatError("unsupported model version " + std::to_string(version));
  }
  OpenMaxModel m;
  m.n_classes = r.u32();
  m.n_channels = r.u32();
  const std::uint8_t metric = r.u8();
  if (metric > static_cast<std::uint8_t>(DistanceMetric::kEucos)) {
    throw FormatError("unknown metric tag " + std::to_string(metric));
  }
  m.distance.metric = static_cast<DistanceMetric>(metric);
  m.distance.eucos_weight = r.f64();
  m.eta = r.u32();
  const std::uint32_t count = r.u32();
  if (m.n_classes < 2 || m.n_channels < 1 || count > m.n_classes) {
    throw FormatError("inconsistent model header");
  }

  const std::size_t stride = m.n_classes * m.n_channels;
  const std::size_t record = 4 + 8 + 8 * stride + 24 * m.n_channels;
  if (r.remaining() != record * count) {
    throw FormatError("model payload is " + std::to_string(r.remaining()) +
                      " bytes, expected " + std::to_string(record * count));
  }
  m.class_models.resize(count);
  int previous = -1;
  for (ClassModel& cm : m.class_models) {
    cm.class_id = r.i32();
    if (cm.class_id <= previous || cm.class_id >= static_cast<int>(m.n_classes)) {
      throw FormatError("class ids must be increasing and within [0, N)");
    }
    previous = cm.class_id;
    cm.n_support = r.u64();
    cm.mav.resize(stride);
    for (double& v : cm.mav) v = r.f64();
    cm.weibull.resize(m.n_channels);
    for (WeibullModel& rho : cm.weibull) {
      rho.tau = r.f64();
      rho.kappa = r.f64();
      rho.lambda = r.f64();
      if (!rho.valid()) throw FormatError("invalid Weibull parameters");
    }
  }
  return m;
}

void save_model(const OpenMaxModel& model, const std::filesystem::path& path) {
  write_file(path, encode_model(model));
}

OpenMaxModel load_model(const std::filesystem::path& path) {
  return decode_model(read_file(path));
}

}  // namespace openmax
