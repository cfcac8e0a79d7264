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

#include <cstdint>
#include <filesystem>
#include <string_view>

#include "openmax/dataset.hpp"
#include "openmax/openmax.hpp"

namespace openmax {

// Binary dataset layout, all integers and floats little-endian:
//   "AVEC" | u32 version | u32 N | u32 C | u32 count | u8 partition
//   then per sample: i32 label | C*N float32 (channel-major)
inline constexpr char kDatasetMagic[4] = {'A', 'V', 'E', 'C'};
inline constexpr std::uint32_t kDatasetVersion = 1;
inline constexpr std::size_t kDatasetHeaderBytes = 4 + 4 * 4 + 1;

// Binary model layout, little-endian:
//   "OMAX" | u32 version | u32 N | u32 C | u8 metric | f64 eucos_weight
//   | u32 eta | u32 model count
//   then per class: i32 class_id | u64 n_support | C*N f64 mav
//   | C * (f64 tau, f64 kappa, f64 lambda)
inline constexpr char kModelMagic[4] = {'O', 'M', 'A', 'X'};
inline constexpr std::uint32_t kModelVersion = 1;

enum class DataFormat { kBinary, kCsv };

std::string_view to_string(DataFormat format);
DataFormat format_from_string(std::string_view name);
// ".csv" selects CSV, anything else binary.
DataFormat format_from_path(const std::filesystem::path& path);

// CSV files carry no partition tag; `csv_partition` supplies it.
Dataset load_dataset(const std::filesystem::path& path, DataFormat format,
                     Partition csv_partition = Partition::kTrain);
void save_dataset(const Dataset& dataset, const std::filesystem::path& path,
                  DataFormat format);

// In-memory codecs behind the file functions.
std::string encode_dataset_binary(const Dataset& dataset);
Dataset decode_dataset_binary(std::string_view bytes);
std::string encode_dataset_csv(const Dataset& dataset);
Dataset decode_dataset_csv(std::string_view text, Partition partition);

std::string encode_model(const OpenMaxModel& model);
OpenMaxModel decode_model(std::string_view bytes);

void save_model(const OpenMaxModel& model, const std::filesystem::path& path);
OpenMaxModel load_model(const std::filesystem::path& path);

}  // namespace openmax
