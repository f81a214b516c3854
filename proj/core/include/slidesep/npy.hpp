// Copyright 2026 The slidesep Authors
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

// NPY v1.0 container.
//
//   bytes 0-5   "\x93NUMPY"
//   bytes 6-7   version 1, 0
//   bytes 8-9   header length HLEN, little-endian uint16
//   HLEN bytes  Python dict literal, e.g.
//               {'descr': '<f4', 'fortran_order': False, 'shape': (2, 3), }
//               space padded and newline terminated so that the payload
//               starts at a multiple of 64 bytes
//   payload     C-order little-endian elements
//
// Supported element types: |u1 (also |b1 on read), <u2, <u4, <f4, <f8.
// Big-endian descriptors and Fortran order are rejected.

#ifndef SLIDESEP_NPY_HPP_
#define SLIDESEP_NPY_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "slidesep/raster.hpp"

namespace slidesep {

enum class NpyDtype { kBool, kUint8, kUint16, kUint32, kFloat32, kFloat64 };

const char* npy_descr(NpyDtype dtype);
std::size_t npy_itemsize(NpyDtype dtype);

struct NpyArray {
  NpyDtype dtype = NpyDtype::kFloat32;
  std::vector<std::size_t> shape;
  std::vector<std::uint8_t> data;  // raw little-endian payload

  std::size_t element_count() const;
};

NpyArray parse_npy(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> serialize_npy(const NpyArray& array);

NpyArray read_npy(const std::filesystem::path& path);
void write_npy(const std::filesystem::path& path, const NpyArray& array);

// Element conversion between the payload and doubles.
std::vector<double> decode_values(const NpyArray& array);
std::vector<std::uint8_t> encode_values(std::span<const double> values, NpyDtype dtype);

// 2-D helpers. Scalar maps are written as <f4 and read from <f4 or <f8.
ScalarMap read_scalar_map(const std::filesystem::path& path);
void write_scalar_map(const std::filesystem::path& path, const ScalarMap& map);

// Masks are |u1 holding 0 or 1.
BinaryMask read_mask(const std::filesystem::path& path);
void write_mask(const std::filesystem::path& path, const BinaryMask& mask);

// Label maps are written as <u4 and read from any unsigned type.
LabelMap read_labels(const std::filesystem::path& path);
void write_labels(const std::filesystem::path& path, const LabelMap& labels);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace slidesep

#endif  // SLIDESEP_NPY_HPP_
