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

#include "slidesep/npy.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <optional>

namespace slidesep {
namespace {

constexpr std::uint8_t kMagic[] = {0x93, 'N', 'U', 'M', 'P', 'Y'};
constexpr std::size_t kPrefix = 10;  // magic, version, header length
constexpr std::size_t kAlign = 64;

struct DtypeInfo {
  NpyDtype dtype;
  const char* descr;
  std::size_t size;
};

constexpr DtypeInfo kDtypes[] = {
    {NpyDtype::kBool, "|b1", 1},    {NpyDtype::kUint8, "|u1", 1},
    {NpyDtype::kUint16, "<u2", 2},  {NpyDtype::kUint32, "<u4", 4},
    {NpyDtype::kFloat32, "<f4", 4}, {NpyDtype::kFloat64, "<f8", 8},
};

const DtypeInfo& Info(NpyDtype d) {
  for (const DtypeInfo& i : kDtypes)
    if (i.dtype == d) return i;
  throw std::logic_error("unknown dtype");
}

std::uint64_t LoadLE(const std::uint8_t* p, std::size_t n) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

void StoreLE(std::uint8_t* p, std::uint64_t v, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

// Cursor over the header dict; offsets reported relative to the file start.
class HeaderParser {
 public:
  explicit HeaderParser(std::string_view text) : text_(text) {}

  NpyArray Parse() {
    NpyArray out;
    std::optional<bool> fortran;
    bool have_descr = false, have_shape = false;
    SkipSpace();
    Expect('{');
    while (true) {
      SkipSpace();
      if (Peek() == '}') {
        ++pos_;
        break;
      }
      const std::size_t key_pos = pos_;
      const std::string key = ParseString();
      SkipSpace();
      Expect(':');
      SkipSpace();
      if (key == "descr") {
        const std::size_t at = pos_;
        const std::string descr = ParseString();
        bool found = false;
        for (const DtypeInfo& i : kDtypes) {
          if (descr == i.descr) {
            out.dtype = i.dtype;
            found = true;
          }
        }
        if (!found) Fail("unsupported dtype '" + descr + "'", at);
        have_descr = true;
      } else if (key == "fortran_order") {
        fortran = ParseBool();
      } else if (key == "shape") {
        out.shape = ParseShape();
        have_shape = true;
      } else {
        Fail("unexpected header key '" + key + "'", key_pos);
      }
      SkipSpace();
      if (Peek() == ',') ++pos_;
    }
    if (!have_descr || !fortran.has_value() || !have_shape) {
      Fail("header is missing descr, fortran_order or shape", 0);
    }
    if (*fortran) Fail("fortran_order=True is not supported", 0);
    return out;
  }

 private:
  [[noreturn]] void Fail(const std::string& what, std::size_t at) const {
    throw FormatError("npy header: " + what, kPrefix + at);
  }

  char Peek() const {
    if (pos_ >= text_.size()) Fail("unexpected end of header", pos_);
    return text_[pos_];
  }

  void SkipSpace() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void Expect(char c) {
    if (Peek() != c) Fail(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  std::string ParseString() {
    const char quote = Peek();
    if (quote != '\'' && quote != '"') Fail("expected a quoted string", pos_);
    const std::size_t start = ++pos_;
    while (Peek() != quote) ++pos_;
    return std::string(text_.substr(start, pos_++ - start));
  }

  bool ParseBool() {
    if (text_.substr(pos_, 4) == "True") {
      pos_ += 4;
      return true;
    }
    if (text_.substr(pos_, 5) == "False") {
      pos_ += 5;
      return false;
    }
    Fail("expected True or False", pos_);
  }

  std::vector<std::size_t> ParseShape() {
    std::vector<std::size_t> shape;
    Expect('(');
    while (true) {
      SkipSpace();
      if (Peek() == ')') {
        ++pos_;
        return shape;
      }
      if (!std::isdigit(static_cast<unsigned char>(Peek()))) Fail("bad shape entry", pos_);
      std::size_t v = 0;
      while (std::isdigit(static_cast<unsigned char>(Peek()))) {
        v = v * 10 + static_cast<std::size_t>(text_[pos_++] - '0');
        if (v > (std::size_t{1} << 40)) Fail("shape entry too large", pos_);
      }
      shape.push_back(v);
      SkipSpace();
      if (Peek() == ',') ++pos_;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string ShapeLiteral(const std::vector<std::size_t>& shape) {
  std::string s = "(";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(shape[i]);
  }
  if (shape.size() == 1) s += ",";
  return s + ")";
}

void Require2D(const NpyArray& a, const std::filesystem::path& path) {
  if (a.shape.size() != 2) {
    throw FormatError(path.string() + ": expected a 2-D array, got rank " +
                          std::to_string(a.shape.size()),
                      8);
  }
  if (a.shape[0] == 0 || a.shape[1] == 0 ||
      a.shape[0] > static_cast<std::size_t>(std::numeric_limits<int>::max()) ||
      a.shape[1] > static_cast<std::size_t>(std::numeric_limits<int>::max())) {
    throw FormatError(path.string() + ": unsupported 2-D shape", 8);
  }
}

[[noreturn]] void DtypeMismatch(const std::filesystem::path& path, const NpyArray& a,
                                const char* wanted) {
  throw FormatError(path.string() + ": dtype " + npy_descr(a.dtype) + " where " + wanted +
                        " was expected",
                    8);
}

}  // namespace

const char* npy_descr(NpyDtype dtype) { return Info(dtype).descr; }
std::size_t npy_itemsize(NpyDtype dtype) { return Info(dtype).size; }

std::size_t NpyArray::element_count() const {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

NpyArray parse_npy(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kPrefix) throw FormatError("npy: file shorter than the fixed prefix", bytes.size());
  for (std::size_t i = 0; i < sizeof(kMagic); ++i) {
    if (bytes[i] != kMagic[i]) throw FormatError("npy: bad magic string", i);
  }
  if (bytes[6] != 1 || bytes[7] != 0) {
    throw FormatError("npy: only format version 1.0 is supported, got " +
                          std::to_string(bytes[6]) + "." + std::to_string(bytes[7]),
                      6);
  }
  const std::size_t header_len = LoadLE(bytes.data() + 8, 2);
  if (bytes.size() < kPrefix + header_len) {
    throw FormatError("npy: header extends past end of file", bytes.size());
  }
  const std::string_view header(reinterpret_cast<const char*>(bytes.data() + kPrefix),
                                header_len);
  NpyArray out = HeaderParser(header).Parse();
  const std::size_t payload = out.element_count() * npy_itemsize(out.dtype);
  const std::size_t start = kPrefix + header_len;
  if (bytes.size() - start != payload) {
    throw FormatError("npy: payload has " + std::to_string(bytes.size() - start) +
                          " bytes, shape needs " + std::to_string(payload),
                      start);
  }
  out.data.assign(bytes.begin() + static_cast<std::ptrdiff_t>(start), bytes.end());
  return out;
}

std::vector<std::uint8_t> serialize_npy(const NpyArray& array) {
  if (array.data.size() != array.element_count() * npy_itemsize(array.dtype)) {
    throw std::invalid_argument("npy: payload size does not match shape");
  }
  std::string header = std::string("{'descr': '") + npy_descr(array.dtype) +
                       "', 'fortran_order': False, 'shape': " + ShapeLiteral(array.shape) +
                       ", }";
  const std::size_t unpadded = kPrefix + header.size() + 1;
  header.append((kAlign - unpadded % kAlign) % kAlign, ' ');
  header.push_back('\n');
  if (header.size() > 0xFFFF) throw std::invalid_argument("npy: header too long for v1.0");

  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  out.push_back(1);
  out.push_back(0);
  out.push_back(static_cast<std::uint8_t>(header.size() & 0xFF));
  out.push_back(static_cast<std::uint8_t>(header.size() >> 8));
  out.insert(out.end(), header.begin(), header.end());
  out.insert(out.end(), array.data.begin(), array.data.end());
  return out;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

NpyArray read_npy(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = read_file_bytes(path);
  try {
    return parse_npy(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what(), e.offset());
  }
}

void write_npy(const std::filesystem::path& path, const NpyArray& array) {
  write_file_bytes(path, serialize_npy(array));
}

std::vector<double> decode_values(const NpyArray& a) {
  const std::size_t n = a.element_count();
  const std::size_t size = npy_itemsize(a.dtype);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t raw = LoadLE(a.data.data() + i * size, size);
    switch (a.dtype) {
      case NpyDtype::kFloat32:
        out[i] = std::bit_cast<float>(static_cast<std::uint32_t>(raw));
        break;
      case NpyDtype::kFloat64:
        out[i] = std::bit_cast<double>(raw);
        break;
      default:
        out[i] = static_cast<double>(raw);
    }
  }
  return out;
}

std::vector<std::uint8_t> encode_values(std::span<const double> values, NpyDtype dtype) {
  const std::size_t size = npy_itemsize(dtype);
  std::vector<std::uint8_t> out(values.size() * size);
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::uint64_t raw = 0;
    switch (dtype) {
      case NpyDtype::kFloat32:
        raw = std::bit_cast<std::uint32_t>(static_cast<float>(values[i]));
        break;
      case NpyDtype::kFloat64:
        raw = std::bit_cast<std::uint64_t>(values[i]);
        break;
      default:
        raw = static_cast<std::uint64_t>(values[i]);
    }
    StoreLE(out.data() + i * size, raw, size);
  }
  return out;
}

ScalarMap read_scalar_map(const std::filesystem::path& path) {
  const NpyArray a = read_npy(path);
  Require2D(a, path);
  if (a.dtype != NpyDtype::kFloat32 && a.dtype != NpyDtype::kFloat64) {
    DtypeMismatch(path, a, "<f4 or <f8");
  }
  std::vector<double> values = decode_values(a);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw FormatError(path.string() + ": non-finite value", i * npy_itemsize(a.dtype));
    }
  }
  return ScalarMap(static_cast<int>(a.shape[0]), static_cast<int>(a.shape[1]),
                   std::move(values));
}

void write_scalar_map(const std::filesystem::path& path, const ScalarMap& map) {
  NpyArray a{NpyDtype::kFloat32,
             {static_cast<std::size_t>(map.height()), static_cast<std::size_t>(map.width())},
             encode_values(map.values(), NpyDtype::kFloat32)};
  write_npy(path, a);
}

BinaryMask read_mask(const std::filesystem::path& path) {
  const NpyArray a = read_npy(path);
  Require2D(a, path);
  if (a.dtype != NpyDtype::kUint8 && a.dtype != NpyDtype::kBool) DtypeMismatch(path, a, "|u1");
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    if (a.data[i] > 1) throw FormatError(path.string() + ": mask value other than 0/1", i);
  }
  return BinaryMask(static_cast<int>(a.shape[0]), static_cast<int>(a.shape[1]), a.data);
}

void write_mask(const std::filesystem::path& path, const BinaryMask& mask) {
  NpyArray a{NpyDtype::kUint8,
             {static_cast<std::size_t>(mask.height()), static_cast<std::size_t>(mask.width())},
             {}};
  a.data.reserve(mask.size());
  for (std::uint8_t b : mask.values()) a.data.push_back(b ? 1 : 0);
  write_npy(path, a);
}

LabelMap read_labels(const std::filesystem::path& path) {
  const NpyArray a = read_npy(path);
  Require2D(a, path);
  if (a.dtype != NpyDtype::kUint8 && a.dtype != NpyDtype::kUint16 &&
      a.dtype != NpyDtype::kUint32) {
    DtypeMismatch(path, a, "an unsigned integer type");
  }
  const std::size_t size = npy_itemsize(a.dtype);
  std::vector<std::uint32_t> values(a.element_count());
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = static_cast<std::uint32_t>(LoadLE(a.data.data() + i * size, size));
  }
  return LabelMap(static_cast<int>(a.shape[0]), static_cast<int>(a.shape[1]),
                  std::move(values));
}

void write_labels(const std::filesystem::path& path, const LabelMap& labels) {
  NpyArray a{NpyDtype::kUint32,
             {static_cast<std::size_t>(labels.height()),
              static_cast<std::size_t>(labels.width())},
             std::vector<std::uint8_t>(labels.size() * 4)};
  for (std::size_t i = 0; i < labels.size(); ++i) StoreLE(a.data.data() + i * 4, labels[i], 4);
  write_npy(path, a);
}

}  // namespace slidesep
