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

#include "slidesep/png.hpp"

#include <png.h>

#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace slidesep {
namespace {

struct RawImage {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  int bit_depth = 0;
  int color_type = 0;
  std::vector<std::uint8_t> bytes;  // rows as stored, 16-bit samples big-endian
  std::size_t row_bytes = 0;
};

// The two functions below hold only trivially destructible locals, so the
// longjmp that libpng uses for errors never skips a destructor.
bool WriteRaw(const char* path, const RawImage* img, char* err, std::size_t err_len) {
  std::FILE* fp = std::fopen(path, "wb");
  if (!fp) {
    std::snprintf(err, err_len, "cannot open for writing");
    return false;
  }
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, nullptr);
    std::fclose(fp);
    std::snprintf(err, err_len, "libpng allocation failed");
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    std::snprintf(err, err_len, "libpng write error");
    return false;
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, img->width, img->height, img->bit_depth, img->color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (std::uint32_t y = 0; y < img->height; ++y) {
    png_write_row(png, img->bytes.data() + y * img->row_bytes);
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  const bool ok = std::fclose(fp) == 0;
  if (!ok) std::snprintf(err, err_len, "close failed");
  return ok;
}

bool ReadRaw(const char* path, RawImage* img, char* err, std::size_t err_len) {
  std::FILE* fp = std::fopen(path, "rb");
  if (!fp) {
    std::snprintf(err, err_len, "cannot open");
    return false;
  }
  png_byte sig[8];
  if (std::fread(sig, 1, 8, fp) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    std::fclose(fp);
    std::snprintf(err, err_len, "not a PNG file");
    return false;
  }
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    std::fclose(fp);
    std::snprintf(err, err_len, "libpng allocation failed");
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    std::snprintf(err, err_len, "corrupt PNG data");
    return false;
  }
  png_init_io(png, fp);
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);
  img->width = png_get_image_width(png, info);
  img->height = png_get_image_height(png, info);
  img->bit_depth = png_get_bit_depth(png, info);
  img->color_type = png_get_color_type(png, info);
  if (img->color_type == PNG_COLOR_TYPE_GRAY && img->bit_depth < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
    img->bit_depth = 8;
  }
  png_read_update_info(png, info);
  img->row_bytes = png_get_rowbytes(png, info);
  img->bytes.resize(img->row_bytes * img->height);
  for (std::uint32_t y = 0; y < img->height; ++y) {
    png_read_row(png, img->bytes.data() + y * img->row_bytes, nullptr);
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  std::fclose(fp);
  return true;
}

void Write(const std::filesystem::path& path, const RawImage& img) {
  char err[128] = {0};
  if (!WriteRaw(path.string().c_str(), &img, err, sizeof(err))) {
    throw std::runtime_error(path.string() + ": " + err);
  }
}

RawImage ReadGray(const std::filesystem::path& path) {
  RawImage img;
  char err[128] = {0};
  if (!ReadRaw(path.string().c_str(), &img, err, sizeof(err))) {
    throw FormatError(path.string() + ": " + err, 0);
  }
  if (img.color_type != PNG_COLOR_TYPE_GRAY) {
    throw FormatError(path.string() + ": expected a grayscale PNG", 25);
  }
  if (img.width == 0 || img.height == 0) throw FormatError(path.string() + ": empty image", 16);
  return img;
}

std::uint16_t Sample(const RawImage& img, std::uint32_t x, std::uint32_t y) {
  const std::uint8_t* row = img.bytes.data() + y * img.row_bytes;
  if (img.bit_depth == 16) return static_cast<std::uint16_t>(row[2 * x] << 8 | row[2 * x + 1]);
  return row[x];
}

// Distinct saturated colours from the golden-ratio hue sequence.
void LabelColour(std::uint32_t label, std::uint8_t rgb[3]) {
  const double hue = std::fmod(label * 0.618033988749895, 1.0) * 6.0;
  const int sector = static_cast<int>(hue);
  const double f = hue - sector;
  const double v = 230.0, p = 60.0;
  const double q = v - (v - p) * f, t = p + (v - p) * f;
  double r = v, g = t, b = p;
  switch (sector) {
    case 1: r = q; g = v; b = p; break;
    case 2: r = p; g = v; b = t; break;
    case 3: r = p; g = q; b = v; break;
    case 4: r = t; g = p; b = v; break;
    case 5: r = v; g = p; b = q; break;
    default: break;
  }
  rgb[0] = static_cast<std::uint8_t>(r);
  rgb[1] = static_cast<std::uint8_t>(g);
  rgb[2] = static_cast<std::uint8_t>(b);
}

}  // namespace

void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask) {
  RawImage img{static_cast<std::uint32_t>(mask.width()),
               static_cast<std::uint32_t>(mask.height()), 8, PNG_COLOR_TYPE_GRAY, {},
               static_cast<std::size_t>(mask.width())};
  img.bytes.reserve(mask.size());
  for (std::uint8_t b : mask.values()) img.bytes.push_back(b ? 255 : 0);
  Write(path, img);
}

BinaryMask read_mask_png(const std::filesystem::path& path) {
  const RawImage img = ReadGray(path);
  BinaryMask mask(static_cast<int>(img.height), static_cast<int>(img.width), 0);
  for (std::uint32_t y = 0; y < img.height; ++y)
    for (std::uint32_t x = 0; x < img.width; ++x) mask(x, y) = Sample(img, x, y) != 0;
  return mask;
}

void write_labels_png(const std::filesystem::path& path, const LabelMap& labels) {
  RawImage img{static_cast<std::uint32_t>(labels.width()),
               static_cast<std::uint32_t>(labels.height()), 16, PNG_COLOR_TYPE_GRAY, {},
               static_cast<std::size_t>(labels.width()) * 2};
  img.bytes.reserve(labels.size() * 2);
  for (std::uint32_t l : labels.values()) {
    if (l > 0xFFFF) throw std::out_of_range("label exceeds 16-bit PNG range");
    img.bytes.push_back(static_cast<std::uint8_t>(l >> 8));
    img.bytes.push_back(static_cast<std::uint8_t>(l & 0xFF));
  }
  Write(path, img);
}

LabelMap read_labels_png(const std::filesystem::path& path) {
  const RawImage img = ReadGray(path);
  LabelMap labels(static_cast<int>(img.height), static_cast<int>(img.width), 0u);
  for (std::uint32_t y = 0; y < img.height; ++y)
    for (std::uint32_t x = 0; x < img.width; ++x) labels(x, y) = Sample(img, x, y);
  return labels;
}

void write_overlay_png(const std::filesystem::path& path, const Separation& sep) {
  const int h = sep.instances.height();
  const int w = sep.instances.width();
  RawImage img{static_cast<std::uint32_t>(w), static_cast<std::uint32_t>(h), 8,
               PNG_COLOR_TYPE_RGB, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h * 3, 0),
               static_cast<std::size_t>(w) * 3};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      std::uint8_t* px = img.bytes.data() + (static_cast<std::size_t>(y) * w + x) * 3;
      if (const std::uint32_t l = sep.instances(x, y)) LabelColour(l, px);
      if (sep.pen.same_shape(sep.instances) && sep.pen(x, y)) {
        px[0] = static_cast<std::uint8_t>((px[0] + 20) / 2);
        px[1] = static_cast<std::uint8_t>((px[1] + 60) / 2);
        px[2] = static_cast<std::uint8_t>((px[2] + 255) / 2);
      }
    }
  }
  const int dot = std::max(2, std::min(h, w) / 200);
  for (const Centroid& c : sep.centroids) {
    const int cx = static_cast<int>(std::lround(c.x));
    const int cy = static_cast<int>(std::lround(c.y));
    for (int y = cy - dot; y <= cy + dot; ++y) {
      for (int x = cx - dot; x <= cx + dot; ++x) {
        if (x < 0 || y < 0 || x >= w || y >= h) continue;
        if ((x - cx) * (x - cx) + (y - cy) * (y - cy) > dot * dot) continue;
        std::uint8_t* px = img.bytes.data() + (static_cast<std::size_t>(y) * w + x) * 3;
        px[0] = px[1] = px[2] = 255;
      }
    }
  }
  Write(path, img);
}

}  // namespace slidesep
