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

#include "slidesep/network.hpp"

#include <algorithm>
#include <cmath>

#include "slidesep/npy.hpp"
#include "slidesep/rng.hpp"

namespace slidesep {
namespace {

const char* const kDecoders[] = {"tissue", "pen", "dist"};

FeatureTensor MaxPool(const FeatureTensor& x, int f) {
  FeatureTensor out(x.channels, x.height / f, x.width / f);
  for (int c = 0; c < x.channels; ++c) {
    for (int y = 0; y < out.height; ++y) {
      for (int xx = 0; xx < out.width; ++xx) {
        double m = x.at(c, y * f, xx * f);
        for (int dy = 0; dy < f; ++dy)
          for (int dx = 0; dx < f; ++dx) m = std::max(m, x.at(c, y * f + dy, xx * f + dx));
        out.at(c, y, xx) = m;
      }
    }
  }
  return out;
}

FeatureTensor UpsampleNearest(const FeatureTensor& x, int f) {
  FeatureTensor out(x.channels, x.height * f, x.width * f);
  for (int c = 0; c < out.channels; ++c)
    for (int y = 0; y < out.height; ++y)
      for (int xx = 0; xx < out.width; ++xx) out.at(c, y, xx) = x.at(c, y / f, xx / f);
  return out;
}

FeatureTensor Concat(const FeatureTensor& a, const FeatureTensor& b) {
  FeatureTensor out(a.channels + b.channels, a.height, a.width);
  std::copy(a.values.begin(), a.values.end(), out.values.begin());
  std::copy(b.values.begin(), b.values.end(),
            out.values.begin() + static_cast<std::ptrdiff_t>(a.values.size()));
  return out;
}

double Sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

}  // namespace

void NetworkConfig::Validate() const {
  if (levels < 2) throw PreconditionError("network needs levels >= 2");
  if (top_factor < 2 || deep_factor < 2) throw PreconditionError("resampling factors must be >= 2");
  if (base_channels < 1 || input_channels < 1) throw PreconditionError("channel counts must be >= 1");
}

long long total_downsampling(const NetworkConfig& cfg) {
  cfg.Validate();
  long long total = cfg.top_factor;
  for (int l = 1; l < cfg.levels; ++l) total *= cfg.deep_factor;
  return total;
}

UNet::Conv UNet::AddConv(const std::string& name, int in, int out, int kernel, double gain,
                         std::uint64_t seed) {
  Conv conv{name + ".weight", name + ".bias", in, out, kernel};
  Rng rng(seed, params_.size());
  Parameter w{{static_cast<std::size_t>(out), static_cast<std::size_t>(in),
               static_cast<std::size_t>(kernel), static_cast<std::size_t>(kernel)},
              {}};
  const double stddev = gain * std::sqrt(2.0 / (in * kernel * kernel));
  w.values.resize(static_cast<std::size_t>(out) * in * kernel * kernel);
  for (double& v : w.values) v = rng.normal(0.0, stddev);
  params_[conv.weight] = std::move(w);
  params_[conv.bias] = Parameter{{static_cast<std::size_t>(out)},
                                 std::vector<double>(static_cast<std::size_t>(out), 0.0)};
  convs_[name] = conv;
  return conv;
}

UNet::UNet(const NetworkConfig& cfg, std::uint64_t seed) : cfg_(cfg) {
  cfg_.Validate();
  for (int l = 0; l <= cfg_.levels; ++l) {
    channels_.push_back(cfg_.base_channels * (1 << std::min(l, 3)));
  }
  factors_.push_back(cfg_.top_factor);
  for (int l = 1; l < cfg_.levels; ++l) factors_.push_back(cfg_.deep_factor);

  int in = cfg_.input_channels;
  for (int l = 0; l <= cfg_.levels; ++l) {
    const std::string p = "encoder." + std::to_string(l);
    AddConv(p + ".conv_a", in, channels_[l], 3, 1.0, seed);
    AddConv(p + ".conv_b", channels_[l], channels_[l], 3, 1.0, seed);
    in = channels_[l];
  }
  for (const char* name : kDecoders) {
    const std::string d = name;
    for (int l = cfg_.levels - 1; l >= 0; --l) {
      const std::string p = d + "." + std::to_string(l);
      AddConv(p + ".up", channels_[l + 1], channels_[l], 3, 1.0, seed);
      AddConv(p + ".conv_a", 2 * channels_[l], channels_[l], 3, 1.0, seed);
      AddConv(p + ".conv_b", channels_[l], channels_[l], 3, 1.0, seed);
    }
    // Small head gain keeps initial sigmoid outputs away from saturation.
    AddConv(d + ".head", channels_[0], d == "dist" ? 2 : 1, 1, 0.25, seed);
  }
}

FeatureTensor UNet::Apply(const Conv& conv, const FeatureTensor& x, bool relu) const {
  const Parameter& w = params_.at(conv.weight);
  const Parameter& b = params_.at(conv.bias);
  const int h = x.height, wd = x.width, k = conv.kernel, r = k / 2;
  FeatureTensor out(conv.out, h, wd);
  // Row at a time so the accumulator stays in L1.
  for (int o = 0; o < conv.out; ++o) {
    double* dst = out.plane(o);
    const double* wo = w.values.data() + static_cast<std::size_t>(o) * conv.in * k * k;
    for (int y = 0; y < h; ++y) {
      double* drow = dst + static_cast<std::size_t>(y) * wd;
      std::fill(drow, drow + wd, b.values[o]);
      for (int i = 0; i < conv.in; ++i) {
        const double* src = x.plane(i);
        for (int ky = 0; ky < k; ++ky) {
          const int sy = y + ky - r;
          if (sy < 0 || sy >= h) continue;
          const double* srow = src + static_cast<std::size_t>(sy) * wd;
          const double* wk = wo + (static_cast<std::size_t>(i) * k + ky) * k;
          if (k == 1) {
            const double w0 = wk[0];
            for (int xx = 0; xx < wd; ++xx) drow[xx] += w0 * srow[xx];
            continue;
          }
          // k == 3: all taps in one pass, edges done by hand.
          const double wl = wk[0], wc = wk[1], wr = wk[2];
          if (wd == 1) {
            drow[0] += wc * srow[0];
            continue;
          }
          drow[0] += wc * srow[0] + wr * srow[1];
          for (int xx = 1; xx < wd - 1; ++xx) {
            drow[xx] += wl * srow[xx - 1] + wc * srow[xx] + wr * srow[xx + 1];
          }
          drow[wd - 1] += wl * srow[wd - 2] + wc * srow[wd - 1];
        }
      }
      if (relu) {
        for (int xx = 0; xx < wd; ++xx) drow[xx] = std::max(drow[xx], 0.0);
      }
    }
  }
  return out;
}

FeatureTensor UNet::Decode(const std::string& name,
                           const std::vector<FeatureTensor>& skips) const {
  FeatureTensor x = skips[cfg_.levels];
  for (int l = cfg_.levels - 1; l >= 0; --l) {
    const std::string p = name + "." + std::to_string(l);
    x = Apply(convs_.at(p + ".up"), UpsampleNearest(x, factors_[l]), true);
    x = Concat(x, skips[l]);
    x = Apply(convs_.at(p + ".conv_a"), x, true);
    x = Apply(convs_.at(p + ".conv_b"), x, true);
  }
  return Apply(convs_.at(name + ".head"), x, false);
}

ForwardOutput UNet::Forward(const FeatureTensor& image) const {
  const long long multiple = total_downsampling(cfg_);
  if (image.channels != cfg_.input_channels) {
    throw ShapeError("network expects " + std::to_string(cfg_.input_channels) +
                     " input channels, got " + std::to_string(image.channels));
  }
  if (image.height < 1 || image.width < 1 || image.height % multiple != 0 ||
      image.width % multiple != 0) {
    throw ShapeError("input " + std::to_string(image.height) + "x" +
                     std::to_string(image.width) + " is not a multiple of " +
                     std::to_string(multiple) + "; pad it with pad_to_multiple(map, " +
                     std::to_string(multiple) + ") first");
  }
  std::vector<FeatureTensor> skips;
  FeatureTensor x = image;
  for (int l = 0; l <= cfg_.levels; ++l) {
    if (l > 0) x = MaxPool(x, factors_[l - 1]);
    const std::string p = "encoder." + std::to_string(l);
    x = Apply(convs_.at(p + ".conv_a"), x, true);
    x = Apply(convs_.at(p + ".conv_b"), x, true);
    skips.push_back(x);
  }

  const FeatureTensor tissue = Decode("tissue", skips);
  const FeatureTensor pen = Decode("pen", skips);
  const FeatureTensor dist = Decode("dist", skips);

  const int h = image.height, w = image.width;
  ForwardOutput out{{ScalarMap(h, w), ScalarMap(h, w), ScalarMap(h, w), ScalarMap(h, w)},
                    ScalarMap(h, w),
                    ScalarMap(h, w)};
  for (int y = 0; y < h; ++y) {
    for (int xx = 0; xx < w; ++xx) {
      const double t = Sigmoid(tissue.at(0, y, xx));
      out.bundle.tissue_prob(xx, y) = t;
      out.bundle.pen_prob(xx, y) = Sigmoid(pen.at(0, y, xx));
      out.raw_h(xx, y) = dist.at(0, y, xx);
      out.raw_v(xx, y) = dist.at(1, y, xx);
      out.bundle.h_dist(xx, y) = dist.at(0, y, xx) * t;
      out.bundle.v_dist(xx, y) = dist.at(1, y, xx) * t;
    }
  }
  return out;
}

void UNet::SaveWeights(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  for (const auto& [name, p] : params_) {
    NpyArray a;
    a.dtype = NpyDtype::kFloat32;
    a.shape = p.shape;
    a.data = encode_values(p.values, NpyDtype::kFloat32);
    write_npy(dir / (name + ".npy"), a);
  }
}

void UNet::LoadWeights(const std::filesystem::path& dir) {
  std::map<std::string, Parameter> loaded;
  for (const auto& [name, p] : params_) {
    const NpyArray a = read_npy(dir / (name + ".npy"));
    if (a.shape != p.shape) {
      throw FormatError("parameter " + name + " has the wrong shape", 0);
    }
    loaded[name] = Parameter{p.shape, decode_values(a)};
  }
  params_ = std::move(loaded);
}

PredictionBundle forward(const FeatureTensor& image, const NetworkConfig& cfg,
                         std::uint64_t seed) {
  return UNet(cfg, seed).Forward(image).bundle;
}

}  // namespace slidesep
