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

// Forward-only reference of the segmentation network: one U-Net encoder
// shared by three decoders (tissue, pen, distance). The first resampling step
// uses top_factor and every deeper one deep_factor, so an input must be a
// multiple of top_factor * deep_factor^(levels - 1) pixels on each side.
//
// Layers per level: two 3x3 convolutions with ReLU. Downsampling is max
// pooling, upsampling is nearest neighbour followed by a 3x3 convolution,
// and decoder levels concatenate the encoder skip before their conv block.
// Tissue and pen heads end in a sigmoid; the distance head is linear and is
// multiplied by the tissue probability.

#ifndef SLIDESEP_NETWORK_HPP_
#define SLIDESEP_NETWORK_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "slidesep/raster.hpp"

namespace slidesep {

struct NetworkConfig {
  int levels = 5;  // number of down- and upsampling steps
  int top_factor = 2;
  int deep_factor = 4;
  int base_channels = 8;
  int input_channels = 3;

  void Validate() const;
};

// top_factor * deep_factor^(levels - 1); 512 for the default config.
long long total_downsampling(const NetworkConfig& cfg);

// Channel-major (C, H, W) tensor.
struct FeatureTensor {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<double> values;

  FeatureTensor() = default;
  FeatureTensor(int c, int h, int w, double fill = 0.0)
      : channels(c), height(h), width(w),
        values(static_cast<std::size_t>(c) * h * w, fill) {}

  double& at(int c, int y, int x) {
    return values[(static_cast<std::size_t>(c) * height + y) * width + x];
  }
  double at(int c, int y, int x) const {
    return values[(static_cast<std::size_t>(c) * height + y) * width + x];
  }
  double* plane(int c) { return values.data() + static_cast<std::size_t>(c) * height * width; }
  const double* plane(int c) const {
    return values.data() + static_cast<std::size_t>(c) * height * width;
  }
};

// Named parameter array; shape is (out, in, kh, kw) for weights, (out) for
// biases.
struct Parameter {
  std::vector<std::size_t> shape;
  std::vector<double> values;
};

struct ForwardOutput {
  PredictionBundle bundle;
  ScalarMap raw_h;  // distance decoder output before tissue scaling
  ScalarMap raw_v;
};

class UNet {
 public:
  // Weights drawn from slidesep::Rng(seed) with He-normal scaling.
  UNet(const NetworkConfig& cfg, std::uint64_t seed);

  const NetworkConfig& config() const { return cfg_; }
  const std::map<std::string, Parameter>& parameters() const { return params_; }

  // Throws ShapeError unless both sides are multiples of total_downsampling.
  ForwardOutput Forward(const FeatureTensor& image) const;

  // Every parameter as <dir>/<name>.npy (float32). Loading requires exactly
  // matching names and shapes; missing files are a FormatError.
  void SaveWeights(const std::filesystem::path& dir) const;
  void LoadWeights(const std::filesystem::path& dir);

 private:
  struct Conv {
    std::string weight;
    std::string bias;
    int in = 0;
    int out = 0;
    int kernel = 3;
  };

  Conv AddConv(const std::string& name, int in, int out, int kernel, double gain,
               std::uint64_t seed);
  FeatureTensor Apply(const Conv& conv, const FeatureTensor& x, bool relu) const;
  FeatureTensor Decode(const std::string& name, const std::vector<FeatureTensor>& skips) const;

  NetworkConfig cfg_;
  std::vector<int> channels_;  // per level, 0..levels
  std::vector<int> factors_;   // per resampling step, 0..levels-1
  std::map<std::string, Parameter> params_;
  std::map<std::string, Conv> convs_;
};

// Convenience wrapper: UNet(cfg, seed).Forward(image).bundle.
PredictionBundle forward(const FeatureTensor& image, const NetworkConfig& cfg,
                         std::uint64_t seed);

}  // namespace slidesep

#endif  // SLIDESEP_NETWORK_HPP_
