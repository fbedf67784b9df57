#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace roadseg {

/// Pixel label for road segmentation masks. The numeric values double as
/// the default on-disk raster encoding.
enum class Label : std::uint8_t {
  Other = 0,
  Road = 1,
  Void = 255,
};

/// 8-bit RGB raster, row-major, origin top-left, x right / y down.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // 3 * width * height, interleaved RGB

  Image() = default;
  Image(int w, int h) : width(w), height(h), pixels(3u * w * h, 0) {
    if (w < 1 || h < 1) throw std::invalid_argument("Image: dimensions must be >= 1");
  }

  std::size_t index(int x, int y) const { return 3u * (static_cast<std::size_t>(y) * width + x); }
  std::uint8_t& at(int x, int y, int c) { return pixels[index(x, y) + c]; }
  std::uint8_t at(int x, int y, int c) const { return pixels[index(x, y) + c]; }

  bool operator==(const Image&) const = default;
};

/// Per-pixel labels over {Road, Other, Void}, same dimensions as the source image.
struct SegmentationMask {
  int width = 0;
  int height = 0;
  std::vector<Label> labels;  // row-major

  SegmentationMask() = default;
  SegmentationMask(int w, int h, Label fill = Label::Other)
      : width(w), height(h), labels(static_cast<std::size_t>(w) * h, fill) {
    if (w < 1 || h < 1) throw std::invalid_argument("SegmentationMask: dimensions must be >= 1");
  }

  Label& at(int x, int y) { return labels[static_cast<std::size_t>(y) * width + x]; }
  Label at(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }

  bool operator==(const SegmentationMask&) const = default;
};

/// Stack of K real-valued activation maps on an fh x fw grid,
/// channel-major then row-major. Values are stored as 32-bit floats to
/// match the on-disk FMAP format.
struct FeatureMaps {
  int channels = 0;
  int fh = 0;
  int fw = 0;
  std::vector<float> values;  // channels * fh * fw

  FeatureMaps() = default;
  FeatureMaps(int k, int h, int w)
      : channels(k), fh(h), fw(w), values(static_cast<std::size_t>(k) * h * w, 0.f) {
    if (k < 1 || h < 1 || w < 1) throw std::invalid_argument("FeatureMaps: dimensions must be >= 1");
  }

  std::size_t plane() const { return static_cast<std::size_t>(fh) * fw; }
  float& at(int k, int x, int y) { return values[k * plane() + static_cast<std::size_t>(y) * fw + x]; }
  float at(int k, int x, int y) const { return values[k * plane() + static_cast<std::size_t>(y) * fw + x]; }

  bool operator==(const FeatureMaps&) const = default;
};

/// Linear classification head over pooled features: a C x K weight matrix
/// plus a per-class bias. The bias participates in classification scores
/// only, never in spatial saliency.
struct ClassWeights {
  int classes = 0;
  int channels = 0;
  std::vector<double> w;     // classes * channels, row-major by class
  std::vector<double> bias;  // classes

  ClassWeights() = default;
  ClassWeights(int c, int k)
      : classes(c), channels(k), w(static_cast<std::size_t>(c) * k, 0.0), bias(c, 0.0) {
    if (c < 2) throw std::invalid_argument("ClassWeights: need at least 2 classes");
    if (k < 1) throw std::invalid_argument("ClassWeights: need at least 1 channel");
  }

  double& at(int c, int k) { return w[static_cast<std::size_t>(c) * channels + k]; }
  double at(int c, int k) const { return w[static_cast<std::size_t>(c) * channels + k]; }
};

/// Spatial mean of each feature channel.
struct PooledFeatures {
  std::vector<double> f;  // one entry per channel
  int channels() const { return static_cast<int>(f.size()); }
};

/// Per-class classification scores.
struct ClassScores {
  std::vector<double> s;
  int classes() const { return static_cast<int>(s.size()); }
};

/// Real-valued saliency raster. Raw maps carry arbitrary finite values;
/// normalized maps lie in [0, 1].
struct SaliencyMap {
  int width = 0;
  int height = 0;
  std::vector<double> values;  // row-major

  SaliencyMap() = default;
  SaliencyMap(int w, int h)
      : width(w), height(h), values(static_cast<std::size_t>(w) * h, 0.0) {
    if (w < 1 || h < 1) throw std::invalid_argument("SaliencyMap: dimensions must be >= 1");
  }

  double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

/// Dense partition of an image into connected components. Component ids
/// are contiguous in [0, n_components) and numbered in first-occurrence
/// scan order (row-major).
struct SuperpixelMap {
  int width = 0;
  int height = 0;
  std::vector<std::int32_t> component_id;  // row-major
  std::vector<std::int64_t> sizes;         // per-component pixel counts

  SuperpixelMap() = default;
  SuperpixelMap(int w, int h)
      : width(w), height(h), component_id(static_cast<std::size_t>(w) * h, 0) {
    if (w < 1 || h < 1) throw std::invalid_argument("SuperpixelMap: dimensions must be >= 1");
  }

  std::int32_t at(int x, int y) const { return component_id[static_cast<std::size_t>(y) * width + x]; }
  std::int32_t& at(int x, int y) { return component_id[static_cast<std::size_t>(y) * width + x]; }
  int n_components() const { return static_cast<int>(sizes.size()); }

  bool operator==(const SuperpixelMap&) const = default;
};

/// Binary pixel set, used for salient areas.
struct BinaryMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> on;  // row-major, 0 or 1

  BinaryMask() = default;
  BinaryMask(int w, int h)
      : width(w), height(h), on(static_cast<std::size_t>(w) * h, 0) {
    if (w < 1 || h < 1) throw std::invalid_argument("BinaryMask: dimensions must be >= 1");
  }

  bool at(int x, int y) const { return on[static_cast<std::size_t>(y) * width + x] != 0; }
  void set(int x, int y, bool v) { on[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }
  std::int64_t count() const {
    std::int64_t n = 0;
    for (auto v : on) n += v;
    return n;
  }
};

}  // namespace roadseg
