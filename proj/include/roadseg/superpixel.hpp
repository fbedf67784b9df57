#pragma once

#include <cstdint>
#include <vector>

#include "roadseg/types.hpp"

namespace roadseg {

/// Parameters for graph-based superpixel segmentation. `k` controls the
/// granularity: small k oversegments, large k undersegments.
struct SuperpixelConfig {
  double k = 500.0;     // granularity threshold
  double sigma = 0.8;   // pre-smoothing Gaussian std-dev
  int min_size = 20;    // minimum component pixel count

  void validate() const {
    if (!(k > 0.0)) throw std::invalid_argument("SuperpixelConfig: k must be > 0");
    if (sigma < 0.0) throw std::invalid_argument("SuperpixelConfig: sigma must be >= 0");
    if (min_size < 1) throw std::invalid_argument("SuperpixelConfig: min_size must be >= 1");
  }
};

/// Partitions the image into connected components of homogeneous
/// appearance. Fully deterministic for fixed inputs; `seed` is reserved
/// for future tie-breaking policies and currently unused.
SuperpixelMap segment(const Image& image, const SuperpixelConfig& cfg, std::uint32_t seed = 0);

struct ComponentStats {
  std::int32_t id = 0;
  std::int64_t size = 0;
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // inclusive bounding box
};

/// One entry per component, ordered by id.
std::vector<ComponentStats> component_stats(const SuperpixelMap& sp);

}  // namespace roadseg
