#pragma once

#include <cstdint>

#include "roadseg/superpixel.hpp"
#include "roadseg/types.hpp"

namespace roadseg {

/// Which set the per-superpixel overlap is normalized by. SalientArea
/// divides by the total salient pixel count; Superpixel divides by the
/// superpixel's own size.
enum class OverlapDenominator {
  SalientArea,
  Superpixel,
};

struct FusionConfig {
  double tau = 0.75;   // saliency threshold
  double theta = 0.01; // overlap threshold
  OverlapDenominator denominator = OverlapDenominator::SalientArea;

  void validate() const {
    if (tau < 0.0 || tau > 1.0) throw std::invalid_argument("FusionConfig: tau must be in [0, 1]");
    if (theta < 0.0 || theta >= 1.0)
      throw std::invalid_argument("FusionConfig: theta must be in [0, 1)");
  }
};

/// Pixels whose saliency strictly exceeds tau. Expects a normalized map.
BinaryMask salient_area(const SaliencyMap& sm, double tau);

struct FuseResult {
  SegmentationMask mask;
  bool empty_salient = false;  // salient area was empty; mask is all Other
};

/// Labels every pixel of a superpixel Road when the superpixel's overlap
/// with the salient area, divided by the configured denominator, strictly
/// exceeds theta. Everything else is Other; Void is never emitted. An
/// empty salient area under the SalientArea denominator yields an
/// all-Other mask with the warning flag set.
FuseResult fuse(const SuperpixelMap& sp, const BinaryMask& salient, const FusionConfig& cfg);

/// segment -> salient_area -> fuse. The saliency map must already be at
/// image resolution.
FuseResult weak_label_pipeline(const Image& image, const SaliencyMap& sm,
                               const SuperpixelConfig& spcfg, const FusionConfig& fcfg,
                               std::uint32_t seed = 0);

}  // namespace roadseg
