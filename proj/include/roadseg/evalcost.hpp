#pragma once

#include <cstdint>
#include <span>

#include "roadseg/types.hpp"

namespace roadseg {

struct IouCounts {
  std::int64_t intersection = 0;
  std::int64_t union_ = 0;
};

/// Road-class intersection/union counts over pixels where the ground
/// truth is not Void. A Void prediction counts as Other.
IouCounts iou_counts(const SegmentationMask& pred, const SegmentationMask& gt);

enum class MiouMode {
  Dataset,   // sum intersections / sum unions
  PerImage,  // mean of per-image IoU, skipping images with union 0
};

/// Aggregates per-image counts. When every union is zero there is nothing
/// to score; the result is 1.0 and `degenerate` (if given) is set.
double miou(std::span<const IouCounts> per_image, MiouMode mode, bool* degenerate = nullptr);

/// Per-label annotation times, in seconds.
struct CostModel {
  double sec_per_mask = 79.0;
  double sec_per_image_label = 1.0;
  double sec_per_keyword_label = 60.0;
  double sec_per_class_check = 10.0;

  void validate() const {
    if (sec_per_mask < 0 || sec_per_image_label < 0 || sec_per_keyword_label < 0 ||
        sec_per_class_check < 0)
      throw std::invalid_argument("CostModel: all rates must be >= 0");
  }
};

struct Cost {
  double seconds = 0.0;
  double hours = 0.0;  // rounded half-up to 1 decimal
};

/// Full pixel-wise annotation: n_images * sec_per_mask.
Cost supervised_cost(std::int64_t n_images, const CostModel& cm = {});

/// Label selection from existing databases: keyword searches plus
/// per-class relevance checks.
Cost distant_cost(std::int64_t n_keyword_labels, std::int64_t n_classes_checked,
                  const CostModel& cm = {});

/// Weak labels plus a fraction p of ground-truth masks. Hour accounting
/// follows the published convention: both component costs are first
/// rounded to tenths of an hour, and the partial ground-truth share is
/// truncated to a tenth before summing.
Cost mixed_cost(double gt_fraction, std::int64_t n_images, std::int64_t n_keyword_labels,
                std::int64_t n_classes_checked, const CostModel& cm = {});

}  // namespace roadseg
