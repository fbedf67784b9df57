#include "roadseg/evalcost.hpp"

#include <cmath>

namespace roadseg {
namespace {

// Half-up rounding to tenths of an hour.
std::int64_t hour_tenths(double seconds) {
  return static_cast<std::int64_t>(std::floor(seconds / 360.0 + 0.5));
}

}  // namespace

IouCounts iou_counts(const SegmentationMask& pred, const SegmentationMask& gt) {
  if (pred.width != gt.width || pred.height != gt.height)
    throw std::invalid_argument("iou_counts: dimension mismatch");
  IouCounts c;
  for (std::size_t i = 0; i < gt.labels.size(); ++i) {
    if (gt.labels[i] == Label::Void) continue;
    const bool p = pred.labels[i] == Label::Road;  // Void prediction counts as Other
    const bool g = gt.labels[i] == Label::Road;
    c.intersection += p && g;
    c.union_ += p || g;
  }
  return c;
}

double miou(std::span<const IouCounts> per_image, MiouMode mode, bool* degenerate) {
  if (per_image.empty()) throw std::invalid_argument("miou: empty list");
  if (degenerate) *degenerate = false;

  if (mode == MiouMode::Dataset) {
    std::int64_t inter = 0, uni = 0;
    for (const IouCounts& c : per_image) {
      inter += c.intersection;
      uni += c.union_;
    }
    if (uni == 0) {
      if (degenerate) *degenerate = true;
      return 1.0;
    }
    return static_cast<double>(inter) / static_cast<double>(uni);
  }

  double sum = 0.0;
  std::int64_t n = 0;
  for (const IouCounts& c : per_image) {
    if (c.union_ == 0) continue;
    sum += static_cast<double>(c.intersection) / static_cast<double>(c.union_);
    ++n;
  }
  if (n == 0) {
    if (degenerate) *degenerate = true;
    return 1.0;
  }
  return sum / static_cast<double>(n);
}

Cost supervised_cost(std::int64_t n_images, const CostModel& cm) {
  cm.validate();
  if (n_images < 0) throw std::invalid_argument("supervised_cost: n_images must be >= 0");
  Cost c;
  c.seconds = static_cast<double>(n_images) * cm.sec_per_mask;
  c.hours = static_cast<double>(hour_tenths(c.seconds)) / 10.0;
  return c;
}

Cost distant_cost(std::int64_t n_keyword_labels, std::int64_t n_classes_checked,
                  const CostModel& cm) {
  cm.validate();
  if (n_keyword_labels < 0 || n_classes_checked < 0)
    throw std::invalid_argument("distant_cost: counts must be >= 0");
  Cost c;
  c.seconds = static_cast<double>(n_keyword_labels) * cm.sec_per_keyword_label +
              static_cast<double>(n_classes_checked) * cm.sec_per_class_check;
  c.hours = static_cast<double>(hour_tenths(c.seconds)) / 10.0;
  return c;
}

Cost mixed_cost(double gt_fraction, std::int64_t n_images, std::int64_t n_keyword_labels,
                std::int64_t n_classes_checked, const CostModel& cm) {
  if (gt_fraction < 0.0 || gt_fraction > 1.0)
    throw std::invalid_argument("mixed_cost: gt_fraction must be in [0, 1]");
  const Cost weak = distant_cost(n_keyword_labels, n_classes_checked, cm);
  const Cost full = supervised_cost(n_images, cm);
  Cost c;
  c.seconds = weak.seconds + gt_fraction * full.seconds;
  // Tenth-of-an-hour arithmetic: round each component, truncate the share.
  const std::int64_t tenths =
      hour_tenths(weak.seconds) +
      static_cast<std::int64_t>(std::floor(gt_fraction * static_cast<double>(hour_tenths(full.seconds)) + 1e-9));
  c.hours = static_cast<double>(tenths) / 10.0;
  return c;
}

}  // namespace roadseg
