#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "roadseg/evalcost.hpp"
#include "roadseg/types.hpp"

namespace roadseg {

/// A trained per-pixel segmentation model. Predictions never contain Void
/// and always match the input dimensions.
class TrainedSegmenter {
 public:
  virtual ~TrainedSegmenter() = default;
  virtual SegmentationMask predict(const Image& image) const = 0;
};

/// Pluggable segmentation backend. Training must be deterministic for a
/// fixed seed; Void pixels in the training masks are excluded from the
/// loss.
class Segmenter {
 public:
  virtual ~Segmenter() = default;
  virtual std::unique_ptr<TrainedSegmenter> train(const std::vector<Image>& images,
                                                  const std::vector<SegmentationMask>& masks,
                                                  std::uint32_t seed) const = 0;
};

struct BaselineSegmenterConfig {
  double lr = 0.5;
  int epochs = 12;
  int batch = 256;
  int samples_per_image = 1500;  // seeded pixel subsampling budget
  double l2 = 1e-4;
};

/// Per-pixel multinomial logistic classifier over simple appearance and
/// location features (RGB, normalized x/y, 5x5 local mean and std-dev per
/// channel), trained with seeded mini-batch gradient descent. A training
/// set carrying a single label yields a flagged constant predictor.
std::unique_ptr<Segmenter> baseline_segmenter(const BaselineSegmenterConfig& cfg = {});

struct SelfTrainConfig {
  int iterations = 3;  // trained rounds after the weak-label record
  std::uint32_t seed = 0;
  std::optional<std::vector<SegmentationMask>> eval_gt;
  MiouMode eval_mode = MiouMode::Dataset;
};

/// One record per round. Record 0 holds the weak masks themselves (with
/// their mIOU when ground truth is given); record i > 0 holds the
/// predictions of the model trained on record i-1's masks.
struct IterationRecord {
  int iteration = 0;
  std::vector<SegmentationMask> masks;
  std::optional<double> miou;
};

/// Iterative self-training over a fixed image set. Returns
/// cfg.iterations + 1 records.
std::vector<IterationRecord> self_train(const std::vector<Image>& images,
                                        const std::vector<SegmentationMask>& weak_masks,
                                        const Segmenter& seg, const SelfTrainConfig& cfg);

/// Replaces a seeded uniform sample (without replacement) of
/// floor(p * n) masks with their ground-truth versions.
std::vector<SegmentationMask> mix_ground_truth(const std::vector<SegmentationMask>& weak_masks,
                                               const std::vector<SegmentationMask>& gt_masks,
                                               double fraction, std::uint32_t seed);

/// Synthetic road-scene generator for closed-loop testing.
struct SceneConfig {
  int width = 128;
  int height = 128;
  std::uint32_t seed = 0;
  double noise = 8.0;      // uniform +/- per-channel texture amplitude
  bool with_road = true;   // false renders a sky/grass scene with no road

  void validate() const {
    if (width < 16 || height < 16) throw std::invalid_argument("SceneConfig: dimensions must be >= 16");
    if (noise < 0.0) throw std::invalid_argument("SceneConfig: noise must be >= 0");
  }
};

/// Renders a trapezoidal gray road widening toward the bottom edge,
/// under a sky band and over grass. The ground truth marks the trapezoid
/// Road with a 1-pixel Void boundary ring; everything else is Other.
std::pair<Image, SegmentationMask> synth_scene(const SceneConfig& cfg);

}  // namespace roadseg
