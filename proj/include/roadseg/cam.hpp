#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "roadseg/types.hpp"

namespace roadseg {

/// A frozen convolutional feature extractor: K fixed 3x3 RGB kernels,
/// a ReLU, and average pooling with the given stride. Only the linear
/// head on top of these features is ever trained.
struct FilterBank {
  int channels = 0;
  int stride = 8;
  std::uint32_t seed = 0;
  std::vector<float> kernels;  // channels * 27, kernel-major, (c, ky, kx) within

  float at(int k, int c, int ky, int kx) const {
    return kernels[static_cast<std::size_t>(k) * 27 + c * 9 + ky * 3 + kx];
  }
};

/// Deterministically generates a filter bank from a seed.
FilterBank make_filter_bank(int channels, int stride, std::uint32_t seed);

/// Convolves, rectifies and average-pools the image down to a
/// ceil(H/stride) x ceil(W/stride) feature grid.
FeatureMaps extract_features(const Image& image, const FilterBank& bank);

/// Global average pooling: the spatial mean of each channel.
PooledFeatures gap(const FeatureMaps& fm);

/// s[c] = sum_k w[c][k] * f[k] + bias[c].
ClassScores class_scores(const PooledFeatures& pf, const ClassWeights& w);

/// Index of the highest-scoring class.
int predict_class(const PooledFeatures& pf, const ClassWeights& w);

/// Raw class activation map at feature resolution:
/// M(x, y) = sum_k w[c][k] * fm[k](x, y). No bias term, unnormalized.
SaliencyMap cam_map(const FeatureMaps& fm, const ClassWeights& w, int c);

/// Per-image min-max scaling to [0, 1]. A constant input maps to all
/// zeros (nothing salient).
SaliencyMap normalize_saliency(const SaliencyMap& raw);

/// Bilinear resampling to height x width. Output pixel (x, y) samples the
/// input at ((x+0.5)*fw/W - 0.5, (y+0.5)*fh/H - 0.5), clamped to the grid.
SaliencyMap upsample_bilinear(const SaliencyMap& sm, int height, int width);

struct GapTrainConfig {
  double lr = 0.1;
  int epochs = 100;
  int batch = 16;
  std::uint32_t seed = 0;
  double l2 = 0.0;

  void validate() const {
    if (!(lr > 0.0)) throw std::invalid_argument("GapTrainConfig: lr must be > 0");
    if (epochs < 1) throw std::invalid_argument("GapTrainConfig: epochs must be >= 1");
    if (batch < 1) throw std::invalid_argument("GapTrainConfig: batch must be >= 1");
    if (l2 < 0.0) throw std::invalid_argument("GapTrainConfig: l2 must be >= 0");
  }
};

struct GapTrainResult {
  ClassWeights weights;
  double final_loss = 0.0;            // mean loss over the full dataset after training
  std::vector<double> epoch_losses;   // mean per-example loss seen in each epoch
};

/// Softmax cross-entropy loss and its gradient w.r.t. weights and bias
/// over a batch of pooled features. Includes the (l2/2)*|w|^2 penalty.
struct GapGradient {
  double loss = 0.0;
  std::vector<double> dw;    // classes * channels
  std::vector<double> dbias; // classes
};
GapGradient gap_loss_and_grad(const std::vector<PooledFeatures>& batch,
                              const std::vector<int>& labels, const ClassWeights& w, double l2);

/// Trains the classification head over frozen features with seeded
/// mini-batch gradient descent. Every class in [0, max label] must be
/// present at least once. Throws on divergence (NaN loss), naming the
/// offending epoch.
GapTrainResult train_gap_classifier(const std::vector<std::pair<FeatureMaps, int>>& dataset,
                                    const GapTrainConfig& cfg);

}  // namespace roadseg
