#include "roadseg/selftrain.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "roadseg/rng.hpp"

namespace roadseg {
namespace {

constexpr int kFeatureDim = 11;  // rgb + xy + 5x5 mean/std per channel

// Integral-image accelerated per-pixel features. Windows are clipped at
// the borders.
class PixelFeatures {
 public:
  explicit PixelFeatures(const Image& img) : w_(img.width), h_(img.height), img_(&img) {
    const std::size_t n = static_cast<std::size_t>(w_ + 1) * (h_ + 1);
    for (int c = 0; c < 3; ++c) {
      sum_[c].assign(n, 0.0);
      sumsq_[c].assign(n, 0.0);
      for (int y = 0; y < h_; ++y)
        for (int x = 0; x < w_; ++x) {
          const double v = img.at(x, y, c) / 255.0;
          const std::size_t i = idx(x + 1, y + 1);
          sum_[c][i] = v + sum_[c][idx(x, y + 1)] + sum_[c][idx(x + 1, y)] - sum_[c][idx(x, y)];
          sumsq_[c][i] =
              v * v + sumsq_[c][idx(x, y + 1)] + sumsq_[c][idx(x + 1, y)] - sumsq_[c][idx(x, y)];
        }
    }
  }

  void fill(int x, int y, std::array<double, kFeatureDim>& f) const {
    for (int c = 0; c < 3; ++c) f[c] = img_->at(x, y, c) / 255.0;
    f[3] = w_ > 1 ? static_cast<double>(x) / (w_ - 1) : 0.0;
    f[4] = h_ > 1 ? static_cast<double>(y) / (h_ - 1) : 0.0;
    const int x0 = std::max(0, x - 2), x1 = std::min(w_ - 1, x + 2);
    const int y0 = std::max(0, y - 2), y1 = std::min(h_ - 1, y + 2);
    const double area = static_cast<double>(x1 - x0 + 1) * (y1 - y0 + 1);
    for (int c = 0; c < 3; ++c) {
      const double s = window(sum_[c], x0, y0, x1, y1);
      const double s2 = window(sumsq_[c], x0, y0, x1, y1);
      const double mean = s / area;
      f[5 + c] = mean;
      f[8 + c] = std::sqrt(std::max(0.0, s2 / area - mean * mean));
    }
  }

 private:
  std::size_t idx(int x, int y) const { return static_cast<std::size_t>(y) * (w_ + 1) + x; }
  double window(const std::vector<double>& t, int x0, int y0, int x1, int y1) const {
    return t[idx(x1 + 1, y1 + 1)] - t[idx(x0, y1 + 1)] - t[idx(x1 + 1, y0)] + t[idx(x0, y0)];
  }

  int w_, h_;
  const Image* img_;
  std::array<std::vector<double>, 3> sum_, sumsq_;
};

class ConstantModel final : public TrainedSegmenter {
 public:
  explicit ConstantModel(Label label) : label_(label) {}
  SegmentationMask predict(const Image& image) const override {
    return SegmentationMask(image.width, image.height, label_);
  }

 private:
  Label label_;
};

// Two-class softmax over pixel features.
class LinearPixelModel final : public TrainedSegmenter {
 public:
  LinearPixelModel(std::vector<double> w, std::array<double, 2> bias)
      : w_(std::move(w)), bias_(bias) {}

  SegmentationMask predict(const Image& image) const override {
    SegmentationMask out(image.width, image.height, Label::Other);
    const PixelFeatures feats(image);
    std::array<double, kFeatureDim> f{};
    for (int y = 0; y < image.height; ++y)
      for (int x = 0; x < image.width; ++x) {
        feats.fill(x, y, f);
        double s0 = bias_[0], s1 = bias_[1];
        for (int k = 0; k < kFeatureDim; ++k) {
          s0 += w_[k] * f[k];
          s1 += w_[kFeatureDim + k] * f[k];
        }
        if (s1 > s0) out.at(x, y) = Label::Road;
      }
    return out;
  }

 private:
  std::vector<double> w_;  // 2 * kFeatureDim, class-major (0 = Other, 1 = Road)
  std::array<double, 2> bias_;
};

class BaselineSegmenter final : public Segmenter {
 public:
  explicit BaselineSegmenter(BaselineSegmenterConfig cfg) : cfg_(cfg) {}

  std::unique_ptr<TrainedSegmenter> train(const std::vector<Image>& images,
                                          const std::vector<SegmentationMask>& masks,
                                          std::uint32_t seed) const override {
    if (images.size() != masks.size() || images.empty())
      throw std::invalid_argument("baseline_segmenter: images and masks must align");
    for (std::size_t i = 0; i < images.size(); ++i)
      if (images[i].width != masks[i].width || images[i].height != masks[i].height)
        throw std::invalid_argument("baseline_segmenter: image/mask dimension mismatch");

    // Seeded pixel subsampling; Void pixels never enter the training set.
    Rng rng(seed);
    std::vector<std::array<double, kFeatureDim>> xs;
    std::vector<int> ys;
    for (std::size_t i = 0; i < images.size(); ++i) {
      const PixelFeatures feats(images[i]);
      const std::size_t n = masks[i].labels.size();
      std::array<double, kFeatureDim> f{};
      for (int s = 0; s < cfg_.samples_per_image; ++s) {
        const std::size_t p = rng.uniform_index(static_cast<std::uint32_t>(n));
        const Label label = masks[i].labels[p];
        if (label == Label::Void) continue;
        feats.fill(static_cast<int>(p % images[i].width), static_cast<int>(p / images[i].width), f);
        xs.push_back(f);
        ys.push_back(label == Label::Road ? 1 : 0);
      }
    }
    if (xs.empty()) return std::make_unique<ConstantModel>(Label::Other);

    const bool any_road = std::find(ys.begin(), ys.end(), 1) != ys.end();
    const bool any_other = std::find(ys.begin(), ys.end(), 0) != ys.end();
    if (!any_road || !any_other)
      // Single-label training set: constant predictor, flagged by type.
      return std::make_unique<ConstantModel>(any_road ? Label::Road : Label::Other);

    std::vector<double> w(2 * kFeatureDim, 0.0);
    std::array<double, 2> bias{0.0, 0.0};
    std::vector<std::uint32_t> order(xs.size());
    std::iota(order.begin(), order.end(), 0u);

    for (int epoch = 0; epoch < cfg_.epochs; ++epoch) {
      rng.shuffle(order);
      for (std::size_t start = 0; start < order.size(); start += cfg_.batch) {
        const std::size_t end = std::min(order.size(), start + cfg_.batch);
        std::array<double, 2 * kFeatureDim> gw{};
        std::array<double, 2> gb{};
        for (std::size_t i = start; i < end; ++i) {
          const auto& f = xs[order[i]];
          const int label = ys[order[i]];
          double s0 = bias[0], s1 = bias[1];
          for (int k = 0; k < kFeatureDim; ++k) {
            s0 += w[k] * f[k];
            s1 += w[kFeatureDim + k] * f[k];
          }
          const double m = std::max(s0, s1);
          const double e0 = std::exp(s0 - m), e1 = std::exp(s1 - m);
          const double p1 = e1 / (e0 + e1);
          const double d0 = (1.0 - p1) - (label == 0 ? 1.0 : 0.0);
          const double d1 = p1 - (label == 1 ? 1.0 : 0.0);
          for (int k = 0; k < kFeatureDim; ++k) {
            gw[k] += d0 * f[k];
            gw[kFeatureDim + k] += d1 * f[k];
          }
          gb[0] += d0;
          gb[1] += d1;
        }
        const double inv = 1.0 / static_cast<double>(end - start);
        for (int k = 0; k < 2 * kFeatureDim; ++k)
          w[k] -= cfg_.lr * (gw[k] * inv + cfg_.l2 * w[k]);
        bias[0] -= cfg_.lr * gb[0] * inv;
        bias[1] -= cfg_.lr * gb[1] * inv;
      }
    }
    return std::make_unique<LinearPixelModel>(std::move(w), bias);
  }

 private:
  BaselineSegmenterConfig cfg_;
};

}  // namespace

std::unique_ptr<Segmenter> baseline_segmenter(const BaselineSegmenterConfig& cfg) {
  return std::make_unique<BaselineSegmenter>(cfg);
}

std::vector<IterationRecord> self_train(const std::vector<Image>& images,
                                        const std::vector<SegmentationMask>& weak_masks,
                                        const Segmenter& seg, const SelfTrainConfig& cfg) {
  if (images.size() != weak_masks.size() || images.empty())
    throw std::invalid_argument("self_train: images and weak masks must align");
  if (cfg.iterations < 0) throw std::invalid_argument("self_train: iterations must be >= 0");
  if (cfg.eval_gt && cfg.eval_gt->size() != images.size())
    throw std::invalid_argument("self_train: eval_gt must align with images");

  auto evaluate = [&](const std::vector<SegmentationMask>& masks) -> std::optional<double> {
    if (!cfg.eval_gt) return std::nullopt;
    std::vector<IouCounts> counts(masks.size());
    for (std::size_t i = 0; i < masks.size(); ++i)
      counts[i] = iou_counts(masks[i], (*cfg.eval_gt)[i]);
    return miou(counts, cfg.eval_mode);
  };

  std::vector<IterationRecord> records;
  records.push_back({0, weak_masks, evaluate(weak_masks)});

  for (int it = 1; it <= cfg.iterations; ++it) {
    const auto model = seg.train(images, records.back().masks, derive_seed(cfg.seed, it));
    std::vector<SegmentationMask> preds(images.size());
    for (std::size_t i = 0; i < images.size(); ++i) preds[i] = model->predict(images[i]);
    records.push_back({it, std::move(preds), std::nullopt});
    records.back().miou = evaluate(records.back().masks);
  }
  return records;
}

std::vector<SegmentationMask> mix_ground_truth(const std::vector<SegmentationMask>& weak_masks,
                                               const std::vector<SegmentationMask>& gt_masks,
                                               double fraction, std::uint32_t seed) {
  if (weak_masks.size() != gt_masks.size())
    throw std::invalid_argument("mix_ground_truth: mask sets must align");
  if (fraction < 0.0 || fraction > 1.0)
    throw std::invalid_argument("mix_ground_truth: fraction must be in [0, 1]");

  const std::size_t n = weak_masks.size();
  const std::size_t take =
      static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  Rng rng(seed);
  rng.shuffle(order);

  std::vector<SegmentationMask> out = weak_masks;
  for (std::size_t i = 0; i < take; ++i) out[order[i]] = gt_masks[order[i]];
  return out;
}

std::pair<Image, SegmentationMask> synth_scene(const SceneConfig& cfg) {
  cfg.validate();
  const int w = cfg.width, h = cfg.height;
  Rng rng(cfg.seed);

  // Seeded geometry jitter keeps scenes varied but reproducible.
  const int horizon = static_cast<int>(std::lround(h * rng.uniform(0.35, 0.45)));
  const double cx = w * rng.uniform(0.45, 0.55);
  const double top_half = w * rng.uniform(0.03, 0.07);
  const double bottom_half = w * rng.uniform(0.30, 0.42);

  const std::array<std::uint8_t, 3> sky{135, 170, 220};
  const std::array<std::uint8_t, 3> grass{70, 135, 60};
  const std::array<std::uint8_t, 3> road{125, 124, 128};

  Image img(w, h);
  std::vector<std::uint8_t> is_road(static_cast<std::size_t>(w) * h, 0);

  for (int y = 0; y < h; ++y) {
    double half = -1.0;
    if (cfg.with_road && y >= horizon) {
      const double t = h - 1 == horizon ? 1.0 : static_cast<double>(y - horizon) / (h - 1 - horizon);
      half = top_half + t * (bottom_half - top_half);
    }
    for (int x = 0; x < w; ++x) {
      const bool on_road = half >= 0.0 && std::abs(x - cx) <= half;
      const auto& base = on_road ? road : (y < horizon ? sky : grass);
      if (on_road) is_road[static_cast<std::size_t>(y) * w + x] = 1;
      for (int c = 0; c < 3; ++c) {
        const double noise = cfg.noise > 0.0 ? rng.uniform(-cfg.noise, cfg.noise) : 0.0;
        img.at(x, y, c) =
            static_cast<std::uint8_t>(std::clamp(base[c] + noise, 0.0, 255.0));
      }
    }
  }

  SegmentationMask gt(w, h, Label::Other);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::size_t p = static_cast<std::size_t>(y) * w + x;
      if (!is_road[p]) continue;
      const bool boundary =
          (x > 0 && !is_road[p - 1]) || (x + 1 < w && !is_road[p + 1]) ||
          (y > 0 && !is_road[p - w]) || (y + 1 < h && !is_road[p + w]) ||
          x == 0 || x + 1 == w || y + 1 == h;
      gt.labels[p] = boundary ? Label::Void : Label::Road;
    }
  return {std::move(img), std::move(gt)};
}

}  // namespace roadseg
