#include "roadseg/cam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "roadseg/rng.hpp"

namespace roadseg {

FilterBank make_filter_bank(int channels, int stride, std::uint32_t seed) {
  if (channels < 1) throw std::invalid_argument("make_filter_bank: channels must be >= 1");
  if (stride < 1) throw std::invalid_argument("make_filter_bank: stride must be >= 1");
  FilterBank bank;
  bank.channels = channels;
  bank.stride = stride;
  bank.seed = seed;
  bank.kernels.resize(static_cast<std::size_t>(channels) * 27);
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(27.0);
  for (auto& v : bank.kernels) v = static_cast<float>(rng.normal() * scale);
  return bank;
}

FeatureMaps extract_features(const Image& image, const FilterBank& bank) {
  const int w = image.width, h = image.height;
  if (w < 3 || h < 3) throw std::invalid_argument("extract_features: image smaller than kernel");
  const int stride = bank.stride;
  const int fw = (w + stride - 1) / stride;
  const int fh = (h + stride - 1) / stride;

  FeatureMaps out(bank.channels, fh, fw);
  std::vector<double> resp(static_cast<std::size_t>(w) * h);
  for (int k = 0; k < bank.channels; ++k) {
    // 3x3 RGB convolution with clamp-to-edge padding, then ReLU.
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int c = 0; c < 3; ++c)
          for (int ky = 0; ky < 3; ++ky)
            for (int kx = 0; kx < 3; ++kx) {
              const int sx = std::clamp(x + kx - 1, 0, w - 1);
              const int sy = std::clamp(y + ky - 1, 0, h - 1);
              acc += bank.at(k, c, ky, kx) * (image.at(sx, sy, c) / 255.0);
            }
        resp[static_cast<std::size_t>(y) * w + x] = std::max(0.0, acc);
      }
    }
    // Average pooling over stride x stride blocks; edge blocks are partial.
    for (int by = 0; by < fh; ++by) {
      for (int bx = 0; bx < fw; ++bx) {
        const int x0 = bx * stride, x1 = std::min(w, x0 + stride);
        const int y0 = by * stride, y1 = std::min(h, y0 + stride);
        double acc = 0.0;
        for (int y = y0; y < y1; ++y)
          for (int x = x0; x < x1; ++x) acc += resp[static_cast<std::size_t>(y) * w + x];
        out.at(k, bx, by) = static_cast<float>(acc / ((x1 - x0) * (y1 - y0)));
      }
    }
  }
  return out;
}

PooledFeatures gap(const FeatureMaps& fm) {
  PooledFeatures pf;
  pf.f.resize(fm.channels);
  const double n = static_cast<double>(fm.plane());
  for (int k = 0; k < fm.channels; ++k) {
    double acc = 0.0;
    const float* p = fm.values.data() + k * fm.plane();
    for (std::size_t i = 0; i < fm.plane(); ++i) acc += p[i];
    pf.f[k] = acc / n;
  }
  return pf;
}

ClassScores class_scores(const PooledFeatures& pf, const ClassWeights& w) {
  if (pf.channels() != w.channels)
    throw std::invalid_argument("class_scores: channel count mismatch");
  ClassScores s;
  s.s.resize(w.classes);
  for (int c = 0; c < w.classes; ++c) {
    double acc = w.bias[c];
    for (int k = 0; k < w.channels; ++k) acc += w.at(c, k) * pf.f[k];
    s.s[c] = acc;
  }
  return s;
}

int predict_class(const PooledFeatures& pf, const ClassWeights& w) {
  const ClassScores s = class_scores(pf, w);
  return static_cast<int>(std::max_element(s.s.begin(), s.s.end()) - s.s.begin());
}

SaliencyMap cam_map(const FeatureMaps& fm, const ClassWeights& w, int c) {
  if (fm.channels != w.channels) throw std::invalid_argument("cam_map: channel count mismatch");
  if (c < 0 || c >= w.classes) throw std::out_of_range("cam_map: class index out of range");
  SaliencyMap m(fm.fw, fm.fh);
  for (std::size_t i = 0; i < m.values.size(); ++i) {
    double acc = 0.0;
    for (int k = 0; k < fm.channels; ++k) acc += w.at(c, k) * fm.values[k * fm.plane() + i];
    m.values[i] = acc;
  }
  return m;
}

SaliencyMap normalize_saliency(const SaliencyMap& raw) {
  SaliencyMap out(raw.width, raw.height);
  const auto [lo_it, hi_it] = std::minmax_element(raw.values.begin(), raw.values.end());
  const double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo)) return out;  // constant map: nothing salient
  const double span = hi - lo;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = (raw.values[i] - lo) / span;
  return out;
}

SaliencyMap upsample_bilinear(const SaliencyMap& sm, int height, int width) {
  if (height < 1 || width < 1)
    throw std::invalid_argument("upsample_bilinear: target dimensions must be >= 1");
  SaliencyMap out(width, height);
  const double sx_ratio = static_cast<double>(sm.width) / width;
  const double sy_ratio = static_cast<double>(sm.height) / height;
  for (int y = 0; y < height; ++y) {
    double sy = (y + 0.5) * sy_ratio - 0.5;
    sy = std::clamp(sy, 0.0, static_cast<double>(sm.height - 1));
    const int y0 = static_cast<int>(sy);
    const int y1 = std::min(y0 + 1, sm.height - 1);
    const double fy = sy - y0;
    for (int x = 0; x < width; ++x) {
      double sx = (x + 0.5) * sx_ratio - 0.5;
      sx = std::clamp(sx, 0.0, static_cast<double>(sm.width - 1));
      const int x0 = static_cast<int>(sx);
      const int x1 = std::min(x0 + 1, sm.width - 1);
      const double fx = sx - x0;
      const double top = sm.at(x0, y0) * (1.0 - fx) + sm.at(x1, y0) * fx;
      const double bot = sm.at(x0, y1) * (1.0 - fx) + sm.at(x1, y1) * fx;
      out.at(x, y) = top * (1.0 - fy) + bot * fy;
    }
  }
  return out;
}

GapGradient gap_loss_and_grad(const std::vector<PooledFeatures>& batch,
                              const std::vector<int>& labels, const ClassWeights& w, double l2) {
  if (batch.size() != labels.size() || batch.empty())
    throw std::invalid_argument("gap_loss_and_grad: batch and labels must align and be non-empty");
  GapGradient g;
  g.dw.assign(w.w.size(), 0.0);
  g.dbias.assign(w.bias.size(), 0.0);

  std::vector<double> p(w.classes);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const ClassScores s = class_scores(batch[i], w);
    const double mx = *std::max_element(s.s.begin(), s.s.end());
    double z = 0.0;
    for (int c = 0; c < w.classes; ++c) z += (p[c] = std::exp(s.s[c] - mx));
    for (auto& v : p) v /= z;
    g.loss += -std::log(std::max(p[labels[i]], 1e-300));
    for (int c = 0; c < w.classes; ++c) {
      const double d = p[c] - (c == labels[i] ? 1.0 : 0.0);
      g.dbias[c] += d;
      for (int k = 0; k < w.channels; ++k)
        g.dw[static_cast<std::size_t>(c) * w.channels + k] += d * batch[i].f[k];
    }
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  g.loss *= inv;
  for (auto& v : g.dw) v *= inv;
  for (auto& v : g.dbias) v *= inv;
  if (l2 > 0.0) {
    double reg = 0.0;
    for (std::size_t i = 0; i < w.w.size(); ++i) {
      reg += w.w[i] * w.w[i];
      g.dw[i] += l2 * w.w[i];
    }
    g.loss += 0.5 * l2 * reg;
  }
  return g;
}

GapTrainResult train_gap_classifier(const std::vector<std::pair<FeatureMaps, int>>& dataset,
                                    const GapTrainConfig& cfg) {
  cfg.validate();
  if (dataset.empty()) throw std::invalid_argument("train_gap_classifier: empty dataset");

  const int channels = dataset.front().first.channels;
  int classes = 0;
  for (const auto& [fm, label] : dataset) {
    if (fm.channels != channels)
      throw std::invalid_argument("train_gap_classifier: inconsistent channel counts");
    if (label < 0) throw std::invalid_argument("train_gap_classifier: negative class label");
    classes = std::max(classes, label + 1);
  }
  classes = std::max(classes, 2);
  std::vector<std::int64_t> per_class(classes, 0);
  for (const auto& [fm, label] : dataset) per_class[label]++;
  for (int c = 0; c < classes; ++c)
    if (per_class[c] == 0)
      throw std::invalid_argument("train_gap_classifier: empty class " + std::to_string(c));

  std::vector<PooledFeatures> pooled(dataset.size());
  std::vector<int> labels(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    pooled[i] = gap(dataset[i].first);
    labels[i] = dataset[i].second;
  }

  GapTrainResult res;
  res.weights = ClassWeights(classes, channels);
  Rng rng(cfg.seed);
  std::vector<std::uint32_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0u);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch) {
      const std::size_t end = std::min(order.size(), start + cfg.batch);
      std::vector<PooledFeatures> bf;
      std::vector<int> bl;
      bf.reserve(end - start);
      bl.reserve(end - start);
      for (std::size_t i = start; i < end; ++i) {
        bf.push_back(pooled[order[i]]);
        bl.push_back(labels[order[i]]);
      }
      const GapGradient g = gap_loss_and_grad(bf, bl, res.weights, cfg.l2);
      if (!std::isfinite(g.loss))
        throw std::runtime_error("train_gap_classifier: diverged (non-finite loss) at epoch " +
                                 std::to_string(epoch));
      epoch_loss += g.loss * static_cast<double>(end - start);
      seen += end - start;
      for (std::size_t i = 0; i < res.weights.w.size(); ++i) res.weights.w[i] -= cfg.lr * g.dw[i];
      for (std::size_t i = 0; i < res.weights.bias.size(); ++i)
        res.weights.bias[i] -= cfg.lr * g.dbias[i];
    }
    res.epoch_losses.push_back(epoch_loss / static_cast<double>(seen));
  }

  res.final_loss = gap_loss_and_grad(pooled, labels, res.weights, cfg.l2).loss;
  return res;
}

}  // namespace roadseg
