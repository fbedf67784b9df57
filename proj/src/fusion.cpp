#include "roadseg/fusion.hpp"

namespace roadseg {

BinaryMask salient_area(const SaliencyMap& sm, double tau) {
  BinaryMask out(sm.width, sm.height);
  for (std::size_t i = 0; i < sm.values.size(); ++i) out.on[i] = sm.values[i] > tau ? 1 : 0;
  return out;
}

FuseResult fuse(const SuperpixelMap& sp, const BinaryMask& salient, const FusionConfig& cfg) {
  cfg.validate();
  if (sp.width != salient.width || sp.height != salient.height)
    throw std::invalid_argument("fuse: superpixel map and salient mask dimensions differ");

  FuseResult res;
  res.mask = SegmentationMask(sp.width, sp.height, Label::Other);

  const std::int64_t total_salient = salient.count();
  if (cfg.denominator == OverlapDenominator::SalientArea && total_salient == 0) {
    res.empty_salient = true;
    return res;
  }

  std::vector<std::int64_t> overlap(sp.n_components(), 0);
  for (std::size_t i = 0; i < salient.on.size(); ++i)
    if (salient.on[i]) overlap[sp.component_id[i]]++;

  std::vector<std::uint8_t> is_road(sp.n_components(), 0);
  for (int c = 0; c < sp.n_components(); ++c) {
    const double denom = cfg.denominator == OverlapDenominator::SalientArea
                             ? static_cast<double>(total_salient)
                             : static_cast<double>(sp.sizes[c]);
    is_road[c] = static_cast<double>(overlap[c]) / denom > cfg.theta ? 1 : 0;
  }
  for (std::size_t i = 0; i < res.mask.labels.size(); ++i)
    if (is_road[sp.component_id[i]]) res.mask.labels[i] = Label::Road;
  return res;
}

FuseResult weak_label_pipeline(const Image& image, const SaliencyMap& sm,
                               const SuperpixelConfig& spcfg, const FusionConfig& fcfg,
                               std::uint32_t seed) {
  if (sm.width != image.width || sm.height != image.height)
    throw std::invalid_argument("weak_label_pipeline: saliency map must be at image resolution");
  const SuperpixelMap sp = segment(image, spcfg, seed);
  const BinaryMask salient = salient_area(sm, fcfg.tau);
  return fuse(sp, salient, fcfg);
}

}  // namespace roadseg
