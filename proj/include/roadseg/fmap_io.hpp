#pragma once

#include <filesystem>

#include "roadseg/types.hpp"

namespace roadseg {

// FMAP carries feature maps between external extractors and this toolkit.
// Layout, all little-endian:
//   magic "FMAP" | version u32 (=1) | K u32 | fh u32 | fw u32 |
//   K*fh*fw IEEE-754 f32, channel-major then row-major.
inline constexpr std::uint32_t kFmapVersion = 1;

void write_fmap(const FeatureMaps& fm, const std::filesystem::path& path);
FeatureMaps read_fmap(const std::filesystem::path& path);

// Class weights travel in the same container: an FMAP with 2 channels on a
// classes x channels grid. Channel 0 is the weight matrix, channel 1 holds
// the per-class bias in column 0 (rest zero). Values are stored as f32.
void write_class_weights(const ClassWeights& cw, const std::filesystem::path& path);
ClassWeights read_class_weights(const std::filesystem::path& path);

/// Saliency maps reuse the FMAP container with K=1.
void write_saliency(const SaliencyMap& sm, const std::filesystem::path& path);
SaliencyMap read_saliency(const std::filesystem::path& path);

}  // namespace roadseg
