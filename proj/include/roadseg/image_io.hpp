#pragma once

#include <filesystem>
#include <map>
#include <optional>

#include "roadseg/types.hpp"

namespace roadseg {

/// Maps on-disk raster values to labels. Values missing from the table
/// fall back to `fallback` when set, otherwise loading fails.
struct MaskEncoding {
  std::map<std::uint8_t, Label> to_label;
  std::optional<Label> fallback;

  /// 0 = Other, 1 = Road, 255 = Void; no fallback.
  static MaskEncoding standard();
};

/// Decodes an 8-bit RGB PNG or binary PPM (P6). Decoding is bit-exact.
Image load_image(const std::filesystem::path& path);

/// Encodes as PNG or PPM depending on the file extension (.png / .ppm).
void save_image(const Image& img, const std::filesystem::path& path);

/// Decodes a single-channel 8-bit PNG or PGM (P5) and maps raster values
/// through `enc`.
SegmentationMask load_mask(const std::filesystem::path& path, const MaskEncoding& enc = MaskEncoding::standard());

/// Writes labels with the standard raster encoding as gray PNG or PGM
/// (.png / .pgm).
void save_mask(const SegmentationMask& mask, const std::filesystem::path& path);

/// Lossy component-id export (id mod 256) for visual inspection.
void save_superpixel_debug_pgm(const SuperpixelMap& sp, const std::filesystem::path& path);

}  // namespace roadseg
