#include "roadseg/fmap_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

namespace roadseg {
namespace {

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& what) {
  throw std::runtime_error(path.string() + ": " + what);
}

void put_u32(std::string& buf, std::uint32_t v) {
  buf.push_back(static_cast<char>(v & 0xff));
  buf.push_back(static_cast<char>((v >> 8) & 0xff));
  buf.push_back(static_cast<char>((v >> 16) & 0xff));
  buf.push_back(static_cast<char>((v >> 24) & 0xff));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

}  // namespace

void write_fmap(const FeatureMaps& fm, const std::filesystem::path& path) {
  for (float v : fm.values)
    if (!std::isfinite(v)) fail(path, "refusing to write non-finite feature values");

  std::string buf;
  buf.reserve(16 + 4 * fm.values.size());
  buf.append("FMAP");
  put_u32(buf, kFmapVersion);
  put_u32(buf, static_cast<std::uint32_t>(fm.channels));
  put_u32(buf, static_cast<std::uint32_t>(fm.fh));
  put_u32(buf, static_cast<std::uint32_t>(fm.fw));
  for (float v : fm.values) put_u32(buf, std::bit_cast<std::uint32_t>(v));

  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open for writing");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) fail(path, "write failed");
}

FeatureMaps read_fmap(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "unreadable file");
  std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  if (buf.size() < 20 || std::memcmp(buf.data(), "FMAP", 4) != 0) fail(path, "bad magic");
  const std::uint32_t version = get_u32(buf.data() + 4);
  if (version != kFmapVersion)
    fail(path, "version mismatch: got " + std::to_string(version) + ", expected " +
                   std::to_string(kFmapVersion));
  const std::uint32_t k = get_u32(buf.data() + 8);
  const std::uint32_t fh = get_u32(buf.data() + 12);
  const std::uint32_t fw = get_u32(buf.data() + 16);
  if (k < 1 || fh < 1 || fw < 1) fail(path, "corrupt header: zero dimension");
  const std::uint64_t n = static_cast<std::uint64_t>(k) * fh * fw;
  if (buf.size() != 20 + 4 * n)
    fail(path, "length mismatch: expected " + std::to_string(20 + 4 * n) + " bytes, got " +
                   std::to_string(buf.size()));

  FeatureMaps fm(static_cast<int>(k), static_cast<int>(fh), static_cast<int>(fw));
  for (std::uint64_t i = 0; i < n; ++i)
    fm.values[i] = std::bit_cast<float>(get_u32(buf.data() + 20 + 4 * i));
  return fm;
}

void write_class_weights(const ClassWeights& cw, const std::filesystem::path& path) {
  FeatureMaps fm(2, cw.classes, cw.channels);
  for (int c = 0; c < cw.classes; ++c) {
    for (int k = 0; k < cw.channels; ++k) fm.at(0, k, c) = static_cast<float>(cw.at(c, k));
    fm.at(1, 0, c) = static_cast<float>(cw.bias[c]);
  }
  write_fmap(fm, path);
}

ClassWeights read_class_weights(const std::filesystem::path& path) {
  const FeatureMaps fm = read_fmap(path);
  if (fm.channels != 2) fail(path, "not a class-weights file: expected 2 planes");
  ClassWeights cw(fm.fh, fm.fw);
  for (int c = 0; c < cw.classes; ++c) {
    for (int k = 0; k < cw.channels; ++k) cw.at(c, k) = fm.at(0, k, c);
    cw.bias[c] = fm.at(1, 0, c);
  }
  return cw;
}

void write_saliency(const SaliencyMap& sm, const std::filesystem::path& path) {
  FeatureMaps fm(1, sm.height, sm.width);
  for (std::size_t i = 0; i < sm.values.size(); ++i) fm.values[i] = static_cast<float>(sm.values[i]);
  write_fmap(fm, path);
}

SaliencyMap read_saliency(const std::filesystem::path& path) {
  const FeatureMaps fm = read_fmap(path);
  if (fm.channels != 1) fail(path, "not a saliency file: expected 1 channel");
  SaliencyMap sm(fm.fw, fm.fh);
  for (std::size_t i = 0; i < sm.values.size(); ++i) sm.values[i] = fm.values[i];
  return sm;
}

}  // namespace roadseg
