#include "roadseg/image_io.hpp"

#include <png.h>

#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

namespace roadseg {
namespace {

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& what) {
  throw std::runtime_error(path.string() + ": " + what);
}

bool has_magic(const std::filesystem::path& path, const char* magic, std::size_t n) {
  std::ifstream in(path, std::ios::binary);
  std::string head(n, '\0');
  in.read(head.data(), static_cast<std::streamsize>(n));
  return in.gcount() == static_cast<std::streamsize>(n) && std::memcmp(head.data(), magic, n) == 0;
}

// ---- PNM (binary PPM P6 / PGM P5) ----------------------------------------

// Reads the next header token, skipping whitespace and '#' comments.
std::string pnm_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (!std::isspace(c)) {
      tok.push_back(static_cast<char>(c));
      while ((c = in.peek()) != EOF && !std::isspace(c)) tok.push_back(static_cast<char>(in.get()));
      return tok;
    }
  }
  return tok;
}

struct PnmHeader {
  int width = 0;
  int height = 0;
};

PnmHeader read_pnm_header(std::istream& in, const std::filesystem::path& path, const char* expected_magic) {
  const std::string magic = pnm_token(in);
  if (magic != expected_magic) fail(path, "unsupported format: expected " + std::string(expected_magic));
  PnmHeader h;
  try {
    h.width = std::stoi(pnm_token(in));
    h.height = std::stoi(pnm_token(in));
    const int maxval = std::stoi(pnm_token(in));
    if (maxval != 255) fail(path, "unsupported format: maxval must be 255");
  } catch (const std::logic_error&) {
    fail(path, "corrupt header");
  }
  if (h.width < 1 || h.height < 1) fail(path, "corrupt header: non-positive dimensions");
  in.get();  // single whitespace byte before the payload
  return h;
}

std::vector<std::uint8_t> read_payload(std::istream& in, std::size_t n, const std::filesystem::path& path) {
  std::vector<std::uint8_t> buf(n);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(n));
  if (in.gcount() != static_cast<std::streamsize>(n)) fail(path, "corrupt payload");
  return buf;
}

// ---- PNG ------------------------------------------------------------------

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct PngRaster {
  int width = 0;
  int height = 0;
  int channels = 0;  // 1 (gray) or 3 (rgb)
  std::vector<std::uint8_t> data;
};

PngRaster read_png(const std::filesystem::path& path, int want_channels) {
  FilePtr fp(std::fopen(path.string().c_str(), "rb"));
  if (!fp) fail(path, "unreadable file");

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(path, "png init failed");
  }
  PngRaster out;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(path, "corrupt payload");
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);

  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);
  if (bit_depth != 8) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(path, "unsupported format: only 8-bit PNG supported");
  }
  if ((want_channels == 3 && color_type != PNG_COLOR_TYPE_RGB) ||
      (want_channels == 1 && color_type != PNG_COLOR_TYPE_GRAY)) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(path, want_channels == 3 ? "unsupported format: expected 8-bit RGB PNG"
                                  : "unsupported format: expected 8-bit gray PNG");
  }

  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  out.channels = want_channels;
  out.data.resize(static_cast<std::size_t>(out.width) * out.height * want_channels);
  rows.resize(out.height);
  for (int y = 0; y < out.height; ++y)
    rows[y] = out.data.data() + static_cast<std::size_t>(y) * out.width * want_channels;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

void write_png(const std::filesystem::path& path, int width, int height, int channels,
               const std::uint8_t* data) {
  FilePtr fp(std::fopen(path.string().c_str(), "wb"));
  if (!fp) fail(path, "cannot open for writing");

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    fail(path, "png init failed");
  }
  std::vector<png_bytep> rows(height);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    fail(path, "png write failed");
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, width, height, 8,
               channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < height; ++y)
    rows[y] = const_cast<png_bytep>(data + static_cast<std::size_t>(y) * width * channels);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

bool ext_is(const std::filesystem::path& path, const char* ext) {
  std::string e = path.extension().string();
  for (auto& ch : e) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return e == ext;
}

}  // namespace

MaskEncoding MaskEncoding::standard() {
  MaskEncoding enc;
  enc.to_label = {{0, Label::Other}, {1, Label::Road}, {255, Label::Void}};
  return enc;
}

Image load_image(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) fail(path, "unreadable file");
  if (has_magic(path, "\x89PNG", 4)) {
    PngRaster r = read_png(path, 3);
    Image img(r.width, r.height);
    img.pixels = std::move(r.data);
    return img;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "unreadable file");
  const PnmHeader h = read_pnm_header(in, path, "P6");
  Image img(h.width, h.height);
  img.pixels = read_payload(in, 3u * h.width * h.height, path);
  return img;
}

void save_image(const Image& img, const std::filesystem::path& path) {
  if (ext_is(path, ".png")) {
    write_png(path, img.width, img.height, 3, img.pixels.data());
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open for writing");
  out << "P6\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
  if (!out) fail(path, "write failed");
}

SegmentationMask load_mask(const std::filesystem::path& path, const MaskEncoding& enc) {
  if (!std::filesystem::exists(path)) fail(path, "unreadable file");
  std::vector<std::uint8_t> raw;
  int width = 0, height = 0;
  if (has_magic(path, "\x89PNG", 4)) {
    PngRaster r = read_png(path, 1);
    width = r.width;
    height = r.height;
    raw = std::move(r.data);
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "unreadable file");
    const PnmHeader h = read_pnm_header(in, path, "P5");
    width = h.width;
    height = h.height;
    raw = read_payload(in, static_cast<std::size_t>(width) * height, path);
  }

  SegmentationMask mask(width, height);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto it = enc.to_label.find(raw[i]);
    if (it != enc.to_label.end()) {
      mask.labels[i] = it->second;
    } else if (enc.fallback) {
      mask.labels[i] = *enc.fallback;
    } else {
      fail(path, "unmapped raster value " + std::to_string(raw[i]) + " with no default label");
    }
  }
  return mask;
}

void save_mask(const SegmentationMask& mask, const std::filesystem::path& path) {
  std::vector<std::uint8_t> raw(mask.labels.size());
  for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = static_cast<std::uint8_t>(mask.labels[i]);
  if (ext_is(path, ".png")) {
    write_png(path, mask.width, mask.height, 1, raw.data());
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open for writing");
  out << "P5\n" << mask.width << " " << mask.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) fail(path, "write failed");
}

void save_superpixel_debug_pgm(const SuperpixelMap& sp, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open for writing");
  out << "P5\n" << sp.width << " " << sp.height << "\n255\n";
  for (auto id : sp.component_id) out.put(static_cast<char>(id % 256));
  if (!out) fail(path, "write failed");
}

}  // namespace roadseg
