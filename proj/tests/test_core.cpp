#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "roadseg/fmap_io.hpp"
#include "roadseg/image_io.hpp"
#include "roadseg/rng.hpp"
#include "test_util.hpp"

using namespace roadseg;
using testutil::TempDir;

TEST_CASE("load_image decodes a 2x2 all-zero P6") {
  TempDir dir("core_p6_zero");
  testutil::write_bytes(dir / "z.ppm", std::string("P6\n2 2\n255\n") + std::string(12, '\0'));
  const Image img = load_image(dir / "z.ppm");
  CHECK(img.width == 2);
  CHECK(img.height == 2);
  CHECK(img.pixels == std::vector<std::uint8_t>(12, 0));
}

TEST_CASE("image save/load round trip is byte-identical") {
  TempDir dir("core_roundtrip");
  Image img(5, 3);
  Rng rng(7);
  for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng.uniform_index(256));

  for (const char* name : {"img.ppm", "img.png"}) {
    save_image(img, dir / name);
    const Image back = load_image(dir / name);
    CHECK(back == img);
  }
}

TEST_CASE("truncated P6 payload is rejected") {
  TempDir dir("core_p6_trunc");
  testutil::write_bytes(dir / "t.ppm", std::string("P6\n2 2\n255\n") + std::string(5, 'x'));
  CHECK_THROWS_WITH_AS(load_image(dir / "t.ppm"), doctest::Contains("corrupt payload"),
                       std::runtime_error);
}

TEST_CASE("load_image error cases") {
  TempDir dir("core_img_errors");
  CHECK_THROWS_AS(load_image(dir / "missing.ppm"), std::runtime_error);

  testutil::write_bytes(dir / "bad.ppm", "P3\n2 2\n255\n0 0 0");
  CHECK_THROWS_WITH_AS(load_image(dir / "bad.ppm"), doctest::Contains("unsupported format"),
                       std::runtime_error);

  testutil::write_bytes(dir / "hdr.ppm", "P6\nxx yy\n255\n");
  CHECK_THROWS_AS(load_image(dir / "hdr.ppm"), std::runtime_error);
}

TEST_CASE("load_mask maps raster values through the encoding") {
  TempDir dir("core_mask_map");
  // 3x1 raster {0, 1, 255}
  testutil::write_bytes(dir / "m.pgm", std::string("P5\n3 1\n255\n") + std::string("\x00\x01\xff", 3));
  const SegmentationMask m = load_mask(dir / "m.pgm");
  CHECK(m.labels == std::vector<Label>{Label::Other, Label::Road, Label::Void});
}

TEST_CASE("load_mask applies the declared default label") {
  TempDir dir("core_mask_default");
  testutil::write_bytes(dir / "m.pgm", std::string("P5\n2 1\n255\n") + std::string("\x07\x09", 2));
  MaskEncoding enc;
  enc.to_label = {{7, Label::Road}};
  enc.fallback = Label::Other;
  const SegmentationMask m = load_mask(dir / "m.pgm", enc);
  CHECK(m.labels == std::vector<Label>{Label::Road, Label::Other});
}

TEST_CASE("load_mask rejects unmapped values with no default") {
  TempDir dir("core_mask_unmapped");
  testutil::write_bytes(dir / "m.pgm", std::string("P5\n1 1\n255\n") + std::string("\x09", 1));
  MaskEncoding enc;
  enc.to_label = {{7, Label::Road}};
  CHECK_THROWS_WITH_AS(load_mask(dir / "m.pgm", enc), doctest::Contains("unmapped raster value 9"),
                       std::runtime_error);
}

TEST_CASE("mask save/load round trip over both formats") {
  TempDir dir("core_mask_roundtrip");
  SegmentationMask m(4, 2);
  m.labels = {Label::Road, Label::Other, Label::Void, Label::Road,
              Label::Other, Label::Other, Label::Road, Label::Void};
  for (const char* name : {"m.pgm", "m.png"}) {
    save_mask(m, dir / name);
    CHECK(load_mask(dir / name) == m);
  }
}

TEST_CASE("mask label histogram covers every pixel") {
  Rng rng(11);
  SegmentationMask m(13, 9);
  const Label choices[3] = {Label::Other, Label::Road, Label::Void};
  for (auto& l : m.labels) l = choices[rng.uniform_index(3)];
  std::map<Label, int> hist;
  for (auto l : m.labels) hist[l]++;
  int total = 0;
  for (auto& [l, n] : hist) total += n;
  CHECK(total == m.width * m.height);
}

TEST_CASE("fmap round trip is exact") {
  TempDir dir("core_fmap_roundtrip");
  FeatureMaps fm(3, 4, 5);
  Rng rng(42);
  for (auto& v : fm.values) v = static_cast<float>(rng.uniform(-10.0, 10.0));
  write_fmap(fm, dir / "a.fmap");
  CHECK(read_fmap(dir / "a.fmap") == fm);
}

TEST_CASE("fmap serialization is deterministic") {
  TempDir dir("core_fmap_det");
  FeatureMaps fm(2, 3, 3);
  Rng rng(1);
  for (auto& v : fm.values) v = static_cast<float>(rng.normal());
  write_fmap(fm, dir / "a.fmap");
  write_fmap(fm, dir / "b.fmap");
  CHECK(testutil::read_bytes(dir / "a.fmap") == testutil::read_bytes(dir / "b.fmap"));
}

TEST_CASE("fmap rejects bad magic and version and length") {
  TempDir dir("core_fmap_bad");
  FeatureMaps fm(1, 1, 1);
  fm.values[0] = 0.5f;
  write_fmap(fm, dir / "ok.fmap");
  std::string bytes = testutil::read_bytes(dir / "ok.fmap");
  CHECK(bytes.size() == 24);  // 4 magic + 4 version + 12 dims + 4 payload

  std::string bad = bytes;
  bad.replace(0, 4, "XMAP");
  testutil::write_bytes(dir / "magic.fmap", bad);
  CHECK_THROWS_WITH_AS(read_fmap(dir / "magic.fmap"), doctest::Contains("bad magic"),
                       std::runtime_error);

  bad = bytes;
  bad[4] = 9;
  testutil::write_bytes(dir / "ver.fmap", bad);
  CHECK_THROWS_WITH_AS(read_fmap(dir / "ver.fmap"), doctest::Contains("version mismatch"),
                       std::runtime_error);

  bad = bytes + std::string("\0\0\0\0", 4);
  testutil::write_bytes(dir / "len.fmap", bad);
  CHECK_THROWS_WITH_AS(read_fmap(dir / "len.fmap"), doctest::Contains("length mismatch"),
                       std::runtime_error);
}

TEST_CASE("class weights survive the fmap container") {
  TempDir dir("core_weights");
  ClassWeights cw(3, 5);
  Rng rng(3);
  for (auto& v : cw.w) v = rng.normal();
  for (auto& v : cw.bias) v = rng.normal();
  write_class_weights(cw, dir / "w.fmap");
  const ClassWeights back = read_class_weights(dir / "w.fmap");
  REQUIRE(back.classes == 3);
  REQUIRE(back.channels == 5);
  for (std::size_t i = 0; i < cw.w.size(); ++i)
    CHECK(back.w[i] == doctest::Approx(cw.w[i]).epsilon(1e-6));
  for (int c = 0; c < 3; ++c) CHECK(back.bias[c] == doctest::Approx(cw.bias[c]).epsilon(1e-6));
}

TEST_CASE("saliency maps ride the fmap container with K=1") {
  TempDir dir("core_sal");
  SaliencyMap sm(4, 3);
  Rng rng(5);
  for (auto& v : sm.values) v = rng.uniform();
  write_saliency(sm, dir / "s.fmap");
  const SaliencyMap back = read_saliency(dir / "s.fmap");
  REQUIRE(back.width == 4);
  REQUIRE(back.height == 3);
  for (std::size_t i = 0; i < sm.values.size(); ++i)
    CHECK(back.values[i] == doctest::Approx(sm.values[i]).epsilon(1e-6));
}
