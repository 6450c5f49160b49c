#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cellseg/errors.hpp"
#include "cellseg/pnm.hpp"
#include "cellseg/report.hpp"
#include "cellseg/synthetic.hpp"
#include "oracles.hpp"

using namespace cellseg;
namespace fs = std::filesystem;

namespace {

RasterImage read_string(const std::string& bytes) {
  std::istringstream in(bytes);
  return read_pnm(in);
}

}  // namespace

TEST(Pnm, ColourRoundTrip) {
  std::mt19937_64 rng(51);
  const RasterImage img = oracle::random_image(rng, 13, 7, 3);
  std::ostringstream out;
  write_pnm(out, img);
  EXPECT_EQ(out.str().substr(0, 3), "P6\n");
  EXPECT_EQ(read_string(out.str()), img);
}

TEST(Pnm, GrayIsReplicated) {
  const RasterImage img = read_string(std::string("P5\n# note\n2 1\n255\n") + char(0) + char(255));
  ASSERT_EQ(img.channels(), 3);
  for (int c = 0; c < 3; ++c) {
    EXPECT_EQ(img.at(0, 0, c), 0);
    EXPECT_EQ(img.at(1, 0, c), kIntensityMax);
  }
}

TEST(Pnm, RejectsMalformedInput) {
  EXPECT_THROW(read_string("P3\n1 1\n255\n0 0 0\n"), IoError);
  EXPECT_THROW(read_string("P5\n2 2\n65535\n"), IoError);
  EXPECT_THROW(read_string("P5\n2 2\n255\nab"), IoError);
  EXPECT_THROW(read_string("P6\n-1 2\n255\n"), IoError);
  EXPECT_THROW(read_string(""), IoError);
  EXPECT_THROW(read_pnm(fs::path("/nonexistent/file.ppm")), IoError);
}

TEST(Pnm, WritesMasksAndLabels) {
  const fs::path dir = fs::temp_directory_path() / "cellseg_io_test";
  fs::create_directories(dir);
  BinaryMask m(3, 1);
  m.set(1, 0, true);
  write_pnm(dir / "m.pgm", m);
  const RasterImage back = read_pnm(dir / "m.pgm");
  EXPECT_EQ(back.at(0, 0), 0);
  EXPECT_EQ(back.at(1, 0), kIntensityMax);

  LabelMap lmap(2, 1);
  lmap.at(1, 0) = 300;
  lmap.set_region_count(300);
  write_pnm(dir / "l.pgm", lmap);
  std::ifstream in(dir / "l.pgm", std::ios::binary);
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(bytes, std::string("P5\n2 1\n65535\n") + std::string(2, '\0') + char(1) + char(44));
  fs::remove_all(dir);
}

TEST(Report, CsvFormat) {
  EXPECT_EQ(csv_header(), "file,spheric,nonspheric,rejected,total\n");
  EXPECT_EQ(csv_row("a.ppm", CellCounts{3, 2, 1}), "a.ppm,3,2,1,6\n");
  EXPECT_EQ(csv_row("a,b.ppm", CellCounts{}), "\"a,b.ppm\",0,0,0,0\n");
  EXPECT_EQ(csv_row("q\"x.ppm", CellCounts{}), "\"q\"\"x.ppm\",0,0,0,0\n");
}

TEST(Report, OverlayBurnsBoundariesIntoRed) {
  const RasterImage src(6, 6, 3, from_level(100));
  LabelMap lmap(6, 6);
  for (int y = 2; y < 4; ++y) {
    for (int x = 2; x < 4; ++x) lmap.at(x, y) = 1;
  }
  lmap.set_region_count(1);
  const RasterImage out = overlay(src, lmap);
  const BinaryMask edges = label_boundaries(lmap);
  for (int y = 0; y < 6; ++y) {
    for (int x = 0; x < 6; ++x) {
      EXPECT_EQ(out.at(x, y, 0), edges.at(x, y) ? kIntensityMax : from_level(100));
      EXPECT_EQ(out.at(x, y, 1), from_level(100));
      EXPECT_EQ(out.at(x, y, 2), from_level(100));
    }
  }
}

TEST(Synthetic, EmptySpecIsBackgroundOnly) {
  SyntheticSpec spec;
  spec.disks = 0;
  spec.blobs = 0;
  const SyntheticImage syn = generate_synthetic(1, spec);
  EXPECT_EQ(syn.truth.region_count(), 0);
  EXPECT_FALSE(syn.truth.foreground().any());
  EXPECT_EQ(syn.image.width(), 720);
  EXPECT_EQ(syn.image.height(), 576);
}

TEST(Synthetic, DeterministicPerSeed) {
  const SyntheticImage a = generate_synthetic(9, SyntheticSpec{});
  const SyntheticImage b = generate_synthetic(9, SyntheticSpec{});
  EXPECT_EQ(a.image, b.image);
  EXPECT_EQ(a.truth, b.truth);
  EXPECT_NE(a.image, generate_synthetic(10, SyntheticSpec{}).image);
}

TEST(Synthetic, TenDisksGiveTenRegions) {
  SyntheticSpec spec;
  spec.disks = 10;
  spec.blobs = 0;
  const SyntheticImage syn = generate_synthetic(2, spec);
  EXPECT_EQ(syn.truth.region_count(), 10);
  EXPECT_EQ(syn.kinds.size(), 10u);
  EXPECT_TRUE(oracle::labels_connected(syn.truth));
  for (Label l = 1; l <= 10; ++l) EXPECT_TRUE(syn.truth.region(l).any());
}

TEST(Synthetic, ImpossiblePlacementFails) {
  SyntheticSpec spec;
  spec.width = 60;
  spec.height = 60;
  spec.disks = 20;
  spec.retry_budget = 50;
  EXPECT_THROW(generate_synthetic(1, spec), InvalidArgument);
  spec.disks = -1;
  EXPECT_THROW(generate_synthetic(1, spec), InvalidArgument);
}

TEST(Synthetic, SpecParsing) {
  const SyntheticSpec spec = parse_synthetic_spec("disks = 4\nblobs = 2 # few\nnoise = 0.01\n");
  EXPECT_EQ(spec.disks, 4);
  EXPECT_EQ(spec.blobs, 2);
  EXPECT_EQ(spec.noise, 0.01);
  EXPECT_THROW(parse_synthetic_spec("cells = 4\n"), ConfigError);
}
