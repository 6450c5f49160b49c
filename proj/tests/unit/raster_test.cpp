#include <gtest/gtest.h>

#include <random>

#include "cellseg/errors.hpp"
#include "cellseg/raster.hpp"
#include "oracles.hpp"

using namespace cellseg;

namespace {

RasterImage pixel3(double r, double g, double b) {
  const double v[] = {r, g, b};
  return RasterImage::from_unit(1, 1, 3, v);
}

RasterImage constant1(int w, int h, double v) { return RasterImage(w, h, 1, from_unit(v)); }

}  // namespace

TEST(Raster, FixedPointLevelsAreExact) {
  for (int k = 0; k < 256; ++k) {
    EXPECT_EQ(quantize_level(from_level(k)), k);
    EXPECT_EQ(from_level(k), from_unit(k / 255.0));
  }
  EXPECT_EQ(quantize_level(kIntensityMax), 255);
  EXPECT_EQ(quantize_level(0), 0);
}

TEST(Raster, QuantizeMatchesRoundToNearest) {
  for (int q = 0; q <= 65535; q += 7) {
    const int expected = static_cast<int>(std::floor(q / 65535.0 * 255.0 + 0.5));
    EXPECT_EQ(quantize_level(static_cast<Intensity>(q)), expected) << q;
  }
}

TEST(Raster, ConstructorValidates) {
  EXPECT_THROW(RasterImage(0, 3, 1), InvalidArgument);
  EXPECT_THROW(RasterImage(3, 3, 2), InvalidArgument);
  EXPECT_THROW(BinaryMask(3, 0), InvalidArgument);
  const double two[] = {0.1, 0.2};
  EXPECT_THROW(RasterImage::from_unit(1, 1, 1, two), DimensionMismatch);
}

TEST(Raster, FromUnitClamps) {
  EXPECT_EQ(from_unit(-0.5), 0);
  EXPECT_EQ(from_unit(1.5), kIntensityMax);
  EXPECT_EQ(from_unit(std::nan("")), 0);
}

TEST(ToGray, WhiteIsFixedForEveryMode) {
  for (GrayMode m : {GrayMode::Y1, GrayMode::Y2, GrayMode::Y3}) {
    EXPECT_EQ(to_gray(pixel3(1, 1, 1), m).at(0, 0), kIntensityMax);
  }
}

TEST(ToGray, BlackY3IsZero) { EXPECT_EQ(to_gray(pixel3(0, 0, 0), GrayMode::Y3).at(0, 0), 0); }

TEST(ToGray, PureRed) {
  const RasterImage red = pixel3(1, 0, 0);
  EXPECT_NEAR(to_gray(red, GrayMode::Y1).value(0, 0), 0.3, 1e-5);
  EXPECT_NEAR(to_gray(red, GrayMode::Y2).value(0, 0), 1.0 / 3.0, 1e-5);
  EXPECT_NEAR(to_gray(red, GrayMode::Y3).value(0, 0), 1.0, 1e-5);
}

TEST(ToGray, GrayTripletIsFixed) {
  for (int k = 0; k < 256; ++k) {
    const double v = k / 255.0;
    for (GrayMode m : {GrayMode::Y1, GrayMode::Y2, GrayMode::Y3}) {
      EXPECT_EQ(to_gray(pixel3(v, v, v), m).at(0, 0), from_level(k)) << k;
    }
  }
}

TEST(ToGray, RejectsSingleChannel) {
  EXPECT_THROW(to_gray(constant1(2, 2, 0.5), GrayMode::Y1), InvalidArgument);
}

TEST(Channels, SplitConstant) {
  RasterImage img(3, 2, 3);
  const double vals[] = {0.5, 0.2, 0.9};
  for (int c = 0; c < 3; ++c) {
    for (auto& q : img.plane(c)) q = from_unit(vals[c]);
  }
  const auto parts = split_channels(img);
  for (int c = 0; c < 3; ++c) {
    for (auto q : parts[static_cast<std::size_t>(c)].plane(0)) EXPECT_EQ(q, from_unit(vals[c]));
  }
}

TEST(Channels, SplitMergeRoundTrip) {
  std::mt19937_64 rng(11);
  const RasterImage img = oracle::random_image(rng, 7, 5, 3);
  const auto [r, g, b] = split_channels(img);
  EXPECT_EQ(merge_channels(r, g, b), img);
}

TEST(Channels, ChannelHoldsTripletElement) {
  std::mt19937_64 rng(12);
  const RasterImage img = oracle::random_image(rng, 2, 2, 3);
  const auto parts = split_channels(img);
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < 2; ++y) {
      for (int x = 0; x < 2; ++x) EXPECT_EQ(parts[static_cast<std::size_t>(c)].at(x, y), img.at(x, y, c));
    }
  }
  EXPECT_THROW(split_channels(constant1(2, 2, 0)), InvalidArgument);
}

TEST(Histogram, ConstantZero) {
  const Histogram h = histogram(constant1(10, 10, 0.0));
  EXPECT_EQ(h.bins[0], 100u);
  EXPECT_EQ(h.total, 100u);
  for (int p = 1; p < 256; ++p) EXPECT_EQ(h.bins[static_cast<std::size_t>(p)], 0u);
}

TEST(Histogram, HalfBlackHalfWhite) {
  RasterImage img(10, 10, 1);
  for (int y = 0; y < 10; ++y) {
    for (int x = 5; x < 10; ++x) img.at(x, y) = kIntensityMax;
  }
  const Histogram h = histogram(img);
  EXPECT_EQ(h.bins[0], 50u);
  EXPECT_EQ(h.bins[255], 50u);
}

TEST(Histogram, Conservation) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 20; ++i) {
    const RasterImage img = oracle::random_image(rng, 1 + i, 3 + i, 1);
    const Histogram h = histogram(img);
    std::uint64_t sum = 0;
    for (auto b : h.bins) sum += b;
    EXPECT_EQ(sum, img.plane_size());
    EXPECT_EQ(h.total, img.plane_size());
  }
}

TEST(Negative, Values) {
  EXPECT_EQ(negative(constant1(1, 1, 0.0)).at(0, 0), kIntensityMax);
  EXPECT_EQ(negative(constant1(1, 1, 1.0)).at(0, 0), 0);
  EXPECT_EQ(negative(RasterImage(1, 1, 1, from_level(128))).at(0, 0), from_level(127));
  EXPECT_NEAR(negative(constant1(1, 1, 0.5)).value(0, 0), 0.5, 1.0 / 65535);
}

TEST(Negative, IsAnInvolution) {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 10; ++i) {
    RasterImage img(9, 4, 3);
    std::uniform_int_distribution<int> any(0, 65535);
    for (auto& q : img.data()) q = static_cast<Intensity>(any(rng));
    EXPECT_EQ(negative(negative(img)), img);
  }
}

TEST(Compare, EqualImagesMinRateIsOne) {
  std::mt19937_64 rng(15);
  RasterImage img = oracle::random_image(rng, 8, 8, 3);
  for (auto& q : img.data()) q = std::max<Intensity>(q, 257);
  const RasterImage r = compare(img, img, FilterKind::Min, CompareMode::Rate);
  for (auto q : r.data()) EXPECT_EQ(q, kIntensityMax);
}

TEST(Compare, MinDifference) {
  const RasterImage r = compare(constant1(1, 1, 0.8), constant1(1, 1, 0.2), FilterKind::Min, CompareMode::Difference);
  EXPECT_NEAR(r.value(0, 0), 0.6, 1e-4);
}

TEST(Compare, MedianRateOfZeroIsZero) {
  const RasterImage r = compare(constant1(1, 1, 0.0), constant1(1, 1, 0.5), FilterKind::Median, CompareMode::Rate);
  EXPECT_EQ(r.at(0, 0), 0);
}

TEST(Compare, OrientationPerFilterKind) {
  const RasterImage o = constant1(1, 1, 0.4);
  const RasterImage f = constant1(1, 1, 0.8);
  // min: filtered / original, clamped
  EXPECT_EQ(compare(o, f, FilterKind::Min, CompareMode::Rate).at(0, 0), kIntensityMax);
  // max and median: original / filtered
  EXPECT_NEAR(compare(o, f, FilterKind::Max, CompareMode::Rate).value(0, 0), 0.5, 1e-4);
  EXPECT_NEAR(compare(o, f, FilterKind::Median, CompareMode::Rate).value(0, 0), 0.5, 1e-4);
  // max: filtered - original; median: original - filtered, clamped
  EXPECT_NEAR(compare(o, f, FilterKind::Max, CompareMode::Difference).value(0, 0), 0.4, 1e-4);
  EXPECT_EQ(compare(o, f, FilterKind::Median, CompareMode::Difference).at(0, 0), 0);
}

TEST(Compare, GuardedDivision) {
  // Denominator below 1/512 is replaced by 1/512.
  const RasterImage tiny(1, 1, 1, 1);  // 1/65535
  const RasterImage o = constant1(1, 1, 0.001);
  EXPECT_NEAR(compare(o, tiny, FilterKind::Median, CompareMode::Rate).value(0, 0), o.value(0, 0) * 512, 1e-4);
}

TEST(Compare, MinDifferenceOfSelfIsZero) {
  std::mt19937_64 rng(16);
  const RasterImage img = oracle::random_image(rng, 6, 6, 3);
  const RasterImage diff = compare(img, img, FilterKind::Min, CompareMode::Difference);
  for (auto q : diff.data()) EXPECT_EQ(q, 0);
}

TEST(Compare, OutputsStayInRange) {
  std::mt19937_64 rng(17);
  for (FilterKind k : {FilterKind::Min, FilterKind::Max, FilterKind::Median}) {
    for (CompareMode m : {CompareMode::Rate, CompareMode::Difference}) {
      const RasterImage a = oracle::random_image(rng, 8, 8, 1);
      const RasterImage b = oracle::random_image(rng, 8, 8, 1);
      const RasterImage r = compare(a, b, k, m);
      EXPECT_EQ(r.width(), 8);
    }
  }
  EXPECT_THROW(compare(constant1(2, 2, 0), constant1(3, 2, 0), FilterKind::Min, CompareMode::Rate),
               DimensionMismatch);
}

TEST(MaskConversion, RoundTrip) {
  std::mt19937_64 rng(18);
  const BinaryMask m = oracle::random_mask(rng, 9, 7);
  EXPECT_EQ(to_mask(to_image(m)), m);
}
