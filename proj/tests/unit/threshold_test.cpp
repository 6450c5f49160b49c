#include <gtest/gtest.h>

#include <random>

#include "cellseg/threshold.hpp"
#include "oracles.hpp"

using namespace cellseg;

namespace {

Histogram make_hist(std::initializer_list<std::pair<int, std::uint64_t>> bins) {
  Histogram h;
  for (auto [p, n] : bins) {
    h.bins[static_cast<std::size_t>(p)] = n;
    h.total += n;
  }
  return h;
}

Histogram random_hist(std::mt19937_64& rng) {
  Histogram h;
  std::uniform_int_distribution<int> shape(0, 3);
  std::uniform_int_distribution<std::uint64_t> count(0, 1000);
  std::uniform_int_distribution<int> bin(0, 255);
  switch (shape(rng)) {
    case 0:  // dense
      for (auto& b : h.bins) b = count(rng);
      break;
    case 1:  // a few spikes
      for (int i = 0; i < 4; ++i) h.bins[static_cast<std::size_t>(bin(rng))] += count(rng) + 1;
      break;
    case 2: {  // symmetric pair of spikes, forcing exact ties
      const int a = bin(rng) % 100;
      const int b = 255 - a;
      const std::uint64_t n = count(rng) + 1;
      h.bins[static_cast<std::size_t>(a)] = n;
      h.bins[static_cast<std::size_t>(b)] = n;
      break;
    }
    default:  // sparse, small counts
      for (auto& b : h.bins) b = (count(rng) % 7 == 0) ? count(rng) % 5 : 0;
      break;
  }
  for (auto b : h.bins) h.total += b;
  return h;
}

}  // namespace

TEST(Otsu, TwoSpikes) {
  const Histogram h = make_hist({{50, 100}, {200, 100}});
  const OtsuStats s = otsu(h);
  EXPECT_EQ(s.level, oracle::otsu_level(h));
  EXPECT_EQ(s.level, 50);  // every k in [50,199] ties; the smallest wins
  EXPECT_FALSE(s.degenerate);
  EXPECT_NEAR(s.sigma_b, 75.0 * 75.0, 1e-9);
}

TEST(Otsu, ConstantIsDegenerate) {
  const OtsuStats s = otsu(make_hist({{77, 400}}));
  EXPECT_TRUE(s.degenerate);
  EXPECT_EQ(s.level, 77);
  EXPECT_EQ(s.sigma_b, 0.0);
}

TEST(Otsu, MatchesExhaustiveScan) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 300; ++i) {
    const Histogram h = random_hist(rng);
    if (h.total == 0) continue;
    const int expected = oracle::otsu_level(h);
    const OtsuStats s = otsu(h);
    if (expected < 0) {
      EXPECT_TRUE(s.degenerate);
    } else {
      EXPECT_EQ(s.level, expected) << "histogram " << i;
    }
  }
}

TEST(Otsu, StatsInvariants) {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 200; ++i) {
    const Histogram h = random_hist(rng);
    if (h.total == 0) continue;
    const OtsuStats s = otsu(h);
    EXPECT_GE(s.sigma_b, 0.0);
    if (s.degenerate) continue;
    EXPECT_NEAR(s.omega1 + s.omega2, 1.0, 1e-9);
    EXPECT_NEAR(s.omega1 * s.mu1 + s.omega2 * s.mu2, s.mu_t, 1e-9);
  }
}

TEST(Otsu, InvariantUnderScaling) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 200; ++i) {
    Histogram h = random_hist(rng);
    if (h.total == 0) continue;
    Histogram scaled = h;
    scaled.total = 0;
    for (auto& b : scaled.bins) {
      b *= 37;
      scaled.total += b;
    }
    EXPECT_EQ(otsu(h).level, otsu(scaled).level);
  }
}

TEST(ApplyThreshold, Examples) {
  std::mt19937_64 rng(24);
  const RasterImage img = oracle::random_image(rng, 8, 8, 1);
  EXPECT_FALSE(apply_threshold(img, 255).any());
  EXPECT_EQ(apply_threshold(RasterImage(4, 4, 1, kIntensityMax), 0).count(), 16u);

  RasterImage half(10, 4, 1);
  BinaryMask bright(10, 4);
  for (int y = 0; y < 4; ++y) {
    for (int x = 5; x < 10; ++x) {
      half.at(x, y) = kIntensityMax;
      bright.set(x, y, true);
    }
  }
  EXPECT_EQ(apply_threshold(half, 127), bright);
}

TEST(ApplyThreshold, MonotoneInLevel) {
  std::mt19937_64 rng(25);
  const RasterImage img = oracle::random_image(rng, 16, 16, 1);
  for (int level = 1; level < 256; ++level) {
    const BinaryMask lo = apply_threshold(img, level - 1);
    const BinaryMask hi = apply_threshold(img, level);
    for (std::size_t i = 0; i < lo.size(); ++i) EXPECT_TRUE(!hi[i] || lo[i]);
  }
}

TEST(CombineChannels, TruthTable) {
  for (int bits = 0; bits < 8; ++bits) {
    BinaryMask m[3] = {BinaryMask(1, 1), BinaryMask(1, 1), BinaryMask(1, 1)};
    int set = 0;
    for (int c = 0; c < 3; ++c) {
      m[c].set(0, 0, (bits >> c) & 1);
      set += (bits >> c) & 1;
    }
    EXPECT_EQ(combine_channels(m[0], m[1], m[2], CombineRule::Strict).at(0, 0), set == 3);
    EXPECT_EQ(combine_channels(m[0], m[1], m[2], CombineRule::Patient).at(0, 0), set > 0);
    EXPECT_EQ(combine_channels(m[0], m[1], m[2], CombineRule::Halfway).at(0, 0), set > 1);
  }
}

TEST(CombineChannels, StrictHalfwayPatientNest) {
  std::mt19937_64 rng(26);
  for (int i = 0; i < 20; ++i) {
    const BinaryMask a = oracle::random_mask(rng, 12, 12);
    const BinaryMask b = oracle::random_mask(rng, 12, 12);
    const BinaryMask c = oracle::random_mask(rng, 12, 12);
    const BinaryMask s = combine_channels(a, b, c, CombineRule::Strict);
    const BinaryMask h = combine_channels(a, b, c, CombineRule::Halfway);
    const BinaryMask p = combine_channels(a, b, c, CombineRule::Patient);
    for (std::size_t k = 0; k < s.size(); ++k) {
      EXPECT_TRUE(!s[k] || h[k]);
      EXPECT_TRUE(!h[k] || p[k]);
    }
  }
}
