#include "cellseg/threshold.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include "cellseg/errors.hpp"

namespace cellseg {

namespace {

using boost::multiprecision::int256_t;

// sigma_B^2 = D^2 / (N^2 n1 n2) with D = s1 N - S n1, where n1, s1 are the
// pixel count and level sum of class 1. N is fixed per histogram, so
// candidates compare by D^2 / (n1 n2).
struct Candidate {
  int256_t d_squared;
  int256_t n1n2;
};

bool greater(const Candidate& a, const Candidate& b) {
  return a.d_squared * b.n1n2 > b.d_squared * a.n1n2;
}

}  // namespace

OtsuStats otsu(const Histogram& hist) {
  std::uint64_t total = 0;
  std::uint64_t level_sum = 0;
  for (int p = 0; p < kHistogramLevels; ++p) {
    total += hist.bins[static_cast<std::size_t>(p)];
    level_sum += static_cast<std::uint64_t>(p) * hist.bins[static_cast<std::size_t>(p)];
  }
  if (total == 0) throw InvalidArgument("otsu: empty histogram");
  if (total != hist.total) throw InvalidArgument("otsu: histogram total does not match its bins");

  const double n = static_cast<double>(total);
  OtsuStats stats;
  stats.mu_t = static_cast<double>(level_sum) / n;

  bool found = false;
  Candidate best{};
  std::uint64_t n1 = 0;
  std::uint64_t s1 = 0;
  std::uint64_t best_n1 = 0;
  std::uint64_t best_s1 = 0;
  for (int k = 0; k < kHistogramLevels - 1; ++k) {
    n1 += hist.bins[static_cast<std::size_t>(k)];
    s1 += static_cast<std::uint64_t>(k) * hist.bins[static_cast<std::size_t>(k)];
    const std::uint64_t n2 = total - n1;
    if (n1 == 0 || n2 == 0) continue;
    const int256_t d = int256_t(s1) * int256_t(total) - int256_t(level_sum) * int256_t(n1);
    Candidate c{d * d, int256_t(n1) * int256_t(n2)};
    if (!found || greater(c, best)) {
      found = true;
      best = c;
      best_n1 = n1;
      best_s1 = s1;
      stats.level = k;
    }
  }

  if (!found) {
    // All mass in a single bin.
    for (int p = 0; p < kHistogramLevels; ++p) {
      if (hist.bins[static_cast<std::size_t>(p)] != 0) {
        stats.level = p;
        break;
      }
    }
    stats.degenerate = true;
    stats.omega1 = 1.0;
    stats.omega2 = 0.0;
    stats.mu1 = stats.mu_t;
    stats.mu2 = 0.0;
    stats.sigma_b = 0.0;
    return stats;
  }

  const std::uint64_t best_n2 = total - best_n1;
  stats.omega1 = static_cast<double>(best_n1) / n;
  stats.omega2 = static_cast<double>(best_n2) / n;
  stats.mu1 = static_cast<double>(best_s1) / static_cast<double>(best_n1);
  stats.mu2 = static_cast<double>(level_sum - best_s1) / static_cast<double>(best_n2);
  stats.sigma_b = stats.omega1 * (stats.mu1 - stats.mu_t) * (stats.mu1 - stats.mu_t) +
                  stats.omega2 * (stats.mu2 - stats.mu_t) * (stats.mu2 - stats.mu_t);
  return stats;
}

BinaryMask apply_threshold(const RasterImage& img, int level) {
  if (img.channels() != 1) throw InvalidArgument("apply_threshold requires a single channel");
  BinaryMask out(img.width(), img.height());
  auto src = img.plane(0);
  for (std::size_t i = 0; i < src.size(); ++i) out.raw(i) = quantize_level(src[i]) > level ? 1 : 0;
  return out;
}

BinaryMask combine_channels(const BinaryMask& m1, const BinaryMask& m2, const BinaryMask& m3,
                            CombineRule rule) {
  if (!m1.same_shape(m2) || !m1.same_shape(m3)) {
    throw DimensionMismatch("combine_channels: masks differ in size");
  }
  BinaryMask out(m1.width(), m1.height());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int votes = int{m1[i]} + int{m2[i]} + int{m3[i]};
    bool set = false;
    switch (rule) {
      case CombineRule::Strict:
        set = votes == 3;
        break;
      case CombineRule::Patient:
        set = votes > 0;
        break;
      case CombineRule::Halfway:
        set = votes > 1;
        break;
    }
    out.raw(i) = set ? 1 : 0;
  }
  return out;
}

}  // namespace cellseg
