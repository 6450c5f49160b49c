#pragma once

#include <cstdint>
#include <vector>

#include "cellseg/geometry.hpp"
#include "cellseg/raster.hpp"

namespace cellseg {

/// Rules for the statistically appropriate number of intervals of a set of
/// n points; reused to size the filtering window.
enum class IntervalRule {
  Sqrt,     ///< k = sqrt(n)
  Log5,     ///< k = 5 log10(n)
  Sturges,  ///< k = 1 + 3.3 log10(n)
};

/// Lattice points of the origin-centred disk of the given radius, in raster
/// order (dy, then dx).
std::vector<Offset> disk_offsets(int radius);

struct WindowPlan {
  std::uint64_t n = 0;  ///< pixel count of the image
  std::uint64_t k = 0;  ///< interval count from the rule
  int radius = 1;
  std::vector<Offset> offsets;
};

/// Rounded interval count. Throws InvalidArgument for n == 0.
std::uint64_t estimate_intervals(std::uint64_t n, IntervalRule rule);

/// radius = round-half-up(sqrt(k / pi)), never below 1.
WindowPlan plan_window(int width, int height, IntervalRule rule);

/// Pads the image by `radius` pixels on every side. The frame holds the
/// per-channel mean of the source.
RasterImage extend_borders(const RasterImage& img, int radius);

/// Order-statistic filter over `plan.offsets`, applied per channel on the
/// mean-extended image and cropped back to the input size.
///
/// The median is the lower median: element (m - 1) / 2 of the sorted window.
RasterImage rank_filter(const RasterImage& img, const WindowPlan& plan, FilterKind statistic);

}  // namespace cellseg
