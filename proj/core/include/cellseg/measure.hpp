#pragma once

#include <cstddef>
#include <vector>

#include "cellseg/segment.hpp"

namespace cellseg {

inline constexpr double kDefaultSphericityThreshold = 1.1;

struct RegionStats {
  Label label = 0;
  std::size_t area = 0;       ///< pixel count
  std::size_t perimeter = 0;  ///< distinct Moore contour points
  double r_p = 0.0;           ///< perimeter / (2 pi)
  double r_a = 0.0;           ///< sqrt(area / pi)
  double sphericity = 0.0;    ///< r_p / r_a
  bool is_spheric = false;    ///< sphericity < threshold
};

/// Stats for every label present in the map, in increasing label order.
std::vector<RegionStats> region_stats(const LabelMap& lmap,
                                      double threshold = kDefaultSphericityThreshold);

/// Stats of a single shape given as a mask (first component in raster order
/// for the perimeter, every set pixel for the area).
RegionStats shape_stats(const BinaryMask& mask, double threshold = kDefaultSphericityThreshold);

struct CellCounts {
  std::size_t spheric = 0;
  std::size_t nonspheric = 0;
  std::size_t rejected = 0;  ///< area below min_area
  std::size_t total() const noexcept { return spheric + nonspheric + rejected; }
  friend bool operator==(const CellCounts&, const CellCounts&) = default;
};

CellCounts count_cells(const std::vector<RegionStats>& stats, std::size_t min_area);

}  // namespace cellseg
