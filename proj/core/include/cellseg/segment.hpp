#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "cellseg/geometry.hpp"
#include "cellseg/morphology.hpp"
#include "cellseg/raster.hpp"

namespace cellseg {

using Label = std::int32_t;

/// Per-pixel region ids. 0 marks watershed lines and background; regions
/// are numbered 1..region_count.
class LabelMap {
 public:
  LabelMap() = default;
  LabelMap(int width, int height);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return labels_.size(); }
  Label region_count() const noexcept { return region_count_; }
  void set_region_count(Label n) noexcept { region_count_ = n; }

  Label at(int x, int y) const noexcept { return labels_[index(x, y)]; }
  Label& at(int x, int y) noexcept { return labels_[index(x, y)]; }
  Label operator[](std::size_t i) const noexcept { return labels_[i]; }
  Label& operator[](std::size_t i) noexcept { return labels_[i]; }

  std::span<const Label> labels() const noexcept { return labels_; }

  /// Pixels carrying `label`.
  BinaryMask region(Label label) const;
  /// Pixels with any nonzero label.
  BinaryMask foreground() const;

  friend bool operator==(const LabelMap&, const LabelMap&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  Label region_count_ = 0;
  std::vector<Label> labels_;
};

/// Connected components of `mask` under `connectivity`, numbered in raster
/// order of their first pixel.
LabelMap label_components(const BinaryMask& mask,
                          const StructuringElement& connectivity = square_se(1));

/// img * mask, channel by channel.
RasterImage apply_mask(const RasterImage& img, const BinaryMask& mask);

/// Flooding watershed on a single-channel image quantized to 256 levels.
///
/// Regional minima (8-connected plateaus with no lower neighbour) seed the
/// basins, numbered in raster order. Pixels are flooded in ascending level,
/// first-in first-out within a level. A pixel that touches two different
/// basins when it is reached becomes a watershed line pixel (label 0).
/// When `domain` is given, pixels outside it stay 0 and do not take part.
LabelMap watershed(const RasterImage& img);
LabelMap watershed(const RasterImage& img, const BinaryMask& domain);

/// Removes gradient lines shorter than the mean line length and dilated
/// objects smaller than the mean object area, then subtracts the surviving
/// lines from the surviving dilation. An empty mask is returned unchanged.
BinaryMask clear_small_objects(const BinaryMask& mask, const StructuringElement& se);

/// True iff the dilations of regions u and v by `se` intersect.
/// Throws InvalidArgument for u == v, label 0 or a label absent from the map.
bool adjacency(const LabelMap& lmap, Label u, Label v,
               const StructuringElement& se = square_se(1));

struct Contour {
  std::vector<Point> points;
};

/// Moore-neighbour trace of the outer boundary of region u, clockwise,
/// starting at the region's first pixel in raster order. The walk stops when
/// the first move repeats; pixels on one-pixel-wide parts appear more than
/// once. Throws InvalidArgument for an empty region.
Contour trace_contour(const LabelMap& lmap, Label u);

/// Same walk over the set pixels of a mask (first component in raster order).
Contour trace_contour(const BinaryMask& mask);

/// Number of distinct points of the contour.
std::size_t distinct_points(const Contour& c);

/// k_i = (dx ddy - ddx dy) / (dx^2 + dy^2)^1.5 with cyclic central
/// differences (x is the column, y the row). Empty for fewer than 5 points;
/// a zero denominator yields k_i = 0.
std::vector<double> curvature(const Contour& c);

inline constexpr double kBcrDisallowed = std::numeric_limits<double>::infinity();

struct BcrReport {
  Label region_u = 0;
  Label region_v = 0;
  double bcr = kBcrDisallowed;
  double merged_curvature_mean = 0.0;
  double separate_curvature_mean = 0.0;
};

struct BcrOptions {
  bool abs_curvature = true;  ///< mean of |k_i| rather than of signed k_i
};

/// Boundary curvature ratio of merging u and v. The merged region is
/// u, v and the zero pixels 8-adjacent to both. The denominator pools the
/// curvature of both separate contours. Degenerate contours give
/// kBcrDisallowed. Throws InvalidArgument when u and v are not adjacent.
BcrReport bcr(const LabelMap& lmap, Label u, Label v, BcrOptions options = {});

/// Greedy merging: repeatedly merges the adjacent pair with the smallest
/// bcr below `threshold` (ties go to the smallest (u, v)), absorbing the
/// line pixels between them, until no pair qualifies. Labels are compacted
/// to 1..n in raster order of first appearance afterwards.
LabelMap merge_by_bcr(const LabelMap& lmap, double threshold = 1.0, BcrOptions options = {});

/// Beucher gradient of the label map: pixels whose 3x3 neighbourhood holds
/// more than one label value.
BinaryMask label_boundaries(const LabelMap& lmap);

}  // namespace cellseg
