#pragma once

#include <vector>

#include "cellseg/geometry.hpp"
#include "cellseg/raster.hpp"

namespace cellseg {

/// Flat structuring element: a set of offsets around the origin.
class StructuringElement {
 public:
  /// Throws InvalidArgument if `offsets` lacks the origin.
  explicit StructuringElement(std::vector<Offset> offsets);

  const std::vector<Offset>& offsets() const noexcept { return offsets_; }
  std::size_t size() const noexcept { return offsets_.size(); }
  int reach() const noexcept { return reach_; }  ///< max |dy|, |dx|

  /// Offsets reflected through the origin.
  StructuringElement reflected() const;

 private:
  std::vector<Offset> offsets_;
  int reach_ = 0;
};

/// Lattice disk: all offsets with dy^2 + dx^2 <= radius^2.
StructuringElement disk_se(int radius);

/// (2 radius + 1)^2 square. square_se(1) is the 8-neighbourhood.
StructuringElement square_se(int radius);

// Out-of-image neighbours are left out of the max/min, so erosion never
// exceeds the input and dilation never falls below it at the borders.

RasterImage dilate(const RasterImage& img, const StructuringElement& se);
RasterImage erode(const RasterImage& img, const StructuringElement& se);
RasterImage open(const RasterImage& img, const StructuringElement& se);
RasterImage close(const RasterImage& img, const StructuringElement& se);
/// dilate - erode.
RasterImage beucher_gradient(const RasterImage& img, const StructuringElement& se);

BinaryMask dilate(const BinaryMask& mask, const StructuringElement& se);
BinaryMask erode(const BinaryMask& mask, const StructuringElement& se);
BinaryMask open(const BinaryMask& mask, const StructuringElement& se);
BinaryMask close(const BinaryMask& mask, const StructuringElement& se);
BinaryMask beucher_gradient(const BinaryMask& mask, const StructuringElement& se);

/// Grayscale reconstruction by geodesic dilation of `marker` under `mask`,
/// run to stability. Requires marker <= mask pixelwise.
///
/// Uses a raster / anti-raster sweep followed by FIFO propagation; the
/// result is identical to reconstruct_by_iteration for symmetric `se`.
RasterImage reconstruct(const RasterImage& marker, const RasterImage& mask,
                        const StructuringElement& se = square_se(1));

struct IterativeReconstruction {
  RasterImage image;
  int iterations = 0;  ///< n at which rho(n) == rho(n-1)
};

/// rho(0) = marker, rho(n) = min(dilate(rho(n-1)), mask), stopped when
/// rho(n) == rho(n-1).
IterativeReconstruction reconstruct_by_iteration(const RasterImage& marker,
                                                 const RasterImage& mask,
                                                 const StructuringElement& se = square_se(1));

/// Erosion by `se` followed by reconstruction under the input.
RasterImage open_by_reconstruction(const RasterImage& img, const StructuringElement& se,
                                   const StructuringElement& connectivity = square_se(1));

/// Dual of open_by_reconstruction, computed as its conjugate under negation.
RasterImage close_by_reconstruction(const RasterImage& img, const StructuringElement& se,
                                    const StructuringElement& connectivity = square_se(1));

}  // namespace cellseg
