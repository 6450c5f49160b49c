#pragma once

#include "cellseg/raster.hpp"

namespace cellseg {

/// Otsu threshold selection result. Means are in level units (0..255).
struct OtsuStats {
  int level = 0;          ///< k*: levels <= k* form class 1
  double sigma_b = 0.0;   ///< between-class variance at k*
  double omega1 = 0.0;
  double omega2 = 0.0;
  double mu1 = 0.0;
  double mu2 = 0.0;
  double mu_t = 0.0;
  bool degenerate = false;  ///< every pixel in one bin; level is that bin
};

/// Exhaustive Otsu over all 256 candidates. Candidates leaving a class
/// empty are skipped; ties resolve to the smallest level. The maximization
/// is done in exact integer arithmetic so ties are genuine ties.
OtsuStats otsu(const Histogram& hist);

/// Pixels whose quantized level is strictly greater than `level`.
BinaryMask apply_threshold(const RasterImage& img, int level);

enum class CombineRule {
  Strict,   ///< set in all three channels
  Patient,  ///< set in any channel
  Halfway,  ///< set in at least two channels
};

BinaryMask combine_channels(const BinaryMask& m1, const BinaryMask& m2, const BinaryMask& m3,
                            CombineRule rule);

}  // namespace cellseg
