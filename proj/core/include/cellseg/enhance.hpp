#pragma once

#include "cellseg/raster.hpp"

namespace cellseg {

enum class Emphasis { Prod, Square, Log };

/// Product of the three channels into one grayscale plane.
RasterImage emphasize_prod(const RasterImage& img);

/// p^2 per channel.
RasterImage emphasize_square(const RasterImage& img);

/// sqrt(|log10(p + 1/512)|) per channel, divided by its value at p = 0 so
/// that the output stays in [0,1].
///
/// Strictly decreasing on [0, 1 - 1/512]; above that the absolute value
/// folds the slightly positive logarithm back up, giving a short rising tail.
RasterImage emphasize_log(const RasterImage& img);

/// The unscaled log emphasis for one intensity.
double log_emphasis_raw(double p);

/// sqrt(log10(512)), the raw log emphasis at p = 0.
double log_emphasis_scale();

RasterImage emphasize(const RasterImage& img, Emphasis kind);

}  // namespace cellseg
