#pragma once

#include <string>
#include <string_view>

#include "cellseg/measure.hpp"
#include "cellseg/raster.hpp"
#include "cellseg/segment.hpp"

namespace cellseg {

/// "file,spheric,nonspheric,rejected,total"
std::string csv_header();

/// One newline-terminated CSV row. The file name is quoted when needed.
std::string csv_row(std::string_view file, const CellCounts& counts);

/// Copy of `source` (3 channels) with the label boundaries burned into the
/// red channel at full intensity.
RasterImage overlay(const RasterImage& source, const LabelMap& labels);

}  // namespace cellseg
