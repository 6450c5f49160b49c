#pragma once

#include <filesystem>
#include <iosfwd>

#include "cellseg/raster.hpp"
#include "cellseg/segment.hpp"

namespace cellseg {

/// Reads a binary 8-bit PGM (P5) or PPM (P6). Grayscale input is replicated
/// into three channels. Throws IoError on unreadable or malformed data.
RasterImage read_pnm(std::istream& in);
RasterImage read_pnm(const std::filesystem::path& path);

/// Writes P5 for one channel, P6 for three, quantized to 8 bits.
void write_pnm(std::ostream& out, const RasterImage& img);
void write_pnm(const std::filesystem::path& path, const RasterImage& img);

/// Mask as P5 with values 0 and 255.
void write_pnm(const std::filesystem::path& path, const BinaryMask& mask);

/// Labels as a 16-bit P5 (maxval 65535). Throws IoError when a label does not
/// fit in 16 bits.
void write_pnm(const std::filesystem::path& path, const LabelMap& labels);

}  // namespace cellseg
