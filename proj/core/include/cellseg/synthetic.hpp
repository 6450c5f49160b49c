#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cellseg/raster.hpp"
#include "cellseg/segment.hpp"

namespace cellseg {

/// Parameters of a synthetic phase-contrast style micrograph: dark cells
/// with bright halo rings on a bright, unevenly lit background.
struct SyntheticSpec {
  int width = 720;
  int height = 576;

  int disks = 12;
  double disk_radius_min = 12.0;
  double disk_radius_max = 15.0;

  int blobs = 5;  ///< elongated ellipses
  double blob_length_min = 56.0;
  double blob_length_max = 70.0;
  double blob_width_min = 9.0;
  double blob_width_max = 11.0;

  double background = 0.78;       ///< mean background level
  double tint = 0.03;             ///< per-channel deviation of the background
  double illumination = 0.25;     ///< relative brightness change across the image
  double cell_step = 0.30;        ///< darkening at the cell edge
  double cell_dome = 0.30;        ///< extra darkening towards the cell centre
  int halo_width = 3;             ///< pixels
  double halo_gain = 0.22;        ///< brightening next to the cell edge
  int debris = 150;               ///< small dark specks outside cells
  double noise = 0.02;            ///< multiplicative gaussian sigma
  int gap = 6;                    ///< minimum clearance around each cell
  int retry_budget = 2000;        ///< placement attempts per cell

  friend bool operator==(const SyntheticSpec&, const SyntheticSpec&) = default;
};

/// Sets one field from text. Throws ConfigError for unknown keys or bad
/// values.
void apply_synthetic_setting(SyntheticSpec& spec, std::string_view key, std::string_view value);

/// Same `key = value` line format as the pipeline configuration.
SyntheticSpec parse_synthetic_spec(std::string_view text, SyntheticSpec base = {});

enum class ShapeKind { Disk, Blob };

struct SyntheticImage {
  RasterImage image;            ///< 3 channels, 8-bit levels
  LabelMap truth;               ///< cell interiors; blobs are labelled first
  std::vector<ShapeKind> kinds; ///< kinds[label - 1]
  BinaryMask halo;              ///< halo ring pixels
};

/// Deterministic for a given seed and spec. Throws InvalidArgument for
/// negative counts or when a cell cannot be placed within the retry budget.
SyntheticImage generate_synthetic(std::uint64_t seed, const SyntheticSpec& spec);

}  // namespace cellseg
