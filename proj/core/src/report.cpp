#include "cellseg/report.hpp"

#include "cellseg/errors.hpp"

namespace cellseg {

std::string csv_header() { return "file,spheric,nonspheric,rejected,total\n"; }

std::string csv_row(std::string_view file, const CellCounts& counts) {
  std::string name(file);
  if (name.find_first_of(",\"\n\r") != std::string::npos) {
    std::string quoted = "\"";
    for (char c : name) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    name = quoted + '"';
  }
  return name + ',' + std::to_string(counts.spheric) + ',' + std::to_string(counts.nonspheric) + ',' +
         std::to_string(counts.rejected) + ',' + std::to_string(counts.total()) + '\n';
}

RasterImage overlay(const RasterImage& source, const LabelMap& labels) {
  if (source.channels() != 3) throw InvalidArgument("overlay: 3-channel source required");
  if (source.width() != labels.width() || source.height() != labels.height()) {
    throw DimensionMismatch("overlay: source and labels differ in size");
  }
  RasterImage out = source;
  const BinaryMask edges = label_boundaries(labels);
  auto red = out.plane(0);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i]) red[i] = kIntensityMax;
  }
  return out;
}

}  // namespace cellseg
