#include "cellseg/measure.hpp"

#include <cmath>
#include <numbers>

#include "cellseg/errors.hpp"

namespace cellseg {

namespace {

RegionStats classify(Label label, std::size_t area, std::size_t perimeter, double threshold) {
  RegionStats s;
  s.label = label;
  s.area = area;
  s.perimeter = perimeter;
  s.r_p = static_cast<double>(perimeter) / (2.0 * std::numbers::pi);
  s.r_a = std::sqrt(static_cast<double>(area) / std::numbers::pi);
  s.sphericity = s.r_p / s.r_a;
  s.is_spheric = s.sphericity < threshold;
  return s;
}

}  // namespace

std::vector<RegionStats> region_stats(const LabelMap& lmap, double threshold) {
  if (!(threshold > 0.0)) throw InvalidArgument("region_stats: threshold must be positive");
  std::vector<std::size_t> areas(static_cast<std::size_t>(lmap.region_count()) + 1, 0);
  for (std::size_t i = 0; i < lmap.size(); ++i) {
    const Label l = lmap[i];
    if (l < 0 || l > lmap.region_count()) throw InvalidArgument("region_stats: label out of range");
    ++areas[static_cast<std::size_t>(l)];
  }
  std::vector<RegionStats> out;
  for (Label l = 1; l <= lmap.region_count(); ++l) {
    const std::size_t area = areas[static_cast<std::size_t>(l)];
    if (area == 0) continue;
    out.push_back(classify(l, area, distinct_points(trace_contour(lmap, l)), threshold));
  }
  return out;
}

RegionStats shape_stats(const BinaryMask& mask, double threshold) {
  return classify(1, mask.count(), distinct_points(trace_contour(mask)), threshold);
}

CellCounts count_cells(const std::vector<RegionStats>& stats, std::size_t min_area) {
  CellCounts c;
  for (const RegionStats& s : stats) {
    if (s.area < min_area) {
      ++c.rejected;
    } else if (s.is_spheric) {
      ++c.spheric;
    } else {
      ++c.nonspheric;
    }
  }
  return c;
}

}  // namespace cellseg
