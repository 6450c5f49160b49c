#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cellseg/enhance.hpp"
#include "cellseg/measure.hpp"
#include "cellseg/rank_filter.hpp"
#include "cellseg/raster.hpp"
#include "cellseg/segment.hpp"
#include "cellseg/threshold.hpp"

namespace cellseg {

/// Which way round the cells appear in the input.
///
/// Dark: cells darker than the background. The rate image already marks them
/// as the bright class after log emphasis, and their interiors are already
/// minima of the masked grayscale, so no negative transform is applied.
/// Bright: the negative is applied before Otsu (median + log only) and before
/// the watershed.
enum class Polarity { Dark, Bright };

struct PipelineConfig {
  FilterKind filter_kind = FilterKind::Median;
  CompareMode compare_mode = CompareMode::Rate;
  Emphasis emphasis = Emphasis::Log;
  CombineRule combine_rule = CombineRule::Halfway;
  IntervalRule window_rule = IntervalRule::Sqrt;
  IntervalRule smoothing_rule = IntervalRule::Sturges;
  double bcr_threshold = 1.0;
  double sphericity_threshold = kDefaultSphericityThreshold;
  std::size_t min_area = 0;
  bool bcr_abs_curvature = true;
  Polarity polarity = Polarity::Dark;
  bool smoothing = true;  ///< opening + closing by reconstruction before watershed

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

/// Throws ConfigError when a field is out of range.
void validate(const PipelineConfig& cfg);

/// Sets one field from its textual key and value. Throws ConfigError for
/// unknown keys and unparsable values.
void apply_setting(PipelineConfig& cfg, std::string_view key, std::string_view value);

/// Parses `key = value` lines; `#` starts a comment, blank lines are
/// ignored. Starts from `base`. Errors carry the line number.
PipelineConfig parse_config(std::string_view text, PipelineConfig base = {});

/// Every key accepted by apply_setting, in documentation order.
const std::vector<std::string>& config_keys();

/// One line per key in the config file format.
std::string format_config(const PipelineConfig& cfg);

struct SegmentationResult {
  BinaryMask mask;
  LabelMap watershed;  ///< before merging
  LabelMap labels;     ///< after merging
  std::vector<RegionStats> stats;
  CellCounts counts;
};

using StageValue = std::variant<RasterImage, BinaryMask, LabelMap>;

/// Receives intermediate results as they are produced.
using StageObserver = std::function<void(std::string_view stage, const StageValue& value)>;

/// Names passed to a StageObserver, in the order they are produced.
const std::vector<std::string>& pipeline_stages();

/// Full segmentation of a 3-channel image. A failing step is reported as a
/// StageError naming it.
SegmentationResult run_pipeline(const RasterImage& img, const PipelineConfig& cfg,
                                const StageObserver& observer = {});

}  // namespace cellseg
