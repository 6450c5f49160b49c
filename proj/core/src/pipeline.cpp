#include "cellseg/pipeline.hpp"

#include <array>
#include <exception>

#include "cellseg/errors.hpp"
#include "cellseg/morphology.hpp"

namespace cellseg {

const std::vector<std::string>& pipeline_stages() {
  static const std::vector<std::string> stages{
      "filtered", "compared", "emphasized", "otsu_mask", "cleared_mask", "mask",
      "masked",   "smoothed", "relief",     "watershed", "merged"};
  return stages;
}

namespace {

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

}  // namespace

SegmentationResult run_pipeline(const RasterImage& img, const PipelineConfig& cfg,
                                const StageObserver& observer) {
  auto emit = [&](std::string_view name, const auto& value) {
    if (observer) observer(name, StageValue(value));
  };

  stage("input", [&] {
    validate(cfg);
    if (img.channels() != 3) throw InvalidArgument("a 3-channel image is required");
    return 0;
  });

  const WindowPlan plan = stage("plan_window", [&] {
    return plan_window(img.width(), img.height(), cfg.window_rule);
  });
  const RasterImage filtered = stage("rank_filter", [&] { return rank_filter(img, plan, cfg.filter_kind); });
  emit("filtered", filtered);
  const RasterImage compared = stage("compare", [&] {
    return compare(img, filtered, cfg.filter_kind, cfg.compare_mode);
  });
  emit("compared", compared);
  const RasterImage emphasized = stage("emphasis", [&] {
    RasterImage e = emphasize(compared, cfg.emphasis);
    const bool invert = cfg.polarity == Polarity::Bright && cfg.filter_kind == FilterKind::Median &&
                        cfg.emphasis == Emphasis::Log;
    return invert ? negative(e) : e;
  });
  emit("emphasized", emphasized);

  const int planes = emphasized.channels();
  std::array<BinaryMask, 3> binary;
  stage("otsu", [&] {
    for (int c = 0; c < planes; ++c) {
      const RasterImage ch = channel(emphasized, c);
      binary[static_cast<std::size_t>(c)] = apply_threshold(ch, otsu(histogram(ch)).level);
    }
    return 0;
  });
  auto as_image = [&](const std::array<BinaryMask, 3>& masks) {
    if (planes == 1) return to_image(masks[0]);
    return merge_channels(to_image(masks[0]), to_image(masks[1]), to_image(masks[2]));
  };
  if (observer) emit("otsu_mask", as_image(binary));

  std::array<BinaryMask, 3> cleared;
  stage("clearance", [&] {
    const StructuringElement se = disk_se(1);
    for (int c = 0; c < planes; ++c) {
      cleared[static_cast<std::size_t>(c)] = clear_small_objects(binary[static_cast<std::size_t>(c)], se);
    }
    return 0;
  });
  if (observer) emit("cleared_mask", as_image(cleared));

  SegmentationResult result;
  result.mask = stage("combine", [&] {
    return planes == 1 ? cleared[0] : combine_channels(cleared[0], cleared[1], cleared[2], cfg.combine_rule);
  });
  emit("mask", result.mask);

  const RasterImage masked = stage("apply_mask", [&] {
    return apply_mask(to_gray(img, GrayMode::Y1), result.mask);
  });
  emit("masked", masked);

  const RasterImage smoothed = stage("smoothing", [&] {
    if (!cfg.smoothing) return masked;
    const int radius = plan_window(img.width(), img.height(), cfg.smoothing_rule).radius;
    const StructuringElement se = disk_se(radius);
    return close_by_reconstruction(open_by_reconstruction(masked, se), se);
  });
  emit("smoothed", smoothed);

  const RasterImage relief = stage("negative", [&] {
    return cfg.polarity == Polarity::Bright ? negative(smoothed) : smoothed;
  });
  emit("relief", relief);

  result.watershed = stage("watershed", [&] { return watershed(relief, result.mask); });
  emit("watershed", result.watershed);

  result.labels = stage("merge", [&] {
    return merge_by_bcr(result.watershed, cfg.bcr_threshold, BcrOptions{cfg.bcr_abs_curvature});
  });
  emit("merged", result.labels);

  result.stats = stage("measure", [&] { return region_stats(result.labels, cfg.sphericity_threshold); });
  result.counts = stage("count", [&] { return count_cells(result.stats, cfg.min_area); });
  return result;
}

}  // namespace cellseg
