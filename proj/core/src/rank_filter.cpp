#include "cellseg/rank_filter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "cellseg/errors.hpp"

namespace cellseg {

std::vector<Offset> disk_offsets(int radius) {
  if (radius < 0) throw InvalidArgument("disk radius must be non-negative");
  std::vector<Offset> out;
  const int r2 = radius * radius;
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      if (dy * dy + dx * dx <= r2) out.push_back({dy, dx});
    }
  }
  return out;
}

std::uint64_t estimate_intervals(std::uint64_t n, IntervalRule rule) {
  if (n == 0) throw InvalidArgument("estimate_intervals: n must be at least 1");
  const double nd = static_cast<double>(n);
  double k = 0.0;
  switch (rule) {
    case IntervalRule::Sqrt:
      k = std::sqrt(nd);
      break;
    case IntervalRule::Log5:
      k = 5.0 * std::log10(nd);
      break;
    case IntervalRule::Sturges:
      k = 1.0 + 3.3 * std::log10(nd);
      break;
  }
  return static_cast<std::uint64_t>(std::floor(k + 0.5));
}

WindowPlan plan_window(int width, int height, IntervalRule rule) {
  if (width < 1 || height < 1) throw InvalidArgument("plan_window: empty image");
  WindowPlan plan;
  plan.n = static_cast<std::uint64_t>(width) * static_cast<std::uint64_t>(height);
  plan.k = estimate_intervals(plan.n, rule);
  const double r = std::floor(std::sqrt(static_cast<double>(plan.k) / std::numbers::pi) + 0.5);
  plan.radius = std::max(1, static_cast<int>(r));
  plan.offsets = disk_offsets(plan.radius);
  return plan;
}

RasterImage extend_borders(const RasterImage& img, int radius) {
  if (radius < 0) throw InvalidArgument("extend_borders: radius must be non-negative");
  if (radius == 0) return img;
  const int w = img.width();
  const int h = img.height();
  RasterImage out(w + 2 * radius, h + 2 * radius, img.channels());
  for (int c = 0; c < img.channels(); ++c) {
    auto src = img.plane(c);
    std::uint64_t sum = 0;
    for (Intensity q : src) sum += q;
    const std::uint64_t count = src.size();
    const auto mean = static_cast<Intensity>((2 * sum + count) / (2 * count));
    auto dst = out.plane(c);
    std::ranges::fill(dst, mean);
    for (int y = 0; y < h; ++y) {
      std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(y) * w, w,
                  dst.begin() + static_cast<std::ptrdiff_t>(y + radius) * out.width() + radius);
    }
  }
  return out;
}

namespace {

// Counts over all 65536 intensities, bucketed by the high byte so a rank
// query touches at most 256 + 256 cells.
class RankHistogram {
 public:
  RankHistogram() : fine_(65536, 0), coarse_(256, 0) {}

  void add(Intensity q) {
    ++fine_[q];
    ++coarse_[q >> 8];
  }
  void remove(Intensity q) {
    --fine_[q];
    --coarse_[q >> 8];
  }
  void clear() {
    std::ranges::fill(fine_, 0u);
    std::ranges::fill(coarse_, 0u);
  }

  // Value of 0-based rank `k` among the stored samples.
  Intensity select(std::uint32_t k) const {
    std::uint32_t seen = 0;
    int bucket = 0;
    while (seen + coarse_[static_cast<std::size_t>(bucket)] <= k) {
      seen += coarse_[static_cast<std::size_t>(bucket)];
      ++bucket;
    }
    int q = bucket << 8;
    while (seen + fine_[static_cast<std::size_t>(q)] <= k) {
      seen += fine_[static_cast<std::size_t>(q)];
      ++q;
    }
    return static_cast<Intensity>(q);
  }

 private:
  std::vector<std::uint32_t> fine_;
  std::vector<std::uint32_t> coarse_;
};

struct SlidingPlan {
  std::vector<Offset> leaving;   // dx such that dx - 1 is not in the row set
  std::vector<Offset> entering;  // dx such that dx + 1 is not in the row set
};

SlidingPlan make_sliding_plan(const std::vector<Offset>& offsets) {
  auto contains = [&](int dy, int dx) {
    return std::ranges::find(offsets, Offset{dy, dx}) != offsets.end();
  };
  SlidingPlan sp;
  for (const Offset& o : offsets) {
    if (!contains(o.dy, o.dx - 1)) sp.leaving.push_back(o);
    if (!contains(o.dy, o.dx + 1)) sp.entering.push_back(o);
  }
  return sp;
}

void filter_rows(std::span<const Intensity> ext, int ext_width, int radius,
                 const std::vector<Offset>& offsets, const SlidingPlan& sp, std::uint32_t rank,
                 int width, int y_begin, int y_end, std::span<Intensity> dst) {
  RankHistogram hist;
  auto sample = [&](int cx, int cy) {
    return ext[static_cast<std::size_t>(cy) * static_cast<std::size_t>(ext_width) +
               static_cast<std::size_t>(cx)];
  };
  for (int y = y_begin; y < y_end; ++y) {
    hist.clear();
    const int cy = y + radius;
    for (const Offset& o : offsets) hist.add(sample(radius + o.dx, cy + o.dy));
    auto row = dst.subspan(static_cast<std::size_t>(y) * static_cast<std::size_t>(width),
                           static_cast<std::size_t>(width));
    row[0] = hist.select(rank);
    for (int x = 1; x < width; ++x) {
      const int prev = x - 1 + radius;
      for (const Offset& o : sp.leaving) hist.remove(sample(prev + o.dx, cy + o.dy));
      for (const Offset& o : sp.entering) hist.add(sample(prev + 1 + o.dx, cy + o.dy));
      row[static_cast<std::size_t>(x)] = hist.select(rank);
    }
  }
}

}  // namespace

RasterImage rank_filter(const RasterImage& img, const WindowPlan& plan, FilterKind statistic) {
  if (plan.offsets.empty()) throw InvalidArgument("rank_filter: empty window");
  for (const Offset& o : plan.offsets) {
    if (std::abs(o.dy) > plan.radius || std::abs(o.dx) > plan.radius) {
      throw InvalidArgument("rank_filter: window offset exceeds the plan radius");
    }
  }
  const auto m = static_cast<std::uint32_t>(plan.offsets.size());
  std::uint32_t rank = 0;
  switch (statistic) {
    case FilterKind::Min:
      rank = 0;
      break;
    case FilterKind::Max:
      rank = m - 1;
      break;
    case FilterKind::Median:
      rank = (m - 1) / 2;
      break;
  }

  const RasterImage ext = extend_borders(img, plan.radius);
  const SlidingPlan sp = make_sliding_plan(plan.offsets);
  RasterImage out(img.width(), img.height(), img.channels());

  const int height = img.height();
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int workers = static_cast<int>(std::min<unsigned>(hw, static_cast<unsigned>(height)));

  for (int c = 0; c < img.channels(); ++c) {
    auto src = ext.plane(c);
    auto dst = out.plane(c);
    if (workers <= 1 || img.plane_size() < 4096) {
      filter_rows(src, ext.width(), plan.radius, plan.offsets, sp, rank, img.width(), 0, height,
                  dst);
      continue;
    }
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) {
      const int y0 = height * t / workers;
      const int y1 = height * (t + 1) / workers;
      pool.emplace_back([&, y0, y1] {
        filter_rows(src, ext.width(), plan.radius, plan.offsets, sp, rank, img.width(), y0, y1,
                    dst);
      });
    }
  }
  return out;
}

}  // namespace cellseg
