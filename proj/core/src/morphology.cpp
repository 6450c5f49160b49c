#include "cellseg/morphology.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>

#include "cellseg/errors.hpp"

namespace cellseg {

StructuringElement::StructuringElement(std::vector<Offset> offsets) : offsets_(std::move(offsets)) {
  if (std::ranges::find(offsets_, Offset{0, 0}) == offsets_.end()) {
    throw InvalidArgument("structuring element must contain the origin");
  }
  for (const Offset& o : offsets_) reach_ = std::max({reach_, std::abs(o.dy), std::abs(o.dx)});
}

StructuringElement StructuringElement::reflected() const {
  std::vector<Offset> r;
  r.reserve(offsets_.size());
  for (const Offset& o : offsets_) r.push_back({-o.dy, -o.dx});
  return StructuringElement(std::move(r));
}

StructuringElement disk_se(int radius) {
  if (radius < 0) throw InvalidArgument("disk_se: radius must be non-negative");
  std::vector<Offset> out;
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      if (dy * dy + dx * dx <= radius * radius) out.push_back({dy, dx});
    }
  }
  return StructuringElement(std::move(out));
}

StructuringElement square_se(int radius) {
  if (radius < 0) throw InvalidArgument("square_se: radius must be non-negative");
  std::vector<Offset> out;
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) out.push_back({dy, dx});
  }
  return StructuringElement(std::move(out));
}

namespace {

// For every offset o, combines src(p + o) into dst(p) over the pixels where
// p + o lies inside the image.
template <typename T, typename Combine>
void accumulate_shifted(std::span<const T> src, std::span<T> dst, int w, int h,
                        const std::vector<Offset>& offsets, Combine combine) {
  for (const Offset& o : offsets) {
    const int y0 = std::max(0, -o.dy);
    const int y1 = std::min(h, h - o.dy);
    const int x0 = std::max(0, -o.dx);
    const int x1 = std::min(w, w - o.dx);
    for (int y = y0; y < y1; ++y) {
      const T* s = src.data() + static_cast<std::ptrdiff_t>(y + o.dy) * w + o.dx;
      T* d = dst.data() + static_cast<std::ptrdiff_t>(y) * w;
      for (int x = x0; x < x1; ++x) d[x] = combine(d[x], s[x]);
    }
  }
}

std::vector<Offset> negated(const std::vector<Offset>& offsets) {
  std::vector<Offset> out;
  out.reserve(offsets.size());
  for (const Offset& o : offsets) out.push_back({-o.dy, -o.dx});
  return out;
}

template <typename T>
T take_max(T a, T b) {
  return a < b ? b : a;
}
template <typename T>
T take_min(T a, T b) {
  return b < a ? b : a;
}

bool is_symmetric(const StructuringElement& se) {
  for (const Offset& o : se.offsets()) {
    if (std::ranges::find(se.offsets(), Offset{-o.dy, -o.dx}) == se.offsets().end()) return false;
  }
  return true;
}

}  // namespace

// Dilation is Minkowski addition: out(p) = max over s of x(p - s).
RasterImage dilate(const RasterImage& img, const StructuringElement& se) {
  RasterImage out(img.width(), img.height(), img.channels(), 0);
  const auto pulls = negated(se.offsets());
  for (int c = 0; c < img.channels(); ++c) {
    accumulate_shifted<Intensity>(img.plane(c), out.plane(c), img.width(), img.height(), pulls,
                                  take_max<Intensity>);
  }
  return out;
}

RasterImage erode(const RasterImage& img, const StructuringElement& se) {
  RasterImage out(img.width(), img.height(), img.channels(), kIntensityMax);
  for (int c = 0; c < img.channels(); ++c) {
    accumulate_shifted<Intensity>(img.plane(c), out.plane(c), img.width(), img.height(),
                                  se.offsets(), take_min<Intensity>);
  }
  return out;
}

RasterImage open(const RasterImage& img, const StructuringElement& se) {
  return dilate(erode(img, se), se);
}

RasterImage close(const RasterImage& img, const StructuringElement& se) {
  return erode(dilate(img, se), se);
}

RasterImage beucher_gradient(const RasterImage& img, const StructuringElement& se) {
  RasterImage hi = dilate(img, se);
  const RasterImage lo = erode(img, se);
  auto h = hi.data();
  auto l = lo.data();
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = static_cast<Intensity>(h[i] - l[i]);
  return hi;
}

namespace {

// BinaryMask exposes bits read-only; these helpers work on raw byte planes.
std::vector<std::uint8_t> bytes_of(const BinaryMask& m) {
  return {m.bits().begin(), m.bits().end()};
}

BinaryMask mask_from(int w, int h, const std::vector<std::uint8_t>& bytes) {
  BinaryMask out(w, h);
  for (std::size_t i = 0; i < bytes.size(); ++i) out.raw(i) = bytes[i];
  return out;
}

}  // namespace

BinaryMask dilate(const BinaryMask& mask, const StructuringElement& se) {
  const auto src = bytes_of(mask);
  std::vector<std::uint8_t> dst(src.size(), 0);
  accumulate_shifted<std::uint8_t>(src, dst, mask.width(), mask.height(), negated(se.offsets()),
                                   [](std::uint8_t a, std::uint8_t b) -> std::uint8_t { return a | b; });
  return mask_from(mask.width(), mask.height(), dst);
}

BinaryMask erode(const BinaryMask& mask, const StructuringElement& se) {
  const auto src = bytes_of(mask);
  std::vector<std::uint8_t> dst(src.size(), 1);
  accumulate_shifted<std::uint8_t>(src, dst, mask.width(), mask.height(), se.offsets(),
                                   [](std::uint8_t a, std::uint8_t b) -> std::uint8_t { return a & b; });
  return mask_from(mask.width(), mask.height(), dst);
}

BinaryMask open(const BinaryMask& mask, const StructuringElement& se) {
  return dilate(erode(mask, se), se);
}

BinaryMask close(const BinaryMask& mask, const StructuringElement& se) {
  return erode(dilate(mask, se), se);
}

BinaryMask beucher_gradient(const BinaryMask& mask, const StructuringElement& se) {
  BinaryMask hi = dilate(mask, se);
  const BinaryMask lo = erode(mask, se);
  for (std::size_t i = 0; i < hi.size(); ++i) hi.raw(i) = (hi[i] && !lo[i]) ? 1 : 0;
  return hi;
}

namespace {

void require_marker_below_mask(const RasterImage& marker, const RasterImage& mask) {
  if (!marker.same_shape(mask)) throw DimensionMismatch("reconstruct: marker and mask differ in shape");
  auto m = marker.data();
  auto x = mask.data();
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] > x[i]) throw InvalidArgument("reconstruct: marker exceeds mask");
  }
}

void reconstruct_plane(std::span<Intensity> r, std::span<const Intensity> m, int w, int h,
                       const std::vector<Offset>& offsets) {
  std::vector<Offset> before;
  std::vector<Offset> after;
  for (const Offset& o : offsets) {
    if (o.dy < 0 || (o.dy == 0 && o.dx < 0)) before.push_back(o);
    if (o.dy > 0 || (o.dy == 0 && o.dx > 0)) after.push_back(o);
  }
  auto inside = [&](int x, int y) { return x >= 0 && y >= 0 && x < w && y < h; };
  auto idx = [w](int x, int y) { return static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x); };

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      Intensity v = r[idx(x, y)];
      for (const Offset& o : before) {
        if (inside(x + o.dx, y + o.dy)) v = std::max(v, r[idx(x + o.dx, y + o.dy)]);
      }
      r[idx(x, y)] = std::min(v, m[idx(x, y)]);
    }
  }

  std::deque<std::size_t> fifo;
  for (int y = h - 1; y >= 0; --y) {
    for (int x = w - 1; x >= 0; --x) {
      Intensity v = r[idx(x, y)];
      for (const Offset& o : after) {
        if (inside(x + o.dx, y + o.dy)) v = std::max(v, r[idx(x + o.dx, y + o.dy)]);
      }
      const std::size_t p = idx(x, y);
      r[p] = std::min(v, m[p]);
      for (const Offset& o : after) {
        if (!inside(x + o.dx, y + o.dy)) continue;
        const std::size_t q = idx(x + o.dx, y + o.dy);
        if (r[q] < r[p] && r[q] < m[q]) {
          fifo.push_back(p);
          break;
        }
      }
    }
  }

  while (!fifo.empty()) {
    const std::size_t p = fifo.front();
    fifo.pop_front();
    const int x = static_cast<int>(p % static_cast<std::size_t>(w));
    const int y = static_cast<int>(p / static_cast<std::size_t>(w));
    for (const Offset& o : offsets) {
      if ((o.dx == 0 && o.dy == 0) || !inside(x + o.dx, y + o.dy)) continue;
      const std::size_t q = idx(x + o.dx, y + o.dy);
      if (r[q] < r[p] && r[q] != m[q]) {
        r[q] = std::min(r[p], m[q]);
        fifo.push_back(q);
      }
    }
  }
}

}  // namespace

RasterImage reconstruct(const RasterImage& marker, const RasterImage& mask,
                        const StructuringElement& se) {
  require_marker_below_mask(marker, mask);
  if (!is_symmetric(se)) throw InvalidArgument("reconstruct: structuring element must be symmetric");
  RasterImage out = marker;
  for (int c = 0; c < out.channels(); ++c) {
    reconstruct_plane(out.plane(c), mask.plane(c), out.width(), out.height(), se.offsets());
  }
  return out;
}

IterativeReconstruction reconstruct_by_iteration(const RasterImage& marker,
                                                 const RasterImage& mask,
                                                 const StructuringElement& se) {
  require_marker_below_mask(marker, mask);
  IterativeReconstruction result{marker, 0};
  while (true) {
    RasterImage next = dilate(result.image, se);
    auto n = next.data();
    auto x = mask.data();
    for (std::size_t i = 0; i < n.size(); ++i) n[i] = std::min(n[i], x[i]);
    ++result.iterations;
    if (next == result.image) break;
    result.image = std::move(next);
  }
  return result;
}

RasterImage open_by_reconstruction(const RasterImage& img, const StructuringElement& se,
                                   const StructuringElement& connectivity) {
  return reconstruct(erode(img, se), img, connectivity);
}

RasterImage close_by_reconstruction(const RasterImage& img, const StructuringElement& se,
                                    const StructuringElement& connectivity) {
  return negative(open_by_reconstruction(negative(img), se, connectivity));
}

}  // namespace cellseg
