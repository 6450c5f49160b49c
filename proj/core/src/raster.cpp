#include "cellseg/raster.hpp"

#include <algorithm>
#include <cmath>

#include "cellseg/errors.hpp"

namespace cellseg {

Intensity from_unit(double value) noexcept {
  if (!(value > 0.0)) return 0;  // also maps NaN to 0
  if (value >= 1.0) return kIntensityMax;
  return static_cast<Intensity>(std::lround(value * 65535.0));
}

RasterImage::RasterImage(int width, int height, int channels, Intensity fill)
    : width_(width), height_(height), channels_(channels) {
  if (width < 1 || height < 1) throw InvalidArgument("image dimensions must be at least 1x1");
  if (channels != 1 && channels != 3) throw InvalidArgument("image must have 1 or 3 channels");
  data_.assign(plane_size() * static_cast<std::size_t>(channels), fill);
}

RasterImage RasterImage::from_unit(int width, int height, int channels,
                                   std::span<const double> values) {
  RasterImage img(width, height, channels);
  if (values.size() != img.data_.size()) {
    throw DimensionMismatch("value count does not match width * height * channels");
  }
  std::transform(values.begin(), values.end(), img.data_.begin(),
                 [](double v) { return cellseg::from_unit(v); });
  return img;
}

BinaryMask::BinaryMask(int width, int height, bool fill) : width_(width), height_(height) {
  if (width < 1 || height < 1) throw InvalidArgument("mask dimensions must be at least 1x1");
  bits_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
               fill ? 1 : 0);
}

std::size_t BinaryMask::count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

bool BinaryMask::any() const noexcept {
  return std::any_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b != 0; });
}

namespace {

void require_channels(const RasterImage& img, int channels, const char* op) {
  if (img.channels() != channels) {
    throw InvalidArgument(std::string(op) + " requires a " + std::to_string(channels) +
                          "-channel image, got " + std::to_string(img.channels()));
  }
}

}  // namespace

RasterImage to_gray(const RasterImage& img, GrayMode mode) {
  require_channels(img, 3, "to_gray");
  RasterImage out(img.width(), img.height(), 1);
  auto r = img.plane(0);
  auto g = img.plane(1);
  auto b = img.plane(2);
  auto dst = out.plane(0);
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const double rv = to_unit(r[i]);
    const double gv = to_unit(g[i]);
    const double bv = to_unit(b[i]);
    double y = 0.0;
    switch (mode) {
      case GrayMode::Y1:
        y = 0.3 * rv + 0.59 * gv + 0.11 * bv;
        break;
      case GrayMode::Y2:
        y = (rv + gv + bv) / 3.0;
        break;
      case GrayMode::Y3: {
        const double sum = rv + gv + bv;
        // black has no defined weighting; it stays black
        y = sum > 0.0 ? (rv * rv + gv * gv + bv * bv) / sum : 0.0;
        break;
      }
    }
    dst[i] = cellseg::from_unit(y);
  }
  return out;
}

RasterImage channel(const RasterImage& img, int c) {
  if (c < 0 || c >= img.channels()) throw InvalidArgument("channel index out of range");
  RasterImage out(img.width(), img.height(), 1);
  std::ranges::copy(img.plane(c), out.plane(0).begin());
  return out;
}

std::array<RasterImage, 3> split_channels(const RasterImage& img) {
  require_channels(img, 3, "split_channels");
  return {channel(img, 0), channel(img, 1), channel(img, 2)};
}

RasterImage merge_channels(const RasterImage& r, const RasterImage& g, const RasterImage& b) {
  if (r.channels() != 1 || !r.same_shape(g) || !r.same_shape(b)) {
    throw DimensionMismatch("merge_channels needs three single-channel images of equal size");
  }
  RasterImage out(r.width(), r.height(), 3);
  std::ranges::copy(r.plane(0), out.plane(0).begin());
  std::ranges::copy(g.plane(0), out.plane(1).begin());
  std::ranges::copy(b.plane(0), out.plane(2).begin());
  return out;
}

Histogram histogram(const RasterImage& img) {
  require_channels(img, 1, "histogram");
  Histogram h;
  for (Intensity q : img.plane(0)) ++h.bins[static_cast<std::size_t>(quantize_level(q))];
  h.total = img.plane_size();
  return h;
}

RasterImage negative(const RasterImage& img) {
  RasterImage out = img;
  for (Intensity& q : out.data()) q = static_cast<Intensity>(kIntensityMax - q);
  return out;
}

RasterImage compare(const RasterImage& original, const RasterImage& filtered,
                    FilterKind filter_kind, CompareMode mode) {
  if (!original.same_shape(filtered)) {
    throw DimensionMismatch("compare: original and filtered differ in shape");
  }
  RasterImage out(original.width(), original.height(), original.channels());
  auto src = original.data();
  auto flt = filtered.data();
  auto dst = out.data();

  auto ratio = [](double num, double den) {
    return std::clamp(num / std::max(den, kGuardEpsilon), 0.0, 1.0);
  };

  for (std::size_t i = 0; i < dst.size(); ++i) {
    const double o = to_unit(src[i]);
    const double f = to_unit(flt[i]);
    double v = 0.0;
    if (mode == CompareMode::Rate) {
      v = filter_kind == FilterKind::Min ? ratio(f, o) : ratio(o, f);
    } else {
      v = filter_kind == FilterKind::Max ? f - o : o - f;
    }
    dst[i] = cellseg::from_unit(v);
  }
  return out;
}

RasterImage to_image(const BinaryMask& mask) {
  RasterImage out(mask.width(), mask.height(), 1);
  auto dst = out.plane(0);
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = mask[i] ? kIntensityMax : 0;
  return out;
}

BinaryMask to_mask(const RasterImage& img) {
  require_channels(img, 1, "to_mask");
  BinaryMask out(img.width(), img.height());
  auto src = img.plane(0);
  for (std::size_t i = 0; i < src.size(); ++i) out.raw(i) = src[i] != 0 ? 1 : 0;
  return out;
}

}  // namespace cellseg
