#include "cellseg/enhance.hpp"

#include <array>
#include <cmath>

#include "cellseg/errors.hpp"

namespace cellseg {

namespace {

template <typename F>
RasterImage map_pixels(const RasterImage& img, F&& f) {
  RasterImage out(img.width(), img.height(), img.channels());
  auto src = img.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = from_unit(f(to_unit(src[i])));
  return out;
}

}  // namespace

RasterImage emphasize_prod(const RasterImage& img) {
  if (img.channels() != 3) throw InvalidArgument("emphasize_prod requires a 3-channel image");
  RasterImage out(img.width(), img.height(), 1);
  auto r = img.plane(0);
  auto g = img.plane(1);
  auto b = img.plane(2);
  auto dst = out.plane(0);
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = from_unit(to_unit(r[i]) * to_unit(g[i]) * to_unit(b[i]));
  }
  return out;
}

RasterImage emphasize_square(const RasterImage& img) {
  return map_pixels(img, [](double p) { return p * p; });
}

double log_emphasis_raw(double p) { return std::sqrt(std::abs(std::log10(p + kGuardEpsilon))); }

double log_emphasis_scale() {
  static const double scale = std::sqrt(std::log10(512.0));
  return scale;
}

RasterImage emphasize_log(const RasterImage& img) {
  // 65536 possible inputs; tabulate once per call.
  const double scale = log_emphasis_scale();
  std::vector<Intensity> lut(65536);
  for (std::size_t q = 0; q < lut.size(); ++q) {
    lut[q] = from_unit(log_emphasis_raw(to_unit(static_cast<Intensity>(q))) / scale);
  }
  RasterImage out(img.width(), img.height(), img.channels());
  auto src = img.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = lut[src[i]];
  return out;
}

RasterImage emphasize(const RasterImage& img, Emphasis kind) {
  switch (kind) {
    case Emphasis::Prod:
      return emphasize_prod(img);
    case Emphasis::Square:
      return emphasize_square(img);
    case Emphasis::Log:
      return emphasize_log(img);
  }
  throw InvalidArgument("unknown emphasis");
}

}  // namespace cellseg
