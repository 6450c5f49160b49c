#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cellseg {

/// Intensities are stored as 16-bit fixed point: value = q / 65535.
///
/// 65535 = 255 * 257, so every 8-bit level k is represented exactly as
/// q = 257 * k, and the negative 1 - i is the exact integer 65535 - q.
using Intensity = std::uint16_t;

inline constexpr Intensity kIntensityMax = 65535;
inline constexpr int kHistogramLevels = 256;

constexpr double to_unit(Intensity q) noexcept { return q / 65535.0; }

/// Clamps to [0,1] and rounds to the nearest representable intensity.
Intensity from_unit(double value) noexcept;

constexpr Intensity from_level(int level8) noexcept {
  return static_cast<Intensity>(level8 * 257);
}

/// 256-level quantization floor(i * 255 + 0.5), computed exactly.
constexpr int quantize_level(Intensity q) noexcept {
  return static_cast<int>((2u * q + 257u) / 514u);
}

/// W x H grid with 1 or 3 channels, stored planar (one plane per channel,
/// row-major inside a plane).
class RasterImage {
 public:
  RasterImage() = default;
  RasterImage(int width, int height, int channels, Intensity fill = 0);

  /// Builds an image from [0,1] doubles laid out planar.
  static RasterImage from_unit(int width, int height, int channels,
                               std::span<const double> values);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  std::size_t plane_size() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }
  bool empty() const noexcept { return data_.empty(); }

  Intensity at(int x, int y, int c = 0) const noexcept { return data_[index(x, y, c)]; }
  Intensity& at(int x, int y, int c = 0) noexcept { return data_[index(x, y, c)]; }

  double value(int x, int y, int c = 0) const noexcept { return to_unit(at(x, y, c)); }
  void set_value(int x, int y, int c, double v) noexcept { at(x, y, c) = cellseg::from_unit(v); }

  std::span<Intensity> plane(int c) noexcept {
    return {data_.data() + static_cast<std::size_t>(c) * plane_size(), plane_size()};
  }
  std::span<const Intensity> plane(int c) const noexcept {
    return {data_.data() + static_cast<std::size_t>(c) * plane_size(), plane_size()};
  }

  std::span<Intensity> data() noexcept { return data_; }
  std::span<const Intensity> data() const noexcept { return data_; }

  bool same_shape(const RasterImage& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_ && channels_ == other.channels_;
  }

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  std::size_t index(int x, int y, int c) const noexcept {
    return static_cast<std::size_t>(c) * plane_size() +
           static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<Intensity> data_;
};

/// W x H boolean grid. Stored one byte per pixel, 0 or 1.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height, bool fill = false);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return bits_.size(); }

  bool at(int x, int y) const noexcept { return bits_[index(x, y)] != 0; }
  void set(int x, int y, bool v) noexcept { bits_[index(x, y)] = v ? 1 : 0; }

  bool operator[](std::size_t i) const noexcept { return bits_[i] != 0; }
  std::uint8_t& raw(std::size_t i) noexcept { return bits_[i]; }

  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  std::size_t count() const noexcept;
  bool any() const noexcept;

  bool same_shape(const BinaryMask& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

struct Histogram {
  std::array<std::uint64_t, kHistogramLevels> bins{};
  std::uint64_t total = 0;
};

enum class GrayMode { Y1, Y2, Y3 };
enum class FilterKind { Min, Max, Median };
enum class CompareMode { Rate, Difference };

/// Small constant guarding divisions and logarithms (1/512).
inline constexpr double kGuardEpsilon = 1.0 / 512.0;

RasterImage to_gray(const RasterImage& img, GrayMode mode);

std::array<RasterImage, 3> split_channels(const RasterImage& img);
RasterImage merge_channels(const RasterImage& r, const RasterImage& g, const RasterImage& b);

/// Extracts one channel as a single-channel image.
RasterImage channel(const RasterImage& img, int c);

Histogram histogram(const RasterImage& img);

RasterImage negative(const RasterImage& img);

/// Pixelwise comparison of an image against its rank-filtered version.
/// The orientation of the ratio and difference depends on the filter kind.
RasterImage compare(const RasterImage& original, const RasterImage& filtered,
                    FilterKind filter_kind, CompareMode mode);

/// Mask as a single-channel image (0 or 1).
RasterImage to_image(const BinaryMask& mask);

/// Nonzero pixels of a single-channel image.
BinaryMask to_mask(const RasterImage& img);

}  // namespace cellseg
