#include "cellseg/synthetic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <random>

#include "cellseg/errors.hpp"
#include "cellseg/morphology.hpp"

namespace cellseg {

namespace {

struct Ellipse {
  double cx = 0.0;
  double cy = 0.0;
  double a = 0.0;  // semi-axis along the angle
  double b = 0.0;
  double angle = 0.0;

  // Normalized radial coordinate: < 1 inside.
  double radial(double x, double y) const {
    const double dx = x - cx;
    const double dy = y - cy;
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const double u = (dx * c + dy * s) / a;
    const double v = (-dx * s + dy * c) / b;
    return std::sqrt(u * u + v * v);
  }

  Ellipse grown(double by) const { return {cx, cy, a + by, b + by, angle}; }
};

struct Bounds {
  int x0, y0, x1, y1;
};

Bounds bounds_of(const Ellipse& e, int w, int h) {
  const double r = std::max(e.a, e.b) + 1.0;
  return {std::max(0, static_cast<int>(std::floor(e.cx - r))), std::max(0, static_cast<int>(std::floor(e.cy - r))),
          std::min(w - 1, static_cast<int>(std::ceil(e.cx + r))), std::min(h - 1, static_cast<int>(std::ceil(e.cy + r)))};
}

// Uniform in [lo, hi] without relying on distribution implementations, so
// images are identical across standard libraries.
double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

// Box-Muller on the same bit source.
double gaussian(std::mt19937_64& rng) {
  double u1 = 0.0;
  do {
    u1 = uniform(rng, 0.0, 1.0);
  } while (u1 <= 0.0);
  const double u2 = uniform(rng, 0.0, 1.0);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double parse_number(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || end != value.data() + value.size() || !std::isfinite(out)) {
    throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key));
  }
  return out;
}

int parse_int(std::string_view key, std::string_view value) {
  int out = 0;
  const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || end != value.data() + value.size()) {
    throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key));
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

void apply_synthetic_setting(SyntheticSpec& spec, std::string_view key, std::string_view value) {
  struct IntField {
    std::string_view name;
    int SyntheticSpec::*field;
  };
  struct RealField {
    std::string_view name;
    double SyntheticSpec::*field;
  };
  static constexpr IntField ints[] = {
      {"width", &SyntheticSpec::width},         {"height", &SyntheticSpec::height},
      {"disks", &SyntheticSpec::disks},         {"blobs", &SyntheticSpec::blobs},
      {"halo_width", &SyntheticSpec::halo_width}, {"debris", &SyntheticSpec::debris},
      {"gap", &SyntheticSpec::gap},             {"retry_budget", &SyntheticSpec::retry_budget}};
  static constexpr RealField reals[] = {
      {"disk_radius_min", &SyntheticSpec::disk_radius_min},
      {"disk_radius_max", &SyntheticSpec::disk_radius_max},
      {"blob_length_min", &SyntheticSpec::blob_length_min},
      {"blob_length_max", &SyntheticSpec::blob_length_max},
      {"blob_width_min", &SyntheticSpec::blob_width_min},
      {"blob_width_max", &SyntheticSpec::blob_width_max},
      {"background", &SyntheticSpec::background},
      {"tint", &SyntheticSpec::tint},
      {"illumination", &SyntheticSpec::illumination},
      {"cell_step", &SyntheticSpec::cell_step},
      {"cell_dome", &SyntheticSpec::cell_dome},
      {"halo_gain", &SyntheticSpec::halo_gain},
      {"noise", &SyntheticSpec::noise}};
  for (const auto& f : ints) {
    if (f.name == key) {
      spec.*f.field = parse_int(key, value);
      return;
    }
  }
  for (const auto& f : reals) {
    if (f.name == key) {
      spec.*f.field = parse_number(key, value);
      return;
    }
  }
  throw ConfigError("unknown key '" + std::string(key) + "'");
}

SyntheticSpec parse_synthetic_spec(std::string_view text, SyntheticSpec base) {
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string_view key = eq == std::string_view::npos ? std::string_view{} : trim(line.substr(0, eq));
    const std::string_view value = eq == std::string_view::npos ? std::string_view{} : trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    try {
      apply_synthetic_setting(base, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return base;
}

SyntheticImage generate_synthetic(std::uint64_t seed, const SyntheticSpec& spec) {
  if (spec.disks < 0 || spec.blobs < 0 || spec.debris < 0) {
    throw InvalidArgument("synthetic spec: counts must be non-negative");
  }
  if (spec.width < 1 || spec.height < 1) throw InvalidArgument("synthetic spec: size must be positive");
  if (spec.disk_radius_min <= 0 || spec.disk_radius_max < spec.disk_radius_min ||
      spec.blob_length_min <= 0 || spec.blob_length_max < spec.blob_length_min ||
      spec.blob_width_min <= 0 || spec.blob_width_max < spec.blob_width_min) {
    throw InvalidArgument("synthetic spec: shape ranges must be positive and ordered");
  }
  if (spec.halo_width < 0 || spec.gap < 0 || spec.retry_budget < 1) {
    throw InvalidArgument("synthetic spec: halo_width, gap and retry_budget out of range");
  }

  const int w = spec.width;
  const int h = spec.height;
  std::mt19937_64 rng(seed);

  SyntheticImage out;
  out.truth = LabelMap(w, h);
  BinaryMask occupied(w, h);

  auto fits = [&](const Ellipse& e) {
    const Ellipse g = e.grown(spec.gap);
    // Keep the cell and its halo inside the frame.
    const double reach = std::max(e.a, e.b) + spec.halo_width + 1.0;
    if (e.cx - reach < 0 || e.cy - reach < 0 || e.cx + reach > w - 1 || e.cy + reach > h - 1) return false;
    const Bounds b = bounds_of(g, w, h);
    for (int y = b.y0; y <= b.y1; ++y) {
      for (int x = b.x0; x <= b.x1; ++x) {
        if (g.radial(x, y) < 1.0 && occupied.at(x, y)) return false;
      }
    }
    return true;
  };

  std::vector<Ellipse> cells;
  auto place = [&](ShapeKind kind) {
    for (int attempt = 0; attempt < spec.retry_budget; ++attempt) {
      Ellipse e;
      if (kind == ShapeKind::Disk) {
        e.a = e.b = uniform(rng, spec.disk_radius_min, spec.disk_radius_max);
      } else {
        e.a = uniform(rng, spec.blob_length_min, spec.blob_length_max) / 2.0;
        e.b = uniform(rng, spec.blob_width_min, spec.blob_width_max) / 2.0;
      }
      e.angle = uniform(rng, 0.0, std::numbers::pi);
      e.cx = uniform(rng, 0.0, w - 1.0);
      e.cy = uniform(rng, 0.0, h - 1.0);
      if (!fits(e)) continue;

      const Label label = static_cast<Label>(cells.size() + 1);
      const Bounds b = bounds_of(e.grown(spec.gap), w, h);
      for (int y = b.y0; y <= b.y1; ++y) {
        for (int x = b.x0; x <= b.x1; ++x) {
          if (e.grown(spec.gap).radial(x, y) < 1.0) occupied.set(x, y, true);
          if (e.radial(x, y) < 1.0) out.truth.at(x, y) = label;
        }
      }
      cells.push_back(e);
      out.kinds.push_back(kind);
      return;
    }
    throw InvalidArgument("synthetic spec: could not place every cell within the retry budget");
  };
  // The long shapes are the hardest to fit, so they go first.
  for (int i = 0; i < spec.blobs; ++i) place(ShapeKind::Blob);
  for (int i = 0; i < spec.disks; ++i) place(ShapeKind::Disk);
  out.truth.set_region_count(static_cast<Label>(cells.size()));

  // Multiplicative shading per pixel, shared by all channels.
  std::vector<double> shade(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 1.0);
  auto at = [w](int x, int y) { return static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x); };

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Label l = out.truth.at(x, y);
      if (l == 0) continue;
      const double d = cells[static_cast<std::size_t>(l - 1)].radial(x, y);
      shade[at(x, y)] = 1.0 - spec.cell_step - spec.cell_dome * (1.0 - d * d);
    }
  }

  // Halo: rings grown outwards from the cells, fading with distance.
  out.halo = BinaryMask(w, h);
  BinaryMask reached = out.truth.foreground();
  const StructuringElement cross = disk_se(1);
  for (int ring = 1; ring <= spec.halo_width; ++ring) {
    const BinaryMask next = dilate(reached, cross);
    const double gain = spec.halo_gain * (1.0 - static_cast<double>(ring - 1) / spec.halo_width);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (next.at(x, y) && !reached.at(x, y)) {
          shade[at(x, y)] = 1.0 + gain;
          out.halo.set(x, y, true);
        }
      }
    }
    reached = next;
  }

  // Debris: small dark specks away from the cells.
  for (int i = 0; i < spec.debris; ++i) {
    const int r = uniform(rng, 0.0, 1.0) < 0.5 ? 1 : 2;
    const int cx = static_cast<int>(uniform(rng, r, w - 1.0 - r));
    const int cy = static_cast<int>(uniform(rng, r, h - 1.0 - r));
    const double depth = uniform(rng, 0.25, 0.45);
    bool clear = true;
    for (int dy = -r; dy <= r && clear; ++dy) {
      for (int dx = -r; dx <= r; ++dx) {
        if (occupied.at(cx + dx, cy + dy)) {
          clear = false;
          break;
        }
      }
    }
    if (!clear) continue;
    for (int dy = -r; dy <= r; ++dy) {
      for (int dx = -r; dx <= r; ++dx) {
        if (dx * dx + dy * dy <= r * r) shade[at(cx + dx, cy + dy)] = 1.0 - depth;
      }
    }
  }

  const double theta = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  double tints[3];
  for (double& t : tints) t = spec.background * (1.0 + uniform(rng, -spec.tint, spec.tint));

  out.image = RasterImage(w, h, 3);
  for (int c = 0; c < 3; ++c) {
    auto plane = out.image.plane(c);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double along = (x / (w - 1.0) - 0.5) * std::cos(theta) + (y / (h - 1.0) - 0.5) * std::sin(theta);
        const double light = 1.0 + spec.illumination * along;
        const double noisy = tints[c] * light * shade[at(x, y)] * (1.0 + spec.noise * gaussian(rng));
        const int level = std::clamp(static_cast<int>(std::lround(noisy * 255.0)), 0, 255);
        plane[at(x, y)] = from_level(level);
      }
    }
  }
  return out;
}

}  // namespace cellseg
