#include "cellseg/segment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <utility>

#include "cellseg/errors.hpp"

namespace cellseg {

LabelMap::LabelMap(int width, int height) : width_(width), height_(height) {
  if (width < 1 || height < 1) throw InvalidArgument("LabelMap: dimensions must be positive");
  labels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
}

BinaryMask LabelMap::region(Label label) const {
  BinaryMask out(width_, height_);
  for (std::size_t i = 0; i < labels_.size(); ++i) out.raw(i) = labels_[i] == label ? 1 : 0;
  return out;
}

BinaryMask LabelMap::foreground() const {
  BinaryMask out(width_, height_);
  for (std::size_t i = 0; i < labels_.size(); ++i) out.raw(i) = labels_[i] != 0 ? 1 : 0;
  return out;
}

namespace {

constexpr std::array<Offset, 8> kNeighbours8{{
    {-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}, {1, 1}}};

// Moore directions, clockwise on screen (rows grow downwards): W, NW, N, NE,
// E, SE, S, SW.
constexpr std::array<Offset, 8> kMoore{{
    {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}, {0, 1}, {1, 1}, {1, 0}, {1, -1}}};

int moore_direction(Point from, Point to) {
  const Offset d{to.y - from.y, to.x - from.x};
  for (int i = 0; i < 8; ++i) {
    if (kMoore[static_cast<std::size_t>(i)] == d) return i;
  }
  return -1;
}

// Walks the boundary of the set {p : fg(p)} containing `start`, which must
// be the set's first pixel in raster order.
template <typename Fg>
Contour moore_trace(Point start, Fg fg) {
  Contour c;
  c.points.push_back(start);

  struct State {
    Point cur;
    Point back;
    bool operator==(const State&) const = default;
  };
  auto step = [&](const State& s) -> std::optional<State> {
    const int b = moore_direction(s.cur, s.back);
    for (int k = 1; k <= 8; ++k) {
      const Offset d = kMoore[static_cast<std::size_t>((b + k) % 8)];
      const Point q{s.cur.y + d.dy, s.cur.x + d.dx};
      if (fg(q)) {
        const Offset pd = kMoore[static_cast<std::size_t>((b + k - 1) % 8)];
        return State{q, Point{s.cur.y + pd.dy, s.cur.x + pd.dx}};
      }
    }
    return std::nullopt;
  };

  const auto first = step(State{start, Point{start.y, start.x - 1}});
  if (!first) return c;
  State s = *first;
  while (true) {
    c.points.push_back(s.cur);
    const auto next = step(s);
    if (*next == *first) break;
    s = *next;
  }
  if (c.points.size() > 1 && c.points.back() == c.points.front()) c.points.pop_back();
  return c;
}

struct Box {
  int x0 = 0;
  int y0 = 0;
  int x1 = -1;  // inclusive
  int y1 = -1;
  bool empty() const { return x1 < x0; }
  void add(int x, int y) {
    if (empty()) {
      x0 = x1 = x;
      y0 = y1 = y;
      return;
    }
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  Box merged(const Box& o) const {
    Box b = *this;
    if (o.empty()) return b;
    b.add(o.x0, o.y0);
    b.add(o.x1, o.y1);
    return b;
  }
  Box grown(int r, int w, int h) const {
    return {std::max(0, x0 - r), std::max(0, y0 - r), std::min(w - 1, x1 + r), std::min(h - 1, y1 + r)};
  }
};

// Working label array shared by bcr and merge_by_bcr.
class LabelGrid {
 public:
  explicit LabelGrid(const LabelMap& lmap)
      : w_(lmap.width()), h_(lmap.height()), labels_(lmap.labels().begin(), lmap.labels().end()) {}

  int width() const { return w_; }
  int height() const { return h_; }
  bool inside(int x, int y) const { return x >= 0 && y >= 0 && x < w_ && y < h_; }
  Label at(int x, int y) const { return labels_[idx(x, y)]; }
  Label get(int x, int y) const { return inside(x, y) ? at(x, y) : 0; }
  void set(int x, int y, Label l) { labels_[idx(x, y)] = l; }
  const std::vector<Label>& raw() const { return labels_; }

  bool touches(int x, int y, Label l) const {
    for (const Offset& o : kNeighbours8) {
      if (get(x + o.dx, y + o.dy) == l) return true;
    }
    return false;
  }

  // Zero pixel 8-adjacent to both u and v.
  bool bridges(int x, int y, Label u, Label v) const {
    return at(x, y) == 0 && touches(x, y, u) && touches(x, y, v);
  }

  bool in_union(int x, int y, Label u, Label v) const {
    if (!inside(x, y)) return false;
    const Label l = at(x, y);
    return l == u || l == v || bridges(x, y, u, v);
  }

  // Regions u and v either touch directly or share a bridging zero pixel.
  bool linked(Label u, Label v, const Box& bu, const Box& bv) const {
    const Box b = bu.grown(2, w_, h_);
    const Box c = bv.grown(2, w_, h_);
    const int x0 = std::max(b.x0, c.x0);
    const int x1 = std::min(b.x1, c.x1);
    const int y0 = std::max(b.y0, c.y0);
    const int y1 = std::min(b.y1, c.y1);
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const Label l = at(x, y);
        if (l == u && touches(x, y, v)) return true;
        if (l == 0 && touches(x, y, u) && touches(x, y, v)) return true;
      }
    }
    return false;
  }

  template <typename Fg>
  Contour trace(const Box& box, Fg fg) const {
    for (int y = box.y0; y <= box.y1; ++y) {
      for (int x = box.x0; x <= box.x1; ++x) {
        if (fg(Point{y, x})) return moore_trace(Point{y, x}, fg);
      }
    }
    return {};
  }

  Contour trace_region(Label u, const Box& box) const {
    return trace(box, [&](Point p) { return get(p.x, p.y) == u; });
  }

  Contour trace_union(Label u, Label v, const Box& box) const {
    return trace(box.grown(1, w_, h_), [&](Point p) { return in_union(p.x, p.y, u, v); });
  }

 private:
  std::size_t idx(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(w_) + static_cast<std::size_t>(x);
  }

  int w_;
  int h_;
  std::vector<Label> labels_;
};

std::map<Label, Box> bounding_boxes(const LabelGrid& g) {
  std::map<Label, Box> boxes;
  for (int y = 0; y < g.height(); ++y) {
    for (int x = 0; x < g.width(); ++x) {
      const Label l = g.at(x, y);
      if (l != 0) boxes[l].add(x, y);
    }
  }
  return boxes;
}

struct CurvatureSum {
  double sum = 0.0;
  std::size_t count = 0;
};

CurvatureSum curvature_sum(const Contour& c, const BcrOptions& options) {
  CurvatureSum s;
  for (double k : curvature(c)) {
    s.sum += options.abs_curvature ? std::abs(k) : k;
    ++s.count;
  }
  return s;
}

BcrReport bcr_from(const LabelGrid& g, Label u, Label v, const Box& bu, const Box& bv,
                   const CurvatureSum& su, const CurvatureSum& sv, const BcrOptions& options) {
  BcrReport r;
  r.region_u = u;
  r.region_v = v;
  const CurvatureSum sm = curvature_sum(g.trace_union(u, v, bu.merged(bv)), options);
  if (su.count == 0 || sv.count == 0 || sm.count == 0) return r;
  r.merged_curvature_mean = sm.sum / static_cast<double>(sm.count);
  r.separate_curvature_mean = (su.sum + sv.sum) / static_cast<double>(su.count + sv.count);
  if (r.separate_curvature_mean > 0.0 && r.merged_curvature_mean >= 0.0) {
    r.bcr = r.merged_curvature_mean / r.separate_curvature_mean;
  }
  return r;
}

}  // namespace

LabelMap label_components(const BinaryMask& mask, const StructuringElement& connectivity) {
  LabelMap out(mask.width(), mask.height());
  const int w = mask.width();
  const int h = mask.height();
  Label next = 0;
  std::deque<Point> queue;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.at(x, y) || out.at(x, y) != 0) continue;
      ++next;
      out.at(x, y) = next;
      queue.push_back({y, x});
      while (!queue.empty()) {
        const Point p = queue.front();
        queue.pop_front();
        for (const Offset& o : connectivity.offsets()) {
          const int qx = p.x + o.dx;
          const int qy = p.y + o.dy;
          if (qx < 0 || qy < 0 || qx >= w || qy >= h) continue;
          if (!mask.at(qx, qy) || out.at(qx, qy) != 0) continue;
          out.at(qx, qy) = next;
          queue.push_back({qy, qx});
        }
      }
    }
  }
  out.set_region_count(next);
  return out;
}

RasterImage apply_mask(const RasterImage& img, const BinaryMask& mask) {
  if (img.width() != mask.width() || img.height() != mask.height()) {
    throw DimensionMismatch("apply_mask: image and mask differ in size");
  }
  RasterImage out = img;
  for (int c = 0; c < out.channels(); ++c) {
    auto p = out.plane(c);
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (!mask[i]) p[i] = 0;
    }
  }
  return out;
}

LabelMap watershed(const RasterImage& img) {
  return watershed(img, BinaryMask(img.width(), img.height(), true));
}

LabelMap watershed(const RasterImage& img, const BinaryMask& domain) {
  if (img.channels() != 1) throw InvalidArgument("watershed requires a single-channel image");
  if (img.width() != domain.width() || img.height() != domain.height()) {
    throw DimensionMismatch("watershed: image and domain differ in size");
  }
  const int w = img.width();
  const int h = img.height();
  const std::size_t n = img.plane_size();
  std::vector<std::uint8_t> level(n);
  {
    auto src = img.plane(0);
    for (std::size_t i = 0; i < n; ++i) level[i] = static_cast<std::uint8_t>(quantize_level(src[i]));
  }
  auto idx = [w](int x, int y) { return static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x); };
  auto usable = [&](int x, int y) { return x >= 0 && y >= 0 && x < w && y < h && domain.at(x, y); };

  LabelMap out(w, h);
  // 0 = untouched, 1 = plateau examined, 2 = queued.
  std::vector<std::uint8_t> state(n, 0);
  Label basins = 0;

  std::vector<Point> plateau;
  std::deque<Point> scan;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!domain.at(x, y) || state[idx(x, y)] != 0) continue;
      const std::uint8_t lv = level[idx(x, y)];
      plateau.clear();
      bool minimum = true;
      state[idx(x, y)] = 1;
      scan.push_back({y, x});
      while (!scan.empty()) {
        const Point p = scan.front();
        scan.pop_front();
        plateau.push_back(p);
        for (const Offset& o : kNeighbours8) {
          const int qx = p.x + o.dx;
          const int qy = p.y + o.dy;
          if (!usable(qx, qy)) continue;
          const std::uint8_t ql = level[idx(qx, qy)];
          if (ql < lv) minimum = false;
          if (ql == lv && state[idx(qx, qy)] == 0) {
            state[idx(qx, qy)] = 1;
            scan.push_back({qy, qx});
          }
        }
      }
      if (minimum) {
        ++basins;
        for (const Point& p : plateau) out.at(p.x, p.y) = basins;
      }
    }
  }
  out.set_region_count(basins);

  std::array<std::deque<Point>, kHistogramLevels> queues;
  std::fill(state.begin(), state.end(), std::uint8_t{0});
  auto push_neighbours = [&](Point p, int floor_level) {
    for (const Offset& o : kNeighbours8) {
      const int qx = p.x + o.dx;
      const int qy = p.y + o.dy;
      if (!usable(qx, qy)) continue;
      const std::size_t q = idx(qx, qy);
      if (state[q] != 0 || out[q] != 0) continue;
      state[q] = 2;
      queues[static_cast<std::size_t>(std::max<int>(level[q], floor_level))].push_back({qy, qx});
    }
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (out.at(x, y) != 0) push_neighbours({y, x}, 0);
    }
  }

  for (int lv = 0; lv < kHistogramLevels; ++lv) {
    auto& queue = queues[static_cast<std::size_t>(lv)];
    while (!queue.empty()) {
      const Point p = queue.front();
      queue.pop_front();
      Label found = 0;
      bool conflict = false;
      for (const Offset& o : kNeighbours8) {
        const int qx = p.x + o.dx;
        const int qy = p.y + o.dy;
        if (!usable(qx, qy)) continue;
        const Label l = out.at(qx, qy);
        if (l == 0) continue;
        if (found == 0) {
          found = l;
        } else if (l != found) {
          conflict = true;
        }
      }
      if (conflict || found == 0) continue;
      out.at(p.x, p.y) = found;
      push_neighbours(p, lv);
    }
  }
  return out;
}

BinaryMask clear_small_objects(const BinaryMask& mask, const StructuringElement& se) {
  if (!mask.any()) return mask;

  auto keep_at_least_mean = [](const LabelMap& lmap) {
    std::vector<std::size_t> sizes(static_cast<std::size_t>(lmap.region_count()) + 1, 0);
    for (std::size_t i = 0; i < lmap.size(); ++i) ++sizes[static_cast<std::size_t>(lmap[i])];
    double total = 0.0;
    for (std::size_t l = 1; l < sizes.size(); ++l) total += static_cast<double>(sizes[l]);
    const double mean = lmap.region_count() > 0 ? total / lmap.region_count() : 0.0;
    BinaryMask kept(lmap.width(), lmap.height());
    for (std::size_t i = 0; i < lmap.size(); ++i) {
      const Label l = lmap[i];
      kept.raw(i) = (l != 0 && static_cast<double>(sizes[static_cast<std::size_t>(l)]) >= mean) ? 1 : 0;
    }
    return kept;
  };

  const BinaryMask lines = keep_at_least_mean(label_components(beucher_gradient(mask, se)));
  BinaryMask result = keep_at_least_mean(label_components(dilate(mask, se)));
  for (std::size_t i = 0; i < result.size(); ++i) {
    if (lines[i]) result.raw(i) = 0;
  }
  return result;
}

bool adjacency(const LabelMap& lmap, Label u, Label v, const StructuringElement& se) {
  if (u == v) throw InvalidArgument("adjacency: a region is not compared with itself");
  if (u <= 0 || v <= 0) throw InvalidArgument("adjacency: labels must be nonzero");
  std::vector<Point> pu;
  bool has_v = false;
  for (int y = 0; y < lmap.height(); ++y) {
    for (int x = 0; x < lmap.width(); ++x) {
      const Label l = lmap.at(x, y);
      if (l == u) pu.push_back({y, x});
      if (l == v) has_v = true;
    }
  }
  if (pu.empty() || !has_v) throw InvalidArgument("adjacency: unknown label");

  // Dilations meet iff some r - p lies in SE + (-SE).
  std::set<std::pair<int, int>> diff;
  for (const Offset& a : se.offsets()) {
    for (const Offset& b : se.offsets()) diff.insert({a.dy - b.dy, a.dx - b.dx});
  }
  for (const Point& p : pu) {
    for (const auto& [dy, dx] : diff) {
      const int x = p.x + dx;
      const int y = p.y + dy;
      if (x >= 0 && y >= 0 && x < lmap.width() && y < lmap.height() && lmap.at(x, y) == v) return true;
    }
  }
  return false;
}

Contour trace_contour(const LabelMap& lmap, Label u) {
  const LabelGrid g(lmap);
  Box all{0, 0, lmap.width() - 1, lmap.height() - 1};
  Contour c = g.trace_region(u, all);
  if (c.points.empty()) throw InvalidArgument("trace_contour: empty region");
  return c;
}

Contour trace_contour(const BinaryMask& mask) {
  auto fg = [&](Point p) {
    return p.x >= 0 && p.y >= 0 && p.x < mask.width() && p.y < mask.height() && mask.at(p.x, p.y);
  };
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (mask.at(x, y)) return moore_trace(Point{y, x}, fg);
    }
  }
  throw InvalidArgument("trace_contour: empty mask");
}

std::size_t distinct_points(const Contour& c) {
  std::vector<Point> pts = c.points;
  std::ranges::sort(pts);
  return static_cast<std::size_t>(std::ranges::distance(pts.begin(), std::unique(pts.begin(), pts.end())));
}

std::vector<double> curvature(const Contour& c) {
  const std::size_t n = c.points.size();
  if (n < 5) return {};
  std::vector<double> dx(n);
  std::vector<double> dy(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point& next = c.points[(i + 1) % n];
    const Point& prev = c.points[(i + n - 1) % n];
    dx[i] = (next.x - prev.x) / 2.0;
    dy[i] = (next.y - prev.y) / 2.0;
  }
  std::vector<double> k(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double ddx = (dx[(i + 1) % n] - dx[(i + n - 1) % n]) / 2.0;
    const double ddy = (dy[(i + 1) % n] - dy[(i + n - 1) % n]) / 2.0;
    const double den = std::pow(dx[i] * dx[i] + dy[i] * dy[i], 1.5);
    k[i] = den > 0.0 ? (dx[i] * ddy - ddx * dy[i]) / den : 0.0;
  }
  return k;
}

BcrReport bcr(const LabelMap& lmap, Label u, Label v, BcrOptions options) {
  if (u == v || u <= 0 || v <= 0) throw InvalidArgument("bcr: two distinct nonzero labels required");
  const LabelGrid g(lmap);
  const auto boxes = bounding_boxes(g);
  const auto iu = boxes.find(u);
  const auto iv = boxes.find(v);
  if (iu == boxes.end() || iv == boxes.end()) throw InvalidArgument("bcr: unknown label");
  if (!g.linked(u, v, iu->second, iv->second)) throw InvalidArgument("bcr: regions are not adjacent");
  return bcr_from(g, u, v, iu->second, iv->second,
                  curvature_sum(g.trace_region(u, iu->second), options),
                  curvature_sum(g.trace_region(v, iv->second), options), options);
}

LabelMap merge_by_bcr(const LabelMap& lmap, double threshold, BcrOptions options) {
  LabelGrid g(lmap);
  auto boxes = bounding_boxes(g);
  std::map<Label, CurvatureSum> sums;
  for (const auto& [l, box] : boxes) sums[l] = curvature_sum(g.trace_region(l, box), options);

  auto neighbours_of = [&](Label u) {
    std::set<Label> near;
    const Box b = boxes[u].grown(2, g.width(), g.height());
    for (int y = b.y0; y <= b.y1; ++y) {
      for (int x = b.x0; x <= b.x1; ++x) {
        const Label l = g.at(x, y);
        if (l != 0 && l != u) near.insert(l);
      }
    }
    std::set<Label> out;
    for (Label l : near) {
      if (g.linked(u, l, boxes[u], boxes[l])) out.insert(l);
    }
    return out;
  };

  std::map<std::pair<Label, Label>, double> pairs;
  auto evaluate = [&](Label a, Label b) {
    const Label u = std::min(a, b);
    const Label v = std::max(a, b);
    pairs[{u, v}] = bcr_from(g, u, v, boxes[u], boxes[v], sums[u], sums[v], options).bcr;
  };
  for (const auto& [u, box] : boxes) {
    for (Label v : neighbours_of(u)) {
      if (u < v) evaluate(u, v);
    }
  }

  while (true) {
    auto best = pairs.end();
    for (auto it = pairs.begin(); it != pairs.end(); ++it) {
      if (it->second < threshold && (best == pairs.end() || it->second < best->second)) best = it;
    }
    if (best == pairs.end()) break;
    const auto [u, v] = best->first;

    const Box area = boxes[u].merged(boxes[v]).grown(1, g.width(), g.height());
    std::vector<std::pair<int, int>> absorbed;
    for (int y = area.y0; y <= area.y1; ++y) {
      for (int x = area.x0; x <= area.x1; ++x) {
        if (g.at(x, y) == v || g.bridges(x, y, u, v)) absorbed.emplace_back(x, y);
      }
    }
    for (const auto& [x, y] : absorbed) g.set(x, y, u);
    boxes[u] = boxes[u].merged(boxes[v]);
    for (const auto& [x, y] : absorbed) boxes[u].add(x, y);
    boxes.erase(v);
    sums.erase(v);
    sums[u] = curvature_sum(g.trace_region(u, boxes[u]), options);

    for (auto it = pairs.begin(); it != pairs.end();) {
      const auto [a, b] = it->first;
      it = (a == u || a == v || b == u || b == v) ? pairs.erase(it) : std::next(it);
    }
    const std::set<Label> around = neighbours_of(u);
    for (Label x : around) evaluate(u, x);
    // Pairs bridged through pixels that now belong to u change shape.
    for (Label a : around) {
      for (Label b : around) {
        if (a < b && pairs.contains({a, b})) {
          if (g.linked(a, b, boxes[a], boxes[b])) {
            evaluate(a, b);
          } else {
            pairs.erase({a, b});
          }
        }
      }
    }
  }

  LabelMap out(lmap.width(), lmap.height());
  std::map<Label, Label> renumber;
  const auto& raw = g.raw();
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == 0) continue;
    auto [it, inserted] = renumber.try_emplace(raw[i], static_cast<Label>(renumber.size() + 1));
    out[i] = it->second;
  }
  out.set_region_count(static_cast<Label>(renumber.size()));
  return out;
}

BinaryMask label_boundaries(const LabelMap& lmap) {
  BinaryMask out(lmap.width(), lmap.height());
  for (int y = 0; y < lmap.height(); ++y) {
    for (int x = 0; x < lmap.width(); ++x) {
      const Label l = lmap.at(x, y);
      bool edge = false;
      for (const Offset& o : kNeighbours8) {
        const int qx = x + o.dx;
        const int qy = y + o.dy;
        if (qx >= 0 && qy >= 0 && qx < lmap.width() && qy < lmap.height() && lmap.at(qx, qy) != l) {
          edge = true;
          break;
        }
      }
      out.set(x, y, edge);
    }
  }
  return out;
}

}  // namespace cellseg
