#pragma once

namespace cellseg {

/// Relative lattice position (row offset, column offset).
struct Offset {
  int dy = 0;
  int dx = 0;
  friend bool operator==(const Offset&, const Offset&) = default;
};

/// Absolute pixel position.
struct Point {
  int y = 0;
  int x = 0;
  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;
};

}  // namespace cellseg
