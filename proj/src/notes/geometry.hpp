#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <span>

namespace marginalia {

using Millis = std::int64_t;

/// Integer id tagged by what it names, so stroke and capture ids can't mix.
template <typename Tag>
struct Id {
  std::uint64_t value = 0;
  friend auto operator<=>(const Id&, const Id&) = default;
};

}  // namespace marginalia

namespace marginalia::notes {

struct Point {
  double x = 0;
  double y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

struct InkPoint {
  double x = 0;
  double y = 0;
  Millis t_ms = 0;
  friend bool operator==(const InkPoint&, const InkPoint&) = default;
};

struct Rect {
  double x = 0;
  double y = 0;
  double width = 0;
  double height = 0;

  double right() const { return x + width; }
  double bottom() const { return y + height; }
  bool overlaps(const Rect& o) const {
    return x < o.right() && o.x < right() && y < o.bottom() && o.y < bottom();
  }
  friend bool operator==(const Rect&, const Rect&) = default;
};

inline double distance_sq(Point a, Point b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

/// Squared distance from `p` to the segment [a, b].
inline double segment_distance_sq(Point p, Point a, Point b) {
  const double vx = b.x - a.x;
  const double vy = b.y - a.y;
  const double len_sq = vx * vx + vy * vy;
  if (len_sq == 0.0) return distance_sq(p, a);
  const double t = std::clamp(((p.x - a.x) * vx + (p.y - a.y) * vy) / len_sq, 0.0, 1.0);
  return distance_sq(p, {a.x + t * vx, a.y + t * vy});
}

}  // namespace marginalia::notes
