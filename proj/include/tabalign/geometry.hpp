#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

namespace tabalign {

// Axis-aligned box in a top-left-origin frame, units of the source document.
struct BBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }

  bool valid() const {
    return std::isfinite(x_min) && std::isfinite(y_min) && std::isfinite(x_max) &&
           std::isfinite(y_max) && x_min <= x_max && y_min <= y_max;
  }

  bool operator==(const BBox&) const = default;
};

inline double intersection_area(const BBox& a, const BBox& b) {
  const double w = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double h = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

inline double iou(const BBox& a, const BBox& b) {
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) {
    // Two degenerate (zero-area) boxes: identical ones count as a match.
    return a == b ? 1.0 : 0.0;
  }
  return inter / uni;
}

inline BBox box_union(const BBox& a, const BBox& b) {
  return BBox{std::min(a.x_min, b.x_min), std::min(a.y_min, b.y_min),
              std::max(a.x_max, b.x_max), std::max(a.y_max, b.y_max)};
}

inline std::optional<BBox> maybe_union(const std::optional<BBox>& a, const std::optional<BBox>& b) {
  if (a && b) return box_union(*a, *b);
  if (a) return a;
  return b;
}

// Converts between bottom-left-origin page coordinates and the top-left frame.
// Applying it twice with the same page height restores the input.
inline BBox flip_y(const BBox& b, double page_height) {
  return BBox{b.x_min, page_height - b.y_max, b.x_max, page_height - b.y_min};
}

// Closed 1-D interval used when deriving row/column extents.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double center() const { return (lo + hi) / 2.0; }
  void merge(const Interval& o) {
    lo = std::min(lo, o.lo);
    hi = std::max(hi, o.hi);
  }
};

}  // namespace tabalign
