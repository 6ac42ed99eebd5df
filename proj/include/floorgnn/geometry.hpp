#pragma once

#include <algorithm>

namespace floorgnn {

// Axis-aligned rectangle with (x0, y0) the min corner.
struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }

  // inverted or zero-area
  bool degenerate() const { return !(x0 < x1) || !(y0 < y1); }
};

// Euclidean distance between the closest points of two closed rectangles;
// 0 when they touch or overlap. Symmetric.
double rect_gap_distance(const Rect& a, const Rect& b);

// Area of overlap; 0 when disjoint.
double rect_intersection_area(const Rect& a, const Rect& b);

}  // namespace floorgnn
