#include "floorgnn/geometry.hpp"

#include <cmath>

namespace floorgnn {

namespace {

// Gap between closed intervals [a0,a1] and [b0,b1]; 0 when they intersect.
double interval_gap(double a0, double a1, double b0, double b1) {
  double lo = std::max(a0, b0);
  double hi = std::min(a1, b1);
  return lo > hi ? lo - hi : 0.0;
}

}  // namespace

double rect_gap_distance(const Rect& a, const Rect& b) {
  double dx = interval_gap(a.x0, a.x1, b.x0, b.x1);
  double dy = interval_gap(a.y0, a.y1, b.y0, b.y1);
  return std::sqrt(dx * dx + dy * dy);
}

double rect_intersection_area(const Rect& a, const Rect& b) {
  double w = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
  double h = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

}  // namespace floorgnn
