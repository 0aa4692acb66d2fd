#include "hbac/geometry.hpp"

#include <algorithm>

namespace hbac {

namespace {

double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

}  // namespace

std::vector<Point2> convex_hull(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;

  std::vector<Point2> h(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

bool hull_contains(const std::vector<Point2>& hull, const Point2& x, double tol) {
  const std::size_t n = hull.size();
  if (n == 0) return false;
  if (n == 1) return (hull[0] - x).norm() <= tol;
  if (n == 2) {
    const Point2 d = hull[1] - hull[0];
    const double t = std::clamp((x - hull[0]).dot(d) / d.squaredNorm(), 0.0, 1.0);
    return (hull[0] + t * d - x).norm() <= tol;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = hull[i];
    const Point2& b = hull[(i + 1) % n];
    const double edge = (b - a).norm();
    if (cross(a, b, x) / edge < -tol) return false;
  }
  return true;
}

}  // namespace hbac
