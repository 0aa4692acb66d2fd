#pragma once

#include <vector>

#include <Eigen/Core>

namespace hbac {

using Point2 = Eigen::Vector2d;

/// Counter-clockwise hull (Andrew's monotone chain); collinear points dropped.
std::vector<Point2> convex_hull(std::vector<Point2> pts);

/// Signed distance-like test: true if x lies inside the CCW hull up to tol.
bool hull_contains(const std::vector<Point2>& hull, const Point2& x, double tol);

}  // namespace hbac
