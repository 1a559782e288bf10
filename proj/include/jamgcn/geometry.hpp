#pragma once

#include <Eigen/Core>

#include <cmath>

namespace jamgcn {

using Vec2 = Eigen::Vector2d;

inline bool is_finite(const Vec2& v) {
  return std::isfinite(v.x()) && std::isfinite(v.y());
}

inline double distance(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x() - b.x(), a.y() - b.y());
}

// Rescales v onto the disk of radius max_norm; leaves shorter vectors untouched.
inline Vec2 clamp_norm(const Vec2& v, double max_norm) {
  const double n = std::hypot(v.x(), v.y());
  if (n <= max_norm || n == 0.0) return v;
  return v * (max_norm / n);
}

}  // namespace jamgcn
