#ifndef CKMPLACE_GEOMETRY_HPP
#define CKMPLACE_GEOMETRY_HPP

#include <Eigen/Core>

#include <algorithm>
#include <cstddef>

namespace ckmplace {

/// Axis-aligned rectangle in the horizontal plane (metres).
struct Rect {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  bool valid() const { return x_max >= x_min && y_max >= y_min; }

  bool contains(const Eigen::Vector2d& p, double tol = 0.0) const {
    return p.x() >= x_min - tol && p.x() <= x_max + tol &&
           p.y() >= y_min - tol && p.y() <= y_max + tol;
  }
  bool contains(const Rect& other, double tol = 0.0) const {
    return other.x_min >= x_min - tol && other.x_max <= x_max + tol &&
           other.y_min >= y_min - tol && other.y_max <= y_max + tol;
  }
  Eigen::Vector2d clamp(const Eigen::Vector2d& p) const {
    return {std::clamp(p.x(), x_min, x_max), std::clamp(p.y(), y_min, y_max)};
  }
};

/// Axis-aligned building: footprint rectangle extruded from the ground to
/// `height`.
struct Prism {
  Rect footprint;
  double height = 0.0;
};

/// Box in the stacked n-space, used as the feasible set of a placement.
template <typename Scalar>
struct Box {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Vector lower;
  Vector upper;

  Eigen::Index size() const { return lower.size(); }

  bool contains(const Vector& x, Scalar tol = Scalar(0)) const {
    return ((x.array() >= lower.array() - tol) &&
            (x.array() <= upper.array() + tol)).all();
  }
  Vector clamp(const Vector& x) const {
    return x.cwiseMax(lower).cwiseMin(upper);
  }
};

/// K-fold product of `area`, ordered (x1, y1, ..., xK, yK).
inline Box<double> replicate(const Rect& area, std::size_t count) {
  Box<double> box;
  const auto n = static_cast<Eigen::Index>(2 * count);
  box.lower.resize(n);
  box.upper.resize(n);
  for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(count); ++k) {
    box.lower.segment<2>(2 * k) << area.x_min, area.y_min;
    box.upper.segment<2>(2 * k) << area.x_max, area.y_max;
  }
  return box;
}

} // namespace ckmplace

#endif // CKMPLACE_GEOMETRY_HPP
