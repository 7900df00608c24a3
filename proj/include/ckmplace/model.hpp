#ifndef CKMPLACE_MODEL_HPP
#define CKMPLACE_MODEL_HPP

#include "ckmplace/error.hpp"

#include <Eigen/Core>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

namespace ckmplace {

/// Interpolation matrices whose condition number reaches this are treated
/// as degenerate.
inline constexpr double kDegeneracyThreshold = 1e12;

/// Number of interpolation conditions m = (n + 1)(n + 2) / 2 that pin down a
/// full quadratic in n variables (the local point plus m - 1 others).
constexpr Eigen::Index interpolation_point_count(Eigen::Index n) {
  return (n + 1) * (n + 2) / 2;
}

/// Quadratic surrogate phi(center + s) = f0 + g's + s'Gs / 2.
template <typename Scalar>
struct QuadraticModel {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Scalar f0 = Scalar(0);
  Vector g;
  Matrix G;

  Eigen::Index dimension() const { return g.size(); }

  /// phi(center + s) - f0.
  template <typename Derived>
  Scalar increase(const Eigen::MatrixBase<Derived>& s) const {
    return g.dot(s) + Scalar(0.5) * s.dot(G * s);
  }
  template <typename Derived>
  Scalar operator()(const Eigen::MatrixBase<Derived>& s) const {
    return f0 + increase(s);
  }
  template <typename Derived>
  Vector gradient(const Eigen::MatrixBase<Derived>& s) const {
    return g + G * s;
  }
};

/// Sample points (one per column) and cached objective values.
template <typename Scalar>
struct InterpolationSet {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Matrix points;
  Vector values;

  Eigen::Index size() const { return points.cols(); }
  Eigen::Index dimension() const { return points.rows(); }
};

namespace detail {

// Largest distance from `center` to any column of `points`.
template <typename Scalar>
Scalar set_radius(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& center,
                  const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& points) {
  if (points.cols() == 0) {
    return Scalar(0);
  }
  return (points.colwise() - center).colwise().norm().maxCoeff();
}

} // namespace detail

/// Row l holds the monomials of d_l = (y_l - center) / radius: the n linear
/// terms followed by d_i^2 / 2 and d_i d_j (i < j) in row-major upper order.
/// Scaling by the set radius keeps the conditioning independent of units.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>
interpolation_matrix(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& center,
                     const InterpolationSet<Scalar>& set, Scalar radius) {
  const Eigen::Index n = center.size();
  const Eigen::Index unknowns = interpolation_point_count(n) - 1;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> M(set.size(), unknowns);
  for (Eigen::Index l = 0; l < set.size(); ++l) {
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> d = (set.points.col(l) - center) / radius;
    M.row(l).head(n) = d.transpose();
    Eigen::Index c = n;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i; j < n; ++j) {
        M(l, c++) = i == j ? Scalar(0.5) * d(i) * d(i) : d(i) * d(j);
      }
    }
  }
  return M;
}

/// 2-norm condition number of the scaled interpolation matrix; infinity
/// when the set has the wrong size or collapses onto the center.
template <typename Scalar>
Scalar interpolation_condition(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& center,
                               const InterpolationSet<Scalar>& set) {
  const Eigen::Index n = center.size();
  if (set.dimension() != n || set.size() != interpolation_point_count(n) - 1) {
    return std::numeric_limits<Scalar>::infinity();
  }
  const Scalar radius = detail::set_radius(center, set.points);
  if (!(radius > Scalar(0)) || !std::isfinite(radius)) {
    return std::numeric_limits<Scalar>::infinity();
  }
  const auto M = interpolation_matrix(center, set, radius);
  Eigen::JacobiSVD<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> svd(M);
  const auto& sv = svd.singularValues();
  const Scalar smallest = sv(sv.size() - 1);
  if (!(smallest > Scalar(0))) {
    return std::numeric_limits<Scalar>::infinity();
  }
  return sv(0) / smallest;
}

template <typename Scalar>
bool check_nondegenerate(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& center,
                         const InterpolationSet<Scalar>& set) {
  return interpolation_condition(center, set) < Scalar(kDegeneracyThreshold);
}

/// Fits the quadratic that matches `f_center` at `center` and set.values at
/// every set point. Throws degenerate when the system is ill-conditioned.
template <typename Scalar>
QuadraticModel<Scalar> build_model(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& center,
                                   Scalar f_center, const InterpolationSet<Scalar>& set) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = center.size();
  if (set.dimension() != n || set.size() != interpolation_point_count(n) - 1 ||
      set.values.size() != set.size()) {
    throw Error(ErrorCode::degenerate, "interpolation set has the wrong shape");
  }
  const Scalar radius = detail::set_radius(center, set.points);
  if (!(radius > Scalar(0)) || !std::isfinite(radius)) {
    throw Error(ErrorCode::degenerate, "interpolation set collapsed onto the local point");
  }
  const Matrix M = interpolation_matrix(center, set, radius);
  Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const Scalar smallest = sv(sv.size() - 1);
  if (!(smallest > Scalar(0)) || !(sv(0) / smallest < Scalar(kDegeneracyThreshold))) {
    throw Error(ErrorCode::degenerate, "interpolation system is ill-conditioned");
  }
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> rhs =
      set.values.array() - f_center;
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x = svd.solve(rhs);

  QuadraticModel<Scalar> model;
  model.f0 = f_center;
  model.g = x.head(n) / radius;
  model.G.resize(n, n);
  const Scalar r2 = radius * radius;
  Eigen::Index c = n;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      model.G(i, j) = model.G(j, i) = x(c++) / r2;
    }
  }
  return model;
}

/// Largest |phi(y_l) - f(y_l)| over the set, divided by max(1, max |f|).
template <typename Scalar>
Scalar interpolation_residual(const QuadraticModel<Scalar>& model,
                              const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& center,
                              const InterpolationSet<Scalar>& set) {
  Scalar scale = std::max(Scalar(1), std::abs(model.f0));
  Scalar worst = Scalar(0);
  for (Eigen::Index l = 0; l < set.size(); ++l) {
    scale = std::max(scale, std::abs(set.values(l)));
    const Scalar predicted = model(set.points.col(l) - center);
    worst = std::max(worst, std::abs(predicted - set.values(l)));
  }
  return worst / scale;
}

/// Index of the set point furthest from `center`; ties go to the lowest
/// index.
template <typename Scalar>
Eigen::Index furthest_point(const InterpolationSet<Scalar>& set,
                            const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& center) {
  if (set.size() == 0) {
    throw Error(ErrorCode::invalid_argument, "interpolation set is empty");
  }
  Eigen::Index best = 0;
  Scalar best_dist = (set.points.col(0) - center).squaredNorm();
  for (Eigen::Index l = 1; l < set.size(); ++l) {
    const Scalar dist = (set.points.col(l) - center).squaredNorm();
    if (dist > best_dist) {
      best = l;
      best_dist = dist;
    }
  }
  return best;
}

} // namespace ckmplace

#endif // CKMPLACE_MODEL_HPP
