#ifndef CKMPLACE_TRS_HPP
#define CKMPLACE_TRS_HPP

#include "ckmplace/geometry.hpp"
#include "ckmplace/model.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace ckmplace {

/// Maximise phi(center + s) subject to |s| <= delta and center + s in area.
template <typename Scalar>
struct TrsProblem {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  QuadraticModel<Scalar> model;
  Vector center;
  Scalar delta = Scalar(0);
  Box<Scalar> area;
};

struct TrsOptions {
  int multistarts = 32;
  std::uint64_t seed = 0;
  int max_polish_iterations = 200;
};

namespace detail {

template <typename Scalar>
struct StepBounds {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Vector lo; // <= 0
  Vector hi; // >= 0
  Scalar delta;

  explicit StepBounds(const TrsProblem<Scalar>& p)
      : lo((p.area.lower - p.center).cwiseMin(Scalar(0))),
        hi((p.area.upper - p.center).cwiseMax(Scalar(0))), delta(p.delta) {}

  // Clip into the box, then pull radially into the ball. The box contains
  // the origin, so the radial pull keeps the point inside it.
  Vector feasible(const Vector& x) const {
    Vector y = x.cwiseMax(lo).cwiseMin(hi);
    const Scalar norm = y.norm();
    if (norm > delta) {
      y *= delta / norm;
    }
    return y;
  }

  // Largest a >= 0 with |s + a d| <= delta.
  Scalar ball_step(const Vector& s, const Vector& d) const {
    const Scalar dd = d.squaredNorm();
    if (dd == Scalar(0)) {
      return std::numeric_limits<Scalar>::infinity();
    }
    const Scalar sd = s.dot(d);
    const Scalar c = std::min(Scalar(0), s.squaredNorm() - delta * delta);
    const Scalar disc = sd * sd - dd * c;
    return std::max(Scalar(0), (-sd + std::sqrt(std::max(Scalar(0), disc))) / dd);
  }
};

// Truncated conjugate-gradient ascent from a feasible `s`, restarted on the
// remaining free variables each time a box face is hit; stops for good on
// the ball boundary or at an interior stationary point.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1>
truncated_cg(const QuadraticModel<Scalar>& model, const StepBounds<Scalar>& b,
             Eigen::Matrix<Scalar, Eigen::Dynamic, 1> s) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index n = s.size();
  const Scalar tiny = Scalar(1e-14) * (Scalar(1) + model.g.norm());
  const Scalar face_tol = Scalar(1e-12) * (Scalar(1) + b.delta);

  for (Eigen::Index pass = 0; pass <= n; ++pass) {
    const Vector grad = model.gradient(s);
    Vector mask = Vector::Ones(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if ((s(i) >= b.hi(i) - face_tol && grad(i) > 0) ||
          (s(i) <= b.lo(i) + face_tol && grad(i) < 0)) {
        mask(i) = 0;
      }
    }
    Vector r = grad.cwiseProduct(mask);
    if (r.norm() <= tiny) {
      break;
    }
    Vector d = r;
    Scalar rr = r.squaredNorm();
    bool on_ball = false;
    Eigen::Index face = -1;
    const Eigen::Index free_count = static_cast<Eigen::Index>(mask.sum());

    for (Eigen::Index it = 0; it < free_count; ++it) {
      const Vector Gd = (model.G * d).cwiseProduct(mask);
      const Scalar curvature = d.dot(Gd);
      const Scalar to_ball = b.ball_step(s, d);
      Scalar to_box = std::numeric_limits<Scalar>::infinity();
      Eigen::Index box_index = -1;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (d(i) > 0) {
          const Scalar t = std::max(Scalar(0), (b.hi(i) - s(i)) / d(i));
          if (t < to_box) { to_box = t; box_index = i; }
        } else if (d(i) < 0) {
          const Scalar t = std::max(Scalar(0), (b.lo(i) - s(i)) / d(i));
          if (t < to_box) { to_box = t; box_index = i; }
        }
      }
      const Scalar limit = std::min(to_ball, to_box);
      Scalar alpha = limit;
      bool hit = true;
      if (curvature < 0) {
        const Scalar newton = rr / -curvature;
        if (newton < limit) {
          alpha = newton;
          hit = false;
        }
      }
      if (!std::isfinite(alpha)) {
        break;
      }
      s += alpha * d;
      if (hit) {
        if (to_box < to_ball) {
          s(box_index) = d(box_index) > 0 ? b.hi(box_index) : b.lo(box_index);
          face = box_index;
        } else {
          on_ball = true;
        }
        break;
      }
      r += alpha * Gd;
      const Scalar rr_next = r.squaredNorm();
      if (std::sqrt(rr_next) <= tiny) {
        break;
      }
      d = r + (rr_next / rr) * d;
      rr = rr_next;
    }
    if (on_ball || face < 0) {
      break;
    }
  }
  return b.feasible(s);
}

// Monotone projected-gradient ascent using the ball/box map above; refines
// points that the CG pass left on the ball boundary.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1>
projected_ascent(const QuadraticModel<Scalar>& model, const StepBounds<Scalar>& b,
                 Eigen::Matrix<Scalar, Eigen::Dynamic, 1> s, int max_iterations) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Scalar value = model.increase(s);
  const Scalar min_move = Scalar(1e-13) * std::max(Scalar(1), b.delta);
  Scalar step = Scalar(-1);
  for (int it = 0; it < max_iterations; ++it) {
    const Vector grad = model.gradient(s);
    const Scalar gnorm = grad.norm();
    if (gnorm == Scalar(0)) {
      break;
    }
    if (step < 0) {
      step = b.delta / gnorm;
    }
    bool improved = false;
    while (step * gnorm > min_move) {
      const Vector y = b.feasible(s + step * grad);
      const Scalar v = model.increase(y);
      if (v > value) {
        improved = (y - s).norm() > min_move;
        s = y;
        value = v;
        step *= Scalar(2);
        break;
      }
      step *= Scalar(0.5);
    }
    if (!improved) {
      break;
    }
  }
  return s;
}

} // namespace detail

/// Best point along the projected steepest-ascent path t -> clip(t g),
/// truncated where the path leaves the ball. A quality floor for solve_trs.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> cauchy_point(const TrsProblem<Scalar>& problem) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const auto& model = problem.model;
  const detail::StepBounds<Scalar> b(problem);
  const Eigen::Index n = model.g.size();

  Vector d = model.g;
  Vector breakpoint = Vector::Constant(n, std::numeric_limits<Scalar>::infinity());
  for (Eigen::Index i = 0; i < n; ++i) {
    if (d(i) > 0) {
      breakpoint(i) = b.hi(i) / d(i);
    } else if (d(i) < 0) {
      breakpoint(i) = b.lo(i) / d(i);
    }
    if (breakpoint(i) <= Scalar(0)) {
      d(i) = 0;
    }
  }

  Vector s = Vector::Zero(n);
  Vector best = s;
  Scalar best_value = Scalar(0);
  Scalar t = Scalar(0);
  while (d.squaredNorm() > Scalar(0)) {
    Scalar next = std::numeric_limits<Scalar>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (d(i) != 0) {
        next = std::min(next, breakpoint(i));
      }
    }
    const Scalar to_box = next - t;
    const Scalar to_ball = b.ball_step(s, d);
    const Scalar limit = std::min(to_box, to_ball);
    const Scalar slope = model.gradient(s).dot(d);
    const Scalar curvature = d.dot(model.G * d);
    Scalar tau = limit;
    if (curvature < 0) {
      tau = std::clamp(-slope / curvature, Scalar(0), limit);
    } else if (slope <= 0) {
      tau = Scalar(0);
    }
    for (const Scalar candidate : {tau, limit}) {
      if (!std::isfinite(candidate)) {
        continue;
      }
      const Vector trial = b.feasible(s + candidate * d);
      const Scalar v = model.increase(trial);
      if (v > best_value) {
        best_value = v;
        best = trial;
      }
    }
    if (to_ball <= to_box || !std::isfinite(to_box)) {
      break;
    }
    s += to_box * d;
    t = next;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (d(i) != 0 && breakpoint(i) <= next) {
        s(i) = d(i) > 0 ? b.hi(i) : b.lo(i);
        d(i) = 0;
      }
    }
  }
  return best;
}

/// Approximate solution of the box- and ball-constrained quadratic
/// maximisation. Candidates: truncated CG from the origin, the Cauchy point,
/// and `multistarts` random feasible starts, each polished by CG and
/// projected ascent. Never worse than the Cauchy point or s = 0.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> solve_trs(const TrsProblem<Scalar>& problem,
                                                   const TrsOptions& options = {}) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const auto& model = problem.model;
  const Eigen::Index n = model.g.size();
  const detail::StepBounds<Scalar> b(problem);

  Vector best = Vector::Zero(n);
  Scalar best_value = Scalar(0);
  if (!(problem.delta > Scalar(0))) {
    return best;
  }
  auto consider = [&](const Vector& s) {
    const Vector feasible = b.feasible(s);
    const Scalar v = model.increase(feasible);
    if (v > best_value) {
      best_value = v;
      best = feasible;
    }
  };
  auto polish = [&](const Vector& start) {
    Vector s = detail::truncated_cg(model, b, b.feasible(start));
    consider(s);
    consider(detail::projected_ascent(model, b, s, options.max_polish_iterations));
  };

  polish(Vector::Zero(n));
  const Vector cauchy = cauchy_point(problem);
  consider(cauchy);
  polish(cauchy);

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<Scalar> normal;
  std::uniform_real_distribution<Scalar> uniform;
  for (int start = 0; start < options.multistarts; ++start) {
    Vector dir(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      dir(i) = normal(rng);
    }
    const Scalar norm = dir.norm();
    if (norm == Scalar(0)) {
      continue;
    }
    const Scalar radius = problem.delta * std::pow(uniform(rng), Scalar(1) / Scalar(n));
    polish(dir * (radius / norm));
  }
  return best;
}

} // namespace ckmplace

#endif // CKMPLACE_TRS_HPP
