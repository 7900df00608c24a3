#include <doctest.h>

#include "ckmplace/error.hpp"
#include "ckmplace/model.hpp"

#include <Eigen/Core>

#include <cmath>
#include <random>

using namespace ckmplace;

namespace {

struct Quadratic {
  double c;
  Eigen::VectorXd b;
  Eigen::MatrixXd A; // symmetric

  double operator()(const Eigen::VectorXd& x) const { return c + b.dot(x) + 0.5 * x.dot(A * x); }
};

Quadratic random_quadratic(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Quadratic q{normal(rng) * 10, Eigen::VectorXd(n), Eigen::MatrixXd(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    q.b(i) = normal(rng);
    for (Eigen::Index j = 0; j <= i; ++j) {
      q.A(i, j) = q.A(j, i) = normal(rng) * 0.1;
    }
  }
  return q;
}

InterpolationSet<double> random_set(std::mt19937_64& rng, const Eigen::VectorXd& center,
                                    double radius) {
  const Eigen::Index n = center.size();
  std::uniform_real_distribution<double> u(-radius, radius);
  InterpolationSet<double> set;
  set.points.resize(n, interpolation_point_count(n) - 1);
  for (Eigen::Index l = 0; l < set.points.cols(); ++l) {
    for (Eigen::Index i = 0; i < n; ++i) {
      set.points(i, l) = center(i) + u(rng);
    }
  }
  return set;
}

template <typename F>
void evaluate(InterpolationSet<double>& set, const F& f) {
  set.values.resize(set.size());
  for (Eigen::Index l = 0; l < set.size(); ++l) {
    set.values(l) = f(Eigen::VectorXd(set.points.col(l)));
  }
}

} // namespace

TEST_CASE("interpolation point counts") {
  CHECK(interpolation_point_count(1) == 3);
  CHECK(interpolation_point_count(2) == 6);
  CHECK(interpolation_point_count(4) == 15);
  CHECK(interpolation_point_count(6) == 28);
}

TEST_CASE("build_model recovers a quadratic exactly") {
  std::mt19937_64 rng(1);
  for (Eigen::Index n : {2, 4, 6}) {
    for (int trial = 0; trial < 20; ++trial) {
      const Quadratic q = random_quadratic(rng, n);
      const Eigen::VectorXd center = Eigen::VectorXd::Random(n) * 50.0;
      InterpolationSet<double> set = random_set(rng, center, 20.0);
      evaluate(set, q);
      const QuadraticModel<double> m = build_model(center, q(center), set);
      CHECK((m.g - (q.b + q.A * center)).cwiseAbs().maxCoeff() <= 1e-6);
      CHECK((m.G - q.A).cwiseAbs().maxCoeff() <= 1e-6);
      CHECK(m.G.isApprox(m.G.transpose()));
      CHECK(interpolation_residual(m, center, set) <= 1e-8);
    }
  }
}

TEST_CASE("build_model interpolates arbitrary values") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> value(-5.0, 30.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::VectorXd center = Eigen::VectorXd::Random(4) * 100.0;
    InterpolationSet<double> set = random_set(rng, center, 10.0);
    set.values.resize(set.size());
    for (Eigen::Index l = 0; l < set.size(); ++l) {
      set.values(l) = value(rng);
    }
    const double f0 = value(rng);
    const QuadraticModel<double> m = build_model(center, f0, set);
    CHECK(m(Eigen::VectorXd::Zero(4)) == f0);
    CHECK(interpolation_residual(m, center, set) <= 1e-8);
  }
}

TEST_CASE("degenerate sets are rejected") {
  const Eigen::VectorXd center = Eigen::VectorXd::Zero(2);
  InterpolationSet<double> set;
  set.points.resize(2, 5);
  // all on one line through the centre
  for (Eigen::Index l = 0; l < 5; ++l) {
    set.points.col(l) = Eigen::Vector2d(1.0 + l, 2.0 * (1.0 + l));
  }
  set.values = Eigen::VectorXd::Zero(5);
  CHECK_FALSE(check_nondegenerate(center, set));
  try {
    build_model(center, 0.0, set);
    FAIL("expected degenerate");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::degenerate);
  }
  // a repeated point
  set.points << 1, 0, -1, 0, 1, 0, 1, 0, -1, 0;
  CHECK_FALSE(check_nondegenerate(center, set));
  // a point on the centre itself
  set.points << 0, 0, -1, 0, 1, 0, 1, 1, -1, 1;
  CHECK_FALSE(check_nondegenerate(center, set));
  // a well-spread set
  set.points << 1, 0, -1, 0, 1, 0, 1, 0, -1, 1;
  CHECK(check_nondegenerate(center, set));
}

TEST_CASE("conditioning is independent of the set's scale") {
  std::mt19937_64 rng(3);
  const Eigen::VectorXd center = Eigen::VectorXd::Zero(2);
  InterpolationSet<double> set = random_set(rng, center, 1.0);
  const double base = interpolation_condition(center, set);
  for (double scale : {1e-3, 1e3}) {
    InterpolationSet<double> scaled = set;
    scaled.points *= scale;
    CHECK(interpolation_condition(center, scaled) == doctest::Approx(base).epsilon(1e-8));
  }
}

TEST_CASE("furthest_point breaks ties toward the lowest index") {
  InterpolationSet<double> set;
  set.points.resize(2, 4);
  set.points << 1, 3, 0, -3, 0, 0, 3, 0;
  CHECK(furthest_point(set, Eigen::VectorXd(Eigen::Vector2d(0, 0))) == 1);
  CHECK(furthest_point(set, Eigen::VectorXd(Eigen::Vector2d(1, 0))) == 3);
}

TEST_CASE("model works in single precision") {
  std::mt19937_64 rng(4);
  const Quadratic q = random_quadratic(rng, 2);
  const Eigen::VectorXd center = Eigen::VectorXd::Zero(2);
  InterpolationSet<double> set = random_set(rng, center, 5.0);
  evaluate(set, q);
  InterpolationSet<float> setf{set.points.cast<float>(), set.values.cast<float>()};
  const QuadraticModel<float> m = build_model(Eigen::VectorXf(center.cast<float>()),
                                              float(q(center)), setf);
  CHECK((m.G.cast<double>() - q.A).cwiseAbs().maxCoeff() <= 1e-2);
}
