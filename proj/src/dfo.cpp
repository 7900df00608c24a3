#include "ckmplace/dfo.hpp"
#include "ckmplace/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace ckmplace {

namespace {

Eigen::VectorXd uniform_point(const Box<double>& box, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::VectorXd x(box.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    x(i) = box.lower(i) + (box.upper(i) - box.lower(i)) * unit(rng);
  }
  return x;
}

} // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  // splitmix64 finaliser
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

TrustRegionState TrustRegionState::defaults_for(const Rect& area) {
  TrustRegionState s;
  s.delta0 = 0.25 * std::min(area.width(), area.height());
  s.delta = s.delta0;
  s.beta = 0.5;
  s.epsilon = 1.0;
  s.max_iters = 500;
  return s;
}

void TrustRegionState::validate() const {
  if (!(delta0 > 0.0) || !std::isfinite(delta0)) {
    throw Error(ErrorCode::invalid_argument, "initial trust-region radius must be positive");
  }
  if (!(delta > 0.0) || delta > delta0) {
    throw Error(ErrorCode::invalid_argument, "trust-region radius must lie in (0, delta0]");
  }
  if (!(beta > 0.0 && beta < 1.0)) {
    throw Error(ErrorCode::invalid_argument, "shrink factor beta must lie in (0, 1)");
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorCode::invalid_argument, "convergence threshold must be positive");
  }
  if (max_iters < 0) {
    throw Error(ErrorCode::invalid_argument, "max_iters must be non-negative");
  }
}

InterpolationSet<double> initial_interpolation_set(const Eigen::VectorXd& center,
                                                   const Box<double>& box, const Objective& f,
                                                   std::mt19937_64& rng, int max_retries) {
  const Eigen::Index n = center.size();
  const Eigen::Index count = interpolation_point_count(n) - 1;
  InterpolationSet<double> set;
  set.points.resize(n, count);
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    for (Eigen::Index l = 0; l < count; ++l) {
      set.points.col(l) = uniform_point(box, rng);
    }
    if (check_nondegenerate(center, set)) {
      set.values.resize(count);
      for (Eigen::Index l = 0; l < count; ++l) {
        set.values(l) = f(set.points.col(l));
      }
      return set;
    }
  }
  throw Error(ErrorCode::degenerate, "could not draw a non-degenerate interpolation set in " +
                                         std::to_string(max_retries) + " attempts");
}

InterpolationSet<double> initial_interpolation_set(const Placement& center,
                                                   const NetworkScene& scene,
                                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Box<double> box = replicate(scene.area, scene.size());
  return initial_interpolation_set(
      center.stacked(), box,
      [&scene](const Eigen::VectorXd& x) { return weighted_sum_rate(scene, Placement(x)); }, rng);
}

DfoOptimizer::DfoOptimizer(Objective f, Box<double> box, const Eigen::VectorXd& start,
                           DfoOptions options)
    : f_(std::move(f)), box_(std::move(box)), options_(std::move(options)),
      rng_(options_.seed) {
  options_.state.validate();
  if (start.size() != box_.size() || start.size() == 0) {
    throw Error(ErrorCode::invalid_argument, "start point does not match the box dimension");
  }
  if (!box_.contains(start, kFeasibilityTol)) {
    throw Error(ErrorCode::infeasible, "start point lies outside the feasible box");
  }
  center_ = box_.clamp(start);
  f_center_ = evaluate(center_);
  set_ = initial_interpolation_set(
      center_, box_, [this](const Eigen::VectorXd& x) { return evaluate(x); }, rng_,
      options_.init_retries);
}

double DfoOptimizer::evaluate(const Eigen::VectorXd& x) {
  ++evaluations_;
  return f_(x);
}

void DfoOptimizer::replace(Eigen::Index slot, const Eigen::VectorXd& point, double value) {
  set_.points.col(slot) = point;
  set_.values(slot) = value;
  newest_ = slot;
}

void DfoOptimizer::repair() {
  // The newest point is redrawn first. If the rest of the set is already
  // degenerate, the remaining points follow, nearest to the centre first,
  // since a point crowding the centre is the usual culprit.
  std::vector<Eigen::Index> order;
  if (newest_ >= 0) {
    order.push_back(newest_);
  }
  const Eigen::VectorXd dist = (set_.points.colwise() - center_).colwise().norm().transpose();
  std::vector<Eigen::Index> rest;
  for (Eigen::Index l = 0; l < set_.size(); ++l) {
    if (l != newest_) {
      rest.push_back(l);
    }
  }
  std::stable_sort(rest.begin(), rest.end(),
                   [&dist](Eigen::Index a, Eigen::Index b) { return dist(a) < dist(b); });
  order.insert(order.end(), rest.begin(), rest.end());

  for (const Eigen::Index slot : order) {
    const Eigen::VectorXd saved = set_.points.col(slot);
    for (int attempt = 0; attempt < options_.repair_retries; ++attempt) {
      set_.points.col(slot) = uniform_point(box_, rng_);
      if (check_nondegenerate(center_, set_)) {
        set_.values(slot) = evaluate(set_.points.col(slot));
        newest_ = slot;
        ++repairs_;
        return;
      }
    }
    set_.points.col(slot) = saved;
  }
  // No single redraw helps: redraw slots cumulatively in the same order.
  for (int attempt = 0; attempt < options_.repair_retries; ++attempt) {
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic> saved = set_.points;
    for (std::size_t used = 0; used < order.size(); ++used) {
      set_.points.col(order[used]) = uniform_point(box_, rng_);
      if (check_nondegenerate(center_, set_)) {
        for (std::size_t i = 0; i <= used; ++i) {
          set_.values(order[i]) = evaluate(set_.points.col(order[i]));
        }
        newest_ = order[used];
        ++repairs_;
        return;
      }
    }
    set_.points = saved;
  }
  throw Error(ErrorCode::degenerate, "interpolation set repair failed");
}

IterationRecord DfoOptimizer::snapshot(bool accepted) const {
  IterationRecord rec;
  rec.iteration = iteration_;
  rec.objective = f_center_;
  rec.delta = options_.state.delta;
  rec.accepted = accepted;
  rec.eval_count = evaluations_;
  rec.placement = center_;
  return rec;
}

bool DfoOptimizer::converged() const {
  const auto& st = options_.state;
  if (!(st.delta < st.epsilon)) {
    return false;
  }
  return ((set_.points.colwise() - center_).colwise().norm().array() <= st.epsilon).all();
}

IterationRecord DfoOptimizer::step() {
  auto& st = options_.state;
  ++iteration_;

  if (!check_nondegenerate(center_, set_)) {
    repair();
  }
  model_ = build_model(center_, f_center_, set_);

  TrsProblem<double> problem{model_, center_, st.delta, box_};
  TrsOptions trs;
  trs.multistarts = options_.trs_multistarts;
  trs.seed = mix_seed(options_.seed, static_cast<std::uint64_t>(iteration_));
  const Eigen::VectorXd trial = box_.clamp(center_ + solve_trs(problem, trs));
  const double step_length = (trial - center_).norm();
  const double f_trial = evaluate(trial);

  const Eigen::Index out = furthest_point(set_, center_);
  const bool accepted = f_trial > f_center_;
  if (accepted) {
    replace(out, center_, f_center_);
    center_ = trial;
    f_center_ = f_trial;
  } else {
    st.delta *= st.beta;
    if ((set_.points.col(out) - center_).norm() >= step_length) {
      replace(out, trial, f_trial);
    }
  }
  if (!check_nondegenerate(center_, set_)) {
    repair();
  }

  // Reset when the radius has collapsed but some point is still far away.
  // The "exists" reading is used: requiring every point to be far could
  // leave the loop with a tiny radius that neither resets nor terminates.
  if (st.delta < st.epsilon) {
    const double far = (set_.points.colwise() - center_).colwise().norm().maxCoeff();
    if (far > st.epsilon) {
      st.delta = st.delta0;
    }
  }
  return snapshot(accepted);
}

DfoResult maximize(const Objective& f, const Box<double>& box, const Eigen::VectorXd& start,
                   const DfoOptions& options, const RecordSink& sink) {
  DfoOptimizer opt(f, box, start, options);
  DfoResult result;
  auto emit = [&](IterationRecord rec) {
    if (sink) {
      sink(rec);
    }
    result.log.push_back(std::move(rec));
  };
  emit(opt.snapshot(false));
  while (!opt.converged() && opt.iteration() < options.state.max_iters) {
    emit(opt.step());
  }
  result.best = opt.local_point();
  result.value = opt.local_value();
  result.evaluations = opt.evaluations();
  result.converged = opt.converged();
  return result;
}

PlacementResult run(const NetworkScene& scene, const Placement& start,
                    const TrustRegionState& state, std::uint64_t seed, const RecordSink& sink,
                    int trs_multistarts) {
  scene.validate();
  if (start.uav_count() != scene.size()) {
    throw Error(ErrorCode::invalid_argument, "start placement does not match the scene");
  }
  const SumRateObjective objective(scene);
  DfoOptions options;
  options.state = state;
  options.seed = seed;
  options.trs_multistarts = trs_multistarts;
  DfoResult r = maximize([&objective](const Eigen::VectorXd& x) { return objective(x); },
                         replicate(scene.area, scene.size()), start.stacked(), options, sink);
  PlacementResult out;
  out.placement = Placement(std::move(r.best));
  out.value = r.value;
  out.evaluations = r.evaluations;
  out.converged = r.converged;
  out.log = std::move(r.log);
  return out;
}

} // namespace ckmplace
