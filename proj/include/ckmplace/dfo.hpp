#ifndef CKMPLACE_DFO_HPP
#define CKMPLACE_DFO_HPP

#include "ckmplace/geometry.hpp"
#include "ckmplace/model.hpp"
#include "ckmplace/network.hpp"
#include "ckmplace/trs.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace ckmplace {

/// Trust-region bookkeeping for the placement optimiser.
struct TrustRegionState {
  double delta = 0.0;   ///< current radius (m)
  double delta0 = 0.0;  ///< radius after a reset (m)
  double beta = 0.5;    ///< shrink factor on a rejected step
  double epsilon = 1.0; ///< convergence threshold (m)
  int max_iters = 500;

  /// delta0 = a quarter of the shorter side of `area`, epsilon = 1 m.
  static TrustRegionState defaults_for(const Rect& area);

  void validate() const;
};

/// One line of the convergence log.
struct IterationRecord {
  int iteration = 0;
  double objective = 0.0;
  double delta = 0.0;
  bool accepted = false;
  std::uint64_t eval_count = 0; ///< cumulative objective evaluations
  Eigen::VectorXd placement;    ///< local point after this iteration
};

using Objective = std::function<double(const Eigen::VectorXd&)>;
using RecordSink = std::function<void(const IterationRecord&)>;

struct DfoOptions {
  TrustRegionState state;
  std::uint64_t seed = 0;
  int trs_multistarts = 32;
  int init_retries = 100;  ///< wholesale redraws of the initial set
  int repair_retries = 50; ///< redraws of a single point after an update
};

/// Draws m - 1 points uniformly over `box` until the set is non-degenerate
/// with respect to `center`, then evaluates `f` at each point.
InterpolationSet<double> initial_interpolation_set(const Eigen::VectorXd& center,
                                                   const Box<double>& box, const Objective& f,
                                                   std::mt19937_64& rng, int max_retries = 100);
InterpolationSet<double> initial_interpolation_set(const Placement& center,
                                                   const NetworkScene& scene,
                                                   std::uint64_t seed);

/// Derivative-free trust-region maximiser driven by quadratic interpolation.
///
/// Each step fits the model, solves the ball-and-box subproblem, evaluates
/// the trial point once, and updates the local point, radius, and
/// interpolation set. The radius resets to delta0 when it drops below
/// epsilon while some set point is still more than epsilon away. Given
/// the same inputs and seed, the iterate sequence is reproducible.
class DfoOptimizer {
public:
  DfoOptimizer(Objective f, Box<double> box, const Eigen::VectorXd& start, DfoOptions options);

  /// Runs one iteration and returns its record.
  IterationRecord step();

  /// Radius below epsilon and every set point within epsilon.
  bool converged() const;

  const Eigen::VectorXd& local_point() const { return center_; }
  double local_value() const { return f_center_; }
  const InterpolationSet<double>& interpolation_set() const { return set_; }
  const TrustRegionState& state() const { return options_.state; }
  std::uint64_t evaluations() const { return evaluations_; }
  int iteration() const { return iteration_; }
  /// Model fitted at the start of the most recent step.
  const QuadraticModel<double>& last_model() const { return model_; }
  /// Number of single-point repairs performed so far.
  int repairs() const { return repairs_; }

  /// Record describing the current state, tagged with `iteration()`.
  IterationRecord snapshot(bool accepted) const;

private:
  double evaluate(const Eigen::VectorXd& x);
  void replace(Eigen::Index slot, const Eigen::VectorXd& point, double value);
  void repair();

  Objective f_;
  Box<double> box_;
  DfoOptions options_;
  std::mt19937_64 rng_;

  Eigen::VectorXd center_;
  double f_center_ = 0.0;
  InterpolationSet<double> set_;
  QuadraticModel<double> model_;
  Eigen::Index newest_ = -1;
  std::uint64_t evaluations_ = 0;
  int iteration_ = 0;
  int repairs_ = 0;
};

struct DfoResult {
  Eigen::VectorXd best;
  double value = 0.0;
  std::uint64_t evaluations = 0;
  bool converged = false;
  std::vector<IterationRecord> log; ///< iteration 0 is the starting point
};

/// Iterates until convergence or state.max_iters.
DfoResult maximize(const Objective& f, const Box<double>& box, const Eigen::VectorXd& start,
                   const DfoOptions& options, const RecordSink& sink = {});

struct PlacementResult {
  Placement placement;
  double value = 0.0;
  std::uint64_t evaluations = 0;
  bool converged = false;
  std::vector<IterationRecord> log;
};

/// Maximises the weighted sum rate of `scene` from `start`.
PlacementResult run(const NetworkScene& scene, const Placement& start,
                    const TrustRegionState& state, std::uint64_t seed,
                    const RecordSink& sink = {}, int trs_multistarts = 32);

/// 64-bit mixer used to derive per-iteration and per-restart seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

} // namespace ckmplace

#endif // CKMPLACE_DFO_HPP
