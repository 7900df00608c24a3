#include "ckmplace/network.hpp"
#include "ckmplace/error.hpp"

#include <cmath>
#include <sstream>

namespace ckmplace {

namespace {

std::atomic<std::uint64_t> g_evaluations{0};

void require(bool ok, const std::string& what) {
  if (!ok) {
    throw Error(ErrorCode::invalid_argument, what);
  }
}

} // namespace

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double los_gain(const Eigen::Vector2d& q, const Eigen::Vector2d& w, double altitude,
                double gbs_height, double beta0) {
  const double dz = gbs_height - altitude;
  const double denom = (q - w).squaredNorm() + dz * dz;
  if (denom == 0.0) {
    throw Error(ErrorCode::zero_distance, "UAV coincides with the GBS");
  }
  return beta0 / denom;
}

void NetworkScene::validate() const {
  const auto k = static_cast<Eigen::Index>(size());
  require(k >= 1, "scene needs at least one UAV/GBS pair");
  require(powers_w.size() == k, "one transmit power per UAV required");
  require(noise_w.size() == k, "one noise power per GBS required");
  require(weights.size() == k, "one rate weight per UAV required");
  require((powers_w.array() > 0.0).all() && powers_w.allFinite(), "transmit powers must be > 0");
  require((noise_w.array() > 0.0).all() && noise_w.allFinite(), "noise powers must be > 0");
  require((weights.array() > 0.0).all() && weights.allFinite(), "rate weights must be > 0");
  require(area.valid() && std::isfinite(area.x_min) && std::isfinite(area.x_max) &&
              std::isfinite(area.y_min) && std::isfinite(area.y_max),
          "area bounds must be finite and ordered");
  require(std::isfinite(altitude) && std::isfinite(gbs_height), "heights must be finite");
  if (channel == ChannelModel::ckm) {
    require(ckms.size() == size(), "one CKM per GBS required");
    for (std::size_t i = 0; i < ckms.size(); ++i) {
      require(ckms[i] != nullptr, "CKM " + std::to_string(i + 1) + " is missing");
      require(ckms[i]->covers(area), "CKM " + std::to_string(i + 1) + " does not cover the area");
    }
  } else {
    require(std::isfinite(los_beta0_db), "LoS reference gain must be finite");
  }
}

double NetworkScene::gain(std::size_t k, const Eigen::Vector2d& q) const {
  if (channel == ChannelModel::los) {
    return los_gain(q, gbs[k], altitude, gbs_height, db_to_linear(los_beta0_db));
  }
  return ckms[k]->lookup_gain(q, lookup);
}

Placement::Placement(Eigen::VectorXd stacked) : stacked_(std::move(stacked)) {
  if (stacked_.size() % 2 != 0) {
    throw Error(ErrorCode::invalid_argument, "stacked placement must have even length");
  }
}

Placement Placement::from_points(const std::vector<Eigen::Vector2d>& points) {
  Eigen::VectorXd v(2 * static_cast<Eigen::Index>(points.size()));
  for (std::size_t k = 0; k < points.size(); ++k) {
    v.segment<2>(2 * static_cast<Eigen::Index>(k)) = points[k];
  }
  return Placement(std::move(v));
}

bool is_feasible(const Rect& area, const Eigen::VectorXd& stacked, double tol) {
  for (Eigen::Index k = 0; k + 1 < stacked.size(); k += 2) {
    if (!area.contains(Eigen::Vector2d(stacked(k), stacked(k + 1)), tol)) {
      return false;
    }
  }
  return true;
}

double sinr(const NetworkScene& scene, const Placement& placement, std::size_t k) {
  const std::size_t count = scene.size();
  if (k >= count || placement.uav_count() != count) {
    throw Error(ErrorCode::invalid_argument, "UAV index or placement size mismatch");
  }
  double interference = 0.0;
  for (std::size_t j = 0; j < count; ++j) {
    if (j != k) {
      interference += scene.powers_w(Eigen::Index(j)) * scene.gain(k, placement.uav(j));
    }
  }
  const double signal = scene.powers_w(Eigen::Index(k)) * scene.gain(k, placement.uav(k));
  return signal / (interference + scene.noise_w(Eigen::Index(k)));
}

double rate(const NetworkScene& scene, const Placement& placement, std::size_t k) {
  return std::log2(1.0 + sinr(scene, placement, k));
}

Eigen::VectorXd rates(const NetworkScene& scene, const Placement& placement) {
  Eigen::VectorXd r(Eigen::Index(scene.size()));
  for (std::size_t k = 0; k < scene.size(); ++k) {
    r(Eigen::Index(k)) = rate(scene, placement, k);
  }
  return r;
}

double weighted_sum_rate(const NetworkScene& scene, const Placement& placement) {
  if (placement.uav_count() != scene.size()) {
    throw Error(ErrorCode::invalid_argument, "placement size does not match the scene");
  }
  if (!is_feasible(scene.area, placement.stacked())) {
    std::ostringstream msg;
    msg << "infeasible placement: " << placement.stacked().transpose();
    throw Error(ErrorCode::infeasible, msg.str());
  }
  g_evaluations.fetch_add(1, std::memory_order_relaxed);
  double total = 0.0;
  for (std::size_t k = 0; k < scene.size(); ++k) {
    total += scene.weights(Eigen::Index(k)) * rate(scene, placement, k);
  }
  return total;
}

std::uint64_t evaluation_count() { return g_evaluations.load(std::memory_order_relaxed); }

double SumRateObjective::operator()(const Eigen::VectorXd& stacked) const {
  const double value = weighted_sum_rate(*scene_, Placement(stacked));
  count_.fetch_add(1, std::memory_order_relaxed);
  return value;
}

} // namespace ckmplace
