#include "ckmplace/baselines.hpp"
#include "ckmplace/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace ckmplace {

SearchGrid SearchGrid::over(const Rect& area, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw Error(ErrorCode::invalid_argument, "search grid step must be positive");
  }
  if (!area.valid()) {
    throw Error(ErrorCode::invalid_argument, "search area is empty");
  }
  SearchGrid grid;
  grid.step = step;
  // Lattice points may overshoot the upper bound by rounding only.
  grid.m = static_cast<Eigen::Index>(std::floor(area.width() / step + 1e-9)) + 1;
  grid.n = static_cast<Eigen::Index>(std::floor(area.height() / step + 1e-9)) + 1;
  grid.candidates.reserve(static_cast<std::size_t>(grid.m * grid.n));
  for (Eigen::Index i = 0; i < grid.m; ++i) {
    for (Eigen::Index j = 0; j < grid.n; ++j) {
      grid.candidates.push_back(area.clamp(
          {area.x_min + double(i) * step, area.y_min + double(j) * step}));
    }
  }
  return grid;
}

std::uint64_t search_space_size(const SearchGrid& grid, std::size_t uav_count) {
  std::uint64_t total = 1;
  const std::uint64_t per_uav = grid.size();
  for (std::size_t k = 0; k < uav_count; ++k) {
    if (per_uav != 0 && total > std::numeric_limits<std::uint64_t>::max() / per_uav) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    total *= per_uav;
  }
  return total;
}

SearchResult exhaustive_search(const Objective& f, std::size_t uav_count, const SearchGrid& grid,
                               std::uint64_t budget, unsigned threads) {
  if (uav_count == 0 || grid.size() == 0) {
    throw Error(ErrorCode::invalid_argument, "exhaustive search needs UAVs and candidates");
  }
  const std::uint64_t total = search_space_size(grid, uav_count);
  if (total > budget) {
    throw Error(ErrorCode::budget_exceeded,
                "exhaustive search over " + std::to_string(grid.size()) + "^" +
                    std::to_string(uav_count) + " placements exceeds the budget of " +
                    std::to_string(budget));
  }
  const std::size_t per_uav = grid.size();
  if (threads == 0) {
    threads = std::max(1u, std::thread::hardware_concurrency());
  }
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, per_uav));

  struct Best {
    double value = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> index;
  };
  // A lower combination index is a lexicographically smaller stacked vector.
  auto better = [](double value, const std::vector<std::size_t>& index, const Best& best) {
    return value > best.value ||
           (value == best.value && (best.index.empty() || index < best.index));
  };

  std::atomic<std::size_t> next_shard{0};
  std::atomic<std::uint64_t> evaluations{0};
  std::vector<Best> shard_best(threads);

  auto worker = [&](unsigned id) {
    Best& best = shard_best[id];
    Eigen::VectorXd x(2 * static_cast<Eigen::Index>(uav_count));
    std::vector<std::size_t> index(uav_count, 0);
    std::uint64_t count = 0;
    for (std::size_t first = next_shard++; first < per_uav; first = next_shard++) {
      std::fill(index.begin(), index.end(), 0);
      index[0] = first;
      for (std::size_t k = 0; k < uav_count; ++k) {
        x.segment<2>(2 * static_cast<Eigen::Index>(k)) = grid.candidates[index[k]];
      }
      while (true) {
        const double value = f(x);
        ++count;
        if (better(value, index, best)) {
          best.value = value;
          best.index = index;
        }
        // Odometer over UAVs 2..K, last UAV fastest.
        std::size_t k = uav_count - 1;
        while (k >= 1) {
          if (++index[k] < per_uav) {
            x.segment<2>(2 * static_cast<Eigen::Index>(k)) = grid.candidates[index[k]];
            break;
          }
          index[k] = 0;
          x.segment<2>(2 * static_cast<Eigen::Index>(k)) = grid.candidates[0];
          --k;
        }
        if (k == 0) {
          break;
        }
      }
    }
    evaluations += count;
  };

  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back(worker, t);
    }
    for (auto& t : pool) {
      t.join();
    }
  }

  Best overall;
  for (const Best& b : shard_best) {
    if (!b.index.empty() && better(b.value, b.index, overall)) {
      overall = b;
    }
  }
  std::vector<Eigen::Vector2d> points;
  points.reserve(uav_count);
  for (std::size_t idx : overall.index) {
    points.push_back(grid.candidates[idx]);
  }
  return {Placement::from_points(points), overall.value, evaluations.load()};
}

SearchResult exhaustive_search(const NetworkScene& scene, const SearchGrid& grid,
                               std::uint64_t budget, unsigned threads) {
  scene.validate();
  const SumRateObjective objective(scene);
  return exhaustive_search([&objective](const Eigen::VectorXd& x) { return objective(x); },
                           scene.size(), grid, budget, threads);
}

Placement hovering_placement(const NetworkScene& scene) {
  for (std::size_t k = 0; k < scene.size(); ++k) {
    if (!scene.area.contains(scene.gbs[k], kFeasibilityTol)) {
      throw Error(ErrorCode::infeasible,
                  "GBS " + std::to_string(k + 1) + " lies outside the feasible area");
    }
  }
  return Placement::from_points(scene.gbs);
}

Placement projected_hovering_placement(const NetworkScene& scene) {
  std::vector<Eigen::Vector2d> points;
  points.reserve(scene.size());
  for (const auto& w : scene.gbs) {
    points.push_back(scene.area.clamp(w));
  }
  return Placement::from_points(points);
}

NetworkScene with_los_channel(const NetworkScene& scene, double beta0_db) {
  NetworkScene los = scene;
  los.channel = ChannelModel::los;
  los.los_beta0_db = beta0_db;
  return los;
}

LosDesignResult los_design(const NetworkScene& scene, const LosDesignOptions& options) {
  scene.validate();
  const NetworkScene los = with_los_channel(scene, scene.los_beta0_db);
  const Placement start = options.start ? *options.start : projected_hovering_placement(scene);

  PlacementResult dfo =
      run(los, start, options.state, options.seed, {}, options.trs_multistarts);

  LosDesignResult out;
  out.placement = dfo.placement;
  out.los_value = dfo.value;
  out.evaluations = dfo.evaluations;

  if (options.cross_check_step > 0.0 && scene.size() <= 2) {
    const SearchGrid grid = SearchGrid::over(scene.area, options.cross_check_step);
    if (search_space_size(grid, scene.size()) <= options.cross_check_budget) {
      const SearchResult lattice = exhaustive_search(los, grid, options.cross_check_budget);
      out.cross_checked = true;
      out.cross_check_los_value = lattice.value;
      out.evaluations += lattice.evaluations;
      if (lattice.value > out.los_value) {
        out.placement = lattice.placement;
        out.los_value = lattice.value;
        out.lattice_won = true;
      }
    }
  }
  out.ckm_value = weighted_sum_rate(scene, out.placement);
  return out;
}

} // namespace ckmplace
