#include <doctest.h>

#include "ckmplace/error.hpp"
#include "ckmplace/network.hpp"

#include "fixtures.hpp"

#include <cmath>
#include <random>
#include <thread>

using namespace ckmplace;

namespace {

// Pairs k sit at node (k, 0) of a 1 m lattice. Map k holds `own_db[k]` at
// node (k, 0) and -300 dB elsewhere, so SINR_k = P * 10^(own_db/10) / noise
// up to negligible interference.
NetworkScene isolated_pairs(const std::vector<double>& own_db) {
  const auto count = static_cast<Eigen::Index>(own_db.size());
  NetworkScene scene;
  scene.area = {0.0, double(std::max<Eigen::Index>(count - 1, 1)), 0.0, 1.0};
  scene.altitude = 50.0;
  scene.gbs_height = 2.0;
  for (Eigen::Index k = 0; k < count; ++k) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Constant(std::max<Eigen::Index>(count, 2), 2, -300.0);
    g(k, 0) = own_db[std::size_t(k)];
    scene.ckms.push_back(std::make_shared<const GridCkm>(Eigen::Vector2d(0, 0), 1.0, g));
    scene.gbs.emplace_back(double(k), 0.0);
  }
  scene.powers_w = Eigen::VectorXd::Ones(count);
  scene.noise_w = Eigen::VectorXd::Constant(count, 1e-13);
  scene.weights = Eigen::VectorXd::Ones(count);
  scene.validate();
  return scene;
}

Placement on_own_nodes(std::size_t count) {
  std::vector<Eigen::Vector2d> pts;
  for (std::size_t k = 0; k < count; ++k) {
    pts.emplace_back(double(k), 0.0);
  }
  return Placement::from_points(pts);
}

// Gain (dB) giving rate r with unit power and 1e-13 W noise.
double db_for_rate(double r) { return 10.0 * std::log10((std::exp2(r) - 1.0) * 1e-13); }

} // namespace

TEST_CASE("unit conversions") {
  CHECK(dbm_to_watts(30.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(dbm_to_watts(-100.0) == doctest::Approx(1e-13).epsilon(1e-15));
  CHECK(watts_to_dbm(1.0) == doctest::Approx(30.0));
  CHECK(db_to_linear(-30.0) == doctest::Approx(1e-3));
}

TEST_CASE("sinr: LoS two-pair example") {
  BuildingScene empty;
  empty.area = {-50, 50, -50, 50};
  const NetworkScene scene = testing::make_scene(empty, {{0, 0}, {10, 0}});
  // UAV 1 directly above GBS 1, UAV 2 directly above GBS 2.
  const Placement p = Placement::from_points({{0, 0}, {10, 0}});
  const double own = 1e-3 / 2304.0;           // 48^2
  const double cross = 1e-3 / (2304.0 + 100); // 48^2 + 10^2
  CHECK(own == doctest::Approx(4.340277777777778e-07).epsilon(1e-15));
  CHECK(scene.gain(0, p.uav(0)) == doctest::Approx(own).epsilon(1e-12));
  CHECK(sinr(scene, p, 0) == doctest::Approx(own / (cross + 1e-13)).epsilon(1e-12));
}

TEST_CASE("sinr: no interference reduces to SNR") {
  const NetworkScene scene = isolated_pairs({-100.0});
  const Placement p = on_own_nodes(1);
  CHECK(sinr(scene, p, 0) == doctest::Approx(1e3).epsilon(1e-12));
  CHECK(rate(scene, p, 0) == doctest::Approx(9.967226258835993).epsilon(1e-12));
}

TEST_CASE("rate: small SINR values") {
  // gain that makes SINR exactly 1 gives 1 bps/Hz
  const NetworkScene one = isolated_pairs({-130.0});
  CHECK(rate(one, on_own_nodes(1), 0) == doctest::Approx(1.0).epsilon(1e-12));
  // vanishing gain gives (numerically) zero rate
  const NetworkScene zero = isolated_pairs({-400.0});
  CHECK(rate(zero, on_own_nodes(1), 0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("weighted_sum_rate: reported sum rates") {
  SUBCASE("two pairs") {
    const NetworkScene scene = isolated_pairs({db_for_rate(13.5718), db_for_rate(14.6289)});
    CHECK(weighted_sum_rate(scene, on_own_nodes(2)) == doctest::Approx(28.2007).epsilon(1e-9));
  }
  SUBCASE("three pairs") {
    const NetworkScene scene =
        isolated_pairs({db_for_rate(2.7662), db_for_rate(3.1435), db_for_rate(1.2042)});
    CHECK(weighted_sum_rate(scene, on_own_nodes(3)) == doctest::Approx(7.1139).epsilon(1e-9));
  }
  SUBCASE("weights") {
    NetworkScene scene = isolated_pairs({db_for_rate(1.0), db_for_rate(2.0)});
    scene.weights << 2.0, 0.5;
    CHECK(weighted_sum_rate(scene, on_own_nodes(2)) == doctest::Approx(3.0).epsilon(1e-9));
  }
}

TEST_CASE("weighted_sum_rate rejects infeasible placements") {
  const NetworkScene scene = isolated_pairs({-100.0, -100.0});
  const Placement outside = Placement::from_points({{0, 0}, {1.5, 0}});
  try {
    weighted_sum_rate(scene, outside);
    FAIL("expected infeasible");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::infeasible);
  }
  // within the 1e-9 tolerance is accepted
  CHECK_NOTHROW(weighted_sum_rate(scene, Placement::from_points({{0, 0}, {1.0 + 5e-10, 0}})));
}

TEST_CASE("objective properties on random scenes") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const BuildingScene b = testing::random_buildings(rng, testing::square(100), 4);
    const auto gbs = testing::random_points(rng, b.area, 3);
    const NetworkScene scene = testing::make_scene(b, gbs);
    const Placement p = Placement::from_points(testing::random_points(rng, b.area, 3));
    const double f = weighted_sum_rate(scene, p);

    SUBCASE("relabelling pairs") {
      const std::vector<std::size_t> perm{2, 0, 1};
      NetworkScene s2 = scene;
      std::vector<Eigen::Vector2d> q;
      for (std::size_t k = 0; k < 3; ++k) {
        s2.gbs[k] = scene.gbs[perm[k]];
        s2.ckms[k] = scene.ckms[perm[k]];
        q.push_back(p.uav(perm[k]));
      }
      CHECK(weighted_sum_rate(s2, Placement::from_points(q)) == doctest::Approx(f).epsilon(1e-12));
    }
    SUBCASE("scaling powers and noise together") {
      NetworkScene s2 = scene;
      s2.powers_w *= 37.0;
      s2.noise_w *= 37.0;
      CHECK(weighted_sum_rate(s2, p) == doctest::Approx(f).epsilon(1e-12));
    }
    SUBCASE("more interference never raises SINR") {
      NetworkScene s2 = scene;
      s2.powers_w(1) *= 10.0; // stronger interferer into pairs 0 and 2
      CHECK(sinr(s2, p, 0) <= sinr(scene, p, 0));
      CHECK(sinr(s2, p, 2) <= sinr(scene, p, 2));
    }
  }
}

TEST_CASE("evaluation counters") {
  const NetworkScene scene = isolated_pairs({-100.0, -100.0});
  const SumRateObjective f(scene);
  const std::uint64_t before = evaluation_count();
  const Eigen::VectorXd x = on_own_nodes(2).stacked();
  for (int i = 0; i < 5; ++i) {
    f(x);
  }
  CHECK(f.evaluations() == 5);
  CHECK(evaluation_count() - before >= 5);

  std::vector<std::thread> pool;
  for (int t = 0; t < 4; ++t) {
    pool.emplace_back([&] {
      for (int i = 0; i < 250; ++i) {
        f(x);
      }
    });
  }
  for (auto& th : pool) {
    th.join();
  }
  CHECK(f.evaluations() == 1005);
}

TEST_CASE("scene validation") {
  NetworkScene scene = isolated_pairs({-100.0, -100.0});
  scene.weights(0) = 0.0;
  CHECK_THROWS_AS(scene.validate(), Error);
  scene = isolated_pairs({-100.0, -100.0});
  scene.powers_w.resize(1);
  CHECK_THROWS_AS(scene.validate(), Error);
  scene = isolated_pairs({-100.0, -100.0});
  scene.area = {0, 50, 0, 50}; // larger than the maps
  CHECK_THROWS_AS(scene.validate(), Error);
}

TEST_CASE("LoS channel model") {
  NetworkScene scene = isolated_pairs({-100.0});
  scene.channel = ChannelModel::los;
  scene.gbs_height = 2.0;
  scene.altitude = 50.0;
  scene.los_beta0_db = -30.0;
  CHECK(scene.gain(0, {0, 0}) == doctest::Approx(4.340277777777778e-07).epsilon(1e-12));
  CHECK(los_gain({0, 0}, {48, 0}, 2.0, 2.0, 1e-3) ==
        doctest::Approx(4.340277777777778e-07).epsilon(1e-12));
  CHECK(los_gain({48, 0}, {0, 0}, 50.0, 2.0, 1e-3) ==
        doctest::Approx(2.170138888888889e-07).epsilon(1e-12));
  CHECK_THROWS_AS(los_gain({0, 0}, {0, 0}, 2.0, 2.0, 1e-3), Error);
}
