#include <doctest.h>

#include "ckmplace/error.hpp"
#include "ckmplace/experiment.hpp"
#include "ckmplace/scene_io.hpp"

#include "fixtures.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <unistd.h>

namespace fs = std::filesystem;
using namespace ckmplace;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() /
           ("ckmplace_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

void write_scene(const fs::path& dir) {
  std::mt19937_64 rng(2024);
  SceneFile file;
  file.scene = testing::random_buildings(rng, {0, 100, 0, 100}, 4);
  file.altitude = 50.0;
  file.gbs = {{20, 30, 2}, {75, 60, 2}};
  save_scene_file(dir / "scene.yaml", file);
}

const char* kConfig = R"(scene:
  area: {x_min: 0, x_max: 100, y_min: 0, y_max: 100}
  altitude_m: 50
  gbs_height_m: 2
  noise_dbm: -100
  gbs:
    - {x: 20, y: 30, synthetic: scene.yaml}
    - {x: 75, y: 60, synthetic: scene.yaml}
uav:
  power_dbm: 30 dBm
optimizer:
  seed: 11
  max_iters: 80
run:
  mode: optimize
  output_dir: out
)";

struct SeedGuard {
  SeedGuard() { ::unsetenv("CKMPLACE_SEED"); }
  ~SeedGuard() { ::unsetenv("CKMPLACE_SEED"); }
};

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CKMPLACE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_CASE("parse_config_text: full example") {
  SeedGuard guard;
  const ExperimentConfig c = parse_config_text(kConfig, "/data");
  CHECK(c.area.x_max == 100.0);
  CHECK(c.uav_count() == 2);
  CHECK(c.gbs[1].location == Eigen::Vector2d(75, 60));
  CHECK(c.gbs[0].synthetic == fs::path("/data/scene.yaml"));
  CHECK(c.powers_w(0) == doctest::Approx(1.0));
  CHECK(c.noise_w(1) == doctest::Approx(1e-13));
  CHECK(c.weights == Eigen::VectorXd::Ones(2));
  CHECK(c.seed == 11);
  CHECK(c.state.max_iters == 80);
  CHECK(c.state.delta0 == 25.0);
  CHECK(c.state.epsilon == 1.0);
  CHECK(c.output_dir == fs::path("/data/out"));
}

TEST_CASE("parse_config_text: per-UAV lists and options") {
  SeedGuard guard;
  const std::string text = R"(scene:
  area: {x_min: -10, x_max: 10, y_min: -10, y_max: 10}
  lookup: bilinear
  gbs:
    - {x: 0, y: 0, ckm: a.csv}
    - {x: 1, y: 1, ckm: b.csv}
uav:
  power_dbm: [20, "25 dBm"]
  weights: [2, 0.5]
optimizer:
  delta0_m: 4
  beta: 0.25
  initial: given
  initial_placement: [[0, 0], [5, -5]]
run:
  mode: sweep
  sweep_dbm: "0:10:30"
  sweep_schemes: [dfo, hover]
)";
  const ExperimentConfig c = parse_config_text(text);
  CHECK(c.lookup == Lookup::bilinear);
  CHECK(c.powers_dbm(1) == 25.0);
  CHECK(c.weights(0) == 2.0);
  CHECK(c.state.delta0 == 4.0);
  CHECK(c.state.beta == 0.25);
  CHECK(c.initial == InitialPlacement::given);
  CHECK(c.initial_points[1] == Eigen::Vector2d(5, -5));
  CHECK(c.mode == RunMode::sweep);
  CHECK(c.sweep.levels() == std::vector<double>{0, 10, 20, 30});
  CHECK(c.sweep_schemes == std::vector<Scheme>{Scheme::dfo, Scheme::hover});
}

TEST_CASE("parse_config_text: errors name the offending line") {
  SeedGuard guard;
  auto error_line = [](const std::string& text) -> std::string {
    try {
      parse_config_text(text);
    } catch (const Error& e) {
      return e.what();
    }
    return "no error";
  };
  const std::string head = "scene:\n  area: {x_min: 0, x_max: 1, y_min: 0, y_max: 1}\n"
                           "  gbs:\n    - {x: 0, y: 0, ckm: a.csv}\n";
  CHECK(error_line(head + "uav:\n  powr_dbm: 30\n").find("line 6") != std::string::npos);
  CHECK(error_line(head + "uav:\n  power_dbm: [1, 2]\n").find("line 6") != std::string::npos);
  CHECK(error_line(head + "optimizer:\n  beta: 2\n").find("beta") != std::string::npos);
  CHECK(error_line(head + "run:\n  mode: fly\n").find("line 6") != std::string::npos);
  CHECK(error_line("scene: [1, 2\n").find("no error") == std::string::npos);
  CHECK(error_line("uav: {}\n").find("scene") != std::string::npos);
  CHECK(error_line(head + "  extra: 1\n").find("line 5") != std::string::npos);
}

TEST_CASE("PowerSweep") {
  CHECK(PowerSweep::parse("0:5:30").levels().size() == 7);
  CHECK(PowerSweep::parse("10:10:10").levels() == std::vector<double>{10});
  CHECK_THROWS_AS(PowerSweep::parse("0:0:30"), Error);
  CHECK_THROWS_AS(PowerSweep::parse("30:5:0"), Error);
  CHECK_THROWS_AS(PowerSweep::parse("0:5"), Error);
}

TEST_CASE("CKMPLACE_SEED overrides the configured seed") {
  SeedGuard guard;
  ::setenv("CKMPLACE_SEED", "1234", 1);
  CHECK(parse_config_text(kConfig).seed == 1234);
  ::setenv("CKMPLACE_SEED", "abc", 1);
  CHECK_THROWS_AS(parse_config_text(kConfig), Error);
}

TEST_CASE("CSV writers") {
  IterationRecord rec;
  rec.iteration = 3;
  rec.objective = 28.2007;
  rec.delta = 12.5;
  rec.accepted = true;
  rec.eval_count = 18;
  rec.placement = Eigen::Vector4d(1.5, -2, 100, 0.25);
  CHECK(convergence_csv({rec}, 2) ==
        "iter,objective_bps_hz,delta_m,accepted,eval_count,q1x_m,q1y_m,q2x_m,q2y_m\n"
        "3,28.2007,12.5,1,18,1.5,-2,100,0.25\n");

  SchemeResult row;
  row.scheme = Scheme::hover;
  row.power_dbm = 30;
  row.sum_rate = 7.1139;
  row.rates = Eigen::Vector3d(2.7662, 3.1435, 1.2042);
  row.placement = Placement::from_points({{0, 0}, {1, 1}, {2, 2}});
  row.evaluations = 1;
  row.wall_ms = 4.56789;
  CHECK(result_csv({row}, 3, false) ==
        "scheme,power_dbm,sum_rate_bps_hz,rate_k1,rate_k2,rate_k3,eval_count,wall_ms\n"
        "hover,30,7.1139,2.7662,3.1435,1.2042,1,0\n");
  CHECK(result_csv({row}, 3, true).find(",1,4.568\n") != std::string::npos);
  CHECK(placement_csv(row) == "uav,x_m,y_m,rate_bps_hz\n1,0,0,2.7662\n2,1,1,3.1435\n3,2,2,1.2042\n");
}

TEST_CASE("optimize run is reproducible byte for byte") {
  SeedGuard guard;
  TempDir dir("optimize");
  write_scene(dir.path);
  spit(dir.path / "config.yaml", kConfig);
  ExperimentConfig c = parse_config(dir.path / "config.yaml");

  c.output_dir = dir.path / "a";
  const ExperimentOutput first = run_experiment(c);
  c.output_dir = dir.path / "b";
  run_experiment(c);
  for (const char* name : {"convergence.csv", "result.csv", "placement.csv"}) {
    CHECK(slurp(dir.path / "a" / name) == slurp(dir.path / "b" / name));
  }
  REQUIRE(first.results.size() == 1);
  CHECK(first.results[0].scheme == Scheme::dfo);
  CHECK(first.convergence.size() == 81);
  CHECK(first.results[0].sum_rate == first.convergence.back().objective);
  CHECK(first.results[0].evaluations == first.convergence.back().eval_count);
  CHECK(fs::exists(dir.path / "a" / "timing.csv"));
}

TEST_CASE("exhaustive, baseline, and sweep modes") {
  SeedGuard guard;
  TempDir dir("modes");
  write_scene(dir.path);
  spit(dir.path / "config.yaml", kConfig);
  ExperimentConfig c = parse_config(dir.path / "config.yaml");
  c.output_dir = dir.path / "out";

  c.mode = RunMode::exhaustive;
  c.grid_step = 20.0;
  const ExperimentOutput ex = run_experiment(c);
  REQUIRE(ex.results.size() == 1);
  CHECK(ex.results[0].evaluations == 36 * 36);

  c.mode = RunMode::baseline;
  c.scheme = Scheme::hover;
  const ExperimentOutput hv = run_experiment(c);
  CHECK(hv.results[0].placement == Placement::from_points({{20, 30}, {75, 60}}));
  CHECK(hv.results[0].sum_rate <= ex.results[0].sum_rate + 1e-9);

  c.mode = RunMode::sweep;
  c.sweep = PowerSweep::parse("10:10:30");
  c.sweep_schemes = {Scheme::dfo, Scheme::hover};
  const ExperimentOutput sw = run_experiment(c);
  REQUIRE(sw.results.size() == 6);
  CHECK(sw.results[0].power_dbm == 10.0);
  CHECK(sw.results[1].scheme == Scheme::hover);
  CHECK(sw.results[5].power_dbm == 30.0);
  const std::string csv = slurp(c.output_dir / "result.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
}

TEST_CASE("command-line interface") {
  SeedGuard guard;
  TempDir dir("cli");
  write_scene(dir.path);
  spit(dir.path / "config.yaml", kConfig);
  const std::string d = dir.path.string();

  CHECK(run_cli("generate-ckm --scene " + d + "/scene.yaml --gbs all --spacing 5 --out " + d +
                "/maps") == 0);
  const GridCkm map = load_ckm(dir.path / "maps" / "ckm_gbs2.csv");
  CHECK(map.nx() == 21);
  CHECK(map.ny() == 21);

  CHECK(run_cli("optimize --config " + d + "/config.yaml --out " + d + "/o1") == 0);
  CHECK(run_cli("optimize --config " + d + "/config.yaml --out " + d + "/o2") == 0);
  CHECK(slurp(dir.path / "o1" / "convergence.csv") == slurp(dir.path / "o2" / "convergence.csv"));
  CHECK(slurp(dir.path / "o1" / "result.csv") == slurp(dir.path / "o2" / "result.csv"));

  CHECK(run_cli("baseline --config " + d + "/config.yaml --scheme hover --out " + d + "/h") == 0);
  CHECK(fs::exists(dir.path / "h" / "placement.csv"));
  CHECK(run_cli("exhaustive --config " + d + "/config.yaml --step 25 --out " + d + "/e") == 0);
  CHECK(run_cli("sweep --config " + d + "/config.yaml --power-dbm 20:10:30 --out " + d + "/s") ==
        0);

  spit(dir.path / "bad.yaml", std::string(kConfig) + "bogus: 1\n");
  CHECK(run_cli("optimize --config " + d + "/bad.yaml") == 2);
  CHECK(run_cli("baseline --config " + d + "/config.yaml --scheme nope") != 0);
  CHECK(run_cli("") != 0);
}
