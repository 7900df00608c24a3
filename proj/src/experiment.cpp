#include "ckmplace/experiment.hpp"
#include "ckmplace/baselines.hpp"
#include "ckmplace/error.hpp"
#include "ckmplace/scene_io.hpp"

#include "number_format.hpp"
#include "yaml_util.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <future>
#include <map>
#include <sstream>

namespace ckmplace {

using detail::allow_keys;
using detail::fail;
using detail::number;
using detail::require;

const char* to_string(Scheme scheme) {
  switch (scheme) {
  case Scheme::dfo: return "dfo";
  case Scheme::exhaustive: return "exhaustive";
  case Scheme::hover: return "hover";
  case Scheme::los: return "los";
  }
  return "unknown";
}

Scheme parse_scheme(const std::string& name) {
  for (Scheme s : {Scheme::dfo, Scheme::exhaustive, Scheme::hover, Scheme::los}) {
    if (name == to_string(s)) {
      return s;
    }
  }
  throw Error(ErrorCode::config, "unknown scheme '" + name + "'");
}

std::vector<double> PowerSweep::levels() const {
  std::vector<double> out;
  for (int i = 0;; ++i) {
    const double level = start_dbm + double(i) * step_dbm;
    if (level > stop_dbm + 1e-9) {
      break;
    }
    out.push_back(level);
  }
  return out;
}

PowerSweep PowerSweep::parse(const std::string& range) {
  const auto first = range.find(':');
  const auto second = first == std::string::npos ? first : range.find(':', first + 1);
  if (second == std::string::npos) {
    throw Error(ErrorCode::config, "power sweep must look like start:step:stop, got '" + range + "'");
  }
  const auto start = detail::parse_double(range.substr(0, first));
  const auto step = detail::parse_double(range.substr(first + 1, second - first - 1));
  const auto stop = detail::parse_double(range.substr(second + 1));
  if (!start || !step || !stop || !std::isfinite(*start) || !std::isfinite(*stop) ||
      !(*step > 0.0) || *stop < *start) {
    throw Error(ErrorCode::config, "invalid power sweep '" + range + "'");
  }
  return {*start, *step, *stop};
}

void ExperimentConfig::set_power_dbm(double dbm) {
  powers_dbm = Eigen::VectorXd::Constant(Eigen::Index(uav_count()), dbm);
  powers_w = Eigen::VectorXd::Constant(Eigen::Index(uav_count()), dbm_to_watts(dbm));
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

// Accepts 30, -100, "30 dBm", "-100dBm".
double parse_dbm(const YAML::Node& node, const std::string& name) {
  if (!node.IsScalar()) {
    fail(node, name + " must be a number of dBm");
  }
  std::string s = node.Scalar();
  const auto unit = s.find("dBm");
  if (unit != std::string::npos) {
    if (unit + 3 != s.size()) {
      fail(node, name + ": unexpected text after 'dBm'");
    }
    s = s.substr(0, unit);
  }
  const auto value = detail::parse_double(s);
  if (!value || !std::isfinite(*value)) {
    fail(node, name + " must be a number of dBm, got '" + node.Scalar() + "'");
  }
  return *value;
}

// Scalar broadcast to `count`, or a list of exactly `count` entries.
template <typename Parse>
Eigen::VectorXd per_uav(const YAML::Node& node, std::size_t count, const std::string& name,
                        Parse parse) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(count));
  if (node.IsSequence()) {
    if (node.size() != count) {
      fail(node, name + " needs " + std::to_string(count) + " entries, got " +
                     std::to_string(node.size()));
    }
    for (std::size_t k = 0; k < count; ++k) {
      out(Eigen::Index(k)) = parse(node[k], name);
    }
  } else {
    out.setConstant(parse(node, name));
  }
  return out;
}

Rect parse_area(const YAML::Node& node) {
  allow_keys(node, {"x_min", "x_max", "y_min", "y_max"}, "scene.area");
  Rect r{number(require(node, "x_min", "scene.area"), "x_min"),
         number(require(node, "x_max", "scene.area"), "x_max"),
         number(require(node, "y_min", "scene.area"), "y_min"),
         number(require(node, "y_max", "scene.area"), "y_max")};
  if (!(r.x_max > r.x_min) || !(r.y_max > r.y_min)) {
    fail(node, "scene.area must have x_max > x_min and y_max > y_min");
  }
  return r;
}

int integer(const YAML::Node& node, const std::string& name) {
  const double v = number(node, name);
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    fail(node, name + " must be an integer");
  }
  return static_cast<int>(v);
}

void parse_scene(const YAML::Node& node, ExperimentConfig& c) {
  allow_keys(node,
             {"area", "altitude_m", "gbs_height_m", "ckm_spacing_m", "lookup", "noise_dbm",
              "los_beta0_db", "gbs"},
             "scene");
  c.area = parse_area(require(node, "area", "scene"));
  c.altitude = detail::number_or(node, "altitude_m", 50.0);
  c.gbs_height = detail::number_or(node, "gbs_height_m", 2.0);
  c.ckm_spacing = detail::number_or(node, "ckm_spacing_m", 5.0);
  if (!(c.ckm_spacing > 0.0)) {
    fail(node["ckm_spacing_m"], "ckm_spacing_m must be positive");
  }
  c.los_beta0_db = detail::number_or(node, "los_beta0_db", -30.0);
  if (const YAML::Node l = node["lookup"]) {
    const auto mode = detail::text(l, "lookup");
    if (mode == "nearest") {
      c.lookup = Lookup::nearest;
    } else if (mode == "bilinear") {
      c.lookup = Lookup::bilinear;
    } else {
      fail(l, "lookup must be 'nearest' or 'bilinear'");
    }
  }

  const YAML::Node list = require(node, "gbs", "scene");
  if (!list.IsSequence() || list.size() == 0) {
    fail(list, "scene.gbs must be a non-empty list");
  }
  for (const auto& g : list) {
    allow_keys(g, {"x", "y", "height", "ckm", "synthetic"}, "scene.gbs entry");
    GbsConfig gbs;
    gbs.location = {number(require(g, "x", "scene.gbs entry"), "x"),
                    number(require(g, "y", "scene.gbs entry"), "y")};
    if (const YAML::Node h = g["height"]; h && number(h, "height") != c.gbs_height) {
      fail(h, "per-GBS height must equal scene.gbs_height_m (a common height is modelled)");
    }
    const bool has_ckm = static_cast<bool>(g["ckm"]);
    const bool has_syn = static_cast<bool>(g["synthetic"]);
    if (has_ckm == has_syn) {
      fail(g, "each GBS needs exactly one of 'ckm' or 'synthetic'");
    }
    if (has_ckm) {
      gbs.ckm = c.base_dir / detail::text(g["ckm"], "ckm");
    } else {
      gbs.synthetic = c.base_dir / detail::text(g["synthetic"], "synthetic");
    }
    c.gbs.push_back(gbs);
  }
  c.noise_w = per_uav(node["noise_dbm"] ? node["noise_dbm"] : YAML::Node(-100.0), c.uav_count(),
                      "noise_dbm", parse_dbm)
                  .unaryExpr([](double dbm) { return dbm_to_watts(dbm); });
}

void parse_uav(const YAML::Node& node, ExperimentConfig& c) {
  allow_keys(node, {"count", "power_dbm", "weights"}, "uav");
  if (const YAML::Node k = node["count"]) {
    const int count = integer(k, "count");
    if (count < 1 || std::size_t(count) != c.uav_count()) {
      fail(k, "uav.count must equal the number of GBSs (" + std::to_string(c.uav_count()) + ")");
    }
  }
  c.powers_dbm = per_uav(node["power_dbm"] ? node["power_dbm"] : YAML::Node(30.0), c.uav_count(),
                         "power_dbm", parse_dbm);
  c.powers_w = c.powers_dbm.unaryExpr([](double dbm) { return dbm_to_watts(dbm); });
  c.weights = per_uav(node["weights"] ? node["weights"] : YAML::Node(1.0), c.uav_count(),
                      "weights", number);
  if (!(c.weights.array() > 0.0).all()) {
    fail(node["weights"], "weights must be positive");
  }
}

void parse_optimizer(const YAML::Node& node, ExperimentConfig& c) {
  c.state = TrustRegionState::defaults_for(c.area);
  if (!node) {
    return;
  }
  allow_keys(node,
             {"delta0_m", "beta", "epsilon_m", "max_iters", "seed", "initial",
              "initial_placement", "restarts", "trs_multistarts"},
             "optimizer");
  c.state.delta0 = detail::number_or(node, "delta0_m", c.state.delta0);
  c.state.delta = c.state.delta0;
  c.state.beta = detail::number_or(node, "beta", c.state.beta);
  c.state.epsilon = detail::number_or(node, "epsilon_m", c.state.epsilon);
  if (node["max_iters"]) {
    c.state.max_iters = integer(node["max_iters"], "max_iters");
  }
  if (node["seed"]) {
    const double s = number(node["seed"], "seed");
    if (s < 0 || s != std::floor(s) || s > 9007199254740992.0) {
      fail(node["seed"], "seed must be a non-negative integer");
    }
    c.seed = static_cast<std::uint64_t>(s);
  }
  if (node["restarts"]) {
    c.restarts = integer(node["restarts"], "restarts");
    if (c.restarts < 1) {
      fail(node["restarts"], "restarts must be at least 1");
    }
  }
  if (node["trs_multistarts"]) {
    c.trs_multistarts = integer(node["trs_multistarts"], "trs_multistarts");
    if (c.trs_multistarts < 0) {
      fail(node["trs_multistarts"], "trs_multistarts must be non-negative");
    }
  }
  if (const YAML::Node init = node["initial"]) {
    const auto mode = detail::text(init, "initial");
    if (mode == "hover") {
      c.initial = InitialPlacement::hover;
    } else if (mode == "center") {
      c.initial = InitialPlacement::center;
    } else if (mode == "given") {
      c.initial = InitialPlacement::given;
    } else {
      fail(init, "initial must be hover, center, or given");
    }
  }
  if (const YAML::Node pts = node["initial_placement"]) {
    if (!pts.IsSequence() || pts.size() != c.uav_count()) {
      fail(pts, "initial_placement needs one [x, y] pair per UAV");
    }
    for (const auto& p : pts) {
      if (!p.IsSequence() || p.size() != 2) {
        fail(p, "initial_placement entries must be [x, y]");
      }
      const Eigen::Vector2d q(number(p[0], "x"), number(p[1], "y"));
      if (!c.area.contains(q, kFeasibilityTol)) {
        fail(p, "initial_placement point lies outside scene.area");
      }
      c.initial_points.push_back(q);
    }
  }
  if (c.initial == InitialPlacement::given && c.initial_points.empty()) {
    fail(node, "initial: given requires initial_placement");
  }
  try {
    c.state.validate();
  } catch (const Error& e) {
    fail(node, std::string("optimizer: ") + e.what());
  }
}

void parse_run(const YAML::Node& node, ExperimentConfig& c) {
  if (!node) {
    return;
  }
  allow_keys(node,
             {"mode", "grid_step_m", "scheme", "sweep_dbm", "sweep_schemes", "output_dir",
              "search_budget", "los_cross_check_step_m", "record_wall_time"},
             "run");
  if (const YAML::Node m = node["mode"]) {
    const auto mode = detail::text(m, "mode");
    if (mode == "optimize") {
      c.mode = RunMode::optimize;
    } else if (mode == "exhaustive") {
      c.mode = RunMode::exhaustive;
    } else if (mode == "baseline") {
      c.mode = RunMode::baseline;
    } else if (mode == "sweep") {
      c.mode = RunMode::sweep;
    } else {
      fail(m, "mode must be optimize, exhaustive, baseline, or sweep");
    }
  }
  c.grid_step = detail::number_or(node, "grid_step_m", c.grid_step);
  if (!(c.grid_step > 0.0)) {
    fail(node["grid_step_m"], "grid_step_m must be positive");
  }
  if (const YAML::Node s = node["scheme"]) {
    const auto name = detail::text(s, "scheme");
    if (name != "hover" && name != "los") {
      fail(s, "scheme must be hover or los");
    }
    c.scheme = parse_scheme(name);
  }
  if (const YAML::Node s = node["sweep_dbm"]) {
    try {
      c.sweep = PowerSweep::parse(detail::text(s, "sweep_dbm"));
    } catch (const Error& e) {
      fail(s, e.what());
    }
  }
  if (const YAML::Node list = node["sweep_schemes"]) {
    if (!list.IsSequence() || list.size() == 0) {
      fail(list, "sweep_schemes must be a non-empty list");
    }
    c.sweep_schemes.clear();
    for (const auto& s : list) {
      try {
        c.sweep_schemes.push_back(parse_scheme(detail::text(s, "sweep_schemes")));
      } catch (const Error& e) {
        fail(s, e.what());
      }
    }
  }
  if (const YAML::Node o = node["output_dir"]) {
    c.output_dir = c.base_dir / detail::text(o, "output_dir");
  }
  if (const YAML::Node b = node["search_budget"]) {
    const double budget = number(b, "search_budget");
    if (!(budget >= 1.0)) {
      fail(b, "search_budget must be at least 1");
    }
    c.search_budget = static_cast<std::uint64_t>(std::min(budget, 1.8e19));
  }
  c.los_cross_check_step = detail::number_or(node, "los_cross_check_step_m", 0.0);
  if (c.los_cross_check_step < 0.0) {
    fail(node["los_cross_check_step_m"], "los_cross_check_step_m must be non-negative");
  }
  if (const YAML::Node w = node["record_wall_time"]) {
    c.record_wall_time = detail::boolean(w, "record_wall_time");
  }
}

} // namespace

ExperimentConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir) {
  const YAML::Node root = detail::load_yaml(text);
  allow_keys(root, {"scene", "uav", "optimizer", "run"}, "config");
  ExperimentConfig c;
  c.base_dir = base_dir;
  c.output_dir = base_dir / "out";
  parse_scene(require(root, "scene", "config"), c);
  parse_uav(root["uav"] ? root["uav"] : YAML::Node(YAML::NodeType::Map), c);
  parse_optimizer(root["optimizer"], c);
  parse_run(root["run"], c);

  if (const char* env = std::getenv("CKMPLACE_SEED"); env != nullptr && *env != '\0') {
    const auto v = detail::parse_double(env);
    if (!v || *v < 0 || *v != std::floor(*v)) {
      throw Error(ErrorCode::config, "CKMPLACE_SEED must be a non-negative integer");
    }
    c.seed = static_cast<std::uint64_t>(*v);
  }
  return c;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::io, "cannot open config file " + path.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config_text(buf.str(), path.parent_path().empty() ? "." : path.parent_path());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

NetworkScene build_scene(const ExperimentConfig& config) {
  NetworkScene scene;
  scene.area = config.area;
  scene.altitude = config.altitude;
  scene.gbs_height = config.gbs_height;
  scene.powers_w = config.powers_w;
  scene.noise_w = config.noise_w;
  scene.weights = config.weights;
  scene.lookup = config.lookup;
  scene.los_beta0_db = config.los_beta0_db;

  std::map<std::filesystem::path, SceneFile> scenes;
  for (const auto& g : config.gbs) {
    scene.gbs.push_back(g.location);
    if (!g.ckm.empty()) {
      scene.ckms.push_back(std::make_shared<const GridCkm>(load_ckm(g.ckm)));
      continue;
    }
    auto it = scenes.find(g.synthetic);
    if (it == scenes.end()) {
      it = scenes.emplace(g.synthetic, load_scene_file(g.synthetic)).first;
    }
    GeneratorOptions opts;
    opts.allow_below_rooftops = it->second.allow_below_rooftops;
    const Eigen::Vector3d w(g.location.x(), g.location.y(), config.gbs_height);
    scene.ckms.push_back(std::make_shared<const GridCkm>(
        generate_synthetic_ckm(it->second.scene, w, config.altitude, config.ckm_spacing, opts)));
  }
  scene.validate();
  return scene;
}

Placement initial_placement(const ExperimentConfig& config, const NetworkScene& scene) {
  switch (config.initial) {
  case InitialPlacement::given:
    return Placement::from_points(config.initial_points);
  case InitialPlacement::center: {
    const Eigen::Vector2d mid(0.5 * (scene.area.x_min + scene.area.x_max),
                              0.5 * (scene.area.y_min + scene.area.y_max));
    return Placement::from_points(std::vector<Eigen::Vector2d>(scene.size(), mid));
  }
  case InitialPlacement::hover:
    break;
  }
  return projected_hovering_placement(scene);
}

// ---------------------------------------------------------------------------
// CSV output

std::string convergence_csv(const std::vector<IterationRecord>& log, std::size_t uav_count) {
  using detail::shortest;
  std::ostringstream out;
  out << "iter,objective_bps_hz,delta_m,accepted,eval_count";
  for (std::size_t k = 1; k <= uav_count; ++k) {
    out << ",q" << k << "x_m,q" << k << "y_m";
  }
  out << '\n';
  for (const auto& rec : log) {
    out << rec.iteration << ',' << shortest(rec.objective) << ',' << shortest(rec.delta) << ','
        << (rec.accepted ? 1 : 0) << ',' << rec.eval_count;
    for (Eigen::Index i = 0; i < rec.placement.size(); ++i) {
      out << ',' << shortest(rec.placement(i));
    }
    out << '\n';
  }
  return out.str();
}

std::string result_csv(const std::vector<SchemeResult>& rows, std::size_t uav_count,
                       bool with_wall_time) {
  using detail::shortest;
  std::ostringstream out;
  out << "scheme,power_dbm,sum_rate_bps_hz";
  for (std::size_t k = 1; k <= uav_count; ++k) {
    out << ",rate_k" << k;
  }
  out << ",eval_count,wall_ms\n";
  for (const auto& r : rows) {
    out << to_string(r.scheme) << ',' << (r.uniform_power ? shortest(r.power_dbm) : "mixed")
        << ',' << shortest(r.sum_rate);
    for (Eigen::Index k = 0; k < r.rates.size(); ++k) {
      out << ',' << shortest(r.rates(k));
    }
    out << ',' << r.evaluations << ',' << (with_wall_time ? detail::fixed(r.wall_ms, 3) : "0")
        << '\n';
  }
  return out.str();
}

std::string placement_csv(const SchemeResult& row) {
  using detail::shortest;
  std::ostringstream out;
  out << "uav,x_m,y_m,rate_bps_hz\n";
  for (std::size_t k = 0; k < row.placement.uav_count(); ++k) {
    const Eigen::Vector2d q = row.placement.uav(k);
    out << k + 1 << ',' << shortest(q.x()) << ',' << shortest(q.y()) << ','
        << shortest(row.rates(Eigen::Index(k))) << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Orchestration

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

SchemeResult make_row(Scheme scheme, const ExperimentConfig& config, const NetworkScene& scene,
                      const Placement& placement, std::uint64_t evaluations, double wall_ms) {
  SchemeResult r;
  r.scheme = scheme;
  r.power_dbm = config.powers_dbm(0);
  r.uniform_power = (config.powers_dbm.array() == config.powers_dbm(0)).all();
  r.placement = placement;
  r.rates = rates(scene, placement);
  r.sum_rate = weighted_sum_rate(scene, placement);
  r.evaluations = evaluations;
  r.wall_ms = wall_ms;
  return r;
}

struct OptimizeOutcome {
  SchemeResult row;
  std::vector<IterationRecord> log;
};

OptimizeOutcome optimize(const ExperimentConfig& config, const NetworkScene& scene) {
  const auto t0 = Clock::now();
  const Placement start = initial_placement(config, scene);
  PlacementResult best;
  bool have = false;
  std::uint64_t evaluations = 0;
  for (int r = 0; r < config.restarts; ++r) {
    const std::uint64_t seed = r == 0 ? config.seed : mix_seed(config.seed, std::uint64_t(r));
    PlacementResult res = run(scene, start, config.state, seed, {}, config.trs_multistarts);
    evaluations += res.evaluations;
    if (!have || res.value > best.value) {
      best = std::move(res);
      have = true;
    }
  }
  OptimizeOutcome out;
  out.row = make_row(Scheme::dfo, config, scene, best.placement, evaluations, elapsed_ms(t0));
  out.log = std::move(best.log);
  return out;
}

SchemeResult run_scheme(Scheme scheme, const ExperimentConfig& config, const NetworkScene& scene) {
  const auto t0 = Clock::now();
  switch (scheme) {
  case Scheme::dfo:
    return optimize(config, scene).row;
  case Scheme::exhaustive: {
    const SearchResult res =
        exhaustive_search(scene, SearchGrid::over(scene.area, config.grid_step),
                          config.search_budget);
    return make_row(scheme, config, scene, res.placement, res.evaluations, elapsed_ms(t0));
  }
  case Scheme::hover:
    return make_row(scheme, config, scene, hovering_placement(scene), 1, elapsed_ms(t0));
  case Scheme::los: {
    LosDesignOptions opts;
    opts.state = config.state;
    opts.seed = config.seed;
    opts.start = initial_placement(config, scene);
    opts.trs_multistarts = config.trs_multistarts;
    opts.cross_check_step = config.los_cross_check_step;
    opts.cross_check_budget = config.search_budget;
    const LosDesignResult res = los_design(scene, opts);
    return make_row(scheme, config, scene, res.placement, res.evaluations, elapsed_ms(t0));
  }
  }
  throw Error(ErrorCode::invalid_argument, "unknown scheme");
}

void write_file(const std::filesystem::path& path, const std::string& content,
                std::vector<std::filesystem::path>& files) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::io, "cannot write " + path.string());
  }
  out << content;
  if (!out) {
    throw Error(ErrorCode::io, "write failed for " + path.string());
  }
  files.push_back(path);
}

std::string timing_csv(const std::vector<SchemeResult>& rows) {
  std::ostringstream out;
  out << "scheme,power_dbm,wall_ms\n";
  for (const auto& r : rows) {
    out << to_string(r.scheme) << ',' << (r.uniform_power ? detail::shortest(r.power_dbm) : "mixed")
        << ',' << detail::fixed(r.wall_ms, 3) << '\n';
  }
  return out.str();
}

} // namespace

ExperimentOutput run_experiment(const ExperimentConfig& config) {
  ExperimentOutput out;
  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec) {
    throw Error(ErrorCode::io, "cannot create " + config.output_dir.string() + ": " + ec.message());
  }
  const std::size_t k = config.uav_count();

  switch (config.mode) {
  case RunMode::optimize: {
    const NetworkScene scene = build_scene(config);
    OptimizeOutcome res = optimize(config, scene);
    out.results.push_back(res.row);
    out.convergence = std::move(res.log);
    write_file(config.output_dir / "convergence.csv", convergence_csv(out.convergence, k), out.files);
    write_file(config.output_dir / "placement.csv", placement_csv(res.row), out.files);
    break;
  }
  case RunMode::exhaustive:
  case RunMode::baseline: {
    const NetworkScene scene = build_scene(config);
    const Scheme scheme = config.mode == RunMode::exhaustive ? Scheme::exhaustive : config.scheme;
    out.results.push_back(run_scheme(scheme, config, scene));
    write_file(config.output_dir / "placement.csv", placement_csv(out.results.back()), out.files);
    break;
  }
  case RunMode::sweep: {
    const std::vector<double> levels = config.sweep.levels();
    const NetworkScene base = build_scene(config);
    std::vector<std::future<std::vector<SchemeResult>>> jobs;
    for (double level : levels) {
      jobs.push_back(std::async(std::launch::async, [&config, &base, level] {
        ExperimentConfig at = config;
        at.set_power_dbm(level);
        NetworkScene scene = base;
        scene.powers_w = at.powers_w;
        std::vector<SchemeResult> rows;
        for (Scheme s : at.sweep_schemes) {
          rows.push_back(run_scheme(s, at, scene));
        }
        return rows;
      }));
    }
    for (auto& job : jobs) {
      for (auto& row : job.get()) {
        out.results.push_back(std::move(row));
      }
    }
    break;
  }
  }
  write_file(config.output_dir / "result.csv", result_csv(out.results, k, config.record_wall_time),
             out.files);
  write_file(config.output_dir / "timing.csv", timing_csv(out.results), out.files);
  return out;
}

} // namespace ckmplace
