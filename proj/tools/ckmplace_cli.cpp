// Command-line front end: map generation, optimisation, baselines, sweeps.

#include "ckmplace/ckm.hpp"
#include "ckmplace/error.hpp"
#include "ckmplace/experiment.hpp"
#include "ckmplace/scene_io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>

namespace fs = std::filesystem;
using namespace ckmplace;

namespace {

int generate_ckm(const fs::path& scene_path, const std::string& which, double spacing,
                 const fs::path& out_dir) {
  const SceneFile file = load_scene_file(scene_path);
  if (file.gbs.empty()) {
    throw Error(ErrorCode::config, scene_path.string() + ": no 'gbs' entries to generate maps for");
  }
  if (!file.altitude) {
    throw Error(ErrorCode::config, scene_path.string() + ": 'altitude_m' is required");
  }
  std::size_t first = 0;
  std::size_t last = file.gbs.size();
  if (which != "all") {
    std::size_t index = 0;
    try {
      index = std::stoul(which);
    } catch (const std::exception&) {
      throw Error(ErrorCode::invalid_argument, "--gbs must be a 1-based index or 'all'");
    }
    if (index < 1 || index > file.gbs.size()) {
      throw Error(ErrorCode::invalid_argument,
                  "--gbs index out of range 1.." + std::to_string(file.gbs.size()));
    }
    first = index - 1;
    last = index;
  }
  fs::create_directories(out_dir);
  GeneratorOptions opts;
  opts.allow_below_rooftops = file.allow_below_rooftops;
  for (std::size_t k = first; k < last; ++k) {
    const GridCkm ckm = generate_synthetic_ckm(file.scene, file.gbs[k], *file.altitude, spacing, opts);
    const fs::path path = out_dir / ("ckm_gbs" + std::to_string(k + 1) + ".csv");
    save_ckm(path, ckm);
    std::cout << path.string() << ": " << ckm.nx() << "x" << ckm.ny() << " nodes\n";
  }
  return 0;
}

void report(const ExperimentOutput& out) {
  for (const auto& r : out.results) {
    std::cout << to_string(r.scheme) << "  P=" << r.power_dbm << " dBm  R=" << r.sum_rate
              << " bps/Hz  evals=" << r.evaluations << "\n";
  }
  for (const auto& f : out.files) {
    std::cout << "wrote " << f.string() << "\n";
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Placement optimisation for multi-UAV uplinks over channel knowledge maps"};
  app.require_subcommand(1);

  fs::path scene_path, config_path, out_dir;
  std::string gbs_index = "all";
  double spacing = 5.0;
  double step = 0.0;
  std::string scheme;
  std::string power_range;

  auto* gen = app.add_subcommand("generate-ckm", "Generate synthetic CKM CSVs from a building scene");
  gen->add_option("--scene", scene_path, "Building scene file")->required()->check(CLI::ExistingFile);
  gen->add_option("--gbs", gbs_index, "1-based GBS index or 'all'");
  gen->add_option("--spacing", spacing, "Grid spacing (m)")->check(CLI::PositiveNumber);
  gen->add_option("--out", out_dir, "Output directory")->required();

  auto* opt = app.add_subcommand("optimize", "Run the derivative-free placement optimiser");
  opt->add_option("--config", config_path, "Experiment config")->required()->check(CLI::ExistingFile);
  opt->add_option("--out", out_dir, "Output directory");

  auto* exh = app.add_subcommand("exhaustive", "Exhaustive lattice search");
  exh->add_option("--config", config_path, "Experiment config")->required()->check(CLI::ExistingFile);
  exh->add_option("--step", step, "Lattice step (m)")->check(CLI::PositiveNumber);
  exh->add_option("--out", out_dir, "Output directory");

  auto* base = app.add_subcommand("baseline", "Hovering or LoS-design baseline");
  base->add_option("--config", config_path, "Experiment config")->required()->check(CLI::ExistingFile);
  base->add_option("--scheme", scheme, "hover or los")->required()->check(CLI::IsMember({"hover", "los"}));
  base->add_option("--out", out_dir, "Output directory");

  auto* sweep = app.add_subcommand("sweep", "Sum rate versus UAV transmit power");
  sweep->add_option("--config", config_path, "Experiment config")->required()->check(CLI::ExistingFile);
  sweep->add_option("--power-dbm", power_range, "start:step:stop in dBm");
  sweep->add_option("--out", out_dir, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      return generate_ckm(scene_path, gbs_index, spacing, out_dir);
    }
    ExperimentConfig config = parse_config(config_path);
    if (!out_dir.empty()) {
      config.output_dir = out_dir;
    }
    if (opt->parsed()) {
      config.mode = RunMode::optimize;
    } else if (exh->parsed()) {
      config.mode = RunMode::exhaustive;
      if (step > 0.0) {
        config.grid_step = step;
      }
    } else if (base->parsed()) {
      config.mode = RunMode::baseline;
      config.scheme = parse_scheme(scheme);
    } else if (sweep->parsed()) {
      config.mode = RunMode::sweep;
      if (!power_range.empty()) {
        config.sweep = PowerSweep::parse(power_range);
      }
    }
    report(run_experiment(config));
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
