#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "qdotlab/config.hpp"
#include "qdotlab/errors.hpp"
#include "qdotlab/sweep.hpp"

namespace fs = std::filesystem;

namespace {

int run_solve(const std::string& config_path, const std::string& out_dir,
              bool verbose) {
  const qd::Config cfg = config_path.empty() ? qd::Config::parse_string("")
                                             : qd::Config::parse_file(config_path);
  const qd::DeviceSpec dev = qd::device_from_config(cfg);
  const qd::SolverOptions opt = qd::solver_from_config(cfg);
  dev.validate();
  fs::create_directories(out_dir);

  if (verbose)
    std::fprintf(stderr, "solving device at T = %g K\n", dev.temperature_k);
  const std::vector<std::string> outputs = {"band_profile", "spectrum",
                                            "history", "coupling", "leakage"};
  qd::PointArtifacts art =
      qd::analyze_point(dev, opt, outputs, dev.temperature_k);

  qd::write_csv(*art.band, (fs::path(out_dir) / "band.csv").string());
  qd::write_csv(*art.spectrum, (fs::path(out_dir) / "spectrum.csv").string());
  qd::ConvergedState tmp;
  tmp.history = art.history;
  qd::write_history_csv(tmp, (fs::path(out_dir) / "history.csv").string());
  qd::write_metrics_csv("device", {art.metrics},
                        (fs::path(out_dir) / "metrics.csv").string());
  if (verbose)
    std::fprintf(stderr, "well depth %.4g eV, overlap %.4g, leakage %.4g\n",
                 art.metrics.well_depth_ev, art.metrics.overlap,
                 art.metrics.leak_frac);
  return 0;
}

int run_sweep_cmd(const std::string& config_path, const std::string& out_dir,
                  int workers, bool verbose) {
  const qd::Config cfg = qd::Config::parse_file(config_path);
  qd::SweepConfig sc = qd::sweep_from_config(cfg);
  if (!out_dir.empty()) sc.output_dir = out_dir;
  if (workers > 0) sc.workers = workers;
  const qd::RunManifest man = qd::run_sweep(sc);
  if (verbose) {
    for (std::size_t i = 0; i < man.points.size(); ++i)
      std::fprintf(stderr, "point %zu (%s = %g): %s\n", i, man.variable.c_str(),
                   man.points[i].value,
                   man.points[i].converged ? "converged"
                                           : man.points[i].error.c_str());
  }
  return man.all_failed ? 3 : 0;
}

int run_cb(const std::string& config_path, const std::string& out_dir,
           bool verbose) {
  const qd::Config cfg = config_path.empty() ? qd::Config::parse_string("")
                                             : qd::Config::parse_file(config_path);
  const qd::DeviceSpec dev = qd::device_from_config(cfg);
  const qd::SetParameters prm = qd::coulomb_from_config(cfg, dev);
  const qd::CoulombGrid grid = qd::coulomb_grid_from_config(cfg);
  std::vector<double> vg(grid.points);
  for (int i = 0; i < grid.points; ++i)
    vg[i] = grid.vg_min + (grid.vg_max - grid.vg_min) * i / (grid.points - 1);
  const qd::CoulombTrace trace = qd::cb_current(prm, vg);
  fs::create_directories(out_dir);
  qd::write_csv(trace, (fs::path(out_dir) / "cb.csv").string());
  if (verbose) {
    std::fprintf(stderr, "E_c = %.4g meV, period q/C_g = %.4g mV%s\n",
                 prm.charging_energy_ev() * 1e3,
                 qd::q_coulomb / prm.c_g * 1e3,
                 trace.linear_response_ok ? "" : " (V_ds beyond linear response)");
  }
  return 0;
}

int run_summary(const std::vector<std::string>& dirs, const std::string& out) {
  std::ofstream os(out);
  if (!os) throw std::runtime_error("cannot open " + out);
  bool header_done = false;
  for (const auto& d : dirs) {
    std::ifstream in(fs::path(d) / "metrics.csv");
    if (!in) throw qd::ConfigError("no metrics.csv under " + d);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      if (first) {
        if (!header_done) {
          os << line << "\n";
          header_done = true;
        }
        first = false;
        continue;
      }
      os << line << "\n";
    }
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-dot MOSFET electrostatics and transmission studies"};
  app.require_subcommand(1);

  std::string config_path, out_dir, summary_out = "summary.csv";
  std::vector<std::string> summary_dirs;
  int workers = 0;
  bool verbose = false;
  app.add_flag("--verbose", verbose, "progress to stderr");

  auto* solve = app.add_subcommand("solve", "self-consistent single device");
  solve->add_option("--config", config_path, "config file");
  solve->add_option("--out", out_dir, "output directory");

  auto* sweep = app.add_subcommand("sweep", "parameter sweep study");
  sweep->add_option("--config", config_path, "config file")->required();
  sweep->add_option("--out", out_dir, "output directory override");
  sweep->add_option("--workers", workers, "worker count");

  auto* cb = app.add_subcommand("cb", "Coulomb-blockade trace");
  cb->add_option("--config", config_path, "config file");
  cb->add_option("--out", out_dir, "output directory");

  auto* summary = app.add_subcommand("summary", "merge sweep metrics tables");
  summary->add_option("dirs", summary_dirs, "sweep output directories")
      ->required();
  summary->add_option("--out", summary_out, "summary CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed())
      return run_solve(config_path, out_dir.empty() ? "out" : out_dir, verbose);
    if (sweep->parsed()) return run_sweep_cmd(config_path, out_dir, workers, verbose);
    if (cb->parsed())
      return run_cb(config_path, out_dir.empty() ? "out" : out_dir, verbose);
    if (summary->parsed()) return run_summary(summary_dirs, summary_out);
  } catch (const qd::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
