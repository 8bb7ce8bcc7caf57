#include "qdotlab/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <thread>

#include "qdotlab/errors.hpp"

namespace qd {

namespace {

bool wants(const std::vector<std::string>& outputs, const char* what) {
  for (const auto& o : outputs)
    if (o == what) return true;
  return false;
}

int decide_workers(int requested, std::size_t points) {
  if (requested <= 0) {
    if (const char* env = std::getenv("QDOTLAB_THREADS"))
      requested = std::atoi(env);
  }
  if (requested <= 0) requested = int(std::thread::hardware_concurrency());
  if (requested <= 0) requested = 1;
  return int(std::min<std::size_t>(requested, points));
}

} // namespace

PointArtifacts analyze_point(const DeviceSpec& dev, const SolverOptions& opt,
                             const std::vector<std::string>& outputs,
                             double sweep_value) {
  PointArtifacts art;
  art.metrics.value = sweep_value;
  dev.validate();

  ConvergedState state = continuation_solve(dev, dev.temperature_k, opt);
  art.metrics.converged = true;
  art.history = state.history;
  art.band = state.interface_band;

  const WellMetrics wm = well_metrics(state.interface_band, dev);
  art.metrics.well_depth_ev = wm.well_depth_ev;
  art.metrics.max_barrier_ev = wm.barrier_vs_lead_ev;
  art.metrics.drain_depth_ev = wm.drain_side_depth_ev;

  try {
    const DotPair pair = extract_dot_states(state, dev);
    art.metrics.overlap = exchange_coupling_proxy(pair);
    art.metrics.leak_frac = 0.5 * (sd_leakage_fraction(pair.psi_left, dev) +
                                   sd_leakage_fraction(pair.psi_right, dev));
    art.metrics.localization =
        0.5 * (pair.localization_left + pair.localization_right);
  } catch (const TooFewStates&) {
    art.metrics.overlap = 0.0;
    art.metrics.leak_frac = 0.0;
  }

  const auto segs = segments_from_profile(state.interface_band);
  const auto energies = default_energy_grid(segs);
  const ScatteringSpectrum spec =
      transmission_spectrum(segs, opt.mass_transport, energies);
  const double lead = std::max(segs.front().u_ev, segs.back().u_ev);
  art.metrics.avg_t = average_tunnel_coupling(spec, lead + 0.01, lead + 0.4);
  try {
    art.metrics.t90_ev = energy_at_T_level(spec, 0.9);
  } catch (const LevelNeverReached&) {
    art.metrics.t90_ev = std::numeric_limits<double>::quiet_NaN();
  }
  art.metrics.randomness = randomness_metric(spec).oscillation_count;
  if (wants(outputs, "spectrum")) art.spectrum = spec;

  if (wants(outputs, "cb")) {
    Config empty = Config::parse_string("");
    const SetParameters prm = coulomb_from_config(empty, dev);
    const CoulombGrid grid;
    std::vector<double> vg(grid.points);
    for (int i = 0; i < grid.points; ++i)
      vg[i] = grid.vg_min + (grid.vg_max - grid.vg_min) * i / (grid.points - 1);
    art.cb = cb_current(prm, vg);
  }
  return art;
}

void write_metrics_csv(const std::string& variable,
                       const std::vector<PointMetrics>& rows,
                       const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + path);
  std::fprintf(f,
               "variable,value,converged,well_depth_eV,max_barrier_eV,overlap,"
               "avg_T_coeff,leak_frac,t90_eV,randomness,drain_depth_eV,"
               "localization\n");
  for (const auto& r : rows)
    std::fprintf(f, "%s,%.12g,%d,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%d,%.12g,%.12g\n",
                 variable.c_str(), r.value, r.converged ? 1 : 0,
                 r.well_depth_ev, r.max_barrier_ev, r.overlap, r.avg_t,
                 r.leak_frac, r.t90_ev, r.randomness, r.drain_depth_ev,
                 r.localization);
  std::fclose(f);
}

std::string fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot hash " + path);
  std::uint64_t h = 14695981039346656037ULL;
  char buf[4096];
  while (in.read(buf, sizeof buf) || in.gcount()) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= std::uint8_t(buf[i]);
      h *= 1099511628211ULL;
    }
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", (unsigned long long)h);
  return out;
}

RunManifest run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  namespace fs = std::filesystem;
  fs::create_directories(cfg.output_dir);

  const std::size_t np = cfg.values.size();
  std::vector<PointArtifacts> results(np);
  std::vector<std::string> errors(np);
  std::vector<double> wall(np, 0.0);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= np) return;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const DeviceSpec dev =
            apply_sweep_value(cfg.base, cfg.variable, cfg.values[i]);
        results[i] = analyze_point(dev, cfg.solver, cfg.outputs, cfg.values[i]);
      } catch (const std::exception& e) {
        errors[i] = e.what();
        results[i].metrics.value = cfg.values[i];
        results[i].metrics.converged = false;
        results[i].metrics.error = e.what();
      }
      wall[i] = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
    }
  };
  const int nw = decide_workers(cfg.workers, np);
  std::vector<std::thread> pool;
  for (int i = 0; i < nw; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  // single-threaded emission in point order keeps payload bytes reproducible
  RunManifest man;
  man.variable = sweep_variable_name(cfg.variable);
  man.wall_ms = wall;
  std::vector<std::string> files;
  char name[64];
  for (std::size_t i = 0; i < np; ++i) {
    const auto& art = results[i];
    man.points.push_back(art.metrics);
    if (!art.metrics.converged) continue;
    if (wants(cfg.outputs, "band_profile") && art.band) {
      std::snprintf(name, sizeof name, "band_%03zu.csv", i);
      write_csv(*art.band, fs::path(cfg.output_dir) / name);
      files.emplace_back(name);
    }
    if (wants(cfg.outputs, "spectrum") && art.spectrum) {
      std::snprintf(name, sizeof name, "spectrum_%03zu.csv", i);
      write_csv(*art.spectrum, fs::path(cfg.output_dir) / name);
      files.emplace_back(name);
    }
    if (wants(cfg.outputs, "history")) {
      std::snprintf(name, sizeof name, "history_%03zu.csv", i);
      ConvergedState tmp;
      tmp.history = art.history;
      write_history_csv(tmp, fs::path(cfg.output_dir) / name);
      files.emplace_back(name);
    }
    if (wants(cfg.outputs, "cb") && art.cb) {
      std::snprintf(name, sizeof name, "cb_%03zu.csv", i);
      write_csv(*art.cb, fs::path(cfg.output_dir) / name);
      files.emplace_back(name);
    }
  }
  if (wants(cfg.outputs, "coupling") || wants(cfg.outputs, "leakage")) {
    write_metrics_csv(man.variable, man.points,
                      fs::path(cfg.output_dir) / "metrics.csv");
    files.emplace_back("metrics.csv");
  }

  for (const auto& f : files)
    man.artifacts.push_back({f, fnv1a64_file(fs::path(cfg.output_dir) / f)});

  man.all_failed = true;
  for (const auto& p : man.points)
    if (p.converged) man.all_failed = false;

  // manifest last, so a crash can never leave it claiming files it lacks
  std::FILE* mf =
      std::fopen((fs::path(cfg.output_dir) / "manifest.txt").string().c_str(), "w");
  if (!mf) throw std::runtime_error("cannot write manifest");
  std::fprintf(mf, "[run]\n");
  std::fprintf(mf, "tool = \"%s\"\n", tool_version);
  std::fprintf(mf, "variable = \"%s\"\n", man.variable.c_str());
  std::fprintf(mf, "points = %zu\n\n", np);
  for (std::size_t i = 0; i < np; ++i) {
    std::fprintf(mf, "[point.%zu]\n", i);
    std::fprintf(mf, "value = %.12g\n", cfg.values[i]);
    std::fprintf(mf, "status = \"%s\"\n",
                 man.points[i].converged ? "converged" : "failed");
    if (!man.points[i].converged)
      std::fprintf(mf, "reason = \"%s\"\n", errors[i].c_str());
    std::fprintf(mf, "wall_ms = %.1f\n\n", wall[i]);
  }
  for (const auto& a : man.artifacts) {
    std::fprintf(mf, "[artifact.\"%s\"]\n", a.file.c_str());
    std::fprintf(mf, "fnv1a64 = \"%s\"\n\n", a.fnv1a64.c_str());
  }
  std::fclose(mf);
  return man;
}

void emit_summary_table(const std::vector<RunManifest>& manifests,
                        const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + path);
  std::fprintf(f,
               "variable,value,well_depth_eV,max_barrier_eV,overlap,"
               "avg_T_coeff,leak_frac,randomness\n");
  for (const auto& m : manifests)
    for (const auto& r : m.points)
      std::fprintf(f, "%s,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%d\n",
                   m.variable.c_str(), r.value, r.well_depth_ev,
                   r.max_barrier_ev, r.overlap, r.avg_t, r.leak_frac,
                   r.randomness);
  std::fclose(f);
}

} // namespace qd
