#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qdotlab/config.hpp"
#include "qdotlab/coupling.hpp"
#include "qdotlab/scattering.hpp"

namespace qd {

inline constexpr const char* tool_version = "qdotlab 0.1.0";

struct PointMetrics {
  double value = 0.0;
  bool converged = false;
  std::string error;
  double well_depth_ev = 0.0;
  double max_barrier_ev = 0.0;
  double overlap = 0.0;
  double avg_t = 0.0;
  double leak_frac = 0.0;
  double t90_ev = 0.0;  // NaN if the level is never reached
  int randomness = 0;
  double drain_depth_ev = 0.0;
  double localization = 0.0;
};

struct PointArtifacts {
  PointMetrics metrics;
  std::optional<Profile1D> band;
  std::optional<ScatteringSpectrum> spectrum;
  std::vector<IterationRecord> history;
  std::optional<CoulombTrace> cb;
};

struct ManifestEntry {
  std::string file;
  std::string fnv1a64;
};

struct RunManifest {
  std::string variable;
  std::vector<PointMetrics> points;
  std::vector<ManifestEntry> artifacts;
  std::vector<double> wall_ms;
  std::string config_echo;
  bool all_failed = false;
};

// full study pipeline for one device point; spectrum window and energy grid
// are derived from the converged interface band
PointArtifacts analyze_point(const DeviceSpec& device, const SolverOptions& opt,
                             const std::vector<std::string>& outputs,
                             double sweep_value);

RunManifest run_sweep(const SweepConfig& config);

void write_metrics_csv(const std::string& variable,
                       const std::vector<PointMetrics>& rows,
                       const std::string& path);

// one summary row per point across several runs
void emit_summary_table(const std::vector<RunManifest>& manifests,
                        const std::string& path);

std::string fnv1a64_file(const std::string& path);

} // namespace qd
