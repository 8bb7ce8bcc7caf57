#pragma once

#include <vector>

#include "qdotlab/constants.hpp"
#include "qdotlab/grid.hpp"

namespace qd {

struct PotentialSegment {
  double width_nm;
  double u_ev;
};

// T(E)/R(E) over an energy ladder. Energies below a lead level are kept in
// the arrays but flagged non-propagating (NaN coefficients).
struct ScatteringSpectrum {
  std::vector<double> energies;      // eV, ascending
  std::vector<double> transmission;  // in [0,1] where propagating
  std::vector<double> reflection;
  std::vector<double> k_in, k_out;   // nm^-1
  std::vector<bool> propagating;
};

ScatteringSpectrum transmission_spectrum(const std::vector<PotentialSegment>& segments,
                                         double mass,
                                         const std::vector<double>& energies_ev);

// piecewise-constant segments from node samples (cell midpoint values; lead
// segments pinned to the end samples)
std::vector<PotentialSegment> segments_from_profile(const Profile1D& potential);

ScatteringSpectrum transmission_spectrum(const Profile1D& potential, double mass,
                                         const std::vector<double>& energies_ev);

std::vector<double> default_energy_grid(const std::vector<PotentialSegment>& segs,
                                        int n_points = 400,
                                        double span_ev = 0.6);

// lowest energy where T first reaches `level`, linear interpolation
double energy_at_T_level(const ScatteringSpectrum& spectrum, double level = 0.9);

// trapezoid mean of T(E) over [window_lo, window_hi]
double average_tunnel_coupling(const ScatteringSpectrum& spectrum,
                               double window_lo_ev, double window_hi_ev);

struct RandomnessMetric {
  int oscillation_count = 0;
  double saturation_energy_ev = 0.0;
  bool well_resolved = true;  // false if extrema closer than 5 samples
};

RandomnessMetric randomness_metric(const ScatteringSpectrum& spectrum,
                                   double saturation_band = 0.02);

// resonance peaks of T(E) at energies below `e_max`
int count_transmission_modes(const ScatteringSpectrum& spectrum, double e_max,
                             double min_prominence = 1e-3);

void write_csv(const ScatteringSpectrum& spectrum, const std::string& path);

} // namespace qd
