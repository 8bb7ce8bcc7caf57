#pragma once

#include "qdotlab/device.hpp"
#include "qdotlab/scloop.hpp"

namespace qd {

struct DotPair {
  Profile1D psi_left, psi_right;
  std::pair<double, double> window_left, window_right;  // plunger extents, nm
  double localization_left = 0.0;   // norm fraction inside own window
  double localization_right = 0.0;
  // overlap from window-restricted orbitals continued through the barrier as
  // exact decaying recurrence solutions; resolves couplings far below the
  // rotation-pair noise floor
  double tail_resolved_overlap = 0.0;
};

// Left/right dot orbitals from the lowest eigenpair. The pair is rotated to
// maximize left/right localization (diagonalizing the position operator in
// the two-state subspace), which reduces to (psi1 +/- psi2)/sqrt(2) for a
// symmetric double well and stays well defined for degenerate pairs.
DotPair extract_dot_states(const ConvergedState& state, const DeviceSpec& device);

// |integral psi_a psi_b dx|, trapezoid; inputs must share the grid
double overlap_integral(const Profile1D& psi_a, const Profile1D& psi_b);

// overlap of the orbital magnitudes |psi_L|,|psi_R|: a monotone surrogate
// for the exchange coupling, not an energy
double exchange_coupling_proxy(const DotPair& pair);

// norm fraction outside the gated span (spacers plus S/D wells)
double sd_leakage_fraction(const Profile1D& psi, const DeviceSpec& device);

// interface-band descriptors used by the sweep studies
struct WellMetrics {
  double left_min_ev = 0.0, right_min_ev = 0.0;
  double left_min_x = 0.0, right_min_x = 0.0;
  double interdot_barrier_ev = 0.0;  // max E_c between the two minima
  double well_depth_ev = 0.0;        // barrier minus the deeper minimum
  double barrier_vs_lead_ev = 0.0;   // interdot max minus source-lead E_c
  double drain_side_depth_ev = 0.0;  // confining max toward the drain
};

WellMetrics well_metrics(const Profile1D& band, const DeviceSpec& device);

} // namespace qd
