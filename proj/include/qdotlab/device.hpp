#pragma once

#include <string>
#include <vector>

#include "qdotlab/constants.hpp"
#include "qdotlab/errors.hpp"

namespace qd {

enum class TrapChargeState { neutral, acceptor_occupied };

// Gaussian interface-trap sheet distribution, centered at x0.
struct TrapProfile {
  double n_peak_cm2 = 0.0;   // peak sheet density, cm^-2
  double x0_nm = -1.0;       // center; <0 means mid-channel, resolved by DeviceSpec
  double sigma_nm = 10.0;
  TrapChargeState charge_state = TrapChargeState::acceptor_occupied;
};

enum class GateKind { plunger, barrier };

// Two-dot MOSFET cross-section: geometry, biases, doping, traps.
// The lateral layout is source | spacer | gates-with-gaps | spacer | drain;
// the total channel length is derived from the pieces.
struct DeviceSpec {
  double l_pg = 40.0;
  double l_bg = 40.0;
  double l_gap = 10.0;
  double l_sp = 50.0;
  double t_ox = 3.0;
  double t_si = 15.0;
  double v_pg = 1.0;
  double v_bg = 0.5;
  double v_d = 0.0;
  double v_s = 0.0;
  double temperature_k = 10.0;
  double workfunction_offset_ev = 0.0;  // deviation from the mid-gap metal
  // heavily degenerate wells; the S/D degeneracy level then sits between the
  // default dot levels and the levels of sub-10 nm plungers, which is what
  // lets small dots wash out into the leads
  double n_sd_cm3 = 3.2e20;
  TrapProfile trap;

  // artifact plumbing, not part of the lateral tiling above
  double l_sd = 20.0;     // doped S/D well length at each end
  double t_gate = 10.0;   // gate metal thickness
  double t_cap = 10.0;    // oxide above the gate plane
  std::vector<GateKind> gate_sequence = {GateKind::plunger, GateKind::barrier,
                                         GateKind::plunger};

  double gate_voltage(GateKind k) const {
    return k == GateKind::plunger ? v_pg : v_bg;
  }
  // Dirichlet value seen by the Poisson problem (mid-gap metal convention)
  double gate_potential(GateKind k) const {
    return gate_voltage(k) - si_gap_ev / 2.0 + workfunction_offset_ev;
  }

  double channel_length() const;     // spacer-to-spacer including gates and gaps
  double total_length() const;       // including both S/D wells
  double gated_span() const;         // first gate edge to last gate edge
  double x_source_end() const { return l_sd; }
  double x_drain_start() const { return total_length() - l_sd; }
  double x_first_gate() const { return l_sd + l_sp; }
  double x_last_gate() const { return x_first_gate() + gated_span(); }
  double trap_center() const;

  // x extents of the plunger gates, in order
  std::vector<std::pair<double, double>> plunger_windows() const;

  void validate() const;  // throws InvalidGeometry with the failed constraint
};

enum class Material {
  silicon,
  gate_oxide,
  spacer_oxide,
  gap_oxide,
  gate_metal_pg,
  gate_metal_bg,
  source_contact,
  drain_contact,
};

inline bool is_metal(Material m) {
  return m == Material::gate_metal_pg || m == Material::gate_metal_bg;
}
inline bool is_silicon(Material m) {
  return m == Material::silicon || m == Material::source_contact ||
         m == Material::drain_contact;
}
// metal cells never enter a free-node flux; tagging them eps_ox keeps the
// cell table two-valued
inline double permittivity_of(Material m) {
  return is_silicon(m) ? eps_si : eps_ox;
}

enum class BoundaryKind { none, dirichlet, neumann_zero };

struct Region {
  Material material;
  double x0, x1, y0, y1;
  BoundaryKind bc = BoundaryKind::none;
  double bc_volts = 0.0;      // gate potential or contact bias
  double donor_cm3 = 0.0;
};

// Rasterizable rectangle decomposition of the cross-section.
struct RegionMap {
  std::vector<Region> regions;
  double width_nm = 0.0;   // x extent
  double height_nm = 0.0;  // y extent
  double interface_y = 0.0;
};

RegionMap build_device(const DeviceSpec& spec);

// Gaussian sheet density at x, cm^-2
double trap_sheet_density(double x_nm, const TrapProfile& trap, double x0_resolved);
double trap_sheet_density(double x_nm, const DeviceSpec& spec);

// Signed line charge per unit width from the occupied traps over [xa, xb],
// in units of q * nm^-1 (i.e. the integral of the sheet density, negated).
double total_trap_charge(const TrapProfile& trap, double x0_resolved, double xa,
                         double xb);
double total_trap_charge(const DeviceSpec& spec);

} // namespace qd
