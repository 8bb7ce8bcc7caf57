#pragma once

#include <vector>

#include "qdotlab/constants.hpp"
#include "qdotlab/grid.hpp"

namespace qd {

// Bound states of the 1-D effective-mass problem on the interface slice,
// hard-wall ends. Wavefunctions are L2-normalized over the slice.
struct EigenSolution {
  std::vector<double> energies;           // eV, strictly ascending
  std::vector<Profile1D> wavefunctions;   // one per energy
  double mass = mass_transport_default;   // m0 units
  double x_min = 0.0, x_max = 0.0;
};

EigenSolution solve_bound_states(const Profile1D& potential_ev, double mass,
                                 int n_states);

// every state below the energy cutoff (clamped to [n_min, n_max]); used by
// the self-consistent driver so the occupied set never truncates a
// left/right pair
EigenSolution solve_bound_states_below(const Profile1D& potential_ev,
                                       double mass, double e_cut_ev, int n_min,
                                       int n_max);

// Per-state sheet occupancy (nm^-2): (m kT / pi hbar^2) ln(1 + exp((EF-E)/kT)),
// evaluated in overflow-safe form.
double subband_occupancy(double fermi_ev, double energy_ev, double temperature_k,
                         double mass_dos = mass_dos_default);

struct ChargeAssembly {
  std::vector<double> x;        // nm, matches the eigen slice
  std::vector<double> density;  // g_v * sum_i N_i |psi_i|^2 per node
  std::vector<double> occupancy;  // N_i per state, nm^-2
  double fermi_ev = 0.0;
  double temperature_k = 300.0;
};

ChargeAssembly assemble_charge(const EigenSolution& eigen, double fermi_ev,
                               double temperature_k,
                               double mass_dos = mass_dos_default,
                               double g_v = valley_degeneracy_default);

double trapz(const std::vector<double>& x, const std::vector<double>& f);

// one row per state: index, energy, then the psi samples
void write_csv(const EigenSolution& solution, const std::string& path);

} // namespace qd
