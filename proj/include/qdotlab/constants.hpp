#pragma once

#include <cmath>

// Unit conventions used throughout: lengths in nm, energies in eV,
// potentials in V, temperatures in K. Volume densities are nm^-3 and
// sheet densities nm^-2 internally; cm^-3 / cm^-2 at the user surface.

namespace qd {

inline constexpr double q_coulomb   = 1.602176634e-19;   // C
inline constexpr double eps0_si     = 8.8541878128e-12;  // F/m
inline constexpr double kb_ev       = 8.617333262e-5;    // eV/K
inline constexpr double hbar2_2m0   = 0.0380998212;      // eV nm^2

// q/eps0 in V nm: converts nm^-3 charge to the scaled Poisson source V/nm^2
inline constexpr double poisson_scale = q_coulomb / eps0_si * 1e9;

inline constexpr double eps_si  = 11.7;
inline constexpr double eps_ox  = 3.9;
inline constexpr double si_gap_ev = 1.12;
inline constexpr double sio2_band_offset_ev = 3.1;

// Si (100) inversion-layer defaults; both overridable per solve
inline constexpr double mass_transport_default = 0.19; // m0 units
inline constexpr double mass_dos_default       = 0.19; // m0 units
inline constexpr double valley_degeneracy_default = 2.0;

inline constexpr double per_cm3_to_per_nm3 = 1e-21;
inline constexpr double per_cm2_to_per_nm2 = 1e-14;

// Si conduction-band effective DOS, nm^-3
inline double si_nc(double temperature_k) {
  const double t = temperature_k / 300.0;
  return 2.8e19 * per_cm3_to_per_nm3 * t * std::sqrt(t);
}

} // namespace qd
