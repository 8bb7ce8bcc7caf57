#pragma once

#include <optional>
#include <vector>

#include "qdotlab/device.hpp"
#include "qdotlab/poisson.hpp"
#include "qdotlab/schrodinger.hpp"

namespace qd {

struct SolverOptions {
  double mixing_alpha = 0.2;
  double tol_sc = 1e-6;       // V, potential-update inf-norm
  int max_iterations = 200;   // per temperature stage
  double tol_poisson = 1e-10;
  int n_states = 12;
  double mass_transport = mass_transport_default;
  double mass_dos = mass_dos_default;
  double g_v = valley_degeneracy_default;
  // assembled interface line density -> sheet density entering Poisson;
  // calibrated so the default device settles near the nominal well depth
  double interface_charge_scale = 0.2;
  bool split_fermi = false;   // drain-side quasi-level shifted by -V_d
  GridSpacing spacing;
};

struct ContinuationSchedule {
  std::vector<double> temperatures_k;  // strictly descending, ends at target
  int max_iterations_per_stage = 200;
  double mixing_alpha = 0.2;
  void validate() const;  // throws ConfigError
};

ContinuationSchedule default_schedule(double target_k);

struct IterationRecord {
  int iteration;
  double psi_norm_metric;  // change of |psi_1|^2 between sweeps, L1
  double dphi_inf;         // applied potential update, V
};

struct ConvergedState {
  Grid2D grid;
  Field2D phi;
  Profile1D interface_band;  // E_c along the slice, eV
  EigenSolution eigen;
  ChargeAssembly charge;
  std::vector<IterationRecord> history;
  double temperature_k = 0.0;
  int iterations = 0;
};

// normalized Gaussian seed, mid-channel, width = channel/6
Profile1D initial_wavefunction(const Grid2D& grid);

ConvergedState sc_iterate_at_T(const DeviceSpec& device,
                               const ConvergedState* warm_start,
                               double temperature_k,
                               const SolverOptions& opt = {});

ConvergedState continuation_solve(const DeviceSpec& device,
                                  const ContinuationSchedule& schedule,
                                  const SolverOptions& opt = {});
ConvergedState continuation_solve(const DeviceSpec& device, double target_k,
                                  const SolverOptions& opt = {});

// degenerate-contact alignment: eta solving N_sd = Nc(T) F_1/2(eta)
double contact_eta(double n_sd_cm3, double temperature_k);

// unified Fermi-Dirac F_1/2 approximation (normalized so F -> e^eta for
// eta << 0) and its derivative
double fermi_half(double eta);
double fermi_half_derivative(double eta);

void write_history_csv(const ConvergedState& state, const std::string& path);

} // namespace qd
