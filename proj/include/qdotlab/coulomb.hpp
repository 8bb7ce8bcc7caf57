#pragma once

#include <vector>

#include "qdotlab/device.hpp"

namespace qd {

// Single-island sequential-tunneling parameters.
struct SetParameters {
  double c_g;         // F
  double c_s, c_d;    // F
  double r_s, r_d;    // Ohm
  double temperature_k;
  double v_ds;        // V

  double c_sigma() const { return c_g + c_s + c_d; }
  double charging_energy_ev() const {
    return q_coulomb / (2.0 * c_sigma());  // q^2/2C in eV
  }
  void validate() const;
};

// plunger-stack parallel-plate capacitance per unit width, F/m
double gate_capacitance_from_device(const DeviceSpec& device);

struct CoulombTrace {
  std::vector<double> v_g;
  std::vector<double> current_a;
  bool linear_response_ok = true;  // false when V_ds is not << E_c/q
};

CoulombTrace cb_current(const SetParameters& params,
                        const std::vector<double>& v_g_grid);

void write_csv(const CoulombTrace& trace, const std::string& path);

} // namespace qd
