#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qdotlab/config.hpp"
#include "qdotlab/coulomb.hpp"
#include "qdotlab/coupling.hpp"
#include "qdotlab/scattering.hpp"
#include "qdotlab/schrodinger.hpp"
#include "qdotlab/scloop.hpp"
#include "qdotlab/sweep.hpp"

namespace py = pybind11;
using namespace qd;

namespace {

Profile1D profile_from(const std::vector<double>& x,
                       const std::vector<double>& v) {
  Profile1D p;
  p.x = x;
  p.values = v;
  return p;
}

} // namespace

PYBIND11_MODULE(_qdotlab, m) {
  m.doc() = "two-dot MOSFET electrostatics, bound states and transmission";

  py::class_<TrapProfile>(m, "TrapProfile")
      .def(py::init<>())
      .def_readwrite("n_peak_cm2", &TrapProfile::n_peak_cm2)
      .def_readwrite("x0_nm", &TrapProfile::x0_nm)
      .def_readwrite("sigma_nm", &TrapProfile::sigma_nm);

  py::class_<DeviceSpec>(m, "DeviceSpec")
      .def(py::init<>())
      .def_readwrite("l_pg", &DeviceSpec::l_pg)
      .def_readwrite("l_bg", &DeviceSpec::l_bg)
      .def_readwrite("l_gap", &DeviceSpec::l_gap)
      .def_readwrite("l_sp", &DeviceSpec::l_sp)
      .def_readwrite("l_sd", &DeviceSpec::l_sd)
      .def_readwrite("t_ox", &DeviceSpec::t_ox)
      .def_readwrite("t_si", &DeviceSpec::t_si)
      .def_readwrite("v_pg", &DeviceSpec::v_pg)
      .def_readwrite("v_bg", &DeviceSpec::v_bg)
      .def_readwrite("v_d", &DeviceSpec::v_d)
      .def_readwrite("v_s", &DeviceSpec::v_s)
      .def_readwrite("temperature_k", &DeviceSpec::temperature_k)
      .def_readwrite("n_sd_cm3", &DeviceSpec::n_sd_cm3)
      .def_readwrite("trap", &DeviceSpec::trap)
      .def("validate", &DeviceSpec::validate)
      .def("total_length", &DeviceSpec::total_length)
      .def("channel_length", &DeviceSpec::channel_length);

  py::class_<SolverOptions>(m, "SolverOptions")
      .def(py::init<>())
      .def_readwrite("mixing_alpha", &SolverOptions::mixing_alpha)
      .def_readwrite("tol_sc", &SolverOptions::tol_sc)
      .def_readwrite("max_iterations", &SolverOptions::max_iterations)
      .def_readwrite("n_states", &SolverOptions::n_states)
      .def_readwrite("interface_charge_scale",
                     &SolverOptions::interface_charge_scale);

  py::class_<ConvergedState>(m, "ConvergedState")
      .def_property_readonly(
          "band_x", [](const ConvergedState& s) { return s.interface_band.x; })
      .def_property_readonly(
          "band_ev",
          [](const ConvergedState& s) { return s.interface_band.values; })
      .def_property_readonly(
          "energies", [](const ConvergedState& s) { return s.eigen.energies; })
      .def_readonly("temperature_k", &ConvergedState::temperature_k)
      .def_readonly("iterations", &ConvergedState::iterations)
      .def_property_readonly("history", [](const ConvergedState& s) {
        std::vector<std::tuple<int, double, double>> h;
        for (const auto& r : s.history)
          h.emplace_back(r.iteration, r.psi_norm_metric, r.dphi_inf);
        return h;
      });

  m.def(
      "continuation_solve",
      [](const DeviceSpec& dev, double target_k, const SolverOptions& opt) {
        return continuation_solve(dev, target_k, opt);
      },
      py::arg("device"), py::arg("target_k"),
      py::arg("options") = SolverOptions{},
      py::call_guard<py::gil_scoped_release>());

  m.def(
      "solve_bound_states",
      [](const std::vector<double>& x, const std::vector<double>& u_ev,
         double mass, int n_states) {
        const EigenSolution sol =
            solve_bound_states(profile_from(x, u_ev), mass, n_states);
        std::vector<std::vector<double>> psi;
        for (const auto& w : sol.wavefunctions) psi.push_back(w.values);
        return py::make_tuple(sol.energies, psi);
      },
      py::arg("x_nm"), py::arg("u_ev"), py::arg("mass") = 0.19,
      py::arg("n_states") = 12);

  m.def("subband_occupancy", &subband_occupancy, py::arg("fermi_ev"),
        py::arg("energy_ev"), py::arg("temperature_k"),
        py::arg("mass_dos") = mass_dos_default);

  m.def(
      "transmission",
      [](const std::vector<double>& x, const std::vector<double>& u_ev,
         double mass, const std::vector<double>& energies) {
        const auto s =
            transmission_spectrum(profile_from(x, u_ev), mass, energies);
        return py::make_tuple(s.energies, s.transmission, s.reflection);
      },
      py::arg("x_nm"), py::arg("u_ev"), py::arg("mass") = 0.19,
      py::arg("energies_ev") = std::vector<double>{});

  m.def(
      "overlap",
      [](const std::vector<double>& x, const std::vector<double>& a,
         const std::vector<double>& b) {
        return overlap_integral(profile_from(x, a), profile_from(x, b));
      },
      py::arg("x_nm"), py::arg("psi_a"), py::arg("psi_b"));

  m.def(
      "dot_pair_metrics",
      [](const ConvergedState& state, const DeviceSpec& dev) {
        const DotPair pair = extract_dot_states(state, dev);
        py::dict d;
        d["overlap"] = exchange_coupling_proxy(pair);
        d["leak_frac"] = 0.5 * (sd_leakage_fraction(pair.psi_left, dev) +
                                sd_leakage_fraction(pair.psi_right, dev));
        d["localization_left"] = pair.localization_left;
        d["localization_right"] = pair.localization_right;
        const WellMetrics wm = well_metrics(state.interface_band, dev);
        d["well_depth_ev"] = wm.well_depth_ev;
        d["barrier_vs_lead_ev"] = wm.barrier_vs_lead_ev;
        return d;
      },
      py::arg("state"), py::arg("device"));

  m.def("gate_capacitance_per_width", &gate_capacitance_from_device,
        py::arg("device"));

  m.def(
      "cb_current",
      [](double c_g, double c_s, double c_d, double r_s, double r_d,
         double temperature_k, double v_ds, const std::vector<double>& vg) {
        SetParameters p{c_g, c_s, c_d, r_s, r_d, temperature_k, v_ds};
        return cb_current(p, vg).current_a;
      },
      py::arg("c_g"), py::arg("c_s"), py::arg("c_d"), py::arg("r_s"),
      py::arg("r_d"), py::arg("temperature_k"), py::arg("v_ds"),
      py::arg("v_g"));

  m.def("trap_sheet_density",
        [](double x, const DeviceSpec& dev) { return trap_sheet_density(x, dev); });

  m.attr("__version__") = "0.1.0";
}
