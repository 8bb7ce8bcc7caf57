#include "qdotlab/device.hpp"

#include <cmath>
#include <sstream>

namespace qd {

double DeviceSpec::gated_span() const {
  double span = 0.0;
  for (std::size_t i = 0; i < gate_sequence.size(); ++i) {
    span += gate_sequence[i] == GateKind::plunger ? l_pg : l_bg;
    if (i + 1 < gate_sequence.size()) span += l_gap;
  }
  return span;
}

double DeviceSpec::channel_length() const { return 2.0 * l_sp + gated_span(); }

double DeviceSpec::total_length() const { return channel_length() + 2.0 * l_sd; }

double DeviceSpec::trap_center() const {
  return trap.x0_nm >= 0.0 ? trap.x0_nm : total_length() / 2.0;
}

std::vector<std::pair<double, double>> DeviceSpec::plunger_windows() const {
  std::vector<std::pair<double, double>> out;
  double x = x_first_gate();
  for (std::size_t i = 0; i < gate_sequence.size(); ++i) {
    const double len = gate_sequence[i] == GateKind::plunger ? l_pg : l_bg;
    if (gate_sequence[i] == GateKind::plunger) out.emplace_back(x, x + len);
    x += len;
    if (i + 1 < gate_sequence.size()) x += l_gap;
  }
  return out;
}

void DeviceSpec::validate() const {
  auto fail = [](const std::string& what) { throw InvalidGeometry(what); };
  auto positive = [&](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      std::ostringstream os;
      os << name << " must be strictly positive, got " << v;
      fail(os.str());
    }
  };
  positive(l_pg, "l_pg");
  positive(l_bg, "l_bg");
  positive(l_gap, "l_gap");
  positive(l_sp, "l_sp");
  positive(l_sd, "l_sd");
  positive(t_ox, "t_ox");
  positive(t_si, "t_si");
  positive(t_gate, "t_gate");
  positive(t_cap, "t_cap");
  if (t_si < 2.0) fail("t_si below 2 nm: continuum model invalid");
  if (t_ox < 0.5) fail("t_ox below 0.5 nm: continuum model invalid");
  if (!(temperature_k > 0.0)) fail("temperature must be > 0 K");
  if (trap.n_peak_cm2 < 0.0) fail("trap.n_peak must be >= 0");
  if (!(trap.sigma_nm > 0.0)) fail("trap.sigma must be > 0");
  if (n_sd_cm3 < 0.0) fail("n_sd must be >= 0");
  if (gate_sequence.empty()) fail("gate sequence is empty");
  int n_pg = 0;
  for (auto k : gate_sequence)
    if (k == GateKind::plunger) ++n_pg;
  if (n_pg != 2) fail("gate sequence must contain exactly two plunger gates");
}

RegionMap build_device(const DeviceSpec& spec) {
  spec.validate();
  RegionMap map;
  const double L = spec.total_length();
  const double y_if = spec.t_si;
  const double y_ox = y_if + spec.t_ox;
  const double y_gate_top = y_ox + spec.t_gate;
  const double y_top = y_gate_top + spec.t_cap;
  map.width_nm = L;
  map.height_nm = y_top;
  map.interface_y = y_if;

  auto add = [&](Material m, double x0, double x1, double y0, double y1,
                 BoundaryKind bc = BoundaryKind::none, double volts = 0.0,
                 double donors = 0.0) {
    map.regions.push_back({m, x0, x1, y0, y1, bc, volts, donors});
  };

  // silicon film: doped S/D wells flank the intrinsic channel
  add(Material::source_contact, 0.0, spec.l_sd, 0.0, y_if, BoundaryKind::dirichlet,
      spec.v_s, spec.n_sd_cm3);
  add(Material::silicon, spec.l_sd, L - spec.l_sd, 0.0, y_if);
  add(Material::drain_contact, L - spec.l_sd, L, 0.0, y_if, BoundaryKind::dirichlet,
      spec.v_d, spec.n_sd_cm3);

  // thin gate oxide over the gated span, spacer oxide columns elsewhere
  const double xg0 = spec.x_first_gate();
  const double xg1 = spec.x_last_gate();
  add(Material::spacer_oxide, 0.0, xg0, y_if, y_top);
  add(Material::spacer_oxide, xg1, L, y_if, y_top);
  add(Material::gate_oxide, xg0, xg1, y_if, y_ox);

  // gate metals and the oxide gaps between them
  double x = xg0;
  for (std::size_t i = 0; i < spec.gate_sequence.size(); ++i) {
    const GateKind k = spec.gate_sequence[i];
    const double len = k == GateKind::plunger ? spec.l_pg : spec.l_bg;
    add(k == GateKind::plunger ? Material::gate_metal_pg : Material::gate_metal_bg,
        x, x + len, y_ox, y_gate_top, BoundaryKind::dirichlet,
        spec.gate_potential(k));
    x += len;
    if (i + 1 < spec.gate_sequence.size()) {
      add(Material::gap_oxide, x, x + spec.l_gap, y_ox, y_gate_top);
      x += spec.l_gap;
    }
  }
  // oxide cap above the gate plane
  add(Material::gap_oxide, xg0, xg1, y_gate_top, y_top);
  return map;
}

double trap_sheet_density(double x_nm, const TrapProfile& trap, double x0) {
  if (trap.n_peak_cm2 <= 0.0) return 0.0;
  const double u = (x_nm - x0) / trap.sigma_nm;
  return trap.n_peak_cm2 * std::exp(-0.5 * u * u);
}

double trap_sheet_density(double x_nm, const DeviceSpec& spec) {
  return trap_sheet_density(x_nm, spec.trap, spec.trap_center());
}

double total_trap_charge(const TrapProfile& trap, double x0, double xa, double xb) {
  if (trap.charge_state == TrapChargeState::neutral || trap.n_peak_cm2 <= 0.0)
    return 0.0;
  // closed-form Gaussian integral over [xa, xb], sheet in nm^-2
  const double s = trap.sigma_nm * std::sqrt(2.0);
  const double area_nm1 = trap.n_peak_cm2 * per_cm2_to_per_nm2 * trap.sigma_nm *
                          std::sqrt(2.0 * M_PI) * 0.5 *
                          (std::erf((xb - x0) / s) - std::erf((xa - x0) / s));
  return -area_nm1;  // electrons: one -q per occupied trap
}

double total_trap_charge(const DeviceSpec& spec) {
  return total_trap_charge(spec.trap, spec.trap_center(), spec.x_source_end(),
                           spec.x_drain_start());
}

} // namespace qd
