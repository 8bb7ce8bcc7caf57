#include "qdotlab/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qdotlab/errors.hpp"

namespace qd {

namespace {

double window_fraction(const Profile1D& psi, double xa, double xb) {
  std::vector<double> f(psi.x.size(), 0.0);
  for (std::size_t i = 0; i < psi.x.size(); ++i)
    if (psi.x[i] >= xa && psi.x[i] <= xb)
      f[i] = psi.values[i] * psi.values[i];
  return trapz(psi.x, f);
}

// single-dot orbital: lowest state of the band with the far side flattened
// at the wall level that actually lives in the requested plunger window, so
// its tail decays cleanly through the region the other dot occupies; the
// repaired tails keep it accurate to relative precision
bool isolated_orbital(const Profile1D& band, double mass, bool left_side,
                      std::size_t wall_index,
                      std::pair<double, double> window, Profile1D& orbital) {
  Profile1D mod = band;
  const double level = band.values[wall_index];
  if (left_side) {
    for (std::size_t i = wall_index + 1; i < mod.values.size(); ++i)
      mod.values[i] = level;
  } else {
    for (std::size_t i = 0; i < wall_index; ++i) mod.values[i] = level;
  }
  if (mod.x.size() < 50) return false;
  const EigenSolution states = solve_bound_states(mod, mass, 12);
  for (const auto& psi : states.wavefunctions) {
    if (window_fraction(psi, window.first, window.second) >= 0.5) {
      orbital = psi;
      return true;
    }
  }
  orbital = states.wavefunctions.front();
  return true;
}

double tail_resolved_overlap(const Profile1D& band, double mass, double wall_x,
                             std::pair<double, double> window_left,
                             std::pair<double, double> window_right) {
  const std::size_t n = band.x.size();
  std::size_t wall_index = 0;
  double best = 1e300;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::abs(band.x[i] - wall_x);
    if (d < best) {
      best = d;
      wall_index = i;
    }
  }
  Profile1D left, right;
  if (!isolated_orbital(band, mass, true, wall_index, window_left, left))
    return 0.0;
  if (!isolated_orbital(band, mass, false, wall_index, window_right, right))
    return 0.0;
  std::vector<double> prod(n);
  for (std::size_t i = 0; i < n; ++i)
    prod[i] = std::abs(left.values[i]) * std::abs(right.values[i]);
  return trapz(band.x, prod);
}

} // namespace

double overlap_integral(const Profile1D& a, const Profile1D& b) {
  if (a.x.size() != b.x.size()) throw GridMismatch("profiles differ in length");
  for (std::size_t i = 0; i < a.x.size(); ++i)
    if (std::abs(a.x[i] - b.x[i]) > 1e-9)
      throw GridMismatch("profiles on different grids");
  std::vector<double> prod(a.x.size());
  for (std::size_t i = 0; i < prod.size(); ++i)
    prod[i] = a.values[i] * b.values[i];
  return std::abs(trapz(a.x, prod));
}

DotPair extract_dot_states(const ConvergedState& state, const DeviceSpec& dev) {
  if (state.eigen.wavefunctions.size() < 2)
    throw TooFewStates("need at least two bound states for a dot pair");

  // lowest pair carried mostly by the gated span; a biased drain well or the
  // doped leads can otherwise slip below the dot states. Fall back to the raw
  // lowest pair when the dots have dissolved.
  std::vector<std::size_t> picked;
  const double gate_a = dev.x_first_gate(), gate_b = dev.x_last_gate();
  for (std::size_t s = 0;
       s < state.eigen.wavefunctions.size() && picked.size() < 2; ++s) {
    if (window_fraction(state.eigen.wavefunctions[s], gate_a, gate_b) >= 0.8)
      picked.push_back(s);
  }
  const bool dissolved = picked.size() < 2;
  if (dissolved) picked = {0, 1};

  const auto& p1 = state.eigen.wavefunctions[picked[0]];
  const auto& p2 = state.eigen.wavefunctions[picked[1]];
  const auto& x = p1.x;
  const std::size_t n = x.size();

  // 2x2 position operator in the {psi1, psi2} subspace
  std::vector<double> f(n);
  auto moment = [&](const std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t i = 0; i < n; ++i) f[i] = a[i] * x[i] * b[i];
    return trapz(x, f);
  };
  const double x11 = moment(p1.values, p1.values);
  const double x22 = moment(p2.values, p2.values);
  const double x12 = moment(p1.values, p2.values);

  // rotation diagonalizing [[x11, x12], [x12, x22]]
  double theta = 0.5 * std::atan2(2.0 * x12, x11 - x22);
  double c = std::cos(theta), s = std::sin(theta);
  // eigenvalue along (c, s): pick ordering so psi_left has the smaller <x>
  const double xa = c * c * x11 + 2 * c * s * x12 + s * s * x22;
  const double xb = s * s * x11 - 2 * c * s * x12 + c * c * x22;

  DotPair pair;
  pair.psi_left.x = pair.psi_right.x = x;
  pair.psi_left.quantity = pair.psi_right.quantity =
      Quantity::wavefunction_density;
  pair.psi_left.values.resize(n);
  pair.psi_right.values.resize(n);
  const bool a_is_left = xa <= xb;
  for (std::size_t i = 0; i < n; ++i) {
    const double va = c * p1.values[i] + s * p2.values[i];
    const double vb = -s * p1.values[i] + c * p2.values[i];
    pair.psi_left.values[i] = a_is_left ? va : vb;
    pair.psi_right.values[i] = a_is_left ? vb : va;
  }

  const auto windows = dev.plunger_windows();
  if (windows.size() != 2) throw TooFewStates("device lacks two plunger gates");
  pair.window_left = windows[0];
  pair.window_right = windows[1];
  pair.localization_left =
      window_fraction(pair.psi_left, windows[0].first, windows[0].second);
  pair.localization_right =
      window_fraction(pair.psi_right, windows[1].first, windows[1].second);
  const double wall_x = 0.5 * (windows[0].second + windows[1].first);
  if (!dissolved) {
    pair.tail_resolved_overlap =
        tail_resolved_overlap(state.interface_band, state.eigen.mass, wall_x,
                              windows[0], windows[1]);
  } else {
    // no gated pair exists: the coupling that remains is between the lead
    // basins the lowest states actually occupy
    pair.tail_resolved_overlap = tail_resolved_overlap(
        state.interface_band, state.eigen.mass, wall_x,
        {state.interface_band.x.front(), dev.x_first_gate()},
        {dev.x_last_gate(), state.interface_band.x.back()});
  }
  return pair;
}

double exchange_coupling_proxy(const DotPair& pair) {
  Profile1D la = pair.psi_left, rb = pair.psi_right;
  for (auto& v : la.values) v = std::abs(v);
  for (auto& v : rb.values) v = std::abs(v);
  const double rotated = overlap_integral(la, rb);
  // below this the rotated pair only measures its own subspace noise; the
  // restricted-orbital value carries the resolved coupling
  return rotated >= 1e-6 ? rotated : pair.tail_resolved_overlap;
}

double sd_leakage_fraction(const Profile1D& psi, const DeviceSpec& dev) {
  const double xa = dev.x_first_gate(), xb = dev.x_last_gate();
  std::vector<double> f(psi.x.size(), 0.0);
  for (std::size_t i = 0; i < psi.x.size(); ++i)
    if (psi.x[i] < xa || psi.x[i] > xb)
      f[i] = psi.values[i] * psi.values[i];
  const double outside = trapz(psi.x, f);
  return std::clamp(outside, 0.0, 1.0);
}

WellMetrics well_metrics(const Profile1D& band, const DeviceSpec& dev) {
  WellMetrics m;
  const auto windows = dev.plunger_windows();
  auto min_in = [&](double xa, double xb, double& mn, double& at) {
    mn = 1e300;
    for (std::size_t i = 0; i < band.x.size(); ++i) {
      if (band.x[i] < xa || band.x[i] > xb) continue;
      if (band.values[i] < mn) {
        mn = band.values[i];
        at = band.x[i];
      }
    }
  };
  min_in(windows[0].first, windows[0].second, m.left_min_ev, m.left_min_x);
  min_in(windows[1].first, windows[1].second, m.right_min_ev, m.right_min_x);

  double barrier = -1e300;
  for (std::size_t i = 0; i < band.x.size(); ++i)
    if (band.x[i] > m.left_min_x && band.x[i] < m.right_min_x)
      barrier = std::max(barrier, band.values[i]);
  m.interdot_barrier_ev = barrier;
  m.well_depth_ev = barrier - std::min(m.left_min_ev, m.right_min_ev);
  m.barrier_vs_lead_ev = barrier - band.values.front();

  double drain_max = -1e300;
  for (std::size_t i = 0; i < band.x.size(); ++i)
    if (band.x[i] > m.right_min_x && band.x[i] <= dev.x_drain_start())
      drain_max = std::max(drain_max, band.values[i]);
  m.drain_side_depth_ev = drain_max - m.right_min_ev;
  return m;
}

} // namespace qd
