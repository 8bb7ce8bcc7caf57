#include "qdotlab/scloop.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "qdotlab/errors.hpp"

namespace qd {

double fermi_half(double eta) {
  // Bednarczyk-Bednarczyk unified approximation, <0.5% relative
  const double e2 = (eta + 1.0) * (eta + 1.0);
  const double v = eta * eta * eta * eta +
                   33.6 * eta * (1.0 - 0.68 * std::exp(-0.17 * e2)) + 50.0;
  const double inv_exp = eta < 700.0 ? std::exp(-eta) : 0.0;
  return 1.0 / (inv_exp + 0.75 * std::sqrt(M_PI) * std::pow(v, -0.375));
}

double fermi_half_derivative(double eta) {
  const double h = 1e-5 * (1.0 + std::abs(eta));
  return (fermi_half(eta + h) - fermi_half(eta - h)) / (2.0 * h);
}

double contact_eta(double n_sd_cm3, double temperature_k) {
  const double n = n_sd_cm3 * per_cm3_to_per_nm3;
  if (n <= 0.0) return 0.0;
  const double target = n / si_nc(temperature_k);
  double lo = -600.0, hi = 1e7;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (fermi_half(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void ContinuationSchedule::validate() const {
  if (temperatures_k.empty()) throw ConfigError("empty temperature ladder");
  for (std::size_t i = 0; i + 1 < temperatures_k.size(); ++i)
    if (!(temperatures_k[i] > temperatures_k[i + 1]))
      throw ConfigError("temperature ladder must be strictly descending");
  for (double t : temperatures_k)
    if (!(t > 0.0)) throw ConfigError("temperatures must be positive");
  if (!(mixing_alpha > 0.0 && mixing_alpha <= 1.0))
    throw ConfigError("mixing factor must be in (0, 1]");
}

ContinuationSchedule default_schedule(double target_k) {
  ContinuationSchedule s;
  for (double t : {300.0, 200.0, 100.0, 50.0, 20.0})
    if (t > target_k) s.temperatures_k.push_back(t);
  s.temperatures_k.push_back(target_k);
  return s;
}

Profile1D initial_wavefunction(const Grid2D& grid) {
  Profile1D p;
  p.quantity = Quantity::wavefunction_density;
  p.x = grid.x_nodes;
  const double x0 = grid.x_nodes.front(), x1 = grid.x_nodes.back();
  const double center = 0.5 * (x0 + x1);
  const double width = (x1 - x0) / 6.0;
  p.values.resize(p.x.size());
  // Gaussian exp(-(x-c)^2 / (2 w^2)) with unit L2 norm on the truncated
  // domain; the erf factor keeps this a pure function of position
  const double clipped = 0.5 * (std::erf((x1 - center) / width) +
                                std::erf((center - x0) / width));
  const double amp = std::pow(M_PI * width * width, -0.25) / std::sqrt(clipped);
  for (std::size_t i = 0; i < p.x.size(); ++i) {
    const double u = (p.x[i] - center) / width;
    p.values[i] = amp * std::exp(-0.5 * u * u);
  }
  return p;
}

namespace {

// classical S/D electrons plus the quantum interface sheet, both with
// analytic derivatives for the Poisson Newton loop
class DeviceCharge : public ResponseCharge {
 public:
  DeviceCharge(const Grid2D& grid, const DeviceSpec& dev,
               const SolverOptions& opt, double temperature_k)
      : grid_(grid), opt_(opt), kt_(kb_ev * temperature_k) {
    const int nx = grid.nx(), ny = grid.ny();
    nc_ = si_nc(temperature_k);
    a_doped_.assign(std::size_t(nx) * ny, 0.0);
    mu_.assign(std::size_t(nx) * ny, 0.0);
    dx_if_.assign(nx, 0.0);

    const auto& xs = grid.x_nodes;
    const auto& ys = grid.y_nodes;
    // classical electrons live in the doped wells only
    for (int j = 0; j < ny && dev.n_sd_cm3 > 0.0; ++j) {
      for (int i = 0; i < nx; ++i) {
        double area = 0.0;
        bool drain_side = false;
        for (int dj = -1; dj <= 0; ++dj) {
          for (int di = -1; di <= 0; ++di) {
            const int ci = i + di, cj = j + dj;
            if (ci < 0 || cj < 0 || ci + 1 >= nx || cj + 1 >= ny) continue;
            const Material m = grid.cell_material(ci, cj);
            if (m != Material::source_contact && m != Material::drain_contact)
              continue;
            area += 0.25 * (xs[ci + 1] - xs[ci]) * (ys[cj + 1] - ys[cj]);
            if (m == Material::drain_contact) drain_side = true;
          }
        }
        a_doped_[std::size_t(j) * nx + i] = area;
        mu_[std::size_t(j) * nx + i] = drain_side ? -dev.v_d : -dev.v_s;
      }
    }
    const double xa = dev.x_source_end(), xb = dev.x_drain_start();
    for (int i = 0; i < nx; ++i) {
      if (xs[i] <= xa + 1e-9 || xs[i] >= xb - 1e-9) continue;
      const double hx = 0.5 * (xs[std::min(i + 1, nx - 1)] - xs[std::max(i - 1, 0)]);
      dx_if_[i] = hx;
    }
    if_row_ = grid.interface_row;
    mid_x_ = 0.5 * (xs.front() + xs.back());
  }

  void set_quantum(const EigenSolution* eigen, const std::vector<double>* phi_ref,
                   double v_d) {
    eigen_ = eigen;
    phi_ref_ = phi_ref;
    v_d_ = v_d;
  }

  void eval(int node, double phi, double& q, double& dq) const override {
    q = 0.0;
    dq = 0.0;
    const double a = a_doped_[node];
    if (a > 0.0) {
      const double eta = (mu_[node] + phi) / kt_;
      q += a * nc_ * fermi_half(eta);
      dq += a * nc_ * fermi_half_derivative(eta) / kt_;
    }
    if (eigen_ && if_row_ >= 0) {
      const int nx = grid_.nx();
      const int iy = node / nx, ix = node % nx;
      if (iy == if_row_ && dx_if_[ix] > 0.0) {
        const double shift = phi - (*phi_ref_)[ix];
        const double mu_q = (opt_.split_fermi && grid_.x_nodes[ix] > mid_x_)
                                ? -v_d_
                                : 0.0;
        const double pref = opt_.mass_dos / (M_PI * 2.0 * hbar2_2m0);
        double n_sheet = 0.0, dn_sheet = 0.0;
        for (std::size_t s = 0; s < eigen_->energies.size(); ++s) {
          const double psi = eigen_->wavefunctions[s].values[ix];
          const double p2 = psi * psi;
          if (p2 == 0.0) continue;
          const double u = (mu_q - eigen_->energies[s] + shift) / kt_;
          const double ln1pe =
              u > 0.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
          const double sig = u > 0.0 ? 1.0 / (1.0 + std::exp(-u))
                                     : std::exp(u) / (1.0 + std::exp(u));
          n_sheet += opt_.g_v * pref * kt_ * ln1pe * p2;
          dn_sheet += opt_.g_v * pref * sig * p2;
        }
        const double w = opt_.interface_charge_scale * dx_if_[ix];
        q += w * n_sheet;
        dq += w * dn_sheet;
      }
    }
  }

 private:
  const Grid2D& grid_;
  const SolverOptions& opt_;
  double kt_, nc_, mid_x_ = 0.0, v_d_ = 0.0;
  std::vector<double> a_doped_, mu_, dx_if_;
  int if_row_ = -1;
  const EigenSolution* eigen_ = nullptr;
  const std::vector<double>* phi_ref_ = nullptr;
};

PoissonProblem make_problem(const Grid2D& grid, const DeviceSpec& dev,
                            const RegionMap& map, double temperature_k,
                            const SolverOptions& opt) {
  PoissonProblem prob;
  prob.grid = &grid;
  prob.tol = opt.tol_poisson;
  const int nx = grid.nx(), ny = grid.ny(), nn = nx * ny;
  prob.dirichlet.assign(nn, 0);
  prob.dirichlet_value.assign(nn, 0.0);
  prob.fixed_charge.assign(nn, 0.0);

  const double eta = contact_eta(dev.n_sd_cm3, temperature_k);
  const double kt = kb_ev * temperature_k;
  const auto& xs = grid.x_nodes;
  const auto& ys = grid.y_nodes;

  for (const auto& r : map.regions) {
    if (r.bc != BoundaryKind::dirichlet) continue;
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const double x = xs[i], y = ys[j];
        bool pin = false;
        double value = 0.0;
        if (is_metal(r.material)) {
          pin = x >= r.x0 - 1e-9 && x <= r.x1 + 1e-9 && y >= r.y0 - 1e-9 &&
                y <= r.y1 + 1e-9;
          value = r.bc_volts;
        } else {
          // contact plane at the outer face of the doped well
          const double plane = r.material == Material::source_contact ? r.x0 : r.x1;
          pin = std::abs(x - plane) < 1e-9 && y >= r.y0 - 1e-9 && y <= r.y1 + 1e-9;
          value = r.bc_volts + eta * kt;
        }
        if (pin) {
          const int n = j * nx + i;
          prob.dirichlet[n] = 1;
          prob.dirichlet_value[n] = value;
        }
      }
    }
  }

  // ionized donors in the doped wells; trap sheet on the interface row
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      double q = 0.0;
      for (int dj = -1; dj <= 0; ++dj) {
        for (int di = -1; di <= 0; ++di) {
          const int ci = i + di, cj = j + dj;
          if (ci < 0 || cj < 0 || ci + 1 >= nx || cj + 1 >= ny) continue;
          const Material m = grid.cell_material(ci, cj);
          if (m == Material::source_contact || m == Material::drain_contact)
            q += dev.n_sd_cm3 * per_cm3_to_per_nm3 * 0.25 *
                 (xs[ci + 1] - xs[ci]) * (ys[cj + 1] - ys[cj]);
        }
      }
      prob.fixed_charge[std::size_t(j) * nx + i] = q;
    }
  }
  if (grid.interface_row >= 0 && dev.trap.n_peak_cm2 > 0.0 &&
      dev.trap.charge_state == TrapChargeState::acceptor_occupied) {
    const int j = grid.interface_row;
    for (int i = 0; i < nx; ++i) {
      const double x = xs[i];
      if (x <= dev.x_source_end() + 1e-9 || x >= dev.x_drain_start() - 1e-9)
        continue;
      const double hx =
          0.5 * (xs[std::min(i + 1, nx - 1)] - xs[std::max(i - 1, 0)]);
      const double sheet = trap_sheet_density(x, dev) * per_cm2_to_per_nm2;
      prob.fixed_charge[std::size_t(j) * nx + i] -= sheet * hx;
    }
  }
  return prob;
}

double psi_metric(const Profile1D& a, const Profile1D& b) {
  std::vector<double> diff(a.x.size());
  for (std::size_t i = 0; i < diff.size(); ++i)
    diff[i] = std::abs(a.values[i] * a.values[i] - b.values[i] * b.values[i]);
  return trapz(a.x, diff);
}

} // namespace

ConvergedState sc_iterate_at_T(const DeviceSpec& dev,
                               const ConvergedState* warm, double temperature_k,
                               const SolverOptions& opt) {
  if (!warm && temperature_k < 200.0)
    throw ColdStartAtCryo("cold start below 200 K; warm-start required");
  const RegionMap map = build_device(dev);

  ConvergedState st;
  st.temperature_k = temperature_k;
  if (warm) {
    st.grid = warm->grid;
    st.phi = warm->phi;
    st.eigen = warm->eigen;
  } else {
    st.grid = build_graded_grid(map, opt.spacing);
    st.phi = st.grid.make_field(Quantity::potential_v, 0.0);
  }
  const Grid2D& grid = st.grid;

  PoissonProblem prob = make_problem(grid, dev, map, temperature_k, opt);
  for (int n = 0; n < prob.n_nodes(); ++n)
    if (prob.dirichlet[n]) st.phi.values[n] = prob.dirichlet_value[n];

  DeviceCharge charge_model(grid, dev, opt, temperature_k);
  prob.response = &charge_model;
  PoissonWorkspace ws;

  std::vector<double> phi_if(grid.nx());
  auto snapshot_interface = [&](const Field2D& f) {
    for (int i = 0; i < grid.nx(); ++i)
      phi_if[i] = f.at(i, grid.interface_row);
  };

  const bool have_warm_eigen = warm && !warm->eigen.wavefunctions.empty();
  if (have_warm_eigen) {
    snapshot_interface(st.phi);
    charge_model.set_quantum(&st.eigen, &phi_if, dev.v_d);
  }

  Profile1D psi_prev = initial_wavefunction(grid);
  if (have_warm_eigen) psi_prev = st.eigen.wavefunctions.front();

  double dphi = 1e9;
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    PotentialSolution ps = solve_poisson(prob, st.phi, &ws);
    // linear mixing toward the solved potential; the first cold step has no
    // quantum response yet and is taken whole
    const double alpha =
        (it == 0 && !have_warm_eigen) ? 1.0 : opt.mixing_alpha;
    double max_update = 0.0;
    for (std::size_t n = 0; n < st.phi.values.size(); ++n) {
      const double next =
          (1.0 - alpha) * st.phi.values[n] + alpha * ps.phi.values[n];
      max_update = std::max(max_update, std::abs(next - st.phi.values[n]));
      st.phi.values[n] = next;
    }
    dphi = max_update;

    Field2D ec = conduction_band(st.phi, grid);
    st.interface_band = interface_slice(ec, grid);
    // occupied set by energy, so a degenerate left/right pair is never split
    // by the count cap; 8 kT of headroom above the Fermi level
    const double e_cut = 8.0 * kb_ev * temperature_k;
    st.eigen = solve_bound_states_below(st.interface_band, opt.mass_transport,
                                        e_cut, opt.n_states, 400);
    snapshot_interface(st.phi);
    charge_model.set_quantum(&st.eigen, &phi_if, dev.v_d);

    const double pm = psi_metric(st.eigen.wavefunctions.front(), psi_prev);
    psi_prev = st.eigen.wavefunctions.front();
    st.history.push_back({it + 1, pm, dphi});

    static const bool trace = std::getenv("QDOTLAB_TRACE") != nullptr;
    if (trace)
      std::fprintf(stderr, "T=%g it=%d dphi=%.3e psi=%.3e E1=%.4f newton=%d\n",
                   temperature_k, it + 1, dphi, pm, st.eigen.energies.front(),
                   ps.newton_iterations);

    if (dphi < opt.tol_sc) break;
  }
  st.iterations = int(st.history.size());
  if (dphi >= opt.tol_sc) {
    std::ostringstream os;
    os << "no convergence at T=" << temperature_k << " K after "
       << opt.max_iterations << " iterations (last update " << dphi << " V)";
    throw MaxIterExceeded(os.str());
  }

  const double mu_q = 0.0;
  st.charge = assemble_charge(st.eigen, mu_q, temperature_k, opt.mass_dos,
                              opt.g_v);
  return st;
}

ConvergedState continuation_solve(const DeviceSpec& dev,
                                  const ContinuationSchedule& schedule,
                                  const SolverOptions& opt) {
  schedule.validate();
  SolverOptions stage_opt = opt;
  stage_opt.max_iterations = schedule.max_iterations_per_stage;
  stage_opt.mixing_alpha = schedule.mixing_alpha;
  ConvergedState state;
  const ConvergedState* warm = nullptr;
  for (double t : schedule.temperatures_k) {
    try {
      state = sc_iterate_at_T(dev, warm, t, stage_opt);
    } catch (const MaxIterExceeded& e) {
      std::ostringstream os;
      os << "stage T=" << t << " K: " << e.what();
      throw MaxIterExceeded(os.str());
    }
    warm = &state;
  }
  return state;
}

ConvergedState continuation_solve(const DeviceSpec& dev, double target_k,
                                  const SolverOptions& opt) {
  ContinuationSchedule s = default_schedule(target_k);
  s.mixing_alpha = opt.mixing_alpha;
  s.max_iterations_per_stage = opt.max_iterations;
  return continuation_solve(dev, s, opt);
}

void write_history_csv(const ConvergedState& state, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + path);
  std::fprintf(f, "iteration,psi_norm_metric,dphi_inf_norm\n");
  for (const auto& h : state.history)
    std::fprintf(f, "%d,%.12g,%.12g\n", h.iteration, h.psi_norm_metric,
                 h.dphi_inf);
  std::fclose(f);
}

} // namespace qd
