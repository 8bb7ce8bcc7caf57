#include "qdotlab/poisson.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <cmath>

#include "qdotlab/constants.hpp"
#include "qdotlab/errors.hpp"

namespace qd {

namespace {

// face conductances of the node-centered finite-volume stencil; faces are
// split by the cells they cross so material jumps stay sharp
struct Stencil {
  std::vector<double> cx;  // nx-1 by ny: coupling (i,j)-(i+1,j)
  std::vector<double> cy;  // nx by ny-1: coupling (i,j)-(i,j+1)
  std::vector<double> cv_area;
  int nx, ny;

  double& cxr(int i, int j) { return cx[std::size_t(j) * (nx - 1) + i]; }
  double cxr(int i, int j) const { return cx[std::size_t(j) * (nx - 1) + i]; }
  double& cyr(int i, int j) { return cy[std::size_t(j) * nx + i]; }
  double cyr(int i, int j) const { return cy[std::size_t(j) * nx + i]; }
};

Stencil build_stencil(const Grid2D& g) {
  Stencil s;
  s.nx = g.nx();
  s.ny = g.ny();
  s.cx.assign(std::size_t(s.nx - 1) * s.ny, 0.0);
  s.cy.assign(std::size_t(s.nx) * (s.ny - 1), 0.0);
  s.cv_area.assign(std::size_t(s.nx) * s.ny, 0.0);
  const auto& xs = g.x_nodes;
  const auto& ys = g.y_nodes;
  for (int j = 0; j < s.ny; ++j) {
    for (int i = 0; i + 1 < s.nx; ++i) {
      const double dx = xs[i + 1] - xs[i];
      double w = 0.0;
      if (j > 0) w += g.cell_eps(i, j - 1) * 0.5 * (ys[j] - ys[j - 1]);
      if (j + 1 < s.ny) w += g.cell_eps(i, j) * 0.5 * (ys[j + 1] - ys[j]);
      s.cxr(i, j) = w / dx;
    }
  }
  for (int j = 0; j + 1 < s.ny; ++j) {
    for (int i = 0; i < s.nx; ++i) {
      const double dy = ys[j + 1] - ys[j];
      double w = 0.0;
      if (i > 0) w += g.cell_eps(i - 1, j) * 0.5 * (xs[i] - xs[i - 1]);
      if (i + 1 < s.nx) w += g.cell_eps(i, j) * 0.5 * (xs[i + 1] - xs[i]);
      s.cyr(i, j) = w / dy;
    }
  }
  for (int j = 0; j < s.ny; ++j) {
    const double hy = (j > 0 ? 0.5 * (ys[j] - ys[j - 1]) : 0.0) +
                      (j + 1 < s.ny ? 0.5 * (ys[j + 1] - ys[j]) : 0.0);
    for (int i = 0; i < s.nx; ++i) {
      const double hx = (i > 0 ? 0.5 * (xs[i] - xs[i - 1]) : 0.0) +
                        (i + 1 < s.nx ? 0.5 * (xs[i + 1] - xs[i]) : 0.0);
      s.cv_area[std::size_t(j) * s.nx + i] = hx * hy;
    }
  }
  return s;
}

} // namespace

struct PoissonWorkspace::Impl {
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
  bool analyzed = false;
  Stencil stencil;
  std::vector<int> free_index;
  int n_free = 0;
  bool built = false;
};

PoissonWorkspace::PoissonWorkspace() : impl(std::make_unique<Impl>()) {}
PoissonWorkspace::~PoissonWorkspace() = default;
PoissonWorkspace::PoissonWorkspace(PoissonWorkspace&&) noexcept = default;
PoissonWorkspace& PoissonWorkspace::operator=(PoissonWorkspace&&) noexcept =
    default;

PotentialSolution solve_poisson(const PoissonProblem& prob,
                                const Field2D& initial, PoissonWorkspace* ws) {
  const Grid2D& g = *prob.grid;
  const int nx = g.nx(), ny = g.ny(), nn = nx * ny;
  if (int(prob.dirichlet.size()) != nn || int(prob.dirichlet_value.size()) != nn ||
      int(prob.fixed_charge.size()) != nn)
    throw std::invalid_argument("poisson problem arrays sized wrong");
  bool any_dirichlet = false;
  for (int n = 0; n < nn; ++n)
    if (prob.dirichlet[n]) {
      any_dirichlet = true;
      if (!std::isfinite(prob.dirichlet_value[n]))
        throw std::invalid_argument("non-finite Dirichlet value");
    }
  if (!any_dirichlet) throw SingularSystem("no Dirichlet anchor in the problem");

  PoissonWorkspace local;
  PoissonWorkspace::Impl& W = ws ? *ws->impl : *local.impl;
  if (!W.built) {
    W.stencil = build_stencil(g);
    W.free_index.assign(nn, -1);
    int nf = 0;
    for (int n = 0; n < nn; ++n)
      if (!prob.dirichlet[n]) W.free_index[n] = nf++;
    W.n_free = nf;
    W.built = true;
  }
  const Stencil& st = W.stencil;
  const auto& fidx = W.free_index;
  const int nf = W.n_free;

  auto node = [&](int i, int j) { return j * nx + i; };

  std::vector<double> phi(initial.values);
  if (int(phi.size()) != nn) throw std::invalid_argument("initial guess size");
  for (int n = 0; n < nn; ++n)
    if (prob.dirichlet[n]) phi[n] = prob.dirichlet_value[n];

  // residual of the free equations: sum(flux in) + K*(fixed - electrons) = 0
  auto residual = [&](const std::vector<double>& p, std::vector<double>& r) {
    double rmax = 0.0;
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const int n = node(i, j);
        if (prob.dirichlet[n]) continue;
        double f = 0.0;
        if (i > 0) f += st.cxr(i - 1, j) * (p[node(i - 1, j)] - p[n]);
        if (i + 1 < nx) f += st.cxr(i, j) * (p[node(i + 1, j)] - p[n]);
        if (j > 0) f += st.cyr(i, j - 1) * (p[node(i, j - 1)] - p[n]);
        if (j + 1 < ny) f += st.cyr(i, j) * (p[node(i, j + 1)] - p[n]);
        double q = prob.fixed_charge[n];
        if (prob.response) {
          double qe, dq;
          prob.response->eval(n, p[n], qe, dq);
          q -= qe;
        }
        f += poisson_scale * q;
        r[fidx[n]] = f;
        rmax = std::max(rmax, std::abs(f));
      }
    }
    return rmax;
  };

  std::vector<double> r(nf);
  double rnorm = residual(phi, r);

  Eigen::SparseMatrix<double> A(nf, nf);
  std::vector<Eigen::Triplet<double>> trips;
  Eigen::VectorXd rhs(nf), delta(nf);

  PotentialSolution sol;
  int iter = 0;
  while (rnorm > prob.tol && iter < prob.max_newton) {
    trips.clear();
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const int n = node(i, j);
        if (prob.dirichlet[n]) continue;
        const int row = fidx[n];
        double diag = 0.0;
        auto couple = [&](int nb, double c) {
          diag += c;
          if (!prob.dirichlet[nb]) trips.emplace_back(row, fidx[nb], -c);
        };
        if (i > 0) couple(node(i - 1, j), st.cxr(i - 1, j));
        if (i + 1 < nx) couple(node(i + 1, j), st.cxr(i, j));
        if (j > 0) couple(node(i, j - 1), st.cyr(i, j - 1));
        if (j + 1 < ny) couple(node(i, j + 1), st.cyr(i, j));
        if (prob.response) {
          double qe, dq;
          prob.response->eval(n, phi[n], qe, dq);
          diag += poisson_scale * dq;
        }
        trips.emplace_back(row, row, diag);
        rhs[row] = r[row];
      }
    }
    A.setFromTriplets(trips.begin(), trips.end());
    // solve (-J) delta = r, i.e. J delta = -F with J = -(-J)
    if (!W.analyzed) {
      W.solver.analyzePattern(A);
      W.analyzed = true;
    }
    W.solver.factorize(A);
    if (W.solver.info() != Eigen::Success)
      throw SingularSystem("poisson factorization failed");
    delta = W.solver.solve(rhs);

    double step = 1.0;
    std::vector<double> trial(nn);
    double new_norm = rnorm;
    bool accepted = false;
    for (int bt = 0; bt <= prob.max_backtracks; ++bt) {
      trial = phi;
      for (int n = 0; n < nn; ++n)
        if (!prob.dirichlet[n]) trial[n] += step * delta[fidx[n]];
      new_norm = residual(trial, r);
      if (new_norm < rnorm) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // recompute residual state for the unmoved phi before bailing out
      residual(phi, r);
      throw NewtonDiverged("residual stopped decreasing during line search");
    }
    phi.swap(trial);
    rnorm = new_norm;
    ++iter;
  }
  if (rnorm > prob.tol) throw NewtonDiverged("newton iteration cap reached");

  sol.phi = g.make_field(Quantity::potential_v);
  sol.phi.values = phi;
  sol.newton_iterations = iter;
  sol.final_residual = rnorm;

  // conservation diagnostics: net flux out through Dirichlet faces vs charge
  double enclosed = 0.0, flux_out = 0.0;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int n = node(i, j);
      if (!prob.dirichlet[n]) {
        double q = prob.fixed_charge[n];
        if (prob.response) {
          double qe, dq;
          prob.response->eval(n, phi[n], qe, dq);
          q -= qe;
        }
        enclosed += poisson_scale * q;
        continue;
      }
      auto add_flux = [&](int ni, int nj, double c) {
        const int nb = node(ni, nj);
        if (!prob.dirichlet[nb]) flux_out += c * (phi[n] - phi[nb]);
      };
      if (i > 0) add_flux(i - 1, j, st.cxr(i - 1, j));
      if (i + 1 < nx) add_flux(i + 1, j, st.cxr(i, j));
      if (j > 0) add_flux(i, j - 1, st.cyr(i, j - 1));
      if (j + 1 < ny) add_flux(i, j + 1, st.cyr(i, j));
    }
  }
  sol.enclosed_charge = enclosed;
  sol.boundary_flux = flux_out;
  return sol;
}

Field2D conduction_band(const Field2D& phi, const Grid2D& grid) {
  Field2D ec = grid.make_field(Quantity::conduction_band_ev);
  const int nx = grid.nx(), ny = grid.ny();
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      // a node reads as silicon if any touching cell is silicon
      bool si = false;
      for (int dj = -1; dj <= 0 && !si; ++dj)
        for (int di = -1; di <= 0 && !si; ++di) {
          const int ci = i + di, cj = j + dj;
          if (ci >= 0 && ci + 1 < nx && cj >= 0 && cj + 1 < ny)
            si = is_silicon(grid.cell_material(ci, cj));
        }
      ec.at(i, j) = -phi.at(i, j) + (si ? 0.0 : sio2_band_offset_ev);
    }
  }
  return ec;
}

} // namespace qd
