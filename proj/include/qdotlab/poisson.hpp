#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "qdotlab/grid.hpp"

namespace qd {

// Mobile electron charge, integrated over each node's control volume
// (electrons per unit width, nm^-1), with its derivative wrt the local
// potential. Implementations are supplied by the self-consistent driver.
class ResponseCharge {
 public:
  virtual ~ResponseCharge() = default;
  virtual void eval(int node, double phi, double& q_electrons,
                    double& dq_dphi) const = 0;
};

// -div(eps grad phi) = rho on the tensor grid; gate/contact nodes Dirichlet,
// outer boundary zero-Neumann by construction of the flux stencil.
struct PoissonProblem {
  const Grid2D* grid = nullptr;
  std::vector<std::uint8_t> dirichlet;  // per node
  std::vector<double> dirichlet_value;  // per node, volts
  std::vector<double> fixed_charge;     // per node, signed, nm^-1 per width
  const ResponseCharge* response = nullptr;
  double tol = 1e-10;   // residual inf-norm, scaled units
  int max_newton = 50;
  int max_backtracks = 20;

  int n_nodes() const { return grid->nx() * grid->ny(); }
};

struct PotentialSolution {
  Field2D phi;
  int newton_iterations = 0;
  double final_residual = 0.0;
  double enclosed_charge = 0.0;   // K * integrated net charge, V units
  double boundary_flux = 0.0;     // flux out through Dirichlet nodes, V units
};

// Reusable factorization workspace; one per grid topology.
class PoissonWorkspace {
 public:
  PoissonWorkspace();
  ~PoissonWorkspace();
  PoissonWorkspace(PoissonWorkspace&&) noexcept;
  PoissonWorkspace& operator=(PoissonWorkspace&&) noexcept;
  struct Impl;
  std::unique_ptr<Impl> impl;
};

PotentialSolution solve_poisson(const PoissonProblem& problem,
                                const Field2D& initial_guess,
                                PoissonWorkspace* ws = nullptr);

// E_c = -phi in silicon, -phi + oxide offset elsewhere
Field2D conduction_band(const Field2D& phi, const Grid2D& grid);

} // namespace qd
