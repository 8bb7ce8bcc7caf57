#include "qdotlab/schrodinger.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

#include "qdotlab/errors.hpp"

namespace qd {

double trapz(const std::vector<double>& x, const std::vector<double>& f) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    s += 0.5 * (f[i] + f[i + 1]) * (x[i + 1] - x[i]);
  return s;
}

namespace {

struct Tridiag {
  std::vector<double> d;  // size m
  std::vector<double> e;  // size m-1
};

// eigenvalue count below lambda via the Sturm LDL^T recurrence
int sturm_count(const Tridiag& t, double lambda) {
  int count = 0;
  double q = t.d[0] - lambda;
  if (q < 0) ++count;
  for (std::size_t i = 1; i < t.d.size(); ++i) {
    if (q == 0.0) q = 1e-300;
    q = t.d[i] - lambda - t.e[i - 1] * t.e[i - 1] / q;
    if (q < 0) ++count;
  }
  return count;
}

double kth_eigenvalue(const Tridiag& t, int k, double lo, double hi) {
  for (int it = 0;
       it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo) + std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(t, mid) > k)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// (T - shift) x = rhs, tridiagonal LU with partial pivoting; rhs -> solution
void solve_shifted(const Tridiag& t, double shift, std::vector<double>& rhs) {
  const std::size_t m = t.d.size();
  std::vector<double> a(m), b(m > 1 ? m - 1 : 0), c(m > 1 ? m - 1 : 0),
      c2(m > 2 ? m - 2 : 0, 0.0);
  for (std::size_t i = 0; i < m; ++i) a[i] = t.d[i] - shift;
  for (std::size_t i = 0; i + 1 < m; ++i) b[i] = c[i] = t.e[i];
  for (std::size_t i = 0; i + 1 < m; ++i) {
    if (std::abs(b[i]) > std::abs(a[i])) {
      std::swap(a[i], b[i]);
      std::swap(c[i], a[i + 1]);
      if (i + 2 < m) {
        c2[i] = c[i + 1];
        c[i + 1] = 0.0;
      }
      std::swap(rhs[i], rhs[i + 1]);
    }
    if (a[i] == 0.0) a[i] = 1e-300;
    const double f = b[i] / a[i];
    a[i + 1] -= f * c[i];
    if (i + 2 < m) c[i + 1] -= f * c2[i];
    rhs[i + 1] -= f * rhs[i];
  }
  if (a[m - 1] == 0.0) a[m - 1] = 1e-300;
  rhs[m - 1] /= a[m - 1];
  if (m >= 2) rhs[m - 2] = (rhs[m - 2] - c[m - 2] * rhs[m - 1]) / a[m - 2];
  for (std::size_t ii = m; ii-- > 2;) {
    const std::size_t i = ii - 2;
    rhs[i] = (rhs[i] - c[i] * rhs[i + 1] - c2[i] * rhs[i + 2]) / a[i];
  }
}

void normalize2(std::vector<double>& v) {
  double n = 0.0;
  for (double x : v) n += x * x;
  n = std::sqrt(n);
  if (n > 0)
    for (double& x : v) x /= n;
}

// sign * exp(lg); sg == 0 encodes an exact zero
struct LogVal {
  double lg = -std::numeric_limits<double>::infinity();
  double sg = 0.0;
};

LogVal to_logval(double v, double extra_log) {
  if (v == 0.0) return {};
  return {std::log(std::abs(v)) + extra_log, v > 0 ? 1.0 : -1.0};
}

// discrete three-term recurrence of the eigenproblem, both directions
struct RecurrenceSteps {
  const std::vector<double>& x;
  const std::vector<double>& u;  // U - E per node
  double c;
  double right(std::size_t i, double pm1, double p) const {  // psi_{i+1}
    const double hl = x[i] - x[i - 1];
    const double hr = x[i + 1] - x[i];
    const double w = 0.5 * (hl + hr);
    return p + hr * (u[i] * p * w / c + (p - pm1) / hl);
  }
  double left(std::size_t i, double pp1, double p) const {  // psi_{i-1}
    const double hl = x[i] - x[i - 1];
    const double hr = x[i + 1] - x[i];
    const double w = 0.5 * (hl + hr);
    return p + hl * (u[i] * p * w / c + (p - pp1) / hr);
  }
};

// Rebuild sub-floor stretches of an eigenvector from the exact three-term
// recurrence. Each stretch is spanned by solutions propagated only in their
// stable (growing) direction and matched to trusted values at the stretch
// edges, so deep evanescent tails come out at relative accuracy rather than
// at the eigensolver noise floor.
class TailRepair {
 public:
  TailRepair(const std::vector<double>& x, const std::vector<double>& pot,
             double energy, double c)
      : x_(x), c_(c), n_(x.size()) {
    u_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) u_[i] = pot[i] - energy;
  }

  void apply(std::vector<double>& psi) const {
    const double floor_mag = 1e-9;
    std::size_t i = 0;
    while (i < n_) {
      if (std::abs(psi[i]) >= floor_mag) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < n_ && std::abs(psi[j]) < floor_mag) ++j;
      if (j - i >= 4) {
        if (i == 0 && j < n_ - 1)
          repair_left_end(psi, j);
        else if (j == n_ && i >= 2)
          repair_right_end(psi, i);
        else if (i >= 2 && j + 1 < n_)
          repair_interior(psi, i, j);
      }
      i = j;
    }
  }

 private:
  // seeds at nodes (iA, iA+1); fills out[k] for k in [iA, iEnd], iEnd >= iA+1
  void run_right(std::size_t iA, double vA, double vAp1, std::size_t iEnd,
                 std::vector<LogVal>& out) const {
    const RecurrenceSteps rec{x_, u_, c_};
    double pm = vA, p = vAp1, ls = 0.0;
    out[iA] = to_logval(vA, 0.0);
    out[iA + 1] = to_logval(vAp1, 0.0);
    for (std::size_t i = iA + 1; i < iEnd; ++i) {
      const double pn = rec.right(i, pm, p);
      pm = p;
      p = pn;
      const double mag = std::max(std::abs(pm), std::abs(p));
      if (mag > 1e100) {
        pm /= mag;
        p /= mag;
        ls += std::log(mag);
      }
      out[i + 1] = to_logval(p, ls);
    }
  }

  // seeds at nodes (iA, iA+1); fills out[k] for k in [iEnd, iA+1], iEnd <= iA-1
  void run_left(std::size_t iA, double vAp1, double vA, std::size_t iEnd,
                std::vector<LogVal>& out) const {
    const RecurrenceSteps rec{x_, u_, c_};
    double pp = vAp1, p = vA, ls = 0.0;
    out[iA + 1] = to_logval(vAp1, 0.0);
    out[iA] = to_logval(vA, 0.0);
    for (std::size_t i = iA; i > iEnd; --i) {
      const double pn = rec.left(i, pp, p);
      pp = p;
      p = pn;
      const double mag = std::max(std::abs(pp), std::abs(p));
      if (mag > 1e100) {
        pp /= mag;
        p /= mag;
        ls += std::log(mag);
      }
      out[i - 1] = to_logval(p, ls);
    }
  }

  static double materialize(const LogVal& v, double log_scale, double sign) {
    if (v.sg == 0.0) return 0.0;
    const double lg = v.lg + log_scale;
    return lg < -700.0 ? 0.0 : sign * v.sg * std::exp(lg);
  }

  void repair_left_end(std::vector<double>& psi, std::size_t j) const {
    std::vector<LogVal> g(n_);
    run_right(0, 0.0, 1.0, j, g);
    if (g[j].sg == 0.0 || psi[j] == 0.0) return;
    const double la = std::log(std::abs(psi[j])) - g[j].lg;
    const double sa = (psi[j] > 0 ? 1.0 : -1.0) * g[j].sg;
    for (std::size_t k = 1; k < j; ++k) psi[k] = materialize(g[k], la, sa);
    psi[0] = 0.0;
  }

  void repair_right_end(std::vector<double>& psi, std::size_t i) const {
    std::vector<LogVal> g(n_);
    run_left(n_ - 2, 0.0, 1.0, i - 1, g);
    if (g[i - 1].sg == 0.0 || psi[i - 1] == 0.0) return;
    const double la = std::log(std::abs(psi[i - 1])) - g[i - 1].lg;
    const double sa = (psi[i - 1] > 0 ? 1.0 : -1.0) * g[i - 1].sg;
    for (std::size_t k = i; k + 1 < n_; ++k) psi[k] = materialize(g[k], la, sa);
    psi[n_ - 1] = 0.0;
  }

  // stretch [i, j): anchors psi[i-1] and psi[j] are trusted; span with the
  // rightward-decaying and leftward-decaying solutions, each generated from
  // arbitrary seeds on its far side (growing, hence stable, direction)
  void repair_interior(std::vector<double>& psi, std::size_t i,
                       std::size_t j) const {
    std::vector<LogVal> gl(n_), gr(n_);
    run_left(j, 0.0, 1.0, i - 1, gl);   // decays rightward
    run_right(i - 1, 0.0, 1.0, j + 1, gr);  // decays leftward
    if (gl[i - 1].sg == 0.0 || gr[j].sg == 0.0) return;
    const double laL = std::log(std::abs(psi[i - 1])) - gl[i - 1].lg;
    const double saL = (psi[i - 1] > 0 ? 1.0 : -1.0) * gl[i - 1].sg;
    const double laR = std::log(std::abs(psi[j])) - gr[j].lg;
    const double saR = (psi[j] > 0 ? 1.0 : -1.0) * gr[j].sg;
    for (std::size_t k = i; k < j; ++k)
      psi[k] = materialize(gl[k], laL, saL) + materialize(gr[k], laR, saR);
  }

  const std::vector<double>& x_;
  std::vector<double> u_;
  double c_;
  std::size_t n_;
};

} // namespace

namespace {

EigenSolution solve_lowest(const Profile1D& potential, double mass,
                           int n_states, const double* e_cut);

} // namespace

EigenSolution solve_bound_states(const Profile1D& potential, double mass,
                                 int n_states) {
  return solve_lowest(potential, mass, n_states, nullptr);
}

EigenSolution solve_bound_states_below(const Profile1D& potential, double mass,
                                       double e_cut_ev, int n_min, int n_max) {
  EigenSolution sol = solve_lowest(potential, mass, n_max, &e_cut_ev);
  if (int(sol.energies.size()) < n_min)
    sol = solve_lowest(potential, mass, std::min(n_min, n_max), nullptr);
  return sol;
}

namespace {

EigenSolution solve_lowest(const Profile1D& potential, double mass,
                           int n_states, const double* e_cut) {
  const std::size_t n = potential.x.size();
  if (n < 50) throw TooFewNodes("slice has fewer than 50 nodes");
  if (potential.values.size() != n)
    throw GridMismatch("potential x/value size mismatch");
  if (n_states < 1) throw std::invalid_argument("n_states must be >= 1");
  for (double v : potential.values)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite potential");

  const double c = hbar2_2m0 / mass;
  const std::size_t m = n - 2;
  const auto& x = potential.x;
  const auto& U = potential.values;

  // weights symmetrize the nonuniform three-point operator; unit 2-norm in
  // the weighted basis is exactly the trapezoid L2 normalization on the slice
  std::vector<double> w(m);
  for (std::size_t i = 0; i < m; ++i) w[i] = 0.5 * (x[i + 2] - x[i]);

  Tridiag t;
  t.d.resize(m);
  t.e.resize(m - 1);
  for (std::size_t i = 0; i < m; ++i) {
    const double hl = x[i + 1] - x[i];
    const double hr = x[i + 2] - x[i + 1];
    t.d[i] = c * (1.0 / hl + 1.0 / hr) / w[i] + U[i + 1];
  }
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double h = x[i + 2] - x[i + 1];
    t.e[i] = -c / (h * std::sqrt(w[i] * w[i + 1]));
  }

  double lo = t.d[0], hi = t.d[0];
  for (std::size_t i = 0; i < m; ++i) {
    const double r = (i > 0 ? std::abs(t.e[i - 1]) : 0.0) +
                     (i + 1 < m ? std::abs(t.e[i]) : 0.0);
    lo = std::min(lo, t.d[i] - r);
    hi = std::max(hi, t.d[i] + r);
  }

  int k_max = std::min<int>(n_states, int(m));
  if (e_cut) {
    // count the spectrum below the cutoff once, then solve exactly that many
    const int below = sturm_count(t, *e_cut);
    k_max = std::min(k_max, std::max(below, 1));
  }
  EigenSolution sol;
  sol.mass = mass;
  sol.x_min = x.front();
  sol.x_max = x.back();

  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> rand01(-1.0, 1.0);
  std::vector<std::vector<double>> vecs;

  for (int k = 0; k < k_max; ++k) {
    const double lambda = kth_eigenvalue(t, k, lo, hi);
    const double shift = lambda + 1e-12 * (std::abs(lambda) + 1.0);
    std::vector<double> v(m);
    for (auto& vi : v) vi = rand01(rng);
    const double scale = std::abs(lambda) + std::abs(hi) + 1.0;
    double rmax = 1e300;
    for (int it = 0; it < 20; ++it) {
      solve_shifted(t, shift, v);
      // project out everything already found: dense spectra cluster far
      // tighter than the shift resolution
      for (std::size_t p = 0; p < vecs.size(); ++p) {
        double dot = 0.0;
        for (std::size_t q = 0; q < m; ++q) dot += v[q] * vecs[p][q];
        for (std::size_t q = 0; q < m; ++q) v[q] -= dot * vecs[p][q];
      }
      normalize2(v);
      rmax = 0.0;
      for (std::size_t q = 0; q < m; ++q) {
        double Av = t.d[q] * v[q];
        if (q > 0) Av += t.e[q - 1] * v[q - 1];
        if (q + 1 < m) Av += t.e[q] * v[q + 1];
        rmax = std::max(rmax, std::abs(Av - lambda * v[q]));
      }
      // tight enough to split physically resolvable near-degenerate pairs
      if (rmax < 3e-12 * scale) break;
    }
    // clustered levels cannot do better than the cluster width; any vector
    // this converged is an accurate basis vector of the near-degenerate space
    if (rmax > 1e-8 * scale) {
      std::ostringstream os;
      os << "inverse iteration failed for state " << k;
      throw ConvergenceFailure(os.str());
    }
    vecs.push_back(v);
    sol.energies.push_back(lambda);
  }

  for (int k = 0; k < k_max; ++k) {
    Profile1D p;
    p.quantity = Quantity::wavefunction_density;
    p.x = x;
    p.values.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      p.values[i + 1] = vecs[k][i] / std::sqrt(w[i]);
    TailRepair(x, U, sol.energies[k], c).apply(p.values);
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(p.values[i]) > 1e-6) {
        if (p.values[i] < 0)
          for (auto& vv : p.values) vv = -vv;
        break;
      }
    }
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) sq[i] = p.values[i] * p.values[i];
    const double nrm = std::sqrt(trapz(p.x, sq));
    if (nrm > 0)
      for (auto& vv : p.values) vv /= nrm;
    sol.wavefunctions.push_back(std::move(p));
  }
  return sol;
}

} // namespace

double subband_occupancy(double fermi_ev, double energy_ev, double temperature_k,
                         double mass_dos) {
  const double kt = kb_ev * temperature_k;
  const double pref = mass_dos * kt / (M_PI * 2.0 * hbar2_2m0);  // nm^-2
  const double u = (fermi_ev - energy_ev) / kt;
  const double ln1pe =
      u > 0.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
  return pref * ln1pe;
}

void write_csv(const EigenSolution& sol, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + path);
  std::fprintf(f, "state,energy_eV,psi_samples\n");
  for (std::size_t s = 0; s < sol.energies.size(); ++s) {
    std::fprintf(f, "%zu,%.12g", s, sol.energies[s]);
    for (double v : sol.wavefunctions[s].values) std::fprintf(f, ",%.12g", v);
    std::fprintf(f, "\n");
  }
  std::fclose(f);
}

ChargeAssembly assemble_charge(const EigenSolution& eigen, double fermi_ev,
                               double temperature_k, double mass_dos, double g_v) {
  if (!(temperature_k > 0.0))
    throw std::invalid_argument("temperature must be > 0");
  ChargeAssembly out;
  out.fermi_ev = fermi_ev;
  out.temperature_k = temperature_k;
  if (eigen.wavefunctions.empty()) return out;
  out.x = eigen.wavefunctions.front().x;
  out.density.assign(out.x.size(), 0.0);
  for (std::size_t s = 0; s < eigen.energies.size(); ++s) {
    const double occ =
        subband_occupancy(fermi_ev, eigen.energies[s], temperature_k, mass_dos);
    out.occupancy.push_back(occ);
    const auto& psi = eigen.wavefunctions[s].values;
    for (std::size_t i = 0; i < psi.size(); ++i)
      out.density[i] += g_v * occ * psi[i] * psi[i];
  }
  return out;
}

} // namespace qd
