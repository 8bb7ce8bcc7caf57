#include "qdotlab/coulomb.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "qdotlab/errors.hpp"

namespace qd {

namespace {
constexpr double kb_joule = 1.380649e-23;

// kT-scaled sequential-tunneling kernel: x / expm1(x), smooth through x = 0
double rate_kernel(double x) {
  if (x > 700.0) return 0.0;
  if (x < -700.0) return -x;
  if (std::abs(x) < 1e-8) return 1.0 - 0.5 * x;
  return x / std::expm1(x);
}
} // namespace

void SetParameters::validate() const {
  if (!(c_g > 0 && c_s > 0 && c_d > 0))
    throw std::invalid_argument("capacitances must be positive");
  if (!(r_s > 0 && r_d > 0))
    throw std::invalid_argument("junction resistances must be positive");
  if (!(temperature_k > 0)) throw std::invalid_argument("temperature must be > 0");
}

double gate_capacitance_from_device(const DeviceSpec& dev) {
  return eps0_si * eps_ox * dev.l_pg / dev.t_ox;
}

CoulombTrace cb_current(const SetParameters& prm, const std::vector<double>& vg) {
  prm.validate();
  const double e = q_coulomb;
  const double csum = prm.c_sigma();
  const double ec_ev = prm.charging_energy_ev();
  const double kt_ev = kb_joule * prm.temperature_k / e;  // eV
  const double v_s = -0.5 * prm.v_ds, v_d = 0.5 * prm.v_ds;

  CoulombTrace out;
  out.v_g = vg;
  out.current_a.resize(vg.size());
  out.linear_response_ok = std::abs(prm.v_ds) < 0.5 * ec_ev;

  constexpr int N = 10;
  std::vector<double> up(2 * N + 1), down(2 * N + 1), logp(2 * N + 1);

  for (std::size_t iv = 0; iv < vg.size(); ++iv) {
    const double q0 = prm.c_g * vg[iv] + prm.c_s * v_s + prm.c_d * v_d;
    const double n_g = q0 / e;
    const long n_center = std::lround(n_g);

    // island potential phi(n) = (q0 - n e)/Csum; transfer energies use the
    // mid-transfer potential, exact for linear capacitive networks
    auto d_free_in = [&](long n, double v_lead) {
      const double phi = (q0 - double(n) * e) / csum;
      return -(phi - 0.5 * e / csum - v_lead);  // eV
    };
    auto d_free_out = [&](long n, double v_lead) {
      const double phi = (q0 - double(n) * e) / csum;
      return (phi + 0.5 * e / csum - v_lead);
    };

    for (int k = 0; k <= 2 * N; ++k) {
      const long n = n_center - N + k;
      const double f_in_s = d_free_in(n, v_s), f_in_d = d_free_in(n, v_d);
      const double f_out_s = d_free_out(n, v_s), f_out_d = d_free_out(n, v_d);
      const double gs = kt_ev / prm.r_s;  // e * Gamma, amperes per kernel unit
      const double gd = kt_ev / prm.r_d;
      up[k] = gs * rate_kernel(f_in_s / kt_ev) + gd * rate_kernel(f_in_d / kt_ev);
      down[k] =
          gs * rate_kernel(f_out_s / kt_ev) + gd * rate_kernel(f_out_d / kt_ev);
    }

    // stationary distribution of the birth-death chain, zero bond flux
    logp[N] = 0.0;
    for (int k = N; k < 2 * N; ++k)
      logp[k + 1] =
          logp[k] + std::log(std::max(up[k], 1e-300)) -
          std::log(std::max(down[k + 1], 1e-300));
    for (int k = N; k > 0; --k)
      logp[k - 1] =
          logp[k] + std::log(std::max(down[k], 1e-300)) -
          std::log(std::max(up[k - 1], 1e-300));

    double lmax = -std::numeric_limits<double>::infinity();
    for (double lp : logp) lmax = std::max(lmax, lp);
    double z = 0.0;
    for (double lp : logp) z += std::exp(lp - lmax);
    if (!(z > 0.0) || !std::isfinite(z))
      throw NonConvergentStationaryDistribution("stationary distribution sums to zero");

    // gs/gd carry e*Gamma, so the drain-junction imbalance is the current
    double current = 0.0;
    for (int k = 0; k <= 2 * N; ++k) {
      const long n = n_center - N + k;
      const double p = std::exp(logp[k] - lmax) / z;
      const double gd = kt_ev / prm.r_d;
      const double gamma_out = gd * rate_kernel(d_free_out(n, v_d) / kt_ev);
      const double gamma_in = gd * rate_kernel(d_free_in(n, v_d) / kt_ev);
      current += p * (gamma_out - gamma_in);
    }
    out.current_a[iv] = current;
  }
  return out;
}

void write_csv(const CoulombTrace& t, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + path);
  std::fprintf(f, "Vg_V,I_A\n");
  for (std::size_t i = 0; i < t.v_g.size(); ++i)
    std::fprintf(f, "%.12g,%.12g\n", t.v_g[i], t.current_a[i]);
  std::fclose(f);
}

} // namespace qd
