#include "qdotlab/scattering.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>

#include "qdotlab/errors.hpp"

namespace qd {

namespace {

using cplx = std::complex<double>;

struct Mat2 {
  cplx a11{1, 0}, a12{0, 0}, a21{0, 0}, a22{1, 0};

  Mat2 mul_left(const Mat2& l) const {  // returns l * (*this)
    Mat2 r;
    r.a11 = l.a11 * a11 + l.a12 * a21;
    r.a12 = l.a11 * a12 + l.a12 * a22;
    r.a21 = l.a21 * a11 + l.a22 * a21;
    r.a22 = l.a21 * a12 + l.a22 * a22;
    return r;
  }
  double max_abs() const {
    return std::max(std::max(std::abs(a11), std::abs(a12)),
                    std::max(std::abs(a21), std::abs(a22)));
  }
};

// floor keeps interface-matrix entries conditioned when an energy lands on a
// segment level; the induced energy shift is ~1e-12 eV
cplx wave_number(double e_ev, double u_ev, double c) {
  cplx k = std::sqrt(cplx((e_ev - u_ev) / c, 0.0));
  if (std::abs(k) < 1e-6) k = cplx(1e-6, 0.0);
  return k;
}

} // namespace

std::vector<PotentialSegment> segments_from_profile(const Profile1D& p) {
  std::vector<PotentialSegment> segs;
  const std::size_t n = p.x.size();
  if (n < 2) throw std::invalid_argument("profile needs at least two samples");
  segs.reserve(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i)
    segs.push_back({p.x[i + 1] - p.x[i], 0.5 * (p.values[i] + p.values[i + 1])});
  // lead levels are the end samples
  segs.front().u_ev = p.values.front();
  segs.back().u_ev = p.values.back();
  return segs;
}

ScatteringSpectrum transmission_spectrum(const std::vector<PotentialSegment>& segs,
                                         double mass,
                                         const std::vector<double>& energies) {
  if (energies.empty()) throw EmptyEnergyGrid("no energies given");
  if (segs.empty()) throw std::invalid_argument("no potential segments");
  const double c = hbar2_2m0 / mass;
  const double lead_in = segs.front().u_ev;
  const double lead_out = segs.back().u_ev;
  const double lead = std::max(lead_in, lead_out);

  ScatteringSpectrum out;
  const std::size_t ne = energies.size();
  out.energies = energies;
  out.transmission.assign(ne, std::numeric_limits<double>::quiet_NaN());
  out.reflection.assign(ne, std::numeric_limits<double>::quiet_NaN());
  out.k_in.assign(ne, 0.0);
  out.k_out.assign(ne, 0.0);
  out.propagating.assign(ne, false);

  for (std::size_t ie = 0; ie < ne; ++ie) {
    const double e = energies[ie];
    if (!(e > lead)) continue;  // evanescent lead: skip, flag stays false
    out.propagating[ie] = true;
    const double kin = std::sqrt((e - lead_in) / c);
    const double kout = std::sqrt((e - lead_out) / c);
    out.k_in[ie] = kin;
    out.k_out[ie] = kout;

    // cumulative transfer W = e^S * mat, scaled so entries stay representable
    Mat2 mat;
    double log_scale = 0.0;
    cplx k_prev = wave_number(e, segs.front().u_ev, c);
    for (std::size_t j = 0; j + 1 < segs.size(); ++j) {
      // propagate across segment j, factoring out the growing exponential
      const cplx ikd = cplx(0, 1) * k_prev * segs[j].width_nm;
      const double g = std::abs(ikd.real());  // |Im k| * d
      Mat2 prop;
      prop.a11 = std::exp(ikd - g);
      prop.a22 = std::exp(-ikd - g);
      log_scale += g;
      mat = mat.mul_left(prop);

      const cplx k_next = wave_number(e, segs[j + 1].u_ev, c);
      const cplx r = k_prev / k_next;
      Mat2 iface;
      iface.a11 = 0.5 * (1.0 + r);
      iface.a12 = 0.5 * (1.0 - r);
      iface.a21 = iface.a12;
      iface.a22 = iface.a11;
      mat = mat.mul_left(iface);
      k_prev = k_next;

      const double m = mat.max_abs();
      if (m > 1e100) {
        const double inv = 1.0 / m;
        mat.a11 *= inv;
        mat.a12 *= inv;
        mat.a21 *= inv;
        mat.a22 *= inv;
        log_scale += std::log(m);
      }
    }
    // last segment is the outgoing lead; no trailing propagation needed for T
    const double abs22 = std::abs(mat.a22);
    const double log_t2 =
        std::log(kin / kout) - 2.0 * (log_scale + std::log(abs22));
    out.transmission[ie] = log_t2 < -700.0 ? 0.0 : std::exp(log_t2);
    const double rr = std::abs(mat.a21) / abs22;
    out.reflection[ie] = rr * rr;
  }
  return out;
}

ScatteringSpectrum transmission_spectrum(const Profile1D& potential, double mass,
                                         const std::vector<double>& energies) {
  return transmission_spectrum(segments_from_profile(potential), mass, energies);
}

std::vector<double> default_energy_grid(const std::vector<PotentialSegment>& segs,
                                        int n_points, double span_ev) {
  const double lead = std::max(segs.front().u_ev, segs.back().u_ev);
  std::vector<double> e(n_points);
  for (int i = 0; i < n_points; ++i)
    e[i] = lead + 1e-3 + span_ev * i / (n_points - 1);
  return e;
}

double energy_at_T_level(const ScatteringSpectrum& s, double level) {
  double e_prev = 0.0, t_prev = -1.0;
  bool have_prev = false;
  for (std::size_t i = 0; i < s.energies.size(); ++i) {
    if (!s.propagating[i]) continue;
    const double t = s.transmission[i];
    if (t >= level) {
      if (!have_prev || t_prev >= level) return s.energies[i];
      const double f = (level - t_prev) / (t - t_prev);
      return e_prev + f * (s.energies[i] - e_prev);
    }
    e_prev = s.energies[i];
    t_prev = t;
    have_prev = true;
  }
  throw LevelNeverReached("T(E) never reaches the requested level");
}

double average_tunnel_coupling(const ScatteringSpectrum& s, double lo, double hi) {
  if (!(hi > lo)) throw WindowOutOfRange("empty window");
  std::vector<double> xs, ts;
  for (std::size_t i = 0; i < s.energies.size(); ++i) {
    if (!s.propagating[i]) continue;
    xs.push_back(s.energies[i]);
    ts.push_back(s.transmission[i]);
  }
  if (xs.size() < 2 || lo < xs.front() - 1e-12 || hi > xs.back() + 1e-12)
    throw WindowOutOfRange("window outside the propagating spectrum");
  auto interp = [&](double e) {
    std::size_t j = 1;
    while (j + 1 < xs.size() && xs[j] < e) ++j;
    const double f = (e - xs[j - 1]) / (xs[j] - xs[j - 1]);
    return ts[j - 1] + f * (ts[j] - ts[j - 1]);
  };
  std::vector<double> wx{lo}, wt{interp(lo)};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] > lo && xs[i] < hi) {
      wx.push_back(xs[i]);
      wt.push_back(ts[i]);
    }
  }
  wx.push_back(hi);
  wt.push_back(interp(hi));
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < wx.size(); ++i)
    integral += 0.5 * (wt[i] + wt[i + 1]) * (wx[i + 1] - wx[i]);
  return integral / (hi - lo);
}

RandomnessMetric randomness_metric(const ScatteringSpectrum& s, double band) {
  RandomnessMetric m;
  std::vector<double> xs, ts;
  for (std::size_t i = 0; i < s.energies.size(); ++i) {
    if (!s.propagating[i]) continue;
    xs.push_back(s.energies[i]);
    ts.push_back(s.transmission[i]);
  }
  const std::size_t n = ts.size();
  if (n < 5) return m;

  const std::size_t tail = std::max<std::size_t>(1, n / 10);
  double mean = 0.0;
  for (std::size_t i = n - tail; i < n; ++i) mean += ts[i];
  mean /= double(tail);

  // lowest energy after which T stays inside the band around its tail mean
  std::size_t sat = n;
  for (std::size_t i = n; i-- > 0;) {
    if (std::abs(ts[i] - mean) > band) {
      sat = i + 1;
      break;
    }
    sat = i;
  }
  m.saturation_energy_ev = sat < n ? xs[sat] : xs.back();

  long last_extremum = -1;
  for (std::size_t i = 1; i + 1 < n && i < sat; ++i) {
    const bool maxi = ts[i] > ts[i - 1] && ts[i] > ts[i + 1];
    const bool mini = ts[i] < ts[i - 1] && ts[i] < ts[i + 1];
    if (maxi || mini) {
      ++m.oscillation_count;
      if (last_extremum >= 0 && long(i) - last_extremum < 5)
        m.well_resolved = false;
      last_extremum = long(i);
    }
  }
  return m;
}

int count_transmission_modes(const ScatteringSpectrum& s, double e_max,
                             double min_prominence) {
  std::vector<double> xs, ts;
  for (std::size_t i = 0; i < s.energies.size(); ++i) {
    if (!s.propagating[i] || s.energies[i] > e_max) continue;
    xs.push_back(s.energies[i]);
    ts.push_back(s.transmission[i]);
  }
  int count = 0;
  for (std::size_t i = 1; i + 1 < ts.size(); ++i) {
    if (!(ts[i] > ts[i - 1] && ts[i] > ts[i + 1])) continue;
    // prominence: drop to the valley floor on the shallower side
    double lmin = ts[i], rmin = ts[i];
    for (std::size_t j = i; j-- > 0 && ts[j] <= ts[i];) lmin = std::min(lmin, ts[j]);
    for (std::size_t j = i + 1; j < ts.size() && ts[j] <= ts[i]; ++j)
      rmin = std::min(rmin, ts[j]);
    if (ts[i] - std::max(lmin, rmin) >= min_prominence) ++count;
  }
  return count;
}

void write_csv(const ScatteringSpectrum& s, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + path);
  std::fprintf(f, "energy_eV,T_coeff,R_coeff\n");
  for (std::size_t i = 0; i < s.energies.size(); ++i) {
    if (!s.propagating[i]) continue;
    std::fprintf(f, "%.12g,%.12g,%.12g\n", s.energies[i], s.transmission[i],
                 s.reflection[i]);
  }
  std::fclose(f);
}

} // namespace qd
