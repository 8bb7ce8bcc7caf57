#include <doctest.h>

#include <cmath>

#include "qdotlab/coupling.hpp"
#include "qdotlab/scloop.hpp"

using namespace qd;

TEST_CASE("temperature ladder validation") {
  ContinuationSchedule s;
  s.temperatures_k = {300, 200, 100, 50, 20, 10};
  s.validate();
  s.temperatures_k = {100, 200};
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s.temperatures_k = {};
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = default_schedule(10.0);
  CHECK(s.temperatures_k.back() == 10.0);
  CHECK(s.temperatures_k.front() == 300.0);
  s = default_schedule(250.0);
  CHECK(s.temperatures_k == std::vector<double>{300.0, 250.0});
}

TEST_CASE("initial wavefunction is a normalized mid-channel Gaussian") {
  DeviceSpec d;
  const Grid2D g = build_graded_grid(build_device(d));
  const Profile1D psi = initial_wavefunction(g);

  std::size_t peak = 0;
  for (std::size_t i = 0; i < psi.values.size(); ++i)
    if (psi.values[i] > psi.values[peak]) peak = i;
  CHECK(psi.x[peak] == doctest::Approx(d.total_length() / 2).epsilon(0.01));

  std::vector<double> sq(psi.values.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = psi.values[i] * psi.values[i];
  CHECK(trapz(psi.x, sq) == doctest::Approx(1.0).epsilon(1e-8));

  // pure sampling: refining the grid reproduces the same continuum values
  GridSpacing fine;
  fine.lateral = 0.25;
  const Grid2D g2 = build_graded_grid(build_device(d), fine);
  const Profile1D psi2 = initial_wavefunction(g2);
  for (std::size_t i = 0; i < psi.x.size(); ++i) {
    for (std::size_t j = 0; j < psi2.x.size(); ++j) {
      if (std::abs(psi.x[i] - psi2.x[j]) < 1e-12) {
        CHECK(std::abs(psi.values[i] - psi2.values[j]) < 1e-12);
        break;
      }
    }
  }
}

TEST_CASE("cold starts below 200 K are rejected") {
  DeviceSpec d;
  CHECK_THROWS_AS(sc_iterate_at_T(d, nullptr, 10.0, SolverOptions{}),
                  ColdStartAtCryo);
}

TEST_CASE("flat-band device sits at the zero fixed point") {
  DeviceSpec d;
  d.v_pg = 0.0;
  d.v_bg = 0.0;
  d.workfunction_offset_ev = si_gap_ev / 2;  // gate potential exactly 0
  d.n_sd_cm3 = 0.0;
  d.temperature_k = 300.0;
  const ConvergedState st = sc_iterate_at_T(d, nullptr, 300.0, SolverOptions{});
  CHECK(st.iterations <= 3);
  for (double v : st.phi.values) CHECK(std::abs(v) < 1e-9);
}

TEST_CASE("degenerate ladder equals a single stage") {
  DeviceSpec d;
  d.temperature_k = 300.0;
  SolverOptions opt;
  ContinuationSchedule s;
  s.temperatures_k = {300.0};
  const ConvergedState a = continuation_solve(d, s, opt);
  const ConvergedState b = sc_iterate_at_T(d, nullptr, 300.0, opt);
  REQUIRE(a.history.size() == b.history.size());
  for (std::size_t i = 0; i < a.phi.values.size(); ++i)
    CHECK(a.phi.values[i] == b.phi.values[i]);
}

TEST_CASE("determinism: identical runs give identical histories") {
  DeviceSpec d;
  d.temperature_k = 300.0;
  SolverOptions opt;
  const ConvergedState a = sc_iterate_at_T(d, nullptr, 300.0, opt);
  const ConvergedState b = sc_iterate_at_T(d, nullptr, 300.0, opt);
  REQUIRE(a.history.size() == b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i) {
    CHECK(a.history[i].psi_norm_metric == b.history[i].psi_norm_metric);
    CHECK(a.history[i].dphi_inf == b.history[i].dphi_inf);
  }
  for (std::size_t i = 0; i < a.phi.values.size(); ++i)
    CHECK(a.phi.values[i] == b.phi.values[i]);
}

TEST_CASE("default device converges down the ladder to 10 K") {
  DeviceSpec d;
  SolverOptions opt;
  const ConvergedState st = continuation_solve(d, 10.0, opt);
  CHECK(st.temperature_k == 10.0);
  CHECK(st.iterations <= opt.max_iterations);
  REQUIRE(!st.history.empty());
  CHECK(st.history.back().dphi_inf < opt.tol_sc);
  for (const auto& h : st.history) {
    CHECK(std::isfinite(h.psi_norm_metric));
    CHECK(std::isfinite(h.dphi_inf));
  }

  SUBCASE("gate nodes hold their Dirichlet values bit-exactly") {
    const RegionMap map = build_device(d);
    for (const auto& r : map.regions) {
      if (!is_metal(r.material)) continue;
      for (int j = 0; j < st.grid.ny(); ++j)
        for (int i = 0; i < st.grid.nx(); ++i) {
          const double x = st.grid.x_nodes[i], y = st.grid.y_nodes[j];
          if (x >= r.x0 - 1e-9 && x <= r.x1 + 1e-9 && y >= r.y0 - 1e-9 &&
              y <= r.y1 + 1e-9)
            CHECK(st.phi.at(i, j) == r.bc_volts);
        }
    }
  }

  SUBCASE("interface band is a double well with minima under the plungers") {
    const auto w = d.plunger_windows();
    double min_left = 1e300, min_right = 1e300, barrier = -1e300;
    for (std::size_t i = 0; i < st.interface_band.x.size(); ++i) {
      const double x = st.interface_band.x[i], v = st.interface_band.values[i];
      if (x >= w[0].first && x <= w[0].second) min_left = std::min(min_left, v);
      if (x >= w[1].first && x <= w[1].second) min_right = std::min(min_right, v);
      if (x > w[0].second && x < w[1].first) barrier = std::max(barrier, v);
    }
    CHECK(min_left < barrier);
    CHECK(min_right < barrier);
    CHECK(min_left == doctest::Approx(min_right).epsilon(0.02));
  }

  SUBCASE("one extra sweep moves the band by less than twice the tolerance") {
    const ConvergedState again = sc_iterate_at_T(d, &st, 10.0, opt);
    double dband = 0.0;
    for (std::size_t i = 0; i < st.interface_band.values.size(); ++i)
      dband = std::max(dband, std::abs(again.interface_band.values[i] -
                                       st.interface_band.values[i]));
    CHECK(dband < 2.0 * opt.tol_sc);
  }

  SUBCASE("warm start needs fewer iterations than a 200 K restart") {
    int direct_total = 0;
    try {
      ContinuationSchedule s;
      s.temperatures_k = {200.0, 10.0};
      const ConvergedState direct = continuation_solve(d, s, opt);
      (void)direct;
      direct_total = 0;
      ConvergedState stage200 = sc_iterate_at_T(d, nullptr, 200.0, opt);
      direct_total = stage200.iterations;
      const ConvergedState stage10 = sc_iterate_at_T(d, &stage200, 10.0, opt);
      direct_total += stage10.iterations;
    } catch (const MaxIterExceeded&) {
      direct_total = 100000;  // the short ladder failed outright
    }
    CHECK(st.iterations < direct_total);
  }
}

TEST_CASE("iteration cap reports history") {
  DeviceSpec d;
  d.temperature_k = 300.0;
  SolverOptions opt;
  opt.max_iterations = 2;
  CHECK_THROWS_AS(sc_iterate_at_T(d, nullptr, 300.0, opt), MaxIterExceeded);
}
