#include <doctest.h>

#include <cmath>

#include "qdotlab/grid.hpp"

using namespace qd;

TEST_CASE("boundary-fitted grid honors the spacing cap") {
  DeviceSpec d;
  const RegionMap map = build_device(d);
  const Grid2D g = build_grid(map, 0.5);

  int si_cells = 0;
  for (std::size_t j = 0; j + 1 < g.y_nodes.size(); ++j)
    if (g.y_nodes[j] >= -1e-9 && g.y_nodes[j + 1] <= 15.0 + 1e-9) ++si_cells;
  CHECK(si_cells >= 30);

  for (std::size_t i = 0; i + 1 < g.x_nodes.size(); ++i)
    CHECK(g.x_nodes[i + 1] - g.x_nodes[i] <= 0.5 + 1e-9);
  for (std::size_t j = 0; j + 1 < g.y_nodes.size(); ++j)
    CHECK(g.y_nodes[j + 1] - g.y_nodes[j] <= 0.5 + 1e-9);

  for (double eps : g.permittivity_of_cell)
    CHECK((eps == eps_si || eps == eps_ox));

  CHECK(g.interface_row >= 0);
  CHECK(g.y_nodes[g.interface_row] == doctest::Approx(15.0));
}

TEST_CASE("too coarse a target is rejected") {
  DeviceSpec d;  // t_ox = 3 nm
  const RegionMap map = build_device(d);
  CHECK_THROWS_AS(build_grid(map, 10.0), SpacingTooCoarse);
}

TEST_CASE("grids depend on geometry only") {
  DeviceSpec a, b;
  b.v_pg = 0.123;
  b.v_bg = 0.9;
  const Grid2D ga = build_grid(build_device(a), 1.0);
  const Grid2D gb = build_grid(build_device(b), 1.0);
  REQUIRE(ga.x_nodes == gb.x_nodes);
  REQUIRE(ga.y_nodes == gb.y_nodes);
  CHECK(ga.material_of_cell == gb.material_of_cell);
}

TEST_CASE("interface slice extraction") {
  DeviceSpec d;
  const Grid2D g = build_graded_grid(build_device(d));

  SUBCASE("constant field gives a constant profile") {
    Field2D f = g.make_field(Quantity::potential_v, 0.7);
    const Profile1D p = interface_slice(f, g);
    for (double v : p.values) CHECK(v == doctest::Approx(0.7));
    CHECK(p.x.size() == std::size_t(g.nx()));
  }

  SUBCASE("linear-in-y field evaluates at the interface height") {
    Field2D f = g.make_field(Quantity::potential_v);
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i)
        f.at(i, j) = 2.0 * g.y_nodes[j] - 1.0;
    const Profile1D p = interface_slice(f, g);
    for (double v : p.values) CHECK(v == doctest::Approx(2.0 * 15.0 - 1.0));
  }

  SUBCASE("slicing is linear in the field") {
    Field2D a = g.make_field(Quantity::potential_v);
    Field2D b = g.make_field(Quantity::potential_v);
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        a.at(i, j) = std::sin(0.1 * i) + 0.01 * j;
        b.at(i, j) = std::cos(0.05 * i * j);
      }
    Field2D sum = g.make_field(Quantity::potential_v);
    for (std::size_t n = 0; n < sum.values.size(); ++n)
      sum.values[n] = a.values[n] + b.values[n];
    const Profile1D pa = interface_slice(a, g), pb = interface_slice(b, g),
                    ps = interface_slice(sum, g);
    for (std::size_t i = 0; i < ps.values.size(); ++i)
      CHECK(ps.values[i] == doctest::Approx(pa.values[i] + pb.values[i]));
  }
}

TEST_CASE("nodal quadrature is exact on linear fields") {
  DeviceSpec d;
  const RegionMap map = build_device(d);
  const Grid2D g = build_grid(map, 1.0);
  Field2D f = g.make_field(Quantity::potential_v);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      f.at(i, j) = 3.0 + 2.0 * g.x_nodes[i] - 0.5 * g.y_nodes[j];
  const double lx = map.width_nm, ly = map.height_nm;
  const double exact = 3.0 * lx * ly + 2.0 * (lx * lx / 2) * ly -
                       0.5 * lx * (ly * ly / 2);
  CHECK(g.integrate(f) == doctest::Approx(exact).epsilon(1e-13));
}
