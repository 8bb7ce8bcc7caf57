#pragma once

#include <string>
#include <vector>

#include "qdotlab/device.hpp"

namespace qd {

enum class Quantity {
  potential_v,
  conduction_band_ev,
  charge_cm3,
  wavefunction_density,
};

std::string quantity_name(Quantity q);

struct Profile1D {
  std::vector<double> x;
  std::vector<double> values;
  Quantity quantity = Quantity::potential_v;
};

struct Grid2D;

struct Field2D {
  std::vector<double> values;  // row-major, index iy*nx + ix
  int nx = 0, ny = 0;
  Quantity quantity = Quantity::potential_v;

  double& at(int ix, int iy) { return values[std::size_t(iy) * nx + ix]; }
  double at(int ix, int iy) const { return values[std::size_t(iy) * nx + ix]; }
};

// Boundary-fitted rectilinear tensor grid. Cell (i,j) spans
// [x_nodes[i], x_nodes[i+1]] x [y_nodes[j], y_nodes[j+1]].
struct Grid2D {
  std::vector<double> x_nodes;
  std::vector<double> y_nodes;
  std::vector<Material> material_of_cell;   // (nx-1)*(ny-1), row-major by y
  std::vector<double> permittivity_of_cell;
  int interface_row = -1;  // node row at the oxide/semiconductor plane

  int nx() const { return int(x_nodes.size()); }
  int ny() const { return int(y_nodes.size()); }
  Material cell_material(int i, int j) const {
    return material_of_cell[std::size_t(j) * (nx() - 1) + i];
  }
  double cell_eps(int i, int j) const {
    return permittivity_of_cell[std::size_t(j) * (nx() - 1) + i];
  }
  Field2D make_field(Quantity q, double fill = 0.0) const;
  double integrate(const Field2D& f) const;  // nodal trapezoid quadrature
};

Grid2D build_grid(const RegionMap& map, double target_spacing_nm);

// Non-uniform spacing schedule: fine near the oxide/Si interface, graded
// coarser away from it. Used by the default solve pipeline.
struct GridSpacing {
  double fine = 0.5;          // nm, within |y - y_interface| <= fine_band
  double fine_band = 3.0;     // nm
  double coarse = 2.5;        // nm cap away from the interface
  double lateral = 0.5;       // nm in x, everywhere
};
Grid2D build_graded_grid(const RegionMap& map, const GridSpacing& spacing = {});

Profile1D interface_slice(const Field2D& field, const Grid2D& grid);

void write_csv(const Field2D& field, const Grid2D& grid, const std::string& path);
void write_csv(const Profile1D& profile, const std::string& path);

} // namespace qd
