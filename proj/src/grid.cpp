#include "qdotlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "qdotlab/errors.hpp"

namespace qd {

std::string quantity_name(Quantity q) {
  switch (q) {
    case Quantity::potential_v: return "potential_V";
    case Quantity::conduction_band_ev: return "E_c_eV";
    case Quantity::charge_cm3: return "charge_cm3";
    case Quantity::wavefunction_density: return "psi_density";
  }
  return "unknown";
}

Field2D Grid2D::make_field(Quantity q, double fill) const {
  Field2D f;
  f.nx = nx();
  f.ny = ny();
  f.quantity = q;
  f.values.assign(std::size_t(f.nx) * f.ny, fill);
  return f;
}

double Grid2D::integrate(const Field2D& f) const {
  double total = 0.0;
  for (int j = 0; j + 1 < ny(); ++j) {
    const double hy = y_nodes[j + 1] - y_nodes[j];
    for (int i = 0; i + 1 < nx(); ++i) {
      const double hx = x_nodes[i + 1] - x_nodes[i];
      const double cell_mean = 0.25 * (f.at(i, j) + f.at(i + 1, j) +
                                       f.at(i, j + 1) + f.at(i + 1, j + 1));
      total += cell_mean * hx * hy;
    }
  }
  return total;
}

namespace {

std::vector<double> collect_cuts(const RegionMap& map, bool x_axis) {
  std::set<double> cuts;
  for (const auto& r : map.regions) {
    cuts.insert(x_axis ? r.x0 : r.y0);
    cuts.insert(x_axis ? r.x1 : r.y1);
  }
  std::vector<double> out(cuts.begin(), cuts.end());
  // merge cuts closer than 1e-9 nm to keep intervals well defined
  std::vector<double> merged;
  for (double c : out)
    if (merged.empty() || c - merged.back() > 1e-9) merged.push_back(c);
  return merged;
}

void subdivide(const std::vector<double>& cuts, double target,
               std::vector<double>& nodes) {
  nodes.clear();
  nodes.push_back(cuts.front());
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double len = cuts[k + 1] - cuts[k];
    const int n = std::max(1, int(std::ceil(len / target - 1e-12)));
    for (int i = 1; i <= n; ++i) nodes.push_back(cuts[k] + len * i / n);
  }
}

Material material_at(const RegionMap& map, double x, double y) {
  // later regions paint over earlier ones so metals/gaps win inside the stack
  Material m = Material::spacer_oxide;
  bool found = false;
  for (const auto& r : map.regions) {
    if (x >= r.x0 - 1e-9 && x <= r.x1 + 1e-9 && y >= r.y0 - 1e-9 &&
        y <= r.y1 + 1e-9) {
      m = r.material;
      found = true;
    }
  }
  if (!found) throw InvalidGeometry("region map does not cover the domain");
  return m;
}

Grid2D assemble(const RegionMap& map, const std::vector<double>& xn,
                const std::vector<double>& yn) {
  Grid2D g;
  g.x_nodes = xn;
  g.y_nodes = yn;
  const int ncx = g.nx() - 1, ncy = g.ny() - 1;
  g.material_of_cell.resize(std::size_t(ncx) * ncy);
  g.permittivity_of_cell.resize(std::size_t(ncx) * ncy);
  for (int j = 0; j < ncy; ++j) {
    const double yc = 0.5 * (yn[j] + yn[j + 1]);
    for (int i = 0; i < ncx; ++i) {
      const double xc = 0.5 * (xn[i] + xn[i + 1]);
      const Material m = material_at(map, xc, yc);
      g.material_of_cell[std::size_t(j) * ncx + i] = m;
      g.permittivity_of_cell[std::size_t(j) * ncx + i] = permittivity_of(m);
    }
  }
  const auto it = std::find_if(yn.begin(), yn.end(), [&](double y) {
    return std::abs(y - map.interface_y) < 1e-9;
  });
  g.interface_row = it == yn.end() ? -1 : int(it - yn.begin());
  return g;
}

} // namespace

Grid2D build_grid(const RegionMap& map, double target_spacing_nm) {
  if (!(target_spacing_nm > 0.0))
    throw SpacingTooCoarse("target spacing must be > 0");
  for (const auto& r : map.regions) {
    const double tx = r.x1 - r.x0, ty = r.y1 - r.y0;
    if (std::min(tx, ty) / target_spacing_nm < 2.0 - 1e-12) {
      throw SpacingTooCoarse("region thinner than two cells at requested spacing");
    }
  }
  std::vector<double> xn, yn;
  subdivide(collect_cuts(map, true), target_spacing_nm, xn);
  subdivide(collect_cuts(map, false), target_spacing_nm, yn);
  return assemble(map, xn, yn);
}

Grid2D build_graded_grid(const RegionMap& map, const GridSpacing& s) {
  const auto ycuts = collect_cuts(map, false);
  std::vector<double> yn;
  yn.push_back(ycuts.front());
  for (std::size_t k = 0; k + 1 < ycuts.size(); ++k) {
    const double a = ycuts[k], b = ycuts[k + 1];
    // local cap: fine inside the interface band, graded outside it
    double y = a;
    while (y < b - 1e-9) {
      const double d = std::abs(y - map.interface_y);
      double h = d <= s.fine_band ? s.fine
                                  : std::min(s.coarse, s.fine + 0.6 * (d - s.fine_band));
      h = std::min(h, b - y);
      // stretch the final step instead of leaving a sliver
      if (b - y - h < 0.25 * h) h = b - y;
      y += h;
      yn.push_back(y);
    }
  }
  std::vector<double> xn;
  subdivide(collect_cuts(map, true), s.lateral, xn);
  return assemble(map, xn, yn);
}

Profile1D interface_slice(const Field2D& field, const Grid2D& grid) {
  Profile1D p;
  p.quantity = field.quantity;
  const int row = grid.interface_row;
  p.x = grid.x_nodes;
  p.values.resize(p.x.size());
  for (int i = 0; i < grid.nx(); ++i) p.values[i] = field.at(i, row);
  return p;
}

void write_csv(const Field2D& field, const Grid2D& grid, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + path);
  std::fprintf(f, "x_nm,y_nm,value,quantity\n");
  for (int j = 0; j < field.ny; ++j)
    for (int i = 0; i < field.nx; ++i)
      std::fprintf(f, "%.12g,%.12g,%.12g,%s\n", grid.x_nodes[i], grid.y_nodes[j],
                   field.at(i, j), quantity_name(field.quantity).c_str());
  std::fclose(f);
}

void write_csv(const Profile1D& profile, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + path);
  std::fprintf(f, "x_nm,value,quantity\n");
  for (std::size_t i = 0; i < profile.x.size(); ++i)
    std::fprintf(f, "%.12g,%.12g,%s\n", profile.x[i], profile.values[i],
                 quantity_name(profile.quantity).c_str());
  std::fclose(f);
}

} // namespace qd
