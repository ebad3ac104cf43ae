#include "aggflow/field.hpp"

#include <cmath>
#include <string>

namespace aggflow {

MacGrid::MacGrid(int nx_, int ny_, double Lx_, double Ly_)
    : nx(nx_), ny(ny_), Lx(Lx_), Ly(Ly_) {
  if (nx < 4 || ny < 4) throw ValidationError("grid needs nx >= 4 and ny >= 4");
  if (!(Lx > 0.0) || !(Ly > 0.0)) throw ValidationError("grid extents must be > 0");
}

ScalarField::ScalarField(const MacGrid& g, double fill)
    : grid(g), data(Eigen::ArrayXd::Constant(g.ncells(), fill)) {}

FaceVectorField::FaceVectorField(const MacGrid& g)
    : grid(g),
      u(Eigen::ArrayXd::Zero(g.nu())),
      v(Eigen::ArrayXd::Zero(g.nv())) {}

void FaceVectorField::zero_boundary_normal() {
  for (int j = 0; j < grid.ny; ++j) {
    u[grid.uidx(0, j)] = 0.0;
    u[grid.uidx(grid.nx, j)] = 0.0;
  }
  for (int i = 0; i < grid.nx; ++i) {
    v[grid.vidx(i, 0)] = 0.0;
    v[grid.vidx(i, grid.ny)] = 0.0;
  }
}

double FaceVectorField::max_abs_boundary_normal() const {
  double m = 0.0;
  for (int j = 0; j < grid.ny; ++j) {
    m = std::max(m, std::abs(u[grid.uidx(0, j)]));
    m = std::max(m, std::abs(u[grid.uidx(grid.nx, j)]));
  }
  for (int i = 0; i < grid.nx; ++i) {
    m = std::max(m, std::abs(v[grid.vidx(i, 0)]));
    m = std::max(m, std::abs(v[grid.vidx(i, grid.ny)]));
  }
  return m;
}

void require_same_grid(const MacGrid& a, const MacGrid& b, const char* what) {
  if (!(a == b)) throw ShapeMismatch(std::string("grid mismatch in ") + what);
}

double dot_h(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid, b.grid, "dot_h(scalar)");
  return (a.data * b.data).sum() * a.grid.vol();
}

double norm_h(const ScalarField& a) { return std::sqrt(dot_h(a, a)); }

double dot_h(const FaceVectorField& a, const FaceVectorField& b) {
  require_same_grid(a.grid, b.grid, "dot_h(face)");
  return ((a.u * b.u).sum() + (a.v * b.v).sum()) * a.grid.vol();
}

double norm_h(const FaceVectorField& a) { return std::sqrt(dot_h(a, a)); }

double cell_sum(const ScalarField& a) { return a.data.sum() * a.grid.vol(); }

}  // namespace aggflow
