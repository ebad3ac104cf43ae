#pragma once

#include <Eigen/Core>

#include "aggflow/errors.hpp"

namespace aggflow {

// Uniform staggered (MAC) grid on [0,Lx]x[0,Ly]. Scalars live at cell
// centers; the velocity components live at the midpoints of the faces normal
// to them (u on x-faces, v on y-faces).
struct MacGrid {
  int nx;
  int ny;
  double Lx;
  double Ly;

  MacGrid(int nx_, int ny_, double Lx_, double Ly_);

  double hx() const { return Lx / nx; }
  double hy() const { return Ly / ny; }
  double vol() const { return hx() * hy(); }
  int ncells() const { return nx * ny; }
  int nu() const { return (nx + 1) * ny; }
  int nv() const { return nx * (ny + 1); }

  // Row-major with x fastest.
  int cell(int i, int j) const { return j * nx + i; }
  int uidx(int i, int j) const { return j * (nx + 1) + i; }  // i in [0, nx]
  int vidx(int i, int j) const { return j * nx + i; }        // j in [0, ny]

  bool operator==(const MacGrid& o) const = default;
};

struct ScalarField {
  MacGrid grid;
  Eigen::ArrayXd data;

  explicit ScalarField(const MacGrid& g, double fill = 0.0);

  double& operator()(int i, int j) { return data[grid.cell(i, j)]; }
  double operator()(int i, int j) const { return data[grid.cell(i, j)]; }
};

struct FaceVectorField {
  MacGrid grid;
  Eigen::ArrayXd u;  // size grid.nu()
  Eigen::ArrayXd v;  // size grid.nv()

  explicit FaceVectorField(const MacGrid& g);

  double& U(int i, int j) { return u[grid.uidx(i, j)]; }
  double U(int i, int j) const { return u[grid.uidx(i, j)]; }
  double& V(int i, int j) { return v[grid.vidx(i, j)]; }
  double V(int i, int j) const { return v[grid.vidx(i, j)]; }

  void zero_boundary_normal();
  double max_abs_boundary_normal() const;
};

void require_same_grid(const MacGrid& a, const MacGrid& b, const char* what);

// Volume-weighted inner products and norms (uniform weight hx*hy per cell or
// face; boundary-normal faces carry zero velocity, so the weight convention
// there never matters).
double dot_h(const ScalarField& a, const ScalarField& b);
double norm_h(const ScalarField& a);
double dot_h(const FaceVectorField& a, const FaceVectorField& b);
double norm_h(const FaceVectorField& a);

double cell_sum(const ScalarField& a);  // integral: sum of data * vol

}  // namespace aggflow
