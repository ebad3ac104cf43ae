#pragma once

#include <vector>

#include <Eigen/Sparse>

#include "aggflow/field.hpp"

namespace aggflow {

// Discrete operators on the staggered grid. Conventions throughout:
//  - velocity fields satisfy no-slip, i.e. boundary-normal faces are zero and
//    the tangential wall value is zero (entering only through the viscous
//    ghost reflection);
//  - cell fields satisfy homogeneous Neumann conditions: the gradient on a
//    boundary face is zero.
// With the uniform volume weight these choices make div and -grad exact
// adjoints of each other, which the solvers rely on.

// (u_E - u_W)/hx + (v_N - v_S)/hy at every cell.
ScalarField div_faces(const FaceVectorField& w);

// Two-point difference gradient at faces; boundary faces get zero.
FaceVectorField grad_cells(const ScalarField& c);

// div(grad c) with the Neumann convention (5-point stencil).
ScalarField unit_laplacian(const ScalarField& c);

// div(coeff grad c); coeff sampled on faces, boundary faces unused. Interior
// face coefficients must be strictly positive.
ScalarField laplace_neumann(const ScalarField& c, const FaceVectorField& coeff);

// Matrix forms of the two operators above (cells x cells).
Eigen::SparseMatrix<double> unit_laplacian_matrix(const MacGrid& g);
Eigen::SparseMatrix<double> laplace_neumann_matrix(const MacGrid& g,
                                                  const FaceVectorField& coeff);

// Two-point average of a cell field onto all faces; boundary faces copy the
// adjacent cell value.
FaceVectorField interp_center_to_face(const ScalarField& c);

// Component-wise two-point average of face values onto cell centers.
void interp_face_to_center(const FaceVectorField& w, ScalarField& xc, ScalarField& yc);

// Cell-centered gradient: average of the two adjacent face gradients per
// direction (boundary face gradients are zero).
void cell_gradient(const ScalarField& c, ScalarField& gx, ScalarField& gy);

// (u_W^2 + u_E^2)/4 + (v_S^2 + v_N^2)/4: a cell kinetic energy density whose
// pairing with cell fields regroups exactly into face-wise |v|^2/2 sums.
ScalarField cell_kinetic(const FaceVectorField& v);

// Advection of a cell field in the form dual to capillary_force:
//   sum over the four faces of 1/2 * (normal velocity * face gradient).
ScalarField advect_phi(const FaceVectorField& v, const ScalarField& phi);

// mu averaged to faces times grad_h phi. For any no-slip w,
//   dot_h(advect_phi(w, phi), mu) == dot_h(capillary_force(mu, phi), w).
FaceVectorField capillary_force(const ScalarField& mu, const ScalarField& phi);

// Skew-symmetric transport of a no-slip velocity z by a face flux w:
// centered flux differences plus the -1/2 div(w) z correction built from the
// same interpolated values, so dot_h(out, z) == 0 for every w. Boundary rows
// are zero.
FaceVectorField skew_transport(const FaceVectorField& w, const FaceVectorField& z);

// Named wrappers: convection by a mass flux and transport by a diffusive
// relative flux are the same skew form.
inline FaceVectorField skew_convection(const FaceVectorField& w, const FaceVectorField& z) {
  return skew_transport(w, z);
}
inline FaceVectorField skew_flux_term(const FaceVectorField& J, const FaceVectorField& z) {
  return skew_transport(J, z);
}

// Triplets of the matrix T with (T z)|interior = skew_transport(w, z), columns
// over interior faces only (boundary faces of z are zero). Row/column indices
// are local: u-interior faces first, then v-interior faces.
void skew_transport_triplets(const FaceVectorField& w,
                             std::vector<Eigen::Triplet<double>>& out);

// Quadratic dissipation form of the rate-of-strain:
//   sum_cells 2 eta (dx u)^2 + 2 eta (dy v)^2  +  sum_corners eta_X (dy u + dx v)^2
// (volume-weighted; corner viscosity averages the adjacent cells, walls enter
// through the no-slip ghost reflection).
double strain_dissipation(const FaceVectorField& v, const ScalarField& eta);

// The self-adjoint operator V with dot_h(viscous_apply(v), v) ==
// strain_dissipation(v, eta) for no-slip v. Boundary rows are zero.
FaceVectorField viscous_apply(const FaceVectorField& v, const ScalarField& eta);

// Matrix triplets for viscous_apply over interior faces (same local index
// convention as skew_transport_triplets).
void viscous_triplets(const MacGrid& g, const ScalarField& eta,
                      std::vector<Eigen::Triplet<double>>& out);

// Local interior-face numbering shared by the triplet builders and the
// momentum assembly: u(i,j), i in [1,nx-1] => (i-1) + j*(nx-1); then
// v(i,j), j in [1,ny-1] => nui + i + (j-1)*nx.
int interior_u_index(const MacGrid& g, int i, int j);
int interior_v_index(const MacGrid& g, int i, int j);
int interior_u_count(const MacGrid& g);
int interior_v_count(const MacGrid& g);

}  // namespace aggflow
