#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <Eigen/Dense>

#include "aggflow/grid_ops.hpp"

using namespace aggflow;
using doctest::Approx;

namespace {

std::mt19937_64 rng(12345);

double uni(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

ScalarField random_cells(const MacGrid& g, double lo, double hi) {
  ScalarField f(g);
  for (int c = 0; c < g.ncells(); ++c) f.data[c] = uni(lo, hi);
  return f;
}

FaceVectorField random_noslip(const MacGrid& g, double amp) {
  FaceVectorField w(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i) w.U(i, j) = uni(-amp, amp);
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) w.V(i, j) = uni(-amp, amp);
  return w;
}

// Dense matrix over interior faces from local triplets.
Eigen::MatrixXd dense_from(const std::vector<Eigen::Triplet<double>>& trip,
                           int n) {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (const auto& t : trip) M(t.row(), t.col()) += t.value();
  return M;
}

Eigen::VectorXd interior_vec(const FaceVectorField& w) {
  const MacGrid& g = w.grid;
  Eigen::VectorXd x(interior_u_count(g) + interior_v_count(g));
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i) x[interior_u_index(g, i, j)] = w.U(i, j);
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) x[interior_v_index(g, i, j)] = w.V(i, j);
  return x;
}

}  // namespace

TEST_CASE("divergence by hand") {
  MacGrid g(4, 4, 1.0, 1.0);  // hx = hy = 0.25
  FaceVectorField w(g);
  w.U(1, 0) = 3.0;
  w.V(0, 1) = -2.0;
  ScalarField d = div_faces(w);
  CHECK(d(0, 0) == Approx((3.0 - 0.0) / 0.25 + (-2.0 - 0.0) / 0.25).epsilon(1e-15));
  CHECK(d(1, 0) == Approx((0.0 - 3.0) / 0.25).epsilon(1e-15));
  CHECK(d(0, 1) == Approx((0.0 - (-2.0)) / 0.25).epsilon(1e-15));
  CHECK(d(1, 1) == 0.0);
  CHECK(d(3, 3) == 0.0);
}

TEST_CASE("gradient by hand") {
  MacGrid g(4, 4, 1.0, 1.0);
  ScalarField p(g);
  p(0, 0) = 1.0;
  p(1, 0) = 2.0;
  p(0, 1) = 3.0;
  p(1, 1) = 5.0;
  FaceVectorField gp = grad_cells(p);
  CHECK(gp.U(1, 0) == Approx(4.0).epsilon(1e-15));    // (2-1)/0.25
  CHECK(gp.U(1, 1) == Approx(8.0).epsilon(1e-15));    // (5-3)/0.25
  CHECK(gp.U(2, 0) == Approx(-8.0).epsilon(1e-15));   // (0-2)/0.25
  CHECK(gp.V(0, 1) == Approx(8.0).epsilon(1e-15));    // (3-1)/0.25
  CHECK(gp.V(1, 1) == Approx(12.0).epsilon(1e-15));   // (5-2)/0.25
  CHECK(gp.U(0, 0) == 0.0);
  CHECK(gp.U(4, 1) == 0.0);
  CHECK(gp.V(0, 0) == 0.0);
  CHECK(gp.V(1, 4) == 0.0);
}

TEST_CASE("div and -grad are adjoint") {
  MacGrid g(7, 5, 1.4, 0.9);
  for (int it = 0; it < 20; ++it) {
    FaceVectorField w = random_noslip(g, 2.0);
    ScalarField p = random_cells(g, -1.0, 1.0);
    const double lhs = dot_h(div_faces(w), p);
    const double rhs = -dot_h(w, grad_cells(p));
    CHECK(lhs == Approx(rhs).epsilon(1e-13));
  }
}

TEST_CASE("laplacian stencil and matrix agree with the operator") {
  MacGrid g(5, 4, 1.0, 0.8);
  ScalarField delta(g);
  delta(2, 1) = 1.0;
  ScalarField L = unit_laplacian(delta);
  const double ihx2 = 1.0 / (g.hx() * g.hx());
  const double ihy2 = 1.0 / (g.hy() * g.hy());
  CHECK(L(2, 1) == Approx(-2.0 * ihx2 - 2.0 * ihy2).epsilon(1e-14));
  CHECK(L(1, 1) == Approx(ihx2).epsilon(1e-14));
  CHECK(L(3, 1) == Approx(ihx2).epsilon(1e-14));
  CHECK(L(2, 0) == Approx(ihy2).epsilon(1e-14));
  CHECK(L(2, 2) == Approx(ihy2).epsilon(1e-14));
  CHECK(L(0, 0) == 0.0);

  ScalarField f = random_cells(g, -2.0, 2.0);
  Eigen::VectorXd via_matrix = unit_laplacian_matrix(g) * f.data.matrix();
  ScalarField direct = unit_laplacian(f);
  CHECK((via_matrix.array() - direct.data).abs().maxCoeff() <= 1e-13);

  FaceVectorField coeff(g);
  coeff.u.setConstant(1.0);
  coeff.v.setConstant(1.0);
  ScalarField weighted = laplace_neumann(f, coeff);
  CHECK((weighted.data - direct.data).abs().maxCoeff() <= 1e-13);

  for (int f2 = 0; f2 < g.nu(); ++f2) coeff.u[f2] = uni(0.2, 2.0);
  for (int f2 = 0; f2 < g.nv(); ++f2) coeff.v[f2] = uni(0.2, 2.0);
  Eigen::VectorXd wm = laplace_neumann_matrix(g, coeff) * f.data.matrix();
  ScalarField wd = laplace_neumann(f, coeff);
  CHECK((wm.array() - wd.data).abs().maxCoeff() <= 1e-13);
  CHECK(std::abs(cell_sum(wd)) <= 1e-13 * wd.data.abs().sum() * g.vol());
}

TEST_CASE("interpolations") {
  MacGrid g(4, 4, 1.0, 1.0);
  ScalarField c(g);
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) c(i, j) = 10.0 * i + j;
  FaceVectorField f = interp_center_to_face(c);
  CHECK(f.U(1, 0) == Approx(5.0).epsilon(1e-15));   // avg of 0 and 10
  CHECK(f.U(0, 2) == Approx(2.0).epsilon(1e-15));   // boundary copies cell
  CHECK(f.V(1, 1) == Approx(10.5).epsilon(1e-15));  // avg of 10 and 11
  CHECK(f.V(2, 4) == Approx(23.0).epsilon(1e-15));

  FaceVectorField w(g);
  w.U(1, 0) = 2.0;
  w.U(2, 0) = 4.0;
  w.V(1, 1) = -1.0;
  ScalarField xc(g), yc(g);
  interp_face_to_center(w, xc, yc);
  CHECK(xc(1, 0) == Approx(3.0).epsilon(1e-15));
  CHECK(yc(1, 0) == Approx(-0.5).epsilon(1e-15));
  CHECK(yc(1, 1) == Approx(-0.5).epsilon(1e-15));

  ScalarField gx(g), gy(g);
  ScalarField lin(g);
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) lin(i, j) = 3.0 * (i + 0.5) * g.hx();
  cell_gradient(lin, gx, gy);
  CHECK(gx(1, 1) == Approx(3.0).epsilon(1e-14));  // interior: both faces live
  CHECK(gx(0, 1) == Approx(1.5).epsilon(1e-14));  // wall face gradient is zero
  CHECK(gy.data.abs().maxCoeff() == 0.0);
}

TEST_CASE("kinetic density regroups to face sums") {
  MacGrid g(6, 5, 1.0, 1.0);
  for (int it = 0; it < 10; ++it) {
    FaceVectorField v = random_noslip(g, 1.5);
    ScalarField rho = random_cells(g, 0.5, 3.0);
    FaceVectorField rf = interp_center_to_face(rho);
    const double a = dot_h(rho, cell_kinetic(v));
    const double b =
        0.5 * ((rf.u * v.u.square()).sum() + (rf.v * v.v.square()).sum()) * g.vol();
    CHECK(a == Approx(b).epsilon(1e-13));
  }
}

TEST_CASE("advection pairs with the capillary force") {
  MacGrid g(9, 6, 1.1, 0.7);
  for (int it = 0; it < 20; ++it) {
    FaceVectorField w = random_noslip(g, 1.0);
    ScalarField phi = random_cells(g, -0.9, 0.9);
    ScalarField mu = random_cells(g, -2.0, 2.0);
    CHECK(dot_h(advect_phi(w, phi), mu) ==
          Approx(dot_h(capillary_force(mu, phi), w)).epsilon(1e-13));
  }
  ScalarField c(g, 0.4);
  FaceVectorField w = random_noslip(g, 1.0);
  CHECK(advect_phi(w, c).data.abs().maxCoeff() == 0.0);
}

TEST_CASE("skew transport does no work and matches its matrix") {
  MacGrid g(6, 7, 1.0, 1.3);
  const int n = interior_u_count(g) + interior_v_count(g);
  for (int it = 0; it < 10; ++it) {
    FaceVectorField w = random_noslip(g, 2.0);
    FaceVectorField z = random_noslip(g, 1.0);
    FaceVectorField out = skew_transport(w, z);
    CHECK(std::abs(dot_h(out, z)) <=
          1e-13 * (norm_h(out) * norm_h(z) + 1e-300));
    CHECK(out.max_abs_boundary_normal() == 0.0);

    std::vector<Eigen::Triplet<double>> trip;
    skew_transport_triplets(w, trip);
    Eigen::MatrixXd T = dense_from(trip, n);
    Eigen::VectorXd direct = interior_vec(out);
    Eigen::VectorXd via = T * interior_vec(z);
    CHECK((via - direct).cwiseAbs().maxCoeff() <=
          1e-13 * (direct.cwiseAbs().maxCoeff() + 1.0));
    CHECK((T + T.transpose()).cwiseAbs().maxCoeff() <=
          1e-14 * T.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("viscous operator matches the dissipation form and its matrix") {
  MacGrid g(6, 6, 1.0, 1.0);
  const int n = interior_u_count(g) + interior_v_count(g);
  for (int it = 0; it < 10; ++it) {
    FaceVectorField v = random_noslip(g, 1.0);
    ScalarField eta = random_cells(g, 0.2, 2.5);
    const double diss = strain_dissipation(v, eta);
    CHECK(diss >= 0.0);
    CHECK(dot_h(viscous_apply(v, eta), v) == Approx(diss).epsilon(1e-13));

    std::vector<Eigen::Triplet<double>> trip;
    viscous_triplets(g, eta, trip);
    Eigen::MatrixXd V = dense_from(trip, n);
    Eigen::VectorXd via = V * interior_vec(v);
    Eigen::VectorXd direct = interior_vec(viscous_apply(v, eta));
    CHECK((via - direct).cwiseAbs().maxCoeff() <=
          1e-13 * (direct.cwiseAbs().maxCoeff() + 1.0));
  }
}

TEST_CASE("grid bookkeeping and shape checks") {
  MacGrid g(5, 4, 1.0, 1.0);
  CHECK(g.ncells() == 20);
  CHECK(g.nu() == 24);
  CHECK(g.nv() == 25);
  CHECK(interior_u_count(g) == 16);
  CHECK(interior_v_count(g) == 15);
  CHECK(interior_u_index(g, 1, 0) == 0);
  CHECK(interior_v_index(g, 0, 1) == 16);

  ScalarField ones(g, 1.0);
  CHECK(dot_h(ones, ones) == Approx(1.0).epsilon(1e-15));  // |Omega| = 1

  MacGrid g2(4, 4, 1.0, 1.0);
  ScalarField other(g2);
  CHECK_THROWS_AS(dot_h(ones, other), ShapeMismatch);
  CHECK_THROWS_AS(MacGrid(3, 8, 1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(MacGrid(8, 8, -1.0, 1.0), ValidationError);
}
