#include "aggflow/ch_solver.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "aggflow/grid_ops.hpp"

namespace aggflow {

namespace {

constexpr double kAdmissibleBound = 1.0 - 1e-10;

ScalarField coeff_at_cells(const CoefficientProfile& prof, const ScalarField& phi) {
  ScalarField out(phi.grid);
  for (int c = 0; c < phi.grid.ncells(); ++c) out.data[c] = prof.value(phi.data[c]);
  return out;
}

// J = I/h - L_m * dmu/dphi with
//   dmu/dphi = diag(dF*G + F*(max(psi0~'', 0) - kappa~/2)*dA)
//              - diag(F) * Lap * diag(dA).
// Negative curvature of the convex part is clipped at zero; by the
// convex-splitting construction it is nonnegative on the admissible range, so
// the clip only guards the extrapolated table ends.
Eigen::SparseMatrix<double> jacobian_impl(const ChStepProblem& p, const ScalarField& phi,
                                          const Eigen::SparseMatrix<double>& L_m,
                                          const Eigen::SparseMatrix<double>& Lap1,
                                          const Eigen::ArrayXd& A_k) {
  const TransformA& tr = p.transform;
  const double kt = tr.kappa_tilde();
  const int n = phi.grid.ncells();

  Eigen::ArrayXd Avec(n), dAvec(n), Fvec(n), diag1(n);
  for (int c = 0; c < n; ++c) Avec[c] = tr.A(phi.data[c]);
  Eigen::VectorXd lapA = Lap1 * Avec.matrix();
  for (int c = 0; c < n; ++c) {
    const double s = phi.data[c];
    const double sk = p.phi_k.data[c];
    const double r = Avec[c];
    dAvec[c] = tr.dA(s);
    Fvec[c] = tr.F(s, sk);
    const double G = -lapA[c] + tr.tilde_psi0_prime(r) - 0.5 * kt * (r + A_k[c]);
    const double second = std::max(tr.tilde_psi0_second(r), 0.0);
    diag1[c] = tr.dF_ds(s, sk) * G + Fvec[c] * (second - 0.5 * kt) * dAvec[c];
  }
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(Lap1.nonZeros() + n);
  for (int k = 0; k < Lap1.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(Lap1, k); it; ++it)
      trip.emplace_back(it.row(), it.col(), -Fvec[it.row()] * it.value() * dAvec[it.col()]);
  for (int c = 0; c < n; ++c) trip.emplace_back(c, c, diag1[c]);
  Eigen::SparseMatrix<double> Jmu(n, n);
  Jmu.setFromTriplets(trip.begin(), trip.end());

  Eigen::SparseMatrix<double> J = (-(L_m * Jmu)).eval();
  Eigen::SparseMatrix<double> Ih(n, n);
  Ih.setIdentity();
  J += (Ih * (1.0 / p.h)).eval();
  return J;
}

}  // namespace

Eigen::SparseMatrix<double> ch_jacobian(const ChStepProblem& p, const ScalarField& phi) {
  const MacGrid& g = p.phi_k.grid;
  require_same_grid(g, phi.grid, "ch_jacobian");
  FaceVectorField m_F = interp_center_to_face(coeff_at_cells(p.params.mobility, p.phi_k));
  const Eigen::SparseMatrix<double> L_m = laplace_neumann_matrix(g, m_F);
  const Eigen::SparseMatrix<double> Lap1 = unit_laplacian_matrix(g);
  Eigen::ArrayXd A_k(g.ncells());
  for (int c = 0; c < g.ncells(); ++c) A_k[c] = p.transform.A(p.phi_k.data[c]);
  return jacobian_impl(p, phi, L_m, Lap1, A_k);
}

ScalarField mu_from_phi(const ScalarField& phi, const ScalarField& phi_k,
                        const TransformA& tr, const ScalarField* extra_chempot) {
  require_same_grid(phi.grid, phi_k.grid, "mu_from_phi");
  const MacGrid& g = phi.grid;
  ScalarField Aphi(g);
  for (int c = 0; c < g.ncells(); ++c) Aphi.data[c] = tr.A(phi.data[c]);
  ScalarField lap = unit_laplacian(Aphi);
  const double kt = tr.kappa_tilde();
  ScalarField mu(g);
  for (int c = 0; c < g.ncells(); ++c) {
    const double r = Aphi.data[c];
    const double rk = tr.A(phi_k.data[c]);
    const double G = -lap.data[c] + tr.tilde_psi0_prime(r) - 0.5 * kt * (r + rk);
    mu.data[c] = tr.F(phi.data[c], phi_k.data[c]) * G;
  }
  if (extra_chempot) {
    require_same_grid(g, extra_chempot->grid, "mu_from_phi extra term");
    mu.data -= extra_chempot->data;
  }
  return mu;
}

ScalarField ch_residual(const ChStepProblem& p, const ScalarField& phi) {
  const MacGrid& g = p.phi_k.grid;
  require_same_grid(g, phi.grid, "ch_residual");
  ScalarField mu = mu_from_phi(phi, p.phi_k, p.transform, p.extra_chempot);
  FaceVectorField m_F = interp_center_to_face(coeff_at_cells(p.params.mobility, p.phi_k));
  ScalarField diff = laplace_neumann(mu, m_F);
  ScalarField adv = advect_phi(p.vel, p.phi_k);
  ScalarField out(g);
  out.data = (phi.data - p.phi_k.data) / p.h + adv.data - diff.data;
  return out;
}

ChStepResult ch_solve(const ChStepProblem& p, const ScalarField* phi_guess) {
  const MacGrid& g = p.phi_k.grid;
  const TransformA& tr = p.transform;
  const bool singular = tr.potential().singular();

  FaceVectorField m_F = interp_center_to_face(coeff_at_cells(p.params.mobility, p.phi_k));
  const Eigen::SparseMatrix<double> L_m = laplace_neumann_matrix(g, m_F);
  const Eigen::SparseMatrix<double> Lap1 = unit_laplacian_matrix(g);
  const ScalarField adv = advect_phi(p.vel, p.phi_k);
  const int n = g.ncells();

  Eigen::ArrayXd A_k(n);
  for (int c = 0; c < n; ++c) A_k[c] = tr.A(p.phi_k.data[c]);

  ScalarField phi(g);
  phi.data = phi_guess ? phi_guess->data : p.phi_k.data;
  if (singular && phi.data.abs().maxCoeff() > kAdmissibleBound)
    throw StepNotAdmissible("ch_solve: initial iterate touches |phi| = 1");

  // mu and the residual for the current iterate, via the matrix-free path.
  auto eval_mu = [&](const ScalarField& ph) {
    return mu_from_phi(ph, p.phi_k, tr, p.extra_chempot);
  };
  auto eval_residual = [&](const ScalarField& ph, const ScalarField& mu) {
    ScalarField out(g);
    Eigen::VectorXd diff = L_m * mu.data.matrix();
    out.data = (ph.data - p.phi_k.data) / p.h + adv.data - diff.array();
    return out;
  };

  ChStepResult res{ScalarField(g), ScalarField(g), 0, 0.0, 0.0, 0.0, {}};
  ScalarField mu = eval_mu(phi);
  ScalarField R = eval_residual(phi, mu);
  double rnorm = norm_h(R);
  const double tol = p.cfg.newton_tol * (1.0 + norm_h(p.phi_k));
  res.residual_history.push_back(rnorm);

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  while (rnorm > tol) {
    if (res.newton_iters >= p.cfg.newton_max_iter)
      throw NewtonDiverged("ch_solve: iteration budget exhausted");

    lu.compute(jacobian_impl(p, phi, L_m, Lap1, A_k));
    if (lu.info() != Eigen::Success)
      throw LinearSolveFailed("ch_solve: sparse LU factorization failed");
    Eigen::ArrayXd delta = lu.solve((-R.data).matrix()).array();
    ++res.newton_iters;

    double alpha = 1.0;
    if (singular) {
      while ((phi.data + alpha * delta).abs().maxCoeff() > kAdmissibleBound) {
        alpha *= 0.5;
        if (alpha < p.cfg.damping_min)
          throw StepNotAdmissible("ch_solve: step leaves |phi| < 1 at minimal damping");
      }
    }
    ScalarField trial(g);
    for (;;) {
      trial.data = phi.data + alpha * delta;
      ScalarField mu_t = eval_mu(trial);
      ScalarField R_t = eval_residual(trial, mu_t);
      const double rt = norm_h(R_t);
      if (rt < rnorm) {
        phi = trial;
        mu = mu_t;
        R = R_t;
        rnorm = rt;
        break;
      }
      alpha *= 0.5;
      if (alpha < p.cfg.damping_min)
        throw NewtonDiverged("ch_solve: no residual descent at minimal damping");
    }
    res.residual_history.push_back(rnorm);
  }

  res.phi = phi;
  res.mu = mu;
  res.residual_norm = rnorm;
  res.min_phi = phi.data.minCoeff();
  res.max_phi = phi.data.maxCoeff();
  return res;
}

ChDiagnostics chempot_diagnostics(const ScalarField& phi, const ScalarField& mu,
                                  const ModelParams& params) {
  require_same_grid(phi.grid, mu.grid, "chempot_diagnostics");
  const MacGrid& g = phi.grid;
  ChDiagnostics d{};
  d.mean_mu = mu.data.sum() / g.ncells();
  double acc = 0.0;
  for (int c = 0; c < g.ncells(); ++c) {
    const double w = psi0_prime(phi.data[c], params.potential);
    acc += w * w;
  }
  d.l2_psi0_prime = std::sqrt(acc * g.vol());
  FaceVectorField gp = grad_cells(phi);
  d.l2_grad_phi = norm_h(gp);
  return d;
}

}  // namespace aggflow
