#pragma once

#include <vector>

#include <Eigen/Sparse>

#include "aggflow/field.hpp"
#include "aggflow/model.hpp"

namespace aggflow {

struct ChConfig {
  double newton_tol = 1e-10;   // ||R||_h <= tol * (1 + ||phi_k||_h)
  int newton_max_iter = 50;
  double damping_min = 1e-4;
};

// One implicit step of the convective phase equation, fully eliminated to the
// phase field: mu is a function of phi and the previous state.
//
//   (phi - phi_k)/h + advect(vel, phi_k) = div(m(phi_k)_F grad mu)
//   mu = F(phi, phi_k) * ( -lap A(phi) + psi0~'(A(phi))
//                          - kappa~ (A(phi) + A(phi_k))/2 )  -  extra_chempot
//
// F is the difference quotient of A, so F(phi,phi_k)*(phi-phi_k) telescopes
// to A(phi)-A(phi_k) exactly; that identity is what makes the discrete energy
// inequality hold.
struct ChStepProblem {
  const ScalarField& phi_k;
  const FaceVectorField& vel;
  double h;
  const ModelParams& params;
  const TransformA& transform;
  const ScalarField* extra_chempot = nullptr;  // optional, subtracted from mu
  ChConfig cfg;
};

struct ChStepResult {
  ScalarField phi;
  ScalarField mu;
  int newton_iters = 0;      // number of linear solves
  double residual_norm = 0.0;
  double min_phi = 0.0;
  double max_phi = 0.0;
  std::vector<double> residual_history;  // ||R||_h before/after each update
};

ScalarField mu_from_phi(const ScalarField& phi, const ScalarField& phi_k,
                        const TransformA& tr, const ScalarField* extra_chempot = nullptr);

ScalarField ch_residual(const ChStepProblem& p, const ScalarField& phi);

// Jacobian of ch_residual with respect to phi at the given iterate (the
// matrix Newton factorizes). Exposed for derivative checks.
Eigen::SparseMatrix<double> ch_jacobian(const ChStepProblem& p, const ScalarField& phi);

// Damped Newton on the eliminated system; warm start from *phi_guess if
// given, else from phi_k. Throws StepNotAdmissible when damping cannot keep
// |phi| < 1 (singular potential) and NewtonDiverged when the residual stops
// decreasing or the iteration budget runs out.
ChStepResult ch_solve(const ChStepProblem& p, const ScalarField* phi_guess = nullptr);

// Per-step scalar diagnostics of the chemical potential.
struct ChDiagnostics {
  double mean_mu;        // cell mean of mu
  double l2_psi0_prime;  // ||psi'(phi) + kappa phi||_h
  double l2_grad_phi;    // ||grad_h phi||_h
};

ChDiagnostics chempot_diagnostics(const ScalarField& phi, const ScalarField& mu,
                                  const ModelParams& params);

}  // namespace aggflow
