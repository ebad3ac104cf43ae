#pragma once

#include <Eigen/Sparse>

#include "aggflow/field.hpp"
#include "aggflow/model.hpp"

namespace aggflow {

struct NsConfig {
  double lin_tol = 1e-10;  // relative residual of the saddle solve
  int lin_max_iter = 2;    // refinement passes after the direct solve
};

// Momentum/pressure subsystem for one time step, linearized by freezing the
// transporting velocity (v_transport) and the current phase fields. The
// assembled operator uses the skew transport forms, so testing the momentum
// rows with v telescopes the kinetic energy exactly.
struct NsStepProblem {
  const ScalarField& rho_k;      // rho(phi_k) at cells
  const ScalarField& rho_new;    // rho(phi_new) at cells
  const ScalarField& phi_k;
  const ScalarField& mu;         // current chemical potential
  const FaceVectorField& Jtilde; // relative flux (ignored on the kinetic path)
  const FaceVectorField& v_k;
  const FaceVectorField& v_transport;
  double h;
  const ScalarField& eta_k;      // viscosity at cells, evaluated at phi_k
  ModelVariant variant = ModelVariant::Agg;
  // Dedicated matched-density assembly: constant rho, no relative flux. Only
  // valid when rho_k == rho_new everywhere.
  bool model_h_path = false;
  NsConfig cfg;
};

struct NsSystem {
  Eigen::SparseMatrix<double> A;
  Eigen::VectorXd rhs;
  int nui = 0;  // interior u faces
  int nvi = 0;  // interior v faces
  int nc = 0;   // cells (pressure)
  // unknown layout: [u interior | v interior | g | lambda]
};

struct NsStepResult {
  FaceVectorField v;
  ScalarField g;
  int lin_iters = 0;
  double div_inf = 0.0;
  double rel_residual = 0.0;
};

// J~ = -beta * m(phi_k) grad_h mu on faces (zero boundary-normal component).
FaceVectorField compute_Jtilde(const ScalarField& phi_k, const ScalarField& mu,
                               const ModelParams& params);

NsSystem assemble_momentum(const NsStepProblem& p);

// Direct sparse solve plus iterative refinement until the relative residual
// is at or below tol; mean-zero g is enforced by a Lagrange multiplier row.
NsStepResult solve_saddle(const NsSystem& sys, const MacGrid& grid, double tol,
                          int max_refine);

// Convenience wrapper: assemble and solve.
NsStepResult ns_solve(const NsStepProblem& p, const MacGrid& grid);

struct KineticTerms {
  double E_kin_new = 0.0;      // integral rho_new |v|^2 / 2
  double E_kin_old = 0.0;      // integral rho_k |v_k|^2 / 2
  double inertia_defect = 0.0; // integral rho_k |v - v_k|^2 / 2
};

KineticTerms kinetic_terms(const FaceVectorField& v, const FaceVectorField& v_k,
                           const ScalarField& rho_k, const ScalarField& rho_new);

// Antisymmetric velocity-component coupling that carries the |v|^2/2 grad rho_k
// force of the kinetic variant: per cell q = u_t d_y(rho_k) - v_t d_x(rho_k),
// contributing +q/8 (u-row, v-col) and -q/8 (v-row, u-col) over the cell's
// interior faces. Never does work: <P v, v>_h = 0 for every q.
void perp_gradient_coupling_triplets(const ScalarField& q,
                                     std::vector<Eigen::Triplet<double>>& out);

}  // namespace aggflow
