#pragma once

#include <functional>
#include <vector>

#include "aggflow/ch_solver.hpp"
#include "aggflow/field.hpp"
#include "aggflow/model.hpp"
#include "aggflow/ns_solver.hpp"

namespace aggflow {

struct SimState {
  double t = 0.0;
  int step = 0;
  FaceVectorField v;
  ScalarField phi;
  ScalarField mu;
  ScalarField g;  // mean-zero pressure-like multiplier of the last solve

  explicit SimState(const MacGrid& grid)
      : v(grid), phi(grid), mu(grid), g(grid) {}
};

// Scalar diagnostics of one accepted step. The energy bookkeeping is exact to
// solver tolerances:
//   E_old - E_new = visc_diss + mob_diss + inertia_defect + transform_defect
//                   + ineq_residual
// with ineq_residual >= 0 up to the outer/linear tolerances. All defects are
// nonnegative by construction.
struct EnergyReport {
  double E_kin = 0.0;
  double E_free = 0.0;
  double E_tot = 0.0;
  double visc_diss = 0.0;         // h * strain dissipation of the new velocity
  double mob_diss = 0.0;          // h * mobility-weighted |grad mu|^2
  double inertia_defect = 0.0;    // rho_k |v - v_k|^2 / 2
  double transform_defect = 0.0;  // |grad(A(phi) - A(phi_k))|^2 / 2
  double ineq_residual = 0.0;     // slack of the energy inequality
  double mass = 0.0;              // integral of phi
  double min_phi = 0.0;
  double max_phi = 0.0;
  double div_v_inf = 0.0;
  int outer_iters = 0;
  int newton_iters = 0;  // linear solves inside the phase solver, summed
  int lin_iters = 0;     // saddle solves plus refinement passes, summed
};

struct StepperConfig {
  double h = 1e-3;
  double outer_tol = 1e-9;
  int outer_max_iter = 50;
  double under_relaxation = 0.7;  // in (0, 1]
  // Acceptance slack for the energy inequality audit; 0 selects
  // max(1e-10, 10 * outer_tol) * E_ref automatically.
  double eps_audit = 0.0;
  // Assemble the matched-density (constant rho) form of the momentum system.
  // Requires matched densities; with them it is equivalent to the general
  // assembly entry by entry.
  bool model_h_path = false;
  ChConfig ch;
  NsConfig ns;
};

struct EnergyPair {
  double E_kin = 0.0;
  double E_free = 0.0;
};

// E_kin = sum_faces rho(phi)_F |v|^2/2, E_free = sum_cells psi(phi) plus
// |grad_h A(phi)|^2 / 2 on faces.
EnergyPair total_energy(const ScalarField& phi, const FaceVectorField& v,
                        const ModelParams& params, const TransformA& transform);

// beta |v|^2 / 2 at cells: the kinetic chemical-potential shift of the
// kinetic variant.
ScalarField appendix_chempot_term(const FaceVectorField& v, const ModelParams& params);

// Diagnostics of an initial state (step 0 row): energies, mass, bounds,
// divergence; all dissipation entries zero.
EnergyReport initial_report(const SimState& s, const ModelParams& params,
                            const TransformA& transform);

// One implicit step by fixed-point coupling of the phase and momentum
// subsystems. The transporting velocity starts at v_k and is under-relaxed
// toward each new momentum solution; convergence is measured by the largest
// normalized update over (v, phi, mu). Throws OuterNoConvergence at the
// iteration cap and passes through solver failures.
EnergyReport step(SimState& s, const ModelParams& params, const TransformA& transform,
                  const StepperConfig& cfg);

struct AuditResult {
  bool pass = false;
  double residual = 0.0;
  double eps = 0.0;
};

// Checks ineq_residual >= -eps. E_ref scales the automatic eps; pass a run's
// initial total energy. E_ref <= 0 falls back to the report's own E_tot.
// Never throws.
AuditResult audit_energy_inequality(const EnergyReport& r, const StepperConfig& cfg,
                                    double E_ref = -1.0);

struct RunResult {
  SimState state;
  std::vector<EnergyReport> reports;  // nsteps + 1 entries, first is step 0
  int halvings = 0;   // step-size halvings that were needed
  double h_final = 0.0;
  double E0 = 0.0;    // initial total energy
};

using StepCallback = std::function<void(const SimState&, const EnergyReport&)>;

// Advances nsteps accepted steps. A solver failure halves h and retries the
// failed step (the reduced h is kept afterwards); more than five halvings
// abort the run. The callback, when set, sees the initial state and every
// accepted step.
RunResult run(const SimState& initial, const ModelParams& params,
              const TransformA& transform, StepperConfig cfg, int nsteps,
              const StepCallback& on_step = {});

}  // namespace aggflow
