#include "aggflow/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "aggflow/grid_ops.hpp"

namespace aggflow {

namespace {

ScalarField rho_cells(const ScalarField& phi, const ModelParams& params) {
  ScalarField r(phi.grid);
  for (int c = 0; c < phi.grid.ncells(); ++c) r.data[c] = params.rho(phi.data[c]);
  return r;
}

ScalarField eval_cells(const ScalarField& phi, const CoefficientProfile& p) {
  ScalarField r(phi.grid);
  for (int c = 0; c < phi.grid.ncells(); ++c) r.data[c] = p.value(phi.data[c]);
  return r;
}

ScalarField transform_cells(const ScalarField& phi, const TransformA& tr) {
  ScalarField r(phi.grid);
  for (int c = 0; c < phi.grid.ncells(); ++c) r.data[c] = tr.A(phi.data[c]);
  return r;
}

double face_energy(const FaceVectorField& coeff, const FaceVectorField& w) {
  return 0.5 *
         ((coeff.u * w.u.square()).sum() + (coeff.v * w.v.square()).sum()) *
         w.grid.vol();
}

double grad_energy(const ScalarField& a) {
  FaceVectorField gA = grad_cells(a);
  return 0.5 * (gA.u.square().sum() + gA.v.square().sum()) * a.grid.vol();
}

double rel_update(double dnorm, double base_norm) { return dnorm / (1.0 + base_norm); }

}  // namespace

EnergyPair total_energy(const ScalarField& phi, const FaceVectorField& v,
                        const ModelParams& params, const TransformA& transform) {
  require_same_grid(phi.grid, v.grid, "total_energy");
  EnergyPair e;
  FaceVectorField rhoF = interp_center_to_face(rho_cells(phi, params));
  e.E_kin = face_energy(rhoF, v);
  double psi_sum = 0.0;
  for (int c = 0; c < phi.grid.ncells(); ++c)
    psi_sum += params.potential.psi(phi.data[c]);
  e.E_free = psi_sum * phi.grid.vol() + grad_energy(transform_cells(phi, transform));
  return e;
}

ScalarField appendix_chempot_term(const FaceVectorField& v, const ModelParams& params) {
  ScalarField ke = cell_kinetic(v);
  ke.data *= 0.5 * params.beta();
  return ke;
}

EnergyReport initial_report(const SimState& s, const ModelParams& params,
                            const TransformA& transform) {
  EnergyReport r;
  EnergyPair e = total_energy(s.phi, s.v, params, transform);
  r.E_kin = e.E_kin;
  r.E_free = e.E_free;
  r.E_tot = e.E_kin + e.E_free;
  r.mass = cell_sum(s.phi);
  r.min_phi = s.phi.data.minCoeff();
  r.max_phi = s.phi.data.maxCoeff();
  r.div_v_inf = div_faces(s.v).data.abs().maxCoeff();
  return r;
}

EnergyReport step(SimState& s, const ModelParams& params, const TransformA& transform,
                  const StepperConfig& cfg) {
  const MacGrid& g = s.phi.grid;
  if (!(cfg.under_relaxation > 0.0 && cfg.under_relaxation <= 1.0))
    throw ValidationError("step: under_relaxation must lie in (0, 1]");
  if (cfg.model_h_path && !params.matched())
    throw ValidationError("step: matched-density path needs equal densities");

  const ScalarField rho_k = rho_cells(s.phi, params);
  const ScalarField eta_k = eval_cells(s.phi, params.viscosity);
  const EnergyPair E_old = total_energy(s.phi, s.v, params, transform);

  const bool kinetic_variant =
      params.variant == ModelVariant::AggKinetic && !cfg.model_h_path;
  const bool use_rel_flux = params.variant == ModelVariant::Agg && !cfg.model_h_path;

  FaceVectorField v_t = s.v;
  FaceVectorField v_new = s.v;
  ScalarField phi_new = s.phi;
  ScalarField mu_new = s.mu;
  ScalarField g_new(g);
  ScalarField rho_new(g);
  ScalarField extra(g);
  FaceVectorField Jtilde(g);
  double div_last = 0.0;
  int newton_total = 0;
  int lin_total = 0;
  int outer = 0;
  bool converged = false;

  while (outer < cfg.outer_max_iter) {
    ++outer;
    const ScalarField* extra_ptr = nullptr;
    if (kinetic_variant) {
      extra = appendix_chempot_term(v_t, params);
      extra_ptr = &extra;
    }
    ChStepProblem cp{s.phi, v_t, cfg.h, params, transform, extra_ptr, cfg.ch};
    ChStepResult cr = ch_solve(cp, &phi_new);
    newton_total += cr.newton_iters;
    rho_new = rho_cells(cr.phi, params);
    if (use_rel_flux) {
      Jtilde = compute_Jtilde(s.phi, cr.mu, params);
    } else {
      Jtilde.u.setZero();
      Jtilde.v.setZero();
    }
    NsStepProblem np{rho_k, rho_new, s.phi,  cr.mu,          Jtilde,
                     s.v,   v_t,     cfg.h,  eta_k,          params.variant,
                     cfg.model_h_path, cfg.ns};
    NsStepResult nr = ns_solve(np, g);
    lin_total += nr.lin_iters;

    FaceVectorField dv(g);
    dv.u = nr.v.u - v_new.u;
    dv.v = nr.v.v - v_new.v;
    ScalarField dphi(g), dmu(g);
    dphi.data = cr.phi.data - phi_new.data;
    dmu.data = cr.mu.data - mu_new.data;
    const double delta = std::max({rel_update(norm_h(dv), norm_h(nr.v)),
                                   rel_update(norm_h(dphi), norm_h(cr.phi)),
                                   rel_update(norm_h(dmu), norm_h(cr.mu))});

    v_new = nr.v;
    phi_new = cr.phi;
    mu_new = cr.mu;
    g_new = nr.g;
    div_last = nr.div_inf;
    if (delta <= cfg.outer_tol) {
      converged = true;
      break;
    }
    v_t.u += cfg.under_relaxation * (v_new.u - v_t.u);
    v_t.v += cfg.under_relaxation * (v_new.v - v_t.v);
  }
  if (!converged)
    throw OuterNoConvergence("step: coupling iteration did not converge");

  KineticTerms kt = kinetic_terms(v_new, s.v, rho_k, rho_new);
  EnergyPair E_new = total_energy(phi_new, v_new, params, transform);

  const double visc = cfg.h * strain_dissipation(v_new, eta_k);
  FaceVectorField m_F = interp_center_to_face(eval_cells(s.phi, params.mobility));
  FaceVectorField gmu = grad_cells(mu_new);
  const double mob =
      cfg.h * ((m_F.u * gmu.u.square()).sum() + (m_F.v * gmu.v.square()).sum()) *
      g.vol();

  FaceVectorField gA_new = grad_cells(transform_cells(phi_new, transform));
  FaceVectorField gA_old = grad_cells(transform_cells(s.phi, transform));
  const double td = 0.5 *
                    ((gA_new.u - gA_old.u).square().sum() +
                     (gA_new.v - gA_old.v).square().sum()) *
                    g.vol();

  EnergyReport r;
  r.E_kin = E_new.E_kin;
  r.E_free = E_new.E_free;
  r.E_tot = E_new.E_kin + E_new.E_free;
  r.visc_diss = visc;
  r.mob_diss = mob;
  r.inertia_defect = kt.inertia_defect;
  r.transform_defect = td;
  r.ineq_residual =
      (E_old.E_kin + E_old.E_free) - r.E_tot - visc - mob - kt.inertia_defect - td;
  r.mass = cell_sum(phi_new);
  r.min_phi = phi_new.data.minCoeff();
  r.max_phi = phi_new.data.maxCoeff();
  r.div_v_inf = div_last;
  r.outer_iters = outer;
  r.newton_iters = newton_total;
  r.lin_iters = lin_total;

  s.v = std::move(v_new);
  s.phi = std::move(phi_new);
  s.mu = std::move(mu_new);
  s.g = std::move(g_new);
  s.t += cfg.h;
  s.step += 1;
  return r;
}

AuditResult audit_energy_inequality(const EnergyReport& r, const StepperConfig& cfg,
                                    double E_ref) {
  AuditResult a;
  if (cfg.eps_audit > 0.0) {
    a.eps = cfg.eps_audit;
  } else {
    const double scale = E_ref > 0.0 ? E_ref : std::abs(r.E_tot);
    a.eps = std::max(1e-10, 10.0 * cfg.outer_tol) * std::max(scale, 1e-30);
  }
  a.residual = r.ineq_residual;
  a.pass = std::isfinite(r.ineq_residual) && r.ineq_residual >= -a.eps;
  return a;
}

RunResult run(const SimState& initial, const ModelParams& params,
              const TransformA& transform, StepperConfig cfg, int nsteps,
              const StepCallback& on_step) {
  if (nsteps < 0) throw ValidationError("run: nsteps must be >= 0");
  RunResult out{initial, {}, 0, cfg.h, 0.0};
  out.reports.reserve(static_cast<size_t>(nsteps) + 1);
  EnergyReport r0 = initial_report(out.state, params, transform);
  out.E0 = r0.E_tot;
  out.reports.push_back(r0);
  if (on_step) on_step(out.state, r0);

  constexpr int kMaxHalvings = 5;
  int accepted = 0;
  while (accepted < nsteps) {
    SimState trial = out.state;
    bool retry = false;
    EnergyReport r;
    try {
      r = step(trial, params, transform, cfg);
    } catch (const NewtonDiverged&) {
      retry = true;
    } catch (const StepNotAdmissible&) {
      retry = true;
    } catch (const OuterNoConvergence&) {
      retry = true;
    } catch (const LinearSolveFailed&) {
      retry = true;
    }
    if (retry) {
      if (out.halvings >= kMaxHalvings)
        throw AbortedAfterRetries("run: step kept failing after five step-size halvings");
      cfg.h *= 0.5;
      ++out.halvings;
      continue;
    }
    out.state = std::move(trial);
    ++accepted;
    out.reports.push_back(r);
    if (on_step) on_step(out.state, r);
  }
  out.h_final = cfg.h;
  return out;
}

}  // namespace aggflow
