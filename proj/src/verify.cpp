#include "aggflow/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "aggflow/ch_solver.hpp"
#include "aggflow/grid_ops.hpp"
#include "aggflow/model.hpp"
#include "aggflow/ns_solver.hpp"
#include "aggflow/scenario.hpp"
#include "aggflow/stepper.hpp"
#include "aggflow/study.hpp"

namespace aggflow {

namespace {

using Rng = std::mt19937_64;

double uni(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

ScalarField random_cells(const MacGrid& g, Rng& rng, double lo, double hi) {
  ScalarField f(g);
  for (int c = 0; c < g.ncells(); ++c) f.data[c] = uni(rng, lo, hi);
  return f;
}

// Random velocity with zero boundary-normal components.
FaceVectorField random_noslip(const MacGrid& g, Rng& rng, double amp) {
  FaceVectorField w(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i) w.U(i, j) = uni(rng, -amp, amp);
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) w.V(i, j) = uni(rng, -amp, amp);
  return w;
}

// Discretely divergence-free no-slip velocity from a random corner stream
// function that vanishes on the boundary.
FaceVectorField random_divfree(const MacGrid& g, Rng& rng, double amp) {
  const int cnx = g.nx + 1;
  Eigen::ArrayXd psi = Eigen::ArrayXd::Zero(cnx * (g.ny + 1));
  for (int j = 1; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i) psi[j * cnx + i] = uni(rng, -amp, amp);
  FaceVectorField w(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i)
      w.U(i, j) = (psi[(j + 1) * cnx + i] - psi[j * cnx + i]) / g.hy();
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      w.V(i, j) = -(psi[j * cnx + i + 1] - psi[j * cnx + i]) / g.hx();
  return w;
}

FaceVectorField random_face_coeff(const MacGrid& g, Rng& rng, double lo, double hi) {
  FaceVectorField w(g);
  for (int f = 0; f < g.nu(); ++f) w.u[f] = uni(rng, lo, hi);
  for (int f = 0; f < g.nv(); ++f) w.v[f] = uni(rng, lo, hi);
  return w;
}

PropertyResult mk(std::string name, double worst, double bound,
                  std::string detail = {}) {
  return {std::move(name), worst <= bound, worst, bound, std::move(detail)};
}

constexpr double kFloor = 1e-300;

ModelParams log_params(double rho1, double rho2, ModelVariant variant) {
  return ModelParams(rho1, rho2, CoefficientProfile::constant(1.0),
                     CoefficientProfile::constant(1.0),
                     CoefficientProfile::constant(1.0),
                     PotentialSpec::logarithmic(1.0, 2.0), variant);
}

}  // namespace

std::vector<PropertyResult> verify_ops() {
  std::vector<PropertyResult> out;
  const MacGrid g(24, 20, 1.25, 0.8);
  Rng rng(0xA11CE5);

  double adj = 0.0;
  for (int it = 0; it < 100; ++it) {
    FaceVectorField w = random_noslip(g, rng, 1.0);
    ScalarField p = random_cells(g, rng, -1.0, 1.0);
    ScalarField dw = div_faces(w);
    FaceVectorField gp = grad_cells(p);
    const double lhs = dot_h(dw, p);
    const double rhs = dot_h(w, gp);
    const double den = norm_h(dw) * norm_h(p) + norm_h(w) * norm_h(gp) + kFloor;
    adj = std::max(adj, std::abs(lhs + rhs) / den);
  }
  out.push_back(mk("divergence/gradient adjointness", adj, 1e-13));

  double conv = 0.0, flux = 0.0;
  for (int it = 0; it < 200; ++it) {
    FaceVectorField w = random_noslip(g, rng, 2.0);
    FaceVectorField z = random_noslip(g, rng, 1.0);
    FaceVectorField cz = skew_convection(w, z);
    conv = std::max(conv, std::abs(dot_h(cz, z)) /
                              (norm_h(cz) * norm_h(z) + kFloor));
    FaceVectorField J = random_noslip(g, rng, 1.5);
    FaceVectorField tz = skew_flux_term(J, z);
    flux = std::max(flux, std::abs(dot_h(tz, z)) /
                              (norm_h(tz) * norm_h(z) + kFloor));
  }
  out.push_back(mk("skew convection does no work", conv, 1e-13));
  out.push_back(mk("skew relative-flux term does no work", flux, 1e-13));

  double sym = 0.0, zint = 0.0;
  for (int it = 0; it < 100; ++it) {
    ScalarField a = random_cells(g, rng, -1.0, 1.0);
    ScalarField b = random_cells(g, rng, -1.0, 1.0);
    FaceVectorField coeff = random_face_coeff(g, rng, 0.1, 2.5);
    ScalarField La = laplace_neumann(a, coeff);
    ScalarField Lb = laplace_neumann(b, coeff);
    const double den =
        norm_h(La) * norm_h(b) + norm_h(a) * norm_h(Lb) + kFloor;
    sym = std::max(sym, std::abs(dot_h(La, b) - dot_h(a, Lb)) / den);
    const double total = std::abs(cell_sum(La));
    zint = std::max(zint, total / (La.data.abs().sum() * g.vol() + kFloor));
  }
  out.push_back(mk("weighted laplacian symmetry", sym, 1e-13));
  out.push_back(mk("weighted laplacian conserves the integral", zint, 1e-13));

  double visc = 0.0, qneg = 0.0;
  for (int it = 0; it < 100; ++it) {
    FaceVectorField v = random_noslip(g, rng, 1.0);
    ScalarField eta = random_cells(g, rng, 0.1, 3.0);
    const double q1 = dot_h(viscous_apply(v, eta), v);
    const double q2 = strain_dissipation(v, eta);
    visc = std::max(visc, std::abs(q1 - q2) / (std::abs(q1) + std::abs(q2) + kFloor));
    qneg = std::max(qneg, -q2);
  }
  out.push_back(mk("viscous operator reproduces the dissipation form", visc, 1e-13));
  out.push_back(mk("strain dissipation is nonnegative", qneg, 0.0));

  double dual = 0.0;
  for (int it = 0; it < 100; ++it) {
    FaceVectorField w = random_noslip(g, rng, 1.0);
    ScalarField phi = random_cells(g, rng, -0.9, 0.9);
    ScalarField mu = random_cells(g, rng, -2.0, 2.0);
    const double lhs = dot_h(advect_phi(w, phi), mu);
    const double rhs = dot_h(capillary_force(mu, phi), w);
    FaceVectorField cap = capillary_force(mu, phi);
    const double den = norm_h(cap) * norm_h(w) + kFloor;
    dual = std::max(dual, std::abs(lhs - rhs) / den);
  }
  out.push_back(mk("advection/capillary duality", dual, 1e-13));

  double kin = 0.0;
  for (int it = 0; it < 100; ++it) {
    ScalarField rho = random_cells(g, rng, 0.5, 3.0);
    FaceVectorField v = random_noslip(g, rng, 1.0);
    const double s1 = dot_h(rho, cell_kinetic(v));
    FaceVectorField rhoF = interp_center_to_face(rho);
    const double s2 = 0.5 *
                      ((rhoF.u * v.u.square()).sum() + (rhoF.v * v.v.square()).sum()) *
                      g.vol();
    kin = std::max(kin, std::abs(s1 - s2) / (std::abs(s1) + std::abs(s2) + kFloor));
  }
  out.push_back(mk("cell kinetic density regroups to face energy", kin, 1e-13));

  {
    ScalarField c(g, 0.75);
    FaceVectorField gc = grad_cells(c);
    FaceVectorField ic = interp_center_to_face(c);
    const double worst =
        std::max({gc.u.abs().maxCoeff(), gc.v.abs().maxCoeff(),
                  (ic.u - 0.75).abs().maxCoeff(), (ic.v - 0.75).abs().maxCoeff()});
    out.push_back(mk("constants: zero gradient, exact interpolation", worst, 0.0));
  }
  return out;
}

std::vector<PropertyResult> verify_ch() {
  std::vector<PropertyResult> out;
  const MacGrid g(16, 16, 1.0, 1.0);
  ModelParams params = log_params(1.0, 3.0, ModelVariant::Agg);
  TransformA tr(params.a, params.potential);
  Rng rng(0xCAFE01);

  double drift = 0.0, decrease = -1.0, conf = 0.0;
  for (int it = 0; it < 20; ++it) {
    Scenario sc;
    sc.seed = 100 + it;
    sc.amplitude = 0.4;
    sc.mean = (it % 3 == 0) ? 0.0 : (it % 3 == 1 ? 0.2 : -0.3);
    ScalarField phi_k = initial_phi(g, sc);
    FaceVectorField vel = random_divfree(g, rng, 0.5);
    ChStepProblem p{phi_k, vel, 1e-3, params, tr, nullptr, ChConfig{}};
    ChStepResult r = ch_solve(p);
    drift = std::max(drift, std::abs(cell_sum(r.phi) - cell_sum(phi_k)));
    conf = std::max(conf, std::abs(r.min_phi));
    conf = std::max(conf, std::abs(r.max_phi));
    if (it < 10) {
      FaceVectorField zero(g);
      ChStepProblem p0{phi_k, zero, 1e-3, params, tr, nullptr, ChConfig{}};
      ChStepResult r0 = ch_solve(p0);
      const double e_old = total_energy(phi_k, zero, params, tr).E_free;
      const double e_new = total_energy(r0.phi, zero, params, tr).E_free;
      decrease = std::max(decrease, (e_new - e_old) / (1.0 + std::abs(e_old)));
    }
  }
  out.push_back(mk("advected step conserves the phase integral", drift, 1e-12));
  out.push_back(mk("resting step never increases the free energy", decrease, 1e-10));
  out.push_back(mk("solution stays strictly inside (-1, 1)", conf, 1.0 - 1e-10));

  {
    std::vector<double> samples(129);
    for (size_t i = 0; i < samples.size(); ++i) {
      const double s = -1.0 + 2.0 * static_cast<double>(i) / (samples.size() - 1);
      samples[i] = 1.0 + s * s;
    }
    CoefficientProfile a_var = CoefficientProfile::table(samples);
    TransformA tr_var(a_var, params.potential);
    const double lo = std::sqrt(a_var.min_value());
    const double hi = std::sqrt(a_var.max_value());
    double bound_viol = 0.0, asym = 0.0;
    for (int it = 0; it < 10000; ++it) {
      const double s = uni(rng, -0.999, 0.999);
      const double t = uni(rng, -0.999, 0.999);
      const double f = tr_var.F(s, t);
      bound_viol = std::max({bound_viol, lo - f, f - hi});
      asym = std::max(asym, std::abs(f - tr_var.F(t, s)));
    }
    out.push_back(mk("difference quotient stays within sqrt-coefficient bounds",
                     bound_viol, 1e-12));
    out.push_back(mk("difference quotient is symmetric", asym, 1e-14));

    TransformA tr_const(CoefficientProfile::constant(4.0), params.potential);
    double inv_closed = 0.0, inv_table = 0.0, mono = -1.0;
    double prev_closed = -1e300, prev_table = -1e300;
    for (int i = 0; i < 1000; ++i) {
      const double s = -0.9995 + 1.999 * i / 999.0;
      const double rc = tr_const.A(s);
      const double rt = tr_var.A(s);
      inv_closed = std::max(inv_closed, std::abs(tr_const.A_inv(rc) - s));
      inv_table = std::max(inv_table, std::abs(tr_var.A_inv(rt) - s));
      if (i > 0) mono = std::max({mono, prev_closed - rc, prev_table - rt});
      prev_closed = rc;
      prev_table = rt;
    }
    out.push_back(mk("transform inversion (closed form)", inv_closed, 1e-12));
    out.push_back(mk("transform inversion (tabulated)", inv_table, 1e-9));
    out.push_back(mk("transform is strictly increasing", mono, 0.0));
  }

  {
    const MacGrid gs(8, 8, 1.0, 1.0);
    Scenario sc;
    sc.seed = 11;
    sc.amplitude = 0.3;
    ScalarField phi_k = initial_phi(gs, sc);
    Rng rng2(0xFD);
    FaceVectorField vel = random_divfree(gs, rng2, 0.3);
    ChStepProblem p{phi_k, vel, 1e-2, params, tr, nullptr, ChConfig{}};
    Scenario sc2;
    sc2.seed = 12;
    sc2.amplitude = 0.25;
    sc2.mean = 0.1;
    ScalarField phi = initial_phi(gs, sc2);

    Eigen::MatrixXd J = Eigen::MatrixXd(ch_jacobian(p, phi));
    const int n = gs.ncells();
    Eigen::MatrixXd J_fd(n, n);
    const double eps = 1e-6;
    for (int c = 0; c < n; ++c) {
      ScalarField up = phi, dn = phi;
      up.data[c] += eps;
      dn.data[c] -= eps;
      J_fd.col(c) =
          ((ch_residual(p, up).data - ch_residual(p, dn).data) / (2.0 * eps)).matrix();
    }
    const double rel =
        (J - J_fd).cwiseAbs().maxCoeff() / J.cwiseAbs().maxCoeff();
    out.push_back(mk("jacobian matches central differences", rel, 1e-5));
  }
  return out;
}

std::vector<PropertyResult> verify_ns() {
  std::vector<PropertyResult> out;
  Rng rng(0xBEEF02);

  {
    const MacGrid g(12, 10, 1.0, 1.0);
    ModelParams params(1.0, 3.0, CoefficientProfile::constant(1.0),
                       CoefficientProfile::constant(2.0),
                       CoefficientProfile::constant(1.0),
                       PotentialSpec::logarithmic(1.0, 2.0));
    ScalarField phi_k(g, 0.3);
    ScalarField mu(g);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) mu(i, j) = (i + 0.5) * g.hx();
    FaceVectorField J = compute_Jtilde(phi_k, mu, params);
    double worst = 0.0;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i)
        worst = std::max(worst, (i == 0 || i == g.nx) ? std::abs(J.U(i, j))
                                                      : std::abs(J.U(i, j) + 2.0));
    worst = std::max(worst, J.v.abs().maxCoeff());
    out.push_back(mk("relative flux of a linear potential", worst, 1e-13));
  }

  {
    const MacGrid g(12, 10, 1.0, 1.0);
    ModelParams params = log_params(1.2, 1.2, ModelVariant::Agg);
    TransformA tr(params.a, params.potential);
    Scenario sc;
    sc.seed = 5;
    sc.amplitude = 0.5;
    ScalarField phi_k = initial_phi(g, sc);
    ScalarField phi_new = phi_k;
    phi_new.data *= 0.95;
    ScalarField rho_k(g, 1.2), rho_new(g, 1.2);
    ScalarField mu = mu_from_phi(phi_new, phi_k, tr);
    ScalarField eta(g, 1.0);
    FaceVectorField v_k = random_divfree(g, rng, 0.4);
    FaceVectorField v_t = random_divfree(g, rng, 0.4);
    FaceVectorField J = compute_Jtilde(phi_k, mu, params);
    NsStepProblem general{rho_k, rho_new, phi_k, mu,    J,
                          v_k,   v_t,     1e-2,  eta,   ModelVariant::Agg,
                          false, NsConfig{}};
    NsStepProblem dedicated{rho_k, rho_new, phi_k, mu,   J,
                            v_k,   v_t,     1e-2,  eta,  ModelVariant::Agg,
                            true,  NsConfig{}};
    NsSystem A1 = assemble_momentum(general);
    NsSystem A2 = assemble_momentum(dedicated);
    Eigen::SparseMatrix<double> D = A1.A - A2.A;
    double worst = 0.0;
    for (int k = 0; k < D.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(D, k); it; ++it)
        worst = std::max(worst, std::abs(it.value()));
    worst = std::max(worst, (A1.rhs - A2.rhs).cwiseAbs().maxCoeff());
    out.push_back(mk("matched densities collapse to the constant-density assembly",
                     worst, 1e-14));
  }

  {
    const MacGrid g(6, 6, 1.0, 1.0);
    const int nui = interior_u_count(g);
    const int nvi = interior_v_count(g);
    const int nf = nui + nvi;
    std::vector<Eigen::Triplet<double>> trip;
    FaceVectorField w = random_noslip(g, rng, 1.5);
    skew_transport_triplets(w, trip);
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(nf, nf);
    for (const auto& t : trip) T(t.row(), t.col()) += t.value();
    const double skew = (T + T.transpose()).cwiseAbs().maxCoeff() /
                        (T.cwiseAbs().maxCoeff() + kFloor);
    out.push_back(mk("assembled transport block is antisymmetric", skew, 1e-14));

    trip.clear();
    ScalarField q = random_cells(g, rng, -2.0, 2.0);
    perp_gradient_coupling_triplets(q, trip);
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(nf, nf);
    for (const auto& t : trip) P(t.row(), t.col()) += t.value();
    const double pskew = (P + P.transpose()).cwiseAbs().maxCoeff() /
                         (P.cwiseAbs().maxCoeff() + kFloor);
    out.push_back(mk("velocity-component coupling is antisymmetric", pskew, 1e-14));

    trip.clear();
    ScalarField eta = random_cells(g, rng, 0.2, 2.0);
    viscous_triplets(g, eta, trip);
    Eigen::MatrixXd V = Eigen::MatrixXd::Zero(nf, nf);
    for (const auto& t : trip) V(t.row(), t.col()) += t.value();
    const double vsym = (V - V.transpose()).cwiseAbs().maxCoeff() /
                        (V.cwiseAbs().maxCoeff() + kFloor);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (V + V.transpose()));
    const double mineig = es.eigenvalues().minCoeff();
    out.push_back(mk("viscous block is symmetric", vsym, 1e-14));
    out.push_back(mk("viscous block is positive semidefinite",
                     -mineig / (V.cwiseAbs().maxCoeff() + kFloor), 1e-12));
  }

  {
    const MacGrid g(12, 10, 1.0, 1.0);
    ModelParams params = log_params(1.0, 3.0, ModelVariant::Agg);
    TransformA tr(params.a, params.potential);
    double res = 0.0, gmean = 0.0, div = 0.0, kin_neg = 0.0;
    for (int it = 0; it < 10; ++it) {
      Scenario sc;
      sc.seed = 300 + it;
      sc.amplitude = 0.5;
      ScalarField phi_k = initial_phi(g, sc);
      ScalarField phi_new = phi_k;
      phi_new.data *= 0.9;
      ScalarField rho_k(g), rho_new(g);
      for (int c = 0; c < g.ncells(); ++c) {
        rho_k.data[c] = params.rho(phi_k.data[c]);
        rho_new.data[c] = params.rho(phi_new.data[c]);
      }
      ScalarField mu = mu_from_phi(phi_new, phi_k, tr);
      ScalarField eta(g, 1.0);
      FaceVectorField v_k = random_divfree(g, rng, 0.5);
      FaceVectorField v_t = random_divfree(g, rng, 0.5);
      FaceVectorField J = compute_Jtilde(phi_k, mu, params);
      NsStepProblem p{rho_k, rho_new, phi_k, mu,    J,
                      v_k,   v_t,     1e-2,  eta,   ModelVariant::Agg,
                      false, NsConfig{}};
      NsStepResult r = ns_solve(p, g);
      res = std::max(res, r.rel_residual / p.cfg.lin_tol);
      gmean = std::max(gmean, std::abs(cell_sum(r.g) / (g.vol() * g.ncells())) /
                                  (r.g.data.abs().maxCoeff() + 1.0));
      div = std::max(div, r.div_inf / (10.0 * p.cfg.lin_tol * (norm_h(r.v) + kFloor)));
      KineticTerms kt = kinetic_terms(r.v, v_k, rho_k, rho_new);
      kin_neg = std::max({kin_neg, -kt.E_kin_new, -kt.E_kin_old, -kt.inertia_defect});
    }
    out.push_back(mk("saddle solve meets its residual tolerance", res, 1.0));
    out.push_back(mk("pressure-like field has zero mean", gmean, 1e-12));
    out.push_back(mk("discrete divergence stays at solver precision", div, 1.0));
    out.push_back(mk("kinetic bookkeeping terms are nonnegative", kin_neg, 0.0));
  }

  {
    const MacGrid g(8, 8, 1.0, 1.0);
    ModelParams params = log_params(1.0, 3.0, ModelVariant::Agg);
    ScalarField rho(g, 2.0), phi_k(g, 0.0), mu(g), eta(g, 1.0);
    FaceVectorField zero(g), J(g);
    NsStepProblem p{rho,  rho, phi_k, mu,  J,
                    zero, zero, 1e-3, eta, ModelVariant::Agg,
                    false, NsConfig{}};
    NsStepResult r = ns_solve(p, g);
    const double worst = std::max({r.v.u.abs().maxCoeff(), r.v.v.abs().maxCoeff(),
                                   r.g.data.abs().maxCoeff()});
    out.push_back(mk("zero forcing yields the zero solution", worst, 0.0));
  }
  return out;
}

namespace {

void run_audit_block(std::vector<PropertyResult>& out, const std::string& tag,
                     const ModelParams& params, const StepperConfig& cfg,
                     const Scenario& sc, const MacGrid& g, int nsteps) {
  TransformA tr(params.a, params.potential);
  SimState s0 = initial_state(g, sc, tr);
  std::vector<double> vnorms;
  RunResult rr = run(s0, params, tr, cfg, nsteps,
                     [&](const SimState& s, const EnergyReport&) {
                       vnorms.push_back(norm_h(s.v));
                     });

  double neg = 0.0, e_up = 0.0, drift = 0.0, conf = 0.0, divv = 0.0;
  bool finite = true;
  double eps = 0.0;
  const double mass0 = rr.reports.front().mass;
  for (size_t n = 1; n < rr.reports.size(); ++n) {
    const EnergyReport& r = rr.reports[n];
    AuditResult a = audit_energy_inequality(r, cfg, rr.E0);
    eps = a.eps;
    neg = std::max(neg, -r.ineq_residual);
    e_up = std::max(e_up, r.E_tot - rr.reports[n - 1].E_tot);
    drift = std::max(drift, std::abs(r.mass - mass0));
    conf = std::max(conf, std::max(std::abs(r.min_phi), std::abs(r.max_phi)));
    divv = std::max(divv, r.div_v_inf - 1e-8 * std::max(vnorms[n], 1e-12));
    finite = finite && std::isfinite(r.E_tot) && std::isfinite(r.ineq_residual) &&
             std::isfinite(r.mass);
  }
  out.push_back(mk(tag + ": energy inequality audit", neg, eps));
  out.push_back(mk(tag + ": total energy nonincreasing", e_up, eps));
  out.push_back(mk(tag + ": phase integral is conserved", drift, 1e-11));
  if (params.potential.singular())
    out.push_back(mk(tag + ": confinement", conf, 1.0 - 1e-8));
  out.push_back(mk(tag + ": discrete incompressibility margin", divv, 0.0));
  out.push_back(mk(tag + ": diagnostics stay finite", finite ? 0.0 : 1.0, 0.0));
}

}  // namespace

std::vector<PropertyResult> verify_energy() {
  std::vector<PropertyResult> out;
  const MacGrid g(16, 16, 1.0, 1.0);
  Scenario sc;
  sc.seed = 42;
  sc.amplitude = 0.05;
  StepperConfig cfg;
  cfg.h = 2e-3;

  run_audit_block(out, "two-phase", log_params(1.0, 3.0, ModelVariant::Agg), cfg, sc,
                  g, 10);
  run_audit_block(out, "kinetic variant",
                  log_params(1.0, 3.0, ModelVariant::AggKinetic), cfg, sc, g, 10);
  ModelParams dw(1.0, 2.0, CoefficientProfile::constant(1.0),
                 CoefficientProfile::constant(1.0), CoefficientProfile::constant(1.0),
                 PotentialSpec::double_well(1.0), ModelVariant::Agg);
  Scenario sc_dw = sc;
  sc_dw.amplitude = 0.2;
  run_audit_block(out, "polynomial potential", dw, cfg, sc_dw, g, 10);

  Config cmp;
  cmp.nx = cmp.ny = 12;
  cmp.rho1 = cmp.rho2 = 1.7;
  cmp.h = 2e-3;
  cmp.steps = 10;
  CompareMatchedResult m = compare_matched(cmp);
  out.push_back(mk("matched run equals the dedicated constant-density path",
                   m.max_diff, 1e-12));
  return out;
}

std::vector<PropertyResult> verify_suite(const std::string& suite) {
  if (suite == "ops") return verify_ops();
  if (suite == "ch") return verify_ch();
  if (suite == "ns") return verify_ns();
  if (suite == "energy") return verify_energy();
  if (suite == "all") {
    std::vector<PropertyResult> out = verify_ops();
    for (auto&& v : {verify_ch(), verify_ns(), verify_energy()})
      out.insert(out.end(), v.begin(), v.end());
    return out;
  }
  throw ValidationError("verify: unknown suite '" + suite +
                        "' (expected ops, ch, ns, energy or all)");
}

}  // namespace aggflow
