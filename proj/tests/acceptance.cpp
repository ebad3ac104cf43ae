// Acceptance gate: one line per criterion, exit code = number of failures.
// Thresholds are pinned here and must not be loosened to make a run pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "aggflow/ch_solver.hpp"
#include "aggflow/config.hpp"
#include "aggflow/field.hpp"
#include "aggflow/grid_ops.hpp"
#include "aggflow/model.hpp"
#include "aggflow/ns_solver.hpp"
#include "aggflow/scenario.hpp"
#include "aggflow/stepper.hpp"
#include "aggflow/study.hpp"
#include "aggflow/verify.hpp"

using namespace aggflow;

namespace {

int g_failures = 0;

void report(int idx, bool pass, const std::string& label, const std::string& detail) {
  std::printf("[%s] %2d. %s  (%s)\n", pass ? "PASS" : "FAIL", idx, label.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point t0 = clock::now();
  return std::chrono::duration<double>(clock::now() - t0).count();
}

ModelParams log_params(double rho2, ModelVariant variant) {
  return ModelParams(1.0, rho2, CoefficientProfile::constant(1.0),
                     CoefficientProfile::constant(1.0), CoefficientProfile::constant(1.0),
                     PotentialSpec::logarithmic(1.0, 2.0), variant);
}

FaceVectorField divfree_field(const MacGrid& g, unsigned seed, double amp) {
  // v = curl of a corner stream function: discretely divergence free, no-slip.
  std::vector<double> psi(size_t(g.nx + 1) * (g.ny + 1), 0.0);
  std::uint64_t x = 0x9E3779B97F4A7C15ULL ^ seed;
  auto next = [&x]() {
    x = 6364136223846793005ULL * x + 1442695040888963407ULL;
    return double(x >> 11) * 0x1.0p-53;
  };
  for (int j = 1; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i)
      psi[size_t(j) * (g.nx + 1) + i] = amp * (2.0 * next() - 1.0);
  FaceVectorField v(g);
  auto P = [&](int i, int j) { return psi[size_t(j) * (g.nx + 1) + i]; };
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i)
      v.U(i, j) = (P(i, j + 1) - P(i, j)) / g.hy();
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      v.V(i, j) = -(P(i + 1, j) - P(i, j)) / g.hx();
  return v;
}

// ---------------------------------------------------------------------------
// Criteria 1-4 and 10 share one 64x64 logarithmic-potential run.

struct BigRunData {
  RunResult rr;
  std::vector<double> vnorm;
  std::vector<double> abs_int_mu;
  std::vector<double> l2_psi0;
  double seconds;
  double area;
};

BigRunData big_run() {
  MacGrid g(64, 64, 1.0, 1.0);
  ModelParams params = log_params(3.0, ModelVariant::Agg);
  TransformA tr(params.a, params.potential);
  Scenario sc;
  sc.seed = 42;
  sc.amplitude = 0.05;
  SimState s0 = initial_state(g, sc, tr);

  StepperConfig cfg;
  cfg.h = 1e-3;

  const double area = g.Lx * g.Ly;
  std::vector<double> vnorm, abs_int_mu, l2_psi0;
  const double t0 = now_seconds();
  RunResult rr =
      run(s0, params, tr, cfg, 100, [&](const SimState& s, const EnergyReport&) {
        ChDiagnostics diag = chempot_diagnostics(s.phi, s.mu, params);
        vnorm.push_back(norm_h(s.v));
        abs_int_mu.push_back(std::abs(diag.mean_mu) * area);
        l2_psi0.push_back(diag.l2_psi0_prime);
      });
  const double seconds = now_seconds() - t0;
  return BigRunData{std::move(rr), std::move(vnorm), std::move(abs_int_mu),
                    std::move(l2_psi0), seconds, area};
}

void criteria_1_to_4_and_10(const BigRunData& d) {
  const auto& reports = d.rr.reports;
  const double E0 = reports.front().E_tot;
  const double eps_energy = 1e-8 * std::abs(E0);

  double min_residual = 0.0;
  double worst_increase = 0.0;
  double worst_mass = 0.0;
  double worst_phi = 0.0;
  double worst_div_ratio = 0.0;
  bool finite = true;
  double max_int_mu = 0.0;
  double max_l2_psi0 = 0.0;
  for (size_t n = 1; n < reports.size(); ++n) {
    const EnergyReport& r = reports[n];
    min_residual = std::min(min_residual, r.ineq_residual);
    worst_increase = std::max(worst_increase, r.E_tot - reports[n - 1].E_tot);
    worst_mass = std::max(worst_mass, std::abs(r.mass - reports[0].mass));
    worst_phi = std::max({worst_phi, std::abs(r.min_phi), std::abs(r.max_phi)});
    const double vn = d.vnorm[n];
    if (r.div_v_inf > 0.0)
      worst_div_ratio = std::max(worst_div_ratio, r.div_v_inf / std::max(vn, 1e-300));
  }
  for (size_t n = 0; n < d.abs_int_mu.size(); ++n) {
    finite = finite && std::isfinite(d.abs_int_mu[n]) && std::isfinite(d.l2_psi0[n]);
    max_int_mu = std::max(max_int_mu, d.abs_int_mu[n]);
    max_l2_psi0 = std::max(max_l2_psi0, d.l2_psi0[n]);
  }

  report(1,
         min_residual >= -eps_energy && worst_increase <= eps_energy &&
             d.seconds < 300.0,
         "energy inequality and nonincreasing total energy, 64x64, 100 steps",
         "min residual " + fmt(min_residual) + ", worst increase " +
             fmt(worst_increase) + ", bound " + fmt(eps_energy) + ", " +
             fmt(d.seconds) + " s");
  report(2, worst_mass <= 1e-10 * d.area, "phase integral conserved on the same run",
         "worst drift " + fmt(worst_mass) + ", bound " + fmt(1e-10 * d.area));
  report(3, worst_phi <= 1.0 - 1e-8, "phase field stays strictly inside (-1, 1)",
         "max |phi| " + fmt(worst_phi) + ", bound " + fmt(1.0 - 1e-8));
  report(4, worst_div_ratio <= 1e-8, "discrete divergence stays at solver level",
         "worst |div v|_inf / ||v|| " + fmt(worst_div_ratio) + ", bound 1.000e-08");
  report(10, finite && d.abs_int_mu.size() == reports.size(),
         "chemical-potential diagnostics finite and logged every step",
         "max |int mu| " + fmt(max_int_mu) + ", max ||psi0'|| " + fmt(max_l2_psi0) +
             ", " + std::to_string(d.abs_int_mu.size()) + " rows");
}

// ---------------------------------------------------------------------------

void criterion_5() {
  const double t0 = now_seconds();
  std::vector<PropertyResult> res = verify_ops();
  const double dt = now_seconds() - t0;
  size_t failed = 0;
  for (const auto& p : res)
    if (!p.pass) ++failed;
  report(5, failed == 0 && dt < 10.0, "operator identity suite, 100+ random instances",
         std::to_string(res.size()) + " properties, " + std::to_string(failed) +
             " failed, " + fmt(dt) + " s");
}

void criterion_6() {
  Config cfg;
  cfg.nx = cfg.ny = 32;
  cfg.rho1 = cfg.rho2 = 1.7;
  cfg.h = 1e-3;
  cfg.steps = 50;
  cfg.amplitude = 0.1;
  CompareMatchedResult r = compare_matched(cfg);
  report(6, r.max_diff <= 1e-12,
         "matched densities reproduce the constant-density path, 50 steps",
         "max diff " + fmt(r.max_diff) + ", bound 1.000e-12");
}

// ---------------------------------------------------------------------------
// Criterion 7: Newton tail + dense re-assembly of the 4x4 systems.
//
// The dense momentum oracle rebuilds the saddle matrix column by column from
// the operator evaluations (which the unit tests pin against hand stencils)
// and plain loops, bypassing the triplet/index machinery of the production
// assembly entirely.

double momentum_dense_mismatch() {
  MacGrid g(4, 4, 1.0, 0.8);
  ModelParams params = log_params(3.0, ModelVariant::Agg);
  TransformA tr(params.a, params.potential);

  Scenario sc;
  sc.seed = 5;
  sc.amplitude = 0.5;
  ScalarField phi_k = initial_phi(g, sc);
  ScalarField phi_new(g), rho_k(g), rho_new(g), eta(g);
  phi_new.data = 0.9 * phi_k.data;
  for (int c = 0; c < g.ncells(); ++c) {
    rho_k.data[c] = params.rho(phi_k.data[c]);
    rho_new.data[c] = params.rho(phi_new.data[c]);
    eta.data[c] = 1.0 + 0.25 * phi_k.data[c];
  }
  ScalarField mu = mu_from_phi(phi_new, phi_k, tr);
  FaceVectorField J = compute_Jtilde(phi_k, mu, params);
  FaceVectorField v_k = divfree_field(g, 21, 0.4);
  FaceVectorField v_t = divfree_field(g, 22, 0.4);
  const double h = 1e-2;

  NsStepProblem p{rho_k, rho_new, phi_k, mu,  J,
                  v_k,   v_t,     h,     eta, ModelVariant::Agg,
                  false, NsConfig{}};
  NsSystem sys = assemble_momentum(p);
  Eigen::MatrixXd A_lib = Eigen::MatrixXd(sys.A);
  Eigen::VectorXd rhs_lib = sys.rhs;

  const int nc = sys.nc;
  const int ig0 = sys.nui + sys.nvi;
  const int ilam = ig0 + nc;
  const int N = ilam + 1;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N);

  FaceVectorField rho_kF = interp_center_to_face(rho_k);
  FaceVectorField rho_newF = interp_center_to_face(rho_new);
  FaceVectorField w(g);
  w.u = rho_kF.u * v_t.u;
  w.v = rho_kF.v * v_t.v;

  auto velocity_column = [&](const FaceVectorField& z, int col) {
    FaceVectorField yc = skew_transport(w, z);
    FaceVectorField yf = skew_transport(J, z);
    FaceVectorField yv = viscous_apply(z, eta);
    ScalarField dz = div_faces(z);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 1; i < g.nx; ++i)
        A(interior_u_index(g, i, j), col) += yc.U(i, j) + yf.U(i, j) + yv.U(i, j);
    for (int j = 1; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        A(interior_v_index(g, i, j), col) += yc.V(i, j) + yf.V(i, j) + yv.V(i, j);
    for (int c = 0; c < nc; ++c) A(ig0 + c, col) += dz.data[c];
  };
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i) {
      FaceVectorField z(g);
      z.U(i, j) = 1.0;
      velocity_column(z, interior_u_index(g, i, j));
    }
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      FaceVectorField z(g);
      z.V(i, j) = 1.0;
      velocity_column(z, interior_v_index(g, i, j));
    }

  FaceVectorField cap = capillary_force(mu, phi_k);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i) {
      const int row = interior_u_index(g, i, j);
      const int f = g.uidx(i, j);
      A(row, row) += 0.5 * (rho_kF.u[f] + rho_newF.u[f]) / h;
      rhs[row] = rho_kF.u[f] * v_k.u[f] / h + cap.u[f];
    }
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const int row = interior_v_index(g, i, j);
      const int f = g.vidx(i, j);
      A(row, row) += 0.5 * (rho_kF.v[f] + rho_newF.v[f]) / h;
      rhs[row] = rho_kF.v[f] * v_k.v[f] / h + cap.v[f];
    }

  for (int c = 0; c < nc; ++c) {
    ScalarField pc(g);
    pc.data[c] = 1.0;
    FaceVectorField gp = grad_cells(pc);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 1; i < g.nx; ++i)
        A(interior_u_index(g, i, j), ig0 + c) += gp.U(i, j);
    for (int j = 1; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        A(interior_v_index(g, i, j), ig0 + c) += gp.V(i, j);
    A(ig0 + c, ilam) = 1.0;
    A(ilam, ig0 + c) = 1.0 / nc;
  }

  const double sA = A_lib.cwiseAbs().maxCoeff();
  const double sb = std::max(rhs_lib.cwiseAbs().maxCoeff(), 1.0);
  return std::max((A - A_lib).cwiseAbs().maxCoeff() / sA,
                  (rhs - rhs_lib).cwiseAbs().maxCoeff() / sb);
}

// Dense Jacobian of the eliminated phase system, written out from the scheme:
// J = I/h - L_m dmu/dphi, both Laplacians assembled by explicit neighbor
// loops. Table coefficients keep the difference-quotient derivative active.
double jacobian_dense_mismatch() {
  MacGrid g(4, 4, 1.0, 0.8);
  const int n = g.ncells();

  std::vector<double> a_s, m_s;
  const int ns = 129;
  for (int k = 0; k < ns; ++k) {
    const double s = -1.0 + 2.0 * k / (ns - 1);
    a_s.push_back(1.0 + 0.5 * s * s);
    m_s.push_back(1.5 + 0.5 * s * s);
  }
  ModelParams params(1.0, 3.0, CoefficientProfile::table(a_s),
                     CoefficientProfile::table(m_s), CoefficientProfile::constant(1.0),
                     PotentialSpec::logarithmic(1.0, 2.0));
  TransformA tr(params.a, params.potential);

  Scenario sc;
  sc.seed = 3;
  sc.amplitude = 0.4;
  ScalarField phi_k = initial_phi(g, sc);
  ScalarField phi(g);
  for (int c = 0; c < n; ++c)
    phi.data[c] = phi_k.data[c] + ((c % 2) ? 0.08 : -0.06);
  FaceVectorField vel = divfree_field(g, 77, 0.3);
  const double h = 1e-2;
  ChStepProblem p{phi_k, vel, h, params, tr, nullptr, ChConfig{}};
  Eigen::MatrixXd J_lib = Eigen::MatrixXd(ch_jacobian(p, phi));

  Eigen::MatrixXd Lap1 = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd Lm = Eigen::MatrixXd::Zero(n, n);
  const double wgt_x = 1.0 / (g.hx() * g.hx());
  const double wgt_y = 1.0 / (g.hy() * g.hy());
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const int c = g.cell(i, j);
      const int nb[4] = {i > 0 ? g.cell(i - 1, j) : -1,
                         i + 1 < g.nx ? g.cell(i + 1, j) : -1,
                         j > 0 ? g.cell(i, j - 1) : -1,
                         j + 1 < g.ny ? g.cell(i, j + 1) : -1};
      const double wgt[4] = {wgt_x, wgt_x, wgt_y, wgt_y};
      for (int q = 0; q < 4; ++q) {
        if (nb[q] < 0) continue;
        const double mf = 0.5 * (params.mobility.value(phi_k.data[c]) +
                                 params.mobility.value(phi_k.data[nb[q]]));
        Lap1(c, c) -= wgt[q];
        Lap1(c, nb[q]) += wgt[q];
        Lm(c, c) -= wgt[q] * mf;
        Lm(c, nb[q]) += wgt[q] * mf;
      }
    }

  Eigen::VectorXd Avec(n);
  for (int c = 0; c < n; ++c) Avec[c] = tr.A(phi.data[c]);
  Eigen::VectorXd lapA = Lap1 * Avec;
  const double kt = tr.kappa_tilde();
  Eigen::MatrixXd Jmu = Eigen::MatrixXd::Zero(n, n);
  for (int c = 0; c < n; ++c) {
    const double s = phi.data[c];
    const double sk = phi_k.data[c];
    const double r = Avec[c];
    const double G = -lapA[c] + tr.tilde_psi0_prime(r) -
                     0.5 * kt * (r + tr.A(sk));
    const double curv = std::max(tr.tilde_psi0_second(r), 0.0);
    for (int d = 0; d < n; ++d)
      Jmu(c, d) = -tr.F(s, sk) * Lap1(c, d) * tr.dA(phi.data[d]);
    Jmu(c, c) += tr.dF_ds(s, sk) * G + tr.F(s, sk) * (curv - 0.5 * kt) * tr.dA(s);
  }
  Eigen::MatrixXd J_dense =
      Eigen::MatrixXd::Identity(n, n) / h - Lm * Jmu;
  return (J_dense - J_lib).cwiseAbs().maxCoeff() / J_lib.cwiseAbs().maxCoeff();
}

void criterion_7_newton_tail() {
  MacGrid g(32, 32, 1.0, 1.0);
  ModelParams params = log_params(3.0, ModelVariant::Agg);
  TransformA tr(params.a, params.potential);

  // Resolved circular interface: a smooth state whose phase step needs a real
  // Newton iteration (a mild field converges in two steps, too few for tail
  // ratios). The tolerance sits above the roundoff floor of the residual,
  // which scales with the double Laplacian of the steep profile.
  Scenario sc;
  sc.kind = ScenarioKind::Bubble;
  sc.radius = 0.3;
  sc.width = 0.12;
  ScalarField phi_k = initial_phi(g, sc);
  FaceVectorField v(g);

  ChConfig cc;
  cc.newton_tol = 1e-8;
  cc.newton_max_iter = 60;

  std::vector<double> hist;
  double h_used = 0.0;
  for (double h : {0.002, 0.005, 0.01, 0.02, 0.05}) {
    ChStepProblem p{phi_k, v, h, params, tr, nullptr, cc};
    try {
      ChStepResult r = ch_solve(p);
      if (r.residual_history.size() >= 5) {
        hist = r.residual_history;
        h_used = h;
        break;
      }
    } catch (const std::exception&) {
      // too stiff at this step size; try the next one
    }
  }
  if (hist.size() < 5) {
    report(7, false, "Newton tail is superlinear on a smooth 32x32 state",
           "no step size produced at least 4 iterations");
    return;
  }
  double worst_q = 0.0;
  const size_t m = hist.size();
  for (size_t i = m - 4; i + 1 < m; ++i)
    worst_q = std::max(worst_q, hist[i + 1] / (hist[i] * hist[i]));
  const bool tail_ok = worst_q <= 1e5;

  // Dense oracles: rebuild both 4x4 systems without the sparse machinery.
  const double mom = momentum_dense_mismatch();
  const double jac = jacobian_dense_mismatch();
  report(7, tail_ok && mom <= 1e-10 && jac <= 1e-10,
         "Newton tail superlinear; 4x4 assemblies match dense re-assembly",
         "max r+/r^2 " + fmt(worst_q) + " at h=" + fmt(h_used) + ", momentum diff " +
             fmt(mom) + ", jacobian diff " + fmt(jac) + ", bound 1.000e-10");
}

void criterion_8() {
  Config cfg;
  cfg.nx = cfg.ny = 32;
  cfg.potential = "double-well";
  cfg.rho2 = 3.0;
  cfg.amplitude = 0.2;
  cfg.seed = 7;
  cfg.h = 4e-3;
  cfg.steps = 10;
  ConvergenceResult r = convergence_study(cfg, 5);

  // Slope over the three coarsest levels (4e-3, 2e-3, 1e-3) against the
  // 2.5e-4 reference.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int l = 0; l < 3; ++l) {
    const double x = std::log(r.levels[l].h);
    const double y = std::log(r.levels[l].err_phi);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (3 * sxy - sx * sy) / (3 * sxx - sx * sx);
  std::string errs;
  for (int l = 0; l < 3; ++l) errs += fmt(r.levels[l].err_phi) + " ";
  report(8, slope >= 0.8 && slope <= 1.2 && std::isfinite(slope),
         "first-order temporal self-convergence, double-well, 32x32",
         "errors " + errs + "slope " + fmt(slope) + ", window [0.8, 1.2]");
}

void criterion_9() {
  MacGrid g(32, 32, 1.0, 1.0);
  ModelParams params = log_params(3.0, ModelVariant::AggKinetic);
  TransformA tr(params.a, params.potential);
  Scenario sc;
  sc.seed = 42;
  sc.amplitude = 0.05;
  SimState s0 = initial_state(g, sc, tr);
  StepperConfig cfg;
  cfg.h = 1e-3;
  RunResult rr = run(s0, params, tr, cfg, 50);

  const double E0 = rr.reports.front().E_tot;
  const double eps_energy = 1e-8 * std::abs(E0);
  double min_residual = 0.0;
  double worst_increase = 0.0;
  for (size_t n = 1; n < rr.reports.size(); ++n) {
    min_residual = std::min(min_residual, rr.reports[n].ineq_residual);
    worst_increase =
        std::max(worst_increase, rr.reports[n].E_tot - rr.reports[n - 1].E_tot);
  }

  Config mc;
  mc.nx = mc.ny = 32;
  mc.variant = "agg-kinetic";
  mc.rho1 = mc.rho2 = 1.7;
  mc.h = 1e-3;
  mc.steps = 50;
  mc.amplitude = 0.1;
  CompareMatchedResult cm = compare_matched(mc);

  report(9,
         min_residual >= -eps_energy && worst_increase <= eps_energy &&
             cm.max_diff <= 1e-12,
         "kinetic-coupling variant: energy audit and matched-density reduction",
         "min residual " + fmt(min_residual) + ", bound " + fmt(eps_energy) +
             ", matched diff " + fmt(cm.max_diff));
}

}  // namespace

int main() {
  std::printf("acceptance checks, tolerances pinned in source\n");
  BigRunData d = big_run();
  criteria_1_to_4_and_10(d);
  criterion_5();
  criterion_6();
  criterion_7_newton_tail();
  criterion_8();
  criterion_9();
  std::printf("%s: %d failure(s)\n", g_failures == 0 ? "OK" : "FAILED", g_failures);
  return g_failures;
}
