#include "aggflow/ns_solver.hpp"

#include <cmath>

#include <Eigen/SparseLU>

#include "aggflow/grid_ops.hpp"

namespace aggflow {

FaceVectorField compute_Jtilde(const ScalarField& phi_k, const ScalarField& mu,
                               const ModelParams& params) {
  require_same_grid(phi_k.grid, mu.grid, "compute_Jtilde");
  const MacGrid& g = phi_k.grid;
  ScalarField m_cells(g);
  for (int c = 0; c < g.ncells(); ++c)
    m_cells.data[c] = params.mobility.value(phi_k.data[c]);
  FaceVectorField m_F = interp_center_to_face(m_cells);
  FaceVectorField J = grad_cells(mu);
  const double nb = -params.beta();
  J.u *= nb * m_F.u;
  J.v *= nb * m_F.v;
  return J;
}

namespace {

double field_min(const ScalarField& f) { return f.data.minCoeff(); }

}  // namespace

NsSystem assemble_momentum(const NsStepProblem& p) {
  const MacGrid& g = p.phi_k.grid;
  require_same_grid(g, p.rho_k.grid, "assemble_momentum rho_k");
  require_same_grid(g, p.rho_new.grid, "assemble_momentum rho_new");
  require_same_grid(g, p.mu.grid, "assemble_momentum mu");
  require_same_grid(g, p.Jtilde.grid, "assemble_momentum Jtilde");
  require_same_grid(g, p.v_k.grid, "assemble_momentum v_k");
  require_same_grid(g, p.v_transport.grid, "assemble_momentum v_transport");
  require_same_grid(g, p.eta_k.grid, "assemble_momentum eta_k");
  if (!(p.h > 0.0)) throw ValidationError("assemble_momentum: h must be > 0");
  if (!(field_min(p.rho_k) > 0.0) || !(field_min(p.rho_new) > 0.0))
    throw NonPositiveCoefficient("assemble_momentum: density must stay positive");
  if (p.model_h_path && (p.rho_k.data != p.rho_new.data).any())
    throw ValidationError("assemble_momentum: matched path needs constant density");

  const int nui = interior_u_count(g);
  const int nvi = interior_v_count(g);
  const int nc = g.ncells();
  const int ig0 = nui + nvi;
  const int ilam = ig0 + nc;
  const int N = ilam + 1;
  const double ihx = 1.0 / g.hx();
  const double ihy = 1.0 / g.hy();

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(N) * 16);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N);

  // Transporting mass flux at faces. On the matched path rho is one constant.
  FaceVectorField w(g);
  FaceVectorField rho_kF(g), rho_newF(g);
  if (p.model_h_path) {
    const double r0 = p.rho_k.data[0];
    rho_kF.u.setConstant(r0);
    rho_kF.v.setConstant(r0);
    rho_newF = rho_kF;
    w.u = r0 * p.v_transport.u;
    w.v = r0 * p.v_transport.v;
  } else {
    rho_kF = interp_center_to_face(p.rho_k);
    rho_newF = interp_center_to_face(p.rho_new);
    w.u = rho_kF.u * p.v_transport.u;
    w.v = rho_kF.v * p.v_transport.v;
  }
  skew_transport_triplets(w, trip);
  if (p.variant == ModelVariant::Agg && !p.model_h_path)
    skew_transport_triplets(p.Jtilde, trip);
  if (p.variant == ModelVariant::AggKinetic && !p.model_h_path) {
    ScalarField gx(g), gy(g), uc(g), vc(g), q(g);
    cell_gradient(p.rho_k, gx, gy);
    interp_face_to_center(p.v_transport, uc, vc);
    q.data = uc.data * gy.data - vc.data * gx.data;
    perp_gradient_coupling_triplets(q, trip);
  }
  viscous_triplets(g, p.eta_k, trip);

  // Inertia diagonal, time-level and capillary right-hand side.
  FaceVectorField cap = capillary_force(p.mu, p.phi_k);
  const bool current_density = p.variant == ModelVariant::AggKinetic && !p.model_h_path;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i) {
      const int row = interior_u_index(g, i, j);
      const double rk = rho_kF.u[g.uidx(i, j)];
      const double rn = rho_newF.u[g.uidx(i, j)];
      const double coef = current_density ? rn / p.h : 0.5 * (rk + rn) / p.h;
      trip.emplace_back(row, row, coef);
      rhs[row] = rk * p.v_k.u[g.uidx(i, j)] / p.h + cap.u[g.uidx(i, j)];
    }
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const int row = interior_v_index(g, i, j);
      const double rk = rho_kF.v[g.vidx(i, j)];
      const double rn = rho_newF.v[g.vidx(i, j)];
      const double coef = current_density ? rn / p.h : 0.5 * (rk + rn) / p.h;
      trip.emplace_back(row, row, coef);
      rhs[row] = rk * p.v_k.v[g.vidx(i, j)] / p.h + cap.v[g.vidx(i, j)];
    }

  // Pressure gradient on momentum rows; divergence plus multiplier on cell
  // rows; mean-zero gauge on the multiplier row.
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i) {
      const int row = interior_u_index(g, i, j);
      trip.emplace_back(row, ig0 + g.cell(i, j), ihx);
      trip.emplace_back(row, ig0 + g.cell(i - 1, j), -ihx);
    }
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const int row = interior_v_index(g, i, j);
      trip.emplace_back(row, ig0 + g.cell(i, j), ihy);
      trip.emplace_back(row, ig0 + g.cell(i, j - 1), -ihy);
    }
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const int row = ig0 + g.cell(i, j);
      if (i + 1 < g.nx) trip.emplace_back(row, interior_u_index(g, i + 1, j), ihx);
      if (i > 0) trip.emplace_back(row, interior_u_index(g, i, j), -ihx);
      if (j + 1 < g.ny) trip.emplace_back(row, interior_v_index(g, i, j + 1), ihy);
      if (j > 0) trip.emplace_back(row, interior_v_index(g, i, j), -ihy);
      trip.emplace_back(row, ilam, 1.0);
      trip.emplace_back(ilam, row, 1.0 / nc);
    }

  NsSystem sys;
  sys.nui = nui;
  sys.nvi = nvi;
  sys.nc = nc;
  sys.A.resize(N, N);
  sys.A.setFromTriplets(trip.begin(), trip.end());
  sys.A.prune(0.0);  // keep the sparsity pattern free of stored zeros
  sys.rhs = std::move(rhs);
  return sys;
}

NsStepResult solve_saddle(const NsSystem& sys, const MacGrid& grid, double tol,
                          int max_refine) {
  if (sys.nui != interior_u_count(grid) || sys.nvi != interior_v_count(grid) ||
      sys.nc != grid.ncells())
    throw ShapeMismatch("solve_saddle: system does not match grid");

  NsStepResult res{FaceVectorField(grid), ScalarField(grid)};
  const double bnorm = sys.rhs.norm();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(sys.rhs.size());
  if (bnorm > 0.0) {
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(sys.A);
    if (lu.info() != Eigen::Success)
      throw LinearSolveFailed("solve_saddle: sparse LU factorization failed");
    x = lu.solve(sys.rhs);
    res.lin_iters = 1;
    Eigen::VectorXd r = sys.rhs - sys.A * x;
    res.rel_residual = r.norm() / bnorm;
    // Refine toward machine level; the contract only requires tol.
    const double target = std::min(tol, 1e-13);
    int passes = 0;
    while (res.rel_residual > target && passes < std::max(1, max_refine)) {
      Eigen::VectorXd dx = lu.solve(r);
      x += dx;
      ++res.lin_iters;
      ++passes;
      r = sys.rhs - sys.A * x;
      res.rel_residual = r.norm() / bnorm;
    }
    if (res.rel_residual > tol)
      throw LinearSolveFailed("solve_saddle: residual above tolerance after refinement");
  }

  for (int j = 0; j < grid.ny; ++j)
    for (int i = 1; i < grid.nx; ++i)
      res.v.u[grid.uidx(i, j)] = x[interior_u_index(grid, i, j)];
  for (int j = 1; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      res.v.v[grid.vidx(i, j)] = x[interior_v_index(grid, i, j)];
  const int ig0 = sys.nui + sys.nvi;
  for (int c = 0; c < sys.nc; ++c) res.g.data[c] = x[ig0 + c];
  res.div_inf = div_faces(res.v).data.abs().maxCoeff();
  return res;
}

NsStepResult ns_solve(const NsStepProblem& p, const MacGrid& grid) {
  NsSystem sys = assemble_momentum(p);
  return solve_saddle(sys, grid, p.cfg.lin_tol, p.cfg.lin_max_iter);
}

KineticTerms kinetic_terms(const FaceVectorField& v, const FaceVectorField& v_k,
                           const ScalarField& rho_k, const ScalarField& rho_new) {
  require_same_grid(v.grid, v_k.grid, "kinetic_terms");
  require_same_grid(v.grid, rho_k.grid, "kinetic_terms");
  require_same_grid(v.grid, rho_new.grid, "kinetic_terms");
  const MacGrid& g = v.grid;
  FaceVectorField rkF = interp_center_to_face(rho_k);
  FaceVectorField rnF = interp_center_to_face(rho_new);
  KineticTerms out;
  const double vol = g.vol();
  out.E_kin_new = 0.5 * ((rnF.u * v.u.square()).sum() + (rnF.v * v.v.square()).sum()) * vol;
  out.E_kin_old =
      0.5 * ((rkF.u * v_k.u.square()).sum() + (rkF.v * v_k.v.square()).sum()) * vol;
  out.inertia_defect = 0.5 *
                       ((rkF.u * (v.u - v_k.u).square()).sum() +
                        (rkF.v * (v.v - v_k.v).square()).sum()) *
                       vol;
  return out;
}

void perp_gradient_coupling_triplets(const ScalarField& q,
                                     std::vector<Eigen::Triplet<double>>& out) {
  const MacGrid& g = q.grid;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double qc = q(i, j);
      if (qc == 0.0) continue;
      const double c8 = 0.125 * qc;
      for (int fi : {i, i + 1}) {
        if (fi <= 0 || fi >= g.nx) continue;
        const int urow = interior_u_index(g, fi, j);
        for (int gj : {j, j + 1}) {
          if (gj <= 0 || gj >= g.ny) continue;
          const int vrow = interior_v_index(g, i, gj);
          out.emplace_back(urow, vrow, c8);
          out.emplace_back(vrow, urow, -c8);
        }
      }
    }
}

}  // namespace aggflow
