#include "aggflow/grid_ops.hpp"

#include <cmath>

namespace aggflow {

namespace {

// Corner viscosity: mean over the up-to-four cells meeting at corner (ic,jc).
double corner_eta(const ScalarField& eta, int ic, int jc) {
  const MacGrid& g = eta.grid;
  double acc = 0.0;
  int n = 0;
  for (int dj = -1; dj <= 0; ++dj) {
    for (int di = -1; di <= 0; ++di) {
      const int i = ic + di;
      const int j = jc + dj;
      if (i < 0 || i >= g.nx || j < 0 || j >= g.ny) continue;
      acc += eta(i, j);
      ++n;
    }
  }
  return acc / n;
}

}  // namespace

ScalarField div_faces(const FaceVectorField& w) {
  const MacGrid& g = w.grid;
  ScalarField out(g);
  const double ihx = 1.0 / g.hx();
  const double ihy = 1.0 / g.hy();
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      out(i, j) = (w.U(i + 1, j) - w.U(i, j)) * ihx + (w.V(i, j + 1) - w.V(i, j)) * ihy;
  return out;
}

FaceVectorField grad_cells(const ScalarField& c) {
  const MacGrid& g = c.grid;
  FaceVectorField out(g);
  const double ihx = 1.0 / g.hx();
  const double ihy = 1.0 / g.hy();
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i) out.U(i, j) = (c(i, j) - c(i - 1, j)) * ihx;
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) out.V(i, j) = (c(i, j) - c(i, j - 1)) * ihy;
  return out;
}

ScalarField unit_laplacian(const ScalarField& c) { return div_faces(grad_cells(c)); }

ScalarField laplace_neumann(const ScalarField& c, const FaceVectorField& coeff) {
  require_same_grid(c.grid, coeff.grid, "laplace_neumann");
  const MacGrid& g = c.grid;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i)
      if (!(coeff.U(i, j) > 0.0))
        throw NonPositiveCoefficient("laplace_neumann: non-positive x-face coefficient");
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (!(coeff.V(i, j) > 0.0))
        throw NonPositiveCoefficient("laplace_neumann: non-positive y-face coefficient");
  FaceVectorField flux = grad_cells(c);
  flux.u *= coeff.u;
  flux.v *= coeff.v;
  return div_faces(flux);
}

Eigen::SparseMatrix<double> unit_laplacian_matrix(const MacGrid& g) {
  FaceVectorField ones(g);
  ones.u.setOnes();
  ones.v.setOnes();
  return laplace_neumann_matrix(g, ones);
}

Eigen::SparseMatrix<double> laplace_neumann_matrix(const MacGrid& g,
                                                  const FaceVectorField& coeff) {
  require_same_grid(g, coeff.grid, "laplace_neumann_matrix");
  const double ax = 1.0 / (g.hx() * g.hx());
  const double ay = 1.0 / (g.hy() * g.hy());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(g.ncells()) * 5);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const int c = g.cell(i, j);
      double diag = 0.0;
      if (i > 0) {
        const double k = coeff.U(i, j) * ax;
        trip.emplace_back(c, g.cell(i - 1, j), k);
        diag -= k;
      }
      if (i < g.nx - 1) {
        const double k = coeff.U(i + 1, j) * ax;
        trip.emplace_back(c, g.cell(i + 1, j), k);
        diag -= k;
      }
      if (j > 0) {
        const double k = coeff.V(i, j) * ay;
        trip.emplace_back(c, g.cell(i, j - 1), k);
        diag -= k;
      }
      if (j < g.ny - 1) {
        const double k = coeff.V(i, j + 1) * ay;
        trip.emplace_back(c, g.cell(i, j + 1), k);
        diag -= k;
      }
      trip.emplace_back(c, c, diag);
    }
  }
  Eigen::SparseMatrix<double> m(g.ncells(), g.ncells());
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

FaceVectorField interp_center_to_face(const ScalarField& c) {
  const MacGrid& g = c.grid;
  FaceVectorField out(g);
  for (int j = 0; j < g.ny; ++j) {
    out.U(0, j) = c(0, j);
    out.U(g.nx, j) = c(g.nx - 1, j);
    for (int i = 1; i < g.nx; ++i) out.U(i, j) = 0.5 * (c(i - 1, j) + c(i, j));
  }
  for (int i = 0; i < g.nx; ++i) {
    out.V(i, 0) = c(i, 0);
    out.V(i, g.ny) = c(i, g.ny - 1);
  }
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) out.V(i, j) = 0.5 * (c(i, j - 1) + c(i, j));
  return out;
}

void interp_face_to_center(const FaceVectorField& w, ScalarField& xc, ScalarField& yc) {
  const MacGrid& g = w.grid;
  require_same_grid(g, xc.grid, "interp_face_to_center");
  require_same_grid(g, yc.grid, "interp_face_to_center");
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      xc(i, j) = 0.5 * (w.U(i, j) + w.U(i + 1, j));
      yc(i, j) = 0.5 * (w.V(i, j) + w.V(i, j + 1));
    }
}

void cell_gradient(const ScalarField& c, ScalarField& gx, ScalarField& gy) {
  require_same_grid(c.grid, gx.grid, "cell_gradient");
  require_same_grid(c.grid, gy.grid, "cell_gradient");
  FaceVectorField gf = grad_cells(c);
  interp_face_to_center(gf, gx, gy);
}

ScalarField cell_kinetic(const FaceVectorField& v) {
  const MacGrid& g = v.grid;
  ScalarField out(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double uw = v.U(i, j), ue = v.U(i + 1, j);
      const double vs = v.V(i, j), vn = v.V(i, j + 1);
      out(i, j) = 0.25 * (uw * uw + ue * ue) + 0.25 * (vs * vs + vn * vn);
    }
  return out;
}

ScalarField advect_phi(const FaceVectorField& v, const ScalarField& phi) {
  require_same_grid(v.grid, phi.grid, "advect_phi");
  const MacGrid& g = phi.grid;
  FaceVectorField gp = grad_cells(phi);
  ScalarField out(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      out(i, j) = 0.5 * (v.U(i, j) * gp.U(i, j) + v.U(i + 1, j) * gp.U(i + 1, j)) +
                  0.5 * (v.V(i, j) * gp.V(i, j) + v.V(i, j + 1) * gp.V(i, j + 1));
  return out;
}

FaceVectorField capillary_force(const ScalarField& mu, const ScalarField& phi) {
  require_same_grid(mu.grid, phi.grid, "capillary_force");
  const MacGrid& g = phi.grid;
  FaceVectorField out = grad_cells(phi);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i) out.U(i, j) *= 0.5 * (mu(i - 1, j) + mu(i, j));
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) out.V(i, j) *= 0.5 * (mu(i, j - 1) + mu(i, j));
  return out;
}

namespace {

// Interpolated ingredients of the skew transport form for the u-equation:
// wbx/zbx at cell centers, wXy/zuy at x-interior corners (walls zeroed).
struct SkewU {
  // cell-centered products and corner products for one row j are rebuilt on
  // the fly; this struct only fixes the conventions in one place.
  const FaceVectorField& w;
  const FaceVectorField& z;

  double wbx(int ic, int j) const { return 0.5 * (w.U(ic, j) + w.U(ic + 1, j)); }
  double zbx(int ic, int j) const { return 0.5 * (z.U(ic, j) + z.U(ic + 1, j)); }
  double wXy(int i, int jc) const {
    if (jc == 0 || jc == w.grid.ny) return 0.0;
    return 0.5 * (w.V(i - 1, jc) + w.V(i, jc));
  }
  double zuy(int i, int jc) const {
    if (jc == 0 || jc == z.grid.ny) return 0.0;
    return 0.5 * (z.U(i, jc - 1) + z.U(i, jc));
  }
};

struct SkewV {
  const FaceVectorField& w;
  const FaceVectorField& z;

  double wby(int i, int jc) const { return 0.5 * (w.V(i, jc) + w.V(i, jc + 1)); }
  double zby(int i, int jc) const { return 0.5 * (z.V(i, jc) + z.V(i, jc + 1)); }
  double wXx(int ic, int j) const {
    if (ic == 0 || ic == w.grid.nx) return 0.0;
    return 0.5 * (w.U(ic, j - 1) + w.U(ic, j));
  }
  double zvx(int ic, int j) const {
    if (ic == 0 || ic == z.grid.nx) return 0.0;
    return 0.5 * (z.V(ic - 1, j) + z.V(ic, j));
  }
};

}  // namespace

FaceVectorField skew_transport(const FaceVectorField& w, const FaceVectorField& z) {
  require_same_grid(w.grid, z.grid, "skew_transport");
  const MacGrid& g = w.grid;
  const double ihx = 1.0 / g.hx();
  const double ihy = 1.0 / g.hy();
  FaceVectorField out(g);
  const SkewU su{w, z};
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 1; i < g.nx; ++i) {
      const double fx = (su.wbx(i, j) * su.zbx(i, j) - su.wbx(i - 1, j) * su.zbx(i - 1, j)) * ihx;
      const double gy = (su.wXy(i, j + 1) * su.zuy(i, j + 1) - su.wXy(i, j) * su.zuy(i, j)) * ihy;
      const double m =
          (su.wbx(i, j) - su.wbx(i - 1, j)) * ihx + (su.wXy(i, j + 1) - su.wXy(i, j)) * ihy;
      out.U(i, j) = fx + gy - 0.5 * m * z.U(i, j);
    }
  }
  const SkewV sv{w, z};
  for (int j = 1; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double fy = (sv.wby(i, j) * sv.zby(i, j) - sv.wby(i, j - 1) * sv.zby(i, j - 1)) * ihy;
      const double gx = (sv.wXx(i + 1, j) * sv.zvx(i + 1, j) - sv.wXx(i, j) * sv.zvx(i, j)) * ihx;
      const double m =
          (sv.wby(i, j) - sv.wby(i, j - 1)) * ihy + (sv.wXx(i + 1, j) - sv.wXx(i, j)) * ihx;
      out.V(i, j) = fy + gx - 0.5 * m * z.V(i, j);
    }
  }
  return out;
}

int interior_u_count(const MacGrid& g) { return (g.nx - 1) * g.ny; }
int interior_v_count(const MacGrid& g) { return g.nx * (g.ny - 1); }

int interior_u_index(const MacGrid& g, int i, int j) { return (i - 1) + j * (g.nx - 1); }

int interior_v_index(const MacGrid& g, int i, int j) {
  return interior_u_count(g) + i + (j - 1) * g.nx;
}

void skew_transport_triplets(const FaceVectorField& w,
                             std::vector<Eigen::Triplet<double>>& out) {
  const MacGrid& g = w.grid;
  const double ihx = 1.0 / g.hx();
  const double ihy = 1.0 / g.hy();
  const SkewU su{w, w};  // z member unused for coefficients
  const SkewV sv{w, w};

  auto addU = [&](int row, int i, int j, double coef) {
    if (coef == 0.0 || i <= 0 || i >= g.nx) return;
    out.emplace_back(row, interior_u_index(g, i, j), coef);
  };
  auto addV = [&](int row, int i, int j, double coef) {
    if (coef == 0.0 || j <= 0 || j >= g.ny) return;
    out.emplace_back(row, interior_v_index(g, i, j), coef);
  };

  for (int j = 0; j < g.ny; ++j) {
    for (int i = 1; i < g.nx; ++i) {
      const int row = interior_u_index(g, i, j);
      const double wE = su.wbx(i, j);
      const double wW = su.wbx(i - 1, j);
      const double wN = su.wXy(i, j + 1);
      const double wS = su.wXy(i, j);
      // Flux differences of wbx*zbx in x and wXy*zuy in y.
      addU(row, i, j, 0.5 * wE * ihx);
      addU(row, i + 1, j, 0.5 * wE * ihx);
      addU(row, i - 1, j, -0.5 * wW * ihx);
      addU(row, i, j, -0.5 * wW * ihx);
      if (j + 1 < g.ny) {
        addU(row, i, j, 0.5 * wN * ihy);
        addU(row, i, j + 1, 0.5 * wN * ihy);
      }
      if (j > 0) {
        addU(row, i, j - 1, -0.5 * wS * ihy);
        addU(row, i, j, -0.5 * wS * ihy);
      }
      const double m = (wE - wW) * ihx + (wN - wS) * ihy;
      addU(row, i, j, -0.5 * m);
    }
  }
  for (int j = 1; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const int row = interior_v_index(g, i, j);
      const double wN = sv.wby(i, j);
      const double wS = sv.wby(i, j - 1);
      const double wE = sv.wXx(i + 1, j);
      const double wW = sv.wXx(i, j);
      addV(row, i, j, 0.5 * wN * ihy);
      addV(row, i, j + 1, 0.5 * wN * ihy);
      addV(row, i, j - 1, -0.5 * wS * ihy);
      addV(row, i, j, -0.5 * wS * ihy);
      if (i + 1 < g.nx) {
        addV(row, i, j, 0.5 * wE * ihx);
        addV(row, i + 1, j, 0.5 * wE * ihx);
      }
      if (i > 0) {
        addV(row, i - 1, j, -0.5 * wW * ihx);
        addV(row, i, j, -0.5 * wW * ihx);
      }
      const double m = (wN - wS) * ihy + (wE - wW) * ihx;
      addV(row, i, j, -0.5 * m);
    }
  }
}

double strain_dissipation(const FaceVectorField& v, const ScalarField& eta) {
  require_same_grid(v.grid, eta.grid, "strain_dissipation");
  const MacGrid& g = v.grid;
  const double ihx = 1.0 / g.hx();
  const double ihy = 1.0 / g.hy();
  const double vol = g.vol();
  double acc = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double dxu = (v.U(i + 1, j) - v.U(i, j)) * ihx;
      const double dyv = (v.V(i, j + 1) - v.V(i, j)) * ihy;
      acc += 2.0 * eta(i, j) * (dxu * dxu + dyv * dyv) * vol;
    }
  for (int jc = 0; jc <= g.ny; ++jc)
    for (int ic = 0; ic <= g.nx; ++ic) {
      double dyu;
      if (jc == 0)
        dyu = 2.0 * v.U(ic, 0) * ihy;
      else if (jc == g.ny)
        dyu = -2.0 * v.U(ic, g.ny - 1) * ihy;
      else
        dyu = (v.U(ic, jc) - v.U(ic, jc - 1)) * ihy;
      double dxv;
      if (ic == 0)
        dxv = 2.0 * v.V(0, jc) * ihx;
      else if (ic == g.nx)
        dxv = -2.0 * v.V(g.nx - 1, jc) * ihx;
      else
        dxv = (v.V(ic, jc) - v.V(ic - 1, jc)) * ihx;
      const double s = dyu + dxv;
      acc += corner_eta(eta, ic, jc) * s * s * vol;
    }
  return acc;
}

namespace {

// One squared linear functional gamma * l(v)^2 of the dissipation form,
// described by its (face, coefficient) pairs restricted to interior faces.
struct QuadTerm {
  int n = 0;
  int idx[4];
  double coef[4];
  double gamma = 0.0;
};

// Enumerate all quadratic terms of strain_dissipation for no-slip fields.
template <typename Fn>
void for_each_strain_term(const MacGrid& g, const ScalarField& eta, Fn&& fn) {
  const double ihx = 1.0 / g.hx();
  const double ihy = 1.0 / g.hy();
  const double vol = g.vol();
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      QuadTerm tx;
      tx.gamma = 2.0 * eta(i, j) * vol;
      if (i + 1 < g.nx) { tx.idx[tx.n] = interior_u_index(g, i + 1, j); tx.coef[tx.n++] = ihx; }
      if (i > 0) { tx.idx[tx.n] = interior_u_index(g, i, j); tx.coef[tx.n++] = -ihx; }
      if (tx.n) fn(tx);
      QuadTerm ty;
      ty.gamma = 2.0 * eta(i, j) * vol;
      if (j + 1 < g.ny) { ty.idx[ty.n] = interior_v_index(g, i, j + 1); ty.coef[ty.n++] = ihy; }
      if (j > 0) { ty.idx[ty.n] = interior_v_index(g, i, j); ty.coef[ty.n++] = -ihy; }
      if (ty.n) fn(ty);
    }
  for (int jc = 0; jc <= g.ny; ++jc)
    for (int ic = 0; ic <= g.nx; ++ic) {
      QuadTerm t;
      t.gamma = corner_eta(eta, ic, jc) * vol;
      if (ic > 0 && ic < g.nx) {
        if (jc == 0) {
          t.idx[t.n] = interior_u_index(g, ic, 0); t.coef[t.n++] = 2.0 * ihy;
        } else if (jc == g.ny) {
          t.idx[t.n] = interior_u_index(g, ic, g.ny - 1); t.coef[t.n++] = -2.0 * ihy;
        } else {
          t.idx[t.n] = interior_u_index(g, ic, jc); t.coef[t.n++] = ihy;
          t.idx[t.n] = interior_u_index(g, ic, jc - 1); t.coef[t.n++] = -ihy;
        }
      }
      if (jc > 0 && jc < g.ny) {
        if (ic == 0) {
          t.idx[t.n] = interior_v_index(g, 0, jc); t.coef[t.n++] = 2.0 * ihx;
        } else if (ic == g.nx) {
          t.idx[t.n] = interior_v_index(g, g.nx - 1, jc); t.coef[t.n++] = -2.0 * ihx;
        } else {
          t.idx[t.n] = interior_v_index(g, ic, jc); t.coef[t.n++] = ihx;
          t.idx[t.n] = interior_v_index(g, ic - 1, jc); t.coef[t.n++] = -ihx;
        }
      }
      if (t.n) fn(t);
    }
}

}  // namespace

FaceVectorField viscous_apply(const FaceVectorField& v, const ScalarField& eta) {
  require_same_grid(v.grid, eta.grid, "viscous_apply");
  const MacGrid& g = v.grid;
  const int nui = interior_u_count(g);
  Eigen::ArrayXd x(nui + interior_v_count(g));
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i) x[interior_u_index(g, i, j)] = v.U(i, j);
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) x[interior_v_index(g, i, j)] = v.V(i, j);
  Eigen::ArrayXd y = Eigen::ArrayXd::Zero(x.size());
  const double ivol = 1.0 / g.vol();
  for_each_strain_term(g, eta, [&](const QuadTerm& t) {
    double l = 0.0;
    for (int k = 0; k < t.n; ++k) l += t.coef[k] * x[t.idx[k]];
    const double s = t.gamma * l * ivol;
    for (int k = 0; k < t.n; ++k) y[t.idx[k]] += t.coef[k] * s;
  });
  FaceVectorField out(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i) out.U(i, j) = y[interior_u_index(g, i, j)];
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) out.V(i, j) = y[interior_v_index(g, i, j)];
  return out;
}

void viscous_triplets(const MacGrid& g, const ScalarField& eta,
                      std::vector<Eigen::Triplet<double>>& out) {
  require_same_grid(g, eta.grid, "viscous_triplets");
  const double ivol = 1.0 / g.vol();
  for_each_strain_term(g, eta, [&](const QuadTerm& t) {
    for (int a = 0; a < t.n; ++a)
      for (int b = 0; b < t.n; ++b)
        out.emplace_back(t.idx[a], t.idx[b], t.gamma * t.coef[a] * t.coef[b] * ivol);
  });
}

}  // namespace aggflow
