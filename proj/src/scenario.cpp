#include "aggflow/scenario.hpp"

#include <cmath>

#include "aggflow/ch_solver.hpp"

namespace aggflow {

namespace {

constexpr double kPhiCap = 1.0 - 1e-6;

struct Lcg {
  std::uint64_t x;
  double next() {
    x = 6364136223846793005ULL * x + 1442695040888963407ULL;
    return static_cast<double>(x >> 11) * 0x1.0p-53;
  }
};

void smooth(ScalarField& phi, int sweeps) {
  const MacGrid& g = phi.grid;
  ScalarField acc(g);
  for (int s = 0; s < sweeps; ++s) {
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        double d = 0.0;
        const double c = phi(i, j);
        if (i > 0) d += phi(i - 1, j) - c;
        if (i + 1 < g.nx) d += phi(i + 1, j) - c;
        if (j > 0) d += phi(i, j - 1) - c;
        if (j + 1 < g.ny) d += phi(i, j + 1) - c;
        acc(i, j) = d;
      }
    phi.data += 0.2 * acc.data;
  }
}

}  // namespace

ScalarField initial_phi(const MacGrid& grid, const Scenario& sc) {
  if (sc.smoothing_sweeps < 0 || sc.smoothing_sweeps > 5)
    throw ValidationError("initial_phi: smoothing_sweeps must lie in [0, 5]");
  if (!(sc.mean > -1.0 && sc.mean < 1.0))
    throw ValidationError("initial_phi: mean must lie in (-1, 1)");
  if (!(sc.amplitude >= 0.0))
    throw ValidationError("initial_phi: amplitude must be >= 0");
  if (sc.kind != ScenarioKind::Spinodal && !(sc.width > 0.0))
    throw ValidationError("initial_phi: interface width must be > 0");

  ScalarField phi(grid);
  switch (sc.kind) {
    case ScenarioKind::Spinodal: {
      Lcg rng{sc.seed};
      for (int c = 0; c < grid.ncells(); ++c)
        phi.data[c] = sc.mean + sc.amplitude * (2.0 * rng.next() - 1.0);
      break;
    }
    case ScenarioKind::Bubble: {
      for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
          const double x = (i + 0.5) * grid.hx();
          const double y = (j + 0.5) * grid.hy();
          const double d = std::hypot(x - sc.center_x, y - sc.center_y);
          phi(i, j) = std::tanh((sc.radius - d) / sc.width);
        }
      break;
    }
    case ScenarioKind::Stratified: {
      for (int j = 0; j < grid.ny; ++j) {
        const double y = (j + 0.5) * grid.hy();
        const double val = std::tanh((y - sc.height) / sc.width);
        for (int i = 0; i < grid.nx; ++i) phi(i, j) = val;
      }
      break;
    }
  }
  smooth(phi, sc.smoothing_sweeps);
  phi.data = phi.data.min(kPhiCap).max(-kPhiCap);
  return phi;
}

SimState initial_state(const MacGrid& grid, const Scenario& sc,
                       const TransformA& transform) {
  SimState s(grid);
  s.phi = initial_phi(grid, sc);
  s.mu = mu_from_phi(s.phi, s.phi, transform);
  return s;
}

}  // namespace aggflow
