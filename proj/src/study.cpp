#include "aggflow/study.hpp"

#include <cmath>

#include "aggflow/scenario.hpp"

namespace aggflow {

CompareMatchedResult compare_matched(const Config& cfg_in) {
  Config cfg = cfg_in;
  cfg.rho2 = cfg.rho1;  // the comparison is defined for matched densities
  cfg.model_h_path = false;

  MacGrid g = make_grid(cfg);
  ModelParams params = make_params(cfg);
  TransformA tr(params.a, params.potential);
  SimState general = initial_state(g, make_scenario(cfg), tr);
  SimState matched = general;

  StepperConfig sc_general = make_stepper_config(cfg);
  StepperConfig sc_matched = sc_general;
  sc_matched.model_h_path = true;

  CompareMatchedResult out;
  out.steps = cfg.steps;
  for (int n = 0; n < cfg.steps; ++n) {
    step(general, params, tr, sc_general);
    step(matched, params, tr, sc_matched);
    out.max_diff_phi = std::max(out.max_diff_phi,
                                (general.phi.data - matched.phi.data).abs().maxCoeff());
    out.max_diff_mu = std::max(out.max_diff_mu,
                               (general.mu.data - matched.mu.data).abs().maxCoeff());
    out.max_diff_v = std::max({out.max_diff_v,
                               (general.v.u - matched.v.u).abs().maxCoeff(),
                               (general.v.v - matched.v.v).abs().maxCoeff()});
    out.max_diff_g = std::max(out.max_diff_g,
                              (general.g.data - matched.g.data).abs().maxCoeff());
  }
  out.max_diff =
      std::max({out.max_diff_phi, out.max_diff_mu, out.max_diff_v, out.max_diff_g});
  return out;
}

ConvergenceResult convergence_study(const Config& base, int levels) {
  if (levels < 3)
    throw ValidationError("convergence_study: need at least 3 levels");
  if (base.steps < 1)
    throw ValidationError("convergence_study: time.steps must be >= 1");

  MacGrid g = make_grid(base);
  ModelParams params = make_params(base);
  TransformA tr(params.a, params.potential);
  SimState s0 = initial_state(g, make_scenario(base), tr);

  ConvergenceResult out;
  out.T = base.h * base.steps;
  std::vector<ScalarField> finals;
  finals.reserve(levels);
  for (int l = 0; l < levels; ++l) {
    StepperConfig sc = make_stepper_config(base);
    sc.h = base.h / static_cast<double>(1 << l);
    const int steps = base.steps * (1 << l);
    RunResult rr = run(s0, params, tr, sc, steps);
    if (rr.halvings > 0)
      throw ValidationError("convergence_study: a level needed step-size halving; "
                            "choose a smaller base h");
    finals.push_back(rr.state.phi);
    out.levels.push_back({sc.h, steps, 0.0});
  }

  const ScalarField& ref = finals.back();
  for (int l = 0; l + 1 < levels; ++l) {
    ScalarField d(g);
    d.data = finals[l].data - ref.data;
    out.levels[l].err_phi = norm_h(d);
  }
  for (int l = 0; l + 2 < levels; ++l)
    out.orders.push_back(std::log2(out.levels[l].err_phi /
                                   out.levels[l + 1].err_phi));

  // Least-squares slope of log(err) against log(h) over the non-reference
  // levels.
  const int m = levels - 1;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int l = 0; l < m; ++l) {
    const double x = std::log(out.levels[l].h);
    const double y = std::log(out.levels[l].err_phi);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  out.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return out;
}

}  // namespace aggflow
