#pragma once

#include <vector>

#include "aggflow/config.hpp"

namespace aggflow {

struct CompareMatchedResult {
  double max_diff = 0.0;  // max over steps of all per-field maxima
  double max_diff_phi = 0.0;
  double max_diff_mu = 0.0;
  double max_diff_v = 0.0;
  double max_diff_g = 0.0;
  int steps = 0;
};

// Runs the general assembly with rho1 == rho2 (rho2 is forced to rho1) in
// lockstep against the dedicated matched-density path and records the largest
// per-step state discrepancy.
CompareMatchedResult compare_matched(const Config& cfg);

struct ConvergenceLevel {
  double h = 0.0;
  int steps = 0;
  double err_phi = 0.0;  // ||phi(T) - phi_ref(T)||_h; 0 for the reference row
};

struct ConvergenceResult {
  std::vector<ConvergenceLevel> levels;  // coarse to fine; last is reference
  std::vector<double> orders;  // log2(err_l / err_{l+1}) between refinements
  double slope = 0.0;          // least-squares slope of log(err) vs log(h)
  double T = 0.0;              // common final time = cfg.h * cfg.steps
};

// Temporal self-convergence at fixed grid: levels runs with h, h/2, h/4, ...
// all to the same final time, errors measured against the finest run.
// Requires levels >= 3 (two refinements against the reference).
ConvergenceResult convergence_study(const Config& base, int levels);

}  // namespace aggflow
