#pragma once

#include <cstdint>
#include <string>

#include "aggflow/field.hpp"
#include "aggflow/model.hpp"
#include "aggflow/stepper.hpp"

namespace aggflow {

enum class ScenarioKind { Spinodal, Bubble, Stratified };

// Initial-condition recipe. The generated field always lands in
// [-(1 - 1e-6), 1 - 1e-6], which is admissible for the singular potential.
struct Scenario {
  std::string name = "run";
  ScenarioKind kind = ScenarioKind::Spinodal;

  // spinodal: per-cell uniform perturbation around mean, fixed LCG
  // (x <- 6364136223846793005 x + 1442695040888963407 mod 2^64, advance then
  // take u = (x >> 11) * 2^-53), cells in row-major order with x fastest.
  std::uint64_t seed = 42;
  double amplitude = 0.05;
  double mean = 0.0;

  // bubble: phi = tanh((radius - |x - center|) / width), positive inside.
  double center_x = 0.5;
  double center_y = 0.5;
  double radius = 0.25;

  // stratified: phi = tanh((y - height) / width), positive above.
  double height = 0.5;

  double width = 0.05;  // interface width of bubble and stratified profiles

  // Damped Jacobi sweeps applied after generation (0..5); they preserve the
  // mean exactly in exact arithmetic.
  int smoothing_sweeps = 0;
};

ScalarField initial_phi(const MacGrid& grid, const Scenario& sc);

// phi from the generator, v = 0, g = 0, mu consistent with phi (one
// chemical-potential evaluation at phi = phi_k = phi0).
SimState initial_state(const MacGrid& grid, const Scenario& sc,
                       const TransformA& transform);

}  // namespace aggflow
