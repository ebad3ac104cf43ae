#pragma once

#include <cstdint>
#include <string>

#include "aggflow/model.hpp"
#include "aggflow/scenario.hpp"
#include "aggflow/stepper.hpp"

namespace aggflow {

// Resolved run configuration. The file format is a flat JSON object with
// dotted keys; every field below is a key, all defaults are echoed, unknown
// keys are rejected. Coefficients configured here are constants; tabulated
// profiles are a library-level feature.
struct Config {
  int nx = 64;
  int ny = 64;
  double Lx = 1.0;
  double Ly = 1.0;

  double rho1 = 1.0;
  double rho2 = 1.0;
  std::string variant = "agg";  // "agg" | "agg-kinetic"
  std::string potential = "logarithmic";  // "logarithmic" | "double-well"
  double theta = 1.0;
  double theta_c = 2.0;
  double well_scale = 1.0;
  double mobility = 1.0;
  double viscosity = 1.0;
  double gradient_coeff = 1.0;

  std::string scenario_name = "run";
  std::string scenario = "spinodal";  // "spinodal" | "bubble" | "stratified"
  std::uint64_t seed = 42;
  double amplitude = 0.05;
  double mean = 0.0;
  double center_x = 0.5;
  double center_y = 0.5;
  double radius = 0.25;
  double width = 0.05;
  double height = 0.5;
  int smoothing_sweeps = 0;

  double h = 1e-3;
  int steps = 100;

  double outer_tol = 1e-9;
  int outer_max_iter = 50;
  double under_relaxation = 0.7;
  double eps_audit = 0.0;
  bool model_h_path = false;

  double newton_tol = 1e-10;
  int newton_max_iter = 50;
  double damping_min = 1e-4;

  double lin_tol = 1e-10;
  int lin_max_iter = 2;

  std::string out_dir = "out";
  std::string csv_name = "energy.csv";
  int snapshot_every = 0;  // 0 disables snapshots
  bool vtk = false;
};

// Parse and validate; throws ParseError for malformed JSON, wrong value
// types, or unknown keys, and ValidationError for out-of-range values.
Config config_from_text(const std::string& text);
Config load_config(const std::string& path);

// Deterministic echo: every key, fixed order, numbers at 17 significant
// digits, so load(echo(load(x))) == load(x).
std::string echo_config(const Config& c);

MacGrid make_grid(const Config& c);
ModelParams make_params(const Config& c);
Scenario make_scenario(const Config& c);
StepperConfig make_stepper_config(const Config& c);

}  // namespace aggflow
