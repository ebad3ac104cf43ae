#include "aggflow/config.hpp"

#include <fstream>
#include <functional>
#include <sstream>
#include <utility>
#include <vector>

#include "json.hpp"

namespace aggflow {

namespace {

using nlohmann::json;

struct KeyBinding {
  const char* key;
  std::function<void(Config&, const json&)> set;
  std::function<json(const Config&)> get;
};

[[noreturn]] void type_error(const char* key, const char* want) {
  throw ParseError(std::string("config key '") + key + "': expected " + want);
}

KeyBinding bind_double(const char* key, double Config::*m) {
  return {key,
          [key, m](Config& c, const json& v) {
            if (!v.is_number()) type_error(key, "a number");
            c.*m = v.get<double>();
          },
          [m](const Config& c) { return json(c.*m); }};
}

KeyBinding bind_int(const char* key, int Config::*m) {
  return {key,
          [key, m](Config& c, const json& v) {
            if (!v.is_number_integer()) type_error(key, "an integer");
            c.*m = v.get<int>();
          },
          [m](const Config& c) { return json(c.*m); }};
}

KeyBinding bind_u64(const char* key, std::uint64_t Config::*m) {
  return {key,
          [key, m](Config& c, const json& v) {
            if (!v.is_number_integer()) type_error(key, "a nonnegative integer");
            if (!v.is_number_unsigned() && v.get<long long>() < 0)
              type_error(key, "a nonnegative integer");
            c.*m = v.get<std::uint64_t>();
          },
          [m](const Config& c) { return json(c.*m); }};
}

KeyBinding bind_bool(const char* key, bool Config::*m) {
  return {key,
          [key, m](Config& c, const json& v) {
            if (!v.is_boolean()) type_error(key, "a boolean");
            c.*m = v.get<bool>();
          },
          [m](const Config& c) { return json(c.*m); }};
}

KeyBinding bind_string(const char* key, std::string Config::*m) {
  return {key,
          [key, m](Config& c, const json& v) {
            if (!v.is_string()) type_error(key, "a string");
            c.*m = v.get<std::string>();
          },
          [m](const Config& c) { return json(c.*m); }};
}

const std::vector<KeyBinding>& bindings() {
  static const std::vector<KeyBinding> b = {
      bind_int("grid.nx", &Config::nx),
      bind_int("grid.ny", &Config::ny),
      bind_double("grid.Lx", &Config::Lx),
      bind_double("grid.Ly", &Config::Ly),
      bind_double("model.rho1", &Config::rho1),
      bind_double("model.rho2", &Config::rho2),
      bind_string("model.variant", &Config::variant),
      bind_string("model.potential", &Config::potential),
      bind_double("model.theta", &Config::theta),
      bind_double("model.theta_c", &Config::theta_c),
      bind_double("model.well_scale", &Config::well_scale),
      bind_double("model.mobility", &Config::mobility),
      bind_double("model.viscosity", &Config::viscosity),
      bind_double("model.gradient_coeff", &Config::gradient_coeff),
      bind_string("scenario.name", &Config::scenario_name),
      bind_string("scenario.kind", &Config::scenario),
      bind_u64("scenario.seed", &Config::seed),
      bind_double("scenario.amplitude", &Config::amplitude),
      bind_double("scenario.mean", &Config::mean),
      bind_double("scenario.center_x", &Config::center_x),
      bind_double("scenario.center_y", &Config::center_y),
      bind_double("scenario.radius", &Config::radius),
      bind_double("scenario.width", &Config::width),
      bind_double("scenario.height", &Config::height),
      bind_int("scenario.smoothing_sweeps", &Config::smoothing_sweeps),
      bind_double("time.h", &Config::h),
      bind_int("time.steps", &Config::steps),
      bind_double("stepper.outer_tol", &Config::outer_tol),
      bind_int("stepper.outer_max_iter", &Config::outer_max_iter),
      bind_double("stepper.under_relaxation", &Config::under_relaxation),
      bind_double("stepper.eps_audit", &Config::eps_audit),
      bind_bool("stepper.model_h_path", &Config::model_h_path),
      bind_double("ch.newton_tol", &Config::newton_tol),
      bind_int("ch.newton_max_iter", &Config::newton_max_iter),
      bind_double("ch.damping_min", &Config::damping_min),
      bind_double("ns.lin_tol", &Config::lin_tol),
      bind_int("ns.lin_max_iter", &Config::lin_max_iter),
      bind_string("output.dir", &Config::out_dir),
      bind_string("output.csv", &Config::csv_name),
      bind_int("output.snapshot_every", &Config::snapshot_every),
      bind_bool("output.vtk", &Config::vtk),
  };
  return b;
}

void check(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError("config: " + msg);
}

void validate(const Config& c) {
  check(c.nx >= 4 && c.ny >= 4, "grid.nx and grid.ny must be at least 4");
  check(c.Lx > 0.0 && c.Ly > 0.0, "grid extents must be positive");
  check(c.rho1 > 0.0 && c.rho2 > 0.0, "densities must be positive");
  check(c.variant == "agg" || c.variant == "agg-kinetic",
        "model.variant must be 'agg' or 'agg-kinetic'");
  check(c.potential == "logarithmic" || c.potential == "double-well",
        "model.potential must be 'logarithmic' or 'double-well'");
  check(c.theta > 0.0, "model.theta must be positive");
  check(c.theta_c >= 0.0, "model.theta_c must be nonnegative");
  check(c.well_scale > 0.0, "model.well_scale must be positive");
  check(c.mobility > 0.0, "model.mobility must be positive");
  check(c.viscosity > 0.0, "model.viscosity must be positive");
  check(c.gradient_coeff > 0.0, "model.gradient_coeff must be positive");
  check(c.scenario == "spinodal" || c.scenario == "bubble" || c.scenario == "stratified",
        "scenario.kind must be 'spinodal', 'bubble' or 'stratified'");
  check(c.amplitude >= 0.0, "scenario.amplitude must be nonnegative");
  check(c.mean > -1.0 && c.mean < 1.0, "scenario.mean must lie in (-1, 1)");
  check(c.radius > 0.0, "scenario.radius must be positive");
  check(c.width > 0.0, "scenario.width must be positive");
  check(c.smoothing_sweeps >= 0 && c.smoothing_sweeps <= 5,
        "scenario.smoothing_sweeps must lie in [0, 5]");
  check(c.h > 0.0, "time.h must be positive");
  check(c.steps >= 0, "time.steps must be nonnegative");
  check(c.outer_tol > 0.0, "stepper.outer_tol must be positive");
  check(c.outer_max_iter >= 1, "stepper.outer_max_iter must be at least 1");
  check(c.under_relaxation > 0.0 && c.under_relaxation <= 1.0,
        "stepper.under_relaxation must lie in (0, 1]");
  check(c.eps_audit >= 0.0, "stepper.eps_audit must be nonnegative");
  check(c.newton_tol > 0.0, "ch.newton_tol must be positive");
  check(c.newton_max_iter >= 1, "ch.newton_max_iter must be at least 1");
  check(c.damping_min > 0.0 && c.damping_min < 1.0, "ch.damping_min must lie in (0, 1)");
  check(c.lin_tol > 0.0, "ns.lin_tol must be positive");
  check(c.lin_max_iter >= 0, "ns.lin_max_iter must be nonnegative");
  check(c.snapshot_every >= 0, "output.snapshot_every must be nonnegative");
  if (c.model_h_path)
    check(c.rho1 == c.rho2, "stepper.model_h_path requires model.rho1 == model.rho2");
}

}  // namespace

Config config_from_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("config: top level must be a JSON object");

  Config c;
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const auto& b : bindings()) {
      if (key == b.key) {
        b.set(c, value);
        known = true;
        break;
      }
    }
    if (!known) throw ParseError("config: unknown key '" + key + "'");
  }
  validate(c);
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return config_from_text(buf.str());
}

std::string echo_config(const Config& c) {
  json j = json::object();
  for (const auto& b : bindings()) j[b.key] = b.get(c);
  return j.dump(2) + "\n";
}

MacGrid make_grid(const Config& c) { return MacGrid(c.nx, c.ny, c.Lx, c.Ly); }

ModelParams make_params(const Config& c) {
  PotentialSpec pot = c.potential == "logarithmic"
                          ? PotentialSpec::logarithmic(c.theta, c.theta_c)
                          : PotentialSpec::double_well(c.well_scale);
  ModelVariant variant =
      c.variant == "agg" ? ModelVariant::Agg : ModelVariant::AggKinetic;
  return ModelParams(c.rho1, c.rho2, CoefficientProfile::constant(c.gradient_coeff),
                     CoefficientProfile::constant(c.mobility),
                     CoefficientProfile::constant(c.viscosity), pot, variant);
}

Scenario make_scenario(const Config& c) {
  Scenario sc;
  sc.name = c.scenario_name;
  sc.kind = c.scenario == "spinodal"  ? ScenarioKind::Spinodal
            : c.scenario == "bubble"  ? ScenarioKind::Bubble
                                      : ScenarioKind::Stratified;
  sc.seed = c.seed;
  sc.amplitude = c.amplitude;
  sc.mean = c.mean;
  sc.center_x = c.center_x;
  sc.center_y = c.center_y;
  sc.radius = c.radius;
  sc.width = c.width;
  sc.height = c.height;
  sc.smoothing_sweeps = c.smoothing_sweeps;
  return sc;
}

StepperConfig make_stepper_config(const Config& c) {
  StepperConfig s;
  s.h = c.h;
  s.outer_tol = c.outer_tol;
  s.outer_max_iter = c.outer_max_iter;
  s.under_relaxation = c.under_relaxation;
  s.eps_audit = c.eps_audit;
  s.model_h_path = c.model_h_path;
  s.ch.newton_tol = c.newton_tol;
  s.ch.newton_max_iter = c.newton_max_iter;
  s.ch.damping_min = c.damping_min;
  s.ns.lin_tol = c.lin_tol;
  s.ns.lin_max_iter = c.lin_max_iter;
  return s;
}

}  // namespace aggflow
