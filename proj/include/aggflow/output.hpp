#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "aggflow/config.hpp"
#include "aggflow/stepper.hpp"

namespace aggflow {

inline constexpr const char* kVersion = "0.1.0";

inline constexpr const char* kEnergyCsvHeader =
    "step,time,E_kin,E_free,E_tot,visc_diss,mob_diss,inertia_defect,"
    "transform_defect,ineq_residual,mass,min_phi,max_phi,div_v_inf,"
    "outer_iters,newton_iters,lin_iters";

// Streams one row per accepted step (plus the initial state); floating-point
// columns carry 17 significant digits so they re-parse to the same doubles.
class EnergyCsvWriter {
 public:
  explicit EnergyCsvWriter(const std::string& path);
  void write_row(const SimState& s, const EnergyReport& r);

 private:
  std::ofstream out_;
};

struct EnergyCsvRow {
  int step = 0;
  double time = 0.0;
  EnergyReport r;
};

std::vector<EnergyCsvRow> read_energy_csv(const std::string& path);

// Snapshot layout: one raw file of little-endian f64 per field (phi, mu, g at
// cells; u, v at faces), row-major with x fastest, plus meta.json holding
// grid dims, spacings, time, step and the field list.
void write_snapshot(const SimState& s, const std::string& dir);
SimState read_snapshot(const std::string& dir);

// Legacy VTK structured-points export (cell data; velocity averaged to cell
// centers) for standard viewers.
void write_vtk(const SimState& s, const std::string& path);

struct RunArtifacts {
  std::string csv_path;
  std::string snapshot_dir;  // parent of the per-step snapshot directories
  std::string config_echo;   // resolved configuration text
  std::string manifest_path;
};

struct RunSummary {
  RunResult result;
  RunArtifacts artifacts;
};

// Full pipeline for one configuration: scenario, time loop, energy CSV,
// optional snapshots/VTK, config echo and manifest under cfg.out_dir.
RunSummary run_simulation(const Config& cfg);

}  // namespace aggflow
