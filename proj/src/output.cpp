#include "aggflow/output.hpp"

#include <bit>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "json.hpp"

#include "aggflow/scenario.hpp"

namespace aggflow {

namespace fs = std::filesystem;
using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "raw snapshots are written in the native byte order and the "
              "format is specified little-endian");

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(const std::string& tok, const std::string& where) {
  const char* s = tok.c_str();
  char* end = nullptr;
  double v = std::strtod(s, &end);
  if (end == s || *end != '\0')
    throw ParseError("energy csv: bad number '" + tok + "' in " + where);
  return v;
}

int parse_int(const std::string& tok, const std::string& where) {
  const char* s = tok.c_str();
  char* end = nullptr;
  long v = std::strtol(s, &end, 10);
  if (end == s || *end != '\0')
    throw ParseError("energy csv: bad integer '" + tok + "' in " + where);
  return static_cast<int>(v);
}

void write_raw(const std::string& path, const double* data, std::ptrdiff_t n) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("snapshot: cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(data), n * 8);
  if (!out) throw IoError("snapshot: short write to '" + path + "'");
}

void read_raw(const std::string& path, double* data, std::ptrdiff_t n) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("snapshot: cannot open '" + path + "'");
  in.read(reinterpret_cast<char*>(data), n * 8);
  if (in.gcount() != n * 8) throw IoError("snapshot: short read from '" + path + "'");
}

}  // namespace

EnergyCsvWriter::EnergyCsvWriter(const std::string& path) : out_(path) {
  if (!out_) throw IoError("energy csv: cannot open '" + path + "' for writing");
  out_ << kEnergyCsvHeader << '\n';
}

void EnergyCsvWriter::write_row(const SimState& s, const EnergyReport& r) {
  out_ << s.step << ',' << fmt17(s.t) << ',' << fmt17(r.E_kin) << ','
       << fmt17(r.E_free) << ',' << fmt17(r.E_tot) << ',' << fmt17(r.visc_diss)
       << ',' << fmt17(r.mob_diss) << ',' << fmt17(r.inertia_defect) << ','
       << fmt17(r.transform_defect) << ',' << fmt17(r.ineq_residual) << ','
       << fmt17(r.mass) << ',' << fmt17(r.min_phi) << ',' << fmt17(r.max_phi)
       << ',' << fmt17(r.div_v_inf) << ',' << r.outer_iters << ','
       << r.newton_iters << ',' << r.lin_iters << '\n';
  out_.flush();
  if (!out_) throw IoError("energy csv: write failed");
}

std::vector<EnergyCsvRow> read_energy_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("energy csv: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ParseError("energy csv: empty file");
  if (line == std::string(kEnergyCsvHeader) + "\r") line.pop_back();
  if (line != kEnergyCsvHeader)
    throw ParseError("energy csv: unexpected header '" + line + "'");

  std::vector<EnergyCsvRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> tok;
    std::stringstream ss(line);
    std::string t;
    while (std::getline(ss, t, ',')) tok.push_back(t);
    const std::string where = "line " + std::to_string(lineno);
    if (tok.size() != 17)
      throw ParseError("energy csv: expected 17 columns in " + where);
    EnergyCsvRow row;
    row.step = parse_int(tok[0], where);
    row.time = parse_double(tok[1], where);
    row.r.E_kin = parse_double(tok[2], where);
    row.r.E_free = parse_double(tok[3], where);
    row.r.E_tot = parse_double(tok[4], where);
    row.r.visc_diss = parse_double(tok[5], where);
    row.r.mob_diss = parse_double(tok[6], where);
    row.r.inertia_defect = parse_double(tok[7], where);
    row.r.transform_defect = parse_double(tok[8], where);
    row.r.ineq_residual = parse_double(tok[9], where);
    row.r.mass = parse_double(tok[10], where);
    row.r.min_phi = parse_double(tok[11], where);
    row.r.max_phi = parse_double(tok[12], where);
    row.r.div_v_inf = parse_double(tok[13], where);
    row.r.outer_iters = parse_int(tok[14], where);
    row.r.newton_iters = parse_int(tok[15], where);
    row.r.lin_iters = parse_int(tok[16], where);
    rows.push_back(row);
  }
  return rows;
}

void write_snapshot(const SimState& s, const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("snapshot: cannot create directory '" + dir + "'");
  const MacGrid& g = s.phi.grid;

  json meta;
  meta["nx"] = g.nx;
  meta["ny"] = g.ny;
  meta["Lx"] = g.Lx;
  meta["Ly"] = g.Ly;
  meta["hx"] = g.hx();
  meta["hy"] = g.hy();
  meta["time"] = s.t;
  meta["step"] = s.step;
  meta["fields"] = json::array();
  auto field = [&](const char* name, const double* data, int count, int sx, int sy) {
    const std::string file = std::string(name) + ".raw";
    write_raw(dir + "/" + file, data, count);
    meta["fields"].push_back(
        {{"name", name}, {"file", file}, {"count", count}, {"shape", {sx, sy}}});
  };
  field("phi", s.phi.data.data(), g.ncells(), g.nx, g.ny);
  field("mu", s.mu.data.data(), g.ncells(), g.nx, g.ny);
  field("g", s.g.data.data(), g.ncells(), g.nx, g.ny);
  field("u", s.v.u.data(), g.nu(), g.nx + 1, g.ny);
  field("v", s.v.v.data(), g.nv(), g.nx, g.ny + 1);

  std::ofstream out(dir + "/meta.json");
  if (!out) throw IoError("snapshot: cannot write meta.json in '" + dir + "'");
  out << meta.dump(2) << '\n';
  if (!out) throw IoError("snapshot: write failed for meta.json");
}

SimState read_snapshot(const std::string& dir) {
  std::ifstream in(dir + "/meta.json");
  if (!in) throw IoError("snapshot: cannot open '" + dir + "/meta.json'");
  json meta;
  try {
    in >> meta;
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("snapshot meta: ") + e.what());
  }
  MacGrid g(meta.at("nx").get<int>(), meta.at("ny").get<int>(),
            meta.at("Lx").get<double>(), meta.at("Ly").get<double>());
  SimState s(g);
  s.t = meta.at("time").get<double>();
  s.step = meta.at("step").get<int>();
  read_raw(dir + "/phi.raw", s.phi.data.data(), g.ncells());
  read_raw(dir + "/mu.raw", s.mu.data.data(), g.ncells());
  read_raw(dir + "/g.raw", s.g.data.data(), g.ncells());
  read_raw(dir + "/u.raw", s.v.u.data(), g.nu());
  read_raw(dir + "/v.raw", s.v.v.data(), g.nv());
  return s;
}

void write_vtk(const SimState& s, const std::string& path) {
  const MacGrid& g = s.phi.grid;
  std::ofstream out(path);
  if (!out) throw IoError("vtk: cannot open '" + path + "' for writing");
  out << "# vtk DataFile Version 3.0\n";
  out << "two-phase flow state, step " << s.step << ", time " << fmt17(s.t) << "\n";
  out << "ASCII\nDATASET STRUCTURED_POINTS\n";
  out << "DIMENSIONS " << g.nx + 1 << ' ' << g.ny + 1 << " 1\n";
  out << "ORIGIN 0 0 0\n";
  out << "SPACING " << fmt17(g.hx()) << ' ' << fmt17(g.hy()) << " 1\n";
  out << "CELL_DATA " << g.ncells() << "\n";
  auto scalars = [&](const char* name, const Eigen::ArrayXd& d) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (int c = 0; c < g.ncells(); ++c) out << fmt17(d[c]) << '\n';
  };
  scalars("phi", s.phi.data);
  scalars("mu", s.mu.data);
  scalars("g", s.g.data);
  out << "VECTORS velocity double\n";
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double uc = 0.5 * (s.v.U(i, j) + s.v.U(i + 1, j));
      const double vc = 0.5 * (s.v.V(i, j) + s.v.V(i, j + 1));
      out << fmt17(uc) << ' ' << fmt17(vc) << " 0\n";
    }
  if (!out) throw IoError("vtk: write failed for '" + path + "'");
}

RunSummary run_simulation(const Config& cfg) {
  MacGrid g = make_grid(cfg);
  ModelParams params = make_params(cfg);
  TransformA tr(params.a, params.potential);
  SimState s0 = initial_state(g, make_scenario(cfg), tr);

  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) throw IoError("run: cannot create output directory '" + cfg.out_dir + "'");
  const std::string csv_path = cfg.out_dir + "/" + cfg.csv_name;
  const std::string snapdir = cfg.out_dir + "/snapshots";
  EnergyCsvWriter writer(csv_path);

  StepCallback cb = [&](const SimState& st, const EnergyReport& r) {
    writer.write_row(st, r);
    const bool due = cfg.snapshot_every > 0 &&
                     (st.step % cfg.snapshot_every == 0 || st.step == cfg.steps);
    if (due) {
      char name[32];
      std::snprintf(name, sizeof name, "step_%06d", st.step);
      write_snapshot(st, snapdir + "/" + name);
      if (cfg.vtk) write_vtk(st, snapdir + "/" + name + ".vtk");
    }
  };

  RunResult res = run(s0, params, tr, make_stepper_config(cfg), cfg.steps, cb);

  const std::string echo = echo_config(cfg);
  {
    std::ofstream out(cfg.out_dir + "/config.echo.json");
    if (!out) throw IoError("run: cannot write config echo");
    out << echo;
  }
  json manifest;
  manifest["version"] = kVersion;
  manifest["seed"] = cfg.seed;
  manifest["steps"] = cfg.steps;
  manifest["h_final"] = res.h_final;
  manifest["halvings"] = res.halvings;
  manifest["E0"] = res.E0;
  manifest["config"] = json::parse(echo);
  const std::string manifest_path = cfg.out_dir + "/manifest.json";
  {
    std::ofstream out(manifest_path);
    if (!out) throw IoError("run: cannot write manifest");
    out << manifest.dump(2) << '\n';
  }
  return RunSummary{std::move(res), {csv_path, snapdir, echo, manifest_path}};
}

}  // namespace aggflow
