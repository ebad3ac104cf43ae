#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "aggflow/config.hpp"
#include "aggflow/errors.hpp"
#include "aggflow/output.hpp"
#include "aggflow/stepper.hpp"
#include "aggflow/study.hpp"
#include "aggflow/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitSolver = 2;
constexpr int kExitInvariant = 3;

int cmd_run(const std::string& path) {
  aggflow::Config cfg = aggflow::load_config(path);
  aggflow::RunSummary s = aggflow::run_simulation(cfg);

  const aggflow::RunResult& rr = s.result;
  const aggflow::EnergyReport& last = rr.reports.back();
  std::printf("completed %d steps (h_final=%.6g, retries=%d)\n",
              rr.state.step, rr.h_final, rr.halvings);
  std::printf("E_tot %.12g -> %.12g   mass %.12g   phi in [%.9f, %.9f]\n",
              rr.E0, last.E_tot, last.mass, last.min_phi, last.max_phi);
  std::printf("energy csv: %s\n", s.artifacts.csv_path.c_str());
  std::printf("manifest:   %s\n", s.artifacts.manifest_path.c_str());

  aggflow::StepperConfig scfg = aggflow::make_stepper_config(cfg);
  bool ok = true;
  for (std::size_t n = 1; n < rr.reports.size(); ++n) {
    aggflow::AuditResult a =
        aggflow::audit_energy_inequality(rr.reports[n], scfg, rr.E0);
    if (!a.pass) {
      std::fprintf(stderr,
                   "invariant violation at step %zu: energy residual %.6e "
                   "below -%.6e\n",
                   n, a.residual, a.eps);
      ok = false;
    }
  }
  return ok ? kExitOk : kExitInvariant;
}

int cmd_verify(const std::string& suite) {
  std::vector<aggflow::PropertyResult> results = aggflow::verify_suite(suite);
  int failed = 0;
  for (const auto& r : results) {
    std::printf("[%s] %-58s worst=%.3e bound=%.3e%s%s\n",
                r.pass ? "PASS" : "FAIL", r.name.c_str(), r.worst, r.bound,
                r.detail.empty() ? "" : "  ", r.detail.c_str());
    if (!r.pass) ++failed;
  }
  std::printf("%zu properties, %d failed\n", results.size(), failed);
  return failed == 0 ? kExitOk : kExitInvariant;
}

int cmd_convergence(const std::string& path, int levels) {
  aggflow::Config cfg = aggflow::load_config(path);
  aggflow::ConvergenceResult cr = aggflow::convergence_study(cfg, levels);
  std::printf("final time T=%.6g, reference h=%.6g\n", cr.T,
              cr.levels.back().h);
  for (std::size_t l = 0; l + 1 < cr.levels.size(); ++l) {
    std::printf("h=%-12.6g steps=%-7d err_phi=%.6e", cr.levels[l].h,
                cr.levels[l].steps, cr.levels[l].err_phi);
    if (l > 0) std::printf("  order=%.3f", cr.orders[l - 1]);
    std::printf("\n");
  }
  std::printf("least-squares temporal order: %.3f\n", cr.slope);
  return kExitOk;
}

int cmd_compare_matched(const std::string& path) {
  aggflow::Config cfg = aggflow::load_config(path);
  aggflow::CompareMatchedResult m = aggflow::compare_matched(cfg);
  std::printf("matched-density comparison over %d steps\n", m.steps);
  std::printf("  max |dphi| = %.3e\n", m.max_diff_phi);
  std::printf("  max |dmu|  = %.3e\n", m.max_diff_mu);
  std::printf("  max |dv|   = %.3e\n", m.max_diff_v);
  std::printf("  max |dg|   = %.3e\n", m.max_diff_g);
  std::printf("  overall    = %.3e\n", m.max_diff);
  if (m.max_diff > 1e-12) {
    std::fprintf(stderr,
                 "invariant violation: matched run deviates from the "
                 "constant-density path by %.3e (> 1e-12)\n",
                 m.max_diff);
    return kExitInvariant;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"aggflow: diffuse-interface incompressible two-phase flow"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(aggflow::kVersion));

  std::string run_cfg;
  CLI::App* run = app.add_subcommand("run", "Run a simulation from a config file");
  run->add_option("config", run_cfg, "JSON config path")->required();

  std::string suite = "all";
  CLI::App* verify =
      app.add_subcommand("verify", "Run the discrete-invariant property suites");
  verify->add_option("--suite", suite, "ops | ch | ns | energy | all")
      ->check(CLI::IsMember({"ops", "ch", "ns", "energy", "all"}));

  std::string conv_cfg;
  int levels = 4;
  CLI::App* conv = app.add_subcommand(
      "convergence", "Temporal self-convergence study against a finest run");
  conv->add_option("config", conv_cfg, "JSON config path")->required();
  conv->add_option("--levels", levels, "number of runs including the reference")
      ->check(CLI::Range(3, 10));

  std::string cmp_cfg;
  CLI::App* cmp = app.add_subcommand(
      "compare-matched",
      "Step the general scheme with equal densities against the dedicated "
      "constant-density path");
  cmp->add_option("config", cmp_cfg, "JSON config path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << std::flush;
    return kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(run_cfg);
    if (verify->parsed()) return cmd_verify(suite);
    if (conv->parsed()) return cmd_convergence(conv_cfg, levels);
    if (cmp->parsed()) return cmd_compare_matched(cmp_cfg);
  } catch (const aggflow::ParseError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const aggflow::ValidationError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const aggflow::IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return kExitConfig;
  } catch (const aggflow::NewtonDiverged& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return kExitSolver;
  } catch (const aggflow::StepNotAdmissible& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return kExitSolver;
  } catch (const aggflow::LinearSolveFailed& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return kExitSolver;
  } catch (const aggflow::OuterNoConvergence& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return kExitSolver;
  } catch (const aggflow::AbortedAfterRetries& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return kExitSolver;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitSolver;
  }
  return kExitOk;
}
