// SPDX-License-Identifier: Apache-2.0
// pmlbie: batch front-end for the PML boundary-integral solver.

#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "pmlbie/scene.hpp"

using namespace pmlbie;

int main(int argc, char** argv) {
  CLI::App app{"PML-truncated boundary integral solver for layered-medium Maxwell scattering"};
  std::string config, output, sweep, rhs;
  int np = 0, threads = 0;
  bool deterministic = false, quiet = false;
  app.add_option("--config", config, "scene configuration (JSON)")->required();
  app.add_option("--output", output, "output directory (default: output.directory of the config)");
  app.add_option("--np", np, "override discretization.np")->check(CLI::Range(2, 64));
  app.add_option("--sweep", sweep, "run a convergence sweep")->check(CLI::IsMember({"np", "pml"}));
  app.add_flag("--deterministic", deterministic, "static scheduling, reproducible bit-for-bit");
  app.add_option("--threads", threads, "number of OpenMP threads")->check(CLI::NonNegativeNumber);
  app.add_option("--rhs-variant", rhs, "half-space right-hand side")->check(CLI::IsMember({"swapped", "derived"}));
  app.add_flag("--quiet", quiet, "no progress output");
  CLI11_PARSE(app, argc, argv);

  try {
    const SceneConfig cfg = load_config(config);
    const std::string dir = output.empty() ? cfg.output.directory : output;
    RunOptions opt;
    if (np > 0) opt.np = np;
    if (!rhs.empty()) opt.rhs_variant = rhs;
    opt.threads = threads;
    opt.deterministic = deterministic;
    opt.verbose = !quiet;
    if (sweep.empty()) {
      const SolveOutcome o = run_solve(cfg, dir, opt);
      std::printf("iterations %d  residual %.3e  unknowns %d\n", o.report.iterations, o.report.residual, o.unknowns);
      if (o.eps_inf >= 0.0) std::printf("eps_inf %.6e\n", o.eps_inf);
    } else {
      const SweepTable t = sweep == "np" ? run_np_sweep(cfg, dir, opt) : run_pml_sweep(cfg, dir, opt);
      std::printf("%s  eps_inf (reference: %s)\n", t.parameter.c_str(), t.reference.c_str());
      for (const auto& r : t.rows) std::printf("%g  %.6e\n", r.parameter, r.eps_inf);
      std::printf("decreasing: %s\n", t.decreasing ? "yes" : "no");
    }
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidArgument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const IterativeFailure& e) {
    std::cerr << "solver did not converge: " << e.what() << " (iterations " << e.iterations << ", residual "
              << e.residual << ")\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
