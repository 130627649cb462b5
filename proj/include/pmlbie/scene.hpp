// SPDX-License-Identifier: Apache-2.0
#pragma once

// Scene orchestration: geometry from a SceneConfig, solve, field grids,
// density tables, sweeps and the files written by the command-line tool.

#include <optional>
#include <string>
#include <vector>

#include "pmlbie/config.hpp"
#include "pmlbie/solver.hpp"

namespace pmlbie {

HeightPtr make_height(const PerturbationConfig& p);
/// eta(x1, x2) of an interface (0 for flat ones).
double interface_height(const InterfaceConfig& c, double x1, double x2);
/// True for points strictly inside a sphere or torus obstacle.
bool obstacle_contains(const ObstacleConfig& o, const std::array<double, 3>& x);

struct RunOptions {
  std::optional<int> np;                  // overrides discretization.np
  std::optional<std::string> rhs_variant; // overrides solver.rhs_variant
  int threads = 0;                        // 0 = OpenMP default
  bool deterministic = false;
  bool verbose = false;                   // progress lines on stderr
};

struct FieldGrid {
  PlaneConfig plane;
  std::vector<Vec3> points;          // kept samples (others lie too close to a boundary)
  std::vector<FieldSample> samples;
  std::vector<CVec3> exact_E;        // exact scattered field (manufactured scenes only)
  int skipped = 0;
};

struct DensityTable {
  std::vector<Vec3> x;
  std::vector<Region> region;
  std::vector<int> patch;
  std::vector<CVec3> M, J;  // Cartesian tangential vectors
};

struct SolveOutcome {
  SolveReport report;
  std::vector<FieldGrid> grids;
  std::vector<DensityTable> densities;  // one per interface / boundary
  double eps_inf = -1.0;                // against the exact field, -1 when unavailable
  int unknowns = 0;
  int patches = 0;
  std::string resolved;                 // manifest JSON
};

/// Build, assemble, solve and sample; writes nothing.
SolveOutcome solve_scene(const SceneConfig& cfg, const RunOptions& opt = {});

/// Fields of the first sample plane restricted to the physical region (E only).
std::vector<CVec3> physical_E(const FieldGrid& g);

struct SweepRow {
  double parameter = 0.0;
  double eps_inf = 0.0;
  int iterations = 0;
  double seconds = 0.0;
};

struct SweepTable {
  std::string parameter;   // "np" or "T_over_lambda"
  std::string reference;   // "exact" or "self"
  std::vector<SweepRow> rows;
  bool decreasing = false; // eps_inf strictly decreasing beyond the first row
};

/// eps_inf for each N_p, against the exact field or (failing that) the largest N_p.
SweepTable np_sweep(const SceneConfig& cfg, const std::vector<int>& nps, const RunOptions& opt = {});
/// eps_inf for each T / lambda, against the exact field or the largest T.
SweepTable pml_sweep(const SceneConfig& cfg, const std::vector<double>& t_over_lambda, const RunOptions& opt = {});

/// Single solve with output files (fields_<i>.csv, densities.csv, report.json, manifest.json).
SolveOutcome run_solve(const SceneConfig& cfg, const std::string& dir, const RunOptions& opt = {});
SweepTable run_np_sweep(const SceneConfig& cfg, const std::string& dir, const RunOptions& opt = {});
SweepTable run_pml_sweep(const SceneConfig& cfg, const std::string& dir, const RunOptions& opt = {});

void write_field_csv(const FieldGrid& g, const std::string& path);
void write_density_csv(const std::vector<DensityTable>& d, const std::string& path);
void write_sweep_csv(const SweepTable& t, const std::string& path);

}  // namespace pmlbie
