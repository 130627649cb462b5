// SPDX-License-Identifier: Apache-2.0
#include "pmlbie/scene.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>

#include "json.hpp"

namespace pmlbie {

using nlohmann::json;

HeightPtr make_height(const PerturbationConfig& p) {
  if (p.kind == "cosine_bump") return std::make_shared<CosineBump>(p.amplitude, p.half_width);
  if (p.kind == "gaussian_bump") return std::make_shared<GaussianBump>(p.amplitude, p.width, p.half_width);
  return nullptr;
}

double interface_height(const InterfaceConfig& c, double x1, double x2) {
  const HeightPtr h = make_height(c.perturbation);
  return h ? h->eval(x1, x2).f : 0.0;
}

bool obstacle_contains(const ObstacleConfig& o, const std::array<double, 3>& x) {
  const Vec3 d = Vec3(x[0], x[1], x[2]) - Vec3(o.center[0], o.center[1], o.center[2]);
  if (o.kind == "sphere") return d.norm() < o.radius;
  if (o.kind == "torus") return std::hypot(std::hypot(d[0], d[1]) - o.major_radius, d[2]) < o.minor_radius;
  return false;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void progress(const RunOptions& o, const char* fmt, double a = 0.0, double b = 0.0) {
  if (!o.verbose) return;
  std::fprintf(stderr, fmt, a, b);
  std::fputc('\n', stderr);
}

// Everything the solve needs; interfaces are owned here and referenced by the problems.
struct Scene {
  SceneConfig cfg;
  PmlProfile pml;
  MediumSpec medium;
  std::vector<std::unique_ptr<Interface>> surfaces;
  std::vector<GraphInterfaceSpec> graphs;
  SystemOptions sys;
  LayeredProblem layered;
  HalfSpaceProblem half;
  BoundaryKind kind = BoundaryKind::PEC;
};

std::vector<double> breakpoints(const SceneConfig& c, const PmlProfile& pml, const InterfaceConfig& ic, int axis) {
  std::vector<double> extra;
  if (c.discretization.split_origin) extra.push_back(0.0);
  if (ic.perturbation.kind != "flat") {
    extra.push_back(-ic.perturbation.half_width);
    extra.push_back(ic.perturbation.half_width);
  }
  const double T = pml.T()[axis];
  const double hp = c.discretization.pml_tiles > 0 ? T / c.discretization.pml_tiles : c.discretization.h_pml;
  return auto_breakpoints(pml.a()[axis], T, extra, c.discretization.h_phy, hp);
}

GraphInterfaceSpec graph_spec(const SceneConfig& c, const PmlProfile& pml, const InterfaceConfig& ic) {
  GraphInterfaceSpec g;
  g.height = ic.height;
  g.eta = make_height(ic.perturbation);
  g.xbreaks = breakpoints(c, pml, ic, 0);
  g.ybreaks = breakpoints(c, pml, ic, 1);
  g.orientation = -1;
  return g;
}

Vec3 vec(const std::array<double, 3>& a) { return Vec3(a[0], a[1], a[2]); }

void build(Scene& s, const SceneConfig& cfg, const RunOptions& opt) {
  s.cfg = cfg;
  if (opt.np) s.cfg.discretization.np = *opt.np;
  if (opt.rhs_variant) s.cfg.solver.rhs_variant = *opt.rhs_variant;
  validate_config(s.cfg);
  const SceneConfig& c = s.cfg;
  s.pml = PmlProfile(c.pml.a, c.thickness(), c.pml.S, c.pml.P);
  s.medium.omega = c.media.omega;
  s.medium.eps = c.media.eps;
  s.medium.mu = c.media.mu;
  const int np = c.discretization.np;

  QuadOptions& q = s.sys.potentials.quad;
  q.n_ang = c.discretization.n_ang;
  q.n_rad = c.discretization.n_rad;
  q.n_rad_near = c.discretization.n_rad_near;
  q.n_tensor = c.discretization.n_tensor;
  q.near_factor = c.discretization.near_factor;
  q.polar_delta = c.discretization.polar_delta;
  q.deterministic = opt.deterministic;
  s.sys.rhs = c.solver.rhs_variant == "swapped" ? RhsVariant::Swapped : RhsVariant::Derived;
  s.sys.regularized_difference = c.solver.regularized_difference;

  for (std::size_t i = 0; i < c.interfaces.size(); ++i) {
    const GraphInterfaceSpec g = graph_spec(c, s.pml, c.interfaces[i]);
    s.graphs.push_back(g);
    try {
      if (!c.half_space()) {
        s.surfaces.push_back(std::make_unique<Interface>(build_truncated_interface(g, s.pml, np)));
      } else {
        std::vector<PatchPtr> patches = graph_patches(g);
        const ObstacleConfig& o = c.obstacle;
        std::vector<PatchPtr> extra;
        if (o.kind == "sphere") extra = sphere_patches(vec(o.center), o.radius, -1);
        if (o.kind == "torus") extra = torus_patches(vec(o.center), o.major_radius, o.minor_radius, 4, 2, -1);
        patches.insert(patches.end(), extra.begin(), extra.end());
        s.surfaces.push_back(std::make_unique<Interface>(std::move(patches), s.pml, np));
      }
    } catch (const ValidationError& e) {
      throw ValidationError("interfaces[" + std::to_string(i) + "]: " + e.what());
    }
  }

  if (c.half_space()) {
    s.kind = c.obstacle.boundary == "PMC" ? BoundaryKind::PMC : BoundaryKind::PEC;
    s.half.medium = s.medium;
    s.half.boundary = s.surfaces[0].get();
    const MediumSpec m = s.medium;
    if (c.incidence.manufactured) {
      const Vec3 z = vec(c.incidence.z);
      s.half.source = [m, z](const CVec3& x) {
        FieldPair f = manufactured_field(z, m, x);
        f.E = -f.E;
        f.H = -f.H;
        return f;
      };
    } else {
      DipoleSpec d{vec(c.incidence.z), vec(c.incidence.p)};
      s.half.source = [m, d](const CVec3& x) { return dipole_field(d, m, x); };
    }
  } else {
    LayeredProblem& pb = s.layered;
    pb.stack.medium = s.medium;
    for (const auto& ic : c.interfaces) pb.stack.heights.push_back(ic.height);
    if (c.incidence.kind == "plane_wave") {
      pb.incidence.kind = IncidenceKind::PlaneWave;
      pb.incidence.plane.p = vec(c.incidence.p);
      pb.incidence.plane.ky = c.incidence.ky;
      pb.incidence.plane.kz = c.incidence.kz;
    } else {
      pb.incidence.kind = IncidenceKind::Dipole;
      pb.incidence.dipole.z = vec(c.incidence.z);
      pb.incidence.dipole.p = vec(c.incidence.p);
    }
    for (const auto& sp : s.surfaces) pb.interfaces.push_back(sp.get());
    pb.geometry = s.graphs;
  }
}

// distance-like clearance of x from every boundary (negative inside an obstacle)
double clearance(const Scene& s, const Vec3& x) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& ic : s.cfg.interfaces)
    d = std::min(d, std::abs(x[2] - ic.height - interface_height(ic, x[0], x[1])));
  const ObstacleConfig& o = s.cfg.obstacle;
  if (s.cfg.half_space()) {
    const double ground = s.cfg.interfaces[0].height + interface_height(s.cfg.interfaces[0], x[0], x[1]);
    if (x[2] < ground) return -1.0;
    const Vec3 r = x - vec(o.center);
    if (o.kind == "sphere") d = std::min(d, r.norm() - o.radius);
    if (o.kind == "torus") d = std::min(d, std::hypot(std::hypot(r[0], r[1]) - o.major_radius, r[2]) - o.minor_radius);
  }
  return d;
}

std::vector<Vec3> plane_points(const PlaneConfig& p) {
  std::vector<Vec3> pts;
  const int a = p.axis == 0 ? 1 : 0, b = p.axis == 2 ? 1 : 2;
  for (int i = 0; i < p.counts[0]; ++i)
    for (int j = 0; j < p.counts[1]; ++j) {
      Vec3 x;
      x[p.axis] = p.value;
      x[a] = p.counts[0] > 1 ? p.lo[0] + (p.hi[0] - p.lo[0]) * i / (p.counts[0] - 1) : p.lo[0];
      x[b] = p.counts[1] > 1 ? p.lo[1] + (p.hi[1] - p.lo[1]) * j / (p.counts[1] - 1) : p.lo[1];
      pts.push_back(x);
    }
  return pts;
}

bool total_fields(const SceneConfig& c) {
  if (c.output.field == "auto") return !c.incidence.manufactured;
  return c.output.field == "total";
}

DensityTable density_table(const Interface& s, const CVecX& M, const CVecX& J) {
  DensityTable t;
  const std::vector<CVec3> m = density_vectors(s, M), j = density_vectors(s, J);
  for (int q = 0; q < s.num_nodes(); ++q) {
    t.x.push_back(s.node(q).x);
    t.region.push_back(s.node(q).region);
    t.patch.push_back(q / s.nodes_per_patch());
  }
  t.M = m;
  t.J = j;
  return t;
}

void scale_rows(BlockSystem& sys, const LayeredProblem& pb) {
  const MediumSpec& m = pb.stack.medium;
  for (std::size_t i = 0; i < pb.interfaces.size(); ++i) {
    const double se = 2.0 / (m.eps[i] + m.eps[i + 1]), sm = 2.0 / (m.mu[i] + m.mu[i + 1]);
    for (int q = 0; q < pb.interfaces[i]->num_nodes(); ++q) {
      const Eigen::Index r = sys.offsets[i] + 4 * static_cast<Eigen::Index>(q);
      for (int c = 0; c < 4; ++c) {
        const double f = c < 2 ? se : sm;
        sys.A.row(r + c) *= f;
        sys.rhs[r + c] *= f;
      }
    }
  }
}

std::string manifest(const Scene& s, const SolveOutcome& out, const RunOptions& opt) {
  const int np = s.cfg.discretization.np;
  const QuadOptions& q = s.sys.potentials.quad;
  const auto T = s.pml.T();
  json j;
  j["config"] = json::parse(serialize_config(s.cfg));
  j["resolved"] = {{"T", {T[0], T[1], T[2]}},
                   {"S", s.pml.S()},
                   {"P", s.pml.P()},
                   {"np", np},
                   {"n_ang", q.ang(np)},
                   {"n_rad", q.rad(np)},
                   {"n_rad_near", q.rad_near(np)},
                   {"n_tensor", q.tensor(np)},
                   {"near_factor", q.near_factor},
                   {"polar_delta", q.polar_delta},
                   {"delta_min_rel", s.sys.potentials.delta_min_rel},
                   {"rhs_variant", s.cfg.solver.rhs_variant},
                   {"regularized_difference", s.cfg.solver.regularized_difference},
                   {"diagonal_scaling", s.cfg.solver.diagonal_scaling},
                   {"gmres", {{"tol", s.cfg.solver.tol}, {"restart", s.cfg.solver.restart}, {"max_iter", s.cfg.solver.max_iter}}},
                   {"deterministic", opt.deterministic},
                   {"patches", out.patches},
                   {"unknowns", out.unknowns}};
  return j.dump(2) + "\n";
}

}  // namespace

std::vector<CVec3> physical_E(const FieldGrid& g) {
  std::vector<CVec3> e;
  for (const auto& f : g.samples)
    if (f.region == Region::PHY) e.push_back(f.E);
  return e;
}

SolveOutcome solve_scene(const SceneConfig& cfg, const RunOptions& opt) {
  if (opt.threads > 0) omp_set_num_threads(opt.threads);
  Scene s;
  build(s, cfg, opt);
  SolveOutcome out;
  for (const auto& sp : s.surfaces) out.patches += sp->num_patches();
  const GmresOptions gopt{s.cfg.solver.tol, s.cfg.solver.restart, s.cfg.solver.max_iter};
  const auto t0 = Clock::now();

  std::vector<std::vector<Vec3>> pts(s.cfg.output.planes.size());
  for (std::size_t g = 0; g < pts.size(); ++g) {
    FieldGrid grid;
    grid.plane = s.cfg.output.planes[g];
    const auto T = s.pml.T();
    for (const Vec3& x : plane_points(grid.plane)) {
      bool inside = true;
      for (int l = 0; l < 3; ++l) inside = inside && std::abs(x[l]) <= s.pml.a()[l] + T[l];
      if (inside && clearance(s, x) >= s.cfg.output.delta_min)
        grid.points.push_back(x);
      else
        ++grid.skipped;
    }
    out.grids.push_back(grid);
  }

  if (s.cfg.half_space()) {
    const Interface& b = *s.surfaces[0];
    HalfSpaceSystem hs = assemble_half_space_operator(s.half, s.sys);
    const CVecX rhs = half_space_rhs(s.half, hs, s.kind, s.sys);
    out.report.assembly_seconds = seconds_since(t0);
    out.unknowns = static_cast<int>(rhs.size());
    progress(opt, "assembled %.0f unknowns in %.1f s", rhs.size(), out.report.assembly_seconds);
    const GmresResult r = gmres(hs.A, rhs, gopt);
    out.report.iterations = r.iterations;
    out.report.residual = r.residual;
    hs.A.resize(0, 0);
    const HalfSpaceDensities d = half_space_densities(hs, s.kind, r.x);
    out.report.phy_max = {std::max(density_region_max(b, d.M, Region::PHY), density_region_max(b, d.J, Region::PHY))};
    out.report.pml_max = {std::max(density_region_max(b, d.M, Region::PML), density_region_max(b, d.J, Region::PML))};
    out.report.outer_max = {
        std::max(density_region_max(b, d.M, Region::PML, true), density_region_max(b, d.J, Region::PML, true))};
    out.densities.push_back(density_table(b, d.M, d.J));
    const bool total = total_fields(s.cfg);
    for (auto& grid : out.grids) {
      grid.samples = reconstruct_half_space(s.half, d, grid.points, s.sys);
      for (std::size_t q = 0; q < grid.points.size(); ++q) {
        if (total) {
          const CVec3 xt = stretch_point(s.pml, grid.points[q]);
          const CVec3 al = jacobians(s.pml, grid.points[q]).alpha;
          const FieldPair src = s.half.source(xt);
          grid.samples[q].E += al.cwiseProduct(src.E);
          grid.samples[q].H += al.cwiseProduct(src.H);
        }
        if (s.cfg.incidence.manufactured)
          grid.exact_E.push_back(manufactured_field(vec(s.cfg.incidence.z), s.medium, grid.points[q].cast<cplx>()).E);
      }
    }
  } else {
    BlockSystem sys = assemble_layered(s.layered, s.sys);
    out.report.assembly_seconds = seconds_since(t0);
    out.unknowns = static_cast<int>(sys.rhs.size());
    progress(opt, "assembled %.0f unknowns in %.1f s", sys.rhs.size(), out.report.assembly_seconds);
    if (s.cfg.solver.diagonal_scaling) scale_rows(sys, s.layered);
    const GmresResult r = gmres(sys.A, sys.rhs, gopt);
    out.report.iterations = r.iterations;
    out.report.residual = r.residual;
    sys.A.resize(0, 0);
    density_report(s.layered, sys, r.x, out.report);
    for (std::size_t i = 0; i < s.surfaces.size(); ++i) {
      const Interface& itf = *s.surfaces[i];
      CVecX M(2 * itf.num_nodes()), J(2 * itf.num_nodes());
      for (int q = 0; q < itf.num_nodes(); ++q) {
        M.segment<2>(2 * q) = r.x.segment<2>(sys.offsets[i] + 4 * q);
        J.segment<2>(2 * q) = r.x.segment<2>(sys.offsets[i] + 4 * q + 2);
      }
      out.densities.push_back(density_table(itf, M, J));
    }
    for (auto& grid : out.grids)
      grid.samples = reconstruct_layered(s.layered, sys, r.x, grid.points, s.sys, total_fields(s.cfg));
  }
  out.report.seconds = seconds_since(t0);
  progress(opt, "solved in %.1f s (%.0f iterations)", out.report.seconds, out.report.iterations);

  if (!out.grids.empty() && !out.grids[0].exact_E.empty()) {
    std::vector<CVec3> num, ref;
    for (std::size_t q = 0; q < out.grids[0].samples.size(); ++q)
      if (out.grids[0].samples[q].region == Region::PHY) {
        num.push_back(out.grids[0].samples[q].E);
        ref.push_back(out.grids[0].exact_E[q]);
      }
    if (!ref.empty()) out.eps_inf = relative_max_error(num, ref);
  }
  out.resolved = manifest(s, out, opt);
  return out;
}

namespace {

void require_plane(const SceneConfig& c) {
  if (c.output.planes.empty()) throw ValidationError("output.planes: a sweep needs at least one sample plane");
}

SweepTable finish(SweepTable t, const std::vector<SolveOutcome>& runs, std::size_t ref_index) {
  const bool exact = runs[0].eps_inf >= 0.0;
  t.reference = exact ? "exact" : "self";
  const std::vector<CVec3> ref = physical_E(runs[ref_index].grids[0]);
  for (std::size_t i = 0; i < runs.size(); ++i) {
    t.rows[i].eps_inf = exact ? runs[i].eps_inf : relative_max_error(physical_E(runs[i].grids[0]), ref);
    t.rows[i].iterations = runs[i].report.iterations;
    t.rows[i].seconds = runs[i].report.seconds;
  }
  // strictly decreasing from the second row on, the self reference excluded
  std::vector<double> e;
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    if (exact || i != ref_index) e.push_back(t.rows[i].eps_inf);
  t.decreasing = true;
  for (std::size_t i = 2; i < e.size(); ++i) t.decreasing = t.decreasing && e[i] < e[i - 1];
  return t;
}

}  // namespace

SweepTable np_sweep(const SceneConfig& cfg, const std::vector<int>& nps, const RunOptions& opt) {
  require_plane(cfg);
  if (nps.empty()) throw ValidationError("output.np_sweep: empty list");
  SweepTable t;
  t.parameter = "np";
  std::vector<SolveOutcome> runs;
  std::size_t finest = 0;
  for (std::size_t i = 0; i < nps.size(); ++i) {
    RunOptions o = opt;
    o.np = nps[i];
    runs.push_back(solve_scene(cfg, o));
    runs.back().densities.clear();
    t.rows.push_back({static_cast<double>(nps[i]), 0.0, 0, 0.0});
    if (nps[i] > nps[finest]) finest = i;
  }
  return finish(t, runs, finest);
}

SweepTable pml_sweep(const SceneConfig& cfg, const std::vector<double>& tl, const RunOptions& opt) {
  require_plane(cfg);
  if (tl.empty()) throw ValidationError("output.pml_sweep: empty list");
  SweepTable t;
  t.parameter = "T_over_lambda";
  std::vector<SolveOutcome> runs;
  std::size_t thickest = 0;
  for (std::size_t i = 0; i < tl.size(); ++i) {
    SceneConfig c = cfg;
    c.pml.T.reset();
    c.pml.T_over_lambda = tl[i];
    runs.push_back(solve_scene(c, opt));
    runs.back().densities.clear();
    t.rows.push_back({tl[i], 0.0, 0, 0.0});
    if (tl[i] > tl[thickest]) thickest = i;
  }
  return finish(t, runs, thickest);
}

void write_field_csv(const FieldGrid& g, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw InvalidArgument("cannot write " + path);
  f << "x1,x2,x3,ReE1,ImE1,ReE2,ImE2,ReE3,ImE3,ReH1,ImH1,ReH2,ImH2,ReH3,ImH3,region_flag\n";
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    f << buf;
  };
  for (std::size_t q = 0; q < g.points.size(); ++q) {
    for (int l = 0; l < 3; ++l) {
      put(g.points[q][l]);
      f << ',';
    }
    for (const CVec3* v : {&g.samples[q].E, &g.samples[q].H})
      for (int l = 0; l < 3; ++l) {
        put((*v)[l].real());
        f << ',';
        put((*v)[l].imag());
        f << ',';
      }
    f << static_cast<int>(g.samples[q].region) << '\n';
  }
}

void write_density_csv(const std::vector<DensityTable>& d, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw InvalidArgument("cannot write " + path);
  f << "interface,patch,node,x1,x2,x3,region_flag,ReM1,ImM1,ReM2,ImM2,ReM3,ImM3,ReJ1,ImJ1,ReJ2,ImJ2,ReJ3,ImJ3\n";
  char buf[64];
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t q = 0; q < d[i].x.size(); ++q) {
      f << i << ',' << d[i].patch[q] << ',' << q;
      for (int l = 0; l < 3; ++l) {
        std::snprintf(buf, sizeof buf, ",%.17g", d[i].x[q][l]);
        f << buf;
      }
      f << ',' << static_cast<int>(d[i].region[q]);
      for (const CVec3* v : {&d[i].M[q], &d[i].J[q]})
        for (int l = 0; l < 3; ++l) {
          std::snprintf(buf, sizeof buf, ",%.17g,%.17g", (*v)[l].real(), (*v)[l].imag());
          f << buf;
        }
      f << '\n';
    }
}

void write_sweep_csv(const SweepTable& t, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw InvalidArgument("cannot write " + path);
  f << t.parameter << ",eps_inf,iterations,seconds\n";
  char buf[128];
  for (const auto& r : t.rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d,%.3f\n", r.parameter, r.eps_inf, r.iterations, r.seconds);
    f << buf;
  }
}

namespace {

void write_report(const SolveOutcome& o, const std::string& path) {
  json j = {{"status", "converged"},
            {"iterations", o.report.iterations},
            {"residual", o.report.residual},
            {"seconds", o.report.seconds},
            {"assembly_seconds", o.report.assembly_seconds},
            {"density_max_phy", o.report.phy_max},
            {"density_max_pml", o.report.pml_max},
            {"density_max_pml_outer", o.report.outer_max},
            {"unknowns", o.unknowns}};
  if (o.eps_inf >= 0.0) j["eps_inf"] = o.eps_inf;
  std::ofstream(path) << j.dump(2) << "\n";
}

void write_sweep_json(const SweepTable& t, const std::string& path) {
  json rows = json::array();
  for (const auto& r : t.rows) rows.push_back({{t.parameter, r.parameter}, {"eps_inf", r.eps_inf}, {"iterations", r.iterations}});
  json j = {{"parameter", t.parameter}, {"reference", t.reference}, {"decreasing", t.decreasing}, {"rows", rows}};
  std::ofstream(path) << j.dump(2) << "\n";
}

}  // namespace

SolveOutcome run_solve(const SceneConfig& cfg, const std::string& dir, const RunOptions& opt) {
  std::filesystem::create_directories(dir);
  SolveOutcome o;
  try {
    o = solve_scene(cfg, opt);
  } catch (const IterativeFailure& e) {
    const json j = {{"status", "not-converged"}, {"iterations", e.iterations}, {"residual", e.residual}};
    std::ofstream(dir + "/report.json") << j.dump(2) << "\n";
    throw;
  }
  for (std::size_t g = 0; g < o.grids.size(); ++g) write_field_csv(o.grids[g], dir + "/fields_" + std::to_string(g) + ".csv");
  if (cfg.output.densities) write_density_csv(o.densities, dir + "/densities.csv");
  write_report(o, dir + "/report.json");
  std::ofstream(dir + "/manifest.json") << o.resolved;
  return o;
}

SweepTable run_np_sweep(const SceneConfig& cfg, const std::string& dir, const RunOptions& opt) {
  std::filesystem::create_directories(dir);
  const SweepTable t = np_sweep(cfg, cfg.output.np_sweep, opt);
  write_sweep_csv(t, dir + "/np_sweep.csv");
  write_sweep_json(t, dir + "/np_sweep.json");
  return t;
}

SweepTable run_pml_sweep(const SceneConfig& cfg, const std::string& dir, const RunOptions& opt) {
  std::filesystem::create_directories(dir);
  const SweepTable t = pml_sweep(cfg, cfg.output.pml_sweep, opt);
  write_sweep_csv(t, dir + "/pml_sweep.csv");
  write_sweep_json(t, dir + "/pml_sweep.json");
  return t;
}

}  // namespace pmlbie
