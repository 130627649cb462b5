// SPDX-License-Identifier: Apache-2.0
#include "pmlbie/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pmlbie/scene.hpp"
#include "pmlbie/types.hpp"

namespace pmlbie {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& why) {
  throw ValidationError(path + ": " + why);
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) fail(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

template <class T>
void get(const json& j, const std::string& path, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(join(path, key), "wrong type");
  }
}

template <class T>
void get_opt(const json& j, const std::string& path, const char* key, std::optional<T>& out) {
  if (!j.contains(key) || j.at(key).is_null()) return;
  T v;
  get(j, path, key, v);
  out = v;
}

const json& section(const json& root, const char* name, bool required) {
  static const json empty = json::object();
  if (!root.contains(name)) {
    if (required) fail(name, "missing section");
    return empty;
  }
  return root.at(name);
}

MediaConfig parse_media(const json& j) {
  check_keys(j, "media", {"omega", "eps", "mu"});
  MediaConfig m;
  get(j, "media", "omega", m.omega);
  get(j, "media", "eps", m.eps);
  get(j, "media", "mu", m.mu);
  return m;
}

PerturbationConfig parse_perturbation(const json& j, const std::string& path) {
  check_keys(j, path, {"kind", "amplitude", "half_width", "width"});
  PerturbationConfig p;
  get(j, path, "kind", p.kind);
  get(j, path, "amplitude", p.amplitude);
  get(j, path, "half_width", p.half_width);
  get(j, path, "width", p.width);
  return p;
}

std::vector<InterfaceConfig> parse_interfaces(const json& j) {
  if (!j.is_array()) fail("interfaces", "expected a list");
  std::vector<InterfaceConfig> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string path = "interfaces[" + std::to_string(i) + "]";
    check_keys(j[i], path, {"height", "perturbation"});
    InterfaceConfig c;
    get(j[i], path, "height", c.height);
    if (j[i].contains("perturbation")) c.perturbation = parse_perturbation(j[i]["perturbation"], path + ".perturbation");
    out.push_back(c);
  }
  return out;
}

ObstacleConfig parse_obstacle(const json& j) {
  check_keys(j, "obstacle", {"kind", "center", "radius", "major_radius", "minor_radius", "boundary"});
  ObstacleConfig o;
  get(j, "obstacle", "kind", o.kind);
  get(j, "obstacle", "center", o.center);
  get(j, "obstacle", "radius", o.radius);
  get(j, "obstacle", "major_radius", o.major_radius);
  get(j, "obstacle", "minor_radius", o.minor_radius);
  get(j, "obstacle", "boundary", o.boundary);
  return o;
}

IncidenceConfig parse_incidence(const json& j) {
  check_keys(j, "incidence", {"kind", "p", "ky", "kz", "z", "manufactured"});
  IncidenceConfig c;
  get(j, "incidence", "kind", c.kind);
  get(j, "incidence", "p", c.p);
  get(j, "incidence", "ky", c.ky);
  get(j, "incidence", "kz", c.kz);
  get(j, "incidence", "z", c.z);
  get(j, "incidence", "manufactured", c.manufactured);
  return c;
}

PmlConfig parse_pml(const json& j) {
  check_keys(j, "pml", {"a", "T", "T_over_lambda", "S", "P"});
  PmlConfig c;
  get(j, "pml", "a", c.a);
  get_opt(j, "pml", "T", c.T);
  get_opt(j, "pml", "T_over_lambda", c.T_over_lambda);
  get(j, "pml", "S", c.S);
  get(j, "pml", "P", c.P);
  return c;
}

DiscretizationConfig parse_discretization(const json& j) {
  const std::string s = "discretization";
  check_keys(j, s, {"np", "h_phy", "h_pml", "pml_tiles", "split_origin", "n_ang", "n_rad", "n_rad_near",
                    "n_tensor", "near_factor", "polar_delta"});
  DiscretizationConfig c;
  get(j, s, "np", c.np);
  get(j, s, "h_phy", c.h_phy);
  get(j, s, "h_pml", c.h_pml);
  get(j, s, "pml_tiles", c.pml_tiles);
  get(j, s, "split_origin", c.split_origin);
  get(j, s, "n_ang", c.n_ang);
  get(j, s, "n_rad", c.n_rad);
  get(j, s, "n_rad_near", c.n_rad_near);
  get(j, s, "n_tensor", c.n_tensor);
  get(j, s, "near_factor", c.near_factor);
  get(j, s, "polar_delta", c.polar_delta);
  return c;
}

SolverConfig parse_solver(const json& j) {
  check_keys(j, "solver", {"tol", "restart", "max_iter", "rhs_variant", "regularized_difference", "diagonal_scaling"});
  SolverConfig c;
  get(j, "solver", "tol", c.tol);
  get(j, "solver", "restart", c.restart);
  get(j, "solver", "max_iter", c.max_iter);
  get(j, "solver", "rhs_variant", c.rhs_variant);
  get(j, "solver", "regularized_difference", c.regularized_difference);
  get(j, "solver", "diagonal_scaling", c.diagonal_scaling);
  return c;
}

OutputConfig parse_output(const json& j) {
  check_keys(j, "output", {"directory", "planes", "field", "densities", "delta_min", "np_sweep", "pml_sweep"});
  OutputConfig c;
  get(j, "output", "directory", c.directory);
  get(j, "output", "field", c.field);
  get(j, "output", "densities", c.densities);
  get(j, "output", "delta_min", c.delta_min);
  get(j, "output", "np_sweep", c.np_sweep);
  get(j, "output", "pml_sweep", c.pml_sweep);
  if (j.contains("planes")) {
    if (!j["planes"].is_array()) fail("output.planes", "expected a list");
    for (std::size_t i = 0; i < j["planes"].size(); ++i) {
      const std::string path = "output.planes[" + std::to_string(i) + "]";
      const json& q = j["planes"][i];
      check_keys(q, path, {"axis", "value", "lo", "hi", "counts"});
      PlaneConfig p;
      get(q, path, "axis", p.axis);
      get(q, path, "value", p.value);
      get(q, path, "lo", p.lo);
      get(q, path, "hi", p.hi);
      get(q, path, "counts", p.counts);
      c.planes.push_back(p);
    }
  }
  return c;
}

json to_json(const SceneConfig& c) {
  json j;
  j["media"] = {{"omega", c.media.omega}, {"eps", c.media.eps}, {"mu", c.media.mu}};
  j["interfaces"] = json::array();
  for (const auto& i : c.interfaces)
    j["interfaces"].push_back({{"height", i.height},
                               {"perturbation",
                                {{"kind", i.perturbation.kind},
                                 {"amplitude", i.perturbation.amplitude},
                                 {"half_width", i.perturbation.half_width},
                                 {"width", i.perturbation.width}}}});
  const ObstacleConfig& o = c.obstacle;
  j["obstacle"] = {{"kind", o.kind},
                   {"center", o.center},
                   {"radius", o.radius},
                   {"major_radius", o.major_radius},
                   {"minor_radius", o.minor_radius},
                   {"boundary", o.boundary}};
  const IncidenceConfig& n = c.incidence;
  j["incidence"] = {{"kind", n.kind}, {"p", n.p}, {"ky", n.ky}, {"kz", n.kz}, {"z", n.z}, {"manufactured", n.manufactured}};
  j["pml"] = {{"a", c.pml.a}, {"S", c.pml.S}, {"P", c.pml.P}};
  if (c.pml.T) j["pml"]["T"] = *c.pml.T;
  if (c.pml.T_over_lambda) j["pml"]["T_over_lambda"] = *c.pml.T_over_lambda;
  const DiscretizationConfig& d = c.discretization;
  j["discretization"] = {{"np", d.np},
                         {"h_phy", d.h_phy},
                         {"h_pml", d.h_pml},
                         {"pml_tiles", d.pml_tiles},
                         {"split_origin", d.split_origin},
                         {"n_ang", d.n_ang},
                         {"n_rad", d.n_rad},
                         {"n_rad_near", d.n_rad_near},
                         {"n_tensor", d.n_tensor},
                         {"near_factor", d.near_factor},
                         {"polar_delta", d.polar_delta}};
  const SolverConfig& s = c.solver;
  j["solver"] = {{"tol", s.tol},
                 {"restart", s.restart},
                 {"max_iter", s.max_iter},
                 {"rhs_variant", s.rhs_variant},
                 {"regularized_difference", s.regularized_difference},
                 {"diagonal_scaling", s.diagonal_scaling}};
  json planes = json::array();
  for (const auto& p : c.output.planes)
    planes.push_back({{"axis", p.axis}, {"value", p.value}, {"lo", p.lo}, {"hi", p.hi}, {"counts", p.counts}});
  j["output"] = {{"directory", c.output.directory},
                 {"planes", planes},
                 {"field", c.output.field},
                 {"densities", c.output.densities},
                 {"delta_min", c.output.delta_min},
                 {"np_sweep", c.output.np_sweep},
                 {"pml_sweep", c.output.pml_sweep}};
  return j;
}

bool positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

std::array<double, 3> SceneConfig::thickness() const {
  if (pml.T) return *pml.T;
  const double lambda = 2.0 * kPi / (media.omega * std::sqrt(media.eps.at(0) * media.mu.at(0)));
  const double t = pml.T_over_lambda.value_or(1.0) * lambda;
  return {t, t, t};
}

SceneConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("document: ") + e.what());
  }
  check_keys(root, "", {"media", "interfaces", "obstacle", "incidence", "pml", "discretization", "solver", "output"});
  SceneConfig c;
  c.media = parse_media(section(root, "media", true));
  c.interfaces = parse_interfaces(section(root, "interfaces", true));
  c.obstacle = parse_obstacle(section(root, "obstacle", false));
  c.incidence = parse_incidence(section(root, "incidence", true));
  c.pml = parse_pml(section(root, "pml", true));
  c.discretization = parse_discretization(section(root, "discretization", false));
  c.solver = parse_solver(section(root, "solver", false));
  c.output = parse_output(section(root, "output", false));
  validate_config(c);
  return c;
}

SceneConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const SceneConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

void validate_config(const SceneConfig& c) {
  // media
  const std::size_t N = c.media.eps.size();
  if (!positive(c.media.omega)) fail("media.omega", "must be positive");
  if (N == 0) fail("media.eps", "at least one layer required");
  if (c.media.mu.size() != N) fail("media.mu", "must have as many entries as media.eps");
  for (std::size_t i = 0; i < N; ++i) {
    if (!positive(c.media.eps[i])) fail("media.eps[" + std::to_string(i) + "]", "must be positive");
    if (!positive(c.media.mu[i])) fail("media.mu[" + std::to_string(i) + "]", "must be positive");
  }
  const bool hs = c.half_space();

  // obstacle
  const ObstacleConfig& o = c.obstacle;
  if (o.kind != "none" && o.kind != "sphere" && o.kind != "torus") fail("obstacle.kind", "unknown kind '" + o.kind + "'");
  if (o.boundary != "PEC" && o.boundary != "PMC" && o.boundary != "penetrable")
    fail("obstacle.boundary", "must be PEC, PMC or penetrable");
  if (hs && o.boundary == "penetrable") fail("obstacle.boundary", "a single-layer scene needs a PEC or PMC boundary");
  if (!hs && o.kind != "none") fail("obstacle.kind", "obstacles are supported on half-space scenes only");
  if (!hs && N < 2) fail("media.eps", "at least two layers required");

  // pml
  for (int l = 0; l < 3; ++l)
    if (!positive(c.pml.a[l])) fail("pml.a[" + std::to_string(l) + "]", "must be positive");
  if (c.pml.T.has_value() == c.pml.T_over_lambda.has_value()) fail("pml.T", "give exactly one of T and T_over_lambda");
  if (c.pml.T) {
    for (int l = 0; l < 3; ++l)
      if (!positive((*c.pml.T)[l])) fail("pml.T[" + std::to_string(l) + "]", "must be positive");
  } else if (!positive(*c.pml.T_over_lambda)) {
    fail("pml.T_over_lambda", "must be positive");
  }
  if (!positive(c.pml.S)) fail("pml.S", "must be positive");
  if (c.pml.P < 2) fail("pml.P", "must be at least 2");

  // interfaces
  const std::size_t expected = hs ? 1 : N - 1;
  if (c.interfaces.size() != expected)
    fail("interfaces", "expected " + std::to_string(expected) + " interface(s) for " + std::to_string(N) + " layer(s)");
  for (std::size_t i = 0; i < c.interfaces.size(); ++i) {
    const std::string path = "interfaces[" + std::to_string(i) + "]";
    const PerturbationConfig& p = c.interfaces[i].perturbation;
    if (p.kind != "flat" && p.kind != "cosine_bump" && p.kind != "gaussian_bump")
      fail(path + ".perturbation.kind", "unknown kind '" + p.kind + "'");
    if (p.kind != "flat") {
      if (!std::isfinite(p.amplitude)) fail(path + ".perturbation.amplitude", "must be finite");
      if (!positive(p.half_width)) fail(path + ".perturbation.half_width", "must be positive");
      if (p.kind == "gaussian_bump" && !positive(p.width)) fail(path + ".perturbation.width", "must be positive");
      if (p.half_width > c.pml.a[0] || p.half_width > c.pml.a[1])
        fail(path + ".perturbation", "support leaves the physical box");
    }
    if (i > 0 && !(c.interfaces[i].height < c.interfaces[i - 1].height))
      fail(path + ".height", "interface heights must decrease");
    if (std::abs(c.interfaces[i].height) >= c.pml.a[2]) fail(path + ".height", "outside the physical box");
  }

  // obstacle geometry
  if (hs && o.kind != "none") {
    const double ext = o.kind == "sphere" ? o.radius : o.major_radius + o.minor_radius;
    const double half = o.kind == "sphere" ? o.radius : o.minor_radius;
    if (o.kind == "sphere" && !positive(o.radius)) fail("obstacle.radius", "must be positive");
    if (o.kind == "torus" && (!positive(o.minor_radius) || !(o.major_radius > o.minor_radius)))
      fail("obstacle.major_radius", "need major_radius > minor_radius > 0");
    if (std::abs(o.center[0]) + ext >= c.pml.a[0] || std::abs(o.center[1]) + ext >= c.pml.a[1] ||
        std::abs(o.center[2]) + half >= c.pml.a[2])
      fail("obstacle.center", "obstacle leaves the physical box");
    if (o.center[2] - half <= c.interfaces[0].height + interface_height(c.interfaces[0], o.center[0], o.center[1]))
      fail("obstacle.center", "obstacle must lie above the boundary plane");
  }

  // incidence
  const IncidenceConfig& n = c.incidence;
  if (n.kind == "plane_wave") {
    if (hs) fail("incidence.kind", "plane-wave incidence is supported on layered scenes only");
    if (!(n.kz > 0.0)) fail("incidence.kz", "k_x3 must be positive (downward propagation)");
    if (std::hypot(n.p[0], std::hypot(n.p[1], n.p[2])) == 0.0) fail("incidence.p", "must be nonzero");
  } else if (n.kind == "dipole") {
    for (int l = 0; l < 3; ++l)
      if (std::abs(n.z[l]) >= c.pml.a[l]) fail("incidence.z", "source outside the physical box");
    const bool inside = hs && obstacle_contains(o, n.z);
    if (n.manufactured) {
      if (!hs) fail("incidence.manufactured", "manufactured sources need an obstacle");
      if (!inside) fail("incidence.z", "manufactured source must lie inside the obstacle");
    } else {
      if (inside) fail("incidence.z", "dipole must lie in the upper domain, not inside the obstacle");
      const double top = c.interfaces[0].height + interface_height(c.interfaces[0], n.z[0], n.z[1]);
      if (!(n.z[2] > top)) fail("incidence.z", "dipole must lie in the upper domain");
      if (std::hypot(n.p[0], std::hypot(n.p[1], n.p[2])) == 0.0) fail("incidence.p", "must be nonzero");
    }
  } else {
    fail("incidence.kind", "must be plane_wave or dipole");
  }

  // discretization and solver
  const DiscretizationConfig& d = c.discretization;
  if (d.np < 2) fail("discretization.np", "must be at least 2");
  if (!positive(d.h_phy)) fail("discretization.h_phy", "must be positive");
  if (d.pml_tiles < 0) fail("discretization.pml_tiles", "must be non-negative");
  if (d.pml_tiles == 0 && !positive(d.h_pml)) fail("discretization.h_pml", "must be positive");
  if (d.n_ang < 0 || d.n_rad < 0 || d.n_rad_near < 0 || d.n_tensor < 0)
    fail("discretization", "quadrature orders must be non-negative");
  if (!positive(d.near_factor)) fail("discretization.near_factor", "must be positive");
  if (!positive(d.polar_delta)) fail("discretization.polar_delta", "must be positive");
  if (!positive(c.solver.tol)) fail("solver.tol", "must be positive");
  if (c.solver.restart < 1) fail("solver.restart", "must be at least 1");
  if (c.solver.max_iter < 1) fail("solver.max_iter", "must be at least 1");
  if (c.solver.rhs_variant != "derived" && c.solver.rhs_variant != "swapped")
    fail("solver.rhs_variant", "must be derived or swapped");

  // output
  if (c.output.field != "auto" && c.output.field != "scattered" && c.output.field != "total")
    fail("output.field", "must be scattered, total or auto");
  if (!(c.output.delta_min >= 0.0)) fail("output.delta_min", "must be non-negative");
  for (std::size_t i = 0; i < c.output.planes.size(); ++i) {
    const PlaneConfig& p = c.output.planes[i];
    const std::string path = "output.planes[" + std::to_string(i) + "]";
    if (p.axis < 0 || p.axis > 2) fail(path + ".axis", "must be 0, 1 or 2");
    for (int q = 0; q < 2; ++q) {
      if (p.counts[q] < 1) fail(path + ".counts", "must be positive");
      if (!(p.lo[q] <= p.hi[q])) fail(path + ".lo", "lo must not exceed hi");
    }
  }
  for (std::size_t i = 0; i < c.output.np_sweep.size(); ++i)
    if (c.output.np_sweep[i] < 2) fail("output.np_sweep[" + std::to_string(i) + "]", "must be at least 2");
  for (std::size_t i = 0; i < c.output.pml_sweep.size(); ++i)
    if (!positive(c.output.pml_sweep[i])) fail("output.pml_sweep[" + std::to_string(i) + "]", "must be positive");
}

}  // namespace pmlbie
