// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pmlbie/scene.hpp"

using namespace pmlbie;

namespace {

const char* kTwoLayer = R"({
  "media": {"omega": 3.0, "eps": [1.0, 2.0], "mu": [1.0, 1.0]},
  "interfaces": [{"height": 0.0}],
  "incidence": {"kind": "plane_wave", "p": [1.0, 0.0, 0.0], "ky": 0.0, "kz": 1.0},
  "pml": {"a": [1.0, 1.0, 1.0], "T": [1.0, 1.0, 1.0]},
  "discretization": {"np": 4, "h_phy": 2.0, "h_pml": 1.0},
  "output": {"planes": [{"axis": 1, "value": 0.2, "lo": [-0.5, -0.5], "hi": [0.5, 0.5], "counts": [3, 4]}]}
})";

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto p = s.find(from);
  EXPECT_NE(p, std::string::npos) << from;
  return s.replace(p, from.size(), to);
}

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

SceneConfig example1() {
  SceneConfig c;
  c.media = {kPi, {1.0}, {1.0}};
  c.interfaces = {InterfaceConfig{}};
  c.obstacle.kind = "sphere";
  c.obstacle.center = {0.0, 0.0, 2.0};
  c.obstacle.radius = 0.5;
  c.incidence.kind = "dipole";
  c.incidence.z = {0.0, 0.0, 2.0};
  c.incidence.manufactured = true;
  c.pml.a = {2.0, 2.0, 3.0};
  c.pml.T_over_lambda = 2.0;
  return c;
}

}  // namespace

TEST(Config, ParsesAndDefaults) {
  const SceneConfig c = parse_config(kTwoLayer);
  EXPECT_EQ(c.media.eps.size(), 2u);
  EXPECT_FALSE(c.half_space());
  EXPECT_EQ(c.pml.S, 6.0);
  EXPECT_EQ(c.pml.P, 6);
  EXPECT_EQ(c.solver.tol, 1e-8);
  EXPECT_EQ(c.solver.restart, 200);
  EXPECT_EQ(c.solver.rhs_variant, "derived");
  EXPECT_EQ(c.output.planes.size(), 1u);
  EXPECT_EQ(c.thickness()[2], 1.0);
}

TEST(Config, RoundTrip) {
  const SceneConfig a = parse_config(kTwoLayer);
  const std::string text = serialize_config(a);
  const SceneConfig b = parse_config(text);
  EXPECT_EQ(a, b);
  EXPECT_EQ(serialize_config(b), text);
  SceneConfig e = example1();
  e.output.np_sweep = {6, 8};
  EXPECT_EQ(parse_config(serialize_config(e)), e);
}

TEST(Config, ThicknessFromWavelength) {
  const SceneConfig c = example1();
  EXPECT_NEAR(c.thickness()[0], 4.0, 1e-14);  // lambda = 2 at omega = pi
}

TEST(Config, ValidationNamesFieldPaths) {
  EXPECT_EQ(error_of(replace(kTwoLayer, R"("media": {"omega": 3.0, "eps": [1.0, 2.0], "mu": [1.0, 1.0]},)", "")),
            "media: missing section");
  EXPECT_EQ(error_of(replace(kTwoLayer, "\"kz\": 1.0", "\"kz\": 0.0")),
            "incidence.kz: k_x3 must be positive (downward propagation)");
  EXPECT_EQ(error_of(replace(kTwoLayer, "\"eps\": [1.0, 2.0], \"mu\": [1.0, 1.0]", "\"eps\": [1.0], \"mu\": [1.0]")),
            "incidence.kind: plane-wave incidence is supported on layered scenes only");
  EXPECT_EQ(error_of(replace(kTwoLayer, "\"mu\": [1.0, 1.0]", "\"mu\": [1.0, -1.0]")), "media.mu[1]: must be positive");
  EXPECT_EQ(error_of(replace(kTwoLayer, "{\"height\": 0.0}",
                             R"({"height": 0.0, "perturbation": {"kind": "cosine_bump", "amplitude": 0.1, "half_width": 1.5}})")),
            "interfaces[0].perturbation: support leaves the physical box");
  EXPECT_EQ(error_of(replace(kTwoLayer, "\"np\": 4", "\"np\": \"four\"")), "discretization.np: wrong type");
  EXPECT_EQ(error_of(replace(kTwoLayer, "\"np\": 4", "\"npp\": 4")), "discretization.npp: unknown key");
  EXPECT_EQ(error_of(replace(kTwoLayer, "\"T\": [1.0, 1.0, 1.0]", "\"T\": [1.0, 1.0, 1.0], \"T_over_lambda\": 2")),
            "pml.T: give exactly one of T and T_over_lambda");
  EXPECT_EQ(error_of("{not json"), error_of("{not json"));
  EXPECT_EQ(error_of("{not json").rfind("document:", 0), 0u);
}

TEST(Config, DipolePlacement) {
  SceneConfig c = example1();
  EXPECT_NO_THROW(validate_config(c));
  c.incidence.manufactured = false;
  try {
    validate_config(c);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(std::string(e.what()), "incidence.z: dipole must lie in the upper domain, not inside the obstacle");
  }
  c.incidence.z = {0.0, 0.0, -0.5};
  EXPECT_THROW(validate_config(c), ValidationError);
  c.incidence.z = {0.0, 0.0, 1.0};
  EXPECT_NO_THROW(validate_config(c));
  c.incidence.manufactured = true;
  EXPECT_THROW(validate_config(c), ValidationError);
  SceneConfig l = parse_config(kTwoLayer);
  l.incidence.kind = "dipole";
  l.incidence.z = {0.1, -0.2, -0.5};
  EXPECT_THROW(validate_config(l), ValidationError);
  l.incidence.z = {0.1, -0.2, 0.5};
  EXPECT_NO_THROW(validate_config(l));
}

TEST(Config, ObstacleConstraints) {
  SceneConfig c = example1();
  c.obstacle.center = {0.0, 0.0, 0.3};
  EXPECT_THROW(validate_config(c), ValidationError);
  c = example1();
  c.obstacle.center = {1.8, 0.0, 2.0};
  EXPECT_THROW(validate_config(c), ValidationError);
  c = parse_config(kTwoLayer);
  c.obstacle.kind = "sphere";
  c.obstacle.radius = 0.2;
  EXPECT_THROW(validate_config(c), ValidationError);
}

TEST(Scene, FlatPlaneWaveRunWritesZeroScatteredField) {
  SceneConfig c = parse_config(kTwoLayer);
  c.output.field = "scattered";
  const std::string dir = (std::filesystem::temp_directory_path() / "pmlbie_cli_test").string();
  std::filesystem::remove_all(dir);
  const SolveOutcome o = run_solve(c, dir, RunOptions{});
  EXPECT_EQ(o.report.iterations, 0);
  ASSERT_EQ(o.grids.size(), 1u);
  EXPECT_EQ(o.grids[0].points.size(), 12u);
  for (const auto& f : o.grids[0].samples) EXPECT_EQ(f.E.norm() + f.H.norm(), 0.0);
  std::ifstream in(dir + "/fields_0.csv");
  std::string header, row;
  std::getline(in, header);
  EXPECT_EQ(header, "x1,x2,x3,ReE1,ImE1,ReE2,ImE2,ReE3,ImE3,ReH1,ImH1,ReH2,ImH2,ReH3,ImH3,region_flag");
  int rows = 0;
  while (std::getline(in, row)) ++rows;
  EXPECT_EQ(rows, 12);
  for (const char* f : {"densities.csv", "report.json", "manifest.json"}) EXPECT_TRUE(std::filesystem::exists(dir + "/" + f));
  std::ifstream m(dir + "/manifest.json");
  std::stringstream ss;
  ss << m.rdbuf();
  for (const char* key : {"\"n_ang\"", "\"n_rad\"", "\"rhs_variant\"", "\"S\"", "\"P\""})
    EXPECT_NE(ss.str().find(key), std::string::npos) << key;
}

TEST(Scene, TotalFieldEqualsPlanarReference) {
  SceneConfig c = parse_config(kTwoLayer);
  c.output.field = "total";
  c.output.planes[0].value = 0.1;
  c.output.planes[0].lo = {-0.5, 0.3};
  c.output.planes[0].hi = {0.5, 0.6};
  const SolveOutcome o = solve_scene(c);
  LayeredStack st;
  st.medium.omega = 3.0;
  st.medium.eps = {1.0, 2.0};
  st.medium.mu = {1.0, 1.0};
  st.heights = {0.0};
  PlaneWaveSpec pw;
  std::vector<CVec3> pts;
  for (const auto& x : o.grids[0].points) pts.push_back(x.cast<cplx>());
  const auto ref = planar_reference_fields(st, pw, o.grids[0].points, pts);
  for (std::size_t q = 0; q < pts.size(); ++q) EXPECT_LT((o.grids[0].samples[q].E - ref[q].E).norm(), 1e-12);
}

TEST(Scene, SingleEntrySweepAndIdenticalRows) {
  SceneConfig c = parse_config(kTwoLayer);
  c.interfaces[0].perturbation = {"cosine_bump", 0.05, 0.5, 0.5};
  c.discretization.np = 3;
  c.discretization.h_pml = 3.0;
  const SweepTable one = np_sweep(c, {3});
  ASSERT_EQ(one.rows.size(), 1u);
  EXPECT_EQ(one.reference, "self");
  EXPECT_EQ(one.rows[0].eps_inf, 0.0);
  const SweepTable same = pml_sweep(c, {1.0, 1.0});
  ASSERT_EQ(same.rows.size(), 2u);
  EXPECT_EQ(same.rows[0].eps_inf, same.rows[1].eps_inf);
}
