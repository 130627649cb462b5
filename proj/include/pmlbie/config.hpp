// SPDX-License-Identifier: Apache-2.0
#pragma once

// Scene configuration: a JSON document with the sections media, interfaces,
// obstacle, incidence, pml, discretization, solver and output.

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace pmlbie {

struct MediaConfig {
  double omega = 1.0;
  std::vector<double> eps, mu;
  bool operator==(const MediaConfig&) const = default;
};

/// flat | cosine_bump | gaussian_bump
struct PerturbationConfig {
  std::string kind = "flat";
  double amplitude = 0.0;
  double half_width = 1.0;  // support half-width (cosine bump scaling, gaussian cutoff)
  double width = 0.5;       // gaussian decay length
  bool operator==(const PerturbationConfig&) const = default;
};

struct InterfaceConfig {
  double height = 0.0;
  PerturbationConfig perturbation;
  bool operator==(const InterfaceConfig&) const = default;
};

/// kind none | sphere | torus; boundary PEC | PMC | penetrable.
struct ObstacleConfig {
  std::string kind = "none";
  std::array<double, 3> center{0.0, 0.0, 0.0};
  double radius = 0.0;         // sphere radius
  double major_radius = 0.0;   // torus
  double minor_radius = 0.0;
  std::string boundary = "PEC";
  bool operator==(const ObstacleConfig&) const = default;
};

/// kind plane_wave | dipole. A manufactured dipole sits inside the obstacle
/// and its field is the exact scattered solution.
struct IncidenceConfig {
  std::string kind = "plane_wave";
  std::array<double, 3> p{1.0, 0.0, 0.0};
  double ky = 0.0;
  double kz = 1.0;
  std::array<double, 3> z{0.0, 0.0, 0.0};
  bool manufactured = false;
  bool operator==(const IncidenceConfig&) const = default;
};

struct PmlConfig {
  std::array<double, 3> a{2.0, 2.0, 2.0};
  std::optional<std::array<double, 3>> T;
  std::optional<double> T_over_lambda;  // relative to the wavelength of layer 0
  double S = 6.0;
  int P = 6;
  bool operator==(const PmlConfig&) const = default;
};

struct DiscretizationConfig {
  int np = 8;
  double h_phy = 2.0;    // maximal patch width inside the physical box
  double h_pml = 2.0;    // maximal patch width inside the PML
  int pml_tiles = 0;     // > 0: h_pml = T / pml_tiles
  bool split_origin = true;  // breakpoint at x = 0 on flat interfaces
  int n_ang = 0, n_rad = 0, n_rad_near = 0, n_tensor = 0;  // 0 = automatic
  double near_factor = 2.0;
  double polar_delta = 0.5;
  bool operator==(const DiscretizationConfig&) const = default;
};

struct SolverConfig {
  double tol = 1e-8;
  int restart = 200;
  int max_iter = 5000;
  std::string rhs_variant = "derived";  // derived | swapped
  bool regularized_difference = false;
  bool diagonal_scaling = false;
  bool operator==(const SolverConfig&) const = default;
};

/// Axis-aligned sample plane x_axis = value over the two remaining axes.
struct PlaneConfig {
  int axis = 2;
  double value = 0.0;
  std::array<double, 2> lo{-1.0, -1.0};
  std::array<double, 2> hi{1.0, 1.0};
  std::array<int, 2> counts{11, 11};
  bool operator==(const PlaneConfig&) const = default;
};

struct OutputConfig {
  std::string directory = "output";
  std::vector<PlaneConfig> planes;
  std::string field = "auto";  // scattered | total | auto
  bool densities = true;
  double delta_min = 1e-2;     // samples closer to a boundary are skipped
  std::vector<int> np_sweep;
  std::vector<double> pml_sweep;  // T / lambda values
  bool operator==(const OutputConfig&) const = default;
};

struct SceneConfig {
  MediaConfig media;
  std::vector<InterfaceConfig> interfaces;
  ObstacleConfig obstacle;
  IncidenceConfig incidence;
  PmlConfig pml;
  DiscretizationConfig discretization;
  SolverConfig solver;
  OutputConfig output;
  bool operator==(const SceneConfig&) const = default;

  /// One layer above a PEC/PMC boundary.
  bool half_space() const { return media.eps.size() == 1; }
  /// PML thickness per axis (resolves T_over_lambda).
  std::array<double, 3> thickness() const;
};

/// Parse and validate; ValidationError messages start with the field path.
SceneConfig parse_config(const std::string& text);
SceneConfig load_config(const std::string& path);
std::string serialize_config(const SceneConfig& cfg);

/// Throws ValidationError("<path>: <reason>") on the first violation.
void validate_config(const SceneConfig& cfg);

}  // namespace pmlbie
