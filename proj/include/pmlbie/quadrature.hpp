// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "pmlbie/interface.hpp"

namespace pmlbie {

/// Orders and thresholds of the singular/near-singular rule.
struct QuadOptions {
  int n_ang = 0;              // Gauss points per triangle in the angular variable (0 = auto)
  int n_rad = 0;              // radial points for on-surface targets (0 = auto)
  int n_rad_near = 0;         // radial points for off-patch targets (0 = auto)
  double near_factor = 2.0;   // near zone: |x - centre| < near_factor * radius
  double polar_delta = 0.5;   // near targets with parametric distance below this use the polar rule
  int n_tensor = 0;           // points per direction of the upsampled tensor rule (0 = auto)
  bool deterministic = false; // static scheduling

  int ang(int np) const { return n_ang > 0 ? n_ang : std::max(20, 3 * np); }
  int rad(int np) const { return n_rad > 0 ? n_rad : std::max(12, np + 6); }
  int rad_near(int np) const { return n_rad_near > 0 ? n_rad_near : std::max(16, np + 10); }
  int tensor(int np) const { return n_tensor > 0 ? n_tensor : std::max(20, 2 * np); }
};

/// Evaluation point of an operator or potential.
struct Target {
  Vec3 x;
  CVec3 xt;
  CVec3 alpha;
  Vec3 nu{0, 0, 0};
  Vec3 du{0, 0, 0}, dv{0, 0, 0};
  int self_patch = -1;        // patch of the source interface containing x as a node
  double u = 0.0, v = 0.0;    // its chart coordinates
};

/// Targets at the nodes of `s`; self information is set so `s` may act as source.
std::vector<Target> surface_targets(const Interface& s);
/// Targets at the nodes of `s` treated as foreign to any source interface.
std::vector<Target> foreign_surface_targets(const Interface& s);
/// Off-surface targets.
std::vector<Target> point_targets(const std::vector<Vec3>& pts, const PmlProfile& pml);

struct QPt {
  double u, v, w;  // chart point and parametric weight
};

/// Rectangular-polar rule on [-1,1]^2 centred at (us, vs). `delta` is the
/// parametric distance of the target from the chart (0 for on-chart targets).
void polar_rule(double us, double vs, double delta, int n_ang, int n_rad, std::vector<QPt>& out);

/// Closest chart point to x by coarse search plus projected Gauss-Newton.
void closest_point(const SurfacePatch& patch, const Vec3& x, double& u, double& v, double& dist);

/// Quadrature points (with weights including sqrt|G|) for target t over patch p,
/// or an empty vector when the native far rule applies.
struct PatchRule {
  bool near = false;
  double dist = 0.0;
  std::vector<QPt> pts;
};
PatchRule patch_rule(const Interface& s, int p, const Target& t, const QuadOptions& opt);

}  // namespace pmlbie
