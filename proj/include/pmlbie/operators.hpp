// SPDX-License-Identifier: Apache-2.0
#pragma once

// Layer potentials and boundary operators on truncated interfaces.
//
// Densities are interleaved contravariant components (node * 2 + c) on the
// source interface; operator outputs on surface targets use the contravariant
// components of the target chart, potentials return Cartesian 3-vectors
// (target * 3 + c).

#include <functional>
#include <string>
#include <vector>

#include "pmlbie/engine.hpp"
#include "pmlbie/kernels.hpp"

namespace pmlbie {

/// Receives non-fatal diagnostics (default: write to stderr).
using WarningHandler = std::function<void(const std::string&)>;
void set_warning_handler(WarningHandler h);
void warn(const std::string& msg);

struct PotentialOptions {
  QuadOptions quad;
  double delta_min_rel = 1e-7;  // off-surface evaluation closer than this * diam is rejected
  bool classical = false;       // use the unstretched kernels (B = I, real distance)
};

/// int Phi(k, x, y) phi(y) ds_y for a scalar density (one value per node).
CVecX eval_scalar_single_layer(double k, const Interface& src, const CVecX& density,
                               const std::vector<Target>& targets, const PotentialOptions& opt = {});

/// K(k) from src to targets (2 rows per target, 2 columns per node).
CMatX assemble_K(double k, const Interface& src, const std::vector<Target>& targets,
                 const PotentialOptions& opt = {});
/// Vector single layer nu x B int Phi B phi.
CMatX assemble_V(double k, const Interface& src, const std::vector<Target>& targets,
                 const PotentialOptions& opt = {});
/// Scalar single layer (1 x 1 per target/node).
CMatX assemble_scalar_V(double k, const Interface& src, const std::vector<Target>& targets,
                        const PotentialOptions& opt = {});
/// N(k) through the unregularized kernel; only for targets off the source surface.
CMatX assemble_N_direct(double k, const Interface& src, const std::vector<Target>& targets,
                        const PotentialOptions& opt = {});
/// N(k1) - N(k2) through its weakly singular difference kernel.
CMatX assemble_N_difference(double k1, double k2, const Interface& src, const std::vector<Target>& targets,
                            const PotentialOptions& opt = {});

/// Regularized N on the surface s itself: k^2 V + Curl_G Vs Div_G.
CMatX assemble_N_regularized(double k, const Interface& s, const PotentialOptions& opt = {});
/// Matrix-free version; warns when the density does not decay at the outer boundary.
CVecX apply_N_regularized(double k, const Interface& s, const CVecX& density, const PotentialOptions& opt = {});

/// Ratio max|phi| on the outermost node ring / max|phi| (0 for a zero density).
double boundary_decay_ratio(const Interface& s, const CVecX& density);

/// Off-surface potentials S and D of a tangential density. Throws
/// SingularEvaluation ("near-singular") for points closer than delta_min.
CVecX potential_eval_S(double k, const Interface& src, const CVecX& density, const std::vector<Vec3>& points,
                       const PotentialOptions& opt = {});
CVecX potential_eval_D(double k, const Interface& src, const CVecX& density, const std::vector<Vec3>& points,
                       const PotentialOptions& opt = {});
/// Throws when a point is within delta_min of src.
void check_off_surface(const Interface& src, const std::vector<Vec3>& points, const PotentialOptions& opt);

enum class JumpKind { D_minus, D_plus, S_minus, S_plus };

struct JumpRow {
  double h;
  double discrepancy;  // max over targets of |nu x pot(x -+ h nu) - limit|
};

/// Discrepancy table for the limits
///   D_minus: nu x D(x - h nu) -> (K - 1/2) phi,  D_plus: nu x D(x + h nu) -> (K + 1/2) phi,
///   S_minus / S_plus: nu x S(x -+ h nu) -> N phi (regularized).
/// `nodes` restricts the targets (empty = all nodes).
std::vector<JumpRow> jump_test(JumpKind kind, double k, const Interface& s, const CVecX& density,
                               const std::vector<double>& hs, const std::vector<int>& nodes = {},
                               const PotentialOptions& opt = {});

/// nu x pot at the given points, as nodal tangential 3-vectors with the normal of each base node.
CVecX tangential_potential(JumpKind kind, double k, const Interface& s, const CVecX& density,
                           const std::vector<int>& nodes, double h, const PotentialOptions& opt = {});

/// Patches of the box faces closing the region above a graph interface at the
/// given reference height: the top x3 = a3 + T3 and the four sides, outward normals.
std::vector<PatchPtr> box_face_patches(const PmlProfile& pml, double height);

/// int over the closed boundary of nu_y . A^{-1} grad_y Phi0~ for each target.
/// `ground` is the interface (oriented out of the upper region); `faces` closes it.
CVecX laplace_identity_check(const Interface& ground, const Interface& faces, const std::vector<Target>& targets,
                             const PotentialOptions& opt = {});

/// Contravariant density -> 3-vector, per node.
std::vector<CVec3> density_vectors(const Interface& s, const CVecX& density);
/// Tangential 3-vectors -> contravariant density (projection with the dual basis).
CVecX density_from_vectors(const Interface& s, const std::vector<CVec3>& v);

}  // namespace pmlbie
