// SPDX-License-Identifier: Apache-2.0
#pragma once

// Block BIE systems for layered media and half-spaces, GMRES, and field
// reconstruction. Unknowns are ordered interface-major, then patch, node and
// component; per node (M1, M2, J1, J2) for penetrable interfaces and two
// components for PEC/PMC boundaries.

#include <functional>
#include <vector>

#include "pmlbie/incidence.hpp"
#include "pmlbie/operators.hpp"

namespace pmlbie {

enum class RhsVariant { Derived, Swapped };

struct GmresOptions {
  double tol = 1e-8;
  int restart = 200;
  int max_iter = 5000;
};

struct GmresResult {
  CVecX x;
  int iterations = 0;
  double residual = 0.0;  // relative, ||b - A x|| / ||b||
};

using LinearOperator = std::function<void(const CVecX& in, CVecX& out)>;

/// Restarted GMRES (modified Gram-Schmidt, Givens rotations). Throws
/// IterativeFailure when max_iter is reached above tolerance.
GmresResult gmres(const LinearOperator& A, const CVecX& b, const GmresOptions& opt = {});
GmresResult gmres(const CMatX& A, const CVecX& b, const GmresOptions& opt = {});

struct SolveReport {
  int iterations = 0;
  double residual = 0.0;
  double seconds = 0.0;
  double assembly_seconds = 0.0;
  std::vector<double> phy_max, pml_max;  // density max-norm per interface on Gamma_PHY / Gamma_PML
  std::vector<double> outer_max;         // outer third of the PML portion
};

struct SystemOptions {
  PotentialOptions potentials;
  RhsVariant rhs = RhsVariant::Derived;
  bool regularized_difference = false;  // N1 - N2 through regularized operators instead of the difference kernel
};

/// Layered scene with N - 1 truncated interfaces (interface j between layers j and j+1).
struct LayeredProblem {
  LayeredStack stack;
  IncidenceSpec incidence;
  std::vector<const Interface*> interfaces;
  std::vector<GraphInterfaceSpec> geometry;  // used to locate layers (flat heights if empty)
};

struct BlockSystem {
  CMatX A;
  CVecX rhs;
  std::vector<BoundaryData> data;      // f, g per interface
  std::vector<Eigen::Index> offsets;   // first unknown of each interface
};

/// N - 1 interfaces; two-layer system for N = 2, block-tridiagonal for N >= 3.
BlockSystem assemble_layered(const LayeredProblem& pb, const SystemOptions& opt = {});
BlockSystem assemble_two_layer(const LayeredProblem& pb, const SystemOptions& opt = {});
BlockSystem assemble_multilayer(const LayeredProblem& pb, const SystemOptions& opt = {});

/// Right-hand side only (applies the operators to the boundary data).
CVecX layered_rhs(const LayeredProblem& pb, const std::vector<BoundaryData>& data, const SystemOptions& opt);

enum class BoundaryKind { PEC, PMC };

/// Exterior medium (layer 0 of `medium`) above a perfectly conducting boundary.
struct HalfSpaceProblem {
  MediumSpec medium;
  const Interface* boundary = nullptr;              // normal out of the exterior domain
  std::function<FieldPair(const CVec3&)> source;     // E^src, H^src at stretched points
};

struct HalfSpaceSystem {
  CMatX A;                // K + I/2, shared by PEC and PMC
  CVecX trace_E, trace_H; // nu x (B E^src), nu x (B H^src)
};

HalfSpaceSystem assemble_half_space_operator(const HalfSpaceProblem& pb, const SystemOptions& opt = {});
CVecX half_space_rhs(const HalfSpaceProblem& pb, const HalfSpaceSystem& sys, BoundaryKind kind,
                     const SystemOptions& opt = {});

/// Both surface currents of the half-space problem after the solve.
struct HalfSpaceDensities {
  CVecX M, J;
};
HalfSpaceDensities half_space_densities(const HalfSpaceSystem& sys, BoundaryKind kind, const CVecX& solution);

struct FieldSample {
  CVec3 E, H;
  Region region;
  int layer;
};

/// Scattered fields of the layered problem at off-surface points (layer chosen
/// by the position relative to the interfaces).
std::vector<FieldSample> reconstruct_layered(const LayeredProblem& pb, const BlockSystem& sys, const CVecX& x,
                                             const std::vector<Vec3>& points, const SystemOptions& opt = {},
                                             bool total = false);

/// Scattered fields of the half-space problem.
std::vector<FieldSample> reconstruct_half_space(const HalfSpaceProblem& pb, const HalfSpaceDensities& d,
                                                const std::vector<Vec3>& points, const SystemOptions& opt = {});

/// Layer index of a point relative to graph interfaces (interface height at (x1, x2)).
int locate_layer(const LayeredProblem& pb, const Vec3& x);

/// max |num - ref| / max |ref| over 3-vector samples (Euclidean norm per sample).
double relative_max_error(const std::vector<CVec3>& num, const std::vector<CVec3>& ref);

/// Largest tangential-vector magnitude of a density restricted to PHY/PML nodes
/// (components offset.. offset+ncomp-1 of each node, taken in pairs); `outer`
/// restricts PML nodes to the outer third of the layer.
double density_region_max(const Interface& s, const CVecX& density, Region r, bool outer = false,
                          int stride = 2, int offset = 0, int ncomp = 2);

/// Fill the per-interface density norms into the report.
void density_report(const LayeredProblem& pb, const BlockSystem& sys, const CVecX& x, SolveReport& rep);

}  // namespace pmlbie
