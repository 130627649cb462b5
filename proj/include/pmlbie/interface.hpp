// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "pmlbie/chebyshev.hpp"
#include "pmlbie/pml.hpp"
#include "pmlbie/surface.hpp"

namespace pmlbie {

enum class Region { PHY = 0, PML = 1 };

/// Differential geometry at one chart point.
struct MetricData {
  Vec3 x, xu, xv, xuu, xuv, xvv;
  Vec3 nu;          // unit normal per the patch orientation
  double G11, G12, G22;
  double detG, sqrtG;
  Vec3 du, dv;      // dual basis: du . xu = 1, du . xv = 0, ...
  Region region;
};

MetricData patch_metric(const SurfacePatch& patch, double u, double v, const PmlProfile* pml = nullptr);

/// MetricData plus the stretch data needed by the kernels.
struct NodeData : MetricData {
  CVec3 xt;      // stretched point
  CVec3 alpha;   // 1 + i sigma_l
  double wq;     // Fejer weight times sqrt|G|
};

struct PatchInfo {
  PatchPtr patch;
  Region region;
  Vec3 centre;
  double radius;  // max distance from centre to sampled points
};

/// A set of charts with a common Chebyshev order and PML profile.
/// Node index = patch * n^2 + i * n + j.
class Interface {
 public:
  Interface(std::vector<PatchPtr> patches, const PmlProfile& pml, int np);

  int np() const { return grid_.n(); }
  int nodes_per_patch() const { return grid_.n() * grid_.n(); }
  int num_patches() const { return static_cast<int>(patches_.size()); }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  const ChebyshevGrid& grid() const { return grid_; }
  const PmlProfile& pml() const { return pml_; }
  const PatchInfo& patch(int p) const { return patches_[p]; }
  const NodeData& node(int n) const { return nodes_[n]; }
  const std::vector<NodeData>& nodes() const { return nodes_; }

  /// Geometry + stretch data at an arbitrary chart point.
  NodeData eval(int p, double u, double v) const;

  /// Largest distance between two nodes (estimate of diam).
  double diameter() const;

 private:
  ChebyshevGrid grid_;
  PmlProfile pml_;
  std::vector<PatchInfo> patches_;
  std::vector<NodeData> nodes_;
};

/// Breakpoints for tiling [-(a+T), a+T]: always contains +-a, +-(a+T) and the
/// given extra points; PHY intervals are split to length <= h_phy, PML ones to <= h_pml.
std::vector<double> auto_breakpoints(double a, double T, std::vector<double> extra, double h_phy,
                                     double h_pml);

struct GraphInterfaceSpec {
  double height = 0.0;           // reference plane x3 = height
  HeightPtr eta;                 // perturbation (nullptr = flat)
  std::vector<double> xbreaks;   // tiling breakpoints along x1
  std::vector<double> ybreaks;   // along x2
  int orientation = -1;          // -1: normal points to -x3 (into the lower layer)
};

/// Patch cover of the truncated graph interface. Throws ValidationError
/// ("unsupported-geometry") if supp eta leaves the physical box or the
/// breakpoints do not cover the footprint [-(a+T), a+T]^2.
Interface build_truncated_interface(const GraphInterfaceSpec& spec, const PmlProfile& pml, int np);

/// Patches of a sphere (6 cube faces) with the given orientation.
std::vector<PatchPtr> sphere_patches(const Vec3& centre, double radius, int orientation);

/// Patches of a torus (nphi x ntheta tiles) with the given orientation.
std::vector<PatchPtr> torus_patches(const Vec3& centre, double R, double r, int nphi, int ntheta,
                                    int orientation);

/// Graph patches of an interface (without building grids).
std::vector<PatchPtr> graph_patches(const GraphInterfaceSpec& spec);

// Surface differential operators on one patch. Tangential fields are given by
// contravariant components (phi1, phi2) at the nodes.

/// div_G phi = (1/sqrt|G|) (d_u(sqrt|G| phi1) + d_v(sqrt|G| phi2)).
void surface_divergence(const Interface& s, int p, const cplx* phi1, const cplx* phi2, cplx* out);

/// The same quantity through the expanded coefficient matrices B1, B2.
void surface_divergence_bformula(const Interface& s, int p, const cplx* phi1, const cplx* phi2, cplx* out);

/// nu x grad_G u as contravariant components.
void surface_vector_curl(const Interface& s, int p, const cplx* u, cplx* out1, cplx* out2);

/// Surface gradient of u as 3-vectors.
void surface_gradient(const Interface& s, int p, const cplx* u, CVec3* out);

/// Whole-interface versions; densities interleaved (node*2 + component).
CVecX surface_divergence(const Interface& s, const CVecX& phi);
CVecX surface_vector_curl(const Interface& s, const CVecX& u);

/// Block matrices of div_G (n^2 x 2 n^2) and vector curl (2 n^2 x n^2) on patch p.
MatX divergence_matrix(const Interface& s, int p);
MatX curl_matrix(const Interface& s, int p);

/// Convert between interleaved contravariant components and 3-vectors.
CVec3 tangential_vector(const NodeData& nd, cplx c1, cplx c2);
void contravariant(const NodeData& nd, const CVec3& w, cplx& c1, cplx& c2);

}  // namespace pmlbie
