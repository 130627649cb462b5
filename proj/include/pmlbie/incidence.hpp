// SPDX-License-Identifier: Apache-2.0
#pragma once

// Incident fields, planar layered reference fields and BIE boundary traces.
// Time convention e^{-i omega t}: curl E = i omega mu H, curl H = -i omega eps E.
// Layers are indexed 0..N-1 top-down; interface j separates layers j and j+1.

#include <vector>

#include "pmlbie/interface.hpp"

namespace pmlbie {

struct MediumSpec {
  double omega = 1.0;
  std::vector<double> eps, mu;
  int layers() const { return static_cast<int>(eps.size()); }
  double k(int j) const;
  /// Throws ValidationError unless omega > 0, N >= 2 (or 1 with allow_single), eps, mu > 0.
  void validate(bool allow_single = false) const;
};

struct PlaneWaveSpec {
  Vec3 p{1.0, 0.0, 0.0};
  double ky = 0.0;  // k_{1,x2}
  double kz = 1.0;  // k_{1,x3} > 0; the wave vector is (0, ky, -kz) scaled to |k| = k1
  /// Wave vector normalized against k1; throws ValidationError if kz <= 0.
  Vec3 wavevector(double k1) const;
};

struct DipoleSpec {
  Vec3 z{0.0, 0.0, 0.0};
  Vec3 p{1.0, 0.0, 0.0};
};

struct FieldPair {
  CVec3 E, H;
};

/// E = (p x k) e^{ik.x}, H = k x E/(omega mu1), at complex points.
std::vector<FieldPair> plane_wave_fields(const PlaneWaveSpec& pw, const MediumSpec& m,
                                         const std::vector<CVec3>& pts);
FieldPair plane_wave_field(const PlaneWaveSpec& pw, const MediumSpec& m, const CVec3& x);

/// E = i omega mu1 curl curl(Phi p), H = curl E/(i omega mu1) = k1^2 curl(Phi p),
/// with the complex distance for stretched points.
std::vector<FieldPair> dipole_fields(const DipoleSpec& d, const MediumSpec& m, const std::vector<CVec3>& pts);
FieldPair dipole_field(const DipoleSpec& d, const MediumSpec& m, const CVec3& x);

/// Flat layered stack: interface heights h_j (strictly decreasing), N - 1 of them.
struct LayeredStack {
  MediumSpec medium;
  std::vector<double> heights;
  int layers() const { return medium.layers(); }
  /// Depth d_j = -h_j used by the reflection recursion.
  double depth(int j) const { return -heights[j]; }
  void validate() const;
  /// Layer owning a real height x3 (the layer above owns its lower plane).
  int layer_of(double x3) const;
};

struct Fresnel {
  cplx RTE, RTM, TTE, TTM;
};

/// k_{j,x3} = sqrt(k_j^2 - ky^2), Im >= 0.
cplx vertical_wavenumber(const MediumSpec& m, int j, double ky);
/// Reflection/transmission from layer `from` into the adjacent layer `to`.
Fresnel fresnel_coefficients(const LayeredStack& s, double ky, int from, int to);

struct LayerCoefficients {
  std::vector<cplx> kz;               // per layer
  std::vector<cplx> RgTE, RgTM;       // generalized reflection R~_{j,j+1}, per layer (last = 0)
  std::vector<cplx> ATE, ATM;         // amplitudes, A_0 = 1
};
LayerCoefficients generalized_reflection(const LayeredStack& s, double ky);

/// Planar reference field of layer j (formula of that layer, at any complex point).
std::vector<FieldPair> planar_layer_fields(const LayeredStack& s, const PlaneWaveSpec& pw, int layer,
                                           const std::vector<CVec3>& pts);
/// Planar reference field in the layer containing each real base point.
std::vector<FieldPair> planar_reference_fields(const LayeredStack& s, const PlaneWaveSpec& pw,
                                               const std::vector<Vec3>& base, const std::vector<CVec3>& pts);

enum class IncidenceKind { PlaneWave, Dipole };

struct IncidenceSpec {
  IncidenceKind kind = IncidenceKind::PlaneWave;
  PlaneWaveSpec plane;
  DipoleSpec dipole;
};

/// Auxiliary source field of layer j: planar reference field (plane wave) or
/// the dipole in layer 0 and zero below.
std::vector<FieldPair> source_fields(const LayeredStack& s, const IncidenceSpec& inc, int layer,
                                     const std::vector<CVec3>& pts);

struct BoundaryData {
  CVecX f, g;  // interleaved contravariant components
};

/// f = nu x (B E_j^src(x~)) - nu x (B E_{j+1}^src(x~)) on interface j (g likewise with H).
BoundaryData boundary_data(const LayeredStack& s, const IncidenceSpec& inc, int j, const Interface& gamma);

/// Tangential trace nu x (B(x) F(x~)) of given nodal fields in contravariant components.
CVecX tangential_trace(const Interface& gamma, const std::vector<CVec3>& F);

/// Stretched node coordinates of an interface.
std::vector<CVec3> stretched_nodes(const Interface& gamma);

/// Manufactured solution with a dipole at z inside an obstacle:
/// E = curl curl(Phi(k1, x, z) e1), H = curl E/(i omega mu1).
FieldPair manufactured_field(const Vec3& z, const MediumSpec& m, const CVec3& x);

}  // namespace pmlbie
