// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <vector>

#include "pmlbie/types.hpp"

namespace pmlbie {

/// Uniaxial stretch parameters. Axis l is physical for |x_l| <= a[l] and
/// absorbing on a[l] < |x_l| <= a[l] + T[l].
class PmlProfile {
 public:
  PmlProfile() = default;
  PmlProfile(std::array<double, 3> a, std::array<double, 3> T, double S, int P);

  /// Isotropic convenience constructor (same a, T on all axes).
  static PmlProfile uniform(double a, double T, double S, int P);

  /// Throws InvalidArgument unless a, T > 0, S > 0 (S >= 0 if allow_zero), P >= 2.
  void validate(bool allow_zero_strength = false) const;

  const std::array<double, 3>& a() const { return a_; }
  const std::array<double, 3>& T() const { return T_; }
  double S() const { return S_; }
  int P() const { return P_; }
  /// Integral of sigma over the ramp [a, a+T] on axis l.
  double ramp_integral(int axis) const { return CT_[axis]; }

  bool is_physical(const Vec3& x) const;

 private:
  std::array<double, 3> a_{1.0, 1.0, 1.0};
  std::array<double, 3> T_{1.0, 1.0, 1.0};
  double S_ = 0.0;
  int P_ = 2;
  std::array<double, 3> CT_{0.0, 0.0, 0.0};
  std::array<std::vector<double>, 3> cheb_;  // ramp antiderivative on [a, a+T], Chebyshev coefficients
  friend double sigma_antiderivative(const PmlProfile& p, int axis, double t);
/// The same value by direct 32-node Gauss-Legendre quadrature of the ramp.
double sigma_antiderivative_direct(const PmlProfile& p, int axis, double t);
};

struct StretchJacobians {
  CVec3 alpha;  // 1 + i sigma_l(x_l)
  CVec3 B;      // diagonal of B
  cplx J;       // alpha1 alpha2 alpha3
  CVec3 A;      // diagonal of A = J^{-1} B^2
};

double sigma(const PmlProfile& p, int axis, double t);
double sigma_antiderivative(const PmlProfile& p, int axis, double t);
/// The same value by direct 32-node Gauss-Legendre quadrature of the ramp.
double sigma_antiderivative_direct(const PmlProfile& p, int axis, double t);
CVec3 stretch_point(const PmlProfile& p, const Vec3& x);
StretchJacobians jacobians(const PmlProfile& p, const Vec3& x);

/// Square root on the branch Re >= 0 with arg in (-pi/2, pi/2].
cplx branch_sqrt(cplx z);

/// rho = sqrt(sum (xt_j - yt_j)^2); throws SingularEvaluation when xt == yt.
cplx complex_distance(const CVec3& xt, const CVec3& yt);

struct GreenValue {
  cplx phi;
  CVec3 grad;  // gradient with respect to the stretched target coordinate
};

/// PML-stretched Helmholtz kernel Phi~ = exp(ik rho)/(4 pi rho) and its x~-gradient.
GreenValue stretched_green(double k, const Vec3& x, const Vec3& y, const PmlProfile& p);

/// Radial factors of the kernel for a given separation R = x~ - y~, rho.
/// grad = R F1, Hessian = I F1 + R R^T F2.
struct GreenRadial {
  cplx phi;
  cplx F1;
  cplx F2;
};
GreenRadial green_radial(double k, cplx rho, bool need_F2);

/// Differences of the radial factors for two wavenumbers at the same rho,
/// evaluated without cancellation for small k rho.
struct GreenRadialDiff {
  cplx k2phi;  // k1^2 Phi1 - k2^2 Phi2
  cplx dF1;
  cplx dF2;
};
GreenRadialDiff green_radial_diff(double k1, double k2, cplx rho);

}  // namespace pmlbie
