// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>

#include "pmlbie/types.hpp"

namespace pmlbie {

/// Chart value with first and second parametric derivatives.
struct PatchPoint {
  Vec3 x, xu, xv, xuu, xuv, xvv;
};

/// Smooth chart x(u, v) on [-1,1]^2. `orientation` = +1 means the unit
/// normal is (x_u x x_v)/|x_u x x_v|, -1 means the opposite.
class SurfacePatch {
 public:
  virtual ~SurfacePatch() = default;
  virtual PatchPoint eval(double u, double v) const = 0;
  virtual std::string kind() const = 0;
  int orientation() const { return orientation_; }
  void set_orientation(int o) { orientation_ = o >= 0 ? 1 : -1; }

 private:
  int orientation_ = 1;
};

using PatchPtr = std::shared_ptr<const SurfacePatch>;

/// x = c + u e1 + v e2.
class AffinePatch : public SurfacePatch {
 public:
  AffinePatch(Vec3 c, Vec3 e1, Vec3 e2, int orientation = 1);
  PatchPoint eval(double u, double v) const override;
  std::string kind() const override { return "affine"; }

 private:
  Vec3 c_, e1_, e2_;
};

/// Height function eta(x1, x2) with first and second derivatives.
class HeightFunction {
 public:
  virtual ~HeightFunction() = default;
  struct Value {
    double f, fx, fy, fxx, fxy, fyy;
  };
  virtual Value eval(double x, double y) const = 0;
  /// Axis-aligned rectangle containing supp eta.
  virtual void support(double& x0, double& x1, double& y0, double& y1) const = 0;
};

using HeightPtr = std::shared_ptr<const HeightFunction>;

/// eta = amp (cos(pi x^2) + 1)(cos(pi y^2) + 1) on [-1,1]^2 (scaled by `half`), zero outside.
class CosineBump : public HeightFunction {
 public:
  explicit CosineBump(double amp, double half = 1.0) : amp_(amp), half_(half) {}
  Value eval(double x, double y) const override;
  void support(double& x0, double& x1, double& y0, double& y1) const override;

 private:
  double amp_, half_;
};

/// eta = amp exp(-(x^2 + y^2)/w^2) multiplied by a C-infinity cutoff that vanishes for |x|,|y| >= half.
class GaussianBump : public HeightFunction {
 public:
  GaussianBump(double amp, double width, double half) : amp_(amp), w_(width), half_(half) {}
  Value eval(double x, double y) const override;
  void support(double& x0, double& x1, double& y0, double& y1) const override;

 private:
  double amp_, w_, half_;
};

/// Graph x3 = z0 + eta(x1, x2) over the rectangle [x0,x1] x [y0,y1].
class GraphPatch : public SurfacePatch {
 public:
  GraphPatch(double x0, double x1, double y0, double y1, double z0, HeightPtr eta, int orientation);
  PatchPoint eval(double u, double v) const override;
  std::string kind() const override { return eta_ ? "graph" : "flat"; }

 private:
  double xm_, hx_, ym_, hy_, z0_;
  HeightPtr eta_;
};

/// One face of the cube-to-sphere projection; face in 0..5 = +x,-x,+y,-y,+z,-z.
/// With orientation +1 the normal points away from the centre.
class SphereCubePatch : public SurfacePatch {
 public:
  SphereCubePatch(Vec3 centre, double radius, int face, int orientation);
  PatchPoint eval(double u, double v) const override;
  std::string kind() const override { return "sphere"; }

 private:
  Vec3 c_;
  double r_;
  Vec3 q0_, qu_, qv_;
};

/// Torus patch over angle ranges; theta is the tube angle, phi the azimuth.
/// Axis along x3, major radius R, minor radius r; orientation +1 = outward.
class TorusPatch : public SurfacePatch {
 public:
  TorusPatch(Vec3 centre, double R, double r, double phi0, double phi1, double th0, double th1,
             int orientation);
  PatchPoint eval(double u, double v) const override;
  std::string kind() const override { return "torus"; }

 private:
  Vec3 c_;
  double R_, r_, pm_, ph_, tm_, th_;
};

}  // namespace pmlbie
