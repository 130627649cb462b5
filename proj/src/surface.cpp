// SPDX-License-Identifier: Apache-2.0
#include "pmlbie/surface.hpp"

#include <cmath>

namespace pmlbie {

AffinePatch::AffinePatch(Vec3 c, Vec3 e1, Vec3 e2, int orientation) : c_(c), e1_(e1), e2_(e2) {
  set_orientation(orientation);
}

PatchPoint AffinePatch::eval(double u, double v) const {
  PatchPoint p;
  p.x = c_ + u * e1_ + v * e2_;
  p.xu = e1_;
  p.xv = e2_;
  p.xuu.setZero();
  p.xuv.setZero();
  p.xvv.setZero();
  return p;
}

namespace {

struct Profile1D {
  double g, g1, g2;
};

Profile1D cos_profile(double t, double half) {
  const double s = t / half;
  if (std::abs(s) >= 1.0) return {0.0, 0.0, 0.0};
  const double a = kPi * s * s;
  const double g = std::cos(a) + 1.0;
  const double g1 = -2.0 * kPi * s * std::sin(a) / half;
  const double g2 = (-2.0 * kPi * std::sin(a) - 4.0 * kPi * kPi * s * s * std::cos(a)) / (half * half);
  return {g, g1, g2};
}

Profile1D cutoff_profile(double t, double half) {
  const double s = t / half;
  if (std::abs(s) >= 1.0) return {0.0, 0.0, 0.0};
  const double q = 1.0 - s * s;
  const double q1 = -2.0 * s / half;
  const double q2 = -2.0 / (half * half);
  const double c = std::exp(1.0 - 1.0 / q);
  const double r = q1 / (q * q);
  const double c1 = c * r;
  const double c2 = c * (r * r + q2 / (q * q) - 2.0 * q1 * q1 / (q * q * q));
  return {c, c1, c2};
}

}  // namespace

HeightFunction::Value CosineBump::eval(double x, double y) const {
  const Profile1D a = cos_profile(x, half_), b = cos_profile(y, half_);
  return {amp_ * a.g * b.g,   amp_ * a.g1 * b.g,  amp_ * a.g * b.g1,
          amp_ * a.g2 * b.g,  amp_ * a.g1 * b.g1, amp_ * a.g * b.g2};
}

void CosineBump::support(double& x0, double& x1, double& y0, double& y1) const {
  x0 = y0 = -half_;
  x1 = y1 = half_;
}

HeightFunction::Value GaussianBump::eval(double x, double y) const {
  const Profile1D a = cutoff_profile(x, half_), b = cutoff_profile(y, half_);
  const double w2 = w_ * w_;
  const double ex = std::exp(-x * x / w2), ey = std::exp(-y * y / w2);
  const Profile1D gx{ex, -2.0 * x / w2 * ex, (4.0 * x * x / (w2 * w2) - 2.0 / w2) * ex};
  const Profile1D gy{ey, -2.0 * y / w2 * ey, (4.0 * y * y / (w2 * w2) - 2.0 / w2) * ey};
  const Profile1D X{a.g * gx.g, a.g1 * gx.g + a.g * gx.g1, a.g2 * gx.g + 2.0 * a.g1 * gx.g1 + a.g * gx.g2};
  const Profile1D Y{b.g * gy.g, b.g1 * gy.g + b.g * gy.g1, b.g2 * gy.g + 2.0 * b.g1 * gy.g1 + b.g * gy.g2};
  return {amp_ * X.g * Y.g,  amp_ * X.g1 * Y.g,  amp_ * X.g * Y.g1,
          amp_ * X.g2 * Y.g, amp_ * X.g1 * Y.g1, amp_ * X.g * Y.g2};
}

void GaussianBump::support(double& x0, double& x1, double& y0, double& y1) const {
  x0 = y0 = -half_;
  x1 = y1 = half_;
}

GraphPatch::GraphPatch(double x0, double x1, double y0, double y1, double z0, HeightPtr eta,
                       int orientation)
    : xm_(0.5 * (x0 + x1)), hx_(0.5 * (x1 - x0)), ym_(0.5 * (y0 + y1)), hy_(0.5 * (y1 - y0)), z0_(z0),
      eta_(std::move(eta)) {
  set_orientation(orientation);
}

PatchPoint GraphPatch::eval(double u, double v) const {
  const double X = xm_ + hx_ * u, Y = ym_ + hy_ * v;
  HeightFunction::Value h{0, 0, 0, 0, 0, 0};
  if (eta_) h = eta_->eval(X, Y);
  PatchPoint p;
  p.x = Vec3(X, Y, z0_ + h.f);
  p.xu = Vec3(hx_, 0.0, hx_ * h.fx);
  p.xv = Vec3(0.0, hy_, hy_ * h.fy);
  p.xuu = Vec3(0.0, 0.0, hx_ * hx_ * h.fxx);
  p.xuv = Vec3(0.0, 0.0, hx_ * hy_ * h.fxy);
  p.xvv = Vec3(0.0, 0.0, hy_ * hy_ * h.fyy);
  return p;
}

SphereCubePatch::SphereCubePatch(Vec3 centre, double radius, int face, int orientation)
    : c_(centre), r_(radius) {
  set_orientation(orientation);
  const Vec3 ex(1, 0, 0), ey(0, 1, 0), ez(0, 0, 1);
  switch (face) {
    case 0: q0_ = ex;  qu_ = ey; qv_ = ez; break;
    case 1: q0_ = -ex; qu_ = ez; qv_ = ey; break;
    case 2: q0_ = ey;  qu_ = ez; qv_ = ex; break;
    case 3: q0_ = -ey; qu_ = ex; qv_ = ez; break;
    case 4: q0_ = ez;  qu_ = ex; qv_ = ey; break;
    case 5: q0_ = -ez; qu_ = ey; qv_ = ex; break;
    default: throw InvalidArgument("SphereCubePatch: face must be in 0..5");
  }
}

PatchPoint SphereCubePatch::eval(double u, double v) const {
  const Vec3 q = q0_ + u * qu_ + v * qv_;
  const double r = q.norm();
  const double r3 = r * r * r, r5 = r3 * r * r;
  const double a = q.dot(qu_), b = q.dot(qv_);
  auto d1 = [&](const Vec3& qa, double qqa) -> Vec3 { return qa / r - q * qqa / r3; };
  auto d2 = [&](const Vec3& qa, double qqa, const Vec3& qb, double qqb) -> Vec3 {
    return -qa * qqb / r3 - qb * qqa / r3 - q * qa.dot(qb) / r3 + 3.0 * q * qqa * qqb / r5;
  };
  PatchPoint p;
  p.x = c_ + r_ * q / r;
  p.xu = r_ * d1(qu_, a);
  p.xv = r_ * d1(qv_, b);
  p.xuu = r_ * d2(qu_, a, qu_, a);
  p.xuv = r_ * d2(qu_, a, qv_, b);
  p.xvv = r_ * d2(qv_, b, qv_, b);
  return p;
}

TorusPatch::TorusPatch(Vec3 centre, double R, double r, double phi0, double phi1, double th0,
                       double th1, int orientation)
    : c_(centre), R_(R), r_(r), pm_(0.5 * (phi0 + phi1)), ph_(0.5 * (phi1 - phi0)),
      tm_(0.5 * (th0 + th1)), th_(0.5 * (th1 - th0)) {
  set_orientation(orientation);
}

PatchPoint TorusPatch::eval(double u, double v) const {
  const double ph = pm_ + ph_ * u, th = tm_ + th_ * v;
  const double cp = std::cos(ph), sp = std::sin(ph), ct = std::cos(th), st = std::sin(th);
  const double A = R_ + r_ * ct;
  PatchPoint p;
  p.x = c_ + Vec3(A * cp, A * sp, r_ * st);
  p.xu = ph_ * Vec3(-A * sp, A * cp, 0.0);
  p.xv = th_ * Vec3(-r_ * st * cp, -r_ * st * sp, r_ * ct);
  p.xuu = ph_ * ph_ * Vec3(-A * cp, -A * sp, 0.0);
  p.xuv = ph_ * th_ * Vec3(r_ * st * sp, -r_ * st * cp, 0.0);
  p.xvv = th_ * th_ * Vec3(-r_ * ct * cp, -r_ * ct * sp, -r_ * st);
  return p;
}

}  // namespace pmlbie
