// SPDX-License-Identifier: Apache-2.0
#include "pmlbie/pml.hpp"

#include <cmath>

#include "pmlbie/quadrature1d.hpp"

namespace pmlbie {

namespace {

double ipow(double x, int n) {
  double r = 1.0;
  for (; n > 0; n >>= 1, x *= x)
    if (n & 1) r *= x;
  return r;
}

double ramp_value(double S, int P, double xbar) {
  const double f1 = (0.5 - 1.0 / P) * xbar * xbar * xbar + xbar / P + 0.5;
  const double f2 = 1.0 - f1;
  const double p1 = ipow(f1, P);
  const double p2 = ipow(f2, P);
  return 2.0 * S * p1 / (p1 + p2);
}

// integral of sigma over [a, s] for a <= s <= a+T
double ramp_partial(double a, double T, double S, int P, double s) {
  if (s <= a) return 0.0;
  const Rule1D& gl = gauss_legendre(32);
  const double h = 0.5 * (s - a);
  const double m = 0.5 * (s + a);
  double acc = 0.0;
  for (size_t i = 0; i < gl.x.size(); ++i) {
    const double t = m + h * gl.x[i];
    acc += gl.w[i] * ramp_value(S, P, (t - (a + T)) / T);
  }
  return acc * h;
}

}  // namespace

PmlProfile::PmlProfile(std::array<double, 3> a, std::array<double, 3> T, double S, int P)
    : a_(a), T_(T), S_(S), P_(P) {
  constexpr int nc = 64;
  for (int l = 0; l < 3; ++l) {
    CT_[l] = ramp_partial(a_[l], T_[l], S_, P_, a_[l] + T_[l]);
    std::vector<double> f(nc);
    for (int j = 0; j < nc; ++j) {
      const double x = std::cos((2 * j + 1) * kPi / (2 * nc));
      f[j] = ramp_partial(a_[l], T_[l], S_, P_, a_[l] + 0.5 * T_[l] * (x + 1.0));
    }
    cheb_[l].assign(nc, 0.0);
    for (int k = 0; k < nc; ++k) {
      double c = 0.0;
      for (int j = 0; j < nc; ++j) c += f[j] * std::cos(k * (2 * j + 1) * kPi / (2 * nc));
      cheb_[l][k] = (k == 0 ? 1.0 : 2.0) * c / nc;
    }
  }
}

PmlProfile PmlProfile::uniform(double a, double T, double S, int P) {
  return PmlProfile({a, a, a}, {T, T, T}, S, P);
}

void PmlProfile::validate(bool allow_zero_strength) const {
  for (int l = 0; l < 3; ++l) {
    if (!(a_[l] > 0.0)) throw InvalidArgument("pml: a must be positive on every axis");
    if (!(T_[l] > 0.0)) throw InvalidArgument("pml: T must be positive on every axis");
  }
  if (allow_zero_strength ? !(S_ >= 0.0) : !(S_ > 0.0))
    throw InvalidArgument("pml: strength S must be positive");
  if (P_ < 2) throw InvalidArgument("pml: order P must be >= 2");
}

bool PmlProfile::is_physical(const Vec3& x) const {
  for (int l = 0; l < 3; ++l)
    if (std::abs(x[l]) > a_[l]) return false;
  return true;
}

double sigma(const PmlProfile& p, int axis, double t) {
  const double at = std::abs(t);
  const double a = p.a()[axis], T = p.T()[axis];
  if (at <= a) return 0.0;
  if (at > a + T) return p.S();
  return ramp_value(p.S(), p.P(), (at - (a + T)) / T);
}

double sigma_antiderivative(const PmlProfile& p, int axis, double t) {
  const double at = std::abs(t);
  const double a = p.a()[axis], T = p.T()[axis];
  double v;
  if (at <= a) {
    return 0.0;
  } else if (at <= a + T) {
    // Clenshaw on the tabulated 32-node quadrature values
    const std::vector<double>& c = p.cheb_[axis];
    const double x = 2.0 * (at - a) / T - 1.0;
    double b1 = 0.0, b2 = 0.0;
    for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k) {
      const double b0 = 2.0 * x * b1 - b2 + c[k];
      b2 = b1;
      b1 = b0;
    }
    v = x * b1 - b2 + c[0];
  } else {
    v = p.ramp_integral(axis) + p.S() * (at - a - T);
  }
  return t < 0 ? -v : v;
}

double sigma_antiderivative_direct(const PmlProfile& p, int axis, double t) {
  const double at = std::abs(t);
  const double a = p.a()[axis], T = p.T()[axis];
  double v;
  if (at <= a)
    return 0.0;
  else if (at <= a + T)
    v = ramp_partial(a, T, p.S(), p.P(), at);
  else
    v = p.ramp_integral(axis) + p.S() * (at - a - T);
  return t < 0 ? -v : v;
}

CVec3 stretch_point(const PmlProfile& p, const Vec3& x) {
  CVec3 xt;
  for (int l = 0; l < 3; ++l) xt[l] = cplx(x[l], sigma_antiderivative(p, l, x[l]));
  return xt;
}

StretchJacobians jacobians(const PmlProfile& p, const Vec3& x) {
  StretchJacobians s;
  for (int l = 0; l < 3; ++l) s.alpha[l] = cplx(1.0, sigma(p, l, x[l]));
  s.B = s.alpha;
  s.J = s.alpha[0] * s.alpha[1] * s.alpha[2];
  for (int l = 0; l < 3; ++l) s.A[l] = s.B[l] * s.B[l] / s.J;
  return s;
}

cplx branch_sqrt(cplx z) {
  cplx s = std::sqrt(z);
  if (s.real() < 0.0 || (s.real() == 0.0 && s.imag() < 0.0)) s = -s;
  return s;
}

cplx complex_distance(const CVec3& xt, const CVec3& yt) {
  const CVec3 R = xt - yt;
  if (R.cwiseAbs().maxCoeff() == 0.0)
    throw SingularEvaluation("complex_distance: coincident points");
  return branch_sqrt(R[0] * R[0] + R[1] * R[1] + R[2] * R[2]);
}

GreenRadial green_radial(double k, cplx rho, bool need_F2) {
  const cplx w = kI * k * rho;
  const cplx e = std::exp(w);
  const cplx r2 = rho * rho;
  GreenRadial g;
  g.phi = e / (4.0 * kPi * rho);
  g.F1 = g.phi * (w - 1.0) / r2;
  g.F2 = need_F2 ? g.phi * (3.0 - 3.0 * w + w * w) / (r2 * r2) : cplx(0.0);
  return g;
}

GreenRadialDiff green_radial_diff(double k1, double k2, cplx rho) {
  const cplx w1 = kI * k1 * rho, w2 = kI * k2 * rho;
  const cplx four_pi_rho = 4.0 * kPi * rho;
  const cplx r2 = rho * rho;
  GreenRadialDiff d;
  d.k2phi = (k1 * k1 * std::exp(w1) - k2 * k2 * std::exp(w2)) / four_pi_rho;
  cplx dg, dh;
  if (std::max(std::abs(w1), std::abs(w2)) < 2.0) {
    // e^w (w-1) + 1 = sum_{n>=2} (n-1) w^n/n!,  e^w (3-3w+w^2) - 3 = sum_{n>=2} (n-1)(n-3) w^n/n!
    cplx p1 = w1, p2 = w2;
    double fact = 1.0;
    dg = 0.0;
    dh = 0.0;
    for (int n = 2; n <= 40; ++n) {
      p1 *= w1;
      p2 *= w2;
      fact *= n;
      const cplx dp = (p1 - p2) / fact;
      dg += double(n - 1) * dp;
      dh += double((n - 1) * (n - 3)) * dp;
      if (n > 4 && (std::abs(p1) + std::abs(p2)) * n * n / fact < 1e-17 * std::abs(dg)) break;
    }
  } else {
    const cplx e1 = std::exp(w1), e2 = std::exp(w2);
    dg = e1 * (w1 - 1.0) - e2 * (w2 - 1.0);
    dh = e1 * (3.0 - 3.0 * w1 + w1 * w1) - e2 * (3.0 - 3.0 * w2 + w2 * w2);
  }
  d.dF1 = dg / (four_pi_rho * r2);
  d.dF2 = dh / (four_pi_rho * r2 * r2);
  return d;
}

GreenValue stretched_green(double k, const Vec3& x, const Vec3& y, const PmlProfile& p) {
  const CVec3 xt = stretch_point(p, x), yt = stretch_point(p, y);
  const cplx rho = complex_distance(xt, yt);
  const GreenRadial g = green_radial(k, rho, false);
  return {g.phi, (xt - yt) * g.F1};
}

}  // namespace pmlbie
