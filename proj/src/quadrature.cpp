// SPDX-License-Identifier: Apache-2.0
#include "pmlbie/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "pmlbie/quadrature1d.hpp"

namespace pmlbie {

std::vector<Target> surface_targets(const Interface& s) {
  std::vector<Target> out;
  out.reserve(s.num_nodes());
  const int n = s.np();
  const auto& u = s.grid().nodes();
  for (int k = 0; k < s.num_nodes(); ++k) {
    const NodeData& nd = s.node(k);
    Target t;
    t.x = nd.x;
    t.xt = nd.xt;
    t.alpha = nd.alpha;
    t.nu = nd.nu;
    t.du = nd.du;
    t.dv = nd.dv;
    const int p = k / (n * n), r = k % (n * n);
    t.self_patch = p;
    t.u = u[r / n];
    t.v = u[r % n];
    out.push_back(t);
  }
  return out;
}

std::vector<Target> foreign_surface_targets(const Interface& s) {
  auto out = surface_targets(s);
  for (auto& t : out) t.self_patch = -1;
  return out;
}

std::vector<Target> point_targets(const std::vector<Vec3>& pts, const PmlProfile& pml) {
  std::vector<Target> out;
  out.reserve(pts.size());
  for (const auto& x : pts) {
    Target t;
    t.x = x;
    t.xt = stretch_point(pml, x);
    t.alpha = jacobians(pml, x).alpha;
    out.push_back(t);
  }
  return out;
}

void polar_rule(double us, double vs, double delta, int n_ang, int n_rad, std::vector<QPt>& out) {
  out.clear();
  const Rule1D& ga = gauss_legendre(n_ang);
  const Rule1D& gr = gauss_legendre(n_rad);
  const double cx[4] = {-1.0, 1.0, 1.0, -1.0};
  const double cy[4] = {-1.0, -1.0, 1.0, 1.0};
  for (int k = 0; k < 4; ++k) {
    const double ax = cx[k], ay = cy[k], bx = cx[(k + 1) % 4], by = cy[(k + 1) % 4];
    const double dx = 0.5 * (bx - ax), dy = 0.5 * (by - ay);  // unit direction (edges have length 2)
    const double proj = (us - ax) * dx + (vs - ay) * dy;
    const double fx = ax + proj * dx, fy = ay + proj * dy;
    const double d = std::hypot(us - fx, vs - fy);
    if (d < 1e-13) continue;
    const double tA = -proj, tB = 2.0 - proj;
    const double t0 = std::asinh(tA / d), t1 = std::asinh(tB / d);
    const double tm = 0.5 * (t0 + t1), th = 0.5 * (t1 - t0);
    for (int i = 0; i < n_ang; ++i) {
      const double tau = tm + th * ga.x[i];
      const double wt = th * ga.w[i];
      const double t = d * std::sinh(tau);
      const double ex = fx + t * dx, ey = fy + t * dy;
      const double ell = d * std::cosh(tau);
      const double jac = d * d * std::cosh(tau) * wt;
      if (delta <= 0.0) {
        for (int j = 0; j < n_rad; ++j) {
          const double s = 0.5 * (1.0 + gr.x[j]);
          const double ws = 0.5 * gr.w[j];
          out.push_back({us + s * (ex - us), vs + s * (ey - vs), ws * s * jac});
        }
      } else {
        const double T = std::asinh(ell / delta);
        for (int j = 0; j < n_rad; ++j) {
          const double tt = 0.5 * T * (1.0 + gr.x[j]);
          const double s = delta / ell * std::sinh(tt);
          const double ws = delta / ell * std::cosh(tt) * 0.5 * T * gr.w[j];
          out.push_back({us + s * (ex - us), vs + s * (ey - vs), ws * s * jac});
        }
      }
    }
  }
}

void closest_point(const SurfacePatch& patch, const Vec3& x, double& u, double& v, double& dist) {
  const int ns = 11;
  double best = 1e300;
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < ns; ++j) {
      const double su = -1.0 + 2.0 * i / (ns - 1), sv = -1.0 + 2.0 * j / (ns - 1);
      const double d = (patch.eval(su, sv).x - x).squaredNorm();
      if (d < best) best = d, u = su, v = sv;
    }
  for (int it = 0; it < 60; ++it) {
    const PatchPoint pp = patch.eval(u, v);
    const Vec3 r = pp.x - x;
    const double g1 = pp.xu.dot(r), g2 = pp.xv.dot(r);
    const double h11 = pp.xu.dot(pp.xu) + r.dot(pp.xuu), h12 = pp.xu.dot(pp.xv) + r.dot(pp.xuv),
                 h22 = pp.xv.dot(pp.xv) + r.dot(pp.xvv);
    const double det = h11 * h22 - h12 * h12;
    double du, dv;
    if (det > 1e-14 * (h11 * h22) && h11 > 0) {
      du = -(h22 * g1 - h12 * g2) / det;
      dv = -(h11 * g2 - h12 * g1) / det;
    } else {
      const double a11 = pp.xu.dot(pp.xu), a12 = pp.xu.dot(pp.xv), a22 = pp.xv.dot(pp.xv);
      const double dd = a11 * a22 - a12 * a12;
      du = -(a22 * g1 - a12 * g2) / dd;
      dv = -(a11 * g2 - a12 * g1) / dd;
    }
    double nu_ = std::clamp(u + du, -1.0, 1.0), nv = std::clamp(v + dv, -1.0, 1.0);
    // on a bound, minimise along the free coordinate only
    if (nu_ != u + du && nv == v + dv) nv = std::clamp(v - g2 / std::max(h22, 1e-300), -1.0, 1.0);
    if (nv != v + dv && nu_ == u + du) nu_ = std::clamp(u - g1 / std::max(h11, 1e-300), -1.0, 1.0);
    const double step = std::abs(nu_ - u) + std::abs(nv - v);
    u = nu_;
    v = nv;
    if (step < 1e-15) break;
  }
  dist = (patch.eval(u, v).x - x).norm();
}

PatchRule patch_rule(const Interface& s, int p, const Target& t, const QuadOptions& opt) {
  PatchRule r;
  const int np = s.np();
  if (t.self_patch == p) {
    r.near = true;
    polar_rule(t.u, t.v, 0.0, opt.ang(np), opt.rad(np), r.pts);
    return r;
  }
  const PatchInfo& info = s.patch(p);
  if ((t.x - info.centre).norm() >= opt.near_factor * info.radius) return r;
  double u, v, dist;
  closest_point(*info.patch, t.x, u, v, dist);
  const PatchPoint pp = info.patch->eval(u, v);
  const double scale = std::sqrt(0.5 * (pp.xu.squaredNorm() + pp.xv.squaredNorm()));
  r.near = true;
  r.dist = dist;
  const double delta = dist / scale;
  if (delta >= opt.polar_delta) {
    const Rule1D& g = gauss_legendre(opt.tensor(np));
    const int m = static_cast<int>(g.x.size());
    r.pts.reserve(m * m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) r.pts.push_back({g.x[i], g.x[j], g.w[i] * g.w[j]});
    return r;
  }
  polar_rule(u, v, delta, opt.ang(np), opt.rad_near(np), r.pts);
  return r;
}

}  // namespace pmlbie
