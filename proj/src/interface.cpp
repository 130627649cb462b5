// SPDX-License-Identifier: Apache-2.0
#include "pmlbie/interface.hpp"

#include <algorithm>
#include <cmath>

namespace pmlbie {

MetricData patch_metric(const SurfacePatch& patch, double u, double v, const PmlProfile* pml) {
  const PatchPoint pp = patch.eval(u, v);
  MetricData m;
  m.x = pp.x;
  m.xu = pp.xu;
  m.xv = pp.xv;
  m.xuu = pp.xuu;
  m.xuv = pp.xuv;
  m.xvv = pp.xvv;
  const Vec3 c = pp.xu.cross(pp.xv);
  const double cn = c.norm();
  if (cn < 1e-14) throw InvalidArgument("patch_metric: degenerate chart");
  m.nu = patch.orientation() * c / cn;
  m.G11 = pp.xu.dot(pp.xu);
  m.G12 = pp.xu.dot(pp.xv);
  m.G22 = pp.xv.dot(pp.xv);
  m.detG = m.G11 * m.G22 - m.G12 * m.G12;
  m.sqrtG = std::sqrt(m.detG);
  m.du = (m.G22 * pp.xu - m.G12 * pp.xv) / m.detG;
  m.dv = (m.G11 * pp.xv - m.G12 * pp.xu) / m.detG;
  m.region = (pml && !pml->is_physical(pp.x)) ? Region::PML : Region::PHY;
  return m;
}

Interface::Interface(std::vector<PatchPtr> patches, const PmlProfile& pml, int np)
    : grid_(np), pml_(pml) {
  const auto& u = grid_.nodes();
  const auto& w = grid_.weights();
  nodes_.reserve(patches.size() * np * np);
  for (const auto& pp : patches) {
    PatchInfo info;
    info.patch = pp;
    const Vec3 c = pp->eval(0.0, 0.0).x;
    info.centre = c;
    info.region = pml.is_physical(c) ? Region::PHY : Region::PML;
    double rad = 0.0;
    const int ns = 9;
    for (int i = 0; i < ns; ++i)
      for (int j = 0; j < ns; ++j) {
        const double su = -1.0 + 2.0 * i / (ns - 1), sv = -1.0 + 2.0 * j / (ns - 1);
        rad = std::max(rad, (pp->eval(su, sv).x - c).norm());
      }
    info.radius = rad;
    patches_.push_back(info);
    const int p = static_cast<int>(patches_.size()) - 1;
    for (int i = 0; i < np; ++i)
      for (int j = 0; j < np; ++j) {
        NodeData nd = eval(p, u[i], u[j]);
        nd.wq = w[i] * w[j] * nd.sqrtG;
        nodes_.push_back(nd);
      }
  }
}

NodeData Interface::eval(int p, double u, double v) const {
  NodeData nd;
  static_cast<MetricData&>(nd) = patch_metric(*patches_[p].patch, u, v, &pml_);
  nd.xt = stretch_point(pml_, nd.x);
  nd.alpha = jacobians(pml_, nd.x).alpha;
  nd.wq = 0.0;
  return nd;
}

double Interface::diameter() const {
  double d = 0.0;
  for (int a = 0; a < num_patches(); ++a)
    for (int b = a; b < num_patches(); ++b)
      d = std::max(d, (patches_[a].centre - patches_[b].centre).norm() + patches_[a].radius +
                          patches_[b].radius);
  return d;
}

std::vector<double> auto_breakpoints(double a, double T, std::vector<double> extra, double h_phy,
                                     double h_pml) {
  std::vector<double> pts{-(a + T), -a, a, a + T};
  for (double e : extra)
    if (std::abs(e) < a + T) pts.push_back(e);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(), [](double x, double y) { return std::abs(x - y) < 1e-12; }),
            pts.end());
  std::vector<double> out{pts.front()};
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    const double x0 = pts[i], x1 = pts[i + 1];
    const bool in_pml = 0.5 * (x0 + x1) < -a || 0.5 * (x0 + x1) > a;
    const double h = in_pml ? h_pml : h_phy;
    const int m = std::max(1, static_cast<int>(std::ceil((x1 - x0) / h - 1e-9)));
    for (int k = 1; k <= m; ++k) out.push_back(x0 + (x1 - x0) * k / m);
  }
  return out;
}

namespace {

void check_breaks(const std::vector<double>& b, double a, double T, const char* axis) {
  if (b.size() < 2) throw ValidationError(std::string("interface: too few breakpoints on ") + axis);
  if (std::abs(b.front() + a + T) > 1e-10 || std::abs(b.back() - a - T) > 1e-10)
    throw ValidationError(std::string("interface: breakpoints on ") + axis +
                          " must span the footprint [-(a+T), a+T]");
  for (size_t i = 0; i + 1 < b.size(); ++i) {
    if (!(b[i + 1] > b[i])) throw ValidationError("interface: breakpoints must increase");
    for (double s : {-a, a})
      if (b[i] < s - 1e-12 && b[i + 1] > s + 1e-12)
        throw ValidationError(std::string("interface: a patch straddles the PHY/PML boundary on ") + axis);
  }
}

bool inside(double lo, double hi, double s0, double s1) { return lo >= s0 - 1e-12 && hi <= s1 + 1e-12; }
bool disjoint(double lo, double hi, double s0, double s1) { return hi <= s0 + 1e-12 || lo >= s1 - 1e-12; }

}  // namespace

std::vector<PatchPtr> graph_patches(const GraphInterfaceSpec& spec) {
  double sx0 = 0, sx1 = 0, sy0 = 0, sy1 = 0;
  if (spec.eta) spec.eta->support(sx0, sx1, sy0, sy1);
  std::vector<PatchPtr> out;
  for (size_t i = 0; i + 1 < spec.xbreaks.size(); ++i)
    for (size_t j = 0; j + 1 < spec.ybreaks.size(); ++j) {
      const double x0 = spec.xbreaks[i], x1 = spec.xbreaks[i + 1];
      const double y0 = spec.ybreaks[j], y1 = spec.ybreaks[j + 1];
      HeightPtr eta;
      if (spec.eta) {
        const bool in = inside(x0, x1, sx0, sx1) && inside(y0, y1, sy0, sy1);
        const bool out_ = disjoint(x0, x1, sx0, sx1) || disjoint(y0, y1, sy0, sy1);
        if (!in && !out_)
          throw ValidationError("interface: patch partially overlaps the perturbation support; add breakpoints at its edges");
        if (in) eta = spec.eta;
      }
      out.push_back(std::make_shared<GraphPatch>(x0, x1, y0, y1, spec.height, eta, spec.orientation));
    }
  return out;
}

Interface build_truncated_interface(const GraphInterfaceSpec& spec, const PmlProfile& pml, int np) {
  const double a1 = pml.a()[0], a2 = pml.a()[1];
  if (spec.eta) {
    double x0, x1, y0, y1;
    spec.eta->support(x0, x1, y0, y1);
    if (x0 < -a1 - 1e-12 || x1 > a1 + 1e-12 || y0 < -a2 - 1e-12 || y1 > a2 + 1e-12)
      throw ValidationError("unsupported-geometry: perturbation support exceeds the physical box");
  }
  GraphInterfaceSpec s = spec;
  double sx0 = 0, sx1 = 0, sy0 = 0, sy1 = 0;
  std::vector<double> ex, ey;
  if (spec.eta) {
    spec.eta->support(sx0, sx1, sy0, sy1);
    ex = {sx0, sx1};
    ey = {sy0, sy1};
  }
  if (s.xbreaks.empty()) s.xbreaks = auto_breakpoints(a1, pml.T()[0], ex, 1.0, 1.0);
  if (s.ybreaks.empty()) s.ybreaks = auto_breakpoints(a2, pml.T()[1], ey, 1.0, 1.0);
  check_breaks(s.xbreaks, a1, pml.T()[0], "x1");
  check_breaks(s.ybreaks, a2, pml.T()[1], "x2");
  return Interface(graph_patches(s), pml, np);
}

std::vector<PatchPtr> sphere_patches(const Vec3& centre, double radius, int orientation) {
  std::vector<PatchPtr> out;
  for (int f = 0; f < 6; ++f) out.push_back(std::make_shared<SphereCubePatch>(centre, radius, f, orientation));
  return out;
}

std::vector<PatchPtr> torus_patches(const Vec3& centre, double R, double r, int nphi, int ntheta,
                                    int orientation) {
  std::vector<PatchPtr> out;
  for (int i = 0; i < nphi; ++i)
    for (int j = 0; j < ntheta; ++j)
      out.push_back(std::make_shared<TorusPatch>(centre, R, r, 2 * kPi * i / nphi, 2 * kPi * (i + 1) / nphi,
                                                 2 * kPi * j / ntheta, 2 * kPi * (j + 1) / ntheta,
                                                 orientation));
  return out;
}

// --- surface differential operators ------------------------------------------

void surface_divergence(const Interface& s, int p, const cplx* phi1, const cplx* phi2, cplx* out) {
  const int n = s.np();
  const MatX& D = s.grid().diff();
  const int base = p * n * n;
  std::vector<cplx> a(n * n), b(n * n);
  for (int k = 0; k < n * n; ++k) {
    a[k] = s.node(base + k).sqrtG * phi1[k];
    b[k] = s.node(base + k).sqrtG * phi2[k];
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cplx acc = 0.0;
      for (int m = 0; m < n; ++m) acc += D(i, m) * a[m * n + j] + D(j, m) * b[i * n + m];
      out[i * n + j] = acc / s.node(base + i * n + j).sqrtG;
    }
}

void surface_divergence_bformula(const Interface& s, int p, const cplx* phi1, const cplx* phi2, cplx* out) {
  const int n = s.np();
  const MatX& D = s.grid().diff();
  const int base = p * n * n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const NodeData& m = s.node(base + i * n + j);
      const double xv2 = m.G22, xu2 = m.G11, F = m.G12;
      const double c1 = (xv2 * m.xu.dot(m.xuu) + xu2 * m.xv.dot(m.xuv)) / m.detG -
                        F * (m.xv.dot(m.xuu) + m.xu.dot(m.xuv)) / m.detG;
      const double c2 = (xv2 * m.xu.dot(m.xuv) + xu2 * m.xv.dot(m.xvv)) / m.detG -
                        F * (m.xv.dot(m.xuv) + m.xu.dot(m.xvv)) / m.detG;
      cplx acc = c1 * phi1[i * n + j] + c2 * phi2[i * n + j];
      for (int k = 0; k < n; ++k) acc += D(i, k) * phi1[k * n + j] + D(j, k) * phi2[i * n + k];
      out[i * n + j] = acc;
    }
}

void surface_gradient(const Interface& s, int p, const cplx* u, CVec3* out) {
  const int n = s.np();
  const MatX& D = s.grid().diff();
  const int base = p * n * n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cplx gu = 0.0, gv = 0.0;
      for (int m = 0; m < n; ++m) {
        gu += D(i, m) * u[m * n + j];
        gv += D(j, m) * u[i * n + m];
      }
      const NodeData& nd = s.node(base + i * n + j);
      out[i * n + j] = gu * nd.du.cast<cplx>() + gv * nd.dv.cast<cplx>();
    }
}

void surface_vector_curl(const Interface& s, int p, const cplx* u, cplx* out1, cplx* out2) {
  const int n = s.np();
  std::vector<CVec3> g(n * n);
  surface_gradient(s, p, u, g.data());
  const int base = p * n * n;
  for (int k = 0; k < n * n; ++k) {
    const NodeData& nd = s.node(base + k);
    const CVec3 c = xcross(nd.nu.cast<cplx>(), g[k]);
    contravariant(nd, c, out1[k], out2[k]);
  }
}

CVecX surface_divergence(const Interface& s, const CVecX& phi) {
  const int nn = s.nodes_per_patch();
  CVecX out(s.num_nodes());
  std::vector<cplx> a(nn), b(nn);
  for (int p = 0; p < s.num_patches(); ++p) {
    for (int k = 0; k < nn; ++k) {
      a[k] = phi[2 * (p * nn + k)];
      b[k] = phi[2 * (p * nn + k) + 1];
    }
    surface_divergence(s, p, a.data(), b.data(), out.data() + p * nn);
  }
  return out;
}

CVecX surface_vector_curl(const Interface& s, const CVecX& u) {
  const int nn = s.nodes_per_patch();
  CVecX out(2 * s.num_nodes());
  std::vector<cplx> a(nn), b(nn);
  for (int p = 0; p < s.num_patches(); ++p) {
    surface_vector_curl(s, p, u.data() + p * nn, a.data(), b.data());
    for (int k = 0; k < nn; ++k) {
      out[2 * (p * nn + k)] = a[k];
      out[2 * (p * nn + k) + 1] = b[k];
    }
  }
  return out;
}

MatX divergence_matrix(const Interface& s, int p) {
  const int n = s.np(), nn = n * n;
  const MatX& D = s.grid().diff();
  const int base = p * nn;
  MatX M = MatX::Zero(nn, 2 * nn);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double inv = 1.0 / s.node(base + i * n + j).sqrtG;
      for (int m = 0; m < n; ++m) {
        M(i * n + j, 2 * (m * n + j)) += inv * D(i, m) * s.node(base + m * n + j).sqrtG;
        M(i * n + j, 2 * (i * n + m) + 1) += inv * D(j, m) * s.node(base + i * n + m).sqrtG;
      }
    }
  return M;
}

MatX curl_matrix(const Interface& s, int p) {
  const int n = s.np(), nn = n * n;
  const MatX& D = s.grid().diff();
  const int base = p * nn;
  MatX M = MatX::Zero(2 * nn, nn);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const NodeData& nd = s.node(base + i * n + j);
      // nu x du and nu x dv expressed in contravariant components
      const Vec3 a = nd.nu.cross(nd.du), b = nd.nu.cross(nd.dv);
      const double a1 = nd.du.dot(a), a2 = nd.dv.dot(a), b1 = nd.du.dot(b), b2 = nd.dv.dot(b);
      const int r = i * n + j;
      for (int m = 0; m < n; ++m) {
        M(2 * r, m * n + j) += a1 * D(i, m);
        M(2 * r + 1, m * n + j) += a2 * D(i, m);
        M(2 * r, i * n + m) += b1 * D(j, m);
        M(2 * r + 1, i * n + m) += b2 * D(j, m);
      }
    }
  return M;
}

CVec3 tangential_vector(const NodeData& nd, cplx c1, cplx c2) {
  return c1 * nd.xu.cast<cplx>() + c2 * nd.xv.cast<cplx>();
}

void contravariant(const NodeData& nd, const CVec3& w, cplx& c1, cplx& c2) {
  c1 = nd.du.cast<cplx>().dot(w);
  c2 = nd.dv.cast<cplx>().dot(w);
}

}  // namespace pmlbie
