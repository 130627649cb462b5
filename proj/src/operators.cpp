// SPDX-License-Identifier: Apache-2.0
#include "pmlbie/operators.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <mutex>

namespace pmlbie {

namespace {

std::mutex g_warn_mutex;
WarningHandler g_warn = [](const std::string& m) { std::cerr << "warning: " << m << "\n"; };

void require_wavenumber(double k) {
  if (!(k > 0.0)) throw InvalidArgument("wavenumber must be positive");
}

template <template <bool> class Ker, class... Args>
CMatX assemble_sel(const PotentialOptions& opt, const std::vector<Target>& t, const Interface& src,
                   Args... args) {
  if (opt.classical) return assemble(t, src, Ker<true>{args...}, opt.quad);
  return assemble(t, src, Ker<false>{args...}, opt.quad);
}

template <template <bool> class Ker, class... Args>
CVecX apply_sel(const PotentialOptions& opt, const std::vector<Target>& t, const Interface& src,
                const CVecX& d, Args... args) {
  if (opt.classical) return apply(t, src, Ker<true>{args...}, d, opt.quad);
  return apply(t, src, Ker<false>{args...}, d, opt.quad);
}

}  // namespace

void set_warning_handler(WarningHandler h) {
  std::lock_guard<std::mutex> lock(g_warn_mutex);
  g_warn = std::move(h);
}

void warn(const std::string& msg) {
  std::lock_guard<std::mutex> lock(g_warn_mutex);
  if (g_warn) g_warn(msg);
}

CVecX eval_scalar_single_layer(double k, const Interface& src, const CVecX& density,
                               const std::vector<Target>& targets, const PotentialOptions& opt) {
  if (density.size() != src.num_nodes()) throw InvalidArgument("scalar density size mismatch");
  return apply_sel<ScalarSLKernel>(opt, targets, src, density, k);
}

CMatX assemble_K(double k, const Interface& src, const std::vector<Target>& targets, const PotentialOptions& opt) {
  require_wavenumber(k);
  return assemble_sel<KKernel>(opt, targets, src, k);
}

CMatX assemble_V(double k, const Interface& src, const std::vector<Target>& targets, const PotentialOptions& opt) {
  return assemble_sel<VecSLKernel>(opt, targets, src, k);
}

CMatX assemble_scalar_V(double k, const Interface& src, const std::vector<Target>& targets,
                        const PotentialOptions& opt) {
  return assemble_sel<ScalarSLKernel>(opt, targets, src, k);
}

CMatX assemble_N_direct(double k, const Interface& src, const std::vector<Target>& targets,
                        const PotentialOptions& opt) {
  require_wavenumber(k);
  for (const auto& t : targets)
    if (t.self_patch >= 0) throw InvalidArgument("direct N kernel requires targets off the source surface");
  return assemble_sel<NDirectKernel>(opt, targets, src, k);
}

CMatX assemble_N_difference(double k1, double k2, const Interface& src, const std::vector<Target>& targets,
                            const PotentialOptions& opt) {
  require_wavenumber(k1);
  require_wavenumber(k2);
  return assemble_sel<NDiffKernel>(opt, targets, src, k1, k2);
}

CMatX assemble_N_regularized(double k, const Interface& s, const PotentialOptions& opt) {
  require_wavenumber(k);
  const auto targets = surface_targets(s);
  CMatX N = assemble_V(k, s, targets, opt);
  N *= k * k;
  const CMatX Vs = assemble_scalar_V(k, s, targets, opt);
  const int nn = s.nodes_per_patch(), nnode = s.num_nodes();
  // Vs * Div, column block by column block
  CMatX VD(nnode, 2 * nnode);
  for (int p = 0; p < s.num_patches(); ++p)
    VD.middleCols(2 * p * nn, 2 * nn).noalias() = Vs.middleCols(p * nn, nn) * divergence_matrix(s, p);
  for (int p = 0; p < s.num_patches(); ++p)
    N.middleRows(2 * p * nn, 2 * nn).noalias() += curl_matrix(s, p).cast<cplx>() * VD.middleRows(p * nn, nn);
  return N;
}

double boundary_decay_ratio(const Interface& s, const CVecX& density) {
  const int n = s.np(), nn = n * n;
  const auto& pml = s.pml();
  double total = 0.0, outer = 0.0;
  for (int q = 0; q < s.num_nodes(); ++q) {
    const double m = std::abs(density[2 * q]) + std::abs(density[2 * q + 1]);
    total = std::max(total, m);
    const Vec3& x = s.node(q).x;
    // node ring nearest to the lateral boundary of the footprint
    const int r = q % nn, i = r / n, j = r % n;
    const bool edge = i == 0 || j == 0 || i == n - 1 || j == n - 1;
    const bool outside = std::abs(x[0]) > pml.a()[0] + 0.9 * pml.T()[0] ||
                         std::abs(x[1]) > pml.a()[1] + 0.9 * pml.T()[1];
    if (edge && outside) outer = std::max(outer, m);
  }
  return total > 0.0 ? outer / total : 0.0;
}

CVecX apply_N_regularized(double k, const Interface& s, const CVecX& density, const PotentialOptions& opt) {
  require_wavenumber(k);
  if (density.size() != 2 * s.num_nodes()) throw InvalidArgument("density size mismatch");
  if (boundary_decay_ratio(s, density) > 1e-3)
    warn("density does not decay at the outer boundary; regularized N assumes it vanishes there");
  const auto targets = surface_targets(s);
  CVecX out = apply_sel<VecSLKernel>(opt, targets, s, density, k) * (k * k);
  const CVecX div = surface_divergence(s, density);
  const CVecX sl = apply_sel<ScalarSLKernel>(opt, targets, s, div, k);
  out += surface_vector_curl(s, sl);
  return out;
}

void check_off_surface(const Interface& src, const std::vector<Vec3>& points, const PotentialOptions& opt) {
  const double dmin = opt.delta_min_rel * src.diameter();
  for (const Vec3& x : points)
    for (int p = 0; p < src.num_patches(); ++p) {
      const PatchInfo& info = src.patch(p);
      if ((x - info.centre).norm() > info.radius + dmin) continue;
      double u, v, d;
      closest_point(*info.patch, x, u, v, d);
      if (d < dmin) throw SingularEvaluation("near-singular evaluation point");
    }
}

CVecX potential_eval_S(double k, const Interface& src, const CVecX& density, const std::vector<Vec3>& points,
                       const PotentialOptions& opt) {
  require_wavenumber(k);
  check_off_surface(src, points, opt);
  return apply_sel<SPotKernel>(opt, point_targets(points, src.pml()), src, density, k);
}

CVecX potential_eval_D(double k, const Interface& src, const CVecX& density, const std::vector<Vec3>& points,
                       const PotentialOptions& opt) {
  require_wavenumber(k);
  check_off_surface(src, points, opt);
  return apply_sel<DPotKernel>(opt, point_targets(points, src.pml()), src, density, k);
}

CVecX tangential_potential(JumpKind kind, double k, const Interface& s, const CVecX& density,
                           const std::vector<int>& nodes, double h, const PotentialOptions& opt) {
  const bool minus = kind == JumpKind::D_minus || kind == JumpKind::S_minus;
  std::vector<Vec3> pts;
  pts.reserve(nodes.size());
  for (int q : nodes) pts.push_back(s.node(q).x + (minus ? -h : h) * s.node(q).nu);
  const bool is_d = kind == JumpKind::D_minus || kind == JumpKind::D_plus;
  const CVecX pot = is_d ? potential_eval_D(k, s, density, pts, opt) : potential_eval_S(k, s, density, pts, opt);
  CVecX out(3 * nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const CVec3 w = pot.segment<3>(3 * i);
    out.segment<3>(3 * i) = xcross(s.node(nodes[i]).nu.cast<cplx>(), w);
  }
  return out;
}

std::vector<JumpRow> jump_test(JumpKind kind, double k, const Interface& s, const CVecX& density,
                               const std::vector<double>& hs, const std::vector<int>& nodes_in,
                               const PotentialOptions& opt) {
  std::vector<int> nodes = nodes_in;
  if (nodes.empty())
    for (int q = 0; q < s.num_nodes(); ++q) nodes.push_back(q);
  const auto all = surface_targets(s);
  CVecX lim;
  if (kind == JumpKind::D_minus || kind == JumpKind::D_plus) {
    std::vector<Target> tg;
    for (int q : nodes) tg.push_back(all[q]);
    const CVecX kd = apply_sel<KKernel>(opt, tg, s, density, k);
    const double half = kind == JumpKind::D_minus ? -0.5 : 0.5;
    lim.resize(2 * nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) lim.segment<2>(2 * i) = kd.segment<2>(2 * i) + half * density.segment<2>(2 * nodes[i]);
  } else {
    const CVecX nd = apply_N_regularized(k, s, density, opt);
    lim.resize(2 * nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) lim.segment<2>(2 * i) = nd.segment<2>(2 * nodes[i]);
  }
  std::vector<JumpRow> rows;
  for (double h : hs) {
    const CVecX tp = tangential_potential(kind, k, s, density, nodes, h, opt);
    double disc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const CVec3 l = tangential_vector(s.node(nodes[i]), lim[2 * i], lim[2 * i + 1]);
      disc = std::max(disc, (tp.segment<3>(3 * i) - l).norm());
    }
    rows.push_back({h, disc});
  }
  return rows;
}

std::vector<PatchPtr> box_face_patches(const PmlProfile& pml, double height) {
  const auto& a = pml.a();
  const auto& T = pml.T();
  auto splits = [](double lo, double hi, std::vector<double> cuts) {
    std::vector<double> b{lo};
    std::sort(cuts.begin(), cuts.end());
    for (double c : cuts)
      if (c > lo + 1e-12 && c < hi - 1e-12) b.push_back(c);
    b.push_back(hi);
    return b;
  };
  const double X = a[0] + T[0], Y = a[1] + T[1], Z = a[2] + T[2];
  const auto bx = splits(-X, X, {-a[0], a[0]});
  const auto by = splits(-Y, Y, {-a[1], a[1]});
  const auto bz = splits(height, Z, {-a[2], a[2]});
  std::vector<PatchPtr> out;
  for (std::size_t i = 0; i + 1 < bx.size(); ++i)
    for (std::size_t j = 0; j + 1 < by.size(); ++j) {
      const Vec3 c(0.5 * (bx[i] + bx[i + 1]), 0.5 * (by[j] + by[j + 1]), Z);
      out.push_back(std::make_shared<AffinePatch>(c, Vec3(0.5 * (bx[i + 1] - bx[i]), 0, 0),
                                                  Vec3(0, 0.5 * (by[j + 1] - by[j]), 0), 1));
    }
  for (std::size_t j = 0; j + 1 < by.size(); ++j)
    for (std::size_t m = 0; m + 1 < bz.size(); ++m)
      for (int sgn : {-1, 1}) {
        const Vec3 c(sgn * X, 0.5 * (by[j] + by[j + 1]), 0.5 * (bz[m] + bz[m + 1]));
        out.push_back(std::make_shared<AffinePatch>(c, Vec3(0, 0.5 * (by[j + 1] - by[j]), 0),
                                                    Vec3(0, 0, 0.5 * (bz[m + 1] - bz[m])), sgn));
      }
  for (std::size_t i = 0; i + 1 < bx.size(); ++i)
    for (std::size_t m = 0; m + 1 < bz.size(); ++m)
      for (int sgn : {-1, 1}) {
        const Vec3 c(0.5 * (bx[i] + bx[i + 1]), sgn * Y, 0.5 * (bz[m] + bz[m + 1]));
        out.push_back(std::make_shared<AffinePatch>(c, Vec3(0.5 * (bx[i + 1] - bx[i]), 0, 0),
                                                    Vec3(0, 0, 0.5 * (bz[m + 1] - bz[m])), -sgn));
      }
  return out;
}

CVecX laplace_identity_check(const Interface& ground, const Interface& faces, const std::vector<Target>& targets,
                             const PotentialOptions& opt) {
  const CVecX one_g = CVecX::Ones(ground.num_nodes());
  const CVecX one_f = CVecX::Ones(faces.num_nodes());
  std::vector<Target> foreign = targets;
  for (auto& t : foreign) t.self_patch = -1;
  CVecX out = apply_sel<LaplaceDLKernel>(opt, targets, ground, one_g);
  out += apply_sel<LaplaceDLKernel>(opt, foreign, faces, one_f);
  return out;
}

std::vector<CVec3> density_vectors(const Interface& s, const CVecX& density) {
  std::vector<CVec3> out(s.num_nodes());
  for (int q = 0; q < s.num_nodes(); ++q) out[q] = tangential_vector(s.node(q), density[2 * q], density[2 * q + 1]);
  return out;
}

CVecX density_from_vectors(const Interface& s, const std::vector<CVec3>& v) {
  CVecX out(2 * s.num_nodes());
  for (int q = 0; q < s.num_nodes(); ++q) contravariant(s.node(q), v[q], out[2 * q], out[2 * q + 1]);
  return out;
}

}  // namespace pmlbie
