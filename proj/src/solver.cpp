// SPDX-License-Identifier: Apache-2.0
#include "pmlbie/solver.hpp"

#include <algorithm>
#include <cmath>

namespace pmlbie {

GmresResult gmres(const LinearOperator& A, const CVecX& b, const GmresOptions& opt) {
  const Eigen::Index n = b.size();
  GmresResult res;
  res.x = CVecX::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) return res;
  const int m = std::max(1, opt.restart);
  CMatX V(n, m + 1);
  CMatX H = CMatX::Zero(m + 1, m);
  std::vector<double> cs(m);
  std::vector<cplx> sn(m);
  CVecX g(m + 1), w(n), Ax(n);
  CVecX r = b;
  double beta = r.norm();
  int total = 0;
  while (true) {
    V.col(0) = r / beta;
    g.setZero();
    g[0] = beta;
    H.setZero();
    int k = 0;
    double rel = beta / bnorm;
    for (; k < m && total < opt.max_iter && rel > opt.tol; ++k) {
      A(V.col(k), w);
      for (int i = 0; i <= k; ++i) {
        H(i, k) = V.col(i).dot(w);
        w -= H(i, k) * V.col(i);
      }
      const double hn = w.norm();
      H(k + 1, k) = hn;
      if (hn > 0.0) V.col(k + 1) = w / hn;
      for (int i = 0; i < k; ++i) {
        const cplx t = cs[i] * H(i, k) + sn[i] * H(i + 1, k);
        H(i + 1, k) = -std::conj(sn[i]) * H(i, k) + cs[i] * H(i + 1, k);
        H(i, k) = t;
      }
      const cplx h1 = H(k, k), h2 = H(k + 1, k);
      const double d = std::sqrt(std::norm(h1) + std::norm(h2));
      if (std::abs(h1) == 0.0) {
        cs[k] = 0.0;
        sn[k] = 1.0;
      } else {
        cs[k] = std::abs(h1) / d;
        sn[k] = (h1 / std::abs(h1)) * std::conj(h2) / d;
      }
      H(k, k) = cs[k] * h1 + sn[k] * h2;
      H(k + 1, k) = 0.0;
      g[k + 1] = -std::conj(sn[k]) * g[k];
      g[k] = cs[k] * g[k];
      ++total;
      rel = std::abs(g[k + 1]) / bnorm;
      if (hn == 0.0) {
        ++k;
        break;
      }
    }
    if (k > 0) {
      const CVecX y = H.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
      res.x += V.leftCols(k) * y;
    }
    A(res.x, Ax);
    r = b - Ax;
    beta = r.norm();
    res.iterations = total;
    res.residual = beta / bnorm;
    if (res.residual <= opt.tol) return res;
    if (total >= opt.max_iter || k == 0)
      throw IterativeFailure("gmres: no convergence after " + std::to_string(total) + " iterations", total,
                             res.residual);
  }
}

GmresResult gmres(const CMatX& A, const CVecX& b, const GmresOptions& opt) {
  if (A.rows() != A.cols() || A.rows() != b.size()) throw InvalidArgument("gmres: dimension mismatch");
  return gmres([&A](const CVecX& in, CVecX& out) { out.noalias() = A * in; }, b, opt);
}

namespace {

// interleave (M, J) 2-component densities into a 4-component vector
CVecX interleave(const CVecX& a, const CVecX& b) {
  const Eigen::Index nn = a.size() / 2;
  CVecX out(4 * nn);
  for (Eigen::Index q = 0; q < nn; ++q) {
    out.segment<2>(4 * q) = a.segment<2>(2 * q);
    out.segment<2>(4 * q + 2) = b.segment<2>(2 * q);
  }
  return out;
}

void split(const CVecX& x, Eigen::Index off, int nodes, CVecX& a, CVecX& b) {
  a.resize(2 * nodes);
  b.resize(2 * nodes);
  for (int q = 0; q < nodes; ++q) {
    a.segment<2>(2 * q) = x.segment<2>(off + 4 * q);
    b.segment<2>(2 * q) = x.segment<2>(off + 4 * q + 2);
  }
}

CVecX apply_half(double k, const Interface& s, const CVecX& phi, const QuadOptions& q) {
  return apply(surface_targets(s), s, KKernel<false>{k}, phi, q) + 0.5 * phi;
}

}  // namespace

CVecX layered_rhs(const LayeredProblem& pb, const std::vector<BoundaryData>& data, const SystemOptions& opt) {
  const MediumSpec& m = pb.stack.medium;
  const int ni = static_cast<int>(pb.interfaces.size());
  const cplx iw = kI / m.omega;
  const QuadOptions& q = opt.potentials.quad;
  Eigen::Index total = 0;
  for (const Interface* s : pb.interfaces) total += 4 * s->num_nodes();
  CVecX rhs = CVecX::Zero(total);
  Eigen::Index off = 0;
  for (int i = 0; i < ni; ++i) {
    const Interface& s = *pb.interfaces[i];
    const int nn = s.num_nodes();
    const CVecX& f = data[i].f;
    const CVecX& g = data[i].g;
    CVecX e, h;
    if (opt.rhs == RhsVariant::Swapped) {
      e = m.eps[i] * f;
      h = m.mu[i] * g;
    } else if (f.lpNorm<Eigen::Infinity>() == 0.0 && g.lpNorm<Eigen::Infinity>() == 0.0) {
      e = CVecX::Zero(2 * nn);
      h = CVecX::Zero(2 * nn);
    } else {
      const double k = m.k(i);
      e = m.eps[i] * apply_half(k, s, f, q) + iw * apply_N_regularized(k, s, g, opt.potentials);
      h = m.mu[i] * apply_half(k, s, g, q) - iw * apply_N_regularized(k, s, f, opt.potentials);
    }
    CVecX blk = interleave(e, h);
    if (opt.rhs == RhsVariant::Derived && i + 1 < ni) {
      const BoundaryData& lo = data[i + 1];
      if (lo.f.lpNorm<Eigen::Infinity>() > 0.0 || lo.g.lpNorm<Eigen::Infinity>() > 0.0) {
        const CouplingKernel<false> ker{m.k(i + 1), m.eps[i + 1], iw, -iw, m.mu[i + 1]};
        blk += apply(foreign_surface_targets(s), *pb.interfaces[i + 1], ker, interleave(lo.f, lo.g), q);
      }
    }
    rhs.segment(off, 4 * nn) = blk;
    off += 4 * nn;
  }
  return rhs;
}

BlockSystem assemble_layered(const LayeredProblem& pb, const SystemOptions& opt) {
  pb.stack.validate();
  const MediumSpec& m = pb.stack.medium;
  const int ni = static_cast<int>(pb.interfaces.size());
  if (ni != m.layers() - 1) throw ValidationError("interfaces: one truncated interface per layer boundary required");
  const cplx iw = kI / m.omega;
  const QuadOptions& q = opt.potentials.quad;
  BlockSystem sys;
  Eigen::Index total = 0;
  for (const Interface* s : pb.interfaces) {
    sys.offsets.push_back(total);
    total += 4 * s->num_nodes();
  }
  sys.A = CMatX::Zero(total, total);
  for (int i = 0; i < ni; ++i) {
    const Interface& s = *pb.interfaces[i];
    const Eigen::Index off = sys.offsets[i];
    const auto tg = surface_targets(s);
    TwoLayerCoeffs c{m.k(i), m.k(i + 1), m.eps[i], m.eps[i + 1], iw, -iw, m.mu[i], m.mu[i + 1],
                     !opt.regularized_difference};
    assemble_into(sys.A, off, off, tg, s, TwoLayerKernel<false>{c}, q);
    const double e_avg = 0.5 * (m.eps[i] + m.eps[i + 1]), m_avg = 0.5 * (m.mu[i] + m.mu[i + 1]);
    for (int n = 0; n < s.num_nodes(); ++n) {
      sys.A(off + 4 * n, off + 4 * n) += e_avg;
      sys.A(off + 4 * n + 1, off + 4 * n + 1) += e_avg;
      sys.A(off + 4 * n + 2, off + 4 * n + 2) += m_avg;
      sys.A(off + 4 * n + 3, off + 4 * n + 3) += m_avg;
    }
    if (opt.regularized_difference) {
      CMatX Nd = assemble_N_regularized(m.k(i), s, opt.potentials);
      Nd -= assemble_N_regularized(m.k(i + 1), s, opt.potentials);
      const int nn = s.num_nodes();
      for (int b = 0; b < nn; ++b)
        for (int d = 0; d < 2; ++d)
          for (int a = 0; a < nn; ++a)
            for (int c2 = 0; c2 < 2; ++c2) {
              const cplx v = Nd(2 * a + c2, 2 * b + d);
              sys.A(off + 4 * a + c2, off + 4 * b + 2 + d) += iw * v;
              sys.A(off + 4 * a + 2 + c2, off + 4 * b + d) -= iw * v;
            }
    }
    const auto ftg = foreign_surface_targets(s);
    if (i + 1 < ni) {
      const CouplingKernel<false> R{m.k(i + 1), m.eps[i + 1], iw, -iw, m.mu[i + 1]};
      assemble_into(sys.A, off, sys.offsets[i + 1], ftg, *pb.interfaces[i + 1], R, q);
    }
    if (i > 0) {
      const CouplingKernel<false> L{m.k(i), -m.eps[i], -iw, iw, -m.mu[i]};
      assemble_into(sys.A, off, sys.offsets[i - 1], ftg, *pb.interfaces[i - 1], L, q);
    }
  }
  for (int i = 0; i < ni; ++i) sys.data.push_back(boundary_data(pb.stack, pb.incidence, i, *pb.interfaces[i]));
  sys.rhs = layered_rhs(pb, sys.data, opt);
  return sys;
}

BlockSystem assemble_two_layer(const LayeredProblem& pb, const SystemOptions& opt) {
  if (pb.stack.layers() != 2) throw ValidationError("media.layers: two-layer system needs exactly two layers");
  return assemble_layered(pb, opt);
}

BlockSystem assemble_multilayer(const LayeredProblem& pb, const SystemOptions& opt) {
  if (pb.stack.layers() < 3) throw ValidationError("media.layers: multilayer system needs at least three layers");
  return assemble_layered(pb, opt);
}

HalfSpaceSystem assemble_half_space_operator(const HalfSpaceProblem& pb, const SystemOptions& opt) {
  pb.medium.validate(true);
  if (!pb.boundary || !pb.source) throw ValidationError("obstacle: boundary and source are required");
  const Interface& s = *pb.boundary;
  HalfSpaceSystem sys;
  sys.A = assemble_K(pb.medium.k(0), s, surface_targets(s), opt.potentials);
  sys.A.diagonal().array() += 0.5;
  std::vector<CVec3> E(s.num_nodes()), H(s.num_nodes());
  for (int q = 0; q < s.num_nodes(); ++q) {
    const FieldPair f = pb.source(s.node(q).xt);
    E[q] = f.E;
    H[q] = f.H;
  }
  sys.trace_E = tangential_trace(s, E);
  sys.trace_H = tangential_trace(s, H);
  return sys;
}

CVecX half_space_rhs(const HalfSpaceProblem& pb, const HalfSpaceSystem& sys, BoundaryKind kind,
                     const SystemOptions& opt) {
  const MediumSpec& m = pb.medium;
  const double k = m.k(0);
  const bool swapped = opt.rhs == RhsVariant::Swapped;
  if (kind == BoundaryKind::PEC) {
    const CVecX& tr = swapped ? sys.trace_H : sys.trace_E;
    return (-kI / (m.omega * m.mu[0])) * apply_N_regularized(k, *pb.boundary, tr, opt.potentials);
  }
  const CVecX& tr = swapped ? sys.trace_E : sys.trace_H;
  return (kI / (m.omega * m.eps[0])) * apply_N_regularized(k, *pb.boundary, tr, opt.potentials);
}

HalfSpaceDensities half_space_densities(const HalfSpaceSystem& sys, BoundaryKind kind, const CVecX& solution) {
  HalfSpaceDensities d;
  if (kind == BoundaryKind::PEC) {
    d.M = -sys.trace_E;
    d.J = solution;
  } else {
    d.J = -sys.trace_H;
    d.M = solution;
  }
  return d;
}

int locate_layer(const LayeredProblem& pb, const Vec3& x) {
  const int ni = static_cast<int>(pb.interfaces.size());
  for (int i = 0; i < ni; ++i) {
    double h = pb.stack.heights[i];
    if (i < static_cast<int>(pb.geometry.size())) {
      const GraphInterfaceSpec& g = pb.geometry[i];
      h = g.height;
      if (g.eta) {
        double x0, x1, y0, y1;
        g.eta->support(x0, x1, y0, y1);
        if (x[0] > x0 && x[0] < x1 && x[1] > y0 && x[1] < y1) h += g.eta->eval(x[0], x[1]).f;
      }
    }
    if (x[2] >= h) return i;
  }
  return ni;
}

namespace {

// Accumulate c_D D(phi) + c_S S(phi) at the given points (3 values per point).
void add_potentials(CVecX& out, double k, const Interface& s, const CVecX& phi, const std::vector<Vec3>& pts,
                    cplx cD, cplx cS, const PotentialOptions& opt) {
  if (phi.lpNorm<Eigen::Infinity>() == 0.0) return;
  if (cD != 0.0) out += cD * potential_eval_D(k, s, phi, pts, opt);
  if (cS != 0.0) out += cS * potential_eval_S(k, s, phi, pts, opt);
}

}  // namespace

std::vector<FieldSample> reconstruct_layered(const LayeredProblem& pb, const BlockSystem& sys, const CVecX& x,
                                             const std::vector<Vec3>& points, const SystemOptions& opt,
                                             bool total) {
  const MediumSpec& m = pb.stack.medium;
  const int ni = static_cast<int>(pb.interfaces.size());
  const bool derived = opt.rhs == RhsVariant::Derived;
  std::vector<CVecX> M(ni), J(ni);
  for (int i = 0; i < ni; ++i) split(x, sys.offsets[i], pb.interfaces[i]->num_nodes(), M[i], J[i]);
  std::vector<FieldSample> out(points.size());
  const PmlProfile& pml = pb.interfaces.front()->pml();
  for (int l = 0; l <= ni; ++l) {
    std::vector<Vec3> pts;
    std::vector<std::size_t> idx;
    for (std::size_t q = 0; q < points.size(); ++q)
      if (locate_layer(pb, points[q]) == l) pts.push_back(points[q]), idx.push_back(q);
    if (pts.empty()) continue;
    const double k = m.k(l);
    const cplx ce = kI / (m.omega * m.eps[l]), cm = kI / (m.omega * m.mu[l]);
    CVecX E = CVecX::Zero(3 * pts.size()), H = CVecX::Zero(3 * pts.size());
    if (l >= 1) {
      const Interface& s = *pb.interfaces[l - 1];
      add_potentials(E, k, s, M[l - 1], pts, 1.0, 0.0, opt.potentials);
      add_potentials(E, k, s, J[l - 1], pts, 0.0, ce, opt.potentials);
      add_potentials(H, k, s, J[l - 1], pts, 1.0, 0.0, opt.potentials);
      add_potentials(H, k, s, M[l - 1], pts, 0.0, -cm, opt.potentials);
    }
    if (l < ni) {
      const Interface& s = *pb.interfaces[l];
      const CVecX Ms = derived ? CVecX(M[l] - sys.data[l].f) : M[l];
      const CVecX Js = derived ? CVecX(J[l] - sys.data[l].g) : J[l];
      add_potentials(E, k, s, Ms, pts, -1.0, 0.0, opt.potentials);
      add_potentials(E, k, s, Js, pts, 0.0, -ce, opt.potentials);
      add_potentials(H, k, s, Js, pts, -1.0, 0.0, opt.potentials);
      add_potentials(H, k, s, Ms, pts, 0.0, cm, opt.potentials);
    }
    std::vector<FieldPair> src;
    if (total) {
      std::vector<CVec3> xt;
      for (const auto& p : pts) xt.push_back(stretch_point(pml, p));
      src = source_fields(pb.stack, pb.incidence, l, xt);
    }
    for (std::size_t q = 0; q < pts.size(); ++q) {
      FieldSample& fs = out[idx[q]];
      fs.E = E.segment<3>(3 * q);
      fs.H = H.segment<3>(3 * q);
      if (total) {
        const CVec3 a = jacobians(pml, pts[q]).alpha;
        fs.E += a.cwiseProduct(src[q].E);
        fs.H += a.cwiseProduct(src[q].H);
      }
      fs.region = pml.is_physical(pts[q]) ? Region::PHY : Region::PML;
      fs.layer = l;
    }
  }
  return out;
}

std::vector<FieldSample> reconstruct_half_space(const HalfSpaceProblem& pb, const HalfSpaceDensities& d,
                                                const std::vector<Vec3>& points, const SystemOptions& opt) {
  const MediumSpec& m = pb.medium;
  const Interface& s = *pb.boundary;
  const double k = m.k(0);
  const cplx ce = kI / (m.omega * m.eps[0]), cm = kI / (m.omega * m.mu[0]);
  CVecX E = CVecX::Zero(3 * points.size()), H = CVecX::Zero(3 * points.size());
  add_potentials(E, k, s, d.M, points, -1.0, 0.0, opt.potentials);
  add_potentials(E, k, s, d.J, points, 0.0, -ce, opt.potentials);
  add_potentials(H, k, s, d.M, points, 0.0, cm, opt.potentials);
  add_potentials(H, k, s, d.J, points, -1.0, 0.0, opt.potentials);
  std::vector<FieldSample> out(points.size());
  for (std::size_t q = 0; q < points.size(); ++q) {
    out[q].E = E.segment<3>(3 * q);
    out[q].H = H.segment<3>(3 * q);
    out[q].region = s.pml().is_physical(points[q]) ? Region::PHY : Region::PML;
    out[q].layer = 0;
  }
  return out;
}

double relative_max_error(const std::vector<CVec3>& num, const std::vector<CVec3>& ref) {
  if (num.size() != ref.size()) throw InvalidArgument("relative_max_error: sample counts differ");
  double e = 0.0, r = 0.0;
  for (std::size_t q = 0; q < num.size(); ++q) {
    e = std::max(e, (num[q] - ref[q]).norm());
    r = std::max(r, ref[q].norm());
  }
  if (r == 0.0) throw InvalidArgument("relative_max_error: zero reference field");
  return e / r;
}

double density_region_max(const Interface& s, const CVecX& density, Region r, bool outer, int stride, int offset,
                          int ncomp) {
  const PmlProfile& pml = s.pml();
  double out = 0.0;
  for (int q = 0; q < s.num_nodes(); ++q) {
    const NodeData& nd = s.node(q);
    if (nd.region != r) continue;
    if (outer) {
      double depth = 0.0;
      for (int l = 0; l < 2; ++l) depth = std::max(depth, (std::abs(nd.x[l]) - pml.a()[l]) / pml.T()[l]);
      if (depth < 2.0 / 3.0) continue;
    }
    const Eigen::Index base = static_cast<Eigen::Index>(q) * stride + offset;
    for (int c = 0; c + 1 < ncomp; c += 2)
      out = std::max(out, tangential_vector(nd, density[base + c], density[base + c + 1]).norm());
  }
  return out;
}

void density_report(const LayeredProblem& pb, const BlockSystem& sys, const CVecX& x, SolveReport& rep) {
  rep.phy_max.clear();
  rep.pml_max.clear();
  rep.outer_max.clear();
  for (std::size_t i = 0; i < pb.interfaces.size(); ++i) {
    const Interface& s = *pb.interfaces[i];
    const CVecX blk = x.segment(sys.offsets[i], 4 * s.num_nodes());
    rep.phy_max.push_back(density_region_max(s, blk, Region::PHY, false, 4, 0, 4));
    rep.pml_max.push_back(density_region_max(s, blk, Region::PML, false, 4, 0, 4));
    rep.outer_max.push_back(density_region_max(s, blk, Region::PML, true, 4, 0, 4));
  }
}

}  // namespace pmlbie
