// SPDX-License-Identifier: Apache-2.0
#pragma once

// Generic Nystrom assembly and matrix-free application of a kernel functor
// over a source interface. Far patches use the native tensor Fejer rule; near
// and self patches use the polar rule with the density represented in the
// Lagrange basis of the patch.

#include <vector>

#include "pmlbie/quadrature.hpp"

namespace pmlbie {

/// M(row0 + t*R + r, col0 + n*C + c) += integral weight of node n for target t.
template <class Ker>
void assemble_into(CMatX& M, Eigen::Index row0, Eigen::Index col0, const std::vector<Target>& targets,
                   const Interface& src, const Ker& ker, const QuadOptions& opt) {
  constexpr int R = Ker::R, C = Ker::C;
  using Block = typename Ker::Block;
  const int n = src.np(), nn = n * n, npatch = src.num_patches();
  const int nt = static_cast<int>(targets.size());
  const ChebyshevGrid& grid = src.grid();
#pragma omp parallel
  {
    std::vector<double> lu(n), lv(n);
    MatX Lu, KLv, W;
#pragma omp for schedule(dynamic, 4)
    for (int ti = 0; ti < nt; ++ti) {
      const Target& t = targets[ti];
      const Eigen::Index row = row0 + static_cast<Eigen::Index>(ti) * R;
      for (int p = 0; p < npatch; ++p) {
        const int base = p * nn;
        const PatchRule pr = patch_rule(src, p, t, opt);
        if (!pr.near) {
          for (int q = 0; q < nn; ++q) {
            const NodeData& y = src.node(base + q);
            const Block K = ker(t, y) * y.wq;
            const Eigen::Index col = col0 + static_cast<Eigen::Index>(base + q) * C;
            for (int c = 0; c < C; ++c)
              for (int r = 0; r < R; ++r) M(row + r, col + c) += K(r, c);
          }
          continue;
        }
        // W = Lu^T [K o Lv]: real GEMM over the quadrature points
        const int nq = static_cast<int>(pr.pts.size());
        Lu.resize(nq, n);
        KLv.resize(nq, 2 * R * C * n);
        for (int q = 0; q < nq; ++q) {
          const QPt& qp = pr.pts[q];
          const NodeData y = src.eval(p, qp.u, qp.v);
          const Block K = ker(t, y) * (qp.w * y.sqrtG);
          grid.lagrange(qp.u, lu.data());
          grid.lagrange(qp.v, lv.data());
          for (int i = 0; i < n; ++i) Lu(q, i) = lu[i];
          for (int j = 0; j < n; ++j)
            for (int c = 0; c < C; ++c)
              for (int r = 0; r < R; ++r) {
                const int idx = 2 * ((j * C + c) * R + r);
                KLv(q, idx) = lv[j] * K(r, c).real();
                KLv(q, idx + 1) = lv[j] * K(r, c).imag();
              }
        }
        W.noalias() = Lu.transpose() * KLv;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            const Eigen::Index col = col0 + static_cast<Eigen::Index>(base + i * n + j) * C;
            for (int c = 0; c < C; ++c)
              for (int r = 0; r < R; ++r) {
                const int idx = 2 * ((j * C + c) * R + r);
                M(row + r, col + c) += cplx(W(i, idx), W(i, idx + 1));
              }
          }
      }
    }
  }
}

/// Dense matrix of one kernel (targets x source nodes).
template <class Ker>
CMatX assemble(const std::vector<Target>& targets, const Interface& src, const Ker& ker,
               const QuadOptions& opt) {
  CMatX M = CMatX::Zero(static_cast<Eigen::Index>(targets.size()) * Ker::R,
                        static_cast<Eigen::Index>(src.num_nodes()) * Ker::C);
  assemble_into(M, 0, 0, targets, src, ker, opt);
  return M;
}

/// out[row0 + t*R + r] += sum over the source of kernel * density, with the
/// density (C components per node, interleaved) interpolated at near points.
template <class Ker>
void apply_into(CVecX& out, Eigen::Index row0, const std::vector<Target>& targets, const Interface& src,
                const Ker& ker, const CVecX& density, const QuadOptions& opt) {
  constexpr int R = Ker::R, C = Ker::C;
  using Col = Eigen::Matrix<cplx, C, 1>;
  using Res = Eigen::Matrix<cplx, R, 1>;
  const int n = src.np(), nn = n * n, npatch = src.num_patches();
  const int nt = static_cast<int>(targets.size());
  const ChebyshevGrid& grid = src.grid();
#pragma omp parallel
  {
    std::vector<double> lu(n), lv(n);
    MatX Lu, Lv, Dc, LD;
#pragma omp for schedule(dynamic, 4)
    for (int ti = 0; ti < nt; ++ti) {
      const Target& t = targets[ti];
      Res sum = Res::Zero();
      for (int p = 0; p < npatch; ++p) {
        const int base = p * nn;
        const PatchRule pr = patch_rule(src, p, t, opt);
        if (!pr.near) {
          for (int q = 0; q < nn; ++q) {
            const NodeData& y = src.node(base + q);
            const Col d = density.template segment<C>(static_cast<Eigen::Index>(base + q) * C);
            sum += (ker(t, y) * y.wq) * d;
          }
          continue;
        }
        // density at the points: rows of (Lu Dc) contracted with Lv
        const int nq = static_cast<int>(pr.pts.size());
        Lu.resize(nq, n);
        Lv.resize(nq, n);
        for (int q = 0; q < nq; ++q) {
          grid.lagrange(pr.pts[q].u, lu.data());
          grid.lagrange(pr.pts[q].v, lv.data());
          for (int i = 0; i < n; ++i) Lu(q, i) = lu[i], Lv(q, i) = lv[i];
        }
        Dc.resize(n, 2 * n * C);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int c = 0; c < C; ++c) {
              const cplx v = density[static_cast<Eigen::Index>(base + i * n + j) * C + c];
              Dc(i, 2 * (c * n + j)) = v.real();
              Dc(i, 2 * (c * n + j) + 1) = v.imag();
            }
        LD.noalias() = Lu * Dc;
        for (int q = 0; q < nq; ++q) {
          const QPt& qp = pr.pts[q];
          Col d;
          for (int c = 0; c < C; ++c) {
            double re = 0.0, im = 0.0;
            for (int j = 0; j < n; ++j) {
              re += Lv(q, j) * LD(q, 2 * (c * n + j));
              im += Lv(q, j) * LD(q, 2 * (c * n + j) + 1);
            }
            d[c] = cplx(re, im);
          }
          const NodeData y = src.eval(p, qp.u, qp.v);
          sum += ker(t, y) * d * (qp.w * y.sqrtG);
        }
      }
      out.template segment<R>(row0 + static_cast<Eigen::Index>(ti) * R) += sum;
    }
  }
}

template <class Ker>
CVecX apply(const std::vector<Target>& targets, const Interface& src, const Ker& ker, const CVecX& density,
            const QuadOptions& opt) {
  CVecX out = CVecX::Zero(static_cast<Eigen::Index>(targets.size()) * Ker::R);
  apply_into(out, 0, targets, src, ker, density, opt);
  return out;
}

}  // namespace pmlbie
