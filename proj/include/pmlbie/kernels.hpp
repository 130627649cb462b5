// SPDX-License-Identifier: Apache-2.0
#pragma once

// Kernel functors. Each maps the contravariant source components at a
// source point y to R output values at a target; `Classical` selects the
// unstretched kernel (real distance, B = I).

#include "pmlbie/quadrature.hpp"

namespace pmlbie {

inline cplx bdot(const CVec3& a, const CVec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

template <bool Classical>
struct PairGeom {
  CVec3 R;
  cplx rho;
  CVec3 bx;       // diagonal of B(x)
  CVec3 s1, s2;   // B(y) x_u, B(y) x_v
  PairGeom(const Target& t, const NodeData& y) {
    if constexpr (Classical) {
      const Vec3 r = t.x - y.x;
      R = r.cast<cplx>();
      rho = r.norm();
      bx = CVec3(1.0, 1.0, 1.0);
      s1 = y.xu.cast<cplx>();
      s2 = y.xv.cast<cplx>();
    } else {
      R = t.xt - y.xt;
      rho = branch_sqrt(bdot(R, R));
      bx = t.alpha;
      s1 = y.alpha.cwiseProduct(y.xu.cast<cplx>());
      s2 = y.alpha.cwiseProduct(y.xv.cast<cplx>());
    }
  }
};

inline void project2(const Target& t, const CVec3& w, cplx& c1, cplx& c2) {
  c1 = t.du[0] * w[0] + t.du[1] * w[1] + t.du[2] * w[2];
  c2 = t.dv[0] * w[0] + t.dv[1] * w[1] + t.dv[2] * w[2];
}

inline CVec3 ncross(const Target& t, const CVec3& w) { return xcross(t.nu.cast<cplx>(), w); }

/// nu_x x B(x)[grad Phi x B(y) phi]  (operator K)
template <bool Classical = false>
struct KKernel {
  static constexpr int R = 2, C = 2;
  using Block = Eigen::Matrix<cplx, R, C>;
  double k;
  Block operator()(const Target& t, const NodeData& y) const {
    const PairGeom<Classical> g(t, y);
    const GreenRadial gr = green_radial(k, g.rho, false);
    const CVec3 grad = g.R * gr.F1;
    Block b;
    project2(t, ncross(t, g.bx.cwiseProduct(xcross(grad, g.s1))), b(0, 0), b(1, 0));
    project2(t, ncross(t, g.bx.cwiseProduct(xcross(grad, g.s2))), b(0, 1), b(1, 1));
    return b;
  }
};

/// nu_x x B(x) Phi B(y) phi  (vector single layer)
template <bool Classical = false>
struct VecSLKernel {
  static constexpr int R = 2, C = 2;
  using Block = Eigen::Matrix<cplx, R, C>;
  double k;
  Block operator()(const Target& t, const NodeData& y) const {
    const PairGeom<Classical> g(t, y);
    const cplx phi = green_radial(k, g.rho, false).phi;
    Block b;
    project2(t, ncross(t, g.bx.cwiseProduct(g.s1)) * phi, b(0, 0), b(1, 0));
    project2(t, ncross(t, g.bx.cwiseProduct(g.s2)) * phi, b(0, 1), b(1, 1));
    return b;
  }
};

/// Phi  (scalar single layer)
template <bool Classical = false>
struct ScalarSLKernel {
  static constexpr int R = 1, C = 1;
  using Block = Eigen::Matrix<cplx, R, C>;
  double k;
  Block operator()(const Target& t, const NodeData& y) const {
    const PairGeom<Classical> g(t, y);
    Block b;
    b(0, 0) = green_radial(k, g.rho, false).phi;
    return b;
  }
};

/// nu_x x B(x)[(k^2 Phi I + Hess Phi) B(y) phi]  (N, valid off the source surface)
template <bool Classical = false>
struct NDirectKernel {
  static constexpr int R = 2, C = 2;
  using Block = Eigen::Matrix<cplx, R, C>;
  double k;
  Block operator()(const Target& t, const NodeData& y) const {
    const PairGeom<Classical> g(t, y);
    const GreenRadial gr = green_radial(k, g.rho, true);
    const cplx diag = k * k * gr.phi + gr.F1;
    Block b;
    const CVec3 w1 = diag * g.s1 + g.R * (gr.F2 * bdot(g.R, g.s1));
    const CVec3 w2 = diag * g.s2 + g.R * (gr.F2 * bdot(g.R, g.s2));
    project2(t, ncross(t, g.bx.cwiseProduct(w1)), b(0, 0), b(1, 0));
    project2(t, ncross(t, g.bx.cwiseProduct(w2)), b(0, 1), b(1, 1));
    return b;
  }
};

/// Kernel of N(k1) - N(k2); weakly singular on the surface.
template <bool Classical = false>
struct NDiffKernel {
  static constexpr int R = 2, C = 2;
  using Block = Eigen::Matrix<cplx, R, C>;
  double k1, k2;
  Block operator()(const Target& t, const NodeData& y) const {
    const PairGeom<Classical> g(t, y);
    const GreenRadialDiff d = green_radial_diff(k1, k2, g.rho);
    const cplx diag = d.k2phi + d.dF1;
    Block b;
    const CVec3 w1 = diag * g.s1 + g.R * (d.dF2 * bdot(g.R, g.s1));
    const CVec3 w2 = diag * g.s2 + g.R * (d.dF2 * bdot(g.R, g.s2));
    project2(t, ncross(t, g.bx.cwiseProduct(w1)), b(0, 0), b(1, 0));
    project2(t, ncross(t, g.bx.cwiseProduct(w2)), b(0, 1), b(1, 1));
    return b;
  }
};

/// B(x)[grad Phi x B(y) phi]  (potential D, 3 Cartesian outputs)
template <bool Classical = false>
struct DPotKernel {
  static constexpr int R = 3, C = 2;
  using Block = Eigen::Matrix<cplx, R, C>;
  double k;
  Block operator()(const Target& t, const NodeData& y) const {
    const PairGeom<Classical> g(t, y);
    const GreenRadial gr = green_radial(k, g.rho, false);
    const CVec3 grad = g.R * gr.F1;
    Block b;
    b.col(0) = g.bx.cwiseProduct(xcross(grad, g.s1));
    b.col(1) = g.bx.cwiseProduct(xcross(grad, g.s2));
    return b;
  }
};

/// B(x)[(k^2 Phi I + Hess Phi) B(y) phi]  (potential S)
template <bool Classical = false>
struct SPotKernel {
  static constexpr int R = 3, C = 2;
  using Block = Eigen::Matrix<cplx, R, C>;
  double k;
  Block operator()(const Target& t, const NodeData& y) const {
    const PairGeom<Classical> g(t, y);
    const GreenRadial gr = green_radial(k, g.rho, true);
    const cplx diag = k * k * gr.phi + gr.F1;
    Block b;
    b.col(0) = g.bx.cwiseProduct(diag * g.s1 + g.R * (gr.F2 * bdot(g.R, g.s1)));
    b.col(1) = g.bx.cwiseProduct(diag * g.s2 + g.R * (gr.F2 * bdot(g.R, g.s2)));
    return b;
  }
};

/// nu~_y . (x~ - y~)/(4 pi rho^3) with nu~ = J B^{-1} nu  (stretched Laplace double layer of 1)
template <bool Classical = false>
struct LaplaceDLKernel {
  static constexpr int R = 1, C = 1;
  using Block = Eigen::Matrix<cplx, R, C>;
  Block operator()(const Target& t, const NodeData& y) const {
    const PairGeom<Classical> g(t, y);
    CVec3 nt;
    if constexpr (Classical) {
      nt = y.nu.cast<cplx>();
    } else {
      const CVec3& a = y.alpha;
      nt = CVec3(a[1] * a[2] * y.nu[0], a[0] * a[2] * y.nu[1], a[0] * a[1] * y.nu[2]);
    }
    Block b;
    b(0, 0) = bdot(nt, g.R) / (4.0 * kPi * g.rho * g.rho * g.rho);
    return b;
  }
};

/// Coefficients of the two-layer self block
///   [cEM1 K(k1) - cEM2 K(k2),  cEJ (N(k1)-N(k2));  cHM (N(k1)-N(k2)),  cHJ1 K(k1) - cHJ2 K(k2)].
struct TwoLayerCoeffs {
  double k1, k2;
  cplx cEM1, cEM2, cEJ, cHM, cHJ1, cHJ2;
  bool with_ndiff = true;
};

/// 4x4 block kernel, unknown order per node (M1, M2, J1, J2).
template <bool Classical = false>
struct TwoLayerKernel {
  static constexpr int R = 4, C = 4;
  using Block = Eigen::Matrix<cplx, R, C>;
  TwoLayerCoeffs c;
  Block operator()(const Target& t, const NodeData& y) const {
    const PairGeom<Classical> g(t, y);
    const GreenRadial g1 = green_radial(c.k1, g.rho, false);
    const GreenRadial g2 = green_radial(c.k2, g.rho, false);
    Block b = Block::Zero();
    const CVec3 s[2] = {g.s1, g.s2};
    for (int col = 0; col < 2; ++col) {
      const CVec3 rx = xcross(g.R, s[col]);
      const CVec3 w1 = ncross(t, g.bx.cwiseProduct(rx * g1.F1));
      const CVec3 w2 = ncross(t, g.bx.cwiseProduct(rx * g2.F1));
      cplx a1, a2, b1, b2;
      project2(t, w1, a1, a2);
      project2(t, w2, b1, b2);
      b(0, col) = c.cEM1 * a1 - c.cEM2 * b1;
      b(1, col) = c.cEM1 * a2 - c.cEM2 * b2;
      b(2, col + 2) = c.cHJ1 * a1 - c.cHJ2 * b1;
      b(3, col + 2) = c.cHJ1 * a2 - c.cHJ2 * b2;
    }
    if (c.with_ndiff) {
      const GreenRadialDiff d = green_radial_diff(c.k1, c.k2, g.rho);
      const cplx diag = d.k2phi + d.dF1;
      for (int col = 0; col < 2; ++col) {
        const CVec3 w = diag * s[col] + g.R * (d.dF2 * bdot(g.R, s[col]));
        cplx n1, n2;
        project2(t, ncross(t, g.bx.cwiseProduct(w)), n1, n2);
        b(0, col + 2) = c.cEJ * n1;
        b(1, col + 2) = c.cEJ * n2;
        b(2, col) = c.cHM * n1;
        b(3, col) = c.cHM * n2;
      }
    }
    return b;
  }
};

/// Cross-interface 4x4 block [aK * K, aN_EJ * N; aN_HM * N, aK_H * K] with a single wavenumber.
template <bool Classical = false>
struct CouplingKernel {
  static constexpr int R = 4, C = 4;
  using Block = Eigen::Matrix<cplx, R, C>;
  double k;
  cplx cEM, cEJ, cHM, cHJ;
  Block operator()(const Target& t, const NodeData& y) const {
    const PairGeom<Classical> g(t, y);
    const GreenRadial gr = green_radial(k, g.rho, true);
    const cplx diag = k * k * gr.phi + gr.F1;
    Block b;
    const CVec3 s[2] = {g.s1, g.s2};
    for (int col = 0; col < 2; ++col) {
      cplx a1, a2, n1, n2;
      project2(t, ncross(t, g.bx.cwiseProduct(xcross(g.R, s[col]) * gr.F1)), a1, a2);
      const CVec3 w = diag * s[col] + g.R * (gr.F2 * bdot(g.R, s[col]));
      project2(t, ncross(t, g.bx.cwiseProduct(w)), n1, n2);
      b(0, col) = cEM * a1;
      b(1, col) = cEM * a2;
      b(2, col + 2) = cHJ * a1;
      b(3, col + 2) = cHJ * a2;
      b(0, col + 2) = cEJ * n1;
      b(1, col + 2) = cEJ * n2;
      b(2, col) = cHM * n1;
      b(3, col) = cHM * n2;
    }
    return b;
  }
};

}  // namespace pmlbie
