// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "pmlbie/types.hpp"

namespace pmlbie {

/// Tensor Chebyshev (first kind) grid data for one patch order.
///
/// Nodal values on a patch are stored with the u-index major: f(i, j) at
/// flat index i * n + j, node (u_i, v_j).
class ChebyshevGrid {
 public:
  explicit ChebyshevGrid(int n);

  int n() const { return n_; }
  const std::vector<double>& nodes() const { return u_; }
  const std::vector<double>& weights() const { return w_; }
  /// Spectral differentiation matrix, D(i, j) = L_j'(u_i).
  const MatX& diff() const { return D_; }

  /// Lagrange basis values L_j(t) for all j (barycentric form).
  void lagrange(double t, double* out) const;

  /// Interpolate a nodal grid at (u, v).
  template <class T>
  T interpolate(const T* values, double u, double v) const {
    std::vector<double> lu(n_), lv(n_);
    lagrange(u, lu.data());
    lagrange(v, lv.data());
    T acc = T(0);
    for (int i = 0; i < n_; ++i) {
      T row = T(0);
      for (int j = 0; j < n_; ++j) row += lv[j] * values[i * n_ + j];
      acc += lu[i] * row;
    }
    return acc;
  }

 private:
  int n_;
  std::vector<double> u_, w_, bary_;
  MatX D_;
};

}  // namespace pmlbie
