// SPDX-License-Identifier: Apache-2.0
#include "pmlbie/chebyshev.hpp"

#include <cmath>

#include "pmlbie/quadrature1d.hpp"

namespace pmlbie {

ChebyshevGrid::ChebyshevGrid(int n) : n_(n), u_(cheb_nodes(n)), w_(fejer_weights(n)), bary_(n) {
  for (int j = 0; j < n; ++j) bary_[j] = ((j % 2) ? -1.0 : 1.0) * std::sin((2.0 * j + 1.0) * kPi / (2.0 * n));
  D_ = MatX::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      D_(i, j) = (bary_[j] / bary_[i]) / (u_[i] - u_[j]);
      diag -= D_(i, j);
    }
    D_(i, i) = diag;
  }
}

void ChebyshevGrid::lagrange(double t, double* out) const {
  for (int j = 0; j < n_; ++j) {
    if (t == u_[j]) {
      for (int m = 0; m < n_; ++m) out[m] = (m == j) ? 1.0 : 0.0;
      return;
    }
  }
  double denom = 0.0;
  for (int j = 0; j < n_; ++j) {
    out[j] = bary_[j] / (t - u_[j]);
    denom += out[j];
  }
  for (int j = 0; j < n_; ++j) out[j] /= denom;
}

}  // namespace pmlbie
