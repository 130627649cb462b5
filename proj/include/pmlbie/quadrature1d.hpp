// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace pmlbie {

struct Rule1D {
  std::vector<double> x;
  std::vector<double> w;
};

/// Gauss-Legendre rule on [-1,1] (cached per order, thread-safe).
const Rule1D& gauss_legendre(int n);

/// Chebyshev points of the first kind, u_i = cos((2i+1)pi/(2n)).
std::vector<double> cheb_nodes(int n);

/// Fejer's first rule on the first-kind Chebyshev points.
std::vector<double> fejer_weights(int n);

}  // namespace pmlbie
