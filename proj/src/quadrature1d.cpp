// SPDX-License-Identifier: Apache-2.0
#include "pmlbie/quadrature1d.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "pmlbie/types.hpp"

namespace pmlbie {

namespace {

Rule1D compute_gauss_legendre(int n) {
  Rule1D r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double p0 = 1.0, p1 = z;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    double w = 2.0 / ((1.0 - z * z) * dp * dp);
    r.x[i] = -z;
    r.x[n - 1 - i] = z;
    r.w[i] = w;
    r.w[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.x[n / 2] = 0.0;
  return r;
}

}  // namespace

const Rule1D& gauss_legendre(int n) {
  if (n < 1) throw InvalidArgument("gauss_legendre: order must be >= 1");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<Rule1D>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return *it->second;
  auto rule = std::make_unique<Rule1D>(n == 1 ? Rule1D{{0.0}, {2.0}} : compute_gauss_legendre(n));
  const Rule1D& ref = *rule;
  cache.emplace(n, std::move(rule));
  return ref;
}

std::vector<double> cheb_nodes(int n) {
  if (n < 2) throw InvalidArgument("cheb_nodes: invalid-order, N_p must be >= 2");
  std::vector<double> u(n);
  for (int i = 0; i < n; ++i) u[i] = std::cos((2.0 * i + 1.0) * kPi / (2.0 * n));
  return u;
}

std::vector<double> fejer_weights(int n) {
  if (n < 2) throw InvalidArgument("fejer_weights: invalid-order, N_p must be >= 2");
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) {
    double th = (2.0 * i + 1.0) * kPi / (2.0 * n);
    double s = 0.0;
    for (int j = 1; j <= n / 2; ++j) s += std::cos(2.0 * j * th) / (4.0 * j * j - 1.0);
    w[i] = 2.0 / n * (1.0 - 2.0 * s);
  }
  return w;
}

}  // namespace pmlbie
