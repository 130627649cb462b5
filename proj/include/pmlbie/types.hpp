// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace pmlbie {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using Mat3 = Eigen::Matrix3d;
using CMat3 = Eigen::Matrix3cd;
using VecX = Eigen::VectorXd;
using CVecX = Eigen::VectorXcd;
using MatX = Eigen::MatrixXd;
using CMatX = Eigen::MatrixXcd;

constexpr double kPi = 3.14159265358979323846;
constexpr cplx kI{0.0, 1.0};

/// Base class for all library errors; `code()` names the failure category.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

struct SingularEvaluation : Error {
  explicit SingularEvaluation(const std::string& w) : Error("singular-evaluation", w) {}
};
struct InvalidArgument : Error {
  explicit InvalidArgument(const std::string& w) : Error("invalid-argument", w) {}
};
struct DegenerateIncidence : Error {
  explicit DegenerateIncidence(const std::string& w) : Error("degenerate-incidence", w) {}
};
struct ValidationError : Error {
  explicit ValidationError(const std::string& w) : Error("validation", w) {}
};
struct IterativeFailure : Error {
  IterativeFailure(const std::string& w, int it = 0, double res = 0.0)
      : Error("iterative-failure", w), iterations(it), residual(res) {}
  int iterations;
  double residual;
};

inline CVec3 to_complex(const Vec3& v) { return v.cast<cplx>(); }

/// Bilinear cross product (Eigen's cross conjugates complex results).
inline CVec3 xcross(const CVec3& a, const CVec3& b) {
  return CVec3(a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]);
}

}  // namespace pmlbie
