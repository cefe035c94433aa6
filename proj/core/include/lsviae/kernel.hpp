#pragma once

#include <string>
#include <string_view>

#include "lsviae/cmdp.hpp"

namespace lsviae {

/// Covariance functions over feature vectors. Only two are supported:
/// the linear kernel phi^T phi' and the squared exponential
/// exp(-||phi - phi'||^2 / (2 l^2)).
class Kernel {
 public:
  enum class Kind { kLinear, kSquaredExponential };

  static Kernel linear() { return Kernel(Kind::kLinear, 1.0); }
  static Kernel squared_exponential(double lengthscale);
  /// "linear" or "sqexp".
  static Kernel from_name(std::string_view name, double lengthscale);

  Kind kind() const { return kind_; }
  double lengthscale() const { return lengthscale_; }
  std::string name() const;

  double operator()(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y) const;

  /// Gram matrix between the columns of `a` and the columns of `b`.
  Matrix cross(const Matrix& a, const Matrix& b) const;

 private:
  Kernel(Kind kind, double lengthscale) : kind_(kind), lengthscale_(lengthscale) {}

  Kind kind_;
  double lengthscale_;
};

}  // namespace lsviae
