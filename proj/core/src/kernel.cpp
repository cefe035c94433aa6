#include "lsviae/kernel.hpp"

#include <cmath>

#include <fmt/core.h>

#include "lsviae/error.hpp"

namespace lsviae {

Kernel Kernel::squared_exponential(double lengthscale) {
  if (!(lengthscale > 0.0) || !std::isfinite(lengthscale)) {
    throw InvalidArgument(fmt::format("squared exponential lengthscale must be positive, got {}", lengthscale));
  }
  return Kernel(Kind::kSquaredExponential, lengthscale);
}

Kernel Kernel::from_name(std::string_view name, double lengthscale) {
  if (name == "linear") return linear();
  if (name == "sqexp") return squared_exponential(lengthscale);
  throw InvalidArgument(fmt::format("unknown kernel '{}' (expected linear or sqexp)", name));
}

std::string Kernel::name() const { return kind_ == Kind::kLinear ? "linear" : "sqexp"; }

double Kernel::operator()(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y) const {
  if (kind_ == Kind::kLinear) return x.dot(y);
  return std::exp(-(x - y).squaredNorm() / (2.0 * lengthscale_ * lengthscale_));
}

Matrix Kernel::cross(const Matrix& a, const Matrix& b) const {
  const Matrix inner = a.transpose() * b;
  if (kind_ == Kind::kLinear) return inner;
  const Vector a_sq = a.colwise().squaredNorm().transpose();
  const Vector b_sq = b.colwise().squaredNorm().transpose();
  Matrix out(a.cols(), b.cols());
  const double scale = -1.0 / (2.0 * lengthscale_ * lengthscale_);
  for (Eigen::Index j = 0; j < b.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.cols(); ++i) {
      const double dist = std::max(0.0, a_sq[i] + b_sq[j] - 2.0 * inner(i, j));
      out(i, j) = std::exp(scale * dist);
    }
  }
  return out;
}

}  // namespace lsviae
