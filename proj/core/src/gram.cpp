#include "lsviae/gram.hpp"

#include <cmath>

#include <fmt/core.h>

#include "lsviae/error.hpp"

namespace lsviae {

GramState::GramState(int dim, double lambda) : lambda_(lambda) {
  if (dim < 1) throw InvalidArgument("GramState: dimension must be positive");
  if (!(lambda > 0.0)) throw InvalidArgument(fmt::format("GramState: lambda must be positive, got {}", lambda));
  gram_ = lambda * Matrix::Identity(dim, dim);
  inverse_ = Matrix::Identity(dim, dim) / lambda;
  targets_ = Vector::Zero(dim);
}

GramState::RankOneStep GramState::update(const Eigen::Ref<const Vector>& phi, double target) {
  if (phi.size() != dim()) {
    throw InvalidArgument(fmt::format("GramState: feature has size {}, expected {}", phi.size(), dim()));
  }
  const double norm = phi.norm();
  if (!(norm <= 1.0 + 1e-9)) {
    throw InvalidArgument(fmt::format("GramState: feature norm {:.12g} exceeds 1", norm));
  }
  RankOneStep step;
  step.direction = inverse_ * phi;
  step.denom = 1.0 + phi.dot(step.direction);
  if (!(step.denom > 1e-12)) {
    throw NumericalError("GramState: Sherman-Morrison denominator collapsed; inverse is corrupt");
  }
  gram_.noalias() += phi * phi.transpose();
  inverse_.noalias() -= (step.direction / step.denom) * step.direction.transpose();
  targets_.noalias() += phi * target;
  ++num_samples_;
  return step;
}

void GramState::accumulate_target(const Eigen::Ref<const Vector>& phi, double target) {
  targets_.noalias() += phi * target;
}

void GramState::set_targets(const Eigen::Ref<const Vector>& targets) {
  if (targets.size() != dim()) throw InvalidArgument("GramState: target accumulator size mismatch");
  targets_ = targets;
}

Vector GramState::ridge_weights() const { return inverse_ * targets_; }

double GramState::quadratic_form(const Eigen::Ref<const Vector>& phi) const {
  const double q = phi.dot(inverse_ * phi);
  return q > 0.0 ? q : 0.0;
}

double GramState::inverse_residual() const {
  return (inverse_ * gram_ - Matrix::Identity(dim(), dim())).cwiseAbs().maxCoeff();
}

void GramState::refactorize() {
  Eigen::LLT<Matrix> llt(gram_);
  if (llt.info() != Eigen::Success) throw NumericalError("GramState: Gram matrix is not positive definite");
  inverse_ = llt.solve(Matrix::Identity(dim(), dim()));
}

QuadraticFormCache::QuadraticFormCache(const Matrix& columns, const Matrix& inverse) : columns_(columns) {
  refresh(inverse);
}

QuadraticFormCache::QuadraticFormCache(const Matrix& columns, double lambda)
    : columns_(columns), values_(columns.colwise().squaredNorm().transpose() / lambda) {}

void QuadraticFormCache::apply(const GramState::RankOneStep& step) {
  const Vector projections = columns_.transpose() * step.direction;
  values_.array() -= projections.array().square() / step.denom;
}

void QuadraticFormCache::refresh(const Matrix& inverse) {
  values_ = (columns_.array() * (inverse * columns_).array()).colwise().sum().transpose();
}

}  // namespace lsviae
