#pragma once

#include "lsviae/cmdp.hpp"

namespace lsviae {

/// Regularised Gram matrix lambda I + sum phi phi^T with its inverse kept
/// current through Sherman-Morrison updates, plus the target accumulator
/// sum phi * target.
class GramState {
 public:
  /// Result of one rank-1 update: u = A^{-1} phi for the pre-update inverse A
  /// and denom = 1 + phi^T u. Caches of quadratic forms consume this.
  struct RankOneStep {
    Vector direction;
    double denom = 1.0;
  };

  GramState() = default;
  /// Lambda = lambda I, inverse = I / lambda, targets = 0.
  GramState(int dim, double lambda);

  int dim() const { return static_cast<int>(gram_.rows()); }
  double lambda() const { return lambda_; }
  long num_samples() const { return num_samples_; }

  const Matrix& gram() const { return gram_; }
  const Matrix& inverse() const { return inverse_; }
  const Vector& targets() const { return targets_; }

  /// Ingests one sample. Requires ||phi|| <= 1 + 1e-9.
  RankOneStep update(const Eigen::Ref<const Vector>& phi, double target);

  /// Adds phi * target to the accumulator without touching the Gram matrix.
  void accumulate_target(const Eigen::Ref<const Vector>& phi, double target);
  void clear_targets() { targets_.setZero(); }
  void set_targets(const Eigen::Ref<const Vector>& targets);

  /// inverse * targets.
  Vector ridge_weights() const;

  /// phi^T inverse phi, clamped at zero.
  double quadratic_form(const Eigen::Ref<const Vector>& phi) const;

  /// max |inverse * gram - I|.
  double inverse_residual() const;

  /// Recomputes the inverse from the Gram matrix by Cholesky.
  void refactorize();

 private:
  double lambda_ = 1.0;
  long num_samples_ = 0;
  Matrix gram_;
  Matrix inverse_;
  Vector targets_;
};

/// Keeps phi_i^T A^{-1} phi_i current for a fixed set of feature columns while
/// A receives rank-1 updates; O(N d) per update instead of O(N d^2).
class QuadraticFormCache {
 public:
  QuadraticFormCache() = default;
  QuadraticFormCache(const Matrix& columns, const Matrix& inverse);
  /// Cache for a fresh state whose inverse is I / lambda.
  QuadraticFormCache(const Matrix& columns, double lambda);

  void apply(const GramState::RankOneStep& step);
  void refresh(const Matrix& inverse);

  /// Clamped at zero.
  double value(Eigen::Index i) const { return values_[i] > 0.0 ? values_[i] : 0.0; }
  const Vector& values() const { return values_; }
  const Matrix& columns() const { return columns_; }

 private:
  Matrix columns_;
  Vector values_;
};

}  // namespace lsviae
