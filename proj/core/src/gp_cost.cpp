#include <cmath>

#include <fmt/core.h>

#include "lsviae/cost_model.hpp"
#include "lsviae/error.hpp"

namespace lsviae {

double gp_beta(double gamma, double p) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument(fmt::format("gp_beta: p must lie in (0,1), got {}", p));
  if (!(gamma >= 0.0)) throw InvalidArgument("gp_beta: information gain must be nonnegative");
  return 1.0 + std::sqrt(2.0 * (gamma + 1.0 + std::log(2.0 / p)));
}

GpCostModel::GpCostModel(const Matrix& points, int horizon, Kernel kernel, long episodes, double p)
    : points_(points), kernel_(kernel), p_(p) {
  if (horizon < 1) throw InvalidArgument("GpCostModel: horizon must be positive");
  if (episodes < 1) throw InvalidArgument("GpCostModel: the episode budget K must be declared (K >= 1)");
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("GpCostModel: p must lie in (0,1)");
  lambda_ = 1.0 + 2.0 / static_cast<double>(episodes);
  prior_variance_.resize(points_.cols());
  for (Eigen::Index i = 0; i < points_.cols(); ++i) prior_variance_[i] = kernel_(points_.col(i), points_.col(i));
  steps_.resize(horizon);
  for (Step& step : steps_) {
    step.cached_mean = Vector::Zero(points_.cols());
    step.cached_variance = prior_variance_;
    reserve(step, 16);
  }
}

void GpCostModel::set_width_scale(double scale) {
  if (!(scale >= 0.0) || !std::isfinite(scale)) throw InvalidArgument("cost width scale must be finite and >= 0");
  width_scale_ = scale;
}

void GpCostModel::reserve(Step& step, int capacity) const {
  const auto n = static_cast<Eigen::Index>(capacity);
  if (step.chol.rows() >= n) return;
  step.chol.conservativeResize(n, n);
  step.observed.conservativeResize(points_.rows(), n);
  step.costs.conservativeResize(n);
  step.whitened.conservativeResize(n);
  step.projections.conservativeResize(n, points_.cols());
}

void GpCostModel::add(int h, const Eigen::Ref<const Vector>& y, double cost) {
  if (!(std::abs(cost) <= 1.0)) {
    throw InvalidArgument(fmt::format("GpCostModel: observed cost {} outside [-1,1]", cost));
  }
  if (y.size() != points_.rows()) throw InvalidArgument("GpCostModel: point dimension mismatch");
  Step& step = steps_.at(h);
  const double kyy = kernel_(y, y);
  if (!std::isfinite(kyy)) throw InvalidArgument("GpCostModel: kernel is not finite at the point");

  const Eigen::Index n = step.count;
  if (n + 1 > step.chol.rows()) reserve(step, static_cast<int>(2 * step.chol.rows()));

  Vector cross(n);
  for (Eigen::Index i = 0; i < n; ++i) cross[i] = kernel_(step.observed.col(i), y);
  const Vector row = step.chol.topLeftCorner(n, n).triangularView<Eigen::Lower>().solve(cross);

  double schur = kyy + lambda_ - row.squaredNorm();
  if (!(schur > 0.0)) {
    bool recovered = false;
    for (double jitter = 1e-10; jitter <= 1e-6 * 1.0001; jitter *= 10.0) {
      if (schur + jitter > 0.0) {
        schur += jitter;
        recovered = true;
        break;
      }
    }
    if (!recovered) {
      throw NumericalError(fmt::format("GpCostModel: Cholesky breakdown at step {} (pivot {:.3g})", h, schur));
    }
  }
  const double pivot = std::sqrt(schur);

  step.chol.row(n).head(n) = row.transpose();
  step.chol(n, n) = pivot;
  step.observed.col(n) = y;
  step.costs[n] = cost;
  step.whitened[n] = (cost - row.dot(step.whitened.head(n))) / pivot;
  step.info_gain += std::log(pivot) - 0.5 * std::log(lambda_);

  const Vector k_points = kernel_.cross(y, points_).transpose();
  Vector projection = k_points;
  if (n > 0) projection.noalias() -= step.projections.topRows(n).transpose() * row;
  projection /= pivot;
  step.projections.row(n) = projection.transpose();
  step.cached_mean.noalias() += step.whitened[n] * projection;
  step.cached_variance.array() -= projection.array().square();
  step.count = static_cast<int>(n + 1);
}

void GpCostModel::observe(int h, int point, double cost) { add(h, points_.col(point), cost); }

GpCostModel::Posterior GpCostModel::posterior(int h, const Eigen::Ref<const Vector>& y) const {
  const Step& step = steps_.at(h);
  const Eigen::Index n = step.count;
  Posterior out;
  const double kyy = kernel_(y, y);
  if (n == 0) {
    out.raw_variance = kyy;
  } else {
    Vector cross(n);
    for (Eigen::Index i = 0; i < n; ++i) cross[i] = kernel_(step.observed.col(i), y);
    const Vector v = step.chol.topLeftCorner(n, n).triangularView<Eigen::Lower>().solve(cross);
    out.mean = v.dot(step.whitened.head(n));
    out.raw_variance = kyy - v.squaredNorm();
  }
  out.sigma = std::sqrt(std::max(out.raw_variance, 0.0));
  return out;
}

GpCostModel::Posterior GpCostModel::cached_posterior(int h, int point) const {
  const Step& step = steps_.at(h);
  Posterior out;
  out.mean = step.cached_mean[point];
  out.raw_variance = step.cached_variance[point];
  out.sigma = std::sqrt(std::max(out.raw_variance, 0.0));
  return out;
}

CostEstimate GpCostModel::estimate(int h, const Eigen::Ref<const Vector>& y, long) const {
  const Posterior post = posterior(h, y);
  CostEstimate e;
  e.mean = post.mean;
  e.width = width_scale_ * gp_beta(info_gain(h), p_ / horizon()) * post.sigma;
  e.lcb = e.mean - e.width;
  return e;
}

Vector GpCostModel::lcb_table(int h, long) const {
  const Step& step = steps_.at(h);
  const double radius = width_scale_ * gp_beta(step.info_gain, p_ / horizon());
  return step.cached_mean - radius * step.cached_variance.cwiseMax(0.0).cwiseSqrt();
}

std::vector<CostEstimate> GpCostModel::estimate_table(int h, long) const {
  const Step& step = steps_.at(h);
  const double radius = width_scale_ * gp_beta(step.info_gain, p_ / horizon());
  std::vector<CostEstimate> out(points_.cols());
  for (Eigen::Index i = 0; i < points_.cols(); ++i) {
    out[i].mean = step.cached_mean[i];
    out[i].width = radius * std::sqrt(std::max(step.cached_variance[i], 0.0));
    out[i].lcb = out[i].mean - out[i].width;
  }
  return out;
}

Matrix GpCostModel::cholesky(int h) const {
  const Step& step = steps_.at(h);
  return step.chol.topLeftCorner(step.count, step.count).triangularView<Eigen::Lower>();
}

Matrix GpCostModel::observed_points(int h) const {
  const Step& step = steps_.at(h);
  return step.observed.leftCols(step.count);
}

}  // namespace lsviae
