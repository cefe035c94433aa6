#include <cmath>

#include <fmt/core.h>

#include "lsviae/cost_model.hpp"
#include "lsviae/error.hpp"

namespace lsviae {

double tilde_beta(double lambda, int d, long k, double p) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument(fmt::format("tilde_beta: p must lie in (0,1), got {}", p));
  if (!(lambda > 0.0)) throw InvalidArgument("tilde_beta: lambda must be positive");
  if (d < 1 || k < 0) throw InvalidArgument("tilde_beta: need d >= 1 and k >= 0");
  const double ratio = (1.0 + static_cast<double>(k) / lambda) / p;
  return std::sqrt(lambda * d) + std::sqrt(d * std::log(ratio));
}

LinearCostModel::LinearCostModel(const Matrix& points, int horizon, double lambda, double p)
    : points_(points), lambda_(lambda), p_(p) {
  if (horizon < 1) throw InvalidArgument("LinearCostModel: horizon must be positive");
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("LinearCostModel: p must lie in (0,1)");
  const int d = static_cast<int>(points.rows());
  radius_ = [d, lambda, p, horizon](int, long episode) { return tilde_beta(lambda, d, episode, p / horizon); };
  steps_.reserve(horizon);
  for (int h = 0; h < horizon; ++h) {
    GramState gram(d, lambda);
    QuadraticFormCache bonus(points_, lambda);
    steps_.push_back({std::move(gram), std::move(bonus), Vector::Zero(d)});
  }
}

void LinearCostModel::set_width_scale(double scale) {
  if (!(scale >= 0.0) || !std::isfinite(scale)) throw InvalidArgument("cost width scale must be finite and >= 0");
  width_scale_ = scale;
}

double LinearCostModel::radius(int h, long episode) const { return width_scale_ * radius_(h, episode); }

void LinearCostModel::update(int h, const Eigen::Ref<const Vector>& phi, double cost) {
  if (!(std::abs(cost) <= 1.0)) {
    throw InvalidArgument(fmt::format("LinearCostModel: observed cost {} outside [-1,1]", cost));
  }
  Step& step = steps_.at(h);
  const auto rank_one = step.gram.update(phi, cost);
  step.bonus.apply(rank_one);
  step.theta = step.gram.ridge_weights();
}

void LinearCostModel::observe(int h, int point, double cost) { update(h, points_.col(point), cost); }

CostEstimate LinearCostModel::estimate(int h, const Eigen::Ref<const Vector>& phi, long episode) const {
  const Step& step = steps_.at(h);
  CostEstimate e;
  e.mean = phi.dot(step.theta);
  e.width = radius(h, episode) * std::sqrt(step.gram.quadratic_form(phi));
  e.lcb = e.mean - e.width;
  return e;
}

Vector LinearCostModel::lcb_table(int h, long episode) const {
  const Step& step = steps_.at(h);
  const double r = radius(h, episode);
  return points_.transpose() * step.theta - r * step.bonus.values().cwiseMax(0.0).cwiseSqrt();
}

std::vector<CostEstimate> LinearCostModel::estimate_table(int h, long episode) const {
  const Step& step = steps_.at(h);
  const double r = radius(h, episode);
  const Vector means = points_.transpose() * step.theta;
  std::vector<CostEstimate> out(means.size());
  for (Eigen::Index i = 0; i < means.size(); ++i) {
    out[i].mean = means[i];
    out[i].width = r * std::sqrt(step.bonus.value(i));
    out[i].lcb = out[i].mean - out[i].width;
  }
  return out;
}

}  // namespace lsviae
