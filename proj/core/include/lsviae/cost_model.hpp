#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "lsviae/cmdp.hpp"
#include "lsviae/gram.hpp"
#include "lsviae/kernel.hpp"

namespace lsviae {

/// Optimistic (lower-confidence) estimate of a cost g_h(x, a).
struct CostEstimate {
  double lcb = 0.0;
  double mean = 0.0;
  /// One-sided bonus: lcb = mean - width.
  double width = 0.0;

  /// The two-sided estimation error bound e_h^k = 2 * width.
  double width_two_sided() const { return 2.0 * width; }
};

/// sqrt(lambda d) + sqrt(d log((1 + k / lambda) / p)).
double tilde_beta(double lambda, int d, long k, double p);

/// 1 + sqrt(2 (gamma + 1 + ln(2 / p))).
double gp_beta(double gamma, double p);

/// Per-step cost estimator interface shared by the linear and GP models.
///
/// Every model is built over an enumerated set of query points (the columns of
/// a feature table) and answers bulk LCB queries for them cheaply. Confidence
/// levels use p / H per step.
class CostModel {
 public:
  virtual ~CostModel() = default;

  virtual int horizon() const = 0;

  /// Records an observed cost for the enumerated point `point` at step h.
  virtual void observe(int h, int point, double cost) = 0;

  /// LCB for an arbitrary feature vector at step h during episode `episode`.
  virtual CostEstimate estimate(int h, const Eigen::Ref<const Vector>& phi, long episode) const = 0;

  /// LCBs for every enumerated point at step h.
  virtual Vector lcb_table(int h, long episode) const = 0;

  /// Estimates for every enumerated point at step h.
  virtual std::vector<CostEstimate> estimate_table(int h, long episode) const = 0;
};

/// Ridge-regression cost estimator with an elliptical confidence bonus.
class LinearCostModel final : public CostModel {
 public:
  /// Confidence radius as a function of (step, episode).
  using Radius = std::function<double(int, long)>;

  LinearCostModel(const Matrix& points, int horizon, double lambda, double p);

  int horizon() const override { return static_cast<int>(steps_.size()); }
  int dim() const { return static_cast<int>(points_.rows()); }
  double lambda() const { return lambda_; }
  double p() const { return p_; }

  /// Multiplies the confidence radius (default 1).
  void set_width_scale(double scale);
  double width_scale() const { return width_scale_; }
  /// Replaces tilde_beta(lambda, d, k, p / H) as the confidence radius.
  void set_radius(Radius radius) { radius_ = std::move(radius); }

  /// Ingests a cost observation for an arbitrary feature vector.
  void update(int h, const Eigen::Ref<const Vector>& phi, double cost);
  void observe(int h, int point, double cost) override;

  CostEstimate estimate(int h, const Eigen::Ref<const Vector>& phi, long episode) const override;
  Vector lcb_table(int h, long episode) const override;
  std::vector<CostEstimate> estimate_table(int h, long episode) const override;

  const Vector& theta(int h) const { return steps_.at(h).theta; }
  const GramState& gram(int h) const { return steps_.at(h).gram; }
  double radius(int h, long episode) const;

 private:
  struct Step {
    GramState gram;
    QuadraticFormCache bonus;
    Vector theta;
  };

  Matrix points_;
  double lambda_;
  double p_;
  double width_scale_ = 1.0;
  Radius radius_;
  std::vector<Step> steps_;
};

/// Gaussian-process cost estimator (GP-LCB) with regulariser 1 + 2 / K.
class GpCostModel final : public CostModel {
 public:
  struct Posterior {
    double mean = 0.0;
    double sigma = 0.0;
    /// Variance before clamping at zero.
    double raw_variance = 0.0;
  };

  GpCostModel(const Matrix& points, int horizon, Kernel kernel, long episodes, double p);

  int horizon() const override { return static_cast<int>(steps_.size()); }
  double lambda() const { return lambda_; }
  const Kernel& kernel() const { return kernel_; }
  double p() const { return p_; }

  void set_width_scale(double scale);
  double width_scale() const { return width_scale_; }

  /// Appends an observation at an arbitrary point y.
  void add(int h, const Eigen::Ref<const Vector>& y, double cost);
  void observe(int h, int point, double cost) override;

  Posterior posterior(int h, const Eigen::Ref<const Vector>& y) const;
  CostEstimate estimate(int h, const Eigen::Ref<const Vector>& y, long episode) const override;
  Vector lcb_table(int h, long episode) const override;
  std::vector<CostEstimate> estimate_table(int h, long episode) const override;

  /// 1/2 ln det(I + KER / lambda) over the observations at step h, maintained
  /// incrementally.
  double info_gain(int h) const { return steps_.at(h).info_gain; }
  int num_observations(int h) const { return steps_.at(h).count; }
  /// Lower Cholesky factor of KER + lambda I (count x count).
  Matrix cholesky(int h) const;
  /// Observed points as columns.
  Matrix observed_points(int h) const;
  /// Cached posterior for enumerated point i.
  Posterior cached_posterior(int h, int point) const;

 private:
  struct Step {
    int count = 0;
    Matrix chol;        // capacity x capacity, lower triangle valid in [0, count)
    Matrix observed;    // d x capacity
    Vector costs;       // capacity
    Vector whitened;    // L^{-1} costs
    double info_gain = 0.0;
    // Enumerated-point cache: rows [0, count) of L^{-1} k(Y, P).
    Matrix projections;
    Vector cached_mean;
    Vector cached_variance;
  };

  void reserve(Step& step, int capacity) const;

  Matrix points_;
  Kernel kernel_;
  double lambda_;
  double p_;
  double width_scale_ = 1.0;
  Vector prior_variance_;
  std::vector<Step> steps_;
};

}  // namespace lsviae
