#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fer/rng.hpp"

namespace fer {

// Fully connected network with ReLU between layers (none after the last).
// Parameters live in flat storage so finite-difference checks and plain
// gradient descent can treat the whole net as one vector.
class ScalarMlp {
 public:
  ScalarMlp() = default;
  explicit ScalarMlp(std::vector<int> sizes);  // zero-initialized
  static ScalarMlp random(std::vector<int> sizes, Rng& rng, double scale = 0.5);

  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;

  // Gradient of sum(grad_out . output) w.r.t. parameters (accumulated into
  // param_grad, same layout as params()) and w.r.t. the input (returned).
  Eigen::VectorXd backward(const Eigen::VectorXd& x, const Eigen::VectorXd& grad_out,
                           Eigen::VectorXd* param_grad) const;

  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  int param_count() const { return static_cast<int>(params_.size()); }
  const Eigen::VectorXd& params() const { return params_; }
  void set_params(const Eigen::VectorXd& p);

  // Absolute distance from the nearest ReLU pre-activation to zero when
  // evaluating at x; zero means the probe sits exactly on a kink.
  double kink_margin(const Eigen::VectorXd& x) const;

  const std::vector<int>& sizes() const { return sizes_; }

 private:
  std::vector<int> sizes_;
  Eigen::VectorXd params_;

  Eigen::Map<const Eigen::MatrixXd> weight(int layer) const;
  Eigen::Map<const Eigen::VectorXd> bias(int layer) const;
  int layer_offset(int layer) const;
};

struct GradCheckReport {
  double max_rel_error = 0.0;
  int checked = 0;
  int skipped_near_kink = 0;
};

// Central finite differences against analytic gradients for every parameter.
// Probes whose perturbation crosses a ReLU kink are reported and excluded.
GradCheckReport mlp_grad_check(const ScalarMlp& f, const Eigen::VectorXd& probe,
                               double eps);

}  // namespace fer
