#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>

namespace fer {

struct CemConfig {
  int dim = 0;
  int population = 200;
  int elite_count = 20;
  int max_iters = 500;
  Eigen::VectorXd init_mean;  // empty -> zeros(dim)
  Eigen::VectorXd init_std;   // empty -> ones(dim)
  double std_floor = 1e-6;
  double tol = 0.0;  // stop once the best loss is <= tol
  std::uint64_t seed = 0;
};

struct CemResult {
  Eigen::VectorXd solution;
  double loss = 0.0;
  int iters = 0;
  bool converged = false;
};

struct CemIterationStats {
  int iter = 0;
  Eigen::VectorXd mean;
  Eigen::VectorXd stddev;     // post-floor
  Eigen::MatrixXd elite;      // dim x elite_count, the refit inputs
  double best_loss = 0.0;
};

using CemObjective = std::function<double(const Eigen::VectorXd&)>;
using CemMonitor = std::function<void(const CemIterationStats&)>;

// Diagonal-covariance cross-entropy minimization. Each iteration samples
// `population` points from N(mean, diag(std^2)), refits mean/std to the
// `elite_count` lowest losses, and floors std. The best sample ever seen is
// returned (the initial mean counts as a sample). Deterministic per seed.
CemResult cem_minimize(const CemObjective& objective, const CemConfig& cfg,
                       const CemMonitor& monitor = nullptr);

}  // namespace fer
