#include "fer/cem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "fer/rng.hpp"

namespace fer {

CemResult cem_minimize(const CemObjective& objective, const CemConfig& cfg,
                       const CemMonitor& monitor) {
  if (cfg.dim <= 0) throw std::invalid_argument("cem: dim must be positive");
  if (cfg.population <= 0 || cfg.elite_count <= 0 || cfg.elite_count > cfg.population)
    throw std::invalid_argument("cem: need 0 < elite_count <= population");
  if (cfg.std_floor <= 0.0) throw std::invalid_argument("cem: std_floor must be positive");

  Eigen::VectorXd mean =
      cfg.init_mean.size() ? cfg.init_mean : Eigen::VectorXd::Zero(cfg.dim);
  Eigen::VectorXd stddev =
      cfg.init_std.size() ? cfg.init_std : Eigen::VectorXd::Ones(cfg.dim);
  if (mean.size() != cfg.dim || stddev.size() != cfg.dim)
    throw std::invalid_argument("cem: init_mean/init_std size mismatch");

  Rng rng(cfg.seed);

  CemResult best;
  best.solution = mean;
  best.loss = objective(mean);
  best.iters = 0;
  if (best.loss <= cfg.tol) {
    best.converged = true;
    return best;
  }

  Eigen::MatrixXd samples(cfg.dim, cfg.population);
  std::vector<double> losses(cfg.population);
  std::vector<int> order(cfg.population);

  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    for (int j = 0; j < cfg.population; ++j)
      for (int i = 0; i < cfg.dim; ++i)
        samples(i, j) = mean(i) + stddev(i) * rng.normal();

    for (int j = 0; j < cfg.population; ++j) {
      losses[j] = objective(samples.col(j));
      if (losses[j] < best.loss) {
        best.loss = losses[j];
        best.solution = samples.col(j);
      }
    }

    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return losses[a] < losses[b]; });

    mean.setZero();
    for (int e = 0; e < cfg.elite_count; ++e) mean += samples.col(order[e]);
    mean /= cfg.elite_count;

    Eigen::VectorXd var = Eigen::VectorXd::Zero(cfg.dim);
    for (int e = 0; e < cfg.elite_count; ++e)
      var += (samples.col(order[e]) - mean).cwiseAbs2();
    var /= cfg.elite_count;
    stddev = var.cwiseSqrt().cwiseMax(cfg.std_floor);

    best.iters = iter;
    if (monitor) {
      Eigen::MatrixXd elite(cfg.dim, cfg.elite_count);
      for (int e = 0; e < cfg.elite_count; ++e) elite.col(e) = samples.col(order[e]);
      monitor({iter, mean, stddev, elite, best.loss});
    }
    if (best.loss <= cfg.tol) {
      best.converged = true;
      return best;
    }
  }
  return best;
}

}  // namespace fer
