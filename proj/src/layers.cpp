#include "fer/layers.hpp"

#include <cmath>
#include <stdexcept>

namespace fer {

VectorListFeature vn_linear(const Eigen::MatrixXd& w, const VectorListFeature& v) {
  if (w.cols() != v.rows()) throw std::invalid_argument("vn_linear: shape mismatch");
  return w * v;
}

VectorListFeature magnitude_nonlinearity(const VectorListFeature& v, const ScalarMlp& f) {
  const int c = static_cast<int>(v.rows());
  if (f.input_size() != c || f.output_size() != c)
    throw std::invalid_argument("magnitude_nonlinearity: MLP width must equal channel count");
  Eigen::VectorXd q(c);
  for (int i = 0; i < c; ++i) q(i) = v.row(i).norm();
  const Eigen::VectorXd scaled = f.forward(q);
  return scaled.asDiagonal() * v;
}

VectorListFeature mean_pool(const std::vector<VectorListFeature>& vs) {
  if (vs.empty()) throw std::invalid_argument("mean_pool: empty input");
  VectorListFeature acc = vs[0];
  for (std::size_t i = 1; i < vs.size(); ++i) {
    if (vs[i].rows() != acc.rows() || vs[i].cols() != acc.cols())
      throw std::invalid_argument("mean_pool: shape mismatch");
    acc += vs[i];
  }
  return acc / static_cast<double>(vs.size());
}

Eigen::VectorXd invariant_layer(const VectorListFeature& v, const Eigen::MatrixXd& w_dir) {
  if (w_dir.cols() != v.rows()) throw std::invalid_argument("invariant_layer: shape mismatch");
  const Eigen::MatrixXd gram = v * (w_dir * v).transpose();  // C x C_dir
  return Eigen::Map<const Eigen::VectorXd>(gram.data(), gram.size());
}

Eigen::VectorXd invariant_pairing(const Eigen::VectorXd& feat, const VectorListFeature& z) {
  if (feat.size() != z.cols()) throw std::invalid_argument("invariant_pairing: length mismatch");
  Eigen::VectorXd out(z.rows() + 1);
  out.head(z.rows()) = z * feat;
  out(z.rows()) = feat.squaredNorm();
  return out;
}

// --- toy spherical regression -------------------------------------------

const char* toy_arm_name(ToyArm arm) {
  switch (arm) {
    case ToyArm::kDim3: return "dim3";
    case ToyArm::kDim3Repeat: return "dim3x2-repeat";
    case ToyArm::kDim35LowFreq: return "3+5-lowfreq";
    case ToyArm::kDim35MaxFreq: return "3+5-maxfreq";
    case ToyArm::kDim357MaxFreq: return "3+5+7-maxfreq";
  }
  return "?";
}

bool toy_arm_from_name(const std::string& name, ToyArm* arm) {
  for (ToyArm a : {ToyArm::kDim3, ToyArm::kDim3Repeat, ToyArm::kDim35LowFreq,
                   ToyArm::kDim35MaxFreq, ToyArm::kDim357MaxFreq}) {
    if (name == toy_arm_name(a)) {
      *arm = a;
      return true;
    }
  }
  return false;
}

ToyGenerators ToyGenerators::build(std::uint64_t seed) {
  ToyGenerators g;
  g.canonical3.n = 3;
  g.canonical3.k = 1;
  g.canonical3.j1 = f1();
  g.canonical3.j2 = f2();
  g.canonical3.j3 = f3();
  g.canonical3.e_hat = Vec3(0, 0, 1);
  g.canonical3.residual = 0.0;
  g.max5 = construct_generators(5, derive_seed(seed, 5));
  g.max7 = construct_generators(7, derive_seed(seed, 7));
  g.low5 = construct_low_freq(5, derive_seed(seed, 50));
  return g;
}

double toy_target_radius(const Vec3& u_hat) {
  // Fixed probe directions; Legendre bands P1, P2, P3 along each.
  static const Vec3 d1 = Vec3(1.0, 2.0, -1.0).normalized();
  static const Vec3 d2 = Vec3(-2.0, 1.0, 3.0).normalized();
  static const Vec3 d3 = Vec3(0.5, -1.5, 1.0).normalized();
  const double t1 = u_hat.dot(d1);
  const double t2 = u_hat.dot(d2);
  const double t3 = u_hat.dot(d3);
  const double p2 = 0.5 * (3.0 * t2 * t2 - 1.0);
  const double p3 = 0.5 * (5.0 * t3 * t3 * t3 - 3.0 * t3);
  return 1.5 + 0.4 * t1 + 0.35 * p2 + 0.3 * p3;
}

namespace {

Eigen::VectorXd arm_feature(ToyArm arm, const Vec3& u, const ToyGenerators& gens) {
  switch (arm) {
    case ToyArm::kDim3:
      return psi(u, gens.canonical3);
    case ToyArm::kDim3Repeat: {
      Eigen::VectorXd out(6);
      out.head(3) = psi(u, gens.canonical3);
      out.tail(3) = out.head(3);
      return out;
    }
    case ToyArm::kDim35LowFreq: {
      Eigen::VectorXd out(8);
      out.head(3) = psi(u, gens.canonical3);
      out.tail(5) = psi(u, gens.low5);
      return out;
    }
    case ToyArm::kDim35MaxFreq: {
      Eigen::VectorXd out(8);
      out.head(3) = psi(u, gens.canonical3);
      out.tail(5) = psi(u, gens.max5);
      return out;
    }
    case ToyArm::kDim357MaxFreq: {
      Eigen::VectorXd out(15);
      out.head(3) = psi(u, gens.canonical3);
      out.segment(3, 5) = psi(u, gens.max5);
      out.tail(7) = psi(u, gens.max7);
      return out;
    }
  }
  throw std::invalid_argument("unknown toy arm");
}

Vec3 uniform_direction(Rng& rng) {
  Vec3 v;
  double n = 0.0;
  do {
    v = Vec3(rng.normal(), rng.normal(), rng.normal());
    n = v.norm();
  } while (n < 1e-9);
  return v / n;
}

}  // namespace

ToyRegressionResult toy_regression_train(const ToyRegressionConfig& cfg,
                                         const ToyGenerators& gens) {
  if (cfg.steps <= 0 || cfg.train_points <= 0)
    throw std::invalid_argument("toy_regression_train: steps and train_points must be > 0");

  Rng rng(cfg.seed);
  const int n = cfg.train_points;
  Eigen::VectorXd y(n);
  std::vector<Vec3> dirs(n);
  for (int i = 0; i < n; ++i) {
    dirs[i] = uniform_direction(rng);
    y(i) = toy_target_radius(dirs[i]);
  }

  const int d = static_cast<int>(arm_feature(cfg.arm, dirs[0], gens).size());
  Eigen::MatrixXd x(n, d + 1);  // bias-augmented
  for (int i = 0; i < n; ++i) {
    x.row(i).head(d) = arm_feature(cfg.arm, dirs[i], gens).transpose();
    x(i, d) = 1.0;
  }

  Eigen::VectorXd w = Eigen::VectorXd::Zero(d + 1);
  ToyRegressionResult result;
  double mse = y.squaredNorm() / n;
  for (int step = 0; step < cfg.steps; ++step) {
    const Eigen::VectorXd err = x * w - y;
    mse = err.squaredNorm() / n;
    if (!std::isfinite(mse)) {
      std::string trace = "toy_regression_train: divergence at step " +
                          std::to_string(step) + "; loss trace:";
      for (double v : result.loss_trace) trace += " " + std::to_string(v);
      throw std::runtime_error(trace);
    }
    if (step % 100 == 0) result.loss_trace.push_back(mse);
    w -= cfg.learning_rate * (2.0 / n) * (x.transpose() * err);
  }
  mse = (x * w - y).squaredNorm() / n;
  result.loss_trace.push_back(mse);
  result.final_mse = mse;
  return result;
}

}  // namespace fer
