#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fer/features.hpp"
#include "fer/mlp.hpp"

namespace fer {

// C x d matrix of channel vectors; rotations act on the right: V -> V D^T.
using VectorListFeature = Eigen::MatrixXd;

// V' = W V. Equivariant because the action is on the other side.
VectorListFeature vn_linear(const Eigen::MatrixXd& w, const VectorListFeature& v);

// Scales each row by f applied to the vector of row norms (f: R^C -> R^C).
// Row norms are rotation-invariant, so the layer is equivariant.
VectorListFeature magnitude_nonlinearity(const VectorListFeature& v, const ScalarMlp& f);

VectorListFeature mean_pool(const std::vector<VectorListFeature>& vs);

// Gram block <V_i, (W_dir V)_j>, flattened row-major; invariant because
// both factors co-rotate.
Eigen::VectorXd invariant_layer(const VectorListFeature& v, const Eigen::MatrixXd& w_dir);

// Per-channel inner products <feat, Z_c> plus ||feat||^2 appended.
Eigen::VectorXd invariant_pairing(const Eigen::VectorXd& feat, const VectorListFeature& z);

// --- toy spherical regression -------------------------------------------

enum class ToyArm { kDim3, kDim3Repeat, kDim35LowFreq, kDim35MaxFreq, kDim357MaxFreq };

const char* toy_arm_name(ToyArm arm);
bool toy_arm_from_name(const std::string& name, ToyArm* arm);

// Generator bank shared by the arms; built once per run.
struct ToyGenerators {
  GeneratorTriple canonical3;  // F basis: psi_3 is the identity embedding
  GeneratorTriple max5, max7;
  GeneratorTriple low5;
  static ToyGenerators build(std::uint64_t seed);
};

struct ToyRegressionConfig {
  ToyArm arm = ToyArm::kDim3;
  int train_points = 400;
  int steps = 8000;
  double learning_rate = 0.05;
  std::uint64_t seed = 0;
};

struct ToyRegressionResult {
  double final_mse = 0.0;
  std::vector<double> loss_trace;  // one entry per 100 steps plus the last
};

// Band-limited radial target with angular frequency content up to 3; the
// arms differ exactly in which of those bands their features can express.
double toy_target_radius(const Vec3& u_hat);

// Fits radius from per-arm features with a bias-augmented linear head
// trained by full-batch gradient descent. Directions are sampled uniformly
// on the sphere from the config seed. Throws on divergence (NaN loss).
ToyRegressionResult toy_regression_train(const ToyRegressionConfig& cfg,
                                         const ToyGenerators& gens);

}  // namespace fer
