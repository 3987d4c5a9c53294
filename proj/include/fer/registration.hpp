#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fer/cem.hpp"
#include "fer/features.hpp"
#include "fer/layers.hpp"

namespace fer {

using PointCloud = Eigen::Matrix<double, Eigen::Dynamic, 3>;

// Rotation minimizing ||P R^T - Q||_F with row correspondence (q_i ~ R p_i),
// reflection-corrected. Throws when the cross-covariance rank is < 2.
Mat3 procrustes(const PointCloud& p, const PointCloud& q);

// Symmetric mean squared nearest-neighbor distance.
double chamfer(const PointCloud& p, const PointCloud& q);

struct LatentCode {
  VectorListFeature z;                 // C x d
  std::vector<FeatureSegment> layout;  // segments of d
};

// Stand-in equivariant encoder: per-point Psi features lifted to C channels
// by one vn_linear, passed through the magnitude nonlinearity, mean-pooled.
// Permutation-invariant over points; encode(P R^T) = encode(P) D_cfg(R)^T.
struct EncoderParams {
  Eigen::MatrixXd w_lin;  // C x 1
  ScalarMlp magnitude_mlp;
  static EncoderParams standard(int channels, std::uint64_t seed);
};

LatentCode encode(const PointCloud& p, const FeatureConfig& cfg,
                  const EncoderParams& params);

struct RegistrationResult {
  Vec3 omega = Vec3::Zero();
  Mat3 rotation = Mat3::Identity();
  double residual = 0.0;
  bool converged = false;
  int iters = 0;
};

// CEM over omega in the ||omega|| <= pi ball minimizing
// sum_i ||Z1_i exp(omega . J_i)^T - Z2_i||_F^2 per segment. The objective
// has spurious basins, so up to `restarts` independent CEM runs are made
// (fresh derived seeds) and the best kept; a run that reaches cem tol stops
// the loop early.
RegistrationResult latent_register(const LatentCode& z1, const LatentCode& z2,
                                   const FeatureConfig& cfg,
                                   CemConfig cem_cfg = CemConfig{}, int restarts = 6);

// --- synthetic harness -----------------------------------------------------

// Deterministic asymmetric L-bracket plus a seeded anisotropic Gaussian
// blob; no rotational symmetry, so rotation recovery is well-posed.
PointCloud make_registration_cloud(int points, Rng& rng);

enum class RegistrationCase { kCopy, kDistinct, kDensity };

struct RegistrationTrial {
  int trial = 0;
  double chamfer_after = 0.0;
  double rotation_error_deg = 0.0;
  double residual = 0.0;
  int iters = 0;
};

RegistrationTrial run_registration_trial(RegistrationCase mode, std::uint64_t seed,
                                         int trial, const FeatureConfig& cfg,
                                         const EncoderParams& params);

}  // namespace fer
