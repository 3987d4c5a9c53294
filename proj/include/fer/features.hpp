#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fer/generators.hpp"
#include "fer/mlp.hpp"
#include "fer/so3.hpp"

namespace fer {

enum class ScaleMode { kMagnitude, kLearnedScalar };

struct FeatureSegment {
  int dim = 0;
  int offset = 0;
};

struct FerFeature {
  Eigen::VectorXd values;
  std::vector<FeatureSegment> layout;
};

// Ordered bank of generator triples, ascending in dimension. The learned
// scale mode attaches one scalar MLP (R -> R) per segment.
struct FeatureConfig {
  std::vector<GeneratorTriple> generators;
  ScaleMode scale_mode = ScaleMode::kMagnitude;
  std::vector<ScalarMlp> scale_mlps;

  int total_dim() const;
  std::vector<FeatureSegment> layout() const;
  void check() const;  // throws on malformed configs
};

// Unit kernel vector of J3 (sign-canonicalized: largest-|.| entry positive).
// Throws when the kernel is not one-dimensional.
Eigen::VectorXd zero_eigenvector(const Eigen::MatrixXd& j3);

// psi(u) = phi(||u||) D(R^z(u/||u||)) e_hat, with phi(t) = t by default.
// psi(0) = 0, the unique rotation-invariant value at the origin.
Eigen::VectorXd psi(const Vec3& u, const GeneratorTriple& g);
Eigen::VectorXd psi(const Vec3& u, const GeneratorTriple& g, const ScalarMlp& scale);

// Concatenation over segments; rotations act through d_multi on the left.
FerFeature psi_multi(const Vec3& u, const FeatureConfig& cfg);

// Block-diagonal action (+) D_i(R) matching psi_multi's layout.
Eigen::MatrixXd d_multi(const Mat3& r, const FeatureConfig& cfg);

struct FrequencySweep {
  Eigen::MatrixXd traces;      // samples x n, row s = psi(R_w(theta_s) x)
  Eigen::MatrixXd bin_energy;  // (samples/2+1) x n, folded DFT power
  Eigen::VectorXi dominant_bin;

  // Largest over components of (energy above bin k) / (total energy).
  double max_relative_energy_above(int k) const;
  // Largest over components of (energy at bin b) / (total energy).
  double max_relative_energy_at(int b) const;
};

// Traces psi(R_w(theta) x) for theta uniform on [0, 2pi). Requires w_hat
// orthogonal to x so the sweep covers a full great circle.
FrequencySweep frequency_sweep(const GeneratorTriple& g, const Vec3& x,
                               const Vec3& w_hat, int samples);

}  // namespace fer
