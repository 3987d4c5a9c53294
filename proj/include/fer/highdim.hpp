#pragma once

#include <Eigen/Dense>

#include "fer/generators.hpp"
#include "fer/so3.hpp"

namespace fer {

struct HighDimRotation {
  Eigen::MatrixXd d;
  Vec3 source_rotation;  // axis-angle provenance, theta = norm
};

struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues_imag;  // sorted ascending; values m*i
  Eigen::MatrixXcd eigenvectors;     // unitary, column j pairs with value j
};

// exp(M) for skew-symmetric M via the unitary eigendecomposition of iM.
// Skew-symmetric matrices are normal, so this is exact up to round-off.
// Throws if ||M + M^T||_F > 1e-8.
Eigen::MatrixXd exp_skew(const Eigen::MatrixXd& m);

// D(R) = exp(theta w_hat . J); independent of the axis-angle branch.
HighDimRotation d_of(const Mat3& r, const GeneratorTriple& g);

// Eigendecomposition of w_hat . J. The similarity transform
// w_hat . J = D(R) J3 D(R)^T keeps the spectrum on g's ladder for any axis.
SpectralDecomposition sinusoid_decompose(const GeneratorTriple& g, const Vec3& w_hat);

// Orthonormality and unit determinant within tol.
bool check_so_n(const Eigen::MatrixXd& m, double tol);

}  // namespace fer
