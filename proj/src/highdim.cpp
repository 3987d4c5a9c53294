#include "fer/highdim.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace fer {

namespace {
const std::complex<double> kI(0.0, 1.0);
}

Eigen::MatrixXd exp_skew(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("exp_skew: square input required");
  if ((m + m.transpose()).norm() > 1e-8)
    throw std::invalid_argument("exp_skew: input is not skew-symmetric");
  const int n = static_cast<int>(m.rows());

  Eigen::MatrixXcd h = kI * m.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("exp_skew: eigendecomposition failed");

  // M = -iH, so exp(M) = V diag(exp(-i mu)) V^H with mu real.
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j)
    out += std::exp(-kI * es.eigenvalues()(j)) * es.eigenvectors().col(j) *
           es.eigenvectors().col(j).adjoint();
  return out.real();
}

HighDimRotation d_of(const Mat3& r, const GeneratorTriple& g) {
  const Vec3 w = log_so3(r);
  const Eigen::MatrixXd m = w.x() * g.j1 + w.y() * g.j2 + w.z() * g.j3;
  return {exp_skew(m), w};
}

SpectralDecomposition sinusoid_decompose(const GeneratorTriple& g, const Vec3& w_hat) {
  if (std::abs(w_hat.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("sinusoid_decompose: w_hat must be a unit vector");
  const Eigen::MatrixXd m = w_hat.x() * g.j1 + w_hat.y() * g.j2 + w_hat.z() * g.j3;

  Eigen::MatrixXcd h = kI * m.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("sinusoid_decompose: eigendecomposition failed");

  SpectralDecomposition out;
  const int n = g.n;
  out.eigenvalues_imag.resize(n);
  out.eigenvectors.resize(n, n);
  for (int j = 0; j < n; ++j) {
    // mu ascending => imag(lambda) = -mu descending; reverse to ascend.
    out.eigenvalues_imag(j) = -es.eigenvalues()(n - 1 - j);
    out.eigenvectors.col(j) = es.eigenvectors().col(n - 1 - j);
  }
  return out;
}

bool check_so_n(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols() || !m.allFinite()) return false;
  const int n = static_cast<int>(m.rows());
  const double ortho = (m * m.transpose() - Eigen::MatrixXd::Identity(n, n)).norm();
  return ortho <= tol && std::abs(m.determinant() - 1.0) <= tol;
}

}  // namespace fer
