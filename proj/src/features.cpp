#include "fer/features.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "fer/highdim.hpp"

namespace fer {

int FeatureConfig::total_dim() const {
  int d = 0;
  for (const auto& g : generators) d += g.n;
  return d;
}

std::vector<FeatureSegment> FeatureConfig::layout() const {
  std::vector<FeatureSegment> segs;
  int offset = 0;
  for (const auto& g : generators) {
    segs.push_back({g.n, offset});
    offset += g.n;
  }
  return segs;
}

void FeatureConfig::check() const {
  if (generators.empty()) throw std::invalid_argument("FeatureConfig: no generators");
  for (std::size_t i = 1; i < generators.size(); ++i)
    if (generators[i].n <= generators[i - 1].n)
      throw std::invalid_argument("FeatureConfig: dims must be strictly increasing");
  if (scale_mode == ScaleMode::kLearnedScalar) {
    if (scale_mlps.size() != generators.size())
      throw std::invalid_argument("FeatureConfig: one scale MLP per segment required");
    for (const auto& m : scale_mlps)
      if (m.input_size() != 1 || m.output_size() != 1)
        throw std::invalid_argument("FeatureConfig: scale MLPs must map R -> R");
  }
}

Eigen::VectorXd zero_eigenvector(const Eigen::MatrixXd& j3) {
  const int n = static_cast<int>(j3.rows());
  if (j3.cols() != n) throw std::invalid_argument("zero_eigenvector: square input required");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(j3, Eigen::ComputeFullV);
  const auto& sing = svd.singularValues();
  const double smax = sing(0);
  int null_dim = 0;
  for (int i = 0; i < n; ++i)
    if (sing(i) <= std::max(1e-9, 1e-9 * smax)) ++null_dim;
  if (smax == 0.0) null_dim = n;
  if (null_dim != 1)
    throw std::runtime_error("zero_eigenvector: J3 kernel dimension is " +
                             std::to_string(null_dim) + ", expected 1");
  Eigen::VectorXd e = svd.matrixV().col(n - 1);
  int imax = 0;
  e.cwiseAbs().maxCoeff(&imax);
  if (e(imax) < 0) e = -e;
  return e / e.norm();
}

namespace {

Eigen::VectorXd psi_impl(const Vec3& u, const GeneratorTriple& g, double scale) {
  if (u.norm() == 0.0) return Eigen::VectorXd::Zero(g.n);
  const Mat3 r = rot_from_z(u / u.norm());
  return scale * (d_of(r, g).d * g.e_hat);
}

}  // namespace

Eigen::VectorXd psi(const Vec3& u, const GeneratorTriple& g) {
  return psi_impl(u, g, u.norm());
}

Eigen::VectorXd psi(const Vec3& u, const GeneratorTriple& g, const ScalarMlp& scale) {
  Eigen::VectorXd t(1);
  t(0) = u.norm();
  return psi_impl(u, g, scale.forward(t)(0));
}

FerFeature psi_multi(const Vec3& u, const FeatureConfig& cfg) {
  cfg.check();
  FerFeature out;
  out.layout = cfg.layout();
  out.values.resize(cfg.total_dim());
  for (std::size_t i = 0; i < cfg.generators.size(); ++i) {
    const auto& seg = out.layout[i];
    out.values.segment(seg.offset, seg.dim) =
        cfg.scale_mode == ScaleMode::kLearnedScalar
            ? psi(u, cfg.generators[i], cfg.scale_mlps[i])
            : psi(u, cfg.generators[i]);
  }
  return out;
}

Eigen::MatrixXd d_multi(const Mat3& r, const FeatureConfig& cfg) {
  cfg.check();
  const int d = cfg.total_dim();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, d);
  int offset = 0;
  for (const auto& g : cfg.generators) {
    out.block(offset, offset, g.n, g.n) = d_of(r, g).d;
    offset += g.n;
  }
  return out;
}

double FrequencySweep::max_relative_energy_above(int k) const {
  const double grand = bin_energy.sum();
  double worst = 0.0;
  for (Eigen::Index c = 0; c < bin_energy.cols(); ++c) {
    const double total = bin_energy.col(c).sum();
    // components that are pure round-off noise have no spectrum to speak of
    if (grand <= 0.0 || total <= 1e-20 * grand) continue;
    double high = 0.0;
    for (Eigen::Index b = k + 1; b < bin_energy.rows(); ++b) high += bin_energy(b, c);
    worst = std::max(worst, high / total);
  }
  return worst;
}

double FrequencySweep::max_relative_energy_at(int b) const {
  const double grand = bin_energy.sum();
  double worst = 0.0;
  for (Eigen::Index c = 0; c < bin_energy.cols(); ++c) {
    const double total = bin_energy.col(c).sum();
    if (grand <= 0.0 || total <= 1e-20 * grand || b >= bin_energy.rows()) continue;
    worst = std::max(worst, bin_energy(b, c) / total);
  }
  return worst;
}

FrequencySweep frequency_sweep(const GeneratorTriple& g, const Vec3& x,
                               const Vec3& w_hat, int samples) {
  if (samples < 4) throw std::invalid_argument("frequency_sweep: need >= 4 samples");
  if (x.norm() == 0.0) throw std::invalid_argument("frequency_sweep: x must be nonzero");
  if (std::abs(w_hat.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("frequency_sweep: w_hat must be a unit vector");
  if (std::abs(w_hat.dot(x) / x.norm()) >= 1e-6)
    throw std::invalid_argument("frequency_sweep: w_hat must be orthogonal to x");

  FrequencySweep sweep;
  sweep.traces.resize(samples, g.n);
  for (int s = 0; s < samples; ++s) {
    const double theta = 2.0 * M_PI * s / samples;
    const Mat3 r = exp_so3(theta * w_hat);
    sweep.traces.row(s) = psi(r * x, g).transpose();
  }

  // Folded DFT power spectrum per component; bins 0..samples/2.
  const int bins = samples / 2 + 1;
  sweep.bin_energy = Eigen::MatrixXd::Zero(bins, g.n);
  sweep.dominant_bin.resize(g.n);
  const std::complex<double> kI(0.0, 1.0);
  for (int c = 0; c < g.n; ++c) {
    for (int b = 0; b < bins; ++b) {
      std::complex<double> acc(0.0, 0.0);
      for (int s = 0; s < samples; ++s)
        acc += sweep.traces(s, c) * std::exp(-2.0 * M_PI * kI * double(b) * double(s) /
                                             double(samples));
      double e = std::norm(acc);
      if (b != 0 && !(samples % 2 == 0 && b == samples / 2)) e *= 2.0;  // fold
      sweep.bin_energy(b, c) = e;
    }
    int imax = 0;
    sweep.bin_energy.col(c).maxCoeff(&imax);
    sweep.dominant_bin(c) = imax;
  }
  return sweep;
}

}  // namespace fer
