#include "fer/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace fer {

namespace {

int total_params(const std::vector<int>& sizes) {
  int total = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l)
    total += sizes[l + 1] * sizes[l] + sizes[l + 1];
  return total;
}

}  // namespace

ScalarMlp::ScalarMlp(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) throw std::invalid_argument("ScalarMlp: need >= 2 layer sizes");
  for (int s : sizes_)
    if (s <= 0) throw std::invalid_argument("ScalarMlp: sizes must be positive");
  params_ = Eigen::VectorXd::Zero(total_params(sizes_));
}

ScalarMlp ScalarMlp::random(std::vector<int> sizes, Rng& rng, double scale) {
  ScalarMlp mlp(std::move(sizes));
  for (int i = 0; i < mlp.params_.size(); ++i)
    mlp.params_(i) = scale * rng.normal();
  return mlp;
}

int ScalarMlp::layer_offset(int layer) const {
  int off = 0;
  for (int l = 0; l < layer; ++l) off += sizes_[l + 1] * sizes_[l] + sizes_[l + 1];
  return off;
}

Eigen::Map<const Eigen::MatrixXd> ScalarMlp::weight(int layer) const {
  return {params_.data() + layer_offset(layer), sizes_[layer + 1], sizes_[layer]};
}

Eigen::Map<const Eigen::VectorXd> ScalarMlp::bias(int layer) const {
  return {params_.data() + layer_offset(layer) + sizes_[layer + 1] * sizes_[layer],
          sizes_[layer + 1]};
}

void ScalarMlp::set_params(const Eigen::VectorXd& p) {
  if (p.size() != params_.size()) throw std::invalid_argument("ScalarMlp: bad param size");
  params_ = p;
}

Eigen::VectorXd ScalarMlp::forward(const Eigen::VectorXd& x) const {
  if (x.size() != sizes_.front()) throw std::invalid_argument("ScalarMlp: bad input size");
  Eigen::VectorXd h = x;
  const int layers = static_cast<int>(sizes_.size()) - 1;
  for (int l = 0; l < layers; ++l) {
    h = (weight(l) * h + bias(l)).eval();
    if (l + 1 < layers) h = h.cwiseMax(0.0);
  }
  return h;
}

Eigen::VectorXd ScalarMlp::backward(const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& grad_out,
                                    Eigen::VectorXd* param_grad) const {
  const int layers = static_cast<int>(sizes_.size()) - 1;
  std::vector<Eigen::VectorXd> inputs(layers);   // input to each layer
  std::vector<Eigen::VectorXd> pre(layers);      // pre-activation
  Eigen::VectorXd h = x;
  for (int l = 0; l < layers; ++l) {
    inputs[l] = h;
    pre[l] = weight(l) * h + bias(l);
    h = (l + 1 < layers) ? pre[l].cwiseMax(0.0).eval() : pre[l];
  }

  if (param_grad && param_grad->size() != params_.size())
    param_grad->setZero(params_.size());

  Eigen::VectorXd g = grad_out;
  for (int l = layers - 1; l >= 0; --l) {
    if (l + 1 < layers) {
      // ReLU: subgradient 0 at the kink itself.
      for (int i = 0; i < g.size(); ++i)
        if (pre[l](i) <= 0.0) g(i) = 0.0;
    }
    if (param_grad) {
      const int off = layer_offset(l);
      Eigen::Map<Eigen::MatrixXd> wgrad(param_grad->data() + off, sizes_[l + 1], sizes_[l]);
      Eigen::Map<Eigen::VectorXd> bgrad(
          param_grad->data() + off + sizes_[l + 1] * sizes_[l], sizes_[l + 1]);
      wgrad += g * inputs[l].transpose();
      bgrad += g;
    }
    g = (weight(l).transpose() * g).eval();
  }
  return g;
}

double ScalarMlp::kink_margin(const Eigen::VectorXd& x) const {
  const int layers = static_cast<int>(sizes_.size()) - 1;
  double margin = std::numeric_limits<double>::infinity();
  Eigen::VectorXd h = x;
  for (int l = 0; l < layers; ++l) {
    h = (weight(l) * h + bias(l)).eval();
    if (l + 1 < layers) {
      margin = std::min(margin, h.cwiseAbs().minCoeff());
      h = h.cwiseMax(0.0);
    }
  }
  return margin;
}

GradCheckReport mlp_grad_check(const ScalarMlp& f, const Eigen::VectorXd& probe,
                               double eps) {
  if (eps < 1e-7 || eps > 1e-4)
    throw std::invalid_argument("mlp_grad_check: eps must be in [1e-7, 1e-4]");

  // Analytic gradient of the scalar L = sum(output).
  Eigen::VectorXd analytic = Eigen::VectorXd::Zero(f.param_count());
  f.backward(probe, Eigen::VectorXd::Ones(f.output_size()), &analytic);

  GradCheckReport report;
  ScalarMlp probe_net = f;
  Eigen::VectorXd p = f.params();
  for (int i = 0; i < p.size(); ++i) {
    const double saved = p(i);
    p(i) = saved + eps;
    probe_net.set_params(p);
    const double up = probe_net.forward(probe).sum();
    const double up_margin = probe_net.kink_margin(probe);
    p(i) = saved - eps;
    probe_net.set_params(p);
    const double down = probe_net.forward(probe).sum();
    const double down_margin = probe_net.kink_margin(probe);
    p(i) = saved;

    // A perturbation that lands near a kink invalidates the central stencil.
    if (std::min(up_margin, down_margin) < 10.0 * eps) {
      ++report.skipped_near_kink;
      continue;
    }
    const double numeric = (up - down) / (2.0 * eps);
    const double denom = std::max({1.0, std::abs(analytic(i)), std::abs(numeric)});
    report.max_rel_error =
        std::max(report.max_rel_error, std::abs(numeric - analytic(i)) / denom);
    ++report.checked;
  }
  probe_net.set_params(p);
  return report;
}

}  // namespace fer
