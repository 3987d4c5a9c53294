#include "fer/registration.hpp"

#include <cmath>
#include <stdexcept>

#include "fer/highdim.hpp"

namespace fer {

Mat3 procrustes(const PointCloud& p, const PointCloud& q) {
  if (p.rows() != q.rows() || p.rows() < 3)
    throw std::invalid_argument("procrustes: need matched clouds with >= 3 points");
  const Mat3 h = p.transpose() * q;  // sum p_i q_i^T
  Eigen::JacobiSVD<Mat3> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sing = svd.singularValues();
  if (sing(1) <= 1e-12 * sing(0))
    throw std::invalid_argument("procrustes: degenerate cross-covariance (rank < 2)");
  Mat3 r = svd.matrixV() * svd.matrixU().transpose();
  if (r.determinant() < 0) {
    Mat3 flip = Mat3::Identity();
    flip(2, 2) = -1.0;
    r = svd.matrixV() * flip * svd.matrixU().transpose();
  }
  return r;
}

double chamfer(const PointCloud& p, const PointCloud& q) {
  if (p.rows() < 1 || q.rows() < 1)
    throw std::invalid_argument("chamfer: clouds must be nonempty");
  auto one_way = [](const PointCloud& a, const PointCloud& b) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < b.rows(); ++j)
        best = std::min(best, (a.row(i) - b.row(j)).squaredNorm());
      acc += best;
    }
    return acc / static_cast<double>(a.rows());
  };
  return one_way(p, q) + one_way(q, p);
}

EncoderParams EncoderParams::standard(int channels, std::uint64_t seed) {
  Rng rng(seed);
  EncoderParams params;
  params.w_lin.resize(channels, 1);
  for (int i = 0; i < channels; ++i) params.w_lin(i, 0) = 1.0 + 0.5 * rng.normal();
  // Offset keeps the scaling away from zero so no channel collapses.
  params.magnitude_mlp = ScalarMlp::random({channels, 16, channels}, rng, 0.4);
  Eigen::VectorXd p = params.magnitude_mlp.params();
  const int bias_off = channels * 16 + 16 + 16 * channels;
  for (int i = 0; i < channels; ++i) p(bias_off + i) += 1.0;
  params.magnitude_mlp.set_params(p);
  return params;
}

LatentCode encode(const PointCloud& p, const FeatureConfig& cfg,
                  const EncoderParams& params) {
  cfg.check();
  if (p.rows() < 1) throw std::invalid_argument("encode: empty cloud");
  const int d = cfg.total_dim();
  const int c = static_cast<int>(params.w_lin.rows());

  VectorListFeature acc = Eigen::MatrixXd::Zero(c, d);
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    const FerFeature f = psi_multi(Vec3(p.row(i)), cfg);
    const VectorListFeature lifted = vn_linear(params.w_lin, f.values.transpose());
    acc += magnitude_nonlinearity(lifted, params.magnitude_mlp);
  }
  LatentCode code;
  code.z = acc / static_cast<double>(p.rows());
  code.layout = cfg.layout();
  return code;
}

RegistrationResult latent_register(const LatentCode& z1, const LatentCode& z2,
                                   const FeatureConfig& cfg, CemConfig cem_cfg,
                                   int restarts) {
  if (z1.z.rows() != z2.z.rows() || z1.z.cols() != z2.z.cols() ||
      z1.layout.size() != z2.layout.size())
    throw std::invalid_argument("latent_register: latent layouts must match");
  if (restarts < 1) throw std::invalid_argument("latent_register: restarts must be >= 1");

  auto objective = [&](const Eigen::VectorXd& omega) {
    double loss = 0.0;
    for (std::size_t s = 0; s < cfg.generators.size(); ++s) {
      const auto& g = cfg.generators[s];
      const auto& seg = z1.layout[s];
      const Eigen::MatrixXd m = omega(0) * g.j1 + omega(1) * g.j2 + omega(2) * g.j3;
      const Eigen::MatrixXd d = exp_skew(m);
      loss += (z1.z.middleCols(seg.offset, seg.dim) * d.transpose() -
               z2.z.middleCols(seg.offset, seg.dim))
                  .squaredNorm();
    }
    return loss;
  };

  CemConfig cem = cem_cfg;
  cem.dim = 3;
  if (!cem_cfg.init_mean.size()) cem.init_mean = Eigen::VectorXd::Zero(3);
  if (!cem_cfg.init_std.size())
    cem.init_std = Eigen::VectorXd::Constant(3, M_PI / std::sqrt(3.0));
  if (cem_cfg.population == CemConfig{}.population) cem.population = 300;
  if (cem_cfg.max_iters == CemConfig{}.max_iters) cem.max_iters = 150;
  if (cem_cfg.std_floor == CemConfig{}.std_floor) cem.std_floor = 1e-10;
  if (cem_cfg.tol <= 0.0) cem.tol = 1e-16;

  // Global restarts, each followed by tight polish runs around the incumbent
  // best. Near ||omega|| = pi the two axis-angle copies of the optimum split
  // the elite set of a wide search; a narrow re-centered run sees only one.
  CemResult best;
  bool have_best = false;
  int total_iters = 0;
  for (int r = 0; r < restarts && !(have_best && best.converged); ++r) {
    CemConfig run = cem;
    run.seed = derive_seed(cem.seed, r);
    const CemResult res = cem_minimize(objective, run);
    total_iters += res.iters;
    if (!have_best || res.loss < best.loss) {
      best = res;
      have_best = true;
    }
    for (double polish_std : {3e-2, 1e-4}) {
      if (best.converged) break;
      CemConfig polish = cem;
      polish.init_mean = best.solution;
      polish.init_std = Eigen::VectorXd::Constant(3, polish_std);
      polish.max_iters = 60;
      polish.seed = derive_seed(cem.seed, 1000 + 10 * r + int(polish_std * 1e5));
      const CemResult refined = cem_minimize(objective, polish);
      total_iters += refined.iters;
      if (refined.loss < best.loss) best = refined;
    }
  }

  RegistrationResult out;
  // Canonicalize into the ||omega|| <= pi ball (the objective is periodic).
  out.rotation = exp_so3(Vec3(best.solution));
  out.omega = log_so3(out.rotation);
  out.residual = best.loss;
  out.converged = best.converged;
  out.iters = total_iters;
  return out;
}

PointCloud make_registration_cloud(int points, Rng& rng) {
  if (points < 8) throw std::invalid_argument("make_registration_cloud: need >= 8 points");
  PointCloud cloud(points, 3);

  // Asymmetric L-bracket: two slabs of unequal extent meeting at a corner,
  // plus a short stub on one end. Kills every rotational symmetry.
  const int n_bracket = points / 2;
  for (int i = 0; i < n_bracket; ++i) {
    const double pick = rng.uniform();
    Vec3 p;
    if (pick < 0.5) {
      p = Vec3(rng.uniform(0.0, 1.0), rng.uniform(0.0, 0.22), rng.uniform(0.0, 0.12));
    } else if (pick < 0.85) {
      p = Vec3(rng.uniform(0.0, 0.22), rng.uniform(0.0, 0.65), rng.uniform(0.0, 0.12));
    } else {
      p = Vec3(rng.uniform(0.78, 1.0), rng.uniform(0.0, 0.22), rng.uniform(0.0, 0.4));
    }
    cloud.row(i) = p.transpose();
  }

  // Anisotropic Gaussian blob, offset from the bracket.
  const Vec3 scale(0.45, 0.2, 0.1);
  const Mat3 orient = exp_so3(Vec3(0.3, -0.7, 0.5));
  for (int i = n_bracket; i < points; ++i) {
    const Vec3 z(rng.normal(), rng.normal(), rng.normal());
    cloud.row(i) = (orient * scale.cwiseProduct(z) + Vec3(-0.6, 0.5, 0.4)).transpose();
  }
  return cloud;
}

RegistrationTrial run_registration_trial(RegistrationCase mode, std::uint64_t seed,
                                         int trial, const FeatureConfig& cfg,
                                         const EncoderParams& params) {
  Rng shape_rng(derive_seed(seed, 1000 + trial));
  Rng pose_rng(derive_seed(seed, 2000 + trial));

  const int n_points = 120;
  const PointCloud p1 = make_registration_cloud(n_points, shape_rng);

  PointCloud base;
  switch (mode) {
    case RegistrationCase::kCopy:
      base = p1;
      break;
    case RegistrationCase::kDistinct:
      base = make_registration_cloud(n_points, shape_rng);
      break;
    case RegistrationCase::kDensity:
      base = make_registration_cloud(n_points / 2, shape_rng);
      break;
  }

  const Mat3 r_true = random_rotation(pose_rng);
  const PointCloud p2 = base * r_true.transpose();

  const LatentCode z1 = encode(p1, cfg, params);
  const LatentCode z2 = encode(p2, cfg, params);

  CemConfig cem;
  cem.seed = derive_seed(seed, 3000 + trial);
  const RegistrationResult reg = latent_register(z1, z2, cfg, cem);

  RegistrationTrial row;
  row.trial = trial;
  row.chamfer_after = chamfer(p1 * reg.rotation.transpose(), p2);
  row.rotation_error_deg = rotation_distance(reg.rotation, r_true) * 180.0 / M_PI;
  row.residual = reg.residual;
  row.iters = reg.iters;
  return row;
}

}  // namespace fer
