#include "fer/so3.hpp"

#include <cmath>
#include <stdexcept>

namespace fer {

namespace {

Mat3 make_f1() {
  Mat3 m;
  m << 0, 0, 0, 0, 0, -1, 0, 1, 0;
  return m;
}

Mat3 make_f2() {
  Mat3 m;
  m << 0, 0, 1, 0, 0, 0, -1, 0, 0;
  return m;
}

Mat3 make_f3() {
  Mat3 m;
  m << 0, -1, 0, 1, 0, 0, 0, 0, 0;
  return m;
}

}  // namespace

const Mat3& f1() {
  static const Mat3 m = make_f1();
  return m;
}

const Mat3& f2() {
  static const Mat3 m = make_f2();
  return m;
}

const Mat3& f3() {
  static const Mat3 m = make_f3();
  return m;
}

Mat3 skew3(const Vec3& w) {
  Mat3 m;
  m << 0, -w.z(), w.y(), w.z(), 0, -w.x(), -w.y(), w.x(), 0;
  return m;
}

Mat3 exp_so3(const Vec3& w) {
  if (!w.allFinite()) throw std::invalid_argument("exp_so3: non-finite input");
  const double theta = w.norm();
  const Mat3 wx = skew3(w);
  double a, b;  // R = I + a*[w]x + b*[w]x^2
  if (theta < 1e-8) {
    const double t2 = theta * theta;
    a = 1.0 - t2 / 6.0;
    b = 0.5 - t2 / 24.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / (theta * theta);
  }
  return Mat3::Identity() + a * wx + b * wx * wx;
}

Vec3 log_so3(const Mat3& r) {
  const double tr = r.trace();
  const double cos_theta = std::clamp((tr - 1.0) / 2.0, -1.0, 1.0);
  // vee(R - R^T) / 2 = sin(theta) * axis; its norm carries sin(theta) to
  // machine precision, so atan2 gives a well-conditioned angle everywhere
  // (acos alone loses ~1/sin(theta) digits near pi).
  Vec3 s(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
  s *= 0.5;
  const double sin_theta = std::min(s.norm(), 1.0);
  const double theta = std::atan2(s.norm(), cos_theta);

  if (theta < 1e-7) {
    return s;  // w ~ sin(theta)*axis to second order
  }
  if (theta < M_PI - 1e-4) {
    return (theta / sin_theta) * s;
  }

  // Near pi the axis direction degrades in s. R - I has a well-separated
  // kernel (its other singular values are ~2), so the smallest right
  // singular vector gives the axis to machine precision.
  Eigen::JacobiSVD<Mat3> svd(r - Mat3::Identity(), Eigen::ComputeFullV);
  Vec3 axis = svd.matrixV().col(2);
  if (sin_theta > 1e-12) {
    if (axis.dot(s) < 0) axis = -axis;
  } else {
    // theta == pi exactly: both signs give the same rotation; fix one.
    int imax = 0;
    axis.cwiseAbs().maxCoeff(&imax);
    if (axis(imax) < 0) axis = -axis;
  }
  return theta * axis;
}

Mat3 rot_from_z(const Vec3& u_hat) {
  if (std::abs(u_hat.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("rot_from_z: input must be a unit vector");
  const double c = u_hat.z();
  Vec3 axis(-u_hat.y(), u_hat.x(), 0.0);  // z x u_hat
  const double s = axis.norm();
  if (s == 0.0) {
    // exactly +-z; the antipodal axis is a convention, (1,0,0) by decision
    return c > 0 ? Mat3::Identity() : exp_so3(Vec3(M_PI, 0, 0));
  }
  return exp_so3(std::atan2(s, c) * axis / s);
}

Mat3 random_rotation(Rng& rng) {
  Eigen::Vector4d q;
  double n2 = 0.0;
  do {
    for (int i = 0; i < 4; ++i) q(i) = rng.normal();
    n2 = q.squaredNorm();
  } while (n2 < 1e-12);
  q /= std::sqrt(n2);
  const double w = q(0), x = q(1), y = q(2), z = q(3);
  Mat3 r;
  r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
      2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
      2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return r;
}

bool is_rotation(const Mat3& r, double tol) {
  if (!r.allFinite()) return false;
  const double ortho = (r * r.transpose() - Mat3::Identity()).norm();
  return ortho <= tol && std::abs(r.determinant() - 1.0) <= tol;
}

double rotation_distance(const Mat3& a, const Mat3& b) {
  const double c = std::clamp(((a.transpose() * b).trace() - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c);
}

}  // namespace fer
