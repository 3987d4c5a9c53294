#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fer/so3.hpp"

using namespace fer;

namespace {

// Independent Rodrigues oracle: direct trigonometric form, no shared code
// with exp_so3's small-angle branch.
Mat3 rodrigues_oracle(const Vec3& w) {
  const double theta = w.norm();
  if (theta == 0.0) return Mat3::Identity();
  const Vec3 a = w / theta;
  Mat3 aat = a * a.transpose();
  Mat3 ax = skew3(a);
  return std::cos(theta) * Mat3::Identity() + std::sin(theta) * ax +
         (1.0 - std::cos(theta)) * aat;
}

}  // namespace

TEST_CASE("F basis commutators") {
  CHECK((f1() * f2() - f2() * f1() - f3()).norm() == 0.0);
  CHECK((f2() * f3() - f3() * f2() - f1()).norm() == 0.0);
  CHECK((f3() * f1() - f1() * f3() - f2()).norm() == 0.0);
  CHECK((f1() + f1().transpose()).norm() == 0.0);
}

TEST_CASE("exp_so3 frozen examples") {
  CHECK((exp_so3(Vec3::Zero()) - Mat3::Identity()).norm() == 0.0);

  Mat3 quarter_z;
  quarter_z << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  CHECK((exp_so3(Vec3(0, 0, M_PI / 2)) - quarter_z).norm() < 1e-15);

  Mat3 half_x = Vec3(1, -1, -1).asDiagonal();
  CHECK((exp_so3(Vec3(M_PI, 0, 0)) - half_x).norm() < 1e-15);
}

TEST_CASE("exp_so3 matches the Rodrigues oracle") {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    Vec3 w(rng.normal(), rng.normal(), rng.normal());
    w *= rng.uniform(0.0, 2.0);
    CHECK((exp_so3(w) - rodrigues_oracle(w)).norm() < 1e-13);
    CHECK(is_rotation(exp_so3(w), 1e-12));
  }
  // tiny-angle branch
  for (double t : {1e-9, 1e-10, 1e-12, 0.0}) {
    const Vec3 w(t, -t, t / 2);
    CHECK((exp_so3(w) - rodrigues_oracle(w)).norm() < 1e-15);
  }
}

TEST_CASE("log_so3 frozen examples") {
  CHECK(log_so3(Mat3::Identity()).norm() == 0.0);

  Mat3 quarter_z;
  quarter_z << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  CHECK((log_so3(quarter_z) - Vec3(0, 0, M_PI / 2)).norm() < 1e-14);

  Mat3 half_x = Vec3(1, -1, -1).asDiagonal();
  CHECK((log_so3(half_x) - Vec3(M_PI, 0, 0)).norm() < 1e-14);
}

TEST_CASE("exp/log round trip, including near pi") {
  Rng rng(17);
  for (int i = 0; i < 1000; ++i) {
    const Mat3 r = random_rotation(rng);
    const Vec3 w = log_so3(r);
    CHECK(w.norm() <= M_PI + 1e-12);
    CHECK((exp_so3(w) - r).norm() < 1e-10);
  }
  // deliberately close to the pi branch
  Rng rng2(18);
  for (int i = 0; i < 200; ++i) {
    Vec3 a(rng2.normal(), rng2.normal(), rng2.normal());
    a.normalize();
    for (double d : {0.0, 1e-13, 1e-9, 1e-6, 1e-4, 1e-3}) {
      const Mat3 r = exp_so3((M_PI - d) * a);
      CHECK((exp_so3(log_so3(r)) - r).norm() < 1e-10);
    }
  }
}

TEST_CASE("rot_from_z examples and property") {
  CHECK((rot_from_z(Vec3(0, 0, 1)) - Mat3::Identity()).norm() == 0.0);

  Mat3 about_y;  // rotation about y by pi/2 maps z to x
  about_y << 0, 0, 1, 0, 1, 0, -1, 0, 0;
  CHECK((rot_from_z(Vec3(1, 0, 0)) - about_y).norm() < 1e-15);

  // antipodal convention: axis (1,0,0), angle pi
  const Mat3 anti = rot_from_z(Vec3(0, 0, -1));
  CHECK((anti - exp_so3(Vec3(M_PI, 0, 0))).norm() < 1e-15);
  CHECK((anti * Vec3(0, 0, 1) - Vec3(0, 0, -1)).norm() < 1e-15);

  Rng rng(23);
  for (int i = 0; i < 1000; ++i) {
    Vec3 u(rng.normal(), rng.normal(), rng.normal());
    u.normalize();
    const Mat3 r = rot_from_z(u);
    CHECK(is_rotation(r, 1e-12));
    CHECK((r * Vec3(0, 0, 1) - u).norm() < 1e-10);
  }
  // near-antipodal
  for (double d : {1e-13, 1e-10, 1e-7}) {
    Vec3 u(d, -d, -1.0);
    u.normalize();
    CHECK((rot_from_z(u) * Vec3(0, 0, 1) - u).norm() < 1e-10);
  }

  CHECK_THROWS(rot_from_z(Vec3(1, 1, 0)));  // not unit
}

TEST_CASE("random_rotation determinism and Haar trace") {
  Rng a(99), b(99);
  for (int i = 0; i < 10; ++i)
    CHECK((random_rotation(a) - random_rotation(b)).norm() == 0.0);

  Rng rng(7);
  double trace_sum = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Mat3 r = random_rotation(rng);
    CHECK(is_rotation(r, 1e-12));
    trace_sum += r.trace();
  }
  CHECK(std::abs(trace_sum / 10000.0) < 0.05);  // E[tr R] = 0 under Haar
}

TEST_CASE("rotation_distance") {
  Rng rng(31);
  const Mat3 r = random_rotation(rng);
  CHECK(rotation_distance(r, r) < 1e-7);
  const Mat3 s = exp_so3(Vec3(0, 0.25, 0)) * r;
  CHECK(rotation_distance(r, s) == doctest::Approx(0.25).epsilon(1e-10));
}
