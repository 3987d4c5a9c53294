#pragma once

#include <Eigen/Dense>

#include "fer/rng.hpp"

namespace fer {

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;

// Canonical so(3) basis: F1, F2, F3 generate rotations about x, y, z.
const Mat3& f1();
const Mat3& f2();
const Mat3& f3();

// Cross-product matrix [w]x.
Mat3 skew3(const Vec3& w);

// exp(theta w_hat . F) via Rodrigues, safe for theta -> 0.
Mat3 exp_so3(const Vec3& w);

// Inverse of exp_so3 with theta in [0, pi]. The theta ~ pi branch extracts
// the axis from the kernel of R - I so the round trip stays below 1e-10.
Vec3 log_so3(const Mat3& r);

// Minimal rotation taking the z-axis to u_hat (axis z x u_hat). The
// antipodal input u_hat = -z has no preferred axis; (1,0,0) is used.
Mat3 rot_from_z(const Vec3& u_hat);

// Haar-uniform rotation from a normalized Gaussian quaternion.
Mat3 random_rotation(Rng& rng);

// Orthonormality and det(R)=1 within tol.
bool is_rotation(const Mat3& r, double tol = 1e-9);

// Angle of a^T b in radians; zero iff a == b.
double rotation_distance(const Mat3& a, const Mat3& b);

}  // namespace fer
