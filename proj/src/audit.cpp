#include "fer/audit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "fer/features.hpp"
#include "fer/highdim.hpp"
#include "fer/so3.hpp"

namespace fer {

namespace {

AuditRow make_row(const std::string& name, int trials, double measured, double tol,
                  bool higher_is_better = false) {
  AuditRow row{name, trials, measured, tol, higher_is_better, false};
  row.pass = higher_is_better ? measured > tol : measured <= tol;
  return row;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

AuditReport run_property_audit(const GeneratorTriple& g, int trials, std::uint64_t seed) {
  AuditReport report;
  Rng rng(seed);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(g.n, g.n);

  report.rows.push_back(
      make_row("identity", 1, (d_of(Mat3::Identity(), g).d - id).norm(), 1e-12));

  double worst_compat = 0.0, worst_ortho = 0.0, worst_det = 0.0;
  double worst_branch = 0.0, min_inj = std::numeric_limits<double>::infinity();
  double worst_equiv = 0.0, worst_norm = 0.0;
  for (int i = 0; i < trials; ++i) {
    const Mat3 r1 = random_rotation(rng);
    const Mat3 r2 = random_rotation(rng);
    const Eigen::MatrixXd d1 = d_of(r1, g).d;
    const Eigen::MatrixXd d2 = d_of(r2, g).d;
    worst_compat = std::max(worst_compat, (d_of(r1 * r2, g).d - d1 * d2).norm());
    worst_ortho = std::max(worst_ortho, (d1 * d1.transpose() - id).norm());
    worst_det = std::max(worst_det, std::abs(d1.determinant() - 1.0));

    if (rotation_distance(r1, Mat3::Identity()) > 1e-3)
      min_inj = std::min(min_inj, (d1 - id).norm());

    const Vec3 w = log_so3(r1);
    const double theta = w.norm();
    if (theta > 1e-3) {
      const Vec3 w_alt = -(2.0 * M_PI - theta) * (w / theta);
      const Eigen::MatrixXd m_alt =
          w_alt.x() * g.j1 + w_alt.y() * g.j2 + w_alt.z() * g.j3;
      worst_branch = std::max(worst_branch, (exp_skew(m_alt) - d1).norm());
    }

    Vec3 u(rng.normal(), rng.normal(), rng.normal());
    u.normalize();
    u *= rng.uniform(0.1, 10.0);
    const Eigen::VectorXd lhs = psi(r1 * u, g);
    const Eigen::VectorXd rhs = d1 * psi(u, g);
    worst_equiv =
        std::max(worst_equiv, (lhs - rhs).norm() / std::max(1.0, rhs.norm()));
    worst_norm = std::max(worst_norm, std::abs(psi(u, g).norm() - u.norm()));
  }
  report.rows.push_back(make_row("compatibility", trials, worst_compat, 1e-8));
  report.rows.push_back(make_row("orthonormality", trials, worst_ortho, 1e-9));
  report.rows.push_back(make_row("determinant", trials, worst_det, 1e-9));
  report.rows.push_back(
      make_row("injectivity_min_distance", trials, min_inj, 1e-6, true));
  report.rows.push_back(make_row("branch_independence", trials, worst_branch, 1e-8));
  report.rows.push_back(make_row("psi_equivariance", trials, worst_equiv, 1e-8));
  report.rows.push_back(make_row("psi_norm_preservation", trials, worst_norm, 1e-10));

  // Frequency bound via the theta-sweep DFT along a derived axis pair.
  Vec3 x(rng.normal(), rng.normal(), rng.normal());
  x.normalize();
  Vec3 helper(rng.normal(), rng.normal(), rng.normal());
  const Vec3 w_axis = x.cross(helper).normalized();
  const FrequencySweep sweep = frequency_sweep(g, x, w_axis, 128);
  report.rows.push_back(
      make_row("frequency_bound", 128, sweep.max_relative_energy_above(g.k), 1e-6));

  report.pass = std::all_of(report.rows.begin(), report.rows.end(),
                            [](const AuditRow& r) { return r.pass; });
  return report;
}

AuditReport validation_as_audit(const ValidationReport& report) {
  AuditReport out;
  for (const auto& c : report.checks)
    out.rows.push_back(make_row(c.name, 1, c.measured, c.tolerance));
  out.pass = report.pass;
  return out;
}

std::string audit_to_csv(const AuditReport& report) {
  std::ostringstream out;
  out << "check,trials,max_residual,tolerance,pass\n";
  for (const auto& r : report.rows)
    out << r.name << "," << r.trials << "," << fmt(r.measured) << ","
        << fmt(r.tolerance) << "," << (r.pass ? "1" : "0") << "\n";
  return out.str();
}

}  // namespace fer
