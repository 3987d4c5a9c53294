// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Criteria run at their stated tolerances; no knob here may be loosened
// without loosening the product's own contracts.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fer/audit.hpp"
#include "fer/features.hpp"
#include "fer/highdim.hpp"
#include "fer/layers.hpp"
#include "fer/registration.hpp"

#ifndef FER_CLI_PATH
#define FER_CLI_PATH "fer-so3"
#endif

using namespace fer;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& what) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion,
              what.c_str());
  if (!pass) ++failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

GeneratorTriple canonical3() {
  GeneratorTriple g;
  g.n = 3;
  g.k = 1;
  g.j1 = f1();
  g.j2 = f2();
  g.j3 = f3();
  g.e_hat = Vec3(0, 0, 1);
  g.residual = 0.0;
  return g;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(FER_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

double find_check(const AuditReport& report, const std::string& name) {
  for (const auto& r : report.rows)
    if (r.name == name) return r.measured;
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

int main() {
  const fs::path work = fs::temp_directory_path() / "fer_acceptance";
  fs::create_directories(work);

  std::map<int, GeneratorTriple> triples;

  // --- 1. generator construction ----------------------------------------
  {
    bool pass = true;
    std::ostringstream detail;
    for (int n : {3, 5, 7, 9}) {
      const auto t0 = std::chrono::steady_clock::now();
      GeneratorTriple g;
      try {
        g = construct_generators(n, 1);
      } catch (const std::exception& e) {
        pass = false;
        detail << " n=" << n << " construction failed";
        continue;
      }
      const double elapsed = seconds_since(t0);
      triples[n] = g;

      double spectrum_err = 0.0;
      const Eigen::VectorXd target = target_spectrum(n, g.k);
      for (const Eigen::MatrixXd* j : {&g.j1, &g.j2, &g.j3})
        spectrum_err = std::max(
            spectrum_err, (skew_spectrum(*j) - target).cwiseAbs().maxCoeff());

      double periodicity = 0.0;
      const ValidationReport v = validate(g);
      for (const auto& c : v.checks)
        if (c.name.rfind("periodicity", 0) == 0)
          periodicity = std::max(periodicity, c.measured);

      const bool ok = g.residual <= 1e-4 && spectrum_err <= 1e-6 &&
                      periodicity <= 1e-7 && elapsed <= 600.0;
      pass = pass && ok;
      detail << " n=" << n << "(res " << std::scientific << g.residual << ", "
             << std::fixed << elapsed << "s)";
    }
    report(1, pass, "construction residual<=1e-4, spectrum<=1e-6, periodicity<=1e-7:" +
                        detail.str());
  }

  // --- 2. SO(n) lift properties ------------------------------------------
  {
    bool pass = true;
    std::ostringstream detail;
    for (int n : {3, 5, 7, 9}) {
      if (!triples.count(n)) {
        pass = false;
        continue;
      }
      const auto t0 = std::chrono::steady_clock::now();
      const AuditReport audit = run_property_audit(triples[n], 1000, 42);
      const double elapsed = seconds_since(t0);
      const bool ok = find_check(audit, "identity") <= 1e-12 &&
                      find_check(audit, "orthonormality") <= 1e-9 &&
                      find_check(audit, "determinant") <= 1e-9 &&
                      find_check(audit, "compatibility") <= 1e-8 &&
                      find_check(audit, "injectivity_min_distance") > 1e-6 &&
                      find_check(audit, "branch_independence") <= 1e-8 &&
                      elapsed <= 60.0;
      pass = pass && ok;
      detail << " n=" << n << "(" << std::fixed << elapsed << "s)";
    }
    report(2, pass,
           "1000-pair lift audit: identity/ortho/det/compat/injectivity/branch:" +
               detail.str());
  }

  // --- 3. equivariance ----------------------------------------------------
  {
    double worst_multi = 0.0, worst_single = 0.0, worst_id = 0.0, worst_norm = 0.0;
    bool pass = triples.count(5) && triples.count(7);
    if (pass) {
      FeatureConfig cfg;
      cfg.generators = {canonical3(), triples[5], triples[7]};
      const GeneratorTriple g3 = canonical3();
      Rng rng(2024);
      for (int i = 0; i < 1000; ++i) {
        const Mat3 r = random_rotation(rng);
        Vec3 u(rng.normal(), rng.normal(), rng.normal());
        u.normalize();
        u *= rng.uniform(0.1, 10.0);

        const Eigen::VectorXd lhs = psi_multi(r * u, cfg).values;
        const Eigen::VectorXd rhs = d_multi(r, cfg) * psi_multi(u, cfg).values;
        worst_multi =
            std::max(worst_multi, (lhs - rhs).norm() / std::max(1.0, rhs.norm()));

        const Eigen::VectorXd s_lhs = psi(r * u, triples[5]);
        const Eigen::VectorXd s_rhs = d_of(r, triples[5]).d * psi(u, triples[5]);
        worst_single = std::max(worst_single,
                                (s_lhs - s_rhs).norm() / std::max(1.0, s_rhs.norm()));

        worst_id = std::max(worst_id, (psi(u, g3) - u).norm());
        worst_norm =
            std::max(worst_norm, std::abs(psi(u, triples[7]).norm() - u.norm()));
      }
      pass = worst_multi < 1e-8 && worst_single < 1e-8 && worst_id < 1e-10 &&
             worst_norm < 1e-10;
    }
    std::ostringstream detail;
    detail << std::scientific << "psi " << worst_single << ", Psi " << worst_multi
           << ", n=3 identity " << worst_id << ", norm " << worst_norm;
    report(3, pass, "1000-trial equivariance <1e-8, reduction/norm <1e-10: " +
                        detail.str());
  }

  // --- 4. frequency bound --------------------------------------------------
  {
    bool pass = true;
    std::ostringstream detail;
    Rng rng(7);
    Vec3 x(rng.normal(), rng.normal(), rng.normal());
    x.normalize();
    Vec3 helper(rng.normal(), rng.normal(), rng.normal());
    const Vec3 w = x.cross(helper).normalized();

    for (int n : {3, 5, 7}) {
      const GeneratorTriple g = (n == 3) ? canonical3() : triples[n];
      const FrequencySweep sweep = frequency_sweep(g, x, w, 128);
      const double above = sweep.max_relative_energy_above(g.k);
      pass = pass && above <= 1e-6;
      detail << " n=" << n << " above-k " << std::scientific << above << ";";
    }
    const FrequencySweep max5 = frequency_sweep(triples[5], x, w, 128);
    const double bin2 = max5.max_relative_energy_at(2);
    pass = pass && bin2 > 1e-6;
    const GeneratorTriple low5 = construct_low_freq(5, 1);
    const FrequencySweep low = frequency_sweep(low5, x, w, 128);
    const double low_above1 = low.max_relative_energy_above(1);
    pass = pass && low_above1 <= 1e-6;
    detail << " max5 bin2 " << std::scientific << bin2 << ", low5 above-1 "
           << low_above1;
    report(4, pass, "DFT energy above k <=1e-6; bin-2 present iff max-freq:" +
                        detail.str());
  }

  // --- 5. layer suite -------------------------------------------------------
  {
    FeatureConfig cfg;
    cfg.generators = {canonical3(), triples[5]};
    const int c = 4;
    Rng rng(501);
    const ScalarMlp f = ScalarMlp::random({c, 16, c}, rng, 0.4);

    double eq_worst = 0.0, inv_worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      Eigen::MatrixXd v(c, 8);
      for (int a = 0; a < c; ++a)
        for (int b = 0; b < 8; ++b) v(a, b) = rng.normal();
      const Mat3 r = random_rotation(rng);
      const Eigen::MatrixXd d = d_multi(r, cfg);
      Eigen::MatrixXd w(c, c);
      for (int a = 0; a < c; ++a)
        for (int b = 0; b < c; ++b) w(a, b) = rng.normal();

      eq_worst = std::max(
          eq_worst, (vn_linear(w, v * d.transpose()) - vn_linear(w, v) * d.transpose())
                        .norm());
      eq_worst =
          std::max(eq_worst, (magnitude_nonlinearity(v * d.transpose(), f) -
                              magnitude_nonlinearity(v, f) * d.transpose())
                                 .norm());
      eq_worst = std::max(
          eq_worst,
          (mean_pool({v * d.transpose()}) - mean_pool({v}) * d.transpose()).norm());

      Eigen::MatrixXd w_dir(2, c);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < c; ++b) w_dir(a, b) = rng.normal();
      inv_worst = std::max(inv_worst, (invariant_layer(v * d.transpose(), w_dir) -
                                       invariant_layer(v, w_dir))
                                          .norm());
      Vec3 u(rng.normal(), rng.normal(), rng.normal());
      inv_worst =
          std::max(inv_worst, (invariant_pairing(psi_multi(r * u, cfg).values,
                                                 Eigen::MatrixXd(v * d.transpose())) -
                               invariant_pairing(psi_multi(u, cfg).values, v))
                                  .norm());
    }

    // end-to-end invariance
    double e2e_worst = 0.0;
    {
      Eigen::MatrixXd w_lift(c, 1), w_dir(2, c);
      for (int a = 0; a < c; ++a) w_lift(a, 0) = rng.normal();
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < c; ++b) w_dir(a, b) = rng.normal();
      auto pipeline = [&](const std::vector<Vec3>& cloud) {
        std::vector<VectorListFeature> per_point;
        for (const Vec3& p : cloud)
          per_point.push_back(magnitude_nonlinearity(
              vn_linear(w_lift, psi_multi(p, cfg).values.transpose()), f));
        return invariant_layer(mean_pool(per_point), w_dir);
      };
      for (int t = 0; t < 20; ++t) {
        std::vector<Vec3> cloud, rotated;
        const Mat3 r = random_rotation(rng);
        for (int i = 0; i < 10; ++i) {
          cloud.emplace_back(rng.normal(), rng.normal(), rng.normal());
          rotated.push_back(r * cloud.back());
        }
        e2e_worst = std::max(e2e_worst, (pipeline(cloud) - pipeline(rotated)).norm());
      }
    }

    double grad_worst = 0.0;
    for (std::uint64_t s : {1, 2, 3}) {
      Rng gr(s);
      const ScalarMlp net = ScalarMlp::random({3, 16, 16, 1}, gr, 0.6);
      Eigen::VectorXd probe(3);
      probe << gr.normal(), gr.normal(), gr.normal();
      grad_worst = std::max(grad_worst, mlp_grad_check(net, probe, 1e-5).max_rel_error);
    }

    const bool pass = eq_worst < 1e-8 && inv_worst < 1e-7 && e2e_worst < 1e-7 &&
                      grad_worst < 1e-4;
    std::ostringstream detail;
    detail << std::scientific << "equivariant " << eq_worst << ", invariant "
           << inv_worst << ", end-to-end " << e2e_worst << ", grad " << grad_worst;
    report(5, pass, "layer residuals <1e-8/<1e-7, pipeline <1e-7, grads <1e-4: " +
                        detail.str());
  }

  // --- 6. toy regression -----------------------------------------------------
  {
    const auto t0 = std::chrono::steady_clock::now();
    const ToyGenerators gens = ToyGenerators::build(99);
    int max_beats_low = 0, seven_le_five = 0;
    bool repeat_ok = true;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      std::map<ToyArm, double> mse;
      for (ToyArm arm : {ToyArm::kDim3, ToyArm::kDim3Repeat, ToyArm::kDim35LowFreq,
                         ToyArm::kDim35MaxFreq, ToyArm::kDim357MaxFreq}) {
        ToyRegressionConfig cfg;
        cfg.arm = arm;
        cfg.seed = seed;
        mse[arm] = toy_regression_train(cfg, gens).final_mse;
      }
      if (mse[ToyArm::kDim35MaxFreq] < mse[ToyArm::kDim35LowFreq]) ++max_beats_low;
      if (mse[ToyArm::kDim357MaxFreq] <= mse[ToyArm::kDim35MaxFreq]) ++seven_le_five;
      repeat_ok = repeat_ok && std::abs(mse[ToyArm::kDim3Repeat] - mse[ToyArm::kDim3]) <=
                                   0.1 * mse[ToyArm::kDim3];
    }
    const double elapsed = seconds_since(t0);
    const bool pass =
        max_beats_low >= 4 && seven_le_five >= 4 && repeat_ok && elapsed <= 300.0;
    std::ostringstream detail;
    detail << "maxfreq<lowfreq " << max_beats_low << "/5, 3+5+7<=3+5 " << seven_le_five
           << "/5, repeat within 10%: " << (repeat_ok ? "yes" : "no") << " ("
           << std::fixed << elapsed << "s)";
    report(6, pass, "toy regression orderings (>=4/5 seeds): " + detail.str());
  }

  // --- 7. registration copy case ----------------------------------------------
  {
    const auto t0 = std::chrono::steady_clock::now();
    FeatureConfig cfg;
    cfg.generators = {canonical3(), construct_generators(5, 1234)};
    const EncoderParams params = EncoderParams::standard(8, 77);
    double worst_chamfer = 0.0, worst_rot = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const RegistrationTrial row =
          run_registration_trial(RegistrationCase::kCopy, 5, trial, cfg, params);
      worst_chamfer = std::max(worst_chamfer, row.chamfer_after);
      worst_rot = std::max(worst_rot, row.rotation_error_deg);
    }
    const double elapsed = seconds_since(t0);
    const bool pass = worst_chamfer < 1e-6 && worst_rot < 1.0 && elapsed <= 120.0;
    std::ostringstream detail;
    detail << std::scientific << "worst chamfer " << worst_chamfer << ", worst rot "
           << std::fixed << worst_rot << " deg (" << elapsed << "s)";
    report(7, pass, "20-trial copy case: chamfer <1e-6, rotation <1 deg: " +
                        detail.str());
  }

  // --- 8. determinism -----------------------------------------------------------
  {
    bool pass = true;
    const auto path = [&](const char* name) { return (work / name).string(); };

    pass = pass && run_cli("gen --n 5 --seed 7 --out " + path("d1.txt")) == 0;
    pass = pass && run_cli("gen --n 5 --seed 7 --out " + path("d2.txt")) == 0;
    pass = pass && slurp(path("d1.txt")) == slurp(path("d2.txt"));

    pass = pass && run_cli("validate --in " + path("d1.txt") +
                           " --trials 100 --out " + path("a1.csv")) == 0;
    pass = pass && run_cli("validate --in " + path("d1.txt") +
                           " --trials 100 --out " + path("a2.csv")) == 0;
    pass = pass && slurp(path("a1.csv")) == slurp(path("a2.csv"));

    const std::string toy_args = "toy-regress --arms dim3,3+5-maxfreq --seeds 1,2 --out ";
    pass = pass && run_cli(toy_args + path("t1.csv")) == 0;
    pass = pass && run_cli(toy_args + path("t2.csv")) == 0;
    pass = pass && slurp(path("t1.csv")) == slurp(path("t2.csv"));

    const std::string reg_args = "register --case copy --trials 2 --seed 5 --out ";
    pass = pass && run_cli(reg_args + path("r1.csv")) == 0;
    pass = pass && run_cli(reg_args + path("r2.csv")) == 0;
    pass = pass && slurp(path("r1.csv")) == slurp(path("r2.csv"));

    // generator file round trip
    try {
      const GeneratorTriple g = load_generator_set(path("d1.txt"));
      save_generator_set(g, path("d3.txt"));
      pass = pass && slurp(path("d1.txt")) == slurp(path("d3.txt"));
    } catch (const std::exception&) {
      pass = false;
    }
    report(8, pass, "CLI reruns and file round-trips are byte-identical");
  }

  std::printf("%s (%d criterion failure%s)\n", failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
              failures, failures == 1 ? "" : "s");
  return failures == 0 ? 0 : 1;
}
