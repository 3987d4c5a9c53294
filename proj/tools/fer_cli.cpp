// fer-so3: generator construction/validation, equivariance audits,
// frequency experiments and the registration harness. All outputs are
// deterministic files given identical flags.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fer/audit.hpp"
#include "fer/features.hpp"
#include "fer/generators.hpp"
#include "fer/layers.hpp"
#include "fer/registration.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

fer::GeneratorTriple canonical3() {
  fer::GeneratorTriple g;
  g.n = 3;
  g.k = 1;
  g.j1 = fer::f1();
  g.j2 = fer::f2();
  g.j3 = fer::f3();
  g.e_hat = fer::Vec3(0, 0, 1);
  g.residual = 0.0;
  return g;
}

std::string spectrum_line(const fer::GeneratorTriple& g) {
  const Eigen::VectorXd spec = fer::target_spectrum(g.n, g.k);
  std::string line = "eigs: ";
  for (int i = 0; i < spec.size(); ++i) {
    if (i) line += ",";
    line += std::to_string(int(std::lround(spec(i))));
  }
  line += " (imag)";
  return line;
}

int cmd_gen(int n, std::uint64_t seed, const std::string& mode,
            const std::string& out_path) {
  if (n < 3 || n % 2 == 0) {
    std::cerr << "gen: n must be odd and >= 3; the maximum-frequency ladder has "
                 "exactly n entries only for odd n, making the anchor vector "
                 "unique up to sign\n";
    return kExitUsage;
  }
  if (mode != "max-freq" && mode != "low-freq") {
    std::cerr << "gen: --mode must be max-freq or low-freq\n";
    return kExitUsage;
  }

  const auto t0 = std::chrono::steady_clock::now();
  fer::GeneratorTriple g;
  try {
    g = (mode == "low-freq") ? fer::construct_low_freq(n, seed)
                             : fer::construct_generators(n, seed);
  } catch (const std::exception& e) {
    std::cerr << "gen: construction failed: " << e.what() << "\n";
    return kExitNumerical;
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const fer::ValidationReport report = fer::validate(g);
  if (!report.pass) {
    std::cerr << "gen: constructed triple failed validation\n";
    return kExitNumerical;
  }
  fer::save_generator_set(g, out_path);
  std::cout << "n " << g.n << " k " << g.k << " mode " << mode << "\n";
  std::cout << spectrum_line(g) << "\n";
  std::cout << "residual " << fmt(g.residual) << "\n";
  std::cout << "wall_clock_s " << fmt(elapsed) << "\n";
  std::cout << "wrote " << out_path << "\n";
  return kExitOk;
}

int cmd_validate(const std::string& in_path, const std::string& out_path, int trials,
                 std::uint64_t seed) {
  fer::GeneratorTriple g;
  try {
    g = fer::load_generator_set(in_path);
  } catch (const std::exception& e) {
    std::cerr << "validate: cannot load " << in_path << ": " << e.what() << "\n";
    return kExitUsage;
  }

  fer::AuditReport all = fer::validation_as_audit(fer::validate(g));
  const fer::AuditReport props = fer::run_property_audit(g, trials, seed);
  all.rows.insert(all.rows.end(), props.rows.begin(), props.rows.end());
  all.pass = all.pass && props.pass;

  const std::string csv = fer::audit_to_csv(all);
  if (!out_path.empty()) write_atomic(out_path, csv);
  std::cout << csv;
  std::cout << (all.pass ? "overall PASS\n" : "overall FAIL\n");
  return all.pass ? kExitOk : kExitNumerical;
}

int cmd_toy_regress(const std::string& arms_csv, const std::string& seeds_csv,
                    const std::string& out_path, std::uint64_t gen_seed) {
  std::vector<fer::ToyArm> arms;
  for (const std::string& name : split_list(arms_csv)) {
    fer::ToyArm arm;
    if (!fer::toy_arm_from_name(name, &arm)) {
      std::cerr << "toy-regress: unknown arm '" << name
                << "' (valid: dim3, dim3x2-repeat, 3+5-lowfreq, 3+5-maxfreq, "
                   "3+5+7-maxfreq)\n";
      return kExitUsage;
    }
    arms.push_back(arm);
  }
  std::vector<std::uint64_t> seeds;
  for (const std::string& s : split_list(seeds_csv)) {
    try {
      seeds.push_back(std::stoull(s));
    } catch (...) {
      std::cerr << "toy-regress: bad seed '" << s << "'\n";
      return kExitUsage;
    }
  }
  if (arms.empty() || seeds.empty()) {
    std::cerr << "toy-regress: need at least one arm and one seed\n";
    return kExitUsage;
  }

  const fer::ToyGenerators gens = fer::ToyGenerators::build(gen_seed);
  std::ostringstream csv;
  csv << "arm,seed,mse\n";
  std::map<std::pair<std::string, std::uint64_t>, double> table;
  try {
    for (const fer::ToyArm arm : arms) {
      for (const std::uint64_t seed : seeds) {
        fer::ToyRegressionConfig cfg;
        cfg.arm = arm;
        cfg.seed = seed;
        const fer::ToyRegressionResult res = fer::toy_regression_train(cfg, gens);
        csv << fer::toy_arm_name(arm) << "," << seed << "," << fmt(res.final_mse)
            << "\n";
        table[{fer::toy_arm_name(arm), seed}] = res.final_mse;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "toy-regress: " << e.what() << "\n";
    return kExitNumerical;
  }

  if (!out_path.empty()) write_atomic(out_path, csv.str());
  std::cout << csv.str();

  // Majority-ordering verdicts where both arms were run.
  auto verdict = [&](const char* hi, const char* lo, const char* label) {
    int wins = 0, total = 0;
    for (const std::uint64_t seed : seeds) {
      auto a = table.find({hi, seed});
      auto b = table.find({lo, seed});
      if (a == table.end() || b == table.end()) return;
      ++total;
      if (a->second <= b->second) ++wins;
    }
    std::cout << label << ": " << wins << "/" << total << " seeds -> "
              << (2 * wins >= total + 1 || wins == total ? "PASS" : "FAIL") << "\n";
  };
  verdict("3+5-maxfreq", "3+5-lowfreq", "maxfreq < lowfreq");
  verdict("3+5+7-maxfreq", "3+5-maxfreq", "3+5+7 <= 3+5");
  return kExitOk;
}

int cmd_register(const std::string& case_name, int trials, std::uint64_t seed,
                 const std::string& out_path) {
  fer::RegistrationCase mode;
  if (case_name == "copy")
    mode = fer::RegistrationCase::kCopy;
  else if (case_name == "distinct")
    mode = fer::RegistrationCase::kDistinct;
  else if (case_name == "density")
    mode = fer::RegistrationCase::kDensity;
  else {
    std::cerr << "register: --case must be copy, distinct or density\n";
    return kExitUsage;
  }
  if (trials < 1) {
    std::cerr << "register: --trials must be >= 1\n";
    return kExitUsage;
  }

  try {
    fer::FeatureConfig cfg;
    cfg.generators = {canonical3(), fer::construct_generators(5, 1234)};
    const fer::EncoderParams params = fer::EncoderParams::standard(8, 77);

    std::ostringstream csv;
    csv << "case,seed,chamfer,rotation_error_deg,residual,iters\n";
    double max_chamfer = 0.0;
    for (int t = 0; t < trials; ++t) {
      const fer::RegistrationTrial row =
          fer::run_registration_trial(mode, seed, t, cfg, params);
      csv << case_name << "," << seed << "," << fmt(row.chamfer_after) << ","
          << fmt(row.rotation_error_deg) << "," << fmt(row.residual) << ","
          << row.iters << "\n";
      max_chamfer = std::max(max_chamfer, row.chamfer_after);
    }
    if (!out_path.empty()) write_atomic(out_path, csv.str());
    std::cout << csv.str();
    std::cout << "max_chamfer " << fmt(max_chamfer) << "\n";
    if (mode == fer::RegistrationCase::kCopy)
      std::cout << "copy_chamfer_below_1e-6 "
                << (max_chamfer < 1e-6 ? "PASS" : "FAIL") << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "register: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"frequency-controlled SO(3)-equivariant feature toolkit"};
  app.require_subcommand(1);

  // Optional cap on internal parallelism; execution is currently
  // single-threaded, so any positive value is honored trivially.
  if (const char* threads = std::getenv("FER_SO3_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(threads, &end, 10);
    if (end == threads || v < 1) {
      std::cerr << "warning: ignoring invalid FER_SO3_THREADS='" << threads << "'\n";
    }
  }

  // gen
  auto* gen = app.add_subcommand("gen", "construct a generator triple");
  int gen_n = 5;
  std::uint64_t gen_seed = 1;
  std::string gen_mode = "max-freq";
  std::string gen_out = "generators.txt";
  gen->add_option("--n", gen_n, "feature dimension (odd, >= 3)")->required();
  gen->add_option("--seed", gen_seed, "construction seed");
  gen->add_option("--mode", gen_mode, "max-freq or low-freq");
  gen->add_option("--out", gen_out, "output path");

  // validate
  auto* val = app.add_subcommand("validate", "validate a generator file and audit D");
  std::string val_in;
  std::string val_out;
  int val_trials = 1000;
  std::uint64_t val_seed = 9001;
  val->add_option("--in", val_in, "generator file")->required();
  val->add_option("--out", val_out, "audit CSV path (also printed)");
  val->add_option("--trials", val_trials, "Monte-Carlo trials per property");
  val->add_option("--audit-seed", val_seed, "Monte-Carlo seed");

  // toy-regress
  auto* toy = app.add_subcommand("toy-regress", "spherical-shape regression arms");
  std::string toy_arms = "dim3,dim3x2-repeat,3+5-lowfreq,3+5-maxfreq,3+5+7-maxfreq";
  std::string toy_seeds = "1,2,3,4,5";
  std::string toy_out = "toy_regression.csv";
  std::uint64_t toy_gen_seed = 99;
  toy->add_option("--arms", toy_arms, "comma-separated arm names");
  toy->add_option("--seeds", toy_seeds, "comma-separated training seeds");
  toy->add_option("--out", toy_out, "output CSV");
  toy->add_option("--gen-seed", toy_gen_seed, "generator-bank seed");

  // register
  auto* reg = app.add_subcommand("register", "latent-space registration harness");
  std::string reg_case = "copy";
  int reg_trials = 20;
  std::uint64_t reg_seed = 5;
  std::string reg_out = "registration.csv";
  reg->add_option("--case", reg_case, "copy, distinct or density");
  reg->add_option("--trials", reg_trials, "number of trials");
  reg->add_option("--seed", reg_seed, "harness seed");
  reg->add_option("--out", reg_out, "output CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(gen_n, gen_seed, gen_mode, gen_out);
    if (val->parsed()) return cmd_validate(val_in, val_out, val_trials, val_seed);
    if (toy->parsed()) return cmd_toy_regress(toy_arms, toy_seeds, toy_out, toy_gen_seed);
    if (reg->parsed()) return cmd_register(reg_case, reg_trials, reg_seed, reg_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
