#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fer/audit.hpp"
#include "fer/cem.hpp"
#include "fer/features.hpp"
#include "fer/generators.hpp"
#include "fer/highdim.hpp"
#include "fer/layers.hpp"
#include "fer/registration.hpp"
#include "fer/so3.hpp"

namespace py = pybind11;
using namespace fer;

namespace {

GeneratorTriple canonical_f_triple() {
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

FeatureConfig make_config(const std::vector<GeneratorTriple>& gens) {
  FeatureConfig cfg;
  cfg.generators = gens;
  cfg.check();
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "n-dimensional rotation operators and frequency-controlled "
            "SO(3)-equivariant features";

  // --- so3 -----------------------------------------------------------------
  m.def("exp_so3", &exp_so3, py::arg("w"));
  m.def("log_so3", &log_so3, py::arg("r"));
  m.def("rot_from_z", &rot_from_z, py::arg("u_hat"));
  m.def("is_rotation", &is_rotation, py::arg("r"), py::arg("tol") = 1e-9);
  m.def("rotation_distance", &rotation_distance, py::arg("a"), py::arg("b"));
  m.def(
      "random_rotation",
      [](std::uint64_t seed) {
        Rng rng(seed);
        return random_rotation(rng);
      },
      py::arg("seed"));
  m.def("f_basis", [] { return std::vector<Mat3>{f1(), f2(), f3()}; });

  // --- generators ------------------------------------------------------------
  py::class_<GeneratorTriple>(m, "GeneratorTriple")
      .def_readonly("n", &GeneratorTriple::n)
      .def_readonly("k", &GeneratorTriple::k)
      .def_readonly("j1", &GeneratorTriple::j1)
      .def_readonly("j2", &GeneratorTriple::j2)
      .def_readonly("j3", &GeneratorTriple::j3)
      .def_readonly("e_hat", &GeneratorTriple::e_hat)
      .def_readonly("residual", &GeneratorTriple::residual)
      .def_readonly("seed", &GeneratorTriple::seed)
      .def("__repr__", [](const GeneratorTriple& g) {
        return "GeneratorTriple(n=" + std::to_string(g.n) +
               ", k=" + std::to_string(g.k) + ")";
      });

  py::class_<ValidationCheck>(m, "ValidationCheck")
      .def_readonly("name", &ValidationCheck::name)
      .def_readonly("measured", &ValidationCheck::measured)
      .def_readonly("tolerance", &ValidationCheck::tolerance)
      .def_readonly("passed", &ValidationCheck::pass);
  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("checks", &ValidationReport::checks)
      .def_readonly("passed", &ValidationReport::pass);

  m.def(
      "construct_generators",
      [](int n, std::uint64_t seed) { return construct_generators(n, seed); },
      py::arg("n"), py::arg("seed"));
  m.def("construct_low_freq", &construct_low_freq, py::arg("n"), py::arg("seed"));
  m.def("canonical_f_triple", &canonical_f_triple);
  m.def(
      "validate",
      [](const GeneratorTriple& g) { return validate(g); },
      py::arg("triple"));
  m.def("save_generator_set", &save_generator_set, py::arg("triple"), py::arg("path"));
  m.def("load_generator_set", &load_generator_set, py::arg("path"));
  m.def("sample_j3",
        [](int n, std::uint64_t seed) {
          Rng rng(seed);
          return sample_j3(n, rng);
        },
        py::arg("n"), py::arg("seed"));
  m.def("constraint_matrix", &constraint_matrix, py::arg("j3"));
  m.def("nullspace_basis", &nullspace_basis, py::arg("a"), py::arg("rel_tol") = 1e-10);

  // --- highdim -----------------------------------------------------------------
  m.def("exp_skew", &exp_skew, py::arg("m"));
  m.def(
      "d_of",
      [](const Mat3& r, const GeneratorTriple& g) { return d_of(r, g).d; },
      py::arg("r"), py::arg("triple"));
  m.def("check_so_n", &check_so_n, py::arg("m"), py::arg("tol") = 1e-9);
  m.def(
      "sinusoid_eigenvalues",
      [](const GeneratorTriple& g, const Vec3& w_hat) {
        return sinusoid_decompose(g, w_hat).eigenvalues_imag;
      },
      py::arg("triple"), py::arg("w_hat"));

  // --- features -------------------------------------------------------------------
  m.def("zero_eigenvector", &zero_eigenvector, py::arg("j3"));
  m.def(
      "psi",
      [](const Vec3& u, const GeneratorTriple& g) { return psi(u, g); },
      py::arg("u"), py::arg("triple"));
  m.def(
      "psi_multi",
      [](const Vec3& u, const std::vector<GeneratorTriple>& gens) {
        return psi_multi(u, make_config(gens)).values;
      },
      py::arg("u"), py::arg("triples"));
  m.def(
      "d_multi",
      [](const Mat3& r, const std::vector<GeneratorTriple>& gens) {
        return d_multi(r, make_config(gens));
      },
      py::arg("r"), py::arg("triples"));
  m.def(
      "frequency_sweep_energy",
      [](const GeneratorTriple& g, const Vec3& x, const Vec3& w_hat, int samples) {
        return frequency_sweep(g, x, w_hat, samples).bin_energy;
      },
      py::arg("triple"), py::arg("x"), py::arg("w_hat"), py::arg("samples") = 128);

  // --- cem ----------------------------------------------------------------------
  py::class_<CemConfig>(m, "CemConfig")
      .def(py::init<>())
      .def_readwrite("dim", &CemConfig::dim)
      .def_readwrite("population", &CemConfig::population)
      .def_readwrite("elite_count", &CemConfig::elite_count)
      .def_readwrite("max_iters", &CemConfig::max_iters)
      .def_readwrite("init_mean", &CemConfig::init_mean)
      .def_readwrite("init_std", &CemConfig::init_std)
      .def_readwrite("std_floor", &CemConfig::std_floor)
      .def_readwrite("tol", &CemConfig::tol)
      .def_readwrite("seed", &CemConfig::seed);
  py::class_<CemResult>(m, "CemResult")
      .def_readonly("solution", &CemResult::solution)
      .def_readonly("loss", &CemResult::loss)
      .def_readonly("iters", &CemResult::iters)
      .def_readonly("converged", &CemResult::converged);
  m.def(
      "cem_minimize",
      [](const std::function<double(const Eigen::VectorXd&)>& objective,
         const CemConfig& cfg) { return cem_minimize(objective, cfg); },
      py::arg("objective"), py::arg("config"));

  // --- registration -----------------------------------------------------------------
  m.def("procrustes", &procrustes, py::arg("p"), py::arg("q"));
  m.def("chamfer", &chamfer, py::arg("p"), py::arg("q"));

  py::class_<EncoderParams>(m, "EncoderParams")
      .def_static("standard", &EncoderParams::standard, py::arg("channels"),
                  py::arg("seed"));
  py::class_<LatentCode>(m, "LatentCode").def_readonly("z", &LatentCode::z);
  py::class_<RegistrationResult>(m, "RegistrationResult")
      .def_readonly("omega", &RegistrationResult::omega)
      .def_readonly("rotation", &RegistrationResult::rotation)
      .def_readonly("residual", &RegistrationResult::residual)
      .def_readonly("converged", &RegistrationResult::converged)
      .def_readonly("iters", &RegistrationResult::iters);
  m.def(
      "encode",
      [](const PointCloud& p, const std::vector<GeneratorTriple>& gens,
         const EncoderParams& params) { return encode(p, make_config(gens), params); },
      py::arg("points"), py::arg("triples"), py::arg("params"));
  m.def(
      "latent_register",
      [](const LatentCode& z1, const LatentCode& z2,
         const std::vector<GeneratorTriple>& gens, std::uint64_t seed) {
        CemConfig cem;
        cem.seed = seed;
        return latent_register(z1, z2, make_config(gens), cem);
      },
      py::arg("z1"), py::arg("z2"), py::arg("triples"), py::arg("seed") = 0);
  m.def(
      "make_registration_cloud",
      [](int points, std::uint64_t seed) {
        Rng rng(seed);
        return make_registration_cloud(points, rng);
      },
      py::arg("points"), py::arg("seed"));

  // --- toy regression ------------------------------------------------------------------
  m.def(
      "toy_regression_mse",
      [](const std::string& arm_name, std::uint64_t seed, std::uint64_t gen_seed) {
        ToyArm arm;
        if (!toy_arm_from_name(arm_name, &arm))
          throw std::invalid_argument("unknown toy arm: " + arm_name);
        ToyRegressionConfig cfg;
        cfg.arm = arm;
        cfg.seed = seed;
        return toy_regression_train(cfg, ToyGenerators::build(gen_seed)).final_mse;
      },
      py::arg("arm"), py::arg("seed"), py::arg("gen_seed") = 99);
}
