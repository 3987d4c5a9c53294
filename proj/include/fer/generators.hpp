#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "fer/cem.hpp"
#include "fer/rng.hpp"

namespace fer {

// Skew-symmetric basis triple (J1, J2, J3) in R^{n x n} with the rotation
// algebra bracket [J1,J2]=J3 (and cyclic), plus the unit kernel vector of J3
// used as the feature anchor. k is the largest eigenvalue coefficient: the
// spectrum of every J_i is {-ki,...,-i, 0 (x n-2k), i, ..., ki}.
struct GeneratorTriple {
  int n = 0;
  int k = 0;
  Eigen::MatrixXd j1, j2, j3;
  Eigen::VectorXd e_hat;
  double residual = 0.0;  // ||[J1,J2] - J3||_F
  std::uint64_t seed = 0;
};

struct ValidationTolerances {
  double skew = 1e-10;
  double commutator = 1e-8;  // [J3,J1]=J2 and [J2,J3]=J1, exact by construction
  double residual = 1e-4;    // [J1,J2]=J3, reached by CEM
  double spectrum = 1e-6;
  double periodicity = 1e-8;  // ||exp(2 pi J_i) - I||_F
  double zero_eigvec = 1e-9;
};

struct ValidationCheck {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool pass = false;
};

// Imaginary parts of the target spectrum for a triple of size n with top
// frequency k, sorted ascending: -k..-1, 0 repeated n-2k times, 1..k.
Eigen::VectorXd target_spectrum(int n, int k);

// Sorted imaginary parts of the eigenvalues of a real skew-symmetric matrix.
Eigen::VectorXd skew_spectrum(const Eigen::MatrixXd& m);

// Random skew-symmetric J3 with the exact max-frequency ladder: draw
// A - A^T, eigendecompose, replace the eigenvalues by the ladder while
// keeping the eigenvectors, and re-project to real skew-symmetric.
// Degenerate draws are resampled (up to 10 times).
Eigen::MatrixXd sample_j3(int n, Rng& rng);

// Linear system A [vec(J1); vec(J2)] = 0 encoding [J3,J1]=J2, [J2,J3]=J1
// and J1+J1^T=0 through Kronecker blocks; A is 3n^2 x 2n^2 (column-major vec).
Eigen::MatrixXd constraint_matrix(const Eigen::MatrixXd& j3);

// Orthonormal basis of the right nullspace of A; a singular value counts as
// zero when sigma <= rel_tol * sigma_max. Throws if the nullspace is empty.
Eigen::MatrixXd nullspace_basis(const Eigen::MatrixXd& a, double rel_tol = 1e-10);

// Algorithm: sample J3, reduce (J1,J2) to the nullspace coordinates, then
// CEM-minimize ||[J1,J2]-J3||_F^2 over those coordinates. Retries with a
// fresh J3 (3 draws) before giving up. cem_cfg.dim is filled in from the
// nullity; pass {} for defaults.
GeneratorTriple construct_generators(int n, std::uint64_t seed,
                                     CemConfig cem_cfg = CemConfig{});

// Rank-2 low-frequency triple J1 = a2 a1^T - a1 a2^T (and cyclic) from a
// random orthonormal frame; spectrum {-i, 0,..., 0, i} so k = 1.
GeneratorTriple construct_low_freq(int n, std::uint64_t seed);

// Checks every GeneratorTriple invariant; failures become report rows.
ValidationReport validate(const GeneratorTriple& g,
                          const ValidationTolerances& tol = ValidationTolerances{});

// Canonical text serialization (17 significant digits). parse(serialize(g))
// then serialize again is byte-identical.
std::string serialize(const GeneratorTriple& g);
GeneratorTriple parse_generator_set(const std::string& text);

void save_generator_set(const GeneratorTriple& g, const std::string& path);
GeneratorTriple load_generator_set(const std::string& path);

}  // namespace fer
