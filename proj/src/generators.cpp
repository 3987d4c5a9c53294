#include "fer/generators.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fer {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

const std::complex<double> kI(0.0, 1.0);

// Eigenpairs of a real skew-symmetric M through the Hermitian matrix iM:
// real eigenvalues mu, and M v = (-i mu) v. Columns of the returned basis
// are ordered so that the imaginary parts -mu ascend.
void skew_eigs(const MatrixXd& m, VectorXd* imag_parts, MatrixXcd* vectors) {
  const int n = static_cast<int>(m.rows());
  MatrixXcd h = kI * m.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("skew_eigs: eigendecomposition failed");
  // mu ascending => imag(lambda) = -mu descending; reverse.
  imag_parts->resize(n);
  vectors->resize(n, n);
  for (int j = 0; j < n; ++j) {
    (*imag_parts)(j) = -es.eigenvalues()(n - 1 - j);
    vectors->col(j) = es.eigenvectors().col(n - 1 - j);
  }
}

// Rotate the phase of v so its largest-|.| component is real positive.
// Returns the achieved imaginary residue.
double realify(VectorXcd* v) {
  int imax = 0;
  v->cwiseAbs().maxCoeff(&imax);
  std::complex<double> pivot = (*v)(imax);
  if (std::abs(pivot) < 1e-300) return 1.0;
  *v *= std::conj(pivot) / std::abs(pivot);
  double residue = v->imag().norm();
  return residue;
}

void canonicalize_sign(VectorXd* v) {
  int imax = 0;
  v->cwiseAbs().maxCoeff(&imax);
  if ((*v)(imax) < 0) *v = -(*v);
}

MatrixXd kron(const MatrixXd& a, const MatrixXd& b) {
  MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

VectorXd vec(const MatrixXd& m) {
  return Eigen::Map<const VectorXd>(m.data(), m.size());
}

MatrixXd unvec(const VectorXd& v, int n) {
  return Eigen::Map<const MatrixXd>(v.data(), n, n);
}

MatrixXd commutator(const MatrixXd& a, const MatrixXd& b) {
  return a * b - b * a;
}

VectorXd kernel_vector(const MatrixXd& j3, double tol, int* null_dim) {
  VectorXd imag_parts;
  MatrixXcd vectors;
  skew_eigs(j3, &imag_parts, &vectors);
  int count = 0, at = -1;
  for (int j = 0; j < imag_parts.size(); ++j) {
    if (std::abs(imag_parts(j)) <= tol) {
      ++count;
      at = j;
    }
  }
  if (null_dim) *null_dim = count;
  if (count != 1) return VectorXd();
  VectorXcd v = vectors.col(at);
  if (realify(&v) > 1e-8)
    throw std::runtime_error("kernel_vector: zero eigenvector is not realizable");
  VectorXd e = v.real();
  e.normalize();
  canonicalize_sign(&e);
  return e;
}

void check_expected(std::vector<ValidationCheck>* checks, const std::string& name,
                    double measured, double tolerance) {
  checks->push_back({name, measured, tolerance, measured <= tolerance});
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_matrix(std::ostringstream& out, const std::string& name, const MatrixXd& m) {
  out << name << "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << " ";
      out << format_double(m(i, j));
    }
    out << "\n";
  }
}

}  // namespace

VectorXd target_spectrum(int n, int k) {
  if (n < 1 || k < 0 || 2 * k > n - 1)
    throw std::invalid_argument("target_spectrum: need 0 <= 2k <= n-1");
  VectorXd s(n);
  int at = 0;
  for (int m = -k; m < 0; ++m) s(at++) = m;
  for (int z = 0; z < n - 2 * k; ++z) s(at++) = 0;
  for (int m = 1; m <= k; ++m) s(at++) = m;
  return s;
}

VectorXd skew_spectrum(const MatrixXd& m) {
  VectorXd imag_parts;
  MatrixXcd vectors;
  skew_eigs(m, &imag_parts, &vectors);
  return imag_parts;
}

MatrixXd sample_j3(int n, Rng& rng) {
  if (n < 3 || n % 2 == 0)
    throw std::invalid_argument("sample_j3: n must be odd and >= 3");
  const int k = (n - 1) / 2;
  const VectorXd target = target_spectrum(n, k);

  std::string last_error;
  for (int attempt = 0; attempt < 10; ++attempt) {
    MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = rng.normal();
    MatrixXd j0 = a - a.transpose();

    VectorXd imag_parts;
    MatrixXcd vectors;
    skew_eigs(j0, &imag_parts, &vectors);

    // Keep eigenvectors, replace eigenvalues by the ladder. Realness needs
    // conjugate pairing: the vector at mirror position n-1-p must be the
    // conjugate of the one at p, and the middle (zero) vector must be real.
    MatrixXcd basis(n, n);
    bool ok = true;
    for (int p = 0; p < k; ++p) {
      basis.col(p) = vectors.col(p);
      basis.col(n - 1 - p) = vectors.col(p).conjugate();
    }
    VectorXcd mid = vectors.col(k);
    if (realify(&mid) > 1e-8) {
      last_error = "zero eigenvector not realizable (degenerate kernel)";
      ok = false;
    }
    basis.col(k) = mid;

    if (ok) {
      MatrixXcd rebuilt = MatrixXcd::Zero(n, n);
      for (int p = 0; p < n; ++p)
        rebuilt += (kI * target(p)) * basis.col(p) * basis.col(p).adjoint();
      MatrixXd j3 = rebuilt.real();
      j3 = 0.5 * (j3 - j3.transpose().eval());  // kill imaginary dust

      const VectorXd got = skew_spectrum(j3);
      if ((got - target).cwiseAbs().maxCoeff() <= 1e-8) return j3;
      last_error = "reassembled spectrum off target (near-degenerate draw)";
    }
  }
  throw std::runtime_error("sample_j3: no valid draw in 10 attempts: " + last_error);
}

MatrixXd constraint_matrix(const MatrixXd& j3) {
  const int n = static_cast<int>(j3.rows());
  if (j3.cols() != n) throw std::invalid_argument("constraint_matrix: square input required");
  const int n2 = n * n;
  const MatrixXd id = MatrixXd::Identity(n, n);
  const MatrixXd id2 = MatrixXd::Identity(n2, n2);

  // vec([J3, X]) = (I (x) J3 - J3^T (x) I) vec(X)
  const MatrixXd ad3 = kron(id, j3) - kron(j3.transpose(), id);

  // vec(X^T) = K vec(X)
  MatrixXd perm = MatrixXd::Zero(n2, n2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) perm(j * n + i, i * n + j) = 1.0;

  MatrixXd a = MatrixXd::Zero(3 * n2, 2 * n2);
  // [J3, J1] - J2 = 0
  a.block(0, 0, n2, n2) = ad3;
  a.block(0, n2, n2, n2) = -id2;
  // J1 + [J3, J2] = 0   (i.e. [J2, J3] = J1)
  a.block(n2, 0, n2, n2) = id2;
  a.block(n2, n2, n2, n2) = ad3;
  // J1 + J1^T = 0
  a.block(2 * n2, 0, n2, n2) = id2 + perm;
  return a;
}

MatrixXd nullspace_basis(const MatrixXd& a, double rel_tol) {
  if (!a.allFinite()) throw std::invalid_argument("nullspace_basis: non-finite input");
  // JacobiSVD: BDCSVD in Eigen 3.4.0 can assert on some well-formed inputs.
  Eigen::JacobiSVD<MatrixXd> svd(a, Eigen::ComputeFullV);
  const VectorXd& sing = svd.singularValues();
  const double smax = sing.size() ? sing(0) : 0.0;
  const Eigen::Index cols = a.cols();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sing.size(); ++i)
    if (sing(i) > rel_tol * smax) ++rank;
  const Eigen::Index nullity = cols - rank;
  if (nullity <= 0)
    throw std::runtime_error("nullspace_basis: no feasible J1,J2 subspace (empty nullspace)");
  return svd.matrixV().rightCols(nullity);
}

GeneratorTriple construct_generators(int n, std::uint64_t seed, CemConfig cem_cfg) {
  if (n < 3 || n % 2 == 0)
    throw std::invalid_argument(
        "construct_generators: n must be odd and >= 3 (even n leaves the "
        "zero-eigenvector anchor ambiguous)");
  const int k = (n - 1) / 2;

  double best_residual = std::numeric_limits<double>::infinity();
  std::string note;
  for (int attempt = 0; attempt < 3; ++attempt) {
    Rng rng(derive_seed(seed, attempt));
    MatrixXd j3;
    MatrixXd basis;
    try {
      j3 = sample_j3(n, rng);
      basis = nullspace_basis(constraint_matrix(j3));
    } catch (const std::exception& e) {
      note = e.what();
      continue;
    }
    const int n2 = n * n;
    const int m = static_cast<int>(basis.cols());

    auto objective = [&](const VectorXd& alpha) {
      const VectorXd v = basis * alpha;
      const MatrixXd j1 = unvec(v.head(n2), n);
      const MatrixXd j2 = unvec(v.tail(n2), n);
      return (commutator(j1, j2) - j3).squaredNorm();
    };

    CemConfig cfg = cem_cfg;
    cfg.dim = m;
    if (!cem_cfg.init_mean.size()) cfg.init_mean = VectorXd::Zero(m);
    if (!cem_cfg.init_std.size()) {
      // Any exact triple has ||J_i||_F^2 = k(k+1)(2k+1)/3 (the ladder), so
      // solutions live on the shell ||alpha|| = sqrt(||J1||_F^2 + ||J2||_F^2)
      // in the orthonormal basis coordinates; scale the cloud to reach it.
      const double shell = std::sqrt(2.0 * k * (k + 1) * (2 * k + 1) / 3.0);
      cfg.init_std = VectorXd::Constant(m, std::max(1.0, shell / std::sqrt(double(m))));
    }
    if (cem_cfg.population == CemConfig{}.population)
      cfg.population = std::max(200, 40 * m);
    if (cem_cfg.elite_count == CemConfig{}.elite_count)
      cfg.elite_count = cfg.population / 10;
    // The periodicity bound ||exp(2 pi J_i) - I|| <= 1e-8 needs eigenvalue
    // deviations ~1e-9, i.e. a squared-Frobenius loss near 1e-18; keep the
    // sampling floor and stopping rule below that scale.
    if (cfg.tol <= 0.0) cfg.tol = 1e-19;
    if (cem_cfg.std_floor == CemConfig{}.std_floor) cfg.std_floor = 1e-12;
    if (cem_cfg.max_iters == CemConfig{}.max_iters) cfg.max_iters = 2000;
    cfg.seed = derive_seed(seed, 100 + attempt);

    const CemResult res = cem_minimize(objective, cfg);
    const VectorXd v = basis * res.solution;
    MatrixXd j1 = unvec(v.head(n2), n);
    MatrixXd j2 = unvec(v.tail(n2), n);
    j1 = 0.5 * (j1 - j1.transpose().eval());
    j2 = 0.5 * (j2 - j2.transpose().eval());

    GeneratorTriple g;
    g.n = n;
    g.k = k;
    g.j1 = j1;
    g.j2 = j2;
    g.j3 = j3;
    g.residual = (commutator(j1, j2) - j3).norm();
    g.seed = seed;
    int null_dim = 0;
    g.e_hat = kernel_vector(j3, 0.5, &null_dim);
    if (null_dim != 1) {
      note = "J3 kernel dimension != 1";
      continue;
    }
    best_residual = std::min(best_residual, g.residual);
    if (validate(g).pass) return g;
    note = "validation failed at residual " + format_double(g.residual);
  }
  throw std::runtime_error("construct_generators: CEM failed for n=" + std::to_string(n) +
                           " (best residual " + format_double(best_residual) + "; " + note +
                           ")");
}

GeneratorTriple construct_low_freq(int n, std::uint64_t seed) {
  if (n < 3 || n % 2 == 0)
    throw std::invalid_argument("construct_low_freq: n must be odd and >= 3");
  Rng rng(derive_seed(seed, 0));
  // Orthonormal frame a1, a2, a3 from a random Gaussian n x 3 block.
  MatrixXd raw(n, 3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < 3; ++j) raw(i, j) = rng.normal();
  Eigen::HouseholderQR<MatrixXd> qr(raw);
  MatrixXd q = qr.householderQ() * MatrixXd::Identity(n, 3);
  const VectorXd a1 = q.col(0), a2 = q.col(1), a3 = q.col(2);

  GeneratorTriple g;
  g.n = n;
  g.k = 1;
  g.j1 = a2 * a1.transpose() - a1 * a2.transpose();
  g.j2 = a3 * a2.transpose() - a2 * a3.transpose();
  g.j3 = a1 * a3.transpose() - a3 * a1.transpose();
  g.residual = (commutator(g.j1, g.j2) - g.j3).norm();
  g.seed = seed;
  // J3 annihilates everything orthogonal to span{a1, a3}; a2 is the anchor.
  g.e_hat = a2;
  canonicalize_sign(&g.e_hat);
  return g;
}

ValidationReport validate(const GeneratorTriple& g, const ValidationTolerances& tol) {
  ValidationReport report;
  auto* c = &report.checks;

  check_expected(c, "skew_j1", (g.j1 + g.j1.transpose()).norm(), tol.skew);
  check_expected(c, "skew_j2", (g.j2 + g.j2.transpose()).norm(), tol.skew);
  check_expected(c, "skew_j3", (g.j3 + g.j3.transpose()).norm(), tol.skew);

  check_expected(c, "comm_j3j1_eq_j2", (commutator(g.j3, g.j1) - g.j2).norm(),
                 tol.commutator);
  check_expected(c, "comm_j2j3_eq_j1", (commutator(g.j2, g.j3) - g.j1).norm(),
                 tol.commutator);
  check_expected(c, "comm_j1j2_eq_j3", (commutator(g.j1, g.j2) - g.j3).norm(),
                 tol.residual);

  const VectorXd target = target_spectrum(g.n, g.k);
  const MatrixXd* js[3] = {&g.j1, &g.j2, &g.j3};
  VectorXd spectra[3];
  for (int i = 0; i < 3; ++i) {
    spectra[i] = skew_spectrum(*js[i]);
    check_expected(c, "spectrum_j" + std::to_string(i + 1),
                   (spectra[i] - target).cwiseAbs().maxCoeff(), tol.spectrum);
  }
  // Prop eigvalue_symm: the three spectra agree as multisets (all sorted).
  double share = 0.0;
  share = std::max(share, (spectra[0] - spectra[1]).cwiseAbs().maxCoeff());
  share = std::max(share, (spectra[1] - spectra[2]).cwiseAbs().maxCoeff());
  check_expected(c, "spectrum_shared", share, tol.spectrum);
  // Closure under negation.
  double neg = 0.0;
  for (int i = 0; i < 3; ++i) {
    const VectorXd flipped = (-spectra[i]).reverse();
    neg = std::max(neg, (spectra[i] - flipped).cwiseAbs().maxCoeff());
  }
  check_expected(c, "spectrum_negation_symmetric", neg, tol.spectrum);

  for (int i = 0; i < 3; ++i) {
    // exp(2 pi J) via the same eigen route used everywhere else.
    VectorXd imag_parts;
    MatrixXcd vectors;
    skew_eigs(*js[i], &imag_parts, &vectors);
    MatrixXcd e = MatrixXcd::Zero(g.n, g.n);
    for (int j = 0; j < g.n; ++j)
      e += std::exp(2.0 * M_PI * kI * imag_parts(j)) * vectors.col(j) *
           vectors.col(j).adjoint();
    check_expected(c, "periodicity_j" + std::to_string(i + 1),
                   (e - MatrixXcd::Identity(g.n, g.n)).norm(), tol.periodicity);
  }

  check_expected(c, "zero_eigvec", (g.j3 * g.e_hat).norm(), tol.zero_eigvec);
  check_expected(c, "e_hat_unit", std::abs(g.e_hat.norm() - 1.0), 1e-12);

  report.pass = std::all_of(c->begin(), c->end(),
                            [](const ValidationCheck& chk) { return chk.pass; });
  return report;
}

std::string serialize(const GeneratorTriple& g) {
  std::ostringstream out;
  out << "fer-generator-set\n";
  out << "version 1\n";
  out << "n " << g.n << "\n";
  out << "k " << g.k << "\n";
  out << "seed " << g.seed << "\n";
  out << "residual " << format_double(g.residual) << "\n";
  out << "e_hat\n";
  for (Eigen::Index i = 0; i < g.e_hat.size(); ++i) {
    if (i) out << " ";
    out << format_double(g.e_hat(i));
  }
  out << "\n";
  write_matrix(out, "J1", g.j1);
  write_matrix(out, "J2", g.j2);
  write_matrix(out, "J3", g.j3);
  return out.str();
}

namespace {

std::string next_line(std::istringstream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error(std::string("generator set parse: missing ") + what);
  return line;
}

MatrixXd read_matrix(std::istringstream& in, const std::string& name, int n) {
  const std::string header = next_line(in, name.c_str());
  if (header != name)
    throw std::runtime_error("generator set parse: expected '" + name + "', got '" +
                             header + "'");
  MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    std::istringstream row(next_line(in, name.c_str()));
    for (int j = 0; j < n; ++j) {
      if (!(row >> m(i, j)))
        throw std::runtime_error("generator set parse: short row in " + name);
    }
  }
  return m;
}

}  // namespace

GeneratorTriple parse_generator_set(const std::string& text) {
  std::istringstream in(text);
  if (next_line(in, "magic") != "fer-generator-set")
    throw std::runtime_error("generator set parse: bad magic line");

  GeneratorTriple g;
  std::string key;
  int version = 0;
  std::istringstream l1(next_line(in, "version"));
  if (!(l1 >> key >> version) || key != "version" || version != 1)
    throw std::runtime_error("generator set parse: unsupported version");
  std::istringstream l2(next_line(in, "n"));
  if (!(l2 >> key >> g.n) || key != "n" || g.n < 1)
    throw std::runtime_error("generator set parse: bad n");
  std::istringstream l3(next_line(in, "k"));
  if (!(l3 >> key >> g.k) || key != "k" || g.k < 0)
    throw std::runtime_error("generator set parse: bad k");
  std::istringstream l4(next_line(in, "seed"));
  if (!(l4 >> key >> g.seed) || key != "seed")
    throw std::runtime_error("generator set parse: bad seed");
  std::istringstream l5(next_line(in, "residual"));
  if (!(l5 >> key >> g.residual) || key != "residual")
    throw std::runtime_error("generator set parse: bad residual");

  if (next_line(in, "e_hat") != "e_hat")
    throw std::runtime_error("generator set parse: expected e_hat");
  g.e_hat.resize(g.n);
  {
    std::istringstream row(next_line(in, "e_hat"));
    for (int i = 0; i < g.n; ++i)
      if (!(row >> g.e_hat(i)))
        throw std::runtime_error("generator set parse: short e_hat row");
  }
  g.j1 = read_matrix(in, "J1", g.n);
  g.j2 = read_matrix(in, "J2", g.n);
  g.j3 = read_matrix(in, "J3", g.n);
  return g;
}

void save_generator_set(const GeneratorTriple& g, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out << serialize(g);
  }
  std::filesystem::rename(tmp, path);
}

GeneratorTriple load_generator_set(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_generator_set(buf.str());
}

}  // namespace fer
