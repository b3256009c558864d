#include "pgfermi/pseudofermion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "pgfermi/fermion.hpp"

namespace pgfermi {

void CandidatePair::validate() const {
  check_degree(n);
  if (a.rows() != n + 1 || a.cols() != n + 1 || b.rows() != n + 1 || b.cols() != n + 1) {
    throw Error(ErrorCode::ShapeMismatch, "a and b must both be (n+1)x(n+1)");
  }
}

CandidatePair hermitian_pair(int n) {
  const FermionAlgebra alg = build_fermion(n);
  return {n, alg.A, alg.A.adjoint()};
}

ExampleKind parse_example_kind(const std::string& name) {
  if (name == "ex1") return ExampleKind::Ex1;
  if (name == "ex2") return ExampleKind::Ex2;
  if (name == "ex3") return ExampleKind::Ex3;
  throw Error(ErrorCode::InvalidParams, "unknown example family '" + name + "'");
}

const char* to_string(ExampleKind kind) {
  switch (kind) {
    case ExampleKind::Ex1: return "ex1";
    case ExampleKind::Ex2: return "ex2";
    case ExampleKind::Ex3: return "ex3";
  }
  return "unknown";
}

VerificationReport verify_pf_relation(const CandidatePair& pair, const Tolerance& tol) {
  pair.validate();
  VerificationReport report;
  const int n = pair.n;
  const Matrix zero = Matrix::Zero(n + 1, n + 1);
  report.add("pf_relation", "a b + b^n a^n = 1",
             pair.a * pair.b + matrix_power(pair.b, n) * matrix_power(pair.a, n),
             identity(n + 1), tol);
  report.add("nilpotency_a", "a^(n+1) = 0", matrix_power(pair.a, n + 1), zero, tol);
  report.add("nilpotency_b", "b^(n+1) = 0", matrix_power(pair.b, n + 1), zero, tol);
  return report;
}

bool is_hermitian_pair(const CandidatePair& pair, const Tolerance& tol) {
  return approx_equal(pair.b, pair.a.adjoint(), tol);
}

std::pair<Vector, Vector> find_vacua(const CandidatePair& pair, const Tolerance& tol) {
  pair.validate();
  Vector psi0 = nullspace_1d(pair.a, tol);
  Vector phi0 = nullspace_1d(pair.b.adjoint(), tol);
  const Scalar pairing = phi0.dot(psi0);  // <phi_0|psi_0>
  if (std::abs(pairing) <= tol.threshold(1.0)) {
    throw Error(ErrorCode::PairingSingular, "<phi_0|psi_0> vanishes");
  }
  phi0 /= std::conj(pairing);
  return {psi0, phi0};
}

Matrix pf_number_operator(const CandidatePair& pair) {
  const int dim = pair.dim();
  Matrix N = Matrix::Zero(dim, dim);
  Matrix up = Matrix::Identity(dim, dim);
  Matrix down = up;
  for (int k = 1; k <= pair.n; ++k) {
    up = up * pair.b;
    down = pair.a * down;
    N += up * down;
  }
  return N;
}

PseudoFermionSystem assemble_system(const CandidatePair& pair, std::vector<Vector> psi,
                                    std::vector<Vector> phi) {
  pair.validate();
  const int dim = pair.dim();
  if (static_cast<int>(psi.size()) != dim || static_cast<int>(phi.size()) != dim) {
    throw Error(ErrorCode::ShapeMismatch, "need n+1 basis vectors on each side");
  }
  PseudoFermionSystem sys;
  sys.pair = pair;
  sys.N_pf = pf_number_operator(pair);

  std::vector<double> level(dim);
  for (int k = 0; k < dim; ++k) {
    const Scalar norm = phi[k].dot(psi[k]);
    level[k] = std::abs(norm) > 0.0 ? (phi[k].dot(sys.N_pf * psi[k]) / norm).real() : 0.0;
  }
  std::vector<int> order(dim);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return level[x] < level[y]; });
  for (int k : order) {
    sys.psi.push_back(psi[k]);
    sys.phi.push_back(phi[k]);
  }

  sys.eta = Matrix::Zero(dim, dim);
  sys.eta_inv = Matrix::Zero(dim, dim);
  sys.P = Matrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    sys.eta += sys.phi[k] * sys.phi[k].adjoint();
    sys.eta_inv += sys.psi[k] * sys.psi[k].adjoint();
    sys.P += ((k % 2 == 0) ? 1.0 : -1.0) * sys.psi[k] * sys.phi[k].adjoint();
  }
  return sys;
}

double biorthogonality_defect(const PseudoFermionSystem& sys) {
  double worst = 0.0;
  for (int j = 0; j < sys.dim(); ++j) {
    for (int k = 0; k < sys.dim(); ++k) {
      const Scalar expected = (j == k) ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(sys.phi[j].dot(sys.psi[k]) - expected));
    }
  }
  return worst;
}

PseudoFermionSystem build_system(const CandidatePair& pair, const Tolerance& tol) {
  auto [psi0, phi0] = find_vacua(pair, tol);
  const int n = pair.n;
  std::vector<Vector> psi{psi0};
  std::vector<Vector> phi{phi0};
  const Matrix a_dag = pair.a.adjoint();
  for (int k = 1; k <= n; ++k) {
    psi.push_back(pair.b * psi.back());
    phi.push_back(a_dag * phi.back());
  }
  const Vector beyond = pair.b * psi.back();
  const double scale = std::max_element(psi.begin(), psi.end(), [](const auto& x, const auto& y) {
                         return max_abs(x) < max_abs(y);
                       })->cwiseAbs().maxCoeff();
  if (max_abs(beyond) > tol.threshold(scale)) {
    std::ostringstream os;
    os << "|b^(n+1) psi_0| = " << max_abs(beyond);
    throw Error(ErrorCode::TerminationFailure, os.str());
  }
  PseudoFermionSystem sys = assemble_system(pair, std::move(psi), std::move(phi));
  double offdiag = 0.0;
  for (int j = 0; j < sys.dim(); ++j) {
    for (int k = 0; k < sys.dim(); ++k) {
      if (j != k) offdiag = std::max(offdiag, std::abs(sys.phi[j].dot(sys.psi[k])));
    }
  }
  if (offdiag > tol.threshold(1.0)) {
    std::ostringstream os;
    os << "max |<phi_j|psi_k>|, j != k, is " << offdiag;
    throw Error(ErrorCode::BiorthogonalityFailure, os.str());
  }
  return sys;
}

double completeness_defect(const PseudoFermionSystem& sys) {
  Matrix sum = Matrix::Zero(sys.dim(), sys.dim());
  for (int k = 0; k < sys.dim(); ++k) sum += sys.psi[k] * sys.phi[k].adjoint();
  return max_abs(sum - identity(sys.dim()));
}

double pseudo_adjoint_defect(const PseudoFermionSystem& sys) {
  return max_abs(sys.pair.b - sys.eta_inv * sys.pair.a.adjoint() * sys.eta);
}

VerificationReport verify_system(const PseudoFermionSystem& sys, const Tolerance& tol) {
  VerificationReport report;
  const int n = sys.n();
  const int dim = sys.dim();
  const Matrix& a = sys.pair.a;
  const Matrix& b = sys.pair.b;
  const Matrix I = identity(dim);

  double raise = 0.0;
  double lower = 0.0;
  double number = 0.0;
  double grading = 0.0;
  double scale = 1.0;
  for (int k = 0; k <= n; ++k) {
    const Vector up = k < n ? Vector(sys.psi[k + 1]) : Vector(Vector::Zero(dim));
    const Vector down = k > 0 ? Vector(sys.psi[k - 1]) : Vector(Vector::Zero(dim));
    raise = std::max(raise, max_abs(b * sys.psi[k] - up));
    lower = std::max(lower, max_abs(a * sys.psi[k] - down));
    number = std::max(number, max_abs(sys.N_pf * sys.psi[k] - double(k) * sys.psi[k]));
    grading = std::max(grading,
                       max_abs(sys.P * sys.psi[k] - ((k % 2 == 0) ? 1.0 : -1.0) * sys.psi[k]));
    scale = std::max(scale, max_abs(sys.psi[k]));
  }
  report.add_residual("ladder_raising", "b|psi_k> = |psi_k+1>, b^(n+1)|psi_0> = 0", raise,
                      tol.threshold(scale * std::max(1.0, max_abs(b))));
  report.add_residual("ladder_lowering", "a|psi_k> = |psi_k-1>, a|psi_0> = 0", lower,
                      tol.threshold(scale * std::max(1.0, max_abs(a))));
  report.add_residual("dual_vacuum", "b^dag|phi_0> = 0", max_abs(b.adjoint() * sys.phi[0]),
                      tol.threshold(max_abs(sys.phi[0]) * std::max(1.0, max_abs(b))));
  report.add_residual("biorthonormality", "<phi_j|psi_k> = delta_jk", biorthogonality_defect(sys),
                      tol.threshold(1.0));
  report.add_residual("completeness", "sum_k |psi_k><phi_k| = 1", completeness_defect(sys),
                      tol.threshold(1.0));
  report.add("metric_inverse", "eta^-1 = sum_k |psi_k><psi_k|", sys.eta * sys.eta_inv, I, tol);
  report.add("pseudo_adjoint", "b = eta^-1 a^dag eta", sys.eta_inv * a.adjoint() * sys.eta, b,
             tol);
  report.add_residual("number_spectrum", "N_pf|psi_k> = k|psi_k>", number,
                      tol.threshold(n * scale));
  report.add("commutator_a_Npf", "[a, N_pf] = a", commutator(a, sys.N_pf), a, tol);
  report.add("commutator_b_Npf", "[b, N_pf] = -b", commutator(b, sys.N_pf), -b, tol);
  report.add("parity_square", "P^2 = 1", sys.P * sys.P, I, tol);
  report.add("parity_a", "P a P = -a", sys.P * a * sys.P, -a, tol);
  report.add("parity_b", "P b P = -b", sys.P * b * sys.P, -b, tol);
  report.add_residual("parity_grading", "P|psi_k> = (-1)^k|psi_k>", grading,
                      tol.threshold(scale));
  return report;
}

namespace {

void require_nonzero(Scalar value, const char* name) {
  if (value == Scalar{}) {
    throw Error(ErrorCode::InvalidParams, std::string(name) + " must be nonzero");
  }
}

}  // namespace

CandidatePair example_family(const ExampleParams& params) {
  require_nonzero(params.p, "p");
  switch (params.kind) {
    case ExampleKind::Ex1: {
      const Scalar al = params.alpha;
      const Scalar be = params.beta;
      require_nonzero(al, "alpha");
      if (al + be == Scalar{}) throw Error(ErrorCode::InvalidParams, "ex1 needs alpha != -beta");
      const Matrix A = build_fermion(2).A;
      const Matrix Ad = A.adjoint();
      CandidatePair pair;
      pair.n = 2;
      pair.a = al * Ad + be * Ad * Ad * A;
      pair.b = (1.0 / (al + be)) * A + (be / (al * (al + be))) * A * A * Ad;
      return pair;
    }
    case ExampleKind::Ex2: {
      const Scalar al = params.alpha;
      const Scalar be = params.beta;
      const Scalar ga = params.gamma;
      const Scalar de = params.delta;
      require_nonzero(al, "alpha");
      require_nonzero(be, "beta");
      require_nonzero(ga, "gamma");
      require_nonzero(de, "delta");
      CandidatePair pair;
      pair.n = 3;
      pair.a = Matrix::Zero(4, 4);
      pair.a(0, 1) = al;
      pair.a(2, 0) = de * ga;
      pair.a(2, 2) = be / de;
      pair.a(2, 3) = -be / (de * de);
      pair.a(3, 2) = be;
      pair.a(3, 3) = -be / de;
      pair.b = Matrix::Zero(4, 4);
      pair.b(0, 2) = 1.0 / (ga * de);
      pair.b(0, 3) = -1.0 / (ga * de * de);
      pair.b(1, 0) = 1.0 / al;
      pair.b(2, 3) = 1.0 / be;
      return pair;
    }
    case ExampleKind::Ex3: {
      const int n = static_cast<int>(params.alphas.size());
      if (n < 2) throw Error(ErrorCode::InvalidParams, "ex3 needs n >= 2 alphas");
      check_degree(n);
      CandidatePair pair;
      pair.n = n;
      pair.a = Matrix::Zero(n + 1, n + 1);
      pair.b = Matrix::Zero(n + 1, n + 1);
      for (int i = 0; i < n; ++i) {
        require_nonzero(params.alphas[i], "alphas[i]");
        pair.a(i, i + 1) = params.alphas[i];
        // Strictly subdiagonal; a diagonal reading of this matrix
        // violates a b + b^n a^n = 1.
        pair.b(i + 1, i) = 1.0 / params.alphas[i];
      }
      return pair;
    }
  }
  throw Error(ErrorCode::InvalidParams, "unknown example family");
}


ExampleParams sample_example_params(std::mt19937_64& rng, ExampleKind kind, int n, double lo,
                                    double hi) {
  std::uniform_real_distribution<double> magnitude(lo, hi);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  auto draw = [&] {
    const double r = magnitude(rng);
    return std::polar(r, phase(rng));
  };
  ExampleParams p;
  p.kind = kind;
  p.alpha = draw();
  p.beta = draw();
  p.gamma = draw();
  p.delta = draw();
  p.p = draw();
  if (kind == ExampleKind::Ex3) {
    check_degree(n);
    for (int i = 0; i < n; ++i) p.alphas.push_back(draw());
  }
  return p;
}

}  // namespace pgfermi
