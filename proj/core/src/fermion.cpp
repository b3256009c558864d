#include "pgfermi/fermion.hpp"

#include <algorithm>
#include <string>

namespace pgfermi {

void check_degree(int n) {
  if (n < 1 || n > kMaxDegree) {
    throw Error(ErrorCode::DegreeOutOfRange,
                "n = " + std::to_string(n) + " outside [1, " + std::to_string(kMaxDegree) + "]");
  }
}

namespace {

std::vector<Vector> standard_basis(int dim) {
  std::vector<Vector> basis;
  basis.reserve(dim);
  for (int k = 0; k < dim; ++k) basis.push_back(Vector::Unit(dim, k));
  return basis;
}

}  // namespace

FermionAlgebra FermionAlgebra::from_matrix(const Matrix& annihilation) {
  if (annihilation.rows() != annihilation.cols() || annihilation.rows() < 2) {
    throw Error(ErrorCode::ShapeMismatch, "annihilation operator must be square, dim >= 2");
  }
  FermionAlgebra alg;
  alg.n = static_cast<int>(annihilation.rows()) - 1;
  alg.A = annihilation;
  alg.fock = standard_basis(alg.dim());
  alg.N = fermion_number_operator(alg);
  return alg;
}

FermionAlgebra build_fermion(int n) {
  check_degree(n);
  FermionAlgebra alg;
  alg.n = n;
  alg.A = Matrix::Zero(n + 1, n + 1);
  for (int k = 0; k < n; ++k) alg.A(k, k + 1) = 1.0;
  alg.fock.push_back(Vector::Unit(n + 1, 0));
  const Matrix creation = alg.A.adjoint();
  for (int k = 1; k <= n; ++k) alg.fock.push_back(creation * alg.fock.back());
  alg.N = fermion_number_operator(alg);
  return alg;
}

Matrix fermion_number_operator(const FermionAlgebra& alg) {
  const Matrix creation = alg.A.adjoint();
  Matrix N = Matrix::Zero(alg.dim(), alg.dim());
  Matrix up = Matrix::Identity(alg.dim(), alg.dim());
  Matrix down = up;
  for (int k = 1; k <= alg.n; ++k) {
    up = up * creation;
    down = alg.A * down;
    N += up * down;
  }
  return N;
}

VerificationReport verify_fermion(const FermionAlgebra& alg, const Tolerance& tol) {
  VerificationReport report;
  const int n = alg.n;
  const int dim = alg.dim();
  const Matrix& A = alg.A;
  const Matrix Ad = A.adjoint();
  const Matrix I = identity(dim);
  const Matrix zero = Matrix::Zero(dim, dim);

  report.add("anticommutation", "A A^dag + (A^dag)^n A^n = 1",
             A * Ad + matrix_power(Ad, n) * matrix_power(A, n), I, tol);
  report.add("nilpotency", "A^(n+1) = 0", matrix_power(A, n + 1), zero, tol);

  double lower = 0.0;
  double raise = 0.0;
  double scale = 1.0;
  for (int k = 0; k <= n; ++k) {
    const Vector& v = alg.fock[k];
    const Vector expected_down = k > 0 ? Vector(alg.fock[k - 1]) : Vector(Vector::Zero(dim));
    const Vector expected_up = k < n ? Vector(alg.fock[k + 1]) : Vector(Vector::Zero(dim));
    lower = std::max(lower, max_abs(A * v - expected_down));
    raise = std::max(raise, max_abs(Ad * v - expected_up));
    scale = std::max(scale, max_abs(A * v));
  }
  report.add_residual("ladder_lowering", "A|k> = |k-1>", lower, tol.threshold(scale));
  report.add_residual("ladder_raising", "A^dag|k> = |k+1>, k < n", raise, tol.threshold(scale));

  double number = 0.0;
  for (int k = 0; k <= n; ++k) {
    number = std::max(number, max_abs(alg.N * alg.fock[k] - static_cast<double>(k) * alg.fock[k]));
  }
  report.add_residual("number_spectrum", "N|k> = k|k>", number, tol.threshold(n));

  report.add("commutator_A_N", "[A, N] = A", commutator(A, alg.N), A, tol);
  report.add("commutator_Adag_N", "[A^dag, N] = -A^dag", commutator(Ad, alg.N), -Ad, tol);
  return report;
}

Matrix fock_parity(int n) {
  Matrix P = Matrix::Zero(n + 1, n + 1);
  for (int k = 0; k <= n; ++k) P(k, k) = (k % 2 == 0) ? 1.0 : -1.0;
  return P;
}

}  // namespace pgfermi
