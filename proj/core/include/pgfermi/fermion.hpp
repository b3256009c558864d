#pragma once

#include <vector>

#include "pgfermi/numerics.hpp"
#include "pgfermi/report.hpp"

namespace pgfermi {

inline constexpr int kMaxDegree = 16;

/// Throws DegreeOutOfRange unless 1 <= n <= kMaxDegree.
void check_degree(int n);

/// Hermitian nonlinear n-fermion: A A^dag + (A^dag)^n A^n = 1 on C^{n+1}.
struct FermionAlgebra {
  int n = 0;
  Matrix A;                 // annihilation, superdiagonal of ones
  std::vector<Vector> fock; // |k> = (A^dag)^k |0>, |0> = e_1
  Matrix N;                 // number operator

  int dim() const { return n + 1; }

  /// Wraps an arbitrary annihilation matrix without validation; the Fock
  /// vectors stay the standard basis. Used to feed deliberately broken
  /// algebras to verify_fermion.
  static FermionAlgebra from_matrix(const Matrix& annihilation);
};

FermionAlgebra build_fermion(int n);

/// N = sum_{k=1}^{n} (A^dag)^k A^k.
Matrix fermion_number_operator(const FermionAlgebra& alg);

/// Residuals for the defining relation, nilpotency, ladder actions on the
/// Fock vectors, the number operator spectrum and the [A, N] commutators.
VerificationReport verify_fermion(const FermionAlgebra& alg, const Tolerance& tol = {});

/// Diagonal parity (-1)^k in the Fock basis.
Matrix fock_parity(int n);

}  // namespace pgfermi
