#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

#include "pgfermi/error.hpp"

namespace pgfermi {

using Scalar = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Covector = Eigen::RowVectorXcd;

/// Absolute plus relative tolerance. A comparison of X against Y passes when
/// the max-entry deviation is at most abs + rel * max(|X|, |Y|).
struct Tolerance {
  double abs = 1e-10;
  double rel = 1e-10;

  /// Throws InvalidParams unless abs, rel >= 0 and at least one is positive.
  void validate() const;
  double threshold(double scale) const { return abs + rel * scale; }
};

/// Largest absolute entry; zero for empty matrices.
double max_abs(const Eigen::Ref<const Matrix>& m);

Matrix identity(std::size_t dim);

bool approx_equal(const Matrix& a, const Matrix& b, const Tolerance& tol);

/// Unit-norm basis vector of a one-dimensional numerical nullspace.
///
/// The singular values are compared against tol.threshold(sigma_max). The
/// nullspace is accepted only if exactly one singular value lies below the
/// threshold and the next one is at least kNullspaceGap times larger. The
/// returned vector's largest component is made real and positive so the
/// result is reproducible.
Vector nullspace_1d(const Matrix& m, const Tolerance& tol = {});

inline constexpr double kNullspaceGap = 1e6;
inline constexpr double kMaxCondition = 1e12;

/// Inverse of a square matrix; Singular if the 2-norm condition number
/// exceeds kMaxCondition.
Matrix invert(const Matrix& m);

double condition_number(const Matrix& m);

/// Integer power by repeated multiplication; power 0 gives the identity.
Matrix matrix_power(const Matrix& m, int power);

Matrix commutator(const Matrix& x, const Matrix& y);

}  // namespace pgfermi
