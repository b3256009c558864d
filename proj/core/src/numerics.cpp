#include "pgfermi/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace pgfermi {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NoNullspace: return "NoNullspace";
    case ErrorCode::DegenerateNullspace: return "DegenerateNullspace";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::DegreeOutOfRange: return "DegreeOutOfRange";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::ContextMismatch: return "ContextMismatch";
    case ErrorCode::NotUnitLeading: return "NotUnitLeading";
    case ErrorCode::PairingSingular: return "PairingSingular";
    case ErrorCode::TerminationFailure: return "TerminationFailure";
    case ErrorCode::BiorthogonalityFailure: return "BiorthogonalityFailure";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::SingularBasis: return "SingularBasis";
    case ErrorCode::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorCode::WeightLengthMismatch: return "WeightLengthMismatch";
    case ErrorCode::FactorizationFailure: return "FactorizationFailure";
    case ErrorCode::ReconstructionFailure: return "ReconstructionFailure";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

void Tolerance::validate() const {
  if (!(abs >= 0.0) || !(rel >= 0.0) || (abs == 0.0 && rel == 0.0)) {
    throw Error(ErrorCode::InvalidParams, "tolerance needs abs >= 0, rel >= 0, not both zero");
  }
}

double max_abs(const Eigen::Ref<const Matrix>& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

Matrix identity(std::size_t dim) {
  return Matrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
}

bool approx_equal(const Matrix& a, const Matrix& b, const Tolerance& tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream os;
    os << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x" << b.cols();
    throw Error(ErrorCode::ShapeMismatch, os.str());
  }
  const double scale = std::max(max_abs(a), max_abs(b));
  return max_abs(a - b) <= tol.threshold(scale);
}

namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorCode::ShapeMismatch, std::string(what) + " needs a non-empty square matrix");
  }
}

}  // namespace

namespace {

double power_of_two_near(double x) { return std::exp2(std::round(std::log2(x))); }

// Column factors of a Ruiz row/column equilibration. Row factors do not change the
// nullspace, so only the column part is needed by the caller, but both are iterated.
Eigen::VectorXd ruiz_column_scale(const Matrix& m) {
  const Eigen::Index rows = m.rows(), cols = m.cols();
  Eigen::MatrixXd a = m.cwiseAbs();
  Eigen::VectorXd col_total = Eigen::VectorXd::Ones(cols);
  for (int iter = 0; iter < 20; ++iter) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double mx = a.row(i).maxCoeff();
      if (mx > 0.0) a.row(i) /= power_of_two_near(std::sqrt(mx));
    }
    bool settled = true;
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double mx = a.col(j).maxCoeff();
      if (mx > 0.0) {
        const double f = power_of_two_near(std::sqrt(mx));
        if (f != 1.0) settled = false;
        a.col(j) /= f;
        col_total(j) /= f;
      }
    }
    if (settled && iter > 0) break;
  }
  return col_total;
}

}  // namespace

Vector nullspace_1d(const Matrix& m, const Tolerance& tol) {
  require_square(m, "nullspace_1d");
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();  // descending
  const Eigen::Index d = sv.size();
  const double threshold = tol.threshold(sv(0));
  const double smallest = sv(d - 1);
  if (smallest > threshold) {
    std::ostringstream os;
    os << "smallest singular value " << smallest << " above threshold " << threshold;
    throw Error(ErrorCode::NoNullspace, os.str());
  }
  if (d > 1) {
    const double next = sv(d - 2);
    if (next <= threshold || next <= kNullspaceGap * smallest) {
      std::ostringstream os;
      os << "singular values " << next << " and " << smallest << " both near zero";
      throw Error(ErrorCode::DegenerateNullspace, os.str());
    }
  }
  // The rank decision above uses the raw matrix; the vector itself comes from a
  // Ruiz-equilibrated copy, which keeps tiny components accurate when entries span
  // many orders of magnitude. Power-of-two scales make the rescaling exact.
  const Eigen::VectorXd col_scale = ruiz_column_scale(m);
  const Matrix scaled = m * col_scale.cast<Scalar>().asDiagonal();
  Eigen::JacobiSVD<Matrix> refined(scaled, Eigen::ComputeFullV);
  Vector v = col_scale.cast<Scalar>().asDiagonal() * refined.matrixV().col(d - 1);
  Eigen::Index pivot = 0;
  v.cwiseAbs().maxCoeff(&pivot);
  v *= std::conj(v(pivot)) / std::abs(v(pivot));
  return v / v.norm();
}

double condition_number(const Matrix& m) {
  require_square(m, "condition_number");
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  const double smallest = sv(sv.size() - 1);
  if (smallest == 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / smallest;
}

Matrix invert(const Matrix& m) {
  require_square(m, "invert");
  const double cond = condition_number(m);
  if (!(cond <= kMaxCondition)) {
    std::ostringstream os;
    os << "condition number " << cond;
    throw Error(ErrorCode::Singular, os.str());
  }
  return m.fullPivLu().inverse();
}

Matrix matrix_power(const Matrix& m, int power) {
  require_square(m, "matrix_power");
  Matrix result = Matrix::Identity(m.rows(), m.cols());
  for (int i = 0; i < power; ++i) result = result * m;
  return result;
}

Matrix commutator(const Matrix& x, const Matrix& y) { return x * y - y * x; }

}  // namespace pgfermi
