#include "pgfermi/finite_level.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pgfermi/fermion.hpp"

namespace pgfermi {

bool FiniteLevelSystem::real_spectrum(double tol) const {
  return std::all_of(eps.begin(), eps.end(),
                     [&](Scalar e) { return std::abs(e.imag()) <= tol * std::max(1.0, std::abs(e)); });
}

Matrix FiniteLevelSystem::metric() const { return Phi * Phi.adjoint(); }

FiniteLevelSystem from_spectrum(const std::vector<Scalar>& eps, const Matrix& Psi,
                                const Tolerance& tol) {
  const int dim = static_cast<int>(eps.size());
  check_degree(dim - 1);
  if (Psi.rows() != dim || Psi.cols() != dim) {
    throw Error(ErrorCode::ShapeMismatch, "Psi must be (n+1)x(n+1) with n+1 = len(eps)");
  }
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      const double scale = std::max(std::abs(eps[i]), std::abs(eps[j]));
      if (std::abs(eps[i] - eps[j]) <= tol.threshold(scale)) {
        std::ostringstream os;
        os << "levels " << i << " and " << j << " coincide";
        throw Error(ErrorCode::DegenerateSpectrum, os.str());
      }
    }
  }
  Matrix Psi_inv;
  try {
    Psi_inv = invert(Psi);
  } catch (const Error& e) {
    throw Error(ErrorCode::SingularBasis, e.what());
  }
  FiniteLevelSystem sys;
  sys.n = dim - 1;
  sys.eps = eps;
  sys.Psi = Psi;
  sys.Phi = Psi_inv.adjoint();
  Vector diag(dim);
  for (int k = 0; k < dim; ++k) diag(k) = eps[k];
  sys.H = Psi * diag.asDiagonal() * Psi_inv;
  return sys;
}

LadderWeights LadderWeights::from_rho(std::vector<Scalar> rho) {
  LadderWeights w;
  w.sigma.reserve(rho.size());
  for (Scalar r : rho) w.sigma.push_back(std::sqrt(r));
  w.rho = std::move(rho);
  return w;
}

LadderWeights LadderWeights::unit(int n) {
  return from_rho(std::vector<Scalar>(static_cast<std::size_t>(n), Scalar(1.0)));
}

LadderWeights q_weights(int n) {
  check_degree(n);
  const Scalar q = std::polar(1.0, std::numbers::pi / (n + 1));
  std::vector<Scalar> rho;
  for (int k = 0; k < n; ++k) {
    const Scalar value = (std::pow(q, k + 1) - std::pow(q, -(k + 1))) / (q - 1.0 / q);
    // Analytically a ratio of sines; drop the rounding residue in the imaginary part.
    rho.emplace_back(value.real(), 0.0);
  }
  LadderWeights w = LadderWeights::from_rho(std::move(rho));
  w.q = q;
  return w;
}

CandidatePair general_ladder(const FiniteLevelSystem& sys, const LadderWeights& w) {
  if (static_cast<int>(w.sigma.size()) != sys.n || w.rho.size() != w.sigma.size()) {
    throw Error(ErrorCode::WeightLengthMismatch,
                "need " + std::to_string(sys.n) + " weights, got " + std::to_string(w.rho.size()));
  }
  CandidatePair pair;
  pair.n = sys.n;
  pair.a = Matrix::Zero(sys.dim(), sys.dim());
  pair.b = Matrix::Zero(sys.dim(), sys.dim());
  for (int k = 0; k < sys.n; ++k) {
    pair.a += w.sigma[k] * sys.Psi.col(k) * sys.Phi.col(k + 1).adjoint();
    pair.b += w.sigma[k] * sys.Psi.col(k + 1) * sys.Phi.col(k).adjoint();
  }
  return pair;
}

Factorization factorize(const FiniteLevelSystem& sys, const Tolerance& tol) {
  std::vector<Scalar> rho;
  for (int k = 0; k < sys.n; ++k) rho.push_back(sys.eps[k + 1] - sys.eps[0]);
  Factorization f{{}, LadderWeights::from_rho(std::move(rho)), sys.eps[0], 0.0};
  f.pair = general_ladder(sys, f.weights);
  const Matrix rebuilt = f.pair.b * f.pair.a + f.shift * identity(sys.dim());
  f.residual = max_abs(rebuilt - sys.H);
  const double scale = std::max(max_abs(rebuilt), max_abs(sys.H));
  if (!(f.residual <= tol.threshold(scale))) {
    std::ostringstream os;
    os << "|b a + eps_0 - H| = " << f.residual;
    throw Error(ErrorCode::FactorizationFailure, os.str());
  }
  return f;
}

LadderExpansion expand_ladder_in_pf(const FiniteLevelSystem& sys, const LadderWeights& w,
                                    const Tolerance& tol) {
  const CandidatePair target = general_ladder(sys, w);
  const CandidatePair unit = general_ladder(sys, LadderWeights::unit(sys.n));
  LadderExpansion out;
  for (int j = 0; j < sys.n; ++j) {
    out.coefficients.push_back(j == 0 ? w.sigma[0] : w.sigma[j] - w.sigma[j - 1]);
  }
  Matrix a_sum = Matrix::Zero(sys.dim(), sys.dim());
  Matrix b_sum = a_sum;
  Matrix b_pow = identity(sys.dim());   // b^j
  Matrix a_pow = identity(sys.dim());   // a^j
  for (int j = 0; j < sys.n; ++j) {
    a_sum += out.coefficients[j] * b_pow * a_pow * unit.a;
    b_sum += out.coefficients[j] * b_pow * unit.b * a_pow;
    b_pow = b_pow * unit.b;
    a_pow = a_pow * unit.a;
  }
  out.residual_a = max_abs(a_sum - target.a);
  out.residual_b = max_abs(b_sum - target.b);
  const double scale_a = std::max(max_abs(a_sum), max_abs(target.a));
  const double scale_b = std::max(max_abs(b_sum), max_abs(target.b));
  if (!(out.residual_a <= tol.threshold(scale_a)) || !(out.residual_b <= tol.threshold(scale_b))) {
    std::ostringstream os;
    os << "residuals a: " << out.residual_a << ", b: " << out.residual_b;
    throw Error(ErrorCode::ReconstructionFailure, os.str());
  }
  return out;
}

std::optional<Scalar> equidistant_step(const std::vector<Scalar>& eps, const Tolerance& tol) {
  if (eps.size() < 2) return std::nullopt;
  const Scalar d = eps[1] - eps[0];
  for (std::size_t k = 2; k < eps.size(); ++k) {
    const Scalar expected = eps[0] + static_cast<double>(k) * d;
    if (std::abs(eps[k] - expected) > tol.threshold(std::abs(expected))) return std::nullopt;
  }
  return d;
}

VerificationReport structure_checks(const FiniteLevelSystem& sys, const Tolerance& tol) {
  VerificationReport report;
  const CandidatePair unit = general_ladder(sys, LadderWeights::unit(sys.n));
  const Matrix N_pf = pf_number_operator(unit);

  report.add_residual("commutator_H_Npf", "[H, N_pf] = 0", max_abs(commutator(sys.H, N_pf)),
                      tol.threshold(max_abs(sys.H) * max_abs(N_pf)));
  report.add("eigen_H", "H = sum_k eps_k |psi_k><phi_k|",
             sys.H * sys.Psi, sys.Psi * Eigen::Map<const Vector>(sys.eps.data(), sys.dim()).asDiagonal(),
             tol);
  if (sys.real_spectrum()) {
    const Matrix eta = sys.metric();
    report.add("pseudo_hermiticity", "eta H = H^dag eta", eta * sys.H, sys.H.adjoint() * eta, tol);
  }
  if (auto step = equidistant_step(sys.eps, tol)) {
    report.add("equidistant", "H = eps_0 + d N_pf", sys.H,
               sys.eps[0] * identity(sys.dim()) + *step * N_pf, tol);
  }
  return report;
}

}  // namespace pgfermi
