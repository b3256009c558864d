#pragma once

#include <optional>
#include <vector>

#include "pgfermi/numerics.hpp"
#include "pgfermi/pseudofermion.hpp"
#include "pgfermi/report.hpp"

namespace pgfermi {

/// (n+1)-level system with eigenbasis Psi (columns) and dual basis Phi,
/// Phi^dag Psi = 1, H = sum_k eps_k |psi_k><phi_k|.
struct FiniteLevelSystem {
  int n = 0;
  std::vector<Scalar> eps;
  Matrix Psi;
  Matrix Phi;
  Matrix H;

  int dim() const { return n + 1; }
  bool real_spectrum(double tol = 1e-12) const;
  /// sum_k |phi_k><phi_k|
  Matrix metric() const;
};

FiniteLevelSystem from_spectrum(const std::vector<Scalar>& eps, const Matrix& Psi,
                                const Tolerance& tol = {});

struct LadderWeights {
  std::vector<Scalar> rho;
  std::vector<Scalar> sigma;  // principal square roots of rho
  std::optional<Scalar> q;

  static LadderWeights from_rho(std::vector<Scalar> rho);
  static LadderWeights unit(int n);
};

/// rho_k = [[k+1]] = (q^{k+1} - q^{-k-1}) / (q - 1/q), q = exp(i pi / (n+1)).
LadderWeights q_weights(int n);

/// a(rho) = sum_k sigma_k |psi_k><phi_{k+1}|, b(rho) = sum_k sigma_k |psi_{k+1}><phi_k|.
CandidatePair general_ladder(const FiniteLevelSystem& sys, const LadderWeights& w);

struct Factorization {
  CandidatePair pair;
  LadderWeights weights;  // rho_k = eps_{k+1} - eps_0
  Scalar shift;           // eps_0
  double residual = 0.0;  // |b a + eps_0 - H|
};

/// Throws FactorizationFailure if the reconstruction misses tol.
Factorization factorize(const FiniteLevelSystem& sys, const Tolerance& tol = {});

struct LadderExpansion {
  std::vector<Scalar> coefficients;  // sigma_0, sigma_1 - sigma_0, ...
  double residual_a = 0.0;
  double residual_b = 0.0;
};

/// Expresses a(rho), b(rho) through the unit-weight pair:
///   a(rho) = sum_j c_j b^j a^{j+1},  b(rho) = sum_j c_j b^{j+1} a^j.
/// Throws ReconstructionFailure if either identity misses tol.
LadderExpansion expand_ladder_in_pf(const FiniteLevelSystem& sys, const LadderWeights& w,
                                    const Tolerance& tol = {});

/// [H, N_pf] = 0, the metric identity eta H = H^dag eta (real spectra), and
/// H = eps_0 + d N_pf when the spectrum is equidistant.
VerificationReport structure_checks(const FiniteLevelSystem& sys, const Tolerance& tol = {});

/// Step d if eps_k = eps_0 + k d within tol.
std::optional<Scalar> equidistant_step(const std::vector<Scalar>& eps, const Tolerance& tol = {});

}  // namespace pgfermi
