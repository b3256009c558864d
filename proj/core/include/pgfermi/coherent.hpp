#pragma once

#include <map>
#include <vector>

#include "pgfermi/paragrassmann.hpp"
#include "pgfermi/pseudofermion.hpp"

namespace pgfermi {

enum class Side { Right, Left };

const char* to_string(Side side);

/// Sign of zeta^k |.>: (-1)^k on the right, (-1)^{floor((k+1)/2)} on the left.
int cs_sign(Side side, int k);

/// Context for psi-side kets (involution P).
ContextPtr ket_context(const PseudoFermionSystem& sys);
/// Context for phi-side kets and for bras (involution P^dag).
ContextPtr dual_context(const PseudoFermionSystem& sys);

/// sqrt(1 - zeta* zeta) in the given context.
PGElement cs_norm_factor(const ContextPtr& ctx);

struct CoherentFamily {
  Side side = Side::Right;
  bool primed = false;   // false: psi-based, eigenstate of a; true: phi-based, of b^dag
  Matrix lowering;       // a or b^dag
  PGElement raw;         // sum_k s_k zeta^k |psi_k> (or |phi_k>)
  PGElement norm_factor; // sqrt(1 - zeta* zeta)
  PGElement normalized;  // norm_factor * raw
};

CoherentFamily ladder_cs(const PseudoFermionSystem& sys, Side side, bool primed);

/// X state - state zeta (right) or X state - zeta state (left), X the
/// family's lowering operator.
PGElement eigen_residual(const CoherentFamily& family, bool use_normalized);

/// |zeta>'_side <zeta|_side with normalized primed ket and normalized
/// unprimed bra.
PGElement resolution_kernel(const PseudoFermionSystem& sys, Side side);

/// Integral of resolution_kernel minus the identity.
Matrix resolution_defect(const PseudoFermionSystem& sys, Side side);

struct NormalizationReport {
  /// <zeta|_side |zeta>'_side with one sqrt(1 - zeta* zeta) on each state.
  PGElement pairing;
  std::map<Bidegree, Scalar> defect_by_bidegree;  // pairing - 1, diagonal bidegrees
  /// (1 - zeta* zeta) collected to the left of the raw pairing, i.e. the
  /// normalization factors treated as if they commuted with the states.
  PGElement factored_pairing;
  std::map<Bidegree, Scalar> factored_defect_by_bidegree;

  /// Largest |defect| at bidegrees (k,k) with k < below (or any off-diagonal term).
  static double max_defect(const std::map<Bidegree, Scalar>& defects, int below);
};

NormalizationReport binormalization_report(const PseudoFermionSystem& sys, Side side);

struct WeightSolution {
  std::vector<double> weights;
  int rank = 0;
  double residual = 0.0;
  bool unique = false;
};

/// Solves sum_k w_k C_kk = I for the diagonal-bidegree coefficients of the
/// Hermitian right-family kernel at degree n, independently of the closed
/// form of the weights.
WeightSolution solve_integration_weights(int n);

}  // namespace pgfermi
