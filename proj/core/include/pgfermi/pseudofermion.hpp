#pragma once

#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pgfermi/numerics.hpp"
#include "pgfermi/report.hpp"

namespace pgfermi {

/// Candidate lowering/raising pair (a, b) on C^{n+1}.
struct CandidatePair {
  int n = 0;
  Matrix a;
  Matrix b;

  int dim() const { return n + 1; }
  /// Throws ShapeMismatch / DegreeOutOfRange.
  void validate() const;
};

CandidatePair hermitian_pair(int n);

/// Bi-orthonormal n-pseudo-fermion system built from a valid pair.
struct PseudoFermionSystem {
  CandidatePair pair;
  std::vector<Vector> psi;  // psi_k = b^k psi_0
  std::vector<Vector> phi;  // phi_k = (a^dag)^k phi_0
  Matrix eta;               // sum_k |phi_k><phi_k|
  Matrix eta_inv;           // sum_k |psi_k><psi_k|
  Matrix N_pf;
  Matrix P;                 // sum_k (-1)^k |psi_k><phi_k|

  int n() const { return pair.n; }
  int dim() const { return pair.n + 1; }
};

enum class ExampleKind { Ex1, Ex2, Ex3 };

ExampleKind parse_example_kind(const std::string& name);
const char* to_string(ExampleKind kind);

struct ExampleParams {
  ExampleKind kind = ExampleKind::Ex1;
  Scalar alpha{1.0};
  Scalar beta{1.0};
  Scalar gamma{1.0};
  Scalar delta{1.0};
  std::vector<Scalar> alphas;  // ex3 superdiagonal, length n
  // Vacuum scale of the family. It only rescales psi_0 / phi_0,
  // which find_vacua fixes anyway, so it is validated but otherwise unused.
  Scalar p{1.0};
};

/// Residuals for a b + b^n a^n = 1 and a^{n+1} = b^{n+1} = 0, plus an
/// informational check recording whether b = a^dag.
VerificationReport verify_pf_relation(const CandidatePair& pair, const Tolerance& tol = {});

bool is_hermitian_pair(const CandidatePair& pair, const Tolerance& tol = {});

/// (psi_0, phi_0) with a psi_0 = 0, b^dag phi_0 = 0, |psi_0| = 1 and
/// <phi_0|psi_0> = 1.
std::pair<Vector, Vector> find_vacua(const CandidatePair& pair, const Tolerance& tol = {});

PseudoFermionSystem build_system(const CandidatePair& pair, const Tolerance& tol = {});

/// Assembles eta, eta_inv, N_pf and P from caller-supplied bases without
/// validating them. Basis pairs are reordered by their N_pf eigenvalue
/// <phi_k|N_pf|psi_k> / <phi_k|psi_k>.
PseudoFermionSystem assemble_system(const CandidatePair& pair, std::vector<Vector> psi,
                                    std::vector<Vector> phi);

/// N_pf = sum_{k=1}^{n} b^k a^k.
Matrix pf_number_operator(const CandidatePair& pair);

/// |sum_k |psi_k><phi_k| - I| (max-entry).
double completeness_defect(const PseudoFermionSystem& sys);

/// |b - eta^{-1} a^dag eta| (max-entry).
double pseudo_adjoint_defect(const PseudoFermionSystem& sys);

/// Largest |<phi_j|psi_k> - delta_jk|.
double biorthogonality_defect(const PseudoFermionSystem& sys);

/// Checks every structural invariant of a built system.
VerificationReport verify_system(const PseudoFermionSystem& sys, const Tolerance& tol = {});

/// The three example families. Throws InvalidParams on zero parameters,
/// alpha = -beta for ex1, or fewer than two alphas for ex3.
CandidatePair example_family(const ExampleParams& params);

/// Random valid parameters: every complex parameter has magnitude uniform in
/// [lo, hi] and a uniform phase. `n` sets the ex3 size and is ignored otherwise.
ExampleParams sample_example_params(std::mt19937_64& rng, ExampleKind kind, int n = 2,
                                    double lo = 0.1, double hi = 10.0);

}  // namespace pgfermi
