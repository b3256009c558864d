#include "pgfermi/coherent.hpp"

#include <algorithm>
#include <cmath>

namespace pgfermi {

const char* to_string(Side side) { return side == Side::Right ? "right" : "left"; }

int cs_sign(Side side, int k) {
  const int exponent = side == Side::Right ? k : (k + 1) / 2;
  return exponent % 2 == 0 ? 1 : -1;
}

ContextPtr ket_context(const PseudoFermionSystem& sys) { return PGContext::make(sys.n(), sys.P); }

ContextPtr dual_context(const PseudoFermionSystem& sys) { return ket_context(sys)->adjoint(); }

PGElement cs_norm_factor(const ContextPtr& ctx) {
  const PGElement one = PGElement::scalar(ctx, 1.0);
  return pg_sqrt_even(one - PGElement::zeta_star(ctx) * PGElement::zeta(ctx));
}

namespace {

CoherentFamily make_family(const PseudoFermionSystem& sys, const ContextPtr& ctx, Side side,
                           bool primed) {
  CoherentFamily fam{side,
                     primed,
                     primed ? Matrix(sys.pair.b.adjoint()) : sys.pair.a,
                     PGElement(ctx, Kind::Vector),
                     cs_norm_factor(ctx),
                     PGElement(ctx, Kind::Vector)};
  const auto& basis = primed ? sys.phi : sys.psi;
  for (int k = 0; k <= sys.n(); ++k) {
    fam.raw.add_term(k, 0, static_cast<double>(cs_sign(side, k)) * basis[k]);
  }
  fam.normalized = fam.norm_factor * fam.raw;
  return fam;
}

}  // namespace

CoherentFamily ladder_cs(const PseudoFermionSystem& sys, Side side, bool primed) {
  const ContextPtr kets = ket_context(sys);
  return make_family(sys, primed ? kets->adjoint() : kets, side, primed);
}

PGElement eigen_residual(const CoherentFamily& family, bool use_normalized) {
  const PGElement& state = use_normalized ? family.normalized : family.raw;
  const ContextPtr& ctx = state.context();
  const PGElement X = PGElement::op(ctx, family.lowering);
  const PGElement z = PGElement::zeta(ctx);
  const PGElement eigen = family.side == Side::Right ? state * z : z * state;
  return X * state - eigen;
}

PGElement resolution_kernel(const PseudoFermionSystem& sys, Side side) {
  const ContextPtr kets = ket_context(sys);
  const CoherentFamily ket = make_family(sys, kets->adjoint(), side, true);
  const CoherentFamily unprimed = make_family(sys, kets, side, false);
  return ket.normalized * pg_adjoint(unprimed.normalized);
}

Matrix resolution_defect(const PseudoFermionSystem& sys, Side side) {
  return pg_integrate(resolution_kernel(sys, side)) - identity(sys.dim());
}

namespace {

std::map<Bidegree, Scalar> deviation_from_one(const PGElement& pairing) {
  std::map<Bidegree, Scalar> out;
  for (int k = 0; k <= pairing.n(); ++k) {
    out[{k, k}] = pairing.scalar_coeff(k, k) - (k == 0 ? Scalar(1.0) : Scalar{});
  }
  for (const auto& [deg, c] : pairing.terms()) {
    if (deg.zeta != deg.zeta_star) out[deg] = c(0, 0);
  }
  return out;
}

}  // namespace

double NormalizationReport::max_defect(const std::map<Bidegree, Scalar>& defects, int below) {
  double worst = 0.0;
  for (const auto& [deg, d] : defects) {
    if (deg.zeta != deg.zeta_star || deg.zeta < below) worst = std::max(worst, std::abs(d));
  }
  return worst;
}

NormalizationReport binormalization_report(const PseudoFermionSystem& sys, Side side) {
  const ContextPtr kets = ket_context(sys);
  const ContextPtr duals = kets->adjoint();
  const CoherentFamily ket = make_family(sys, duals, side, true);
  const CoherentFamily unprimed = make_family(sys, kets, side, false);

  NormalizationReport report{pg_adjoint(unprimed.normalized) * ket.normalized, {},
                             PGElement(duals, Kind::Scalar), {}};
  const PGElement raw = pg_adjoint(unprimed.raw) * ket.raw;
  const PGElement one = PGElement::scalar(duals, 1.0);
  report.factored_pairing = (one - PGElement::zeta_star(duals) * PGElement::zeta(duals)) * raw;
  report.defect_by_bidegree = deviation_from_one(report.pairing);
  report.factored_defect_by_bidegree = deviation_from_one(report.factored_pairing);
  return report;
}

WeightSolution solve_integration_weights(int n) {
  const PseudoFermionSystem sys = build_system(hermitian_pair(n));
  const PGElement kernel = resolution_kernel(sys, Side::Right);
  const int dim = n + 1;
  Matrix system(dim * dim, dim);
  for (int k = 0; k <= n; ++k) {
    const Matrix c = kernel.coeff(k, k);
    system.col(k) = c.reshaped();
  }
  const Matrix I = identity(dim);
  const Vector target = I.reshaped();

  Eigen::JacobiSVD<Matrix> svd(system, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-10);
  WeightSolution sol;
  sol.rank = static_cast<int>(svd.rank());
  const Vector w = svd.solve(target);
  sol.residual = max_abs(system * w - target);
  sol.unique = sol.rank == dim;
  for (int k = 0; k <= n; ++k) sol.weights.push_back(w(k).real());
  return sol;
}

}  // namespace pgfermi
