#pragma once

#include <compare>
#include <map>
#include <memory>
#include <vector>

#include "pgfermi/numerics.hpp"

namespace pgfermi {

/// g_k(n) = 1 + sum_{i=1}^{n-k} (-1)^{k i + i(i+1)/2}, k = 0..n.
std::vector<long long> g_coefficients(int n);

enum class Kind { Scalar, Vector, Covector, Operator };

const char* to_string(Kind kind);

/// Shape of a coefficient of the given kind in dimension dim.
std::pair<Eigen::Index, Eigen::Index> coefficient_shape(Kind kind, int dim);

/// Graded setting for para-Grassmann valued objects of order n + 1.
///
/// Moving one generator (zeta or zeta*) to the right past a coefficient x
/// replaces x by its conjugate under the involution G held here: G v for a
/// vector, w G for a covector, G M G for an operator, scalars unchanged.
/// Taking adjoints maps a context with G to one with G^dag.
class PGContext : public std::enable_shared_from_this<PGContext> {
 public:
  /// Throws InvalidParams if parity is not a (dim x dim) involution.
  static std::shared_ptr<const PGContext> make(int n, const Matrix& parity);
  /// Hermitian n-fermion context, G = diag((-1)^k).
  static std::shared_ptr<const PGContext> fermion(int n);

  int n() const { return n_; }
  int dim() const { return n_ + 1; }
  const Matrix& parity() const { return parity_; }
  const std::vector<long long>& weights() const { return weights_; }
  bool hermitian_parity() const { return hermitian_; }

  /// Context whose involution is parity()^dag; the same object when G is Hermitian.
  std::shared_ptr<const PGContext> adjoint() const;

  bool same_as(const PGContext& other) const;

  Matrix conjugate(Kind kind, const Matrix& x) const;

 private:
  PGContext(int n, Matrix parity);

  int n_;
  Matrix parity_;
  std::vector<long long> weights_;
  bool hermitian_;
};

using ContextPtr = std::shared_ptr<const PGContext>;

/// parity_conjugate(ctx, x): the coefficient obtained when a generator moves
/// rightward past x.
Matrix parity_conjugate(const PGContext& ctx, Kind kind, const Matrix& x);

struct Bidegree {
  int zeta = 0;
  int zeta_star = 0;
  auto operator<=>(const Bidegree&) const = default;
};

/// sum_{(i,k)} zeta^i zeta*^k C_{ik}, generators to the left of coefficients,
/// zeta powers to the left of zeta* powers. Absent bidegrees are zero.
class PGElement {
 public:
  using Terms = std::map<Bidegree, Matrix>;

  PGElement(ContextPtr ctx, Kind kind);

  static PGElement scalar(ContextPtr ctx, Scalar value);
  static PGElement vector(ContextPtr ctx, const Vector& v);
  static PGElement covector(ContextPtr ctx, const Covector& w);
  static PGElement op(ContextPtr ctx, const Matrix& m);
  /// zeta^i zeta*^k times coeff; zero if i or k exceeds n.
  static PGElement monomial(ContextPtr ctx, int i, int k, Kind kind, const Matrix& coeff);
  static PGElement zeta(ContextPtr ctx, int power = 1);
  static PGElement zeta_star(ContextPtr ctx, int power = 1);

  const ContextPtr& context() const { return ctx_; }
  Kind kind() const { return kind_; }
  int n() const { return ctx_->n(); }
  const Terms& terms() const { return terms_; }

  /// Coefficient at (i, k); a zero of the right shape when absent.
  Matrix coeff(int i, int k) const;
  Scalar scalar_coeff(int i, int k) const;

  /// Accumulates coeff at (i, k); dropped if i or k exceeds n.
  void add_term(int i, int k, const Matrix& coeff);

  /// Largest absolute coefficient entry over all terms.
  double max_abs() const;
  /// Drops terms whose entries are all below threshold.
  PGElement pruned(double threshold = 0.0) const;

  PGElement& operator+=(const PGElement& other);
  PGElement& operator-=(const PGElement& other);
  PGElement& operator*=(Scalar factor);

 private:
  void check_compatible(const PGElement& other) const;

  ContextPtr ctx_;
  Kind kind_;
  Terms terms_;
};

PGElement operator+(PGElement x, const PGElement& y);
PGElement operator-(PGElement x, const PGElement& y);
PGElement operator*(Scalar factor, PGElement x);

/// Canonical product. Reordering zeta*^a zeta^b to zeta^b zeta*^a gives
/// (-1)^{ab}; each generator moved past a coefficient conjugates it once;
/// powers above n vanish. Throws KindMismatch or ContextMismatch.
PGElement pg_mul(const PGElement& x, const PGElement& y);
PGElement operator*(const PGElement& x, const PGElement& y);

/// (zeta^i zeta*^k C)^dag = C^dag zeta^k zeta*^i, re-canonicalized in the
/// adjoint context.
PGElement pg_adjoint(const PGElement& x);

/// sum_k g_k(n) C_{kk}. The result has the coefficient shape of x's kind.
Matrix pg_integrate(const PGElement& x);

/// Square root of an even scalar 1 + x by the truncated binomial series.
/// Throws NotUnitLeading if the (0,0) part is not 1, InvalidParams if x has
/// off-diagonal bidegrees, KindMismatch for non-scalars.
PGElement pg_sqrt_even(const PGElement& s);

}  // namespace pgfermi
