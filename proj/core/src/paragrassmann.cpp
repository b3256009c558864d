#include "pgfermi/paragrassmann.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pgfermi/fermion.hpp"

namespace pgfermi {

std::vector<long long> g_coefficients(int n) {
  check_degree(n);
  std::vector<long long> g(n + 1);
  for (int k = 0; k <= n; ++k) {
    long long sum = 1;
    for (int i = 1; i <= n - k; ++i) {
      const long long exponent = static_cast<long long>(k) * i + i * (i + 1) / 2;
      sum += (exponent % 2 == 0) ? 1 : -1;
    }
    g[k] = sum;
  }
  return g;
}

const char* to_string(Kind kind) {
  switch (kind) {
    case Kind::Scalar: return "scalar";
    case Kind::Vector: return "vector";
    case Kind::Covector: return "covector";
    case Kind::Operator: return "operator";
  }
  return "unknown";
}

std::pair<Eigen::Index, Eigen::Index> coefficient_shape(Kind kind, int dim) {
  switch (kind) {
    case Kind::Scalar: return {1, 1};
    case Kind::Vector: return {dim, 1};
    case Kind::Covector: return {1, dim};
    case Kind::Operator: return {dim, dim};
  }
  return {0, 0};
}

// --- context ---------------------------------------------------------------

PGContext::PGContext(int n, Matrix parity)
    : n_(n), parity_(std::move(parity)), weights_(g_coefficients(n)) {
  hermitian_ = max_abs(parity_ - parity_.adjoint()) <= 1e-12 * std::max(1.0, max_abs(parity_));
}

std::shared_ptr<const PGContext> PGContext::make(int n, const Matrix& parity) {
  check_degree(n);
  if (parity.rows() != n + 1 || parity.cols() != n + 1) {
    throw Error(ErrorCode::ShapeMismatch, "parity must be (n+1)x(n+1)");
  }
  const double scale = std::max(1.0, max_abs(parity));
  if (max_abs(parity * parity - identity(n + 1)) > 1e-9 * scale * scale) {
    throw Error(ErrorCode::InvalidParams, "parity operator must square to the identity");
  }
  return std::shared_ptr<const PGContext>(new PGContext(n, parity));
}

std::shared_ptr<const PGContext> PGContext::fermion(int n) {
  check_degree(n);
  return make(n, fock_parity(n));
}

std::shared_ptr<const PGContext> PGContext::adjoint() const {
  if (hermitian_) return shared_from_this();
  return std::shared_ptr<const PGContext>(new PGContext(n_, parity_.adjoint()));
}

bool PGContext::same_as(const PGContext& other) const {
  if (this == &other) return true;
  if (n_ != other.n_) return false;
  const double scale = std::max({1.0, max_abs(parity_), max_abs(other.parity_)});
  return max_abs(parity_ - other.parity_) <= 1e-12 * scale;
}

Matrix PGContext::conjugate(Kind kind, const Matrix& x) const {
  switch (kind) {
    case Kind::Scalar: return x;
    case Kind::Vector: return parity_ * x;
    case Kind::Covector: return x * parity_;
    case Kind::Operator: return parity_ * x * parity_;
  }
  return x;
}

Matrix parity_conjugate(const PGContext& ctx, Kind kind, const Matrix& x) {
  return ctx.conjugate(kind, x);
}

// --- element ---------------------------------------------------------------

PGElement::PGElement(ContextPtr ctx, Kind kind) : ctx_(std::move(ctx)), kind_(kind) {
  if (!ctx_) throw Error(ErrorCode::ContextMismatch, "null context");
}

PGElement PGElement::monomial(ContextPtr ctx, int i, int k, Kind kind, const Matrix& coeff) {
  PGElement e(std::move(ctx), kind);
  e.add_term(i, k, coeff);
  return e;
}

PGElement PGElement::scalar(ContextPtr ctx, Scalar value) {
  Matrix c(1, 1);
  c(0, 0) = value;
  return monomial(std::move(ctx), 0, 0, Kind::Scalar, c);
}

PGElement PGElement::vector(ContextPtr ctx, const Vector& v) {
  return monomial(std::move(ctx), 0, 0, Kind::Vector, v);
}

PGElement PGElement::covector(ContextPtr ctx, const Covector& w) {
  return monomial(std::move(ctx), 0, 0, Kind::Covector, w);
}

PGElement PGElement::op(ContextPtr ctx, const Matrix& m) {
  return monomial(std::move(ctx), 0, 0, Kind::Operator, m);
}

PGElement PGElement::zeta(ContextPtr ctx, int power) {
  return monomial(std::move(ctx), power, 0, Kind::Scalar, Matrix::Ones(1, 1));
}

PGElement PGElement::zeta_star(ContextPtr ctx, int power) {
  return monomial(std::move(ctx), 0, power, Kind::Scalar, Matrix::Ones(1, 1));
}

Matrix PGElement::coeff(int i, int k) const {
  auto it = terms_.find({i, k});
  if (it != terms_.end()) return it->second;
  const auto [r, c] = coefficient_shape(kind_, ctx_->dim());
  return Matrix::Zero(r, c);
}

Scalar PGElement::scalar_coeff(int i, int k) const {
  if (kind_ != Kind::Scalar) throw Error(ErrorCode::KindMismatch, "scalar_coeff on non-scalar");
  auto it = terms_.find({i, k});
  return it == terms_.end() ? Scalar{} : it->second(0, 0);
}

void PGElement::add_term(int i, int k, const Matrix& coeff) {
  const auto [r, c] = coefficient_shape(kind_, ctx_->dim());
  if (coeff.rows() != r || coeff.cols() != c) {
    throw Error(ErrorCode::ShapeMismatch, std::string("coefficient shape does not match kind ") +
                                              to_string(kind_));
  }
  if (i < 0 || k < 0) throw Error(ErrorCode::InvalidParams, "negative bidegree");
  if (i > n() || k > n()) return;
  auto [it, inserted] = terms_.try_emplace(Bidegree{i, k}, coeff);
  if (!inserted) it->second += coeff;
}

double PGElement::max_abs() const {
  double m = 0.0;
  for (const auto& [deg, c] : terms_) m = std::max(m, pgfermi::max_abs(c));
  return m;
}

PGElement PGElement::pruned(double threshold) const {
  PGElement out(ctx_, kind_);
  for (const auto& [deg, c] : terms_) {
    if (pgfermi::max_abs(c) > threshold) out.terms_.emplace(deg, c);
  }
  return out;
}

void PGElement::check_compatible(const PGElement& other) const {
  if (kind_ != other.kind_) {
    throw Error(ErrorCode::KindMismatch,
                std::string(to_string(kind_)) + " vs " + to_string(other.kind_));
  }
  if (!ctx_->same_as(*other.ctx_)) throw Error(ErrorCode::ContextMismatch, "sum across contexts");
}

PGElement& PGElement::operator+=(const PGElement& other) {
  check_compatible(other);
  for (const auto& [deg, c] : other.terms_) add_term(deg.zeta, deg.zeta_star, c);
  return *this;
}

PGElement& PGElement::operator-=(const PGElement& other) {
  check_compatible(other);
  for (const auto& [deg, c] : other.terms_) add_term(deg.zeta, deg.zeta_star, -c);
  return *this;
}

PGElement& PGElement::operator*=(Scalar factor) {
  for (auto& [deg, c] : terms_) c *= factor;
  return *this;
}

PGElement operator+(PGElement x, const PGElement& y) { return x += y; }
PGElement operator-(PGElement x, const PGElement& y) { return x -= y; }
PGElement operator*(Scalar factor, PGElement x) { return x *= factor; }

// --- algebra ---------------------------------------------------------------

namespace {

Kind product_kind(Kind x, Kind y) {
  if (x == Kind::Scalar) return y;
  if (y == Kind::Scalar) return x;
  if (x == Kind::Operator && y == Kind::Operator) return Kind::Operator;
  if (x == Kind::Operator && y == Kind::Vector) return Kind::Vector;
  if (x == Kind::Covector && y == Kind::Operator) return Kind::Covector;
  if (x == Kind::Vector && y == Kind::Covector) return Kind::Operator;
  if (x == Kind::Covector && y == Kind::Vector) return Kind::Scalar;
  throw Error(ErrorCode::KindMismatch,
              std::string("cannot multiply ") + to_string(x) + " by " + to_string(y));
}

Matrix coefficient_product(Kind xk, const Matrix& x, Kind yk, const Matrix& y) {
  if (xk == Kind::Scalar) return x(0, 0) * y;
  if (yk == Kind::Scalar) return x * y(0, 0);
  return x * y;
}

Kind adjoint_kind(Kind k) {
  switch (k) {
    case Kind::Vector: return Kind::Covector;
    case Kind::Covector: return Kind::Vector;
    default: return k;
  }
}

}  // namespace

PGElement pg_mul(const PGElement& x, const PGElement& y) {
  if (!x.context()->same_as(*y.context())) {
    throw Error(ErrorCode::ContextMismatch, "product across contexts");
  }
  const Kind kind = product_kind(x.kind(), y.kind());
  const PGContext& ctx = *x.context();
  const int n = ctx.n();
  PGElement out(x.context(), kind);
  for (const auto& [dx, cx] : x.terms()) {
    // zeta^i zeta*^k X zeta^j zeta*^l Y = (-1)^{kj} zeta^{i+j} zeta*^{k+l} G^{j+l}(X) Y
    const Matrix odd = ctx.conjugate(x.kind(), cx);
    for (const auto& [dy, cy] : y.terms()) {
      const int i = dx.zeta + dy.zeta;
      const int k = dx.zeta_star + dy.zeta_star;
      if (i > n || k > n) continue;
      const Matrix& moved = ((dy.zeta + dy.zeta_star) % 2 == 0) ? cx : odd;
      Matrix c = coefficient_product(x.kind(), moved, y.kind(), cy);
      if ((dx.zeta_star * dy.zeta) % 2 != 0) c = -c;
      out.add_term(i, k, c);
    }
  }
  return out;
}

PGElement operator*(const PGElement& x, const PGElement& y) { return pg_mul(x, y); }

PGElement pg_adjoint(const PGElement& x) {
  ContextPtr actx = x.context()->adjoint();
  const Kind kind = adjoint_kind(x.kind());
  PGElement out(actx, kind);
  for (const auto& [deg, c] : x.terms()) {
    // C^dag zeta^k zeta*^i = zeta^k zeta*^i G'^{i+k}(C^dag)
    Matrix cd = c.adjoint();
    if ((deg.zeta + deg.zeta_star) % 2 != 0) cd = actx->conjugate(kind, cd);
    out.add_term(deg.zeta_star, deg.zeta, cd);
  }
  return out;
}

Matrix pg_integrate(const PGElement& x) {
  const auto& g = x.context()->weights();
  Matrix result = x.coeff(0, 0) * 0.0;
  for (int k = 0; k <= x.n(); ++k) {
    if (g[k] == 0) continue;
    auto it = x.terms().find({k, k});
    if (it != x.terms().end()) result += static_cast<double>(g[k]) * it->second;
  }
  return result;
}

PGElement pg_sqrt_even(const PGElement& s) {
  if (s.kind() != Kind::Scalar) throw Error(ErrorCode::KindMismatch, "pg_sqrt_even needs a scalar");
  if (std::abs(s.scalar_coeff(0, 0) - Scalar(1.0)) > 1e-12) {
    throw Error(ErrorCode::NotUnitLeading, "bidegree (0,0) part must be 1");
  }
  PGElement nilpotent(s.context(), Kind::Scalar);
  for (const auto& [deg, c] : s.terms()) {
    if (deg.zeta != deg.zeta_star) {
      if (pgfermi::max_abs(c) == 0.0) continue;
      throw Error(ErrorCode::InvalidParams, "pg_sqrt_even needs equal-bidegree terms only");
    }
    if (deg.zeta > 0) nilpotent.add_term(deg.zeta, deg.zeta_star, c);
  }
  // sqrt(1 + x) = sum_m binom(1/2, m) x^m; x^{n+1} = 0.
  PGElement result = PGElement::scalar(s.context(), 1.0);
  PGElement power = result;
  double binom = 1.0;
  for (int m = 1; m <= s.n(); ++m) {
    power = pg_mul(power, nilpotent);
    binom *= (0.5 - (m - 1)) / m;
    result += binom * power;
  }
  return result;
}

}  // namespace pgfermi
