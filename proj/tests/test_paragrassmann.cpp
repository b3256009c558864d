#include <variant>

#include "doctest.h"
#include "test_support.hpp"

using namespace pgfermi;
using namespace pgfermi::testing;

namespace {

// Random involution S diag(+-1) S^-1; not Hermitian for generic S.
Matrix random_involution(std::mt19937_64& rng, int dim) {
  const Matrix S = random_well_conditioned(rng, dim);
  Vector signs(dim);
  for (int k = 0; k < dim; ++k) signs(k) = (k % 2 == 0) ? 1.0 : -1.0;
  return S * signs.asDiagonal() * invert(S);
}

PGElement random_element(std::mt19937_64& rng, const ContextPtr& ctx, Kind kind) {
  PGElement x(ctx, kind);
  std::uniform_int_distribution<int> deg(0, ctx->n());
  const auto [r, c] = coefficient_shape(kind, ctx->dim());
  for (int t = 0; t < 4; ++t) x.add_term(deg(rng), deg(rng), random_matrix(rng, r, c));
  return x;
}

// Test-only oracle: multiply two monomials by writing out the word
// zeta^i zeta*^k X zeta^j zeta*^l Y and sorting it with adjacent swaps.
enum class Gen { Zeta, ZetaStar };
using Token = std::variant<Gen, Matrix>;

PGElement word_product(const ContextPtr& ctx, int i, int k, Kind xk, const Matrix& X, int j,
                       int l, Kind yk, const Matrix& Y) {
  std::vector<Token> word;
  for (int t = 0; t < i; ++t) word.emplace_back(Gen::Zeta);
  for (int t = 0; t < k; ++t) word.emplace_back(Gen::ZetaStar);
  word.emplace_back(X);
  for (int t = 0; t < j; ++t) word.emplace_back(Gen::Zeta);
  for (int t = 0; t < l; ++t) word.emplace_back(Gen::ZetaStar);
  word.emplace_back(Y);
  std::vector<Kind> kinds;  // kind of each coefficient token, in order
  kinds.push_back(xk);
  kinds.push_back(yk);

  auto rank = [](const Token& t) {
    if (std::holds_alternative<Matrix>(t)) return 2;
    return std::get<Gen>(t) == Gen::Zeta ? 0 : 1;
  };
  double sign = 1.0;
  bool swapped = true;
  while (swapped) {
    swapped = false;
    std::size_t coeff_index = 0;
    for (std::size_t p = 0; p + 1 < word.size(); ++p) {
      const int r0 = rank(word[p]);
      const int r1 = rank(word[p + 1]);
      if (r0 == 2) {
        if (r1 != 2) {
          // X g -> g G(X)
          Matrix moved = ctx->conjugate(kinds[coeff_index], std::get<Matrix>(word[p]));
          word[p] = word[p + 1];
          word[p + 1] = std::move(moved);
          swapped = true;
          continue;
        }
        ++coeff_index;
      } else if (r0 == 1 && r1 == 0) {
        std::swap(word[p], word[p + 1]);
        sign = -sign;
        swapped = true;
      }
    }
  }
  int zi = 0;
  int zk = 0;
  for (const auto& t : word) {
    if (rank(t) == 0) ++zi;
    if (rank(t) == 1) ++zk;
  }
  const Matrix& A = std::get<Matrix>(word[word.size() - 2]);
  const Matrix& B = std::get<Matrix>(word.back());
  Matrix c = xk == Kind::Scalar ? Matrix(A(0, 0) * B) : (yk == Kind::Scalar ? Matrix(A * B(0, 0)) : Matrix(A * B));
  const Kind out = xk == Kind::Scalar ? yk
                   : yk == Kind::Scalar ? xk
                   : (xk == Kind::Covector && yk == Kind::Vector) ? Kind::Scalar
                   : (xk == Kind::Vector && yk == Kind::Covector) ? Kind::Operator
                   : (xk == Kind::Covector) ? Kind::Covector
                   : (yk == Kind::Vector) ? Kind::Vector
                                          : Kind::Operator;
  return PGElement::monomial(ctx, zi, zk, out, sign * c);
}

}  // namespace

TEST_CASE("g_coefficients reference values") {
  CHECK(g_coefficients(1) == std::vector<long long>{0, 1});
  CHECK(g_coefficients(2) == std::vector<long long>{-1, 2, 1});
  CHECK(g_coefficients(3) == std::vector<long long>{0, 1, 0, 1});
  CHECK_THROWS_AS(g_coefficients(0), Error);
  CHECK_THROWS_AS(g_coefficients(17), Error);
}

TEST_CASE("g_coefficients top-end anchors for 4 <= n <= 16") {
  for (int n = 4; n <= 16; ++n) {
    const auto g = g_coefficients(n);
    const long long parity = (n % 2 == 0) ? 1 : -1;
    CHECK(g[n] == 1);
    CHECK(g[n - 1] == 1 + parity);
    CHECK(g[n - 2] == -parity);
    CHECK(g[n - 3] == 0);
  }
}

TEST_CASE("parity_conjugate") {
  const auto ctx = PGContext::fermion(2);
  const auto alg = build_fermion(2);
  CHECK(parity_conjugate(*ctx, Kind::Vector, alg.fock[1]) == -alg.fock[1]);
  CHECK(parity_conjugate(*ctx, Kind::Operator, alg.A) == -alg.A);
  Matrix five = Matrix::Constant(1, 1, 5.0);
  CHECK(parity_conjugate(*ctx, Kind::Scalar, five) == five);
}

TEST_CASE("context rejects non-involutions") {
  CHECK_THROWS_AS(PGContext::make(2, 2.0 * identity(3)), Error);
  CHECK_THROWS_AS(PGContext::make(2, identity(2)), Error);
}

TEST_CASE("generator products") {
  const auto ctx = PGContext::fermion(3);
  const auto z = PGElement::zeta(ctx);
  const auto zs = PGElement::zeta_star(ctx);

  const auto p = zs * z;
  CHECK(p.terms().size() == 1);
  CHECK(p.scalar_coeff(1, 1) == Scalar(-1.0));

  const auto zz = z * zs;
  const auto sq = zz * zz;
  CHECK(sq.terms().size() == 1);
  CHECK(sq.scalar_coeff(2, 2) == Scalar(-1.0));

  CHECK((PGElement::zeta(ctx, 3) * z).terms().empty());
  CHECK((PGElement::zeta_star(ctx, 3) * zs).terms().empty());
  CHECK(PGElement::zeta(ctx, 4).terms().empty());
}

TEST_CASE("kind and context mismatches") {
  const auto ctx = PGContext::fermion(2);
  const auto v = PGElement::vector(ctx, Vector::Unit(3, 0));
  CHECK_THROWS_AS(v * v, Error);
  const auto other = PGContext::fermion(3);
  CHECK_THROWS_AS(v * PGElement::scalar(other, 1.0), Error);
  try {
    v * PGElement::op(ctx, identity(3));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::KindMismatch);
  }
}

TEST_CASE("pg_mul agrees with the word-rewriting oracle") {
  std::mt19937_64 rng(5);
  const std::vector<std::pair<Kind, Kind>> pairs = {
      {Kind::Scalar, Kind::Vector},   {Kind::Operator, Kind::Vector},
      {Kind::Covector, Kind::Operator}, {Kind::Vector, Kind::Covector},
      {Kind::Covector, Kind::Vector}, {Kind::Operator, Kind::Operator},
      {Kind::Vector, Kind::Scalar}};
  for (int n = 1; n <= 4; ++n) {
    const auto ctx = PGContext::make(n, random_involution(rng, n + 1));
    std::uniform_int_distribution<int> deg(0, n);
    for (const auto& [xk, yk] : pairs) {
      for (int trial = 0; trial < 10; ++trial) {
        const int i = deg(rng), k = deg(rng), j = deg(rng), l = deg(rng);
        const auto [xr, xc] = coefficient_shape(xk, n + 1);
        const auto [yr, yc] = coefficient_shape(yk, n + 1);
        const Matrix X = random_matrix(rng, xr, xc);
        const Matrix Y = random_matrix(rng, yr, yc);
        const auto fast = PGElement::monomial(ctx, i, k, xk, X) * PGElement::monomial(ctx, j, l, yk, Y);
        const auto slow = word_product(ctx, i, k, xk, X, j, l, yk, Y);
        CHECK((fast - slow).max_abs() < 1e-10);
      }
    }
  }
}

TEST_CASE("associativity on random triples") {
  std::mt19937_64 rng(17);
  const std::vector<std::array<Kind, 3>> triples = {
      {Kind::Covector, Kind::Operator, Kind::Vector},
      {Kind::Operator, Kind::Operator, Kind::Vector},
      {Kind::Vector, Kind::Covector, Kind::Operator},
      {Kind::Scalar, Kind::Vector, Kind::Covector},
      {Kind::Vector, Kind::Scalar, Kind::Covector}};
  for (int n = 1; n <= 4; ++n) {
    for (bool hermitian : {true, false}) {
      const auto ctx = hermitian ? PGContext::fermion(n)
                                 : PGContext::make(n, random_involution(rng, n + 1));
      for (const auto& t : triples) {
        const auto x = random_element(rng, ctx, t[0]);
        const auto y = random_element(rng, ctx, t[1]);
        const auto z = random_element(rng, ctx, t[2]);
        const auto lhs = (x * y) * z;
        const auto rhs = x * (y * z);
        CHECK((lhs - rhs).max_abs() <= 1e-10 * std::max(1.0, lhs.max_abs()));
      }
    }
  }
}

TEST_CASE("adjoint is an involutive anti-homomorphism") {
  std::mt19937_64 rng(23);
  for (int n = 1; n <= 4; ++n) {
    const auto ctx = PGContext::make(n, random_involution(rng, n + 1));
    const auto x = random_element(rng, ctx, Kind::Operator);
    const auto y = random_element(rng, ctx, Kind::Vector);
    const auto w = random_element(rng, ctx, Kind::Covector);
    CHECK((pg_adjoint(pg_adjoint(x)) - x).max_abs() < 1e-12);
    CHECK((pg_adjoint(pg_adjoint(y)) - y).max_abs() < 1e-12);

    const auto lhs = pg_adjoint(x * y);
    const auto rhs = pg_adjoint(y) * pg_adjoint(x);
    CHECK((lhs - rhs).max_abs() <= 1e-10 * std::max(1.0, lhs.max_abs()));

    const auto lhs2 = pg_adjoint(w * x);
    const auto rhs2 = pg_adjoint(x) * pg_adjoint(w);
    CHECK((lhs2 - rhs2).max_abs() <= 1e-10 * std::max(1.0, lhs2.max_abs()));
  }
}

TEST_CASE("adjoint examples") {
  const auto ctx = PGContext::fermion(2);
  const auto alg = build_fermion(2);
  // (zeta v)^dag = v^dag zeta* = zeta* (v^dag P)
  const auto x = PGElement::monomial(ctx, 1, 0, Kind::Vector, alg.fock[1]);
  const auto xd = pg_adjoint(x);
  CHECK(xd.kind() == Kind::Covector);
  CHECK(xd.terms().size() == 1);
  CHECK(xd.coeff(0, 1) == Matrix(-alg.fock[1].transpose()));

  const auto even = PGElement::scalar(ctx, 1.0) + PGElement::zeta(ctx) * PGElement::zeta_star(ctx);
  CHECK((pg_adjoint(even) - even).max_abs() == 0.0);

  Matrix M(3, 3);
  M << 1, Scalar(0, 2), 3, 4, 5, 6, 7, 8, Scalar(9, -1);
  CHECK(pg_adjoint(PGElement::op(ctx, M)).coeff(0, 0) == Matrix(M.adjoint()));
}

TEST_CASE("generators move past coefficients by parity conjugation") {
  for (int n = 1; n <= 4; ++n) {
    const auto ctx = PGContext::fermion(n);
    const auto z = PGElement::zeta(ctx);
    const auto zs = PGElement::zeta_star(ctx);
    for (int k = 0; k <= n; ++k) {
      const Vector e = Vector::Unit(n + 1, k);
      const auto v = PGElement::vector(ctx, e);
      const auto pv = PGElement::vector(ctx, ctx->conjugate(Kind::Vector, e));
      CHECK(((z * v) - (pv * z)).max_abs() == 0.0);
      CHECK(((zs * v) - (pv * zs)).max_abs() == 0.0);
    }
    const auto A = PGElement::op(ctx, build_fermion(n).A);
    CHECK(((z * A) + (A * z)).max_abs() == 0.0);
  }
}

TEST_CASE("products with n+1 generators vanish") {
  std::mt19937_64 rng(29);
  for (int n = 1; n <= 5; ++n) {
    const auto ctx = PGContext::make(n, random_involution(rng, n + 1));
    auto prod = PGElement::op(ctx, random_matrix(rng, n + 1, n + 1));
    auto prod_star = prod;
    for (int t = 0; t <= n; ++t) {
      prod = prod * PGElement::zeta(ctx);
      prod_star = PGElement::zeta_star(ctx) * prod_star;
    }
    CHECK(prod.terms().empty());
    CHECK(prod_star.terms().empty());
  }
}

TEST_CASE("pg_integrate") {
  const auto ctx1 = PGContext::fermion(1);
  CHECK(pg_integrate(PGElement::scalar(ctx1, 1.0))(0, 0) == Scalar(0.0));

  for (int n = 1; n <= 5; ++n) {
    const auto ctx = PGContext::fermion(n);
    const auto g = g_coefficients(n);
    for (int i = 0; i <= n; ++i) {
      for (int k = 0; k <= n; ++k) {
        const auto x = PGElement::monomial(ctx, i, k, Kind::Operator, identity(n + 1));
        const Matrix expected = i == k ? Matrix(double(g[k]) * identity(n + 1))
                                       : Matrix(Matrix::Zero(n + 1, n + 1));
        CHECK(pg_integrate(x) == expected);
      }
    }
  }

  // (1 + zeta zeta*)|0><0| + zeta zeta* |1><1| integrates to the identity.
  const Matrix p0 = Vector::Unit(2, 0) * Vector::Unit(2, 0).adjoint();
  const Matrix p1 = Vector::Unit(2, 1) * Vector::Unit(2, 1).adjoint();
  PGElement kernel(ctx1, Kind::Operator);
  kernel.add_term(0, 0, p0);
  kernel.add_term(1, 1, p0 + p1);
  CHECK(pg_integrate(kernel) == identity(2));
}

TEST_CASE("pg_sqrt_even") {
  SUBCASE("n = 1") {
    const auto ctx = PGContext::fermion(1);
    const auto s = PGElement::scalar(ctx, 1.0) + PGElement::zeta(ctx) * PGElement::zeta_star(ctx);
    const auto t = pg_sqrt_even(s);
    CHECK(t.scalar_coeff(0, 0) == Scalar(1.0));
    CHECK(t.scalar_coeff(1, 1) == Scalar(0.5));
    CHECK(t.terms().size() == 2);
  }
  SUBCASE("n = 2") {
    const auto ctx = PGContext::fermion(2);
    const auto s = PGElement::scalar(ctx, 1.0) + PGElement::zeta(ctx) * PGElement::zeta_star(ctx);
    const auto t = pg_sqrt_even(s);
    CHECK(t.scalar_coeff(1, 1) == Scalar(0.5));
    CHECK(t.scalar_coeff(2, 2) == Scalar(0.125));
    CHECK(((t * t) - s).max_abs() < 1e-15);
  }
  SUBCASE("unit") {
    const auto ctx = PGContext::fermion(3);
    const auto t = pg_sqrt_even(PGElement::scalar(ctx, 1.0));
    CHECK(t.terms().size() == 1);
    CHECK(t.scalar_coeff(0, 0) == Scalar(1.0));
  }
  SUBCASE("squares back for random even elements") {
    std::mt19937_64 rng(31);
    for (int n = 1; n <= 8; ++n) {
      const auto ctx = PGContext::make(n, random_involution(rng, n + 1));
      PGElement s = PGElement::scalar(ctx, 1.0);
      for (int k = 1; k <= n; ++k) s.add_term(k, k, random_matrix(rng, 1, 1));
      const auto t = pg_sqrt_even(s);
      CHECK(((t * t) - s).max_abs() < 1e-10 * std::max(1.0, s.max_abs() * s.max_abs()));
    }
  }
  SUBCASE("errors") {
    const auto ctx = PGContext::fermion(2);
    try {
      pg_sqrt_even(PGElement::scalar(ctx, 2.0));
      FAIL("expected NotUnitLeading");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotUnitLeading);
    }
    CHECK_THROWS_AS(pg_sqrt_even(PGElement::scalar(ctx, 1.0) + PGElement::zeta(ctx)), Error);
    CHECK_THROWS_AS(pg_sqrt_even(PGElement::vector(ctx, Vector::Unit(3, 0))), Error);
  }
}
