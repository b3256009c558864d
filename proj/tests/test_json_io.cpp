#include "doctest.h"
#include "pgfermi/json_io.hpp"
#include "test_support.hpp"

using namespace pgfermi;
using namespace pgfermi::testing;
namespace pj = pgfermi::json;

TEST_CASE("matrix encoding") {
  Matrix m(2, 3);
  m << 1, Scalar(2, -1), 3, 4, 5, Scalar(0, 6);
  const auto j = pj::matrix_to_json(m);
  CHECK(j["rows"] == 2);
  CHECK(j["cols"] == 3);
  CHECK(j["data"][1] == nlohmann::json::array({2.0, -1.0}));
  CHECK(pj::matrix_from_json(j) == m);
}

TEST_CASE("matrix parser rejects malformed input") {
  auto j = pj::matrix_to_json(identity(2));
  j["data"].erase(0);
  CHECK_THROWS_AS(pj::matrix_from_json(j), Error);
  CHECK_THROWS_AS(pj::matrix_from_json(nlohmann::json::parse(R"({"rows": 1, "cols": 1})")), Error);
  CHECK_THROWS_AS(pj::matrix_from_json(nlohmann::json::parse(R"({"rows": 1, "cols": 1, "data": [[1]]})")), Error);
  CHECK_THROWS_AS(pj::matrix_from_json(nlohmann::json::parse(R"({"rows": 1, "cols": 1, "data": [["x", 0]]})")), Error);
}

TEST_CASE("PGElement JSON round trip preserves every coefficient") {
  std::mt19937_64 rng(101);
  for (int n = 1; n <= 4; ++n) {
    const auto ctx = PGContext::fermion(n);
    for (Kind kind : {Kind::Scalar, Kind::Vector, Kind::Covector, Kind::Operator}) {
      PGElement x(ctx, kind);
      const auto [r, c] = coefficient_shape(kind, n + 1);
      for (int t = 0; t <= n; ++t) x.add_term(t, n - t, random_matrix(rng, r, c));
      const auto j = pj::to_json(x);
      CHECK(j["kind"] == to_string(kind));
      const auto back = pj::pg_element_from_json(nlohmann::json::parse(j.dump()), ctx);
      CHECK((back - x).max_abs() == 0.0);
    }
  }
  const auto ctx = PGContext::fermion(2);
  CHECK_THROWS_AS(pj::pg_element_from_json(nlohmann::json::parse(R"({"n": 3, "kind": "scalar", "terms": []})"), ctx), Error);
  CHECK_THROWS_AS(pj::pg_element_from_json(nlohmann::json::parse(R"({"n": 2, "kind": "spinor", "terms": []})"), ctx), Error);
}

TEST_CASE("system and pair documents") {
  const auto pair = hermitian_pair(2);
  const auto j = pj::to_json(pair);
  const auto back = pj::pair_from_json(j);
  CHECK(back.n == 2);
  CHECK(back.a == pair.a);

  const auto sys = build_system(pair);
  const auto sj = pj::to_json(sys);
  for (const char* key : {"n", "a", "b", "psi", "phi", "eta"}) CHECK(sj.contains(key));
  CHECK(sj["psi"].size() == 3);

  const auto alg = pj::to_json(build_fermion(2));
  CHECK(alg["fock"].size() == 3);

  auto bad = j;
  bad["n"] = 3;
  CHECK_THROWS_AS(pj::pair_from_json(bad), Error);
}

TEST_CASE("finite-level documents") {
  const auto sys = pj::finite_level_from_json(nlohmann::json::parse(R"({"eps": [[0,0],[1,0],[4,0]]})"));
  CHECK(sys.n == 2);
  CHECK(sys.Psi == identity(3));
  CHECK_THROWS_AS(pj::finite_level_from_json(nlohmann::json::parse(R"({"eps": [[0,0]]})")), Error);
}

TEST_CASE("report encoding") {
  VerificationReport r;
  r.add_residual("x", "x = 0", 0.5, 1.0);
  r.add_failure("y", "y = 0", "not computed");
  const auto j = pj::to_json(r);
  CHECK(j["overall"] == false);
  CHECK(j["checks"][1]["residual"].is_null());
  CHECK(j["checks"][0]["anchor"] == "x = 0");
}
