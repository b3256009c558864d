#include "pgfermi/json_io.hpp"

#include <cmath>
#include <string>

namespace pgfermi::json {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) fail(std::string("missing field '") + name + "'");
  return j.at(name);
}

long long integer(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_number_integer()) fail(std::string("field '") + name + "' must be an integer");
  return v.get<long long>();
}

double finite_number(const json& j) {
  if (!j.is_number()) fail("expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail("non-finite number");
  return v;
}

}  // namespace

json scalar_to_json(Scalar s) { return json::array({s.real(), s.imag()}); }

Scalar scalar_from_json(const json& j) {
  if (j.is_number()) return {finite_number(j), 0.0};
  if (!j.is_array() || j.size() != 2) fail("scalar must be [re, im]");
  return {finite_number(j[0]), finite_number(j[1])};
}

json matrix_to_json(const Matrix& m) {
  json data = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(scalar_to_json(m(r, c)));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix matrix_from_json(const json& j) {
  const long long rows = integer(j, "rows");
  const long long cols = integer(j, "cols");
  const json& data = field(j, "data");
  if (rows < 0 || cols < 0) fail("negative matrix dimension");
  if (!data.is_array() || static_cast<long long>(data.size()) != rows * cols) {
    fail("matrix data length does not equal rows * cols");
  }
  Matrix m(rows, cols);
  for (long long r = 0; r < rows; ++r) {
    for (long long c = 0; c < cols; ++c) m(r, c) = scalar_from_json(data[r * cols + c]);
  }
  return m;
}

Vector vector_from_json(const json& j) {
  const Matrix m = matrix_from_json(j);
  if (m.cols() != 1) fail("vector must have cols = 1");
  return m.col(0);
}

json to_json(const FermionAlgebra& alg) {
  json fock = json::array();
  for (const auto& v : alg.fock) fock.push_back(matrix_to_json(v));
  return {{"n", alg.n}, {"A", matrix_to_json(alg.A)}, {"fock", std::move(fock)}};
}

json to_json(const CandidatePair& pair) {
  return {{"n", pair.n}, {"a", matrix_to_json(pair.a)}, {"b", matrix_to_json(pair.b)}};
}

CandidatePair pair_from_json(const json& j) {
  CandidatePair pair;
  pair.n = static_cast<int>(integer(j, "n"));
  pair.a = matrix_from_json(field(j, "a"));
  pair.b = matrix_from_json(field(j, "b"));
  try {
    pair.validate();
  } catch (const Error& e) {
    fail(e.what());
  }
  return pair;
}

json to_json(const PseudoFermionSystem& sys) {
  json psi = json::array();
  json phi = json::array();
  for (const auto& v : sys.psi) psi.push_back(matrix_to_json(v));
  for (const auto& v : sys.phi) phi.push_back(matrix_to_json(v));
  return {{"n", sys.n()},
          {"a", matrix_to_json(sys.pair.a)},
          {"b", matrix_to_json(sys.pair.b)},
          {"psi", std::move(psi)},
          {"phi", std::move(phi)},
          {"eta", matrix_to_json(sys.eta)}};
}

ExampleParams example_params_from_json(ExampleKind kind, const json& j) {
  if (!j.is_null() && !j.is_object()) fail("example parameters must be a JSON object");
  ExampleParams p;
  p.kind = kind;
  auto read = [&](const char* name, Scalar& target) {
    if (j.is_object() && j.contains(name)) target = scalar_from_json(j.at(name));
  };
  read("alpha", p.alpha);
  read("beta", p.beta);
  read("gamma", p.gamma);
  read("delta", p.delta);
  read("p", p.p);
  if (j.is_object() && j.contains("alphas")) {
    const json& list = j.at("alphas");
    if (!list.is_array()) fail("alphas must be an array");
    for (const auto& a : list) p.alphas.push_back(scalar_from_json(a));
  }
  return p;
}

json to_json(const PGElement& x) {
  json terms = json::array();
  for (const auto& [deg, c] : x.terms()) {
    json coeff = x.kind() == Kind::Scalar ? scalar_to_json(c(0, 0)) : matrix_to_json(c);
    terms.push_back({{"i", deg.zeta}, {"k", deg.zeta_star}, {"coeff", std::move(coeff)}});
  }
  return {{"n", x.n()}, {"kind", to_string(x.kind())}, {"terms", std::move(terms)}};
}

PGElement pg_element_from_json(const json& j, const ContextPtr& ctx) {
  if (integer(j, "n") != ctx->n()) fail("element degree does not match context");
  const json& kind_field = field(j, "kind");
  if (!kind_field.is_string()) fail("kind must be a string");
  const std::string name = kind_field.get<std::string>();
  Kind kind;
  if (name == "scalar") kind = Kind::Scalar;
  else if (name == "vector") kind = Kind::Vector;
  else if (name == "covector") kind = Kind::Covector;
  else if (name == "operator") kind = Kind::Operator;
  else fail("unknown kind '" + name + "'");

  PGElement x(ctx, kind);
  const json& terms = field(j, "terms");
  if (!terms.is_array()) fail("terms must be an array");
  for (const auto& t : terms) {
    const long long i = integer(t, "i");
    const long long k = integer(t, "k");
    if (i < 0 || k < 0 || i > ctx->n() || k > ctx->n()) fail("bidegree out of range");
    Matrix c;
    if (kind == Kind::Scalar) {
      c = Matrix::Constant(1, 1, scalar_from_json(field(t, "coeff")));
    } else {
      c = matrix_from_json(field(t, "coeff"));
    }
    try {
      x.add_term(static_cast<int>(i), static_cast<int>(k), c);
    } catch (const Error& e) {
      fail(e.what());
    }
  }
  return x;
}

json to_json(const VerificationReport& report) {
  json checks = json::array();
  for (const auto& c : report.checks()) {
    checks.push_back({{"name", c.name},
                      {"residual", std::isfinite(c.residual) ? json(c.residual) : json(nullptr)},
                      {"threshold", c.threshold},
                      {"pass", c.pass},
                      {"anchor", c.anchor}});
  }
  return {{"checks", std::move(checks)}, {"overall", report.overall()}};
}

namespace {

json defects_to_json(const std::map<Bidegree, Scalar>& defects) {
  json out = json::array();
  for (const auto& [deg, d] : defects) {
    out.push_back({{"i", deg.zeta}, {"k", deg.zeta_star}, {"defect", scalar_to_json(d)}});
  }
  return out;
}

}  // namespace

json to_json(const NormalizationReport& report) {
  return {{"pairing", to_json(report.pairing)},
          {"defect_by_bidegree", defects_to_json(report.defect_by_bidegree)},
          {"factored_pairing", to_json(report.factored_pairing)},
          {"factored_defect_by_bidegree", defects_to_json(report.factored_defect_by_bidegree)}};
}

json to_json(const FiniteLevelSystem& sys) {
  json eps = json::array();
  for (Scalar e : sys.eps) eps.push_back(scalar_to_json(e));
  return {{"eps", std::move(eps)}, {"Psi", matrix_to_json(sys.Psi)}, {"H", matrix_to_json(sys.H)}};
}

FiniteLevelSystem finite_level_from_json(const json& j, const Tolerance& tol) {
  const json& eps_field = field(j, "eps");
  if (!eps_field.is_array() || eps_field.size() < 2) fail("eps must list at least two levels");
  std::vector<Scalar> eps;
  for (const auto& e : eps_field) eps.push_back(scalar_from_json(e));
  const Matrix Psi = j.contains("Psi") ? matrix_from_json(j.at("Psi"))
                                       : identity(eps.size());
  return from_spectrum(eps, Psi, tol);
}

}  // namespace pgfermi::json
