#include "doctest.h"
#include "test_support.hpp"

using namespace pgfermi;
using namespace pgfermi::testing;

namespace {

ExampleParams unit_params(ExampleKind kind) {
  ExampleParams p;
  p.kind = kind;
  return p;
}

std::vector<double> sorted_real_eigenvalues(const Matrix& m) {
  Eigen::ComplexEigenSolver<Matrix> solver(m);
  std::vector<double> values;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    CHECK(std::abs(solver.eigenvalues()(i).imag()) < 1e-8);
    values.push_back(solver.eigenvalues()(i).real());
  }
  std::sort(values.begin(), values.end());
  return values;
}

}  // namespace

TEST_CASE("example_family matrices") {
  SUBCASE("ex1 alpha = beta = 1") {
    const auto pair = example_family(unit_params(ExampleKind::Ex1));
    Matrix a(3, 3), b(3, 3);
    a << 0, 0, 0, 1, 0, 0, 0, 2, 0;
    b << 0, 1, 0, 0, 0, 0.5, 0, 0, 0;
    CHECK(pair.n == 2);
    CHECK(max_abs(pair.a - a) < 1e-15);
    CHECK(max_abs(pair.b - b) < 1e-15);
  }
  SUBCASE("ex2 unit parameters") {
    const auto pair = example_family(unit_params(ExampleKind::Ex2));
    Matrix a(4, 4), b(4, 4);
    a << 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 1, -1, 0, 0, 1, -1;
    b << 0, 0, 1, -1, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0;
    CHECK(pair.a == a);
    CHECK(pair.b == b);
  }
  SUBCASE("ex3 unit alphas is the Hermitian shift") {
    auto p = unit_params(ExampleKind::Ex3);
    p.alphas = {1.0, 1.0, 1.0};
    const auto pair = example_family(p);
    CHECK(pair.a == build_fermion(3).A);
    CHECK(pair.b == Matrix(pair.a.transpose()));
    CHECK(is_hermitian_pair(pair));
  }
  SUBCASE("invalid parameters") {
    auto p = unit_params(ExampleKind::Ex1);
    p.beta = -1.0;
    CHECK_THROWS_AS(example_family(p), Error);
    p = unit_params(ExampleKind::Ex2);
    p.gamma = 0.0;
    CHECK_THROWS_AS(example_family(p), Error);
    p = unit_params(ExampleKind::Ex3);
    p.alphas = {1.0, 0.0};
    CHECK_THROWS_AS(example_family(p), Error);
    p.alphas = {1.0};
    CHECK_THROWS_AS(example_family(p), Error);
    p = unit_params(ExampleKind::Ex2);
    p.p = 0.0;
    CHECK_THROWS_AS(example_family(p), Error);
  }
}

TEST_CASE("a diagonal placement of the ex3 b entries breaks the relation") {
  // Reading alpha_2^{-1} at (3,3) instead of (3,2).
  auto p = unit_params(ExampleKind::Ex3);
  p.alphas = {2.0, 3.0, 5.0};
  auto pair = example_family(p);
  pair.b(2, 2) = pair.b(2, 1);
  pair.b(2, 1) = 0.0;
  CHECK_FALSE(verify_pf_relation(pair).overall());
}

TEST_CASE("verify_pf_relation") {
  CHECK(verify_pf_relation(hermitian_pair(2)).overall());
  CHECK(verify_pf_relation(example_family(unit_params(ExampleKind::Ex2))).overall());

  auto bad = hermitian_pair(2);
  bad.b *= 2.0;
  const auto report = verify_pf_relation(bad);
  CHECK_FALSE(report.overall());
  // (A, 2A^dag): 2 A A^dag + 4 (A^dag)^2 A^2 - 1 = diag(1, 1, 3).
  CHECK(report.find("pf_relation")->residual == doctest::Approx(3.0));
  CHECK(report.find("nilpotency_b")->pass);
}

TEST_CASE("find_vacua on the example families") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p1 = random_example(rng, ExampleKind::Ex1);
    auto [psi0, phi0] = find_vacua(example_family(p1));
    CHECK(distance_up_to_scale(psi0, Vector::Unit(3, 2)) < 1e-10);
    CHECK(std::abs(phi0.dot(psi0) - 1.0) < 1e-12);

    const auto p2 = random_example(rng, ExampleKind::Ex2);
    std::tie(psi0, phi0) = find_vacua(example_family(p2));
    Vector expected_psi(4);
    expected_psi << 0, 0, 1, p2.delta;
    CHECK(distance_up_to_scale(psi0, expected_psi) < 1e-10);
    CHECK(distance_up_to_scale(phi0, Vector::Unit(4, 3)) < 1e-10);
    CHECK(std::abs(psi0.norm() - 1.0) < 1e-14);

    const auto p3 = random_example(rng, ExampleKind::Ex3, 2 + trial % 5);
    std::tie(psi0, phi0) = find_vacua(example_family(p3));
    CHECK(distance_up_to_scale(psi0, Vector::Unit(psi0.size(), 0)) < 1e-12);
    CHECK(distance_up_to_scale(phi0, Vector::Unit(psi0.size(), 0)) < 1e-12);
  }
}

TEST_CASE("find_vacua errors") {
  CandidatePair pair{1, identity(2), identity(2)};
  CHECK_THROWS_AS(find_vacua(pair), Error);
  // a psi_0 = 0 and b^dag phi_0 = 0 with <phi_0|psi_0> = 0.
  Matrix a = Matrix::Zero(2, 2);
  a(0, 1) = 1.0;
  CandidatePair orth{1, a, a};
  try {
    find_vacua(orth);
    FAIL("expected PairingSingular");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PairingSingular);
  }
}

TEST_CASE("build_system examples") {
  SUBCASE("Hermitian pair") {
    for (int n = 1; n <= 6; ++n) {
      const auto sys = build_system(hermitian_pair(n));
      const auto alg = build_fermion(n);
      for (int k = 0; k <= n; ++k) {
        CHECK(max_abs(sys.psi[k] - alg.fock[k]) < 1e-14);
        CHECK(max_abs(sys.phi[k] - alg.fock[k]) < 1e-14);
      }
      CHECK(max_abs(sys.eta - identity(n + 1)) < 1e-14);
      CHECK(verify_system(sys).overall());
    }
  }
  SUBCASE("ex1 unit parameters") {
    const auto sys = build_system(example_family(unit_params(ExampleKind::Ex1)));
    CHECK(max_abs(sys.psi[0] - Vector::Unit(3, 2)) < 1e-14);
    CHECK(max_abs(sys.psi[1] - 0.5 * Vector::Unit(3, 1)) < 1e-14);
    CHECK(max_abs(sys.psi[2] - 0.5 * Vector::Unit(3, 0)) < 1e-14);
    CHECK(verify_system(sys).overall());
  }
  SUBCASE("ex3 alphas (2, 3)") {
    auto p = unit_params(ExampleKind::Ex3);
    p.alphas = {2.0, 3.0};
    const auto sys = build_system(example_family(p));
    CHECK(max_abs(sys.psi[0] - Vector::Unit(3, 0)) < 1e-14);
    CHECK(max_abs(sys.psi[1] - Vector::Unit(3, 1) / 2.0) < 1e-14);
    CHECK(max_abs(sys.psi[2] - Vector::Unit(3, 2) / 6.0) < 1e-14);
  }
}

TEST_CASE("build_system errors") {
  // a has vacuum e_1, b^dag has a vacuum pairing with it, but b^2 e_1 != 0.
  Matrix a = Matrix::Zero(2, 2);
  a(0, 1) = 1.0;
  CandidatePair loop{1, a, Matrix::Ones(2, 2)};
  try {
    build_system(loop);
    FAIL("expected TerminationFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TerminationFailure);
  }
}

TEST_CASE("pf_number_operator") {
  CHECK(max_abs(pf_number_operator(hermitian_pair(2)) - diag({0.0, 1.0, 2.0})) == 0.0);
  const auto ev = sorted_real_eigenvalues(pf_number_operator(example_family(unit_params(ExampleKind::Ex2))));
  for (int k = 0; k < 4; ++k) CHECK(ev[k] == doctest::Approx(k).epsilon(1e-9));
}

TEST_CASE("defect measures") {
  const auto herm = build_system(hermitian_pair(3));
  CHECK(completeness_defect(herm) == 0.0);
  CHECK(pseudo_adjoint_defect(herm) == 0.0);

  auto perturbed = herm;
  perturbed.phi[1] += 0.1 * Vector::Unit(4, 0);
  CHECK(completeness_defect(perturbed) > 0.05);

  const auto ex2 = build_system(example_family(unit_params(ExampleKind::Ex2)));
  auto ex2_perturbed = ex2;
  ex2_perturbed.phi[1] += 0.1 * Vector::Unit(4, 0);
  CHECK(completeness_defect(ex2_perturbed) > 0.05);

  // a from ex1, b from an ex3 system of the same size.
  const auto ex1 = build_system(example_family(unit_params(ExampleKind::Ex1)));
  auto p3 = unit_params(ExampleKind::Ex3);
  p3.alphas = {2.0, 3.0};
  auto mismatched = ex1;
  mismatched.pair.b = example_family(p3).b;
  CHECK(pseudo_adjoint_defect(mismatched) > 0.1);
}

TEST_CASE("assemble_system orders bases by N_pf eigenvalue") {
  const auto sys = build_system(example_family(unit_params(ExampleKind::Ex2)));
  std::vector<Vector> psi(sys.psi.rbegin(), sys.psi.rend());
  std::vector<Vector> phi(sys.phi.rbegin(), sys.phi.rend());
  const auto reordered = assemble_system(sys.pair, psi, phi);
  for (int k = 0; k < sys.dim(); ++k) CHECK(max_abs(reordered.psi[k] - sys.psi[k]) == 0.0);
  CHECK(max_abs(reordered.P - sys.P) < 1e-14);
}

TEST_CASE("random parameter sweep for all example families") {
  std::mt19937_64 rng(43);
  for (auto kind : {ExampleKind::Ex1, ExampleKind::Ex2, ExampleKind::Ex3}) {
    for (int trial = 0; trial < 200; ++trial) {
      const auto params = random_example(rng, kind, 2 + trial % 6);
      const auto pair = example_family(params);
      CHECK(verify_pf_relation(pair).overall());
      const auto sys = build_system(pair);
      CHECK(completeness_defect(sys) < 1e-9);
      CHECK(pseudo_adjoint_defect(sys) < 1e-9);
      const auto report = verify_system(sys);
      if (!report.overall()) {
        for (const auto& c : report.checks())
          if (!c.pass) MESSAGE(std::string(to_string(kind)) << " n=" << sys.n() << " " << c.name << " " << c.residual << " > " << c.threshold);
      }
      CHECK(report.overall());

      const auto ev = sorted_real_eigenvalues(sys.N_pf);
      for (int k = 0; k <= sys.n(); ++k) CHECK(std::abs(ev[k] - k) < 1e-9);
    }
  }
}

TEST_CASE("raw ladders telescope: <phi_k|psi_k> = <phi_0|psi_0>") {
  std::mt19937_64 rng(47);
  for (auto kind : {ExampleKind::Ex1, ExampleKind::Ex2, ExampleKind::Ex3}) {
    const auto pair = example_family(random_example(rng, kind, 4));
    const Vector psi0 = nullspace_1d(pair.a);
    const Vector phi0 = nullspace_1d(pair.b.adjoint());
    const Scalar base = phi0.dot(psi0);
    Vector psi = psi0;
    Vector phi = phi0;
    for (int k = 1; k <= pair.n; ++k) {
      psi = pair.b * psi;
      phi = pair.a.adjoint() * phi;
      CHECK(std::abs(phi.dot(psi) - base) < 1e-9 * std::max(1.0, std::abs(base)));
    }
    CHECK(max_abs(pair.b * psi) < 1e-9 * std::max(1.0, max_abs(psi)));
  }
}

TEST_CASE("ex2 at the small-delta corner is limited by input rounding") {
  // With |delta| = 0.1 the matrices carry entries ~beta/delta^2 and a nilpotent
  // 2x2 block whose square cancels between terms of size (beta/delta)^2. Rounding
  // those entries to double already breaks the relation by far more than 1 ulp;
  // a long-double evaluation of the same rounded matrices sees the same defect.
  ExampleParams p;
  p.kind = ExampleKind::Ex2;
  p.alpha = std::polar(0.2, 0.3);
  p.beta = std::polar(9.0, 1.1);
  p.gamma = std::polar(0.1, 2.0);
  p.delta = std::polar(0.1, -0.7);
  const auto pair = example_family(p);
  const double residual = max_abs(pair.a * pair.b +
                                  matrix_power(pair.b, 3) * matrix_power(pair.a, 3) - identity(4));

  using LMatrix = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;
  const LMatrix a = pair.a.cast<std::complex<long double>>();
  const LMatrix b = pair.b.cast<std::complex<long double>>();
  const LMatrix lres = a * b + b * b * b * a * a * a - LMatrix::Identity(4, 4);
  const double long_residual = static_cast<double>(lres.cwiseAbs().maxCoeff());

  CHECK(long_residual > 1e-12);
  CHECK(residual < 1e3 * long_residual + 1e-12);
  CHECK(residual < 1e-6);

  // The construction itself is still sound: the spectrum stays integral.
  const auto sys = build_system(pair);
  const auto ev = sorted_real_eigenvalues(sys.N_pf);
  for (int k = 0; k <= 3; ++k) CHECK(std::abs(ev[k] - k) < 1e-6);
}
