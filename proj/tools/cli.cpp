#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pgfermi/json_io.hpp"

namespace pgfermi::cli {

namespace pj = pgfermi::json;
using nlohmann::json;

namespace {

[[noreturn]] void input_error(const std::string& what) {
  throw Error(ErrorCode::InvalidParams, what);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

json parse_json_text(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string(what) + ": " + e.what());
  }
}

// Default ex3 superdiagonal when none is given: 1, 2, ..., n.
std::vector<Scalar> default_alphas(int n) {
  std::vector<Scalar> out;
  for (int i = 1; i <= n; ++i) out.emplace_back(static_cast<double>(i), 0.0);
  return out;
}

CandidatePair pair_from_example(const std::string& name, const json& params,
                                std::optional<int> n) {
  if (name == "hermitian") {
    int degree = n.value_or(1);
    if (params.is_object() && params.contains("n")) degree = params.at("n").get<int>();
    check_degree(degree);
    return hermitian_pair(degree);
  }
  const ExampleKind kind = parse_example_kind(name);
  ExampleParams p = pj::example_params_from_json(kind, params);
  if (kind == ExampleKind::Ex3 && p.alphas.empty()) p.alphas = default_alphas(n.value_or(3));
  CandidatePair pair = example_family(p);
  if (n && *n != pair.n) {
    input_error("--n " + std::to_string(*n) + " does not match the " + name +
                " family (n = " + std::to_string(pair.n) + ")");
  }
  return pair;
}

CandidatePair load_pair(const RunConfig& cfg) {
  if (cfg.input_path) {
    const json doc = read_json_file(*cfg.input_path);
    if (doc.is_object() && doc.contains("example")) {
      const json params = doc.contains("params") ? doc.at("params") : json(nullptr);
      std::optional<int> n = cfg.n;
      if (doc.contains("n")) n = doc.at("n").get<int>();
      return pair_from_example(doc.at("example").get<std::string>(), params, n);
    }
    return pj::pair_from_json(doc);
  }
  if (cfg.example) {
    const json params = cfg.params ? parse_json_text(*cfg.params, "--params") : json(nullptr);
    return pair_from_example(*cfg.example, params, cfg.n);
  }
  input_error("no input: give --input FILE or --example NAME");
}

const char* status(bool pass) { return pass ? "PASS" : "FAIL"; }

std::string format_residual(double r) {
  if (std::isinf(r)) return "inf";
  std::ostringstream os;
  os << std::scientific << std::setprecision(3) << r;
  return os.str();
}

void print_report_table(const VerificationReport& report, std::ostream& out) {
  std::size_t width = 5;
  for (const auto& c : report.checks()) width = std::max(width, c.name.size());
  out << std::left << std::setw(static_cast<int>(width) + 2) << "check" << std::setw(12)
      << "residual" << std::setw(12) << "threshold" << std::setw(7) << "status"
      << "identity\n";
  for (const auto& c : report.checks()) {
    out << std::left << std::setw(static_cast<int>(width) + 2) << c.name << std::setw(12)
        << format_residual(c.residual) << std::setw(12) << format_residual(c.threshold)
        << std::setw(7) << status(c.pass) << c.anchor << '\n';
  }
  out << "overall: " << status(report.overall()) << '\n';
}

void print_element_table(const PGElement& x, std::ostream& out, const std::string& indent) {
  const PGElement shown = x.pruned(1e-14);
  for (const auto& [deg, c] : shown.terms()) {
    out << indent << "zeta^" << deg.zeta << " zeta*^" << deg.zeta_star << ":";
    if (c.size() == 1) {
      out << ' ' << format_scalar(c(0, 0)) << '\n';
    } else {
      out << '\n' << format_matrix(c.rows() == 1 || c.cols() == 1 ? Matrix(c.transpose()) : c,
                                   indent + "  ");
    }
  }
}

void emit(const json& doc, std::ostream& out) { out << doc.dump(2) << '\n'; }

int exit_for(const VerificationReport& report) {
  return report.overall() ? kPass : kVerificationFailure;
}

std::vector<Side> requested_sides(const std::string& side) {
  if (side == "right") return {Side::Right};
  if (side == "left") return {Side::Left};
  if (side == "both") return {Side::Right, Side::Left};
  input_error("--side must be right, left or both");
}

}  // namespace

void RunConfig::validate() const {
  tol.validate();
  if (n) check_degree(*n);
  if (jobs < 1) input_error("--jobs must be at least 1");
  if (samples < 1) input_error("--samples must be at least 1");
  if (!(magnitude_lo > 0.0) || !(magnitude_hi >= magnitude_lo)) {
    input_error("magnitude range must satisfy 0 < lo <= hi");
  }
}

std::string format_scalar(Scalar z) {
  // Adding 0.0 turns -0 into +0 so that exact zeros print without a sign.
  const double re = z.real() + 0.0;
  const double im = z.imag() + 0.0;
  std::ostringstream os;
  os << std::setprecision(6) << re << (std::signbit(im) ? '-' : '+') << std::abs(im) << 'i';
  return os.str();
}

std::string format_matrix(const Matrix& m, const std::string& indent) {
  std::vector<std::string> cells;
  std::size_t width = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      cells.push_back(format_scalar(m(r, c)));
      width = std::max(width, cells.back().size());
    }
  }
  std::ostringstream os;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    os << indent << '[';
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      os << (c ? "  " : "") << std::right << std::setw(static_cast<int>(width))
         << cells[r * m.cols() + c];
    }
    os << "]\n";
  }
  return os.str();
}

VerificationReport check_battery(const CandidatePair& pair, const Tolerance& tol,
                                 bool with_resolution) {
  VerificationReport report = verify_pf_relation(pair, tol);
  PseudoFermionSystem sys;
  try {
    sys = build_system(pair, tol);
  } catch (const Error& e) {
    report.add_failure("build_system", "psi_k = b^k psi_0, phi_k = (a^dag)^k phi_0", e.what());
    return report;
  }
  report.append(verify_system(sys, tol));
  if (!with_resolution) return report;
  // Defects scale with the conditioning of the biorthogonal pair.
  const double scale = std::max(1.0, max_abs(sys.eta) * max_abs(sys.eta_inv));
  for (Side side : {Side::Right, Side::Left}) {
    const std::string name = std::string("resolution_") + to_string(side);
    const std::string anchor = "int dzeta* dzeta |zeta>'<zeta| = 1 (" + std::string(to_string(side)) + ")";
    try {
      report.add_residual(name, anchor, max_abs(resolution_defect(sys, side)),
                          tol.threshold(scale));
    } catch (const Error& e) {
      report.add_failure(name, anchor, e.what());
    }
  }
  return report;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const CandidatePair pair = load_pair(cfg);
  const VerificationReport report = check_battery(pair, cfg.tol, true);
  if (cfg.output_format == OutputFormat::Json) {
    emit({{"command", "verify"}, {"input", pj::to_json(pair)}, {"report", pj::to_json(report)}},
         out);
  } else {
    out << "n = " << pair.n << (is_hermitian_pair(pair, cfg.tol) ? " (hermitian pair)" : "")
        << '\n';
    print_report_table(report, out);
  }
  return exit_for(report);
}

int cmd_example(const RunConfig& cfg, std::ostream& out) {
  const CandidatePair pair = load_pair(cfg);
  PseudoFermionSystem sys;
  try {
    sys = build_system(pair, cfg.tol);
  } catch (const Error& e) {
    if (cfg.output_format == OutputFormat::Json) {
      emit({{"command", "example"}, {"input", pj::to_json(pair)}, {"error", e.what()}}, out);
    } else {
      out << "construction failed: " << e.what() << '\n';
    }
    return kVerificationFailure;
  }
  if (cfg.output_format == OutputFormat::Json) {
    emit({{"command", "example"}, {"system", pj::to_json(sys)}}, out);
    return kPass;
  }
  out << "n = " << sys.n() << "\na =\n"
      << format_matrix(sys.pair.a) << "b =\n"
      << format_matrix(sys.pair.b);
  for (int k = 0; k < sys.dim(); ++k) {
    out << "psi_" << k << " =\n" << format_matrix(sys.psi[k].transpose());
    out << "phi_" << k << " =\n" << format_matrix(sys.phi[k].transpose());
  }
  out << "eta =\n"
      << format_matrix(sys.eta) << "N_pf =\n"
      << format_matrix(sys.N_pf) << "P =\n"
      << format_matrix(sys.P);
  return kPass;
}

int cmd_cs(const RunConfig& cfg, std::ostream& out) {
  const auto sides = requested_sides(cfg.side);
  const CandidatePair pair = load_pair(cfg);
  VerificationReport report;
  PseudoFermionSystem sys;
  try {
    sys = build_system(pair, cfg.tol);
  } catch (const Error& e) {
    report.add_failure("build_system", "psi_k = b^k psi_0, phi_k = (a^dag)^k phi_0", e.what());
    if (cfg.output_format == OutputFormat::Json) {
      emit({{"command", "cs"}, {"report", pj::to_json(report)}}, out);
    } else {
      print_report_table(report, out);
    }
    return kVerificationFailure;
  }

  const double scale = std::max(1.0, max_abs(sys.eta) * max_abs(sys.eta_inv));
  json side_docs = json::array();
  std::ostringstream table;
  for (Side side : sides) {
    const std::string tag = to_string(side);
    json families = json::array();
    for (bool primed : {false, true}) {
      const CoherentFamily fam = ladder_cs(sys, side, primed);
      const std::string label = tag + (primed ? "_primed" : "");
      const double raw = eigen_residual(fam, false).max_abs();
      const double normalized = eigen_residual(fam, true).max_abs();
      const double fam_scale = std::max(1.0, fam.raw.max_abs() * max_abs(fam.lowering));
      const std::string eigen = side == Side::Right ? "X |zeta> = |zeta> zeta" : "X |zeta> = zeta |zeta>";
      report.add_residual("eigen_raw_" + label, eigen + " (raw " + label + ")", raw,
                          cfg.tol.threshold(fam_scale));
      // Normalized left families are not eigenstates for n >= 2; reported, not checked.
      if (side == Side::Right) {
        report.add_residual("eigen_normalized_" + label, eigen + " (normalized " + label + ")",
                            normalized, cfg.tol.threshold(fam_scale));
      }
      families.push_back({{"primed", primed},
                          {"raw", pj::to_json(fam.raw)},
                          {"normalized", pj::to_json(fam.normalized)},
                          {"eigen_residual_raw", raw},
                          {"eigen_residual_normalized", normalized}});
      table << tag << (primed ? " primed" : "") << " family: raw residual "
            << format_residual(raw) << ", normalized residual " << format_residual(normalized)
            << '\n';
    }
    const double defect = max_abs(resolution_defect(sys, side));
    report.add_residual("resolution_" + tag, "int dzeta* dzeta |zeta>'<zeta| = 1 (" + tag + ")",
                        defect, cfg.tol.threshold(scale));
    const NormalizationReport norm = binormalization_report(sys, side);
    side_docs.push_back({{"side", tag},
                         {"families", std::move(families)},
                         {"resolution_defect", defect},
                         {"normalization", pj::to_json(norm)}});
    table << tag << " pairing <zeta|zeta>' (exact):\n";
    print_element_table(norm.pairing, table, "  ");
    table << tag << " pairing with (1 - zeta* zeta) factored out:\n";
    print_element_table(norm.factored_pairing, table, "  ");
  }

  if (cfg.output_format == OutputFormat::Json) {
    emit({{"command", "cs"},
          {"n", sys.n()},
          {"sides", std::move(side_docs)},
          {"report", pj::to_json(report)}},
         out);
  } else {
    out << "n = " << sys.n() << '\n' << table.str();
    print_report_table(report, out);
  }
  return exit_for(report);
}

int cmd_factorize(const RunConfig& cfg, std::ostream& out) {
  json doc;
  if (cfg.input_path) {
    doc = read_json_file(*cfg.input_path);
  } else if (cfg.params) {
    doc = parse_json_text(*cfg.params, "--params");
  } else {
    input_error("no input: give --input FILE or --params '{\"eps\": [...]}'");
  }
  const FiniteLevelSystem sys = pj::finite_level_from_json(doc, cfg.tol);
  if (cfg.n && *cfg.n != sys.n) input_error("--n does not match the spectrum length");

  VerificationReport report;
  json fact_doc = nullptr;
  json expansion_doc = nullptr;
  std::optional<Factorization> fact;
  try {
    fact = factorize(sys, cfg.tol);
    report.add_residual("factorization", "b a + eps_0 = H", fact->residual,
                        cfg.tol.threshold(max_abs(sys.H)));
  } catch (const Error& e) {
    report.add_failure("factorization", "b a + eps_0 = H", e.what());
  }
  if (fact) {
    json rho = json::array();
    json sigma = json::array();
    for (const auto& r : fact->weights.rho) rho.push_back(pj::scalar_to_json(r));
    for (const auto& s : fact->weights.sigma) sigma.push_back(pj::scalar_to_json(s));
    fact_doc = {{"shift", pj::scalar_to_json(fact->shift)},
                {"rho", std::move(rho)},
                {"sigma", std::move(sigma)},
                {"pair", pj::to_json(fact->pair)},
                {"residual", fact->residual}};
    const std::string anchor_a = "a(rho) = sum_j c_j b^j a^(j+1)";
    const std::string anchor_b = "b(rho) = sum_j c_j b^(j+1) a^j";
    try {
      const LadderExpansion ex = expand_ladder_in_pf(sys, fact->weights, cfg.tol);
      const double s = std::max(1.0, max_abs(fact->pair.a));
      report.add_residual("expansion_a", anchor_a, ex.residual_a, cfg.tol.threshold(s));
      report.add_residual("expansion_b", anchor_b, ex.residual_b, cfg.tol.threshold(s));
      json coeffs = json::array();
      for (const auto& c : ex.coefficients) coeffs.push_back(pj::scalar_to_json(c));
      expansion_doc = {{"coefficients", std::move(coeffs)},
                       {"residual_a", ex.residual_a},
                       {"residual_b", ex.residual_b}};
    } catch (const Error& e) {
      report.add_failure("expansion", anchor_a, e.what());
    }
  }
  report.append(structure_checks(sys, cfg.tol));

  if (cfg.output_format == OutputFormat::Json) {
    emit({{"command", "factorize"},
          {"system", pj::to_json(sys)},
          {"factorization", std::move(fact_doc)},
          {"expansion", std::move(expansion_doc)},
          {"report", pj::to_json(report)}},
         out);
  } else {
    out << "n = " << sys.n << "\nH =\n" << format_matrix(sys.H);
    if (fact) {
      out << "shift eps_0 = " << format_scalar(fact->shift) << "\nrho =";
      for (const auto& r : fact->weights.rho) out << ' ' << format_scalar(r);
      out << "\na =\n" << format_matrix(fact->pair.a) << "b =\n" << format_matrix(fact->pair.b);
    }
    print_report_table(report, out);
  }
  return exit_for(report);
}

int cmd_gk(const RunConfig& cfg, std::ostream& out) {
  int lo = 1;
  int hi = 8;
  if (cfg.range) {
    const auto colon = cfg.range->find(':');
    try {
      if (colon == std::string::npos) {
        lo = hi = std::stoi(*cfg.range);
      } else {
        lo = std::stoi(cfg.range->substr(0, colon));
        hi = std::stoi(cfg.range->substr(colon + 1));
      }
    } catch (const std::exception&) {
      input_error("--range must be N or LO:HI");
    }
  } else if (cfg.n) {
    lo = hi = *cfg.n;
  }
  if (lo > hi) input_error("--range must have LO <= HI");
  check_degree(lo);
  check_degree(hi);

  bool all_ok = true;
  json rows = json::array();
  std::ostringstream table;
  table << std::left << std::setw(4) << "n" << std::setw(40) << "g_0(n) ... g_n(n)"
        << std::setw(10) << "oracle" << "anchors\n";
  for (int n = lo; n <= hi; ++n) {
    const auto g = g_coefficients(n);
    json anchors = json::object();
    std::string anchor_text = "-";
    bool anchors_ok = true;
    if (n == 1) {
      anchors_ok = g == std::vector<long long>{0, 1};
      anchors["berezin"] = anchors_ok;
      anchor_text = std::string("Berezin (0, 1) ") + (anchors_ok ? "ok" : "MISMATCH");
    } else if (n >= 4) {
      const long long sign = (n % 2 == 0) ? 1 : -1;
      const bool a0 = g[n] == 1;
      const bool a1 = g[n - 1] == 1 + sign;
      const bool a2 = g[n - 2] == -sign;
      const bool a3 = g[n - 3] == 0;
      anchors_ok = a0 && a1 && a2 && a3;
      anchors = {{"g_n = 1", a0},
                 {"g_{n-1} = 1 + (-1)^n", a1},
                 {"g_{n-2} = (-1)^(n-1)", a2},
                 {"g_{n-3} = 0", a3}};
      anchor_text = std::string("g_n=1 g_{n-1}=1+(-1)^n g_{n-2}=(-1)^(n-1) g_{n-3}=0 ") +
                    (anchors_ok ? "ok" : "MISMATCH");
    }

    const WeightSolution sol = solve_integration_weights(n);
    double difference = 0.0;
    for (int k = 0; k <= n; ++k) {
      difference = std::max(difference, std::abs(sol.weights[k] - static_cast<double>(g[k])));
    }
    const bool oracle_ok = sol.unique && difference < 1e-9;
    json oracle = {{"unique", sol.unique},
                   {"rank", sol.rank},
                   {"weights", sol.weights},
                   {"max_difference", difference},
                   {"match", oracle_ok}};
    const std::string oracle_text = oracle_ok ? "match" : "MISMATCH";
    all_ok = all_ok && anchors_ok && oracle_ok;

    std::ostringstream values;
    for (int k = 0; k <= n; ++k) values << (k ? " " : "") << g[k];
    table << std::left << std::setw(4) << n << std::setw(40) << values.str() << std::setw(10)
          << oracle_text << anchor_text << '\n';
    rows.push_back({{"n", n}, {"g", g}, {"anchors", std::move(anchors)}, {"oracle", std::move(oracle)}});
  }

  if (cfg.output_format == OutputFormat::Json) {
    emit({{"command", "gk"}, {"rows", std::move(rows)}, {"overall", all_ok}}, out);
  } else {
    out << table.str() << "overall: " << status(all_ok) << '\n';
  }
  return all_ok ? kPass : kVerificationFailure;
}

namespace {

struct GridOverrides {
  std::map<std::string, Scalar> fixed;
  std::vector<std::optional<Scalar>> alphas;  // nullopt entries are sampled
};

GridOverrides parse_overrides(const json& j) {
  GridOverrides o;
  if (j.is_null()) return o;
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "--params must be a JSON object");
  for (const char* key : {"alpha", "beta", "gamma", "delta", "p"}) {
    if (j.contains(key)) o.fixed[key] = pj::scalar_from_json(j.at(key));
  }
  if (j.contains("alphas")) {
    if (!j.at("alphas").is_array()) throw Error(ErrorCode::ParseError, "alphas must be an array");
    for (const auto& a : j.at("alphas")) {
      o.alphas.push_back(a.is_null() ? std::nullopt : std::optional<Scalar>(pj::scalar_from_json(a)));
    }
  }
  return o;
}

void apply_overrides(const GridOverrides& o, ExampleParams& p) {
  for (const auto& [key, value] : o.fixed) {
    if (key == "alpha") p.alpha = value;
    if (key == "beta") p.beta = value;
    if (key == "gamma") p.gamma = value;
    if (key == "delta") p.delta = value;
    if (key == "p") p.p = value;
  }
  for (std::size_t i = 0; i < o.alphas.size() && i < p.alphas.size(); ++i) {
    if (o.alphas[i]) p.alphas[i] = *o.alphas[i];
  }
}

enum class SampleStatus { Pass, Fail, Rejected };

struct SampleResult {
  SampleStatus status = SampleStatus::Pass;
  VerificationReport report;
  std::string message;
};

const char* to_string(SampleStatus s) {
  switch (s) {
    case SampleStatus::Pass: return "pass";
    case SampleStatus::Fail: return "fail";
    case SampleStatus::Rejected: return "rejected";
  }
  return "unknown";
}

}  // namespace

int cmd_grid(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.example) input_error("grid needs --example ex1|ex2|ex3");
  const ExampleKind kind = parse_example_kind(*cfg.example);
  const GridOverrides overrides =
      parse_overrides(cfg.params ? parse_json_text(*cfg.params, "--params") : json(nullptr));
  int n = 2;
  if (kind == ExampleKind::Ex3) {
    n = cfg.n.value_or(overrides.alphas.empty() ? 3 : static_cast<int>(overrides.alphas.size()));
    if (!overrides.alphas.empty() && static_cast<int>(overrides.alphas.size()) != n) {
      input_error("alphas override length does not match --n");
    }
  }

  int family_n = n;
  if (kind != ExampleKind::Ex3) {
    ExampleParams defaults;
    defaults.kind = kind;
    family_n = example_family(defaults).n;
  }

  std::vector<SampleResult> results(static_cast<std::size_t>(cfg.samples));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < cfg.samples; i = next++) {
      // Each sample owns its generator, so results do not depend on scheduling.
      std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                        static_cast<std::uint32_t>(i)};
      std::mt19937_64 rng(seq);
      SampleResult& r = results[static_cast<std::size_t>(i)];
      ExampleParams params = sample_example_params(rng, kind, n, cfg.magnitude_lo, cfg.magnitude_hi);
      apply_overrides(overrides, params);
      CandidatePair pair;
      try {
        pair = example_family(params);
      } catch (const Error& e) {
        r.status = SampleStatus::Rejected;
        r.message = e.what();
        continue;
      }
      r.report = check_battery(pair, cfg.tol, true);
      r.status = r.report.overall() ? SampleStatus::Pass : SampleStatus::Fail;
    }
  };
  const int jobs = std::min(cfg.jobs, cfg.samples);
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int passed = 0, failed = 0, rejected = 0;
  std::map<std::string, double> worst;
  std::map<std::string, int> failures;
  json sample_docs = json::array();
  for (int i = 0; i < cfg.samples; ++i) {
    const SampleResult& r = results[static_cast<std::size_t>(i)];
    json entry = {{"index", i}, {"status", to_string(r.status)}};
    switch (r.status) {
      case SampleStatus::Pass: ++passed; break;
      case SampleStatus::Fail: ++failed; break;
      case SampleStatus::Rejected: ++rejected; break;
    }
    if (r.status == SampleStatus::Rejected) {
      entry["error"] = r.message;
    } else {
      json failing = json::array();
      for (const auto& c : r.report.checks()) {
        double& w = worst[c.name];
        w = std::max(w, c.residual);
        if (!c.pass) {
          ++failures[c.name];
          failing.push_back(c.name);
        }
      }
      entry["worst_residual"] = r.report.worst_residual();
      if (!failing.empty()) entry["failed_checks"] = std::move(failing);
    }
    sample_docs.push_back(std::move(entry));
  }

  const int code = rejected > 0 ? kInputError : (failed > 0 ? kVerificationFailure : kPass);
  if (cfg.output_format == OutputFormat::Json) {
    json worst_doc = json::object();
    for (const auto& [name, value] : worst) {
      worst_doc[name] = std::isfinite(value) ? json(value) : json(nullptr);
    }
    emit({{"command", "grid"},
          {"family", to_string(kind)},
          {"n", family_n},
          {"seed", cfg.seed},
          {"samples", cfg.samples},
          {"magnitude", {cfg.magnitude_lo, cfg.magnitude_hi}},
          {"passed", passed},
          {"failed", failed},
          {"rejected", rejected},
          {"worst_residual", std::move(worst_doc)},
          {"failures_by_check", failures},
          {"results", std::move(sample_docs)}},
         out);
  } else {
    out << "family " << to_string(kind) << ", seed " << cfg.seed << ", " << cfg.samples
        << " samples: " << passed << " passed, " << failed << " failed, " << rejected
        << " rejected\n";
    std::size_t width = 5;
    for (const auto& [name, value] : worst) width = std::max(width, name.size());
    out << std::left << std::setw(static_cast<int>(width) + 2) << "check" << std::setw(14)
        << "worst" << "failures\n";
    for (const auto& [name, value] : worst) {
      out << std::left << std::setw(static_cast<int>(width) + 2) << name << std::setw(14)
          << format_residual(value) << (failures.count(name) ? failures.at(name) : 0) << '\n';
    }
    for (int i = 0; i < cfg.samples; ++i) {
      const SampleResult& r = results[static_cast<std::size_t>(i)];
      if (r.status == SampleStatus::Rejected) out << "sample " << i << " rejected: " << r.message << '\n';
    }
  }
  return code;
}

int dispatch(const RunConfig& cfg, std::ostream& out) {
  switch (cfg.command) {
    case Command::Verify: return cmd_verify(cfg, out);
    case Command::Example: return cmd_example(cfg, out);
    case Command::Cs: return cmd_cs(cfg, out);
    case Command::Factorize: return cmd_factorize(cfg, out);
    case Command::Gk: return cmd_gk(cfg, out);
    case Command::Grid: return cmd_grid(cfg, out);
  }
  return kInputError;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Para-Grassmann coherent states for n-pseudo-fermions: construction and verification"};
  app.require_subcommand(1);

  RunConfig cfg;
  double tol_value = cfg.tol.abs;
  std::string format = "json";
  bool hermitian = false;
  int n_value = 0;
  std::string input_path, example, params, range;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--n", n_value, "degree n (nilpotency order n+1)");
    sub->add_option("--tol", tol_value, "absolute and relative tolerance")
        ->envname("PGFERMI_TOL")
        ->check(CLI::PositiveNumber);
    sub->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"json", "table"}));
  };
  auto add_pair_input = [&](CLI::App* sub) {
    sub->add_option("--example", example, "builtin family: ex1, ex2, ex3 or hermitian")
        ->check(CLI::IsMember({"ex1", "ex2", "ex3", "hermitian"}));
    sub->add_flag("--hermitian", hermitian, "shorthand for --example hermitian");
    sub->add_option("--params", params,
                    "family parameters as JSON, e.g. '{\"alpha\": [1, 0.5], \"beta\": 2}'; "
                    "ex3 takes \"alphas\" (default 1..n)");
    sub->add_option("--input", input_path,
                    "JSON file: {\"n\", \"a\", \"b\"} or {\"example\", \"params\"}");
  };

  auto* verify = app.add_subcommand("verify", "run the full check battery on a pair");
  add_common(verify);
  add_pair_input(verify);

  auto* example_cmd = app.add_subcommand("example", "build and print a pseudo-fermion system");
  add_common(example_cmd);
  add_pair_input(example_cmd);

  auto* cs = app.add_subcommand("cs", "coherent states, resolution of identity, bi-normalization");
  add_common(cs);
  add_pair_input(cs);
  cs->add_option("--side", cfg.side, "right, left or both")
      ->check(CLI::IsMember({"right", "left", "both"}));

  auto* fact = app.add_subcommand("factorize", "factorize a finite-level Hamiltonian H = b a + eps_0");
  add_common(fact);
  fact->add_option("--params", params, "JSON {\"eps\": [...], \"Psi\": matrix}");
  fact->add_option("--input", input_path, "JSON file with eps and optional Psi");

  auto* gk = app.add_subcommand("gk", "table of integration weights g_k(n)");
  add_common(gk);
  gk->add_option("--range", range, "N or LO:HI (default 1:8, or --n)");

  auto* grid = app.add_subcommand("grid", "parallel random-parameter sweep of a family");
  add_common(grid);
  grid->add_option("--example", example, "family: ex1, ex2 or ex3")
      ->check(CLI::IsMember({"ex1", "ex2", "ex3"}))
      ->required();
  grid->add_option("--params", params,
                   "fixed parameters as JSON; null entries in \"alphas\" are sampled");
  grid->add_option("--samples", cfg.samples, "number of samples");
  grid->add_option("--seed", cfg.seed, "random seed");
  grid->add_option("--jobs", cfg.jobs, "worker threads");
  grid->add_option("--min-magnitude", cfg.magnitude_lo, "smallest parameter magnitude");
  grid->add_option("--max-magnitude", cfg.magnitude_hi, "largest parameter magnitude");

  // CLI11 silently skips an environment value it cannot convert; reject it instead.
  if (const char* env = std::getenv("PGFERMI_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0) || !std::isfinite(v)) {
      err << "error: PGFERMI_TOL must be a positive number, got '" << env << "'\n";
      return kInputError;
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kInputError;
  }

  try {
    if (!input_path.empty()) cfg.input_path = input_path;
    if (!params.empty()) cfg.params = params;
    if (!range.empty()) cfg.range = range;
    if (hermitian) {
      if (!example.empty() && example != "hermitian") input_error("--hermitian conflicts with --example");
      example = "hermitian";
    }
    if (!example.empty()) cfg.example = example;
    for (auto* sub : app.get_subcommands()) {
      if (sub->count("--n") > 0) cfg.n = n_value;
    }
    cfg.tol = Tolerance{tol_value, tol_value};
    cfg.output_format = format == "table" ? OutputFormat::Table : OutputFormat::Json;
    cfg.validate();

    if (app.got_subcommand(verify)) cfg.command = Command::Verify;
    if (app.got_subcommand(example_cmd)) cfg.command = Command::Example;
    if (app.got_subcommand(cs)) cfg.command = Command::Cs;
    if (app.got_subcommand(fact)) cfg.command = Command::Factorize;
    if (app.got_subcommand(gk)) cfg.command = Command::Gk;
    if (app.got_subcommand(grid)) cfg.command = Command::Grid;
    return dispatch(cfg, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const json::exception& e) {
    err << "error: malformed JSON input: " << e.what() << '\n';
    return kInputError;
  }
}

}  // namespace pgfermi::cli
