#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pgfermi/pgfermi.hpp"

namespace pgfermi::cli {

enum ExitCode : int { kPass = 0, kVerificationFailure = 1, kInputError = 2 };

enum class Command { Verify, Example, Cs, Factorize, Gk, Grid };
enum class OutputFormat { Json, Table };

struct RunConfig {
  Command command = Command::Verify;
  std::optional<int> n;
  Tolerance tol;
  std::optional<std::string> input_path;
  OutputFormat output_format = OutputFormat::Json;
  std::uint64_t seed = 1;
  int jobs = 1;

  std::optional<std::string> example;  // ex1 | ex2 | ex3 | hermitian
  std::optional<std::string> params;   // JSON text
  std::string side = "both";           // cs: right | left | both
  int samples = 100;                   // grid
  double magnitude_lo = 0.1;           // grid parameter magnitudes
  double magnitude_hi = 10.0;
  std::optional<std::string> range;    // gk: "lo:hi"

  /// Throws Error(InvalidParams) on out-of-range fields.
  void validate() const;
};

/// Parses argv-style arguments (without the program name) and runs the
/// selected command. Output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Runs cfg.command; Error and JSON exceptions propagate to the caller.
int dispatch(const RunConfig& cfg, std::ostream& out);

// Individual commands, usable without argument parsing.
int cmd_verify(const RunConfig& cfg, std::ostream& out);
int cmd_example(const RunConfig& cfg, std::ostream& out);
int cmd_cs(const RunConfig& cfg, std::ostream& out);
int cmd_factorize(const RunConfig& cfg, std::ostream& out);
int cmd_gk(const RunConfig& cfg, std::ostream& out);
int cmd_grid(const RunConfig& cfg, std::ostream& out);

/// The full check battery for one pair: relation, nilpotency, Fock build,
/// metric, completeness, pseudo-adjointness and, if requested, both
/// resolutions of identity. Construction errors become failed checks.
VerificationReport check_battery(const CandidatePair& pair, const Tolerance& tol,
                                 bool with_resolution);

// Human-readable rendering: complex numbers as a+bi, 6 significant digits.
std::string format_scalar(Scalar z);
std::string format_matrix(const Matrix& m, const std::string& indent = "  ");

}  // namespace pgfermi::cli
