#pragma once

#include <nlohmann/json.hpp>

#include "pgfermi/coherent.hpp"
#include "pgfermi/fermion.hpp"
#include "pgfermi/finite_level.hpp"
#include "pgfermi/paragrassmann.hpp"
#include "pgfermi/pseudofermion.hpp"
#include "pgfermi/report.hpp"

namespace pgfermi::json {

using nlohmann::json;

// Matrix: {"rows": m, "cols": k, "data": [[re, im], ...]} row-major.
// Vectors use the same encoding with cols = 1. Scalars are [re, im].
// Parsers throw Error(ParseError) on malformed input.

json scalar_to_json(Scalar s);
Scalar scalar_from_json(const json& j);

json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);
Vector vector_from_json(const json& j);

json to_json(const FermionAlgebra& alg);
json to_json(const CandidatePair& pair);
CandidatePair pair_from_json(const json& j);
json to_json(const PseudoFermionSystem& sys);
ExampleParams example_params_from_json(ExampleKind kind, const json& j);

json to_json(const PGElement& x);
/// Parses a PGElement into ctx; the "n" field must match ctx.
PGElement pg_element_from_json(const json& j, const ContextPtr& ctx);

json to_json(const VerificationReport& report);
json to_json(const NormalizationReport& report);

json to_json(const FiniteLevelSystem& sys);
/// {"eps": [[re, im], ...], "Psi": Matrix}; Psi may be omitted (identity).
FiniteLevelSystem finite_level_from_json(const json& j, const Tolerance& tol = {});

}  // namespace pgfermi::json
