#pragma once

#include <nlohmann/json.hpp>

#include "revnorm/model.hpp"
#include "revnorm/polynomial.hpp"
#include "revnorm/pseudonorm.hpp"
#include "revnorm/resonance.hpp"
#include "revnorm/spectral.hpp"

// JSON forms of the library types. Doubles are written with round-trip
// precision, so load(dump(x)) reproduces x bit for bit.
namespace revnorm::io {

using nlohmann::json;

/// [a_1, ..., a_d, delta, species]
[[nodiscard]] json mode_to_json(ModeIndex j);
[[nodiscard]] ModeIndex mode_from_json(const json& v);
[[nodiscard]] json multi_index_to_json(const MultiIndex& m);
[[nodiscard]] MultiIndex multi_index_from_json(const json& v);

/// [{a: [...], delta: +-1, species: n, re: x, im: y}, ...]
[[nodiscard]] json state_to_json(const StateVector& z);
/// Entries not listed are zero; throws DomainError for an index outside set.
[[nodiscard]] StateVector state_from_json(const json& v, const IndexSetPtr& set);

[[nodiscard]] json polynomial_to_json(const ScalarPolynomial& q);
/// An "even"/"odd" tag is verified, not trusted.
[[nodiscard]] ScalarPolynomial polynomial_from_json(const json& v);

[[nodiscard]] json field_to_json(const PolyVectorField& f);
[[nodiscard]] PolyVectorField field_from_json(const json& v);

[[nodiscard]] json family_to_json(const PseudoNormFamily& fam);
[[nodiscard]] PseudoNormFamily family_from_json(const json& v);

[[nodiscard]] json model_to_json(const ModelSpec& m);
[[nodiscard]] ModelSpec model_from_json(const json& v);

[[nodiscard]] json report_to_json(const ResonanceReport& r);
[[nodiscard]] json scan_to_json(const NonResonanceScan& scan);

/// Infinite or NaN doubles become null.
[[nodiscard]] json number(double x);
[[nodiscard]] double number_from_json(const json& v);

}  // namespace revnorm::io
