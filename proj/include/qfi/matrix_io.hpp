#pragma once

#include <json.hpp>

#include "qfi/complex_matrix.hpp"

namespace qfi {

/// JSON wire format for a square complex matrix:
/// {"dim": d, "re": [d*d reals], "im": [d*d reals]}, both arrays row-major.
nlohmann::json matrix_to_json(const ComplexMatrix& m);

/// Parses the format above. Throws ArgumentError on missing keys, size
/// mismatches, non-square payloads or non-finite entries.
ComplexMatrix matrix_from_json(const nlohmann::json& j);

}  // namespace qfi
