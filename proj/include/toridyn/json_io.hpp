#pragma once

// JSON encodings shared by the CLI and scan checkpoints. Exact numbers are
// written as strings; inputs also accept JSON integers.

#include "toridyn/cyclo.hpp"
#include "toridyn/intlat.hpp"
#include "toridyn/poly.hpp"

#include "json.hpp"

namespace toridyn {

using Json = nlohmann::json;

inline constexpr const char* kSchema = "toridyn/1";

/// Raised for inputs that do not match the expected encoding.
class FormatError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

Json to_json(const Integer& x);
Json to_json(const Rational& x);
Json to_json(const IntMatrix& m);
Json to_json(const CycloNumber& x);
Json to_json(const std::vector<CycloNumber>& z);
/// {"2,0": "1", ...}; univariate keys are plain exponents.
Json to_json(const Poly& p);
Json to_json(const PolyMap& f);

Integer integer_from_json(const Json& j);
Rational rational_from_json(const Json& j);
IntMatrix matrix_from_json(const Json& j);
/// {"conductor": n, "coeffs": [...]} or a bare rational.
CycloNumber cyclo_from_json(const Json& j);
/// Array of coordinates, or a single coordinate.
std::vector<CycloNumber> point_from_json(const Json& j);
/// `nvars` = 0 infers the variable count from the keys.
Poly poly_from_json(const Json& j, std::size_t nvars = 0);
/// Array of polynomials in a common variable count.
PolyMap polymap_from_json(const Json& j);

/// Parses text, turning parse failures into FormatError.
Json parse_json(const std::string& text);

}  // namespace toridyn
