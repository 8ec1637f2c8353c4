#pragma once

// One-variable polynomials up to affine conjugacy: power maps, Chebyshev
// polynomials and everything else.

#include "toridyn/cyclo.hpp"
#include "toridyn/poly.hpp"

#include <optional>
#include <string>
#include <vector>

namespace toridyn {

/// Monic T_d with T_d(u + 1/u) = u^d + u^-d; the identity is re-checked.
Poly chebyshev_poly(long d);

/// T_d(-z) = (-1)^d T_d(z) and +-T_d(u + 1/u) = +-(u^d + u^-d).
bool quotient_check(long d);

/// L(z) = alpha z + beta.
struct AffineWitness {
    CycloNumber alpha;
    CycloNumber beta;
    std::string to_string() const;
};

enum class MapClass { power, chebyshev, general };
std::string to_string(MapClass c);

struct Classification {
    MapClass cls = MapClass::general;
    int sign = 0;  ///< +1 / -1 for power and Chebyshev
    std::optional<AffineWitness> witness;
    /// Conjugates f to the opposite-signed normal form, when one exists.
    std::optional<AffineWitness> opposite;
    std::string note;
};

/// Coefficients (constant first) of L o f o L^-1.
std::vector<CycloNumber> conjugate_coefficients(const Poly& f, const AffineWitness& l);

/// Square root of a rational in a cyclotomic field, built from Gauss sums.
CycloNumber cyclotomic_sqrt(const Rational& r);

/// All k-th roots of c when one of them is a rational or the square root of a
/// rational; sorted by conductor, then coefficients.
std::vector<CycloNumber> cyclotomic_roots(const Rational& c, unsigned long k);

/// Decides the class of a polynomial of degree >= 2 with rational
/// coefficients, with an exact witness re-verified by conjugation.
Classification classify(const Poly& f);

}  // namespace toridyn
