#pragma once

// Sparse multivariate Laurent polynomials over Q and polynomial maps.

#include "toridyn/cyclo.hpp"
#include "toridyn/intlat.hpp"

#include <complex>
#include <map>
#include <string>
#include <vector>

namespace toridyn {

class Poly {
public:
    using Exponent = std::vector<long>;
    using Terms = std::map<Exponent, Rational>;

    Poly() = default;
    explicit Poly(std::size_t nvars) : nvars_(nvars) {}

    static Poly constant(std::size_t nvars, const Rational& c);
    static Poly variable(std::size_t nvars, std::size_t i);
    static Poly monomial(Exponent e, const Rational& c);

    std::size_t nvars() const { return nvars_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    Rational coeff(const Exponent& e) const;
    void add_term(const Exponent& e, const Rational& c);

    /// Largest total degree of a term; -1 for zero.
    long degree() const;
    /// Sum of the terms of total degree exactly k.
    Poly homogeneous_part(long k) const;
    bool is_homogeneous() const;
    bool has_negative_exponents() const;

    Poly operator-() const;
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator*(const Rational& c) const;
    Poly pow(unsigned e) const;
    bool operator==(const Poly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    /// p(vals_1, ..., vals_n); negative exponents need invertible values.
    Poly substitute(const std::vector<Poly>& vals) const;
    CycloNumber evaluate(const std::vector<CycloNumber>& z) const;
    std::complex<double> evaluate(const std::vector<std::complex<double>>& z) const;

    /// Sum of absolute values of the coefficients.
    double l1_norm() const;

    std::string to_string() const;

private:
    std::size_t nvars_ = 0;
    Terms terms_;
};

/// Univariate polynomial sum_k c_k z^k from constant-first coefficients.
Poly univariate(const std::vector<Rational>& coeffs);

/// Tuple of polynomials in a common set of variables.
class PolyMap {
public:
    PolyMap() = default;
    PolyMap(std::size_t nvars, std::vector<Poly> comps);

    std::size_t nvars() const { return nvars_; }
    std::size_t dim() const { return comps_.size(); }
    const std::vector<Poly>& components() const { return comps_; }
    const Poly& operator[](std::size_t i) const { return comps_[i]; }
    long degree() const;

    /// this o inner.
    PolyMap compose(const PolyMap& inner) const;
    /// l-fold self-composition; requires nvars == dim.
    PolyMap iterate(unsigned l) const;

    std::vector<CycloNumber> evaluate(const std::vector<CycloNumber>& z) const;
    std::vector<std::complex<double>> evaluate(const std::vector<std::complex<double>>& z) const;

    bool operator==(const PolyMap& o) const { return nvars_ == o.nvars_ && comps_ == o.comps_; }

    std::string to_string() const;

private:
    std::size_t nvars_ = 0;
    std::vector<Poly> comps_;
};

}  // namespace toridyn
