#pragma once

// Exact arithmetic in cyclotomic fields Q(zeta_n) on the power basis, with
// certified floating-point embeddings and a bounded search for sums of roots
// of unity.

#include "toridyn/intlat.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace toridyn {

/// e^{2 pi i a/b} with 0 <= a/b < 1.
class RootOfUnity {
public:
    RootOfUnity() = default;
    explicit RootOfUnity(const Rational& exponent);
    RootOfUnity(long a, long b) : RootOfUnity(Rational(a, b)) {}

    const Rational& exponent() const { return exp_; }
    Integer order() const { return exp_.get_den(); }
    std::string to_string() const;

    bool operator==(const RootOfUnity& o) const { return exp_ == o.exp_; }
    bool operator<(const RootOfUnity& o) const { return exp_ < o.exp_; }

private:
    Rational exp_;
};

/// Element of Q(zeta_n) as phi(n) rational coefficients on 1, zeta_n, ...
class CycloNumber {
public:
    /// Zero in conductor 1.
    CycloNumber() : CycloNumber(1, {}) {}
    /// Reduces an arbitrary-length coefficient list modulo Phi_n.
    CycloNumber(unsigned long conductor, std::vector<Rational> coeffs);
    /// Rational constant in conductor 1.
    CycloNumber(const Rational& q);  // NOLINT(google-explicit-constructor)
    CycloNumber(long q) : CycloNumber(Rational(q)) {}  // NOLINT(google-explicit-constructor)

    /// zeta_n^k.
    static CycloNumber zeta(unsigned long n, long k = 1);
    static CycloNumber root(const RootOfUnity& xi);

    unsigned long conductor() const { return n_; }
    const std::vector<Rational>& coeffs() const { return c_; }

    /// Same element written in Q(zeta_m); requires n | m.
    CycloNumber lift(unsigned long m) const;
    /// Same element in its smallest cyclotomic field Q(zeta_d), d | n.
    CycloNumber normalize() const;

    CycloNumber operator-() const;
    CycloNumber operator+(const CycloNumber& o) const;
    CycloNumber operator-(const CycloNumber& o) const;
    CycloNumber operator*(const CycloNumber& o) const;
    /// Throws DomainError on division by zero.
    CycloNumber operator/(const CycloNumber& o) const;
    CycloNumber& operator+=(const CycloNumber& o) { return *this = *this + o; }
    CycloNumber& operator-=(const CycloNumber& o) { return *this = *this - o; }
    CycloNumber& operator*=(const CycloNumber& o) { return *this = *this * o; }
    CycloNumber inverse() const;
    CycloNumber pow(long e) const;

    /// sigma_k: zeta_n -> zeta_n^k, gcd(k, n) = 1.
    CycloNumber galois(long k) const;

    bool is_zero() const;
    bool is_integral() const;
    bool is_rational() const;
    /// Least common multiple of the coefficient denominators.
    Integer denominator() const;

    /// Mathematical equality (operands lifted to a common conductor).
    bool operator==(const CycloNumber& o) const;
    bool operator!=(const CycloNumber& o) const { return !(*this == o); }

    std::string to_string() const;

private:
    unsigned long n_;
    std::vector<Rational> c_;
};

unsigned long lcm_ul(unsigned long a, unsigned long b);

/// Numeric value with an absolute error bound.
struct ComplexApprox {
    std::complex<double> value;
    double error;
};

struct RealApprox {
    double value;
    double error;
};

/// sigma_k(alpha) in C.
ComplexApprox embed(const CycloNumber& alpha, long k);

/// Maximum modulus over all embeddings.
RealApprox house(const CycloNumber& alpha);

/// Sign of house(alpha) - c for rational c >= 0. Ties are decided exactly;
/// throws DomainError if the floating bound cannot separate a non-tie.
int compare_house(const CycloNumber& alpha, const Rational& c);

bool is_scaled_integral(const CycloNumber& alpha, const Integer& m);

/// Shortest list of roots of unity of order dividing `order_bound`, at most
/// `b_max` of them, summing exactly to alpha. Exponents sorted ascending.
std::optional<std::vector<RootOfUnity>> loxton_decompose(const CycloNumber& alpha, unsigned b_max,
                                                         unsigned long order_bound);

enum class Verdict { pass, fail, indeterminate };
std::string to_string(Verdict v);

struct PointConditionReport {
    bool dci = true;
    Verdict bh = Verdict::pass;
    double max_house = 0;
    double house_error = 0;
};

struct PointSetReport {
    std::vector<PointConditionReport> points;
    bool dci_all = true;
    Verdict bh_all = Verdict::pass;
    std::string ai = "not evaluated";
};

PointSetReport check_point_set_conditions(const std::vector<std::vector<CycloNumber>>& points, const Integer& m,
                                          double c);

}  // namespace toridyn
