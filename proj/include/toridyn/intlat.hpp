#pragma once

// Exact integer linear algebra: Hermite and Smith normal forms, lattice
// saturation, characteristic polynomials and the splitting of a monomial
// endomorphism into a finite-order part and a positive part.

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace toridyn {

using Integer = mpz_class;
using Rational = mpq_class;

/// Raised when an operation's mathematical precondition fails
/// (singular matrix, non-isolated fixed locus, inconsistent data, ...).
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dense row-major matrix over a ring (mpz_class or mpq_class).
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    Matrix(std::initializer_list<std::initializer_list<long>> init);

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::vector<T> row(std::size_t i) const;
    std::vector<T> col(std::size_t j) const;
    void swap_rows(std::size_t a, std::size_t b);
    void swap_cols(std::size_t a, std::size_t b);

    Matrix transpose() const;
    Matrix operator*(const Matrix& o) const;
    Matrix operator+(const Matrix& o) const;
    Matrix operator-(const Matrix& o) const;
    bool operator==(const Matrix& o) const;
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    /// Rows [r0, r1) as a new matrix.
    Matrix row_block(std::size_t r0, std::size_t r1) const;
    /// Columns [c0, c1) as a new matrix.
    Matrix col_block(std::size_t c0, std::size_t c1) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;

IntMatrix stack_rows(const IntMatrix& top, const IntMatrix& bottom);
IntMatrix block_diag(const IntMatrix& a, const IntMatrix& b);
IntMatrix matrix_power(const IntMatrix& a, unsigned e);
RatMatrix to_rational(const IntMatrix& m);

/// Exact determinant via fraction-free (Bareiss) elimination.
Integer determinant(const IntMatrix& m);
Rational determinant(const RatMatrix& m);

/// Inverse over Q; throws DomainError when singular.
RatMatrix inverse(const RatMatrix& m);

/// Rank over Q.
std::size_t rank(const IntMatrix& m);

/// Integer polynomial, coefficients constant term first; zero is empty.
class IntPoly {
public:
    IntPoly() = default;
    explicit IntPoly(std::vector<Integer> coeffs);
    IntPoly(std::initializer_list<long> coeffs);

    static IntPoly monomial(const Integer& c, std::size_t k);
    static IntPoly x_minus(const Integer& root) { return IntPoly(std::vector<Integer>{-root, 1}); }

    const std::vector<Integer>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    /// Degree; -1 for the zero polynomial.
    long degree() const { return static_cast<long>(coeffs_.size()) - 1; }
    const Integer& leading() const { return coeffs_.back(); }
    Integer coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Integer(0); }
    bool is_constant() const { return coeffs_.size() <= 1; }

    IntPoly operator+(const IntPoly& o) const;
    IntPoly operator-(const IntPoly& o) const;
    IntPoly operator*(const IntPoly& o) const;
    bool operator==(const IntPoly& o) const { return coeffs_ == o.coeffs_; }
    bool operator!=(const IntPoly& o) const { return !(*this == o); }

    /// Exact division; returns nullopt when `divisor` does not divide *this in Z[x].
    std::optional<IntPoly> exact_div(const IntPoly& divisor) const;

    Integer evaluate(const Integer& x) const;
    IntMatrix evaluate(const IntMatrix& a) const;
    IntPoly derivative() const;

    std::string to_string(const std::string& var = "x") const;

private:
    void trim();
    std::vector<Integer> coeffs_;
};

/// Primitive gcd over Q[x] normalised to positive leading coefficient.
IntPoly gcd(const IntPoly& a, const IntPoly& b);

/// Euler's totient.
unsigned long euler_phi(unsigned long n);

/// k-th cyclotomic polynomial (memoised).
const IntPoly& cyclotomic_polynomial(unsigned long k);

/// Distinct prime divisors of |n|, ascending; empty for 0 and +-1.
std::vector<Integer> prime_factors(const Integer& n);

/// Exponent of the prime p in a nonzero rational.
long valuation(const Rational& q, const Integer& p);

/// Lattice in Z^n given by a basis in row Hermite normal form.
class Lattice {
public:
    Lattice() = default;
    /// Lattice generated by the rows of `generators` (any integer matrix).
    Lattice(std::size_t ambient_dim, const IntMatrix& generators);

    static Lattice zero(std::size_t n) { return Lattice(n, IntMatrix(0, n)); }
    static Lattice full(std::size_t n) { return Lattice(n, IntMatrix::identity(n)); }

    std::size_t ambient_dim() const { return ambient_dim_; }
    std::size_t rank() const { return basis_.rows(); }
    const IntMatrix& basis() const { return basis_; }

    bool contains(const std::vector<Integer>& v) const;
    bool is_primitive() const;
    Lattice operator+(const Lattice& o) const;

    bool operator==(const Lattice& o) const {
        return ambient_dim_ == o.ambient_dim_ && basis_ == o.basis_;
    }
    bool operator!=(const Lattice& o) const { return !(*this == o); }

private:
    std::size_t ambient_dim_ = 0;
    IntMatrix basis_;
};

struct HnfResult {
    IntMatrix H;  ///< row HNF, zero rows last
    IntMatrix U;  ///< unimodular, U * m == H
};

/// Row-style Hermite normal form: upper echelon, positive pivots,
/// entries above each pivot reduced into [0, pivot).
HnfResult hnf(const IntMatrix& m);

struct SnfResult {
    IntMatrix U;     ///< unimodular rows transform
    IntMatrix D;     ///< diagonal, d_1 | d_2 | ..., nonnegative
    IntMatrix V;     ///< unimodular columns transform, U * m * V == D
    IntMatrix V_inv; ///< exact inverse of V
};

SnfResult snf(const IntMatrix& m);

/// Number of nonzero diagonal entries of an SNF.
std::size_t snf_rank(const IntMatrix& D);

/// Integer basis (as rows, HNF) of the saturated kernel { x in Z^n : m x = 0 }.
IntMatrix right_kernel(const IntMatrix& m);
/// Integer basis (as rows, HNF) of { y in Z^r : y m = 0 }.
IntMatrix left_kernel(const IntMatrix& m);

/// (Lambda (x) R) intersected with Z^n.
Lattice saturate(const Lattice& lattice);

/// det(xI - A).
IntPoly charpoly(const IntMatrix& a);

struct CyclotomicSplit {
    IntPoly cyclotomic; ///< product of all cyclotomic factors with multiplicity
    IntPoly rest;       ///< no root of unity among its roots
};

CyclotomicSplit cyclotomic_split(const IntPoly& p);

bool is_positive(const IntMatrix& a);

struct Decomposition {
    IntMatrix P;
    IntMatrix A1; ///< all eigenvalues roots of unity
    IntMatrix A2; ///< positive
};

/// A * P == P * diag(A1, A2) with det(P) != 0.
Decomposition decompose(const IntMatrix& a);

/// Soft cap on matrix dimension for enumeration-heavy routines.
inline std::size_t& dimension_cap() {
    static std::size_t cap = 12;
    return cap;
}

void require_square(const IntMatrix& a, const char* what);
void require_nonsingular(const IntMatrix& a, const char* what);

}  // namespace toridyn
