#include "toridyn/intlat.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <utility>

namespace toridyn {

// ---------------------------------------------------------------- Matrix

template <class T>
Matrix<T>::Matrix(std::initializer_list<std::initializer_list<long>> init) {
    rows_ = init.size();
    cols_ = rows_ == 0 ? 0 : init.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : init) {
        if (r.size() != cols_) throw std::invalid_argument("ragged matrix literal");
        for (long v : r) data_.emplace_back(v);
    }
}

template <class T>
Matrix<T> Matrix<T>::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

template <class T>
std::vector<T> Matrix<T>::row(std::size_t i) const {
    return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
}

template <class T>
std::vector<T> Matrix<T>::col(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
}

template <class T>
void Matrix<T>::swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
}

template <class T>
void Matrix<T>::swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
}

template <class T>
Matrix<T> Matrix<T>::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

template <class T>
Matrix<T> Matrix<T>::operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix product: dimension mismatch");
    Matrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const T& a = (*this)(i, k);
            if (a == 0) continue;
            for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
        }
    return r;
}

template <class T>
Matrix<T> Matrix<T>::operator+(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix sum: dimension mismatch");
    Matrix r(*this);
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] += o.data_[k];
    return r;
}

template <class T>
Matrix<T> Matrix<T>::operator-(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix difference: dimension mismatch");
    Matrix r(*this);
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] -= o.data_[k];
    return r;
}

template <class T>
bool Matrix<T>::operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

template <class T>
Matrix<T> Matrix<T>::row_block(std::size_t r0, std::size_t r1) const {
    Matrix r(r1 - r0, cols_);
    for (std::size_t i = r0; i < r1; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(i - r0, j) = (*this)(i, j);
    return r;
}

template <class T>
Matrix<T> Matrix<T>::col_block(std::size_t c0, std::size_t c1) const {
    Matrix r(rows_, c1 - c0);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = c0; j < c1; ++j) r(i, j - c0) = (*this)(i, j);
    return r;
}

template class Matrix<Integer>;
template class Matrix<Rational>;

IntMatrix stack_rows(const IntMatrix& top, const IntMatrix& bottom) {
    if (top.cols() != bottom.cols() && top.rows() && bottom.rows())
        throw std::invalid_argument("stack_rows: column mismatch");
    std::size_t cols = top.rows() ? top.cols() : bottom.cols();
    IntMatrix r(top.rows() + bottom.rows(), cols);
    for (std::size_t i = 0; i < top.rows(); ++i)
        for (std::size_t j = 0; j < cols; ++j) r(i, j) = top(i, j);
    for (std::size_t i = 0; i < bottom.rows(); ++i)
        for (std::size_t j = 0; j < cols; ++j) r(top.rows() + i, j) = bottom(i, j);
    return r;
}

IntMatrix block_diag(const IntMatrix& a, const IntMatrix& b) {
    IntMatrix r(a.rows() + b.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) r(a.rows() + i, a.cols() + j) = b(i, j);
    return r;
}

IntMatrix matrix_power(const IntMatrix& a, unsigned e) {
    require_square(a, "matrix_power");
    IntMatrix result = IntMatrix::identity(a.rows());
    IntMatrix base = a;
    while (e) {
        if (e & 1u) result = result * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return result;
}

RatMatrix to_rational(const IntMatrix& m) {
    RatMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rational(m(i, j));
    return r;
}

void require_square(const IntMatrix& a, const char* what) {
    if (!a.is_square()) throw std::invalid_argument(std::string(what) + ": matrix must be square");
}

void require_nonsingular(const IntMatrix& a, const char* what) {
    require_square(a, what);
    if (determinant(a) == 0) throw DomainError(std::string(what) + ": det(A) = 0");
}

Integer determinant(const IntMatrix& m) {
    require_square(m, "determinant");
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    IntMatrix a = m;
    Integer prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && a(p, k) == 0) ++p;
            if (p == n) return 0;
            a.swap_rows(k, p);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Integer v = a(k, k) * a(i, j) - a(i, k) * a(k, j);
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
                a(i, j) = v;
            }
            a(i, k) = 0;
        }
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

namespace {

// Gauss-Jordan over Q. Returns rank; `m` ends in reduced row echelon form and
// `aug` (if non-null) receives the same row operations.
std::size_t rref(RatMatrix& m, RatMatrix* aug) {
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && m(p, c) == 0) ++p;
        if (p == m.rows()) continue;
        m.swap_rows(r, p);
        if (aug) aug->swap_rows(r, p);
        Rational inv = 1 / m(r, c);
        for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) *= inv;
        if (aug)
            for (std::size_t j = 0; j < aug->cols(); ++j) (*aug)(r, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c) == 0) continue;
            Rational f = m(i, c);
            for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
            if (aug)
                for (std::size_t j = 0; j < aug->cols(); ++j) (*aug)(i, j) -= f * (*aug)(r, j);
        }
        ++r;
    }
    return r;
}

}  // namespace

Rational determinant(const RatMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("determinant: matrix must be square");
    RatMatrix a = m;
    Rational det = 1;
    const std::size_t n = a.rows();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a(p, c) == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            a.swap_rows(p, c);
            det = -det;
        }
        det *= a(c, c);
        for (std::size_t i = c + 1; i < n; ++i) {
            if (a(i, c) == 0) continue;
            Rational f = a(i, c) / a(c, c);
            for (std::size_t j = c; j < n; ++j) a(i, j) -= f * a(c, j);
        }
    }
    return det;
}

RatMatrix inverse(const RatMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("inverse: matrix must be square");
    RatMatrix a = m;
    RatMatrix inv = RatMatrix::identity(m.rows());
    if (rref(a, &inv) != m.rows()) throw DomainError("inverse: singular matrix");
    return inv;
}

std::size_t rank(const IntMatrix& m) {
    RatMatrix a = to_rational(m);
    return rref(a, nullptr);
}

// ---------------------------------------------------------------- IntPoly

IntPoly::IntPoly(std::vector<Integer> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

IntPoly::IntPoly(std::initializer_list<long> coeffs) {
    for (long c : coeffs) coeffs_.emplace_back(c);
    trim();
}

IntPoly IntPoly::monomial(const Integer& c, std::size_t k) {
    std::vector<Integer> v(k + 1);
    v[k] = c;
    return IntPoly(std::move(v));
}

void IntPoly::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

IntPoly IntPoly::operator+(const IntPoly& o) const {
    std::vector<Integer> r(std::max(coeffs_.size(), o.coeffs_.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = coeff(i) + o.coeff(i);
    return IntPoly(std::move(r));
}

IntPoly IntPoly::operator-(const IntPoly& o) const {
    std::vector<Integer> r(std::max(coeffs_.size(), o.coeffs_.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = coeff(i) - o.coeff(i);
    return IntPoly(std::move(r));
}

IntPoly IntPoly::operator*(const IntPoly& o) const {
    if (is_zero() || o.is_zero()) return {};
    std::vector<Integer> r(coeffs_.size() + o.coeffs_.size() - 1);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        for (std::size_t j = 0; j < o.coeffs_.size(); ++j) r[i + j] += coeffs_[i] * o.coeffs_[j];
    return IntPoly(std::move(r));
}

std::optional<IntPoly> IntPoly::exact_div(const IntPoly& divisor) const {
    if (divisor.is_zero()) throw std::invalid_argument("division by zero polynomial");
    if (is_zero()) return IntPoly{};
    if (degree() < divisor.degree()) return std::nullopt;
    std::vector<Integer> rem = coeffs_;
    std::vector<Integer> q(coeffs_.size() - divisor.coeffs_.size() + 1);
    const Integer& lead = divisor.leading();
    for (std::size_t k = q.size(); k-- > 0;) {
        Integer top = rem[k + divisor.coeffs_.size() - 1];
        if (top == 0) continue;
        if (!mpz_divisible_p(top.get_mpz_t(), lead.get_mpz_t())) return std::nullopt;
        Integer c = top / lead;
        q[k] = c;
        for (std::size_t j = 0; j < divisor.coeffs_.size(); ++j) rem[k + j] -= c * divisor.coeffs_[j];
    }
    for (const auto& c : rem)
        if (c != 0) return std::nullopt;
    return IntPoly(std::move(q));
}

Integer IntPoly::evaluate(const Integer& x) const {
    Integer r = 0;
    for (std::size_t k = coeffs_.size(); k-- > 0;) r = r * x + coeffs_[k];
    return r;
}

IntMatrix IntPoly::evaluate(const IntMatrix& a) const {
    require_square(a, "polynomial evaluation");
    const std::size_t n = a.rows();
    IntMatrix r(n, n);
    for (std::size_t k = coeffs_.size(); k-- > 0;) {
        r = r * a;
        for (std::size_t i = 0; i < n; ++i) r(i, i) += coeffs_[k];
    }
    return r;
}

IntPoly IntPoly::derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<Integer> r(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) r[k - 1] = coeffs_[k] * static_cast<unsigned long>(k);
    return IntPoly(std::move(r));
}

std::string IntPoly::to_string(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = coeffs_.size(); k-- > 0;) {
        const Integer& c = coeffs_[k];
        if (c == 0) continue;
        Integer a = abs(c);
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        first = false;
        if (k == 0 || a != 1) os << a.get_str();
        if (k >= 1) os << var;
        if (k >= 2) os << "^" << k;
    }
    return os.str();
}

namespace {

IntPoly primitive_part(const IntPoly& p) {
    if (p.is_zero()) return p;
    Integer g = 0;
    for (const auto& c : p.coeffs()) g = gcd(g, c);
    std::vector<Integer> r = p.coeffs();
    if (p.leading() < 0) g = -g;
    for (auto& c : r) c /= g;
    return IntPoly(std::move(r));
}

// Pseudo-remainder of a by b.
IntPoly pseudo_rem(IntPoly a, const IntPoly& b) {
    while (!a.is_zero() && a.degree() >= b.degree()) {
        std::size_t shift = static_cast<std::size_t>(a.degree() - b.degree());
        IntPoly lhs = a * IntPoly(std::vector<Integer>{b.leading()});
        IntPoly rhs = b * IntPoly::monomial(a.leading(), shift);
        a = primitive_part(lhs - rhs);
    }
    return a;
}

}  // namespace

IntPoly gcd(const IntPoly& a, const IntPoly& b) {
    IntPoly x = primitive_part(a), y = primitive_part(b);
    if (x.is_zero()) return y;
    if (y.is_zero()) return x;
    if (x.degree() < y.degree()) std::swap(x, y);
    while (!y.is_zero()) {
        IntPoly r = pseudo_rem(x, y);
        x = y;
        y = primitive_part(r);
    }
    return primitive_part(x);
}

unsigned long euler_phi(unsigned long n) {
    unsigned long result = n;
    for (unsigned long p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        while (n % p == 0) n /= p;
        result -= result / p;
    }
    if (n > 1) result -= result / n;
    return result;
}

const IntPoly& cyclotomic_polynomial(unsigned long k) {
    if (k == 0) throw std::invalid_argument("cyclotomic_polynomial: index must be positive");
    static std::mutex mu;
    static std::map<unsigned long, IntPoly> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(k);
        if (it != cache.end()) return it->second;
    }
    IntPoly p = IntPoly::monomial(1, k) - IntPoly{1};
    for (unsigned long d = 1; d < k; ++d) {
        if (k % d) continue;
        p = *p.exact_div(cyclotomic_polynomial(d));
    }
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(k, std::move(p)).first->second;
}

// ---------------------------------------------------------------- primes

namespace {

Integer pollard_brent(const Integer& n) {
    if (mpz_even_p(n.get_mpz_t())) return 2;
    for (unsigned long c = 1;; ++c) {
        Integer y = 2, x, g = 1, q = 1, ys;
        const Integer cc = c;
        auto f = [&](const Integer& v) {
            Integer r = v * v + cc;
            mpz_mod(r.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t());
            return r;
        };
        unsigned long r = 1;
        while (g == 1) {
            x = y;
            for (unsigned long i = 0; i < r; ++i) y = f(y);
            unsigned long k = 0;
            while (k < r && g == 1) {
                ys = y;
                for (unsigned long i = 0; i < std::min(128ul, r - k); ++i) {
                    y = f(y);
                    q = q * abs(x - y) % n;
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += 128;
            }
            r *= 2;
        }
        if (g == n) {
            do {
                ys = f(ys);
                Integer d = abs(x - ys);
                mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

void factor_into(Integer n, std::vector<Integer>& out) {
    if (n == 1) return;
    if (mpz_probab_prime_p(n.get_mpz_t(), 30)) {
        out.push_back(n);
        return;
    }
    Integer d = pollard_brent(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

}  // namespace

std::vector<Integer> prime_factors(const Integer& n) {
    Integer m = abs(n);
    std::vector<Integer> out;
    if (m <= 1) return out;
    for (unsigned long p = 2; p < 10000 && p * p <= m; ++p) {
        if (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            out.emplace_back(p);
            while (mpz_divisible_ui_p(m.get_mpz_t(), p)) m /= p;
        }
    }
    factor_into(m, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

long valuation(const Rational& q, const Integer& p) {
    if (q == 0) throw std::invalid_argument("valuation of zero");
    auto count = [&](Integer v) {
        long k = 0;
        v = abs(v);
        while (mpz_divisible_p(v.get_mpz_t(), p.get_mpz_t())) {
            v /= p;
            ++k;
        }
        return k;
    };
    return count(q.get_num()) - count(q.get_den());
}

// ---------------------------------------------------------------- HNF / SNF

namespace {

void row_axpy(IntMatrix& m, std::size_t dst, std::size_t src, const Integer& q) {
    // row dst -= q * row src
    for (std::size_t j = 0; j < m.cols(); ++j)
        if (m(src, j) != 0) m(dst, j) -= q * m(src, j);
}

void col_axpy(IntMatrix& m, std::size_t dst, std::size_t src, const Integer& q) {
    // col dst -= q * col src
    for (std::size_t i = 0; i < m.rows(); ++i)
        if (m(i, src) != 0) m(i, dst) -= q * m(i, src);
}

void negate_row(IntMatrix& m, std::size_t i) {
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = -m(i, j);
}

Integer floor_div(const Integer& a, const Integer& b) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

}  // namespace

HnfResult hnf(const IntMatrix& m) {
    IntMatrix H = m;
    IntMatrix U = IntMatrix::identity(m.rows());
    std::size_t piv = 0;
    for (std::size_t c = 0; c < H.cols() && piv < H.rows(); ++c) {
        while (true) {
            // smallest nonzero |entry| in column c at or below piv
            std::size_t best = H.rows();
            for (std::size_t i = piv; i < H.rows(); ++i) {
                if (H(i, c) == 0) continue;
                if (best == H.rows() || abs(H(i, c)) < abs(H(best, c))) best = i;
            }
            if (best == H.rows()) break;
            H.swap_rows(piv, best);
            U.swap_rows(piv, best);
            bool clean = true;
            for (std::size_t i = piv + 1; i < H.rows(); ++i) {
                if (H(i, c) == 0) continue;
                Integer q = floor_div(H(i, c), H(piv, c));
                row_axpy(H, i, piv, q);
                row_axpy(U, i, piv, q);
                if (H(i, c) != 0) clean = false;
            }
            if (clean) break;
        }
        if (piv >= H.rows() || H(piv, c) == 0) continue;
        if (H(piv, c) < 0) {
            negate_row(H, piv);
            negate_row(U, piv);
        }
        for (std::size_t i = 0; i < piv; ++i) {
            Integer q = floor_div(H(i, c), H(piv, c));
            if (q == 0) continue;
            row_axpy(H, i, piv, q);
            row_axpy(U, i, piv, q);
        }
        ++piv;
    }
    return {std::move(H), std::move(U)};
}

SnfResult snf(const IntMatrix& m) {
    IntMatrix D = m;
    IntMatrix U = IntMatrix::identity(m.rows());
    IntMatrix V = IntMatrix::identity(m.cols());
    IntMatrix Vi = IntMatrix::identity(m.cols());
    const std::size_t r = m.rows(), c = m.cols();

    // column op on D and V: col dst -= q col src; inverse row op on Vi: row src += q row dst
    auto col_op = [&](std::size_t dst, std::size_t src, const Integer& q) {
        col_axpy(D, dst, src, q);
        col_axpy(V, dst, src, q);
        row_axpy(Vi, src, dst, -q);
    };
    auto col_swap = [&](std::size_t a, std::size_t b) {
        D.swap_cols(a, b);
        V.swap_cols(a, b);
        Vi.swap_rows(a, b);
    };

    for (std::size_t t = 0; t < std::min(r, c); ++t) {
        while (true) {
            std::size_t bi = r, bj = c;
            for (std::size_t i = t; i < r; ++i)
                for (std::size_t j = t; j < c; ++j)
                    if (D(i, j) != 0 && (bi == r || abs(D(i, j)) < abs(D(bi, bj)))) {
                        bi = i;
                        bj = j;
                    }
            if (bi == r) break;
            D.swap_rows(t, bi);
            U.swap_rows(t, bi);
            col_swap(t, bj);
            bool done = true;
            for (std::size_t i = t + 1; i < r; ++i) {
                if (D(i, t) == 0) continue;
                Integer q = floor_div(D(i, t), D(t, t));
                row_axpy(D, i, t, q);
                row_axpy(U, i, t, q);
                if (D(i, t) != 0) done = false;
            }
            for (std::size_t j = t + 1; j < c; ++j) {
                if (D(t, j) == 0) continue;
                Integer q = floor_div(D(t, j), D(t, t));
                col_op(j, t, q);
                if (D(t, j) != 0) done = false;
            }
            if (!done) continue;
            // divisibility of the remaining block by the pivot
            std::size_t bad = r;
            for (std::size_t i = t + 1; i < r && bad == r; ++i)
                for (std::size_t j = t + 1; j < c; ++j)
                    if (!mpz_divisible_p(D(i, j).get_mpz_t(), D(t, t).get_mpz_t())) {
                        bad = i;
                        break;
                    }
            if (bad == r) break;
            row_axpy(D, t, bad, Integer(-1));
            row_axpy(U, t, bad, Integer(-1));
        }
        if (t < r && t < c && D(t, t) < 0) {
            negate_row(D, t);
            negate_row(U, t);
        }
    }
    return {std::move(U), std::move(D), std::move(V), std::move(Vi)};
}

std::size_t snf_rank(const IntMatrix& D) {
    std::size_t k = 0;
    while (k < std::min(D.rows(), D.cols()) && D(k, k) != 0) ++k;
    return k;
}

namespace {

IntMatrix nonzero_hnf_rows(const IntMatrix& gens) {
    IntMatrix H = hnf(gens).H;
    std::size_t k = 0;
    while (k < H.rows()) {
        bool zero = true;
        for (std::size_t j = 0; j < H.cols(); ++j)
            if (H(k, j) != 0) {
                zero = false;
                break;
            }
        if (zero) break;
        ++k;
    }
    return H.row_block(0, k);
}

}  // namespace

IntMatrix left_kernel(const IntMatrix& m) {
    auto [H, U] = hnf(m);
    std::size_t k = 0;
    std::vector<std::size_t> zero_rows;
    for (std::size_t i = 0; i < H.rows(); ++i) {
        bool zero = true;
        for (std::size_t j = 0; j < H.cols(); ++j)
            if (H(i, j) != 0) {
                zero = false;
                break;
            }
        if (zero) zero_rows.push_back(i);
    }
    IntMatrix K(zero_rows.size(), m.rows());
    for (std::size_t i : zero_rows) {
        for (std::size_t j = 0; j < m.rows(); ++j) K(k, j) = U(i, j);
        ++k;
    }
    if (K.rows() == 0) return K;
    return nonzero_hnf_rows(K);
}

IntMatrix right_kernel(const IntMatrix& m) { return left_kernel(m.transpose()); }

// ---------------------------------------------------------------- Lattice

Lattice::Lattice(std::size_t ambient_dim, const IntMatrix& generators) : ambient_dim_(ambient_dim) {
    if (generators.rows() == 0) {
        basis_ = IntMatrix(0, ambient_dim);
        return;
    }
    if (generators.cols() != ambient_dim) throw std::invalid_argument("Lattice: generator width mismatch");
    basis_ = nonzero_hnf_rows(generators);
}

bool Lattice::contains(const std::vector<Integer>& v) const {
    if (v.size() != ambient_dim_) throw std::invalid_argument("Lattice::contains: dimension mismatch");
    std::vector<Integer> w = v;
    for (std::size_t i = 0; i < basis_.rows(); ++i) {
        std::size_t p = 0;
        while (basis_(i, p) == 0) ++p;
        for (std::size_t j = 0; j < p; ++j)
            if (w[j] != 0) return false;
        if (!mpz_divisible_p(w[p].get_mpz_t(), basis_(i, p).get_mpz_t())) return false;
        Integer q = w[p] / basis_(i, p);
        for (std::size_t j = p; j < ambient_dim_; ++j) w[j] -= q * basis_(i, j);
    }
    for (const auto& x : w)
        if (x != 0) return false;
    return true;
}

bool Lattice::is_primitive() const { return saturate(*this) == *this; }

Lattice Lattice::operator+(const Lattice& o) const {
    if (ambient_dim_ != o.ambient_dim_) throw std::invalid_argument("Lattice sum: dimension mismatch");
    return Lattice(ambient_dim_, stack_rows(basis_, o.basis_));
}

Lattice saturate(const Lattice& lattice) {
    const std::size_t k = lattice.rank();
    if (k == 0) return lattice;
    SnfResult s = snf(lattice.basis());
    return Lattice(lattice.ambient_dim(), s.V_inv.row_block(0, k));
}

// ---------------------------------------------------------------- spectra

IntPoly charpoly(const IntMatrix& a) {
    require_square(a, "charpoly");
    // Faddeev-LeVerrier; every intermediate is integral.
    const std::size_t n = a.rows();
    std::vector<Integer> c(n + 1);
    c[n] = 1;
    IntMatrix M(n, n);
    for (std::size_t k = 1; k <= n; ++k) {
        M = a * M;
        for (std::size_t i = 0; i < n; ++i) M(i, i) += c[n - k + 1];
        IntMatrix AM = a * M;
        Integer tr = 0;
        for (std::size_t i = 0; i < n; ++i) tr += AM(i, i);
        Integer kk = static_cast<unsigned long>(k);
        mpz_divexact(tr.get_mpz_t(), tr.get_mpz_t(), kk.get_mpz_t());
        c[n - k] = -tr;
    }
    return IntPoly(std::move(c));
}

CyclotomicSplit cyclotomic_split(const IntPoly& p) {
    if (p.is_zero()) throw std::invalid_argument("cyclotomic_split: zero polynomial");
    IntPoly cyc{1};
    IntPoly rest = p;
    const auto deg = static_cast<unsigned long>(p.degree());
    // phi(k) >= sqrt(k/2), so phi(k) <= deg forces k <= 2 deg^2.
    const unsigned long kmax = 2 * deg * deg + 2;
    for (unsigned long k = 1; k <= kmax && rest.degree() > 0; ++k) {
        if (euler_phi(k) > static_cast<unsigned long>(rest.degree())) continue;
        const IntPoly& phi = cyclotomic_polynomial(k);
        while (rest.degree() >= phi.degree()) {
            auto q = rest.exact_div(phi);
            if (!q) break;
            rest = std::move(*q);
            cyc = cyc * phi;
        }
    }
    return {std::move(cyc), std::move(rest)};
}

bool is_positive(const IntMatrix& a) {
    require_square(a, "is_positive");
    if (determinant(a) == 0) return false;
    return cyclotomic_split(charpoly(a)).cyclotomic.is_constant();
}

Decomposition decompose(const IntMatrix& a) {
    require_nonsingular(a, "decompose");
    const std::size_t n = a.rows();
    CyclotomicSplit split = cyclotomic_split(charpoly(a));
    IntMatrix k1 = right_kernel(split.cyclotomic.evaluate(a));
    IntMatrix k2 = right_kernel(split.rest.evaluate(a));
    const std::size_t n1 = k1.rows(), n2 = k2.rows();
    if (n1 + n2 != n) throw std::logic_error("decompose: invariant subspaces do not span");
    IntMatrix P = stack_rows(k1, k2).transpose();
    RatMatrix conj = inverse(to_rational(P)) * to_rational(a) * to_rational(P);
    Decomposition d{P, IntMatrix(n1, n1), IntMatrix(n2, n2)};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const Rational& v = conj(i, j);
            bool same_block = (i < n1) == (j < n1);
            if (!same_block) {
                if (v != 0) throw std::logic_error("decompose: subspaces not invariant");
                continue;
            }
            if (v.get_den() != 1) throw std::logic_error("decompose: non-integral block");
            if (i < n1) d.A1(i, j) = v.get_num();
            else d.A2(i - n1, j - n1) = v.get_num();
        }
    return d;
}

}  // namespace toridyn
