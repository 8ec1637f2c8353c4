#include "toridyn/cyclo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace toridyn {

namespace {

constexpr double kUnit = 1.1102230246251565e-16;  // 2^-53

Rational frac(const Rational& q) {
    Integer f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    Rational r = q - Rational(f);
    r.canonicalize();
    return r;
}

std::size_t phi_size(unsigned long n) { return static_cast<std::size_t>(euler_phi(n)); }

void reduce_mod_phi(std::vector<Rational>& c, unsigned long n) {
    const IntPoly& p = cyclotomic_polynomial(n);
    const std::size_t deg = static_cast<std::size_t>(p.degree());
    for (std::size_t d = c.size(); d-- > deg;) {
        if (c[d] == 0) continue;
        Rational q = c[d];
        for (std::size_t i = 0; i <= deg; ++i)
            if (p.coeffs()[i] != 0) c[d - deg + i] -= q * Rational(p.coeffs()[i]);
    }
    c.resize(deg);
}

// Solves sum_j x_j cols[j] = target; cols are assumed linearly independent.
std::optional<std::vector<Rational>> solve_columns(const std::vector<std::vector<Rational>>& cols,
                                                   const std::vector<Rational>& target) {
    const std::size_t m = target.size(), k = cols.size();
    std::vector<std::vector<Rational>> a(m, std::vector<Rational>(k + 1));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < k; ++j) a[i][j] = cols[j][i];
        a[i][k] = target[i];
    }
    std::size_t row = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t j = 0; j < k && row < m; ++j) {
        std::size_t p = row;
        while (p < m && a[p][j] == 0) ++p;
        if (p == m) continue;
        std::swap(a[p], a[row]);
        for (std::size_t i = 0; i < m; ++i) {
            if (i == row || a[i][j] == 0) continue;
            Rational f = a[i][j] / a[row][j];
            for (std::size_t t = j; t <= k; ++t) a[i][t] -= f * a[row][t];
        }
        pivots.push_back(j);
        ++row;
    }
    for (std::size_t i = row; i < m; ++i)
        if (a[i][k] != 0) return std::nullopt;
    std::vector<Rational> x(k);
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = a[r][k] / a[r][pivots[r]];
    return x;
}

}  // namespace

unsigned long lcm_ul(unsigned long a, unsigned long b) { return a / std::gcd(a, b) * b; }

// ---------------------------------------------------------------- RootOfUnity

RootOfUnity::RootOfUnity(const Rational& exponent) {
    Rational e = exponent;
    e.canonicalize();
    exp_ = frac(e);
}

std::string RootOfUnity::to_string() const { return exp_.get_num().get_str() + "/" + exp_.get_den().get_str(); }

// ---------------------------------------------------------------- CycloNumber

CycloNumber::CycloNumber(unsigned long conductor, std::vector<Rational> coeffs) : n_(conductor), c_(std::move(coeffs)) {
    if (n_ == 0) throw std::invalid_argument("CycloNumber: conductor must be positive");
    for (auto& x : c_) x.canonicalize();
    const std::size_t f = phi_size(n_);
    if (c_.size() < f) c_.resize(f);
    reduce_mod_phi(c_, n_);
}

CycloNumber::CycloNumber(const Rational& q) : n_(1), c_{q} { c_[0].canonicalize(); }

CycloNumber CycloNumber::zeta(unsigned long n, long k) {
    if (n == 0) throw std::invalid_argument("zeta: conductor must be positive");
    long r = k % static_cast<long>(n);
    if (r < 0) r += static_cast<long>(n);
    std::vector<Rational> c(static_cast<std::size_t>(r) + 1);
    c[static_cast<std::size_t>(r)] = 1;
    return CycloNumber(n, std::move(c));
}

CycloNumber CycloNumber::root(const RootOfUnity& xi) {
    return zeta(xi.order().get_ui(), xi.exponent().get_num().get_si());
}

CycloNumber CycloNumber::lift(unsigned long m) const {
    if (m == n_) return *this;
    if (m == 0 || m % n_ != 0) throw std::invalid_argument("CycloNumber::lift: conductor must divide target");
    const unsigned long s = m / n_;
    std::vector<Rational> c((c_.size() ? (c_.size() - 1) * s : 0) + 1);
    for (std::size_t i = 0; i < c_.size(); ++i) c[i * s] = c_[i];
    return CycloNumber(m, std::move(c));
}

CycloNumber CycloNumber::normalize() const {
    for (unsigned long d = 1; d < n_; ++d) {
        if (n_ % d != 0) continue;
        bool fixed = true;
        for (unsigned long k = 1 + d; k < n_ && fixed; k += d)
            if (std::gcd(k, n_) == 1 && galois(static_cast<long>(k)) != *this) fixed = false;
        if (!fixed) continue;
        const std::size_t f = phi_size(d);
        std::vector<std::vector<Rational>> cols;
        for (std::size_t j = 0; j < f; ++j) cols.push_back(zeta(d, static_cast<long>(j)).lift(n_).c_);
        auto x = solve_columns(cols, c_);
        if (!x) continue;
        return CycloNumber(d, *x);
    }
    return *this;
}

CycloNumber CycloNumber::operator-() const {
    CycloNumber r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

CycloNumber CycloNumber::operator+(const CycloNumber& o) const {
    if (n_ != o.n_) {
        const unsigned long m = lcm_ul(n_, o.n_);
        return lift(m) + o.lift(m);
    }
    CycloNumber r = *this;
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
    return r;
}

CycloNumber CycloNumber::operator-(const CycloNumber& o) const { return *this + (-o); }

CycloNumber CycloNumber::operator*(const CycloNumber& o) const {
    if (n_ != o.n_) {
        const unsigned long m = lcm_ul(n_, o.n_);
        return lift(m) * o.lift(m);
    }
    std::vector<Rational> c(2 * c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (std::size_t j = 0; j < o.c_.size(); ++j)
            if (o.c_[j] != 0) c[i + j] += c_[i] * o.c_[j];
    }
    CycloNumber r;
    r.n_ = n_;
    reduce_mod_phi(c, n_);
    r.c_ = std::move(c);
    return r;
}

CycloNumber CycloNumber::inverse() const {
    if (is_zero()) throw DomainError("CycloNumber: division by zero");
    if (is_rational()) return CycloNumber(n_, {Rational(1) / c_[0]});
    const std::size_t f = c_.size();
    std::vector<std::vector<Rational>> cols;
    for (std::size_t j = 0; j < f; ++j) cols.push_back((*this * zeta(n_, static_cast<long>(j))).c_);
    std::vector<Rational> e(f);
    e[0] = 1;
    auto x = solve_columns(cols, e);
    if (!x) throw DomainError("CycloNumber: inverse failed");
    return CycloNumber(n_, *x);
}

CycloNumber CycloNumber::operator/(const CycloNumber& o) const { return *this * o.inverse(); }

CycloNumber CycloNumber::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    CycloNumber result = CycloNumber(1).lift(n_);
    CycloNumber base = *this;
    while (e > 0) {
        if (e & 1) result *= base;
        e >>= 1;
        if (e) base *= base;
    }
    return result;
}

CycloNumber CycloNumber::galois(long k) const {
    const long n = static_cast<long>(n_);
    long kr = ((k % n) + n) % n;
    if (std::gcd(static_cast<unsigned long>(kr), n_) != 1)
        throw DomainError("galois: exponent not coprime to the conductor");
    std::vector<Rational> c(n_);
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (c_[i] != 0) c[static_cast<std::size_t>((static_cast<long>(i) * kr) % n)] += c_[i];
    return CycloNumber(n_, std::move(c));
}

bool CycloNumber::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const Rational& x) { return x == 0; });
}

bool CycloNumber::is_integral() const {
    return std::all_of(c_.begin(), c_.end(), [](const Rational& x) { return x.get_den() == 1; });
}

bool CycloNumber::is_rational() const {
    for (std::size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

Integer CycloNumber::denominator() const {
    Integer d = 1;
    for (const auto& x : c_) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), x.get_den_mpz_t());
    return d;
}

bool CycloNumber::operator==(const CycloNumber& o) const {
    if (n_ == o.n_) return c_ == o.c_;
    const unsigned long m = lcm_ul(n_, o.n_);
    return lift(m).c_ == o.lift(m).c_;
}

std::string CycloNumber::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        Rational a = abs(c_[i]);
        if (!first) os << (c_[i] < 0 ? " - " : " + ");
        else if (c_[i] < 0) os << "-";
        first = false;
        bool unit = a == 1;
        if (!unit || i == 0) os << a.get_str();
        if (i > 0) {
            if (!unit) os << "*";
            os << "z";
            if (i > 1) os << "^" << i;
        }
    }
    if (first) os << "0";
    if (n_ > 2) os << " (z = zeta_" << n_ << ")";
    return os.str();
}

// ---------------------------------------------------------------- embeddings

ComplexApprox embed(const CycloNumber& alpha, long k) {
    const unsigned long n = alpha.conductor();
    const long nl = static_cast<long>(n);
    long kr = ((k % nl) + nl) % nl;
    if (std::gcd(static_cast<unsigned long>(kr), n) != 1)
        throw DomainError("embed: exponent not coprime to the conductor");
    std::complex<double> sum = 0;
    double mass = 0;
    const auto& c = alpha.coeffs();
    for (std::size_t j = 0; j < c.size(); ++j) {
        if (c[j] == 0) continue;
        const double cj = c[j].get_d();
        const long r = (static_cast<long>(j) * kr) % nl;
        const double theta = 2.0 * M_PI * static_cast<double>(r) / static_cast<double>(n);
        sum += cj * std::complex<double>(std::cos(theta), std::sin(theta));
        mass += std::abs(cj);
    }
    const double err = (16.0 + 3.0 * static_cast<double>(c.size())) * kUnit * mass;
    return {sum, err};
}

RealApprox house(const CycloNumber& alpha) {
    const unsigned long n = alpha.conductor();
    RealApprox best{0.0, 0.0};
    for (unsigned long k = 1; k <= n; ++k) {
        if (std::gcd(k, n) != 1) continue;
        ComplexApprox e = embed(alpha, static_cast<long>(k));
        const double m = std::abs(e.value);
        if (m > best.value) best.value = m;
        best.error = std::max(best.error, e.error + 2 * kUnit * m);
    }
    return best;
}

bool is_scaled_integral(const CycloNumber& alpha, const Integer& m) {
    for (const auto& x : alpha.coeffs()) {
        Rational y = x * Rational(m);
        y.canonicalize();
        if (y.get_den() != 1) return false;
    }
    return true;
}

// ---------------------------------------------------------------- Loxton search

namespace {

using Vec = std::vector<std::int64_t>;

struct VecHash {
    std::size_t operator()(const Vec& v) const {
        std::size_t h = 1469598103934665603ull;
        for (auto x : v) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
        return h;
    }
};

// Number of multisets of size k from r items, saturating at `cap`.
double multiset_count(std::size_t r, unsigned k) {
    double c = 1;
    for (unsigned i = 0; i < k; ++i) c = c * static_cast<double>(r + i) / static_cast<double>(i + 1);
    return c;
}

void enumerate_multisets(const std::vector<Vec>& roots, unsigned k,
                         const std::function<bool(const Vec&, const std::vector<int>&)>& visit) {
    const std::size_t dim = roots.empty() ? 0 : roots[0].size();
    std::vector<int> idx;
    Vec sum(dim, 0);
    std::function<bool(std::size_t)> rec = [&](std::size_t start) -> bool {
        if (idx.size() == k) return visit(sum, idx);
        for (std::size_t i = start; i < roots.size(); ++i) {
            idx.push_back(static_cast<int>(i));
            for (std::size_t t = 0; t < dim; ++t) sum[t] += roots[i][t];
            bool stop = rec(i);
            for (std::size_t t = 0; t < dim; ++t) sum[t] -= roots[i][t];
            idx.pop_back();
            if (stop) return true;
        }
        return false;
    };
    rec(0);
}

constexpr double kTableCap = 6e6;
constexpr double kProbeCap = 6e7;

}  // namespace

std::optional<std::vector<RootOfUnity>> loxton_decompose(const CycloNumber& alpha, unsigned b_max,
                                                         unsigned long order_bound) {
    if (!alpha.is_integral()) throw DomainError("loxton_decompose: argument is not an algebraic integer");
    if (order_bound == 0) throw std::invalid_argument("loxton_decompose: order bound must be positive");
    const unsigned long N = lcm_ul(alpha.conductor(), order_bound);
    const unsigned long step = N / order_bound;
    const std::size_t f = phi_size(N);

    std::vector<Vec> roots;
    for (unsigned long j = 0; j < order_bound; ++j) {
        CycloNumber z = CycloNumber::zeta(N, static_cast<long>(j * step));
        Vec v(f);
        for (std::size_t t = 0; t < f; ++t) v[t] = z.coeffs()[t].get_num().get_si();
        roots.push_back(std::move(v));
    }
    Vec target(f);
    CycloNumber a = alpha.lift(N);
    for (std::size_t t = 0; t < f; ++t) {
        const Integer& x = a.coeffs()[t].get_num();
        if (!x.fits_slong_p()) return std::nullopt;
        target[t] = x.get_si();
    }

    auto to_roots = [&](std::vector<int> idx) {
        std::vector<RootOfUnity> out;
        for (int i : idx) out.emplace_back(Rational(static_cast<long>(i), static_cast<long>(order_bound)));
        std::sort(out.begin(), out.end());
        return out;
    };

    if (std::all_of(target.begin(), target.end(), [](std::int64_t x) { return x == 0; }))
        return std::vector<RootOfUnity>{};

    std::unordered_map<unsigned, std::unordered_map<Vec, std::vector<int>, VecHash>> tables;
    auto table_for = [&](unsigned k) -> const std::unordered_map<Vec, std::vector<int>, VecHash>& {
        auto it = tables.find(k);
        if (it != tables.end()) return it->second;
        if (multiset_count(roots.size(), k) > kTableCap)
            throw DomainError("loxton_decompose: search space exceeds the table budget");
        auto& t = tables[k];
        enumerate_multisets(roots, k, [&](const Vec& s, const std::vector<int>& idx) {
            t.emplace(s, idx);
            return false;
        });
        return t;
    };

    for (unsigned b = 1; b <= b_max; ++b) {
        const unsigned b1 = (b + 1) / 2, b2 = b / 2;
        if (multiset_count(roots.size(), b1) > kProbeCap)
            throw DomainError("loxton_decompose: search space exceeds the probe budget");
        const auto& table = table_for(b2);
        std::optional<std::vector<int>> hit;
        enumerate_multisets(roots, b1, [&](const Vec& s, const std::vector<int>& idx) {
            Vec rest(f);
            for (std::size_t t = 0; t < f; ++t) rest[t] = target[t] - s[t];
            auto it = table.find(rest);
            if (it == table.end()) return false;
            std::vector<int> all = idx;
            all.insert(all.end(), it->second.begin(), it->second.end());
            hit = std::move(all);
            return true;
        });
        if (hit) return to_roots(*hit);
    }
    return std::nullopt;
}

// ---------------------------------------------------------------- point conditions

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

int compare_house(const CycloNumber& alpha, const Rational& c) {
    if (c < 0) throw std::invalid_argument("compare_house: negative bound");
    RealApprox h = house(alpha);
    const double cd = c.get_d();
    if (h.value - h.error > cd * (1 + 1e-15)) return 1;
    if (h.value + h.error < cd * (1 - 1e-15)) return -1;
    // Every conjugate of alpha * conj(alpha) equal to c^2 forces equality in
    // the field, so a tie happens only when that product is rational.
    CycloNumber norm2 = alpha * alpha.galois(-1);
    if (norm2.is_rational()) {
        const Rational v = norm2.coeffs()[0];
        const Rational c2 = c * c;
        return v < c2 ? -1 : (v > c2 ? 1 : 0);
    }
    throw DomainError("house comparison not separable at double precision");
}

PointSetReport check_point_set_conditions(const std::vector<std::vector<CycloNumber>>& points, const Integer& m,
                                          double c) {
    PointSetReport report;
    if (!points.empty()) {
        const std::size_t dim = points[0].size();
        for (const auto& p : points)
            if (p.size() != dim) throw std::invalid_argument("check_point_set_conditions: ambient dimension mismatch");
    }
    bool any_indeterminate = false;
    for (const auto& p : points) {
        PointConditionReport r;
        bool fail = false, unsure = false;
        for (const auto& x : p) {
            if (!is_scaled_integral(x, m)) r.dci = false;
            RealApprox h = house(x);
            if (h.value > r.max_house) {
                r.max_house = h.value;
            }
            r.house_error = std::max(r.house_error, h.error);
            if (h.value - h.error > c) fail = true;
            else if (h.value + h.error > c) {
                // Straddles the threshold: decide exactly when |alpha|^2 is rational.
                CycloNumber norm2 = x * x.galois(-1);
                if (norm2.is_rational() && c >= 0) {
                    if (norm2.coeffs()[0] > Rational(c) * Rational(c)) fail = true;
                } else {
                    unsure = true;
                }
            }
        }
        r.bh = fail ? Verdict::fail : (unsure ? Verdict::indeterminate : Verdict::pass);
        report.dci_all = report.dci_all && r.dci;
        if (r.bh == Verdict::fail) report.bh_all = Verdict::fail;
        if (r.bh == Verdict::indeterminate) any_indeterminate = true;
        report.points.push_back(r);
    }
    if (report.bh_all != Verdict::fail && any_indeterminate) report.bh_all = Verdict::indeterminate;
    return report;
}

}  // namespace toridyn
