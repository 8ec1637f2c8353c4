#include "toridyn/affdyn.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <set>
#include <sstream>

namespace toridyn {

namespace {

std::vector<Poly::Exponent> monomials_of_degree(std::size_t nvars, long k) {
    std::vector<Poly::Exponent> out;
    Poly::Exponent e(nvars, 0);
    auto rec = [&](auto&& self, std::size_t i, long left) -> void {
        if (i + 1 == nvars) {
            e[i] = left;
            out.push_back(e);
            return;
        }
        for (long a = left; a >= 0; --a) {
            e[i] = a;
            self(self, i + 1, left - a);
        }
    };
    if (nvars == 0) return out;
    rec(rec, 0, k);
    return out;
}

// Particular solution (free variables zero) of A X = B over Q, one column of
// X per column of B; nullopt if any column is inconsistent.
std::optional<std::vector<std::vector<Rational>>> solve_linear(std::vector<std::vector<Rational>> a,
                                                               std::vector<std::vector<Rational>> b) {
    const std::size_t rows = a.size();
    const std::size_t cols = rows ? a[0].size() : 0;
    const std::size_t rhs = rows ? b[0].size() : 0;
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[r]);
        std::swap(b[p], b[r]);
        const Rational inv = Rational(1) / a[r][c];
        for (std::size_t t = c; t < cols; ++t) a[r][t] *= inv;
        for (std::size_t t = 0; t < rhs; ++t) b[r][t] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            const Rational f = a[i][c];
            for (std::size_t t = c; t < cols; ++t) a[i][t] -= f * a[r][t];
            for (std::size_t t = 0; t < rhs; ++t) b[i][t] -= f * b[r][t];
        }
        pivots.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < rows; ++i)
        for (std::size_t t = 0; t < rhs; ++t)
            if (b[i][t] != 0) return std::nullopt;
    std::vector<std::vector<Rational>> x(rhs, std::vector<Rational>(cols));
    for (std::size_t i = 0; i < pivots.size(); ++i)
        for (std::size_t t = 0; t < rhs; ++t) x[t][pivots[i]] = b[i][t];
    return x;
}

long log_abs_rational(const Rational& c, const Integer& p) { return -valuation(c, p); }

std::string point_key(const std::vector<CycloNumber>& z) {
    std::string s;
    for (const auto& x : z) {
        for (const auto& c : x.coeffs()) {
            s += c.get_str();
            s += ',';
        }
        s += ';';
    }
    return s;
}

std::vector<CycloNumber> common_field(const std::vector<CycloNumber>& z) {
    unsigned long n = 1;
    for (const auto& x : z) n = lcm_ul(n, x.conductor());
    std::vector<CycloNumber> out;
    for (const auto& x : z) out.push_back(x.lift(n));
    return out;
}

bool p_integral(const CycloNumber& a, const Integer& p) {
    for (const auto& c : a.coeffs())
        if (mpz_divisible_p(c.get_den_mpz_t(), p.get_mpz_t())) return false;
    return true;
}

// (1 - zeta_{p^k})^{-1} in Q(zeta_n), cached per (n, p).
const CycloNumber& uniformizer_inverse(unsigned long n, unsigned long pk) {
    static std::mutex mu;
    static std::map<std::pair<unsigned long, unsigned long>, CycloNumber> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(n, pk);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    CycloNumber pi = CycloNumber(1) - CycloNumber::zeta(n, static_cast<long>(n / pk));
    return cache.emplace(key, pi.lift(n).inverse()).first->second;
}

}  // namespace

TopPart top_part(const PolyMap& f) {
    const long d = f.degree();
    if (d < 1) throw DomainError("top_part: map is constant");
    std::vector<Poly> top, low;
    for (const auto& c : f.components()) {
        Poly t = c.homogeneous_part(d);
        top.push_back(t);
        low.push_back(c - t);
    }
    return {PolyMap(f.nvars(), top), PolyMap(f.nvars(), low)};
}

bool RegularityCertificate::verify(const PolyMap& f) const {
    const std::size_t n = f.dim();
    if (f.nvars() != n || R.size() != n) return false;
    TopPart tp = top_part(f);
    for (std::size_t i = 0; i < n; ++i) {
        if (R[i].size() != n) return false;
        Poly s(n);
        for (std::size_t j = 0; j < n; ++j) s = s + R[i][j] * tp.top[j];
        Poly::Exponent e(n, 0);
        e[i] = m;
        if (s != Poly::monomial(e, 1)) return false;
    }
    return true;
}

std::optional<RegularityCertificate> regularity_certificate(const PolyMap& f) {
    const std::size_t n = f.dim();
    if (f.nvars() != n) throw std::invalid_argument("regularity_certificate: map is not an endomorphism");
    const long d = f.degree();
    if (d < 2) throw DomainError("regularity_certificate: degree must be at least 2");
    for (const auto& c : f.components())
        if (c.has_negative_exponents()) throw DomainError("regularity_certificate: Laurent components");
    TopPart tp = top_part(f);
    const long bound = static_cast<long>(n) * (d - 1) + 1;
    for (long m = d; m <= bound; ++m) {
        auto rows = monomials_of_degree(n, m);
        auto mults = monomials_of_degree(n, m - d);
        std::map<Poly::Exponent, std::size_t> row_of;
        for (std::size_t i = 0; i < rows.size(); ++i) row_of[rows[i]] = i;
        const std::size_t cols = n * mults.size();
        std::vector<std::vector<Rational>> a(rows.size(), std::vector<Rational>(cols));
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < mults.size(); ++k) {
                Poly prod = Poly::monomial(mults[k], 1) * tp.top[j];
                for (const auto& [e, c] : prod.terms()) a[row_of.at(e)][j * mults.size() + k] = c;
            }
        std::vector<std::vector<Rational>> b(rows.size(), std::vector<Rational>(n));
        for (std::size_t i = 0; i < n; ++i) {
            Poly::Exponent e(n, 0);
            e[i] = m;
            b[row_of.at(e)][i] = 1;
        }
        auto x = solve_linear(a, b);
        if (!x) continue;
        RegularityCertificate cert;
        cert.m = static_cast<unsigned>(m);
        cert.R.assign(n, std::vector<Poly>(n, Poly(n)));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < mults.size(); ++k)
                    cert.R[i][j].add_term(mults[k], (*x)[i][j * mults.size() + k]);
        if (!cert.verify(f)) throw std::logic_error("regularity certificate failed re-verification");
        return cert;
    }
    return std::nullopt;
}

Rational EscapeData::log_A(const Integer& p) const {
    for (const auto& b : bad_primes)
        if (b.p == p) return b.log_A;
    return 0;
}

EscapeData escape_data(const PolyMap& f, const RegularityCertificate& cert) {
    if (!cert.verify(f)) throw DomainError("invalid regularity certificate");
    const long d = f.degree();
    TopPart tp = top_part(f);
    const std::size_t n = f.dim();

    std::set<Integer> primes;
    auto collect = [&](const Poly& p) {
        for (const auto& [e, c] : p.terms())
            for (const auto& q : prime_factors(c.get_den())) primes.insert(q);
    };
    for (const auto& row : cert.R)
        for (const auto& r : row) collect(r);
    for (const auto& h : tp.lower.components()) collect(h);

    EscapeData out;
    for (const auto& p : primes) {
        std::optional<long> lb, lh;
        for (const auto& row : cert.R)
            for (const auto& r : row)
                for (const auto& [e, c] : r.terms()) lb = std::max(lb.value_or(LONG_MIN), log_abs_rational(c, p));
        for (const auto& h : tp.lower.components())
            for (const auto& [e, c] : h.terms()) lh = std::max(lh.value_or(LONG_MIN), log_abs_rational(c, p));
        const long b = lb.value_or(0);
        Rational q = 0;
        if (lh) q = std::max(q, Rational(b + *lh));
        q = std::max(q, Rational(b, d - 1));
        q.canonicalize();
        if (q <= 0) continue;
        out.bad_primes.push_back({p, q, b, lh});
        Integer ceil_q;
        mpz_cdiv_q(ceil_q.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
        Integer pk;
        mpz_pow_ui(pk.get_mpz_t(), p.get_mpz_t(), ceil_q.get_ui());
        out.M *= pk;
    }

    for (std::size_t i = 0; i < n; ++i) {
        double rowsum = 0;
        for (std::size_t j = 0; j < n; ++j) rowsum += cert.R[i][j].l1_norm();
        out.arch_B = std::max(out.arch_B, rowsum);
        out.arch_H = std::max(out.arch_H, tp.lower[i].l1_norm());
        out.arch_C = std::max(out.arch_C, tp.top[i].l1_norm());
    }
    // small upward margin for rounding in the norms
    out.arch_radius = std::max(1.0, out.arch_B * (1 + out.arch_H)) * (1 + 1e-12);
    return out;
}

std::optional<Rational> log_abs_p(const CycloNumber& alpha, const Integer& p) {
    if (alpha.is_zero()) return std::nullopt;
    long t = LONG_MAX;
    for (const auto& c : alpha.coeffs())
        if (c != 0) t = std::min(t, valuation(c, p));
    const unsigned long n = alpha.conductor();
    unsigned long pk = 1;
    const unsigned long pu = p.fits_ulong_p() ? p.get_ui() : 0;
    if (pu != 0)
        while (n % (pk * pu) == 0) pk *= pu;
    if (pk == 1) return Rational(-t);
    // Totally ramified over the unramified part: measure divisibility by
    // the uniformizer 1 - zeta_{p^k}, of valuation 1/e.
    const unsigned long e = pk / pu * (pu - 1);
    Integer pt;
    mpz_pow_ui(pt.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(std::labs(t)));
    CycloNumber y = t >= 0 ? alpha * CycloNumber(Rational(1) / Rational(pt)) : alpha * CycloNumber(Rational(pt));
    const CycloNumber& pinv = uniformizer_inverse(n, pk);
    unsigned long s = 0;
    while (s + 1 < e) {
        CycloNumber next = y * pinv;
        if (!p_integral(next, p)) break;
        y = next;
        ++s;
    }
    Rational r = Rational(-t) - Rational(static_cast<long>(s), static_cast<long>(e));
    r.canonicalize();
    return r;
}

std::optional<Rational> log_abs_p(const std::vector<CycloNumber>& z, const Integer& p) {
    std::optional<Rational> best;
    for (const auto& x : z) {
        auto v = log_abs_p(x, p);
        if (v && (!best || *v > *best)) best = v;
    }
    return best;
}

RealApprox vector_house(const std::vector<CycloNumber>& z) {
    RealApprox best{0, 0};
    for (const auto& x : z) {
        RealApprox h = house(x);
        if (h.value > best.value) best.value = h.value;
        best.error = std::max(best.error, h.error);
    }
    return best;
}

std::string to_string(OrbitDecision::Kind k) {
    switch (k) {
        case OrbitDecision::Kind::preperiodic: return "preperiodic";
        case OrbitDecision::Kind::escapes: return "escapes";
        case OrbitDecision::Kind::budget_exceeded: return "budget_exceeded";
        case OrbitDecision::Kind::found: return "found";
        case OrbitDecision::Kind::orbit_closed: return "orbit_closed";
        case OrbitDecision::Kind::not_found: return "not_found";
    }
    return "budget_exceeded";
}

std::size_t iteration_budget() {
    if (const char* env = std::getenv("TORIDYN_BUDGET")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return 100000;
}

OrbitChecker::OrbitChecker(PolyMap f) : f_(std::move(f)) {
    if (f_.nvars() != f_.dim()) throw std::invalid_argument("map is not an endomorphism of A^N");
    auto cert = regularity_certificate(f_);
    if (!cert) throw DomainError("map is not regular");
    cert_ = std::move(*cert);
    esc_ = escape_data(f_, cert_);
}

std::optional<std::string> OrbitChecker::escape_place(const std::vector<CycloNumber>& z,
                                                      const std::map<Integer, Rational>& extra_floor,
                                                      double arch_floor) const {
    std::set<Integer> primes;
    for (const auto& b : esc_.bad_primes) primes.insert(b.p);
    for (const auto& [p, v] : extra_floor) primes.insert(p);
    for (const auto& x : z)
        for (const auto& p : prime_factors(x.denominator())) primes.insert(p);
    for (const auto& p : primes) {
        Rational floor = esc_.log_A(p);
        auto it = extra_floor.find(p);
        if (it != extra_floor.end()) floor = std::max(floor, it->second);
        auto v = log_abs_p(z, p);
        if (v && *v > floor) return p.get_str();
    }
    RealApprox h = vector_house(z);
    if (h.value - h.error > std::max(esc_.arch_radius, arch_floor)) return std::string("infinity");
    return std::nullopt;
}

OrbitDecision OrbitChecker::is_preperiodic(const std::vector<CycloNumber>& z0) const {
    if (z0.size() != f_.dim()) throw std::invalid_argument("is_preperiodic: point dimension mismatch");
    std::vector<CycloNumber> z = common_field(z0);
    std::map<std::string, std::size_t> seen;
    const std::size_t budget = iteration_budget();
    OrbitDecision out;
    for (std::size_t step = 0; step <= budget; ++step) {
        if (auto place = escape_place(z, {}, 0.0)) {
            out.kind = OrbitDecision::Kind::escapes;
            out.place = *place;
            out.steps = step;
            return out;
        }
        auto [it, inserted] = seen.emplace(point_key(z), step);
        if (!inserted) {
            out.kind = OrbitDecision::Kind::preperiodic;
            out.tail = it->second;
            out.period = step - it->second;
            return out;
        }
        z = f_.evaluate(z);
    }
    out.kind = OrbitDecision::Kind::budget_exceeded;
    out.steps = budget;
    return out;
}

OrbitDecision OrbitChecker::backward_orbit_filter(const std::vector<Rational>& x,
                                                  const std::vector<CycloNumber>& z0) const {
    if (z0.size() != f_.dim() || x.size() != f_.dim())
        throw std::invalid_argument("backward_orbit_filter: point dimension mismatch");
    std::vector<CycloNumber> target;
    std::map<Integer, Rational> floors;
    double arch_floor = 0;
    for (const auto& c : x) {
        target.emplace_back(c);
        arch_floor = std::max(arch_floor, std::abs(c.get_d()) * (1 + 1e-15));
        if (c == 0) continue;
        for (const auto& p : prime_factors(c.get_den())) {
            Rational v = -valuation(c, p);
            auto it = floors.find(p);
            if (it == floors.end() || v > it->second) floors[p] = v;
        }
    }
    std::vector<CycloNumber> z = common_field(z0);
    std::map<std::string, std::size_t> seen;
    const std::size_t budget = iteration_budget();
    OrbitDecision out;
    for (std::size_t step = 0; step <= budget; ++step) {
        bool hit = true;
        for (std::size_t i = 0; i < z.size() && hit; ++i) hit = z[i] == target[i];
        if (hit) {
            out.kind = OrbitDecision::Kind::found;
            out.steps = step;
            return out;
        }
        if (auto place = escape_place(z, floors, arch_floor)) {
            out.kind = OrbitDecision::Kind::escapes;
            out.place = *place;
            out.steps = step;
            return out;
        }
        auto [it, inserted] = seen.emplace(point_key(z), step);
        if (!inserted) {
            out.kind = OrbitDecision::Kind::orbit_closed;
            out.tail = it->second;
            out.period = step - it->second;
            return out;
        }
        z = f_.evaluate(z);
    }
    out.kind = OrbitDecision::Kind::not_found;
    out.steps = budget;
    return out;
}

OrbitDecision is_preperiodic(const PolyMap& f, const std::vector<CycloNumber>& z) {
    return OrbitChecker(f).is_preperiodic(z);
}

OrbitDecision backward_orbit_filter(const PolyMap& f, const std::vector<Rational>& x,
                                    const std::vector<CycloNumber>& z) {
    return OrbitChecker(f).backward_orbit_filter(x, z);
}

GreenEstimate green_estimate(const PolyMap& f, const std::vector<std::complex<double>>& z, unsigned n_iters) {
    if (n_iters > 60) throw std::invalid_argument("green_estimate: at most 60 iterations");
    if (z.size() != f.dim()) throw std::invalid_argument("green_estimate: point dimension mismatch");
    OrbitChecker checker(f);
    const EscapeData& esc = checker.escape();
    const double d = static_cast<double>(f.degree());
    const double B = esc.arch_B, H = esc.arch_H, C = esc.arch_C, R = esc.arch_radius;

    auto norm = [](const std::vector<std::complex<double>>& w) {
        double m = 0;
        for (const auto& x : w) m = std::max(m, std::abs(x));
        return m;
    };
    // |log||f(w)|| - d log||w||| <= c(r) once ||w|| >= r > R
    auto c_of = [&](double r) {
        return std::max(std::abs(std::log(1.0 / B - H / r)), std::abs(std::log(C + H / r)));
    };

    std::vector<std::complex<double>> w = z;
    double nw = norm(w);
    GreenEstimate out;
    for (unsigned k = 0;; ++k) {
        if (!std::isfinite(nw)) throw DomainError("green_estimate: orbit overflowed");
        if (nw > R) {
            // keep iterating while the next step stays representable
            while (k < n_iters && d * std::log(nw) + std::log(C + H + 1) < 650) {
                w = f.evaluate(w);
                nw = norm(w);
                ++k;
            }
            const double scale = std::pow(d, -static_cast<double>(k));
            out.value = scale * std::log(nw);
            out.error = scale * c_of(nw) / (d - 1) + 1e-12 * (1 + std::abs(out.value));
            out.escaped = true;
            out.iterations = k;
            return out;
        }
        if (k == n_iters) break;
        w = f.evaluate(w);
        nw = norm(w);
    }
    const double S = std::log(std::max(1.0, R)) + std::log(std::max(1.0, C + H)) / (d - 1);
    const double half = 0.5 * S * std::pow(d, -static_cast<double>(n_iters));
    out.value = half;
    out.error = half;
    out.iterations = n_iters;
    return out;
}

SemiconjugacyResult verify_semiconjugacy(const PolyMap& f, unsigned l, const PolyMap& phi, const IntMatrix& a) {
    const std::size_t N = f.dim(), n = phi.nvars();
    if (f.nvars() != N || phi.dim() != N) throw std::invalid_argument("verify_semiconjugacy: dimension mismatch");
    if (a.rows() != n || a.cols() != n) throw std::invalid_argument("verify_semiconjugacy: matrix size mismatch");
    if (l < 1) throw std::invalid_argument("verify_semiconjugacy: iterate must be positive");
    require_nonsingular(a, "verify_semiconjugacy");
    PolyMap lhs = phi;
    for (unsigned k = 0; k < l; ++k) lhs = f.compose(lhs);
    std::vector<Poly> mono;
    for (std::size_t i = 0; i < n; ++i) {
        Poly::Exponent e(n);
        for (std::size_t j = 0; j < n; ++j) e[j] = a(i, j).get_si();
        mono.push_back(Poly::monomial(e, 1));
    }
    PolyMap rhs = phi.compose(PolyMap(n, mono));
    return {lhs == rhs, n == N};
}

}  // namespace toridyn
