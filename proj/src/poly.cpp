#include "toridyn/poly.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace toridyn {

namespace {

void require_vars(std::size_t a, std::size_t b) {
    if (a != b) throw std::invalid_argument("polynomial variable count mismatch");
}

template <class T>
T power_of(const T& base, long e, const T& one) {
    T result = one, b = base;
    unsigned long k = static_cast<unsigned long>(e);
    while (k > 0) {
        if (k & 1) result = result * b;
        k >>= 1;
        if (k) b = b * b;
    }
    return result;
}

}  // namespace

Poly Poly::constant(std::size_t nvars, const Rational& c) {
    Poly p(nvars);
    p.add_term(Exponent(nvars, 0), c);
    return p;
}

Poly Poly::variable(std::size_t nvars, std::size_t i) {
    if (i >= nvars) throw std::invalid_argument("Poly::variable: index out of range");
    Exponent e(nvars, 0);
    e[i] = 1;
    return monomial(e, 1);
}

Poly Poly::monomial(Exponent e, const Rational& c) {
    Poly p(e.size());
    p.add_term(e, c);
    return p;
}

Rational Poly::coeff(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
}

void Poly::add_term(const Exponent& e, const Rational& c) {
    require_vars(e.size(), nvars_);
    if (c == 0) return;
    Rational cc = c;
    cc.canonicalize();
    auto [it, inserted] = terms_.emplace(e, cc);
    if (!inserted) {
        it->second += cc;
        if (it->second == 0) terms_.erase(it);
    }
}

long Poly::degree() const {
    long d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0L));
    return d;
}

Poly Poly::homogeneous_part(long k) const {
    Poly p(nvars_);
    for (const auto& [e, c] : terms_)
        if (std::accumulate(e.begin(), e.end(), 0L) == k) p.terms_.emplace(e, c);
    return p;
}

bool Poly::is_homogeneous() const { return homogeneous_part(degree()) == *this; }

bool Poly::has_negative_exponents() const {
    for (const auto& [e, c] : terms_)
        for (long x : e)
            if (x < 0) return true;
    return false;
}

Poly Poly::operator-() const {
    Poly p = *this;
    for (auto& [e, c] : p.terms_) c = -c;
    return p;
}

Poly Poly::operator+(const Poly& o) const {
    require_vars(nvars_, o.nvars_);
    Poly p = *this;
    for (const auto& [e, c] : o.terms_) p.add_term(e, c);
    return p;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
    require_vars(nvars_, o.nvars_);
    Poly p(nvars_);
    Exponent e(nvars_);
    for (const auto& [e1, c1] : terms_)
        for (const auto& [e2, c2] : o.terms_) {
            for (std::size_t i = 0; i < nvars_; ++i) e[i] = e1[i] + e2[i];
            p.add_term(e, c1 * c2);
        }
    return p;
}

Poly Poly::operator*(const Rational& c) const {
    if (c == 0) return Poly(nvars_);
    Poly p = *this;
    for (auto& [e, x] : p.terms_) x *= c;
    return p;
}

Poly Poly::pow(unsigned e) const { return power_of(*this, e, constant(nvars_, 1)); }

Poly Poly::substitute(const std::vector<Poly>& vals) const {
    require_vars(vals.size(), nvars_);
    const std::size_t m = vals.empty() ? 0 : vals[0].nvars();
    for (const auto& v : vals) require_vars(v.nvars(), m);
    // inverses only exist for monomial values
    auto inverse_of = [&](const Poly& v) {
        if (v.terms_.size() != 1) throw DomainError("negative power of a non-monomial");
        const auto& [e, c] = *v.terms_.begin();
        Exponent ne(e.size());
        for (std::size_t i = 0; i < e.size(); ++i) ne[i] = -e[i];
        return monomial(ne, Rational(1) / c);
    };
    std::vector<std::map<long, Poly>> cache(nvars_);
    auto power = [&](std::size_t i, long k) -> const Poly& {
        auto it = cache[i].find(k);
        if (it != cache[i].end()) return it->second;
        Poly base = k < 0 ? inverse_of(vals[i]) : vals[i];
        return cache[i].emplace(k, power_of(base, std::labs(k), constant(m, 1))).first->second;
    };
    Poly out(m);
    for (const auto& [e, c] : terms_) {
        Poly t = constant(m, c);
        for (std::size_t i = 0; i < nvars_; ++i)
            if (e[i] != 0) t = t * power(i, e[i]);
        out = out + t;
    }
    return out;
}

CycloNumber Poly::evaluate(const std::vector<CycloNumber>& z) const {
    require_vars(z.size(), nvars_);
    unsigned long n = 1;
    for (const auto& x : z) n = lcm_ul(n, x.conductor());
    std::vector<std::map<long, CycloNumber>> cache(nvars_);
    const CycloNumber one = CycloNumber(1).lift(n);
    auto power = [&](std::size_t i, long k) -> const CycloNumber& {
        auto it = cache[i].find(k);
        if (it != cache[i].end()) return it->second;
        CycloNumber base = k < 0 ? z[i].inverse() : z[i];
        return cache[i].emplace(k, power_of(base.lift(n), std::labs(k), one)).first->second;
    };
    CycloNumber out = CycloNumber(0).lift(n);
    for (const auto& [e, c] : terms_) {
        CycloNumber t = one * CycloNumber(c);
        for (std::size_t i = 0; i < nvars_; ++i)
            if (e[i] != 0) t *= power(i, e[i]);
        out += t;
    }
    return out;
}

std::complex<double> Poly::evaluate(const std::vector<std::complex<double>>& z) const {
    require_vars(z.size(), nvars_);
    std::complex<double> out = 0;
    for (const auto& [e, c] : terms_) {
        std::complex<double> t = c.get_d();
        for (std::size_t i = 0; i < nvars_; ++i)
            if (e[i] != 0) t *= std::pow(z[i], static_cast<double>(e[i]));
        out += t;
    }
    return out;
}

double Poly::l1_norm() const {
    double s = 0;
    for (const auto& [e, c] : terms_) s += std::abs(c.get_d());
    return s;
}

std::string Poly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // highest total degree first
    std::vector<std::pair<Exponent, Rational>> ts(terms_.rbegin(), terms_.rend());
    std::stable_sort(ts.begin(), ts.end(), [](const auto& a, const auto& b) {
        return std::accumulate(a.first.begin(), a.first.end(), 0L) > std::accumulate(b.first.begin(), b.first.end(), 0L);
    });
    const char* names1[] = {"z"};
    const char* names2[] = {"x", "y"};
    for (const auto& [e, c] : ts) {
        Rational a = abs(c);
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        first = false;
        bool is_const = std::all_of(e.begin(), e.end(), [](long x) { return x == 0; });
        bool wrote = false;
        if (a != 1 || is_const) {
            os << a.get_str();
            wrote = true;
        }
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (wrote) os << "*";
            if (nvars_ == 1) os << names1[0];
            else if (nvars_ == 2) os << names2[i];
            else os << "z" << (i + 1);
            if (e[i] != 1) os << "^" << e[i];
            wrote = true;
        }
    }
    return os.str();
}

Poly univariate(const std::vector<Rational>& coeffs) {
    Poly p(1);
    for (std::size_t k = 0; k < coeffs.size(); ++k) p.add_term({static_cast<long>(k)}, coeffs[k]);
    return p;
}

PolyMap::PolyMap(std::size_t nvars, std::vector<Poly> comps) : nvars_(nvars), comps_(std::move(comps)) {
    for (auto& c : comps_) {
        if (c.nvars() == 0 && c.is_zero()) c = Poly(nvars_);
        require_vars(c.nvars(), nvars_);
    }
}

long PolyMap::degree() const {
    long d = -1;
    for (const auto& c : comps_) d = std::max(d, c.degree());
    return d;
}

PolyMap PolyMap::compose(const PolyMap& inner) const {
    require_vars(inner.dim(), nvars_);
    std::vector<Poly> out;
    for (const auto& c : comps_) out.push_back(c.substitute(inner.comps_));
    return PolyMap(inner.nvars_, std::move(out));
}

PolyMap PolyMap::iterate(unsigned l) const {
    if (nvars_ != dim()) throw std::invalid_argument("PolyMap::iterate: not an endomorphism");
    std::vector<Poly> id;
    for (std::size_t i = 0; i < nvars_; ++i) id.push_back(Poly::variable(nvars_, i));
    PolyMap r(nvars_, id);
    for (unsigned k = 0; k < l; ++k) r = compose(r);
    return r;
}

std::vector<CycloNumber> PolyMap::evaluate(const std::vector<CycloNumber>& z) const {
    std::vector<CycloNumber> out;
    for (const auto& c : comps_) out.push_back(c.evaluate(z));
    return out;
}

std::vector<std::complex<double>> PolyMap::evaluate(const std::vector<std::complex<double>>& z) const {
    std::vector<std::complex<double>> out;
    for (const auto& c : comps_) out.push_back(c.evaluate(z));
    return out;
}

std::string PolyMap::to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < comps_.size(); ++i) {
        if (i) s += ", ";
        s += comps_[i].to_string();
    }
    return s + ")";
}

}  // namespace toridyn
