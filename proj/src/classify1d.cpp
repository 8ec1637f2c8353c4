#include "toridyn/classify1d.hpp"

#include <algorithm>

namespace toridyn {

namespace {

using CPoly = std::vector<CycloNumber>;

CPoly cmul(const CPoly& a, const CPoly& b) {
    if (a.empty() || b.empty()) return {};
    CPoly r(a.size() + b.size() - 1, CycloNumber(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

void cadd(CPoly& a, const CPoly& b) {
    if (a.size() < b.size()) a.resize(b.size(), CycloNumber(0));
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
}

void ctrim(CPoly& a) {
    while (!a.empty() && a.back().is_zero()) a.pop_back();
}

std::vector<Rational> dense(const Poly& f) {
    if (f.nvars() != 1) throw std::invalid_argument("expected a univariate polynomial");
    if (f.has_negative_exponents()) throw DomainError("expected a polynomial, not a Laurent polynomial");
    std::vector<Rational> c(static_cast<std::size_t>(std::max(f.degree(), 0L)) + 1);
    for (const auto& [e, v] : f.terms()) c[static_cast<std::size_t>(e[0])] = v;
    return c;
}

bool perfect_root(const Integer& x, unsigned long k, Integer& r) {
    if (x < 0) return false;
    return mpz_root(r.get_mpz_t(), x.get_mpz_t(), k) != 0;
}

bool canonical_less(const CycloNumber& a, const CycloNumber& b) {
    if (a.conductor() != b.conductor()) return a.conductor() < b.conductor();
    return a.coeffs() < b.coeffs();
}

bool matches(const std::vector<CycloNumber>& g, const std::vector<Rational>& target, int sign) {
    const std::size_t n = std::max(g.size(), target.size());
    for (std::size_t k = 0; k < n; ++k) {
        CycloNumber lhs = k < g.size() ? g[k] : CycloNumber(0);
        Rational rhs = k < target.size() ? target[k] * sign : Rational(0);
        if (lhs != CycloNumber(rhs)) return false;
    }
    return true;
}

}  // namespace

Poly chebyshev_poly(long d) {
    if (d < 1) throw DomainError("chebyshev_poly: degree must be at least 1");
    const Poly z = Poly::variable(1, 0);
    Poly prev = Poly::constant(1, 2), cur = z;
    for (long k = 1; k < d; ++k) {
        Poly next = z * cur - prev;
        prev = cur;
        cur = next;
    }
    const Poly u = Poly::monomial({1}, 1) + Poly::monomial({-1}, 1);
    if (cur.substitute({u}) != Poly::monomial({d}, 1) + Poly::monomial({-d}, 1))
        throw std::logic_error("Chebyshev identity failed");
    return cur;
}

bool quotient_check(long d) {
    const Poly t = chebyshev_poly(d);
    const Poly z = Poly::variable(1, 0);
    const Rational parity = d % 2 == 0 ? 1 : -1;
    if (t.substitute({-z}) != t * parity) return false;
    const Poly u = Poly::monomial({1}, 1) + Poly::monomial({-1}, 1);
    const Poly push = Poly::monomial({d}, 1) + Poly::monomial({-d}, 1);
    for (int s : {1, -1})
        if ((t * Rational(s)).substitute({u}) != push * Rational(s)) return false;
    return true;
}

std::string AffineWitness::to_string() const { return "L(z) = (" + alpha.to_string() + ")*z + (" + beta.to_string() + ")"; }

std::string to_string(MapClass c) {
    switch (c) {
    case MapClass::power: return "Power";
    case MapClass::chebyshev: return "Chebyshev";
    case MapClass::general: return "General";
    }
    return "?";
}

std::vector<CycloNumber> conjugate_coefficients(const Poly& f, const AffineWitness& l) {
    const auto a = dense(f);
    if (l.alpha.is_zero()) throw DomainError("affine witness with zero slope");
    const CycloNumber inv = l.alpha.inverse();
    const CPoly inner{-l.beta * inv, inv};
    // Horner in the inner polynomial
    CPoly acc;
    for (std::size_t k = a.size(); k-- > 0;) {
        acc = cmul(acc, inner);
        cadd(acc, CPoly{CycloNumber(a[k])});
    }
    for (auto& c : acc) c = (c * l.alpha).normalize();
    cadd(acc, CPoly{l.beta});
    for (auto& c : acc) c = c.normalize();
    ctrim(acc);
    return acc;
}

CycloNumber cyclotomic_sqrt(const Rational& r) {
    if (r == 0) return CycloNumber(0);
    // r = (num * den) / den^2; split num * den into square times squarefree
    Integer m = abs(r.get_num() * r.get_den());
    Integer sq = 1, core = 1;
    for (const auto& p : prime_factors(m)) {
        unsigned long e = 0;
        while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
            m /= p;
            ++e;
        }
        for (unsigned long i = 0; i < e / 2; ++i) sq *= p;
        if (e % 2) core *= p;
    }
    CycloNumber root = CycloNumber(Rational(sq) / Rational(r.get_den()));
    for (const auto& p : prime_factors(core)) {
        if (p == 2) {
            root *= CycloNumber::zeta(8) + CycloNumber::zeta(8, -1);
            continue;
        }
        const unsigned long pu = p.get_ui();
        // quadratic Gauss sum: g^2 = (-1)^((p-1)/2) p
        CycloNumber g(0);
        for (unsigned long k = 1; k < pu; ++k) {
            const bool residue = mpz_legendre(Integer(k).get_mpz_t(), p.get_mpz_t()) == 1;
            g += residue ? CycloNumber::zeta(pu, static_cast<long>(k)) : -CycloNumber::zeta(pu, static_cast<long>(k));
        }
        if (pu % 4 == 3) g = g * -CycloNumber::zeta(4);
        root *= g;
    }
    if (r < 0) root *= CycloNumber::zeta(4);
    root = root.normalize();
    if (root * root != CycloNumber(r)) throw std::logic_error("cyclotomic_sqrt failed verification");
    return root;
}

std::vector<CycloNumber> cyclotomic_roots(const Rational& c, unsigned long k) {
    if (k == 0) throw std::invalid_argument("cyclotomic_roots: k must be positive");
    if (c == 0) return {CycloNumber(0)};
    const Rational mag = abs(c);
    std::optional<CycloNumber> rho;
    Integer rn, rd;
    if (perfect_root(mag.get_num(), k, rn) && perfect_root(mag.get_den(), k, rd)) {
        rho = CycloNumber(Rational(rn) / Rational(rd));
    } else {
        // |c|^(1/k) = sqrt(|c|^(2/k)) when c^2 is a perfect k-th power
        const Rational sq = mag * mag;
        if (perfect_root(sq.get_num(), k, rn) && perfect_root(sq.get_den(), k, rd))
            rho = cyclotomic_sqrt(Rational(rn) / Rational(rd));
    }
    if (!rho) return {};
    const CycloNumber omega = c > 0 ? CycloNumber(1) : CycloNumber::zeta(2 * k);
    std::vector<CycloNumber> out;
    for (unsigned long j = 0; j < k; ++j) {
        CycloNumber r = (*rho * omega * CycloNumber::zeta(k, static_cast<long>(j))).normalize();
        if (r.pow(static_cast<long>(k)) != CycloNumber(c)) throw std::logic_error("cyclotomic_roots failed verification");
        out.push_back(r);
    }
    std::sort(out.begin(), out.end(), canonical_less);
    return out;
}

Classification classify(const Poly& f) {
    const auto a = dense(f);
    const long d = f.degree();
    if (d < 2) throw DomainError("classify: degree must be at least 2");
    const Rational lead = a.back();
    // translate so the z^(d-1) coefficient vanishes: h(w) = f(w + t) - t
    const Rational t = -a[static_cast<std::size_t>(d - 1)] / (Rational(d) * lead);
    const Poly shift = Poly::variable(1, 0) + Poly::constant(1, t);
    const auto h = dense(f.substitute({shift}) - Poly::constant(1, t));

    Classification out;
    auto witness_for = [&](const CycloNumber& alpha) {
        return AffineWitness{alpha, (-alpha * CycloNumber(t)).normalize()};
    };
    std::vector<Rational> power_target(static_cast<std::size_t>(d) + 1);
    power_target.back() = 1;

    bool power = true;
    for (long k = 0; k + 2 <= d; ++k)
        if (h[static_cast<std::size_t>(k)] != 0) power = false;
    if (power) {
        std::optional<AffineWitness> found[2];
        for (int s : {1, -1}) {
            // leading coefficient lead * alpha^(1-d) = s
            for (const auto& alpha : cyclotomic_roots(lead * s, static_cast<unsigned long>(d - 1))) {
                AffineWitness w = witness_for(alpha);
                if (matches(conjugate_coefficients(f, w), power_target, s)) {
                    found[s == 1 ? 0 : 1] = w;
                    break;
                }
            }
        }
        if (!found[0] && !found[1]) {
            out.note = "conjugate to z^d over an extension with no cyclotomic witness; General within cyclotomic fields";
            return out;
        }
        // prefer the sign whose witness lives in the smaller field
        int s = 1;
        if (!found[0] || (found[1] && found[1]->alpha.conductor() < found[0]->alpha.conductor())) s = -1;
        out.cls = MapClass::power;
        out.sign = s;
        out.witness = found[s == 1 ? 0 : 1];
        out.opposite = found[s == 1 ? 1 : 0];
        return out;
    }

    const Rational h2 = h[static_cast<std::size_t>(d - 2)];
    if (h2 != 0) {
        const auto tdense = dense(chebyshev_poly(d));
        // matching the w^d and w^(d-2) coefficients forces alpha^2 = r
        const Rational r = -lead * Rational(d) / h2;
        const CycloNumber root = cyclotomic_sqrt(r);
        std::vector<CycloNumber> cands{root, -root};
        std::sort(cands.begin(), cands.end(), canonical_less);
        std::optional<AffineWitness> found[2];
        for (int s : {1, -1})
            for (const auto& alpha : cands) {
                AffineWitness w = witness_for(alpha);
                if (matches(conjugate_coefficients(f, w), tdense, s)) {
                    found[s == 1 ? 0 : 1] = w;
                    break;
                }
            }
        if (found[0] || found[1]) {
            const int s = found[0] ? 1 : -1;
            out.cls = MapClass::chebyshev;
            out.sign = s;
            out.witness = found[s == 1 ? 0 : 1];
            out.opposite = found[s == 1 ? 1 : 0];
            return out;
        }
    }
    return out;
}

}  // namespace toridyn
