#include "toridyn/dyndeg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>

namespace toridyn {

namespace {

constexpr std::size_t kExactCharpolyLimit = 35;

std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur;
    auto rec = [&](auto&& self, std::size_t start) -> void {
        if (cur.size() == k) {
            out.push_back(cur);
            return;
        }
        for (std::size_t i = start; i < n; ++i) {
            cur.push_back(i);
            self(self, i + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

std::complex<long double> eval(const IntPoly& p, std::complex<long double> z) {
    std::complex<long double> r = 0;
    for (std::size_t k = p.coeffs().size(); k-- > 0;) r = r * z + static_cast<long double>(p.coeffs()[k].get_d());
    return r;
}

// Exact integer root +-k of the largest modulus, if the numeric radius is one.
std::optional<Integer> integral_radius(const IntPoly& p, double radius) {
    const double r = std::round(radius);
    if (std::abs(radius - r) > 1e-6 * std::max(1.0, radius) || r > 9e15) return std::nullopt;
    Integer k(r);
    if (p.evaluate(k) == 0 || p.evaluate(Integer(-k)) == 0) return k;
    return std::nullopt;
}

}  // namespace

double root_modulus_max(const IntPoly& p) {
    if (p.is_zero()) throw std::invalid_argument("root_modulus_max: zero polynomial");
    if (p.degree() == 0) return 0.0;
    // squarefree part keeps the roots simple so the eigenvalues are well conditioned
    IntPoly g = gcd(p, p.derivative());
    IntPoly s = g.degree() > 0 ? *p.exact_div(g) : p;
    const std::size_t k = static_cast<std::size_t>(s.degree());
    const double lead = s.leading().get_d();
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    for (std::size_t i = 1; i < k; ++i) comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    for (std::size_t i = 0; i < k; ++i)
        comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k - 1)) = -s.coeffs()[i].get_d() / lead;
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    IntPoly ds = s.derivative();
    double best = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        std::complex<long double> z(es.eigenvalues()[i].real(), es.eigenvalues()[i].imag());
        for (int it = 0; it < 8; ++it) {
            auto d = eval(ds, z);
            if (std::abs(d) == 0) break;
            auto step = eval(s, z) / d;
            z -= step;
            if (std::abs(step) <= 1e-19L * std::max<long double>(1, std::abs(z))) break;
        }
        best = std::max(best, static_cast<double>(std::abs(z)));
    }
    return best;
}

double spectral_radius(const IntMatrix& a) {
    require_square(a, "spectral_radius");
    if (a.rows() == 0) return 0.0;
    if (a.rows() <= kExactCharpolyLimit) return root_modulus_max(charpoly(a));
    const auto n = static_cast<Eigen::Index>(a.rows());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            m(i, j) = a(static_cast<std::size_t>(i), static_cast<std::size_t>(j)).get_d();
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
    double best = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) best = std::max(best, std::abs(es.eigenvalues()[i]));
    return best;
}

IntMatrix exterior_power(const IntMatrix& a, std::size_t i) {
    require_square(a, "exterior_power");
    const std::size_t n = a.rows();
    if (i > n) throw std::invalid_argument("exterior_power: degree exceeds dimension");
    auto idx = subsets(n, i);
    IntMatrix out(idx.size(), idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r)
        for (std::size_t c = 0; c < idx.size(); ++c) {
            IntMatrix minor(i, i);
            for (std::size_t x = 0; x < i; ++x)
                for (std::size_t y = 0; y < i; ++y) minor(x, y) = a(idx[r][x], idx[c][y]);
            out(r, c) = determinant(minor);
        }
    return out;
}

bool DegreeProfile::is_log_concave(double rel_tol) const {
    for (std::size_t i = 1; i + 1 < lambdas.size(); ++i) {
        const double lhs = lambdas[i - 1] * lambdas[i + 1];
        const double rhs = lambdas[i] * lambdas[i];
        if (lhs > rhs * (1 + rel_tol)) return false;
    }
    return true;
}

std::string DegreeProfile::format_lambda(std::size_t i) const {
    if (exact[i]) return exact[i]->get_str();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12f", lambdas[i]);
    return buf;
}

Hyperbolicity is_cohomologically_hyperbolic(const DegreeProfile& p) {
    const auto& l = p.lambdas;
    if (l.empty()) throw std::invalid_argument("empty degree profile");
    const double m = *std::max_element(l.begin(), l.end());
    std::vector<std::size_t> near;
    for (std::size_t i = 0; i < l.size(); ++i)
        if (l[i] >= m * (1 - 1e-9)) near.push_back(i);
    if (near.size() == 1) return {HyperbolicStatus::hyperbolic, near[0]};
    for (std::size_t a : near)
        for (std::size_t b : near) {
            if (a >= b) continue;
            const bool exact_tie = p.exact[a] && p.exact[b] && *p.exact[a] == *p.exact[b];
            const bool numeric_tie = std::abs(l[a] - l[b]) <= 1e-12 * m;
            if (!exact_tie && !numeric_tie) return {HyperbolicStatus::indeterminate, std::nullopt};
        }
    return {HyperbolicStatus::not_hyperbolic, std::nullopt};
}

DegreeProfile make_profile(std::vector<double> lambdas, std::vector<std::optional<Integer>> exact) {
    if (lambdas.empty() || exact.size() != lambdas.size())
        throw std::invalid_argument("make_profile: inconsistent lengths");
    DegreeProfile p;
    p.lambdas = std::move(lambdas);
    p.exact = std::move(exact);
    for (std::size_t i = 1; i < p.lambdas.size(); ++i) p.mus.push_back(p.lambdas[i] / p.lambdas[i - 1]);
    p.mus.push_back(0.0);
    p.hyperbolicity = is_cohomologically_hyperbolic(p);
    return p;
}

DegreeProfile monomial_degree_profile(const IntMatrix& a) {
    require_square(a, "monomial_degree_profile");
    require_nonsingular(a, "monomial_degree_profile");
    const std::size_t n = a.rows();
    std::vector<double> l(n + 1);
    std::vector<std::optional<Integer>> ex(n + 1);
    l[0] = 1.0;
    ex[0] = Integer(1);
    for (std::size_t i = 1; i < n; ++i) {
        IntMatrix w = exterior_power(a, i);
        if (w.rows() <= kExactCharpolyLimit) {
            IntPoly f = charpoly(w);
            l[i] = root_modulus_max(f);
            ex[i] = integral_radius(f, l[i]);
        } else {
            l[i] = spectral_radius(w);
        }
        if (ex[i]) l[i] = ex[i]->get_d();
    }
    Integer det = abs(determinant(a));
    l[n] = det.get_d();
    ex[n] = det;
    return make_profile(std::move(l), std::move(ex));
}

DegreeProfile regular_profile(std::size_t n, unsigned long d) {
    if (n < 1) throw std::invalid_argument("regular_profile: dimension must be positive");
    if (d < 2) throw DomainError("regular_profile: algebraic degree must be at least 2");
    std::vector<double> l;
    std::vector<std::optional<Integer>> ex;
    Integer v = 1;
    for (std::size_t i = 0; i <= n; ++i) {
        l.push_back(v.get_d());
        ex.emplace_back(v);
        v *= d;
    }
    return make_profile(std::move(l), std::move(ex));
}

DegreeProfile henon_profile(std::size_t n, unsigned long d, unsigned long d_minus, unsigned long p, unsigned long q) {
    if (d < 2 || d_minus < 2 || p < 1 || q < 1) throw DomainError("inconsistent Henon data");
    if (p + q != n) throw DomainError("inconsistent Henon data");
    Integer dq, dmp;
    mpz_ui_pow_ui(dq.get_mpz_t(), d, q);
    mpz_ui_pow_ui(dmp.get_mpz_t(), d_minus, p);
    if (dq != dmp) throw DomainError("inconsistent Henon data");
    std::vector<double> l(n + 1);
    std::vector<std::optional<Integer>> ex(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        Integer v;
        if (i <= q) mpz_ui_pow_ui(v.get_mpz_t(), d, i);
        else mpz_ui_pow_ui(v.get_mpz_t(), d_minus, n - i);
        ex[i] = v;
        l[i] = v.get_d();
    }
    return make_profile(std::move(l), std::move(ex));
}

std::string to_string(HyperbolicStatus s) {
    switch (s) {
        case HyperbolicStatus::hyperbolic: return "hyperbolic";
        case HyperbolicStatus::not_hyperbolic: return "not_hyperbolic";
        case HyperbolicStatus::indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

}  // namespace toridyn
