#include "doctest.h"

#include "toridyn/dyndeg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

using namespace toridyn;

namespace {

IntMatrix random_matrix(std::mt19937& rng, std::size_t n, long lo, long hi) {
    std::uniform_int_distribution<long> dist(lo, hi);
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = dist(rng);
    return m;
}

// Product of the i largest eigenvalue moduli, straight from Eigen.
std::vector<double> eigen_products(const IntMatrix& a) {
    const auto n = static_cast<Eigen::Index>(a.rows());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = a(i, j).get_d();
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
    std::vector<double> mods;
    for (Eigen::Index i = 0; i < n; ++i) mods.push_back(std::abs(es.eigenvalues()[i]));
    std::sort(mods.rbegin(), mods.rend());
    std::vector<double> out{1.0};
    for (double x : mods) out.push_back(out.back() * x);
    return out;
}

IntMatrix random_unimodular(std::mt19937& rng, std::size_t n) {
    IntMatrix u = IntMatrix::identity(n);
    std::uniform_int_distribution<long> dist(-2, 2);
    for (int s = 0; s < 6; ++s) {
        std::size_t i = rng() % n, j = rng() % n;
        if (i == j) continue;
        long q = dist(rng);
        for (std::size_t k = 0; k < n; ++k) u(i, k) += q * u(j, k);
    }
    return u;
}

IntMatrix integer_inverse(const IntMatrix& u) {
    RatMatrix r = inverse(to_rational(u));
    IntMatrix out(u.rows(), u.cols());
    for (std::size_t i = 0; i < u.rows(); ++i)
        for (std::size_t j = 0; j < u.cols(); ++j) out(i, j) = r(i, j).get_num();
    return out;
}

}  // namespace

TEST_CASE("monomial_degree_profile examples") {
    auto p = monomial_degree_profile(IntMatrix{{2, 0}, {0, 2}});
    CHECK(p.lambdas == std::vector<double>{1, 2, 4});
    CHECK(p.format_lambda(1) == "2");
    CHECK(p.hyperbolicity.status == HyperbolicStatus::hyperbolic);
    CHECK(*p.hyperbolicity.index == 2);

    auto c = monomial_degree_profile(IntMatrix{{2, 1}, {1, 1}});
    CHECK(c.lambdas[1] == doctest::Approx((3 + std::sqrt(5.0)) / 2).epsilon(1e-14));
    CHECK(c.format_lambda(0) == "1");
    CHECK(c.format_lambda(1) == "2.618033988750");
    CHECK(c.format_lambda(2) == "1");
    CHECK(*c.hyperbolicity.index == 1);

    auto i = monomial_degree_profile(IntMatrix::identity(2));
    CHECK(i.lambdas == std::vector<double>{1, 1, 1});
    CHECK(i.hyperbolicity.status == HyperbolicStatus::not_hyperbolic);
    CHECK_FALSE(i.hyperbolicity.index.has_value());

    CHECK_THROWS_AS(monomial_degree_profile(IntMatrix{{1, 2}, {2, 4}}), DomainError);
}

TEST_CASE("is_cohomologically_hyperbolic examples") {
    auto a = make_profile({1, 2, 4}, {Integer(1), Integer(2), Integer(4)});
    CHECK(*is_cohomologically_hyperbolic(a).index == 2);
    auto b = make_profile({1, 2.618033988749895, 1}, {Integer(1), std::nullopt, Integer(1)});
    CHECK(*is_cohomologically_hyperbolic(b).index == 1);
    auto c = make_profile({1, 1, 1}, {Integer(1), Integer(1), Integer(1)});
    CHECK(is_cohomologically_hyperbolic(c).status == HyperbolicStatus::not_hyperbolic);
    auto d = make_profile({1, 1 + 1e-10, 1}, {Integer(1), std::nullopt, Integer(1)});
    CHECK(is_cohomologically_hyperbolic(d).status == HyperbolicStatus::indeterminate);
}

TEST_CASE("regular_profile examples") {
    CHECK(regular_profile(2, 2).lambdas == std::vector<double>{1, 2, 4});
    CHECK(regular_profile(1, 3).lambdas == std::vector<double>{1, 3});
    auto p = regular_profile(3, 2);
    CHECK(p.lambdas == std::vector<double>{1, 2, 4, 8});
    CHECK(*p.hyperbolicity.index == 3);
    CHECK_THROWS_AS(regular_profile(2, 1), DomainError);
}

TEST_CASE("henon_profile examples") {
    auto p = henon_profile(2, 2, 2, 1, 1);
    CHECK(p.lambdas == std::vector<double>{1, 2, 1});
    CHECK(*p.hyperbolicity.index == 1);
    auto q = henon_profile(3, 4, 16, 1, 2);
    CHECK(q.lambdas == std::vector<double>{1, 4, 16, 1});
    CHECK(*q.hyperbolicity.index == 2);
    CHECK_THROWS_WITH_AS(henon_profile(2, 2, 3, 1, 1), "inconsistent Henon data", DomainError);
    CHECK_THROWS_AS(henon_profile(3, 2, 2, 1, 1), DomainError);
}

TEST_CASE("exterior powers") {
    IntMatrix a{{1, 2, 0}, {0, 1, 3}, {4, 0, 1}};
    CHECK(exterior_power(a, 1) == a);
    CHECK(exterior_power(a, 3) == IntMatrix{{determinant(a).get_si()}});
    CHECK(exterior_power(a, 0) == IntMatrix{{1}});
    // functoriality of the exterior power
    IntMatrix b{{0, 1, 1}, {1, 0, 2}, {1, 1, 0}};
    CHECK(exterior_power(a * b, 2) == exterior_power(a, 2) * exterior_power(b, 2));
}

TEST_CASE("property: profile matches sorted eigenvalue products and iterates") {
    std::mt19937 rng(19);
    int done = 0;
    while (done < 150) {
        std::size_t n = 1 + rng() % 4;
        IntMatrix a = random_matrix(rng, n, -5, 5);
        Integer det = determinant(a);
        if (det == 0) continue;
        ++done;
        auto p = monomial_degree_profile(a);
        auto oracle = eigen_products(a);
        for (std::size_t i = 0; i <= n; ++i) CHECK(p.lambdas[i] == doctest::Approx(oracle[i]).epsilon(1e-8));
        CHECK(*p.exact[n] == abs(det));
        CHECK(p.is_log_concave());
        for (std::size_t i = 0; i + 1 < p.mus.size(); ++i)
            if (i + 1 < p.mus.size() - 1) CHECK(p.mus[i + 1] <= p.mus[i] * (1 + 1e-9));
        for (unsigned l = 2; l <= 3; ++l) {
            auto pl = monomial_degree_profile(matrix_power(a, l));
            for (std::size_t i = 0; i <= n; ++i)
                CHECK(pl.lambdas[i] == doctest::Approx(std::pow(p.lambdas[i], l)).epsilon(1e-6));
        }
    }
}

TEST_CASE("property: unit-circle spectra are never hyperbolic") {
    std::mt19937 rng(23);
    const std::vector<IntMatrix> blocks{IntMatrix{{1}}, IntMatrix{{-1}}, IntMatrix{{0, -1}, {1, 0}},
                                        IntMatrix{{0, -1}, {1, -1}}, IntMatrix{{1, -1}, {1, 0}},
                                        IntMatrix{{1, 1}, {0, 1}}};
    for (int t = 0; t < 80; ++t) {
        IntMatrix a = blocks[rng() % blocks.size()];
        while (a.rows() < 4 && rng() % 2) a = block_diag(a, blocks[rng() % blocks.size()]);
        IntMatrix u = random_unimodular(rng, a.rows());
        IntMatrix b = u * a * integer_inverse(u);
        auto p = monomial_degree_profile(b);
        CHECK(p.hyperbolicity.status == HyperbolicStatus::not_hyperbolic);
        CHECK_FALSE(is_positive(b));
    }
}

TEST_CASE("property: Henon formulas agree at the middle index") {
    for (unsigned long d = 2; d <= 6; ++d)
        for (unsigned long n = 2; n <= 5; ++n)
            for (unsigned long q = 1; q < n; ++q) {
                const unsigned long p = n - q;
                // d_minus = d^(q/p) when that is an integer
                for (unsigned long dm = 2; dm <= 64; ++dm) {
                    Integer lhs, rhs;
                    mpz_ui_pow_ui(lhs.get_mpz_t(), d, q);
                    mpz_ui_pow_ui(rhs.get_mpz_t(), dm, p);
                    if (lhs != rhs) {
                        CHECK_THROWS_AS(henon_profile(n, d, dm, p, q), DomainError);
                        continue;
                    }
                    auto prof = henon_profile(n, d, dm, p, q);
                    CHECK(*prof.exact[q] == lhs);
                    CHECK(prof.is_log_concave());
                    CHECK(*prof.hyperbolicity.index == q);
                }
            }
}
