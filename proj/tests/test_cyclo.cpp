#include "doctest.h"

#include "toridyn/cyclo.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <random>

using namespace toridyn;

namespace {

CycloNumber random_integral(std::mt19937& rng, unsigned long n, long lo, long hi) {
    std::uniform_int_distribution<long> dist(lo, hi);
    std::vector<Rational> c(euler_phi(n));
    for (auto& x : c) x = dist(rng);
    return CycloNumber(n, c);
}

// Direct evaluation of sum c_j e^{2 pi i j k / n} in long double.
std::complex<long double> direct(const CycloNumber& a, long k) {
    std::complex<long double> s = 0;
    const long double n = a.conductor();
    for (std::size_t j = 0; j < a.coeffs().size(); ++j) {
        long double t = 2.0L * 3.14159265358979323846264338327950288L * static_cast<long double>(j) * k / n;
        s += static_cast<long double>(a.coeffs()[j].get_d()) * std::complex<long double>(std::cos(t), std::sin(t));
    }
    return s;
}

// Whether alpha is a sum of exactly b roots of order dividing `ob`: plain
// recursion, no hashing.
bool brute_sum(const CycloNumber& alpha, unsigned b, unsigned long ob, unsigned long start = 0) {
    if (b == 0) return alpha.is_zero();
    for (unsigned long j = start; j < ob; ++j)
        if (brute_sum(alpha - CycloNumber::zeta(ob, static_cast<long>(j)), b - 1, ob, j)) return true;
    return false;
}

}  // namespace

TEST_CASE("cyclotomic arithmetic basics") {
    CycloNumber z3 = CycloNumber::zeta(3);
    CHECK(z3 + z3 * z3 == CycloNumber(-1));
    CHECK(z3.pow(3) == CycloNumber(1));
    CHECK(CycloNumber::zeta(4).pow(2) == CycloNumber(-1));
    CHECK(CycloNumber::zeta(12, 4) == z3);
    CHECK(CycloNumber::zeta(6, 2) == z3);
    CHECK((CycloNumber::zeta(5) + CycloNumber::zeta(3)).conductor() == 15);
    CHECK(CycloNumber::zeta(3).coeffs().size() == 2);
    CHECK(CycloNumber::zeta(12).coeffs().size() == 4);
    CHECK_THROWS_AS(CycloNumber(0).inverse(), DomainError);
}

TEST_CASE("normalize finds the smallest field") {
    CycloNumber a = CycloNumber::zeta(3).lift(15);
    CHECK(a.conductor() == 15);
    CHECK(a.normalize().conductor() == 3);
    CHECK(a.normalize() == a);
    CycloNumber r = CycloNumber(Rational(5, 7)).lift(12);
    CHECK(r.normalize().conductor() == 1);
    // sqrt(5) = 1 + 2(zeta_5 + zeta_5^4) lives in Q(zeta_5)
    CycloNumber s5 = CycloNumber(1) + CycloNumber(2) * (CycloNumber::zeta(5) + CycloNumber::zeta(5, 4));
    CHECK(s5 * s5 == CycloNumber(5));
    CHECK(s5.lift(20).normalize().conductor() == 5);
    // zeta_6 = -zeta_3^2 lives in Q(zeta_3)
    CHECK(CycloNumber::zeta(6).normalize().conductor() == 3);
}

TEST_CASE("embed examples") {
    auto e = embed(CycloNumber::zeta(4), 1);
    CHECK(std::abs(e.value - std::complex<double>(0, 1)) < 1e-15);
    CHECK(e.error > 0);
    CHECK(e.error < 1e-13);
    auto f = embed(CycloNumber(1) + CycloNumber::zeta(3), 2);
    CHECK(std::abs(f.value - std::complex<double>(0.5, -std::sqrt(3.0) / 2)) <= f.error + 1e-15);
    auto g = embed(CycloNumber(2), 1);
    CHECK(g.value == std::complex<double>(2, 0));
    CHECK_THROWS_AS(embed(CycloNumber::zeta(4), 2), DomainError);
}

TEST_CASE("embed error bound covers a long double evaluation") {
    std::mt19937 rng(3);
    for (int t = 0; t < 200; ++t) {
        unsigned long n = 1 + rng() % 60;
        CycloNumber a = random_integral(rng, n, -50, 50);
        for (long k = 1; k <= static_cast<long>(n); ++k) {
            if (std::gcd(static_cast<unsigned long>(k), n) != 1) continue;
            auto e = embed(a, k);
            auto d = direct(a, k);
            CHECK(std::abs(std::complex<long double>(e.value.real(), e.value.imag()) - d) <= e.error);
        }
    }
}

TEST_CASE("house examples") {
    CHECK(house(CycloNumber::zeta(7, 3)).value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(house(CycloNumber(1) + CycloNumber::zeta(3)).value == doctest::Approx(1.0).epsilon(1e-14));
    auto h = house(CycloNumber(1) + CycloNumber::zeta(5));
    CHECK(std::abs(h.value - 2 * std::cos(M_PI / 5)) <= h.error + 1e-15);
    CHECK(h.value == doctest::Approx(1.6180).epsilon(1e-4));
}

TEST_CASE("is_scaled_integral examples") {
    CHECK(is_scaled_integral(CycloNumber::zeta(3) * CycloNumber(Rational(1, 2)), 2));
    CHECK_FALSE(is_scaled_integral(CycloNumber(Rational(1, 3)), 2));
    CHECK(is_scaled_integral((CycloNumber(1) + CycloNumber::zeta(5)) * CycloNumber(Rational(1, 6)), 6));
}

TEST_CASE("loxton_decompose examples") {
    auto a = loxton_decompose(CycloNumber(1) + CycloNumber::zeta(5), 4, 10);
    REQUIRE(a.has_value());
    REQUIRE(a->size() == 2);
    CHECK((*a)[0] == RootOfUnity(0, 1));
    CHECK((*a)[1] == RootOfUnity(1, 5));

    auto z = loxton_decompose(CycloNumber(0), 4, 6);
    REQUIRE(z.has_value());
    CHECK(z->empty());

    auto m = loxton_decompose(CycloNumber::zeta(3) + CycloNumber::zeta(3, 2), 4, 6);
    REQUIRE(m.has_value());
    REQUIRE(m->size() == 1);
    CHECK((*m)[0] == RootOfUnity(1, 2));
    // the brute-force oracle agrees: -1 is itself a root of order <= 6
    CHECK(brute_sum(CycloNumber(-1), 1, 6));

    CHECK_THROWS_AS(loxton_decompose(CycloNumber(Rational(1, 2)), 3, 6), DomainError);
    // 3 + 3 zeta_5 is not a sum of three roots of order dividing 10
    CHECK_FALSE(loxton_decompose(CycloNumber(3) * (CycloNumber(1) + CycloNumber::zeta(5)), 3, 10).has_value());
}

TEST_CASE("loxton_decompose property: exact sum and minimal length") {
    std::mt19937 rng(5);
    for (int t = 0; t < 40; ++t) {
        const unsigned long ob = std::vector<unsigned long>{4, 5, 6, 8, 10, 12}[rng() % 6];
        const unsigned k = 1 + rng() % 4;
        CycloNumber alpha(0);
        for (unsigned i = 0; i < k; ++i) alpha += CycloNumber::zeta(ob, static_cast<long>(rng() % ob));
        auto d = loxton_decompose(alpha, 5, ob);
        REQUIRE(d.has_value());
        CHECK(d->size() <= k);
        CycloNumber sum(0);
        for (const auto& xi : *d) sum += CycloNumber::root(xi);
        CHECK(sum == alpha);
        CHECK(std::is_sorted(d->begin(), d->end()));
        if (!d->empty()) CHECK_FALSE(brute_sum(alpha, static_cast<unsigned>(d->size() - 1), ob));
    }
}

TEST_CASE("check_point_set_conditions examples") {
    auto r1 = check_point_set_conditions({{CycloNumber(1)}, {CycloNumber::zeta(3)}}, 1, 1.0);
    CHECK(r1.dci_all);
    CHECK(r1.bh_all == Verdict::pass);
    CHECK(r1.ai == "not evaluated");

    auto r2 = check_point_set_conditions({{CycloNumber(2)}}, 1, 1.0);
    CHECK(r2.bh_all == Verdict::fail);

    auto r3 = check_point_set_conditions({{CycloNumber::zeta(5) * CycloNumber(Rational(1, 3))}}, 3, 1.0);
    CHECK(r3.dci_all);
    CHECK(r3.bh_all == Verdict::pass);
    CHECK(r3.points[0].max_house == doctest::Approx(1.0 / 3));

    auto r4 = check_point_set_conditions({{CycloNumber(Rational(1, 2))}}, 1, 1.0);
    CHECK_FALSE(r4.dci_all);
    CHECK_THROWS_AS(check_point_set_conditions({{CycloNumber(1)}, {CycloNumber(1), CycloNumber(1)}}, 1, 1.0),
                    std::invalid_argument);
}

TEST_CASE("property: arithmetic round trips") {
    std::mt19937 rng(7);
    for (int t = 0; t < 150; ++t) {
        unsigned long n1 = 1 + rng() % 60, n2 = 1 + rng() % 60;
        if (lcm_ul(n1, n2) > 60) n2 = n1;
        CycloNumber a = random_integral(rng, n1, -9, 9);
        CycloNumber b = random_integral(rng, n2, -9, 9);
        CHECK((a + b) - b == a);
        if (!b.is_zero()) CHECK((a * b) / b == a);
        CHECK(a * b == b * a);
    }
}

TEST_CASE("property: house is invariant under root-of-unity scaling") {
    std::mt19937 rng(11);
    for (int t = 0; t < 100; ++t) {
        unsigned long n = 1 + rng() % 30;
        CycloNumber a = random_integral(rng, n, -5, 5);
        unsigned long m = 1 + rng() % 12;
        CycloNumber xi = CycloNumber::zeta(m, static_cast<long>(rng() % m));
        auto h1 = house(a), h2 = house(xi * a);
        CHECK(std::abs(h1.value - h2.value) <= h1.error + h2.error);
    }
}

TEST_CASE("property: scaled integrality of sums") {
    std::mt19937 rng(13);
    for (int t = 0; t < 150; ++t) {
        unsigned long n = 1 + rng() % 20;
        long m1 = 1 + rng() % 6, m2 = 1 + rng() % 6;
        CycloNumber a = random_integral(rng, n, -9, 9) * CycloNumber(Rational(1, m1));
        CycloNumber b = random_integral(rng, n, -9, 9) * CycloNumber(Rational(1, m2));
        REQUIRE(is_scaled_integral(a, m1));
        REQUIRE(is_scaled_integral(b, m2));
        CHECK(is_scaled_integral(a + b, Integer(m1 * m2)));
    }
}
