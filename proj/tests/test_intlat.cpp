#include "doctest.h"

#include "toridyn/intlat.hpp"

#include <random>

using namespace toridyn;

namespace {

IntMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, long lo, long hi) {
    std::uniform_int_distribution<long> dist(lo, hi);
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = dist(rng);
    return m;
}

bool is_row_hnf(const IntMatrix& h) {
    long last_pivot = -1;
    bool seen_zero = false;
    for (std::size_t i = 0; i < h.rows(); ++i) {
        std::size_t p = 0;
        while (p < h.cols() && h(i, p) == 0) ++p;
        if (p == h.cols()) {
            seen_zero = true;
            continue;
        }
        if (seen_zero) return false;
        if (static_cast<long>(p) <= last_pivot) return false;
        if (h(i, p) <= 0) return false;
        for (std::size_t k = 0; k < i; ++k)
            if (h(k, p) < 0 || h(k, p) >= h(i, p)) return false;
        last_pivot = static_cast<long>(p);
    }
    return true;
}

// Cofactor expansion, independent of the Bareiss path.
Integer cofactor_det(const IntMatrix& m) {
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    if (n == 1) return m(0, 0);
    Integer total = 0;
    for (std::size_t j = 0; j < n; ++j) {
        IntMatrix minor(n - 1, n - 1);
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t k = 0, kk = 0; k < n; ++k) {
                if (k == j) continue;
                minor(i - 1, kk++) = m(i, k);
            }
        Integer term = m(0, j) * cofactor_det(minor);
        total += (j % 2 == 0) ? term : Integer(-term);
    }
    return total;
}

}  // namespace

TEST_CASE("hnf examples") {
    IntMatrix d{{2, 0}, {0, 3}};
    auto r = hnf(d);
    CHECK(r.H == d);
    CHECK(r.U == IntMatrix::identity(2));

    IntMatrix m{{1, 1}, {1, 0}};
    auto u = hnf(m);
    CHECK(u.U * m == u.H);
    CHECK(abs(determinant(u.H)) == 1);
    CHECK(u.H == IntMatrix::identity(2));

    IntMatrix z(2, 2);
    auto zr = hnf(z);
    CHECK(zr.H == z);
}

TEST_CASE("hnf property: unimodular transform and canonical shape") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t r = 1 + rng() % 4, c = 1 + rng() % 4;
        IntMatrix m = random_matrix(rng, r, c, -9, 9);
        auto res = hnf(m);
        CHECK(res.U * m == res.H);
        CHECK(abs(determinant(res.U)) == 1);
        CHECK(is_row_hnf(res.H));
        // canonical: the same lattice under a unimodular change of generators
        IntMatrix mixed = m;
        if (r >= 2) {
            for (std::size_t j = 0; j < c; ++j) mixed(0, j) += 3 * m(1, j);
            mixed.swap_rows(0, r - 1);
        }
        CHECK(hnf(mixed).H == res.H);
    }
}

TEST_CASE("snf examples") {
    IntMatrix d{{2, 0}, {0, 3}};
    auto s = snf(d);
    CHECK(s.D == IntMatrix{{1, 0}, {0, 6}});
    CHECK(s.U * d * s.V == s.D);

    auto si = snf(IntMatrix::identity(3));
    CHECK(si.D == IntMatrix::identity(3));

    IntMatrix m{{2, 1}, {1, 1}};
    auto sm = snf(m);
    CHECK(sm.D == IntMatrix::identity(2));
}

TEST_CASE("snf property: divisibility chain and unimodular transforms") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t r = 1 + rng() % 4, c = 1 + rng() % 4;
        IntMatrix m = random_matrix(rng, r, c, -12, 12);
        auto s = snf(m);
        CHECK(s.U * m * s.V == s.D);
        CHECK(abs(determinant(s.U)) == 1);
        CHECK(abs(determinant(s.V)) == 1);
        CHECK(s.V * s.V_inv == IntMatrix::identity(c));
        const std::size_t k = snf_rank(s.D);
        CHECK(k == rank(m));
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j)
                if (i != j) CHECK(s.D(i, j) == 0);
        for (std::size_t i = 0; i + 1 < k; ++i)
            CHECK(mpz_divisible_p(s.D(i + 1, i + 1).get_mpz_t(), s.D(i, i).get_mpz_t()));
        for (std::size_t i = 0; i < k; ++i) CHECK(s.D(i, i) > 0);
    }
}

TEST_CASE("saturate examples") {
    Lattice a(2, IntMatrix{{2, 0}});
    CHECK(saturate(a) == Lattice(2, IntMatrix{{1, 0}}));
    Lattice b(2, IntMatrix{{2, 2}});
    CHECK(saturate(b) == Lattice(2, IntMatrix{{1, 1}}));
    Lattice prim(3, IntMatrix{{1, 2, 3}, {0, 1, 1}});
    CHECK(saturate(prim) == prim);
    CHECK(prim.is_primitive());
    CHECK_FALSE(a.is_primitive());
}

TEST_CASE("saturate property: idempotent, extensive, same rank") {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 150; ++trial) {
        std::size_t n = 1 + rng() % 4, r = 1 + rng() % n;
        Lattice l(n, random_matrix(rng, r, n, -6, 6));
        Lattice s = saturate(l);
        CHECK(saturate(s) == s);
        CHECK(s.rank() == l.rank());
        for (std::size_t i = 0; i < l.rank(); ++i) CHECK(s.contains(l.basis().row(i)));
        // primitivity: any integer vector with a multiple in s lies in s
        std::uniform_int_distribution<long> dist(-4, 4);
        for (int probe = 0; probe < 10; ++probe) {
            std::vector<Integer> v(n);
            for (auto& x : v) x = dist(rng);
            std::vector<Integer> v3 = v;
            for (auto& x : v3) x *= 3;
            if (s.contains(v3)) CHECK(s.contains(v));
        }
    }
}

TEST_CASE("charpoly examples") {
    CHECK(charpoly(IntMatrix{{2, 1}, {1, 1}}) == IntPoly{1, -3, 1});
    CHECK(charpoly(IntMatrix::identity(2)) == IntPoly{1, -2, 1});
    CHECK(charpoly(IntMatrix{{0, -1}, {1, 0}}) == IntPoly{1, 0, 1});
}

TEST_CASE("charpoly agrees with det(xI - A) at sample points") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 1 + rng() % 5;
        IntMatrix a = random_matrix(rng, n, n, -5, 5);
        IntPoly p = charpoly(a);
        CHECK(p.degree() == static_cast<long>(n));
        CHECK(p.leading() == 1);
        for (long x0 = -3; x0 <= 3; ++x0) {
            IntMatrix xi = IntMatrix::identity(n);
            for (std::size_t i = 0; i < n; ++i) xi(i, i) = x0;
            CHECK(p.evaluate(Integer(x0)) == cofactor_det(xi - a));
        }
        CHECK(determinant(a) == cofactor_det(a));
    }
}

TEST_CASE("cyclotomic polynomials") {
    CHECK(cyclotomic_polynomial(1) == IntPoly{-1, 1});
    CHECK(cyclotomic_polynomial(4) == IntPoly{1, 0, 1});
    CHECK(cyclotomic_polynomial(12) == IntPoly{1, 0, -1, 0, 1});
    for (unsigned long k = 1; k <= 40; ++k)
        CHECK(cyclotomic_polynomial(k).degree() == static_cast<long>(euler_phi(k)));
}

TEST_CASE("cyclotomic_split examples") {
    auto a = cyclotomic_split(IntPoly{1, 0, 1});
    CHECK(a.cyclotomic == IntPoly{1, 0, 1});
    CHECK(a.rest == IntPoly{1});
    auto b = cyclotomic_split(IntPoly{1, -3, 1});
    CHECK(b.cyclotomic == IntPoly{1});
    CHECK(b.rest == IntPoly{1, -3, 1});
    auto c = cyclotomic_split(IntPoly{-1, 1} * IntPoly{-2, 1});
    CHECK(c.cyclotomic == IntPoly{-1, 1});
    CHECK(c.rest == IntPoly{-2, 1});
    CHECK_THROWS_AS(cyclotomic_split(IntPoly{}), std::invalid_argument);
}

TEST_CASE("cyclotomic_split property on random charpolys") {
    std::mt19937 rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 1 + rng() % 5;
        IntPoly p = charpoly(random_matrix(rng, n, n, -3, 3));
        auto s = cyclotomic_split(p);
        CHECK(s.cyclotomic * s.rest == p);
        if (p.coeff(0) != 0) CHECK(s.cyclotomic.coeff(0) != 0);
        // the rest shares no root with x^k - 1 for any relevant k
        for (unsigned long k = 1; k <= 2 * n * n + 2; ++k) {
            IntPoly xk = IntPoly::monomial(1, k) - IntPoly{1};
            CHECK(gcd(s.rest, xk).degree() == 0);
        }
    }
}

TEST_CASE("is_positive examples") {
    CHECK(is_positive(IntMatrix{{2, 1}, {1, 1}}));
    CHECK_FALSE(is_positive(IntMatrix::identity(2)));
    CHECK_FALSE(is_positive(IntMatrix{{2, 0}, {0, 0}}));
    CHECK_FALSE(is_positive(IntMatrix{{0, -1}, {1, 0}}));
}

TEST_CASE("decompose examples") {
    auto d1 = decompose(IntMatrix{{1, 0}, {0, 2}});
    CHECK(d1.P == IntMatrix::identity(2));
    CHECK(d1.A1 == IntMatrix{{1}});
    CHECK(d1.A2 == IntMatrix{{2}});

    IntMatrix cat{{2, 1}, {1, 1}};
    auto d2 = decompose(cat);
    CHECK(d2.A1.rows() == 0);
    CHECK(d2.A2 == cat);
    CHECK(d2.P == IntMatrix::identity(2));

    IntMatrix t{{1, 1}, {0, 2}};
    auto d3 = decompose(t);
    CHECK(d3.P == IntMatrix{{1, 1}, {0, 1}});
    CHECK(d3.A1 == IntMatrix{{1}});
    CHECK(d3.A2 == IntMatrix{{2}});
    CHECK(t * d3.P == d3.P * block_diag(d3.A1, d3.A2));

    CHECK_THROWS_AS(decompose(IntMatrix{{1, 2}, {2, 4}}), DomainError);
}

TEST_CASE("decompose property") {
    std::mt19937 rng(13);
    int done = 0;
    while (done < 100) {
        std::size_t n = 1 + rng() % 5;
        IntMatrix a = random_matrix(rng, n, n, -3, 3);
        if (determinant(a) == 0) continue;
        ++done;
        auto d = decompose(a);
        CHECK(determinant(d.P) != 0);
        CHECK(a * d.P == d.P * block_diag(d.A1, d.A2));
        CHECK(d.A1.rows() + d.A2.rows() == n);
        if (d.A2.rows() > 0) CHECK(is_positive(d.A2));
        if (d.A1.rows() > 0) CHECK(cyclotomic_split(charpoly(d.A1)).rest.is_constant());
    }
}

TEST_CASE("kernels") {
    IntMatrix m{{1, 1, 0}};
    IntMatrix k = right_kernel(m);
    CHECK(k.rows() == 2);
    CHECK(m * k.transpose() == IntMatrix(1, 2));
    IntMatrix l = left_kernel(IntMatrix{{1, 2}, {2, 4}});
    CHECK(l == IntMatrix{{2, -1}});
}
