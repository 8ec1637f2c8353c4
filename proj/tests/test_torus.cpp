#include "doctest.h"

#include "toridyn/torus.hpp"

#include <random>

using namespace toridyn;

namespace {

TorsionPoint tp(std::initializer_list<std::pair<long, long>> fr) {
    std::vector<Rational> v;
    for (auto [a, b] : fr) v.emplace_back(a, b);
    for (auto& x : v) x.canonicalize();
    return TorsionPoint(v);
}

IntMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, long lo, long hi) {
    std::uniform_int_distribution<long> dist(lo, hi);
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = dist(rng);
    return m;
}

TorsionPoint random_point(std::mt19937& rng, std::size_t n, long max_order) {
    std::uniform_int_distribution<long> den(1, max_order);
    std::vector<Rational> v(n);
    for (auto& x : v) {
        long d = den(rng);
        x = Rational(static_cast<long>(rng() % d), d);
        x.canonicalize();
    }
    return TorsionPoint(v);
}

// All points with every exponent in (1/m)Z, for one fixed m.
std::vector<TorsionPoint> grid(std::size_t n, long m) {
    std::vector<TorsionPoint> out;
    std::vector<long> idx(n, 0);
    while (true) {
        std::vector<Rational> v(n);
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = Rational(idx[i], m);
            v[i].canonicalize();
        }
        out.emplace_back(v);
        std::size_t i = 0;
        while (i < n && ++idx[i] == m) idx[i++] = 0;
        if (i == n) break;
    }
    return out;
}

SubgroupCoset line(std::size_t n, const IntMatrix& rows, const TorsionPoint& eps) {
    return SubgroupCoset(eps, Lattice(n, rows));
}

}  // namespace

TEST_CASE("torsion point basics") {
    TorsionPoint x = tp({{3, 2}, {-1, 3}});
    CHECK(x[0] == Rational(1, 2));
    CHECK(x[1] == Rational(2, 3));
    CHECK(x.order() == 6);
    CHECK(x.to_string() == "(1/2, 2/3)");
    CHECK((x + x) == tp({{0, 1}, {1, 3}}));
}

TEST_CASE("membership examples") {
    CHECK(membership(tp({{1, 2}, {0, 1}}), SubgroupCoset::full(2)));
    SubgroupCoset uv(TorsionPoint::identity(2), Lattice(2, IntMatrix{{1, 1}}));
    CHECK(membership(tp({{1, 3}, {2, 3}}), uv));
    CHECK_FALSE(membership(tp({{1, 3}, {1, 3}}), uv));
    CHECK_THROWS_AS(membership(tp({{1, 2}}), uv), std::invalid_argument);
}

TEST_CASE("coset_image examples") {
    SubgroupCoset gm_1 = line(2, IntMatrix{{0, 1}}, TorsionPoint::identity(2));
    SubgroupCoset one_gm = line(2, IntMatrix{{1, 0}}, TorsionPoint::identity(2));
    CHECK(coset_image(gm_1, IntMatrix{{0, 1}, {1, 0}}) == one_gm);

    SubgroupCoset signed_line = line(2, IntMatrix{{0, 1}}, tp({{1, 2}, {0, 1}}));
    // (-1,1) * (G_m x {1}) is the same set as G_m x {1}
    CHECK(signed_line == gm_1);
    CHECK(coset_image(signed_line, IntMatrix{{2, 0}, {0, 2}}) == gm_1);

    IntMatrix cat{{2, 1}, {1, 1}};
    CHECK(coset_image(SubgroupCoset::full(2), cat) == SubgroupCoset::full(2));
    CHECK_THROWS_AS(coset_image(gm_1, IntMatrix{{1, 2}, {2, 4}}), DomainError);

    // a translate that survives squaring
    SubgroupCoset shifted = line(2, IntMatrix{{0, 1}}, tp({{0, 1}, {1, 4}}));
    SubgroupCoset img = coset_image(shifted, IntMatrix{{2, 0}, {0, 2}});
    CHECK(img == line(2, IntMatrix{{0, 1}}, tp({{0, 1}, {1, 2}})));
}

TEST_CASE("coset_preimage examples") {
    SubgroupCoset id = SubgroupCoset::point(TorsionPoint::identity(1));
    SubgroupCoset p = coset_preimage(id, IntMatrix{{2}});
    CHECK(p.lattice() == Lattice(1, IntMatrix{{2}}));
    CHECK(p.component_count() == 2);
    auto comps = components(p);
    REQUIRE(comps.size() == 2);
    CHECK(comps[0].epsilon() == tp({{0, 1}}));
    CHECK(comps[1].epsilon() == tp({{1, 2}}));

    CHECK(coset_preimage(SubgroupCoset::full(2), IntMatrix{{2, 1}, {1, 1}}) == SubgroupCoset::full(2));

    SubgroupCoset minus_one = SubgroupCoset::point(tp({{1, 2}}));
    auto roots = components(coset_preimage(minus_one, IntMatrix{{2}}));
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].epsilon() == tp({{1, 4}}));
    CHECK(roots[1].epsilon() == tp({{3, 4}}));
}

TEST_CASE("coset_intersect examples") {
    SubgroupCoset c = line(2, IntMatrix{{2, 0}}, tp({{0, 1}, {0, 1}}));
    auto a = coset_intersect(SubgroupCoset::full(2), c);
    auto b = components(c);
    CHECK(a == b);
    CHECK(a.size() == 2);

    SubgroupCoset gm_1 = line(2, IntMatrix{{0, 1}}, TorsionPoint::identity(2));
    SubgroupCoset one_gm = line(2, IntMatrix{{1, 0}}, TorsionPoint::identity(2));
    auto pt = coset_intersect(gm_1, one_gm);
    REQUIRE(pt.size() == 1);
    CHECK(pt[0].dim() == 0);
    CHECK(pt[0].epsilon() == TorsionPoint::identity(2));

    // (1/2, 0) * (G_m x {1}) meets {1} x G_m only at (1, 1): the shift is absorbed
    SubgroupCoset shifted = line(2, IntMatrix{{0, 1}}, tp({{1, 2}, {0, 1}}));
    CHECK(coset_intersect(shifted, one_gm).size() == 1);
    // a genuine conflict in the second slot: G_m x {-1} vs G_m x {1}
    SubgroupCoset neg = line(2, IntMatrix{{0, 1}}, tp({{0, 1}, {1, 2}}));
    CHECK(coset_intersect(neg, gm_1).empty());
}

TEST_CASE("stabilizer examples") {
    SubgroupCoset c = line(2, IntMatrix{{1, 1}}, tp({{1, 3}, {0, 1}}));
    CHECK(stabilizer(c) == line(2, IntMatrix{{1, 1}}, TorsionPoint::identity(2)));
    CHECK(stabilizer(SubgroupCoset::point(tp({{1, 5}, {2, 7}}))).lattice() == Lattice::full(2));
    SubgroupCoset gm_1 = line(2, IntMatrix{{0, 1}}, TorsionPoint::identity(2));
    CHECK(stabilizer(line(2, IntMatrix{{0, 1}}, tp({{1, 2}, {0, 1}}))) == gm_1);
}

TEST_CASE("quotient_map examples") {
    Lattice diag(2, IntMatrix{{1, -1}});
    IntMatrix q = quotient_map(diag);
    CHECK(q.rows() == 1);
    CHECK((q == IntMatrix{{1, -1}} || q == IntMatrix{{-1, 1}}));
    CHECK(quotient_map(Lattice::full(3)) == IntMatrix::identity(3));
    CHECK(quotient_map(Lattice(2, IntMatrix{{0, 1}})) == IntMatrix{{0, 1}});
    CHECK_THROWS_AS(quotient_map(Lattice(2, IntMatrix{{2, 0}})), DomainError);
}

TEST_CASE("fixed_points examples") {
    auto f = fixed_points(IntMatrix{{2}}, 2);
    CHECK(f.count == 3);
    REQUIRE(f.points.size() == 3);
    CHECK(f.points[0] == tp({{0, 1}}));
    CHECK(f.points[1] == tp({{1, 3}}));
    CHECK(f.points[2] == tp({{2, 3}}));

    auto g = fixed_points(IntMatrix{{2, 1}, {1, 1}}, 1);
    CHECK(g.count == 1);
    REQUIRE(g.points.size() == 1);
    CHECK(g.points[0] == TorsionPoint::identity(2));

    CHECK_THROWS_WITH_AS(fixed_points(IntMatrix::identity(2), 1), "non-isolated fixed locus", DomainError);
}

TEST_CASE("correspondence_compose examples") {
    auto g6 = correspondence_compose(SubgroupCoset::graph(IntMatrix{{2}}), SubgroupCoset::graph(IntMatrix{{3}}), 1);
    REQUIRE(g6.size() == 1);
    CHECK(g6[0].coset() == SubgroupCoset::graph(IntMatrix{{6}}));

    SubgroupCoset g2 = line(2, IntMatrix{{1, 1}, {0, 3}}, tp({{0, 1}, {1, 3}}));
    auto same = correspondence_compose(SubgroupCoset::graph(IntMatrix::identity(1)), g2, 1);
    CHECK(same == components(g2));

    SubgroupCoset constant = line(2, IntMatrix{{0, 1}}, TorsionPoint::identity(2));
    auto k = correspondence_compose(constant, SubgroupCoset::graph(IntMatrix{{2}}), 1);
    REQUIRE(k.size() == 1);
    CHECK(k[0].coset() == constant);
}

TEST_CASE("canonical epsilon is independent of the representative") {
    std::mt19937 rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 1 + rng() % 3, r = rng() % (n + 1);
        Lattice l(n, random_matrix(rng, r, n, -4, 4));
        TorsionPoint e = random_point(rng, n, 12);
        SubgroupCoset c(e, l);
        CHECK(membership(e, c));
        CHECK(membership(c.epsilon(), c));
        // shift by a point of H_Lambda
        SnfResult s = snf(l.rank() ? l.basis() : IntMatrix(0, n));
        std::vector<Rational> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (i < l.rank()) {
                long d = s.D(i, i).get_si();
                y[i] = Rational(static_cast<long>(rng() % d), d);
            } else {
                y[i] = Rational(static_cast<long>(rng() % 7), 7);
            }
            y[i].canonicalize();
        }
        std::vector<Rational> h(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) h[i] += Rational(s.V(i, j)) * y[j];
        TorsionPoint hp(h);
        CHECK(membership(hp, stabilizer(c)));
        CHECK(SubgroupCoset(e + hp, l) == c);
    }
}

TEST_CASE("property: image then preimage contains C") {
    std::mt19937 rng(17);
    int done = 0;
    while (done < 120) {
        std::size_t n = 1 + rng() % 3, r = rng() % (n + 1);
        IntMatrix a = random_matrix(rng, n, n, -3, 3);
        if (determinant(a) == 0) continue;
        ++done;
        SubgroupCoset c(random_point(rng, n, 12), Lattice(n, random_matrix(rng, r, n, -3, 3)));
        SubgroupCoset back = coset_preimage(coset_image(c, a), a);
        auto meet = coset_intersect_raw(c, back);
        REQUIRE(meet.has_value());
        CHECK(*meet == c);
        for (const auto& comp : components(c)) CHECK(membership(comp.epsilon(), back));
    }
}

TEST_CASE("property: components partition the coset") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t n = 1 + rng() % 2, r = 1 + rng() % n;
        SubgroupCoset c(random_point(rng, n, 6), Lattice(n, random_matrix(rng, r, n, -3, 3)));
        auto comps = components(c);
        CHECK(Integer(comps.size()) == c.component_count());
        for (const auto& p : grid(n, 12)) {
            int hits = 0;
            for (const auto& k : comps) hits += membership(p, k.coset());
            CHECK(hits == (membership(p, c) ? 1 : 0));
        }
    }
}

TEST_CASE("property: fixed point count matches brute force") {
    std::mt19937 rng(29);
    int done = 0;
    while (done < 40) {
        std::size_t n = 1 + rng() % 3;
        unsigned p = 1 + rng() % 2;
        IntMatrix a = random_matrix(rng, n, n, -2, 2);
        IntMatrix m = matrix_power(a, p) - IntMatrix::identity(n);
        Integer det = abs(determinant(m));
        if (det == 0 || det > 60) continue;
        if (n == 3 && det > 30) continue;
        ++done;
        auto fp = fixed_points(a, p);
        CHECK(fp.count == det);
        CHECK(Integer(fp.points.size()) == det);
        IntMatrix ap = matrix_power(a, p);
        std::vector<TorsionPoint> brute;
        for (const auto& x : grid(n, det.get_si()))
            if (x.apply(ap) == x) brute.push_back(x);
        std::sort(brute.begin(), brute.end());
        CHECK(brute == fp.points);
    }
}

TEST_CASE("property: stabilizer commutes with image") {
    std::mt19937 rng(31);
    int done = 0;
    while (done < 120) {
        std::size_t n = 1 + rng() % 3, r = rng() % (n + 1);
        IntMatrix a = random_matrix(rng, n, n, -3, 3);
        if (determinant(a) == 0) continue;
        ++done;
        SubgroupCoset c(random_point(rng, n, 12), Lattice(n, random_matrix(rng, r, n, -3, 3)));
        CHECK(stabilizer(coset_image(c, a)) == coset_image(stabilizer(c), a));
    }
}

TEST_CASE("property: quotient_map kernel is the subtorus") {
    std::mt19937 rng(37);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t n = 2, r = rng() % 3;
        Lattice t = saturate(Lattice(n, random_matrix(rng, r, n, -3, 3)));
        IntMatrix q = quotient_map(t);
        CHECK(rank(q) == q.rows());
        SubgroupCoset sub(TorsionPoint::identity(n), t);
        for (long m = 1; m <= 12; ++m)
            for (const auto& x : grid(n, m)) {
                bool in_kernel = x.apply(q) == TorsionPoint::identity(q.rows());
                CHECK(in_kernel == membership(x, sub));
            }
    }
}

TEST_CASE("property: composition of graphs is associative") {
    std::mt19937 rng(41);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t n = 1 + rng() % 2;
        IntMatrix a = random_matrix(rng, n, n, -3, 3);
        IntMatrix b = random_matrix(rng, n, n, -3, 3);
        IntMatrix c = random_matrix(rng, n, n, -3, 3);
        auto ga = SubgroupCoset::graph(a), gb = SubgroupCoset::graph(b), gc = SubgroupCoset::graph(c);
        auto ab = correspondence_compose(ga, gb, n);
        auto bc = correspondence_compose(gb, gc, n);
        REQUIRE(ab.size() == 1);
        REQUIRE(bc.size() == 1);
        CHECK(ab[0].coset() == SubgroupCoset::graph(b * a));
        auto left = correspondence_compose(ab[0].coset(), gc, n);
        auto right = correspondence_compose(ga, bc[0].coset(), n);
        CHECK(left == right);
    }
}
