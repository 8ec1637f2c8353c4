#include "toridyn/torus.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace toridyn {

namespace {

Rational frac(const Rational& q) {
    Integer f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    Rational r = q - Rational(f);
    r.canonicalize();
    return r;
}

Integer floor_div(const Integer& a, const Integer& b) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

Integer lcm(const Integer& a, const Integer& b) {
    Integer r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

std::vector<Rational> mat_vec(const IntMatrix& m, const std::vector<Rational>& v) {
    std::vector<Rational> out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0) out[i] += Rational(m(i, j)) * v[j];
    return out;
}

void require_dim(std::size_t a, std::size_t b, const char* what) {
    if (a != b) throw std::invalid_argument(std::string(what) + ": ambient dimension mismatch");
}

const Integer kEnumerationLimit = 1000000;

// Calls f(y) for every y with y_i in {0, 1/d_i, ..., (d_i - 1)/d_i}, i < k.
void for_each_transversal(const IntMatrix& D, std::size_t k, std::size_t n,
                          const std::function<void(const std::vector<Rational>&)>& f) {
    Integer total = 1;
    for (std::size_t i = 0; i < k; ++i) total *= D(i, i);
    if (total > kEnumerationLimit) throw DomainError("torsion enumeration exceeds 10^6 points");
    std::vector<Integer> idx(k, 0);
    std::vector<Rational> y(n);
    while (true) {
        for (std::size_t i = 0; i < k; ++i) {
            y[i] = Rational(idx[i], D(i, i));
            y[i].canonicalize();
        }
        f(y);
        std::size_t i = 0;
        while (i < k) {
            if (++idx[i] < D(i, i)) break;
            idx[i] = 0;
            ++i;
        }
        if (i == k) break;
    }
}

// Lexicographically least point of eps * H_Lambda among those whose order
// divides the order of the Smith transversal representative.
TorsionPoint canonical_epsilon(const TorsionPoint& eps, const Lattice& lat) {
    const std::size_t n = lat.ambient_dim();
    const std::size_t r = lat.rank();
    if (r == 0) return TorsionPoint::identity(n);
    const IntMatrix& B = lat.basis();
    SnfResult s = snf(B);
    std::vector<Rational> y = mat_vec(s.V_inv, eps.exponents());
    for (std::size_t i = 0; i < n; ++i) {
        if (i < r) {
            y[i] = frac(y[i] * Rational(s.D(i, i))) / Rational(s.D(i, i));
            y[i].canonicalize();
        } else {
            y[i] = 0;
        }
    }
    TorsionPoint rep(mat_vec(s.V, y));
    const Integer m = rep.order();

    // { z in Z^n : B z = 0 mod m } from the kernel of [B | -m I].
    IntMatrix aug(r, n + r);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = B(i, j);
        aug(i, n + i) = -m;
    }
    IntMatrix gens = stack_rows(right_kernel(aug).col_block(0, n), IntMatrix::identity(n));
    for (std::size_t i = 0; i < n; ++i) gens(gens.rows() - n + i, i) = m;
    IntMatrix H = Lattice(n, gens).basis();  // full rank, upper triangular

    std::vector<Integer> t(n);
    for (std::size_t i = 0; i < n; ++i) {
        Rational v = rep[i] * Rational(m);
        t[i] = v.get_num();
    }
    for (std::size_t i = 0; i < n; ++i) {
        Integer q = floor_div(t[i], H(i, i));
        if (q == 0) continue;
        for (std::size_t j = i; j < n; ++j) t[j] -= q * H(i, j);
    }
    std::vector<Rational> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = Rational(t[i], m);
    return TorsionPoint(out);
}

// Some x with B x = c (mod Z^r), or nullopt when none exists.
std::optional<std::vector<Rational>> solve_mod_one(const IntMatrix& B, const std::vector<Rational>& c) {
    const std::size_t n = B.cols();
    SnfResult s = snf(B);
    const std::size_t k = snf_rank(s.D);
    std::vector<Rational> uc = mat_vec(s.U, c);
    std::vector<Rational> y(n);
    for (std::size_t i = 0; i < uc.size(); ++i) {
        if (i < k) {
            y[i] = uc[i] / Rational(s.D(i, i));
        } else if (frac(uc[i]) != 0) {
            return std::nullopt;
        }
    }
    return mat_vec(s.V, y);
}

}  // namespace

// ---------------------------------------------------------------- TorsionPoint

TorsionPoint::TorsionPoint(std::vector<Rational> exponents) : exps_(std::move(exponents)) {
    for (auto& e : exps_) e = frac(e);
}

Integer TorsionPoint::order() const {
    Integer o = 1;
    for (const auto& e : exps_) o = lcm(o, e.get_den());
    return o;
}

TorsionPoint TorsionPoint::operator+(const TorsionPoint& o) const {
    require_dim(exps_.size(), o.exps_.size(), "TorsionPoint +");
    std::vector<Rational> v(exps_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = exps_[i] + o.exps_[i];
    return TorsionPoint(std::move(v));
}

TorsionPoint TorsionPoint::operator-(const TorsionPoint& o) const {
    require_dim(exps_.size(), o.exps_.size(), "TorsionPoint -");
    std::vector<Rational> v(exps_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = exps_[i] - o.exps_[i];
    return TorsionPoint(std::move(v));
}

TorsionPoint TorsionPoint::apply(const IntMatrix& a) const {
    require_dim(a.cols(), exps_.size(), "TorsionPoint::apply");
    return TorsionPoint(mat_vec(a, exps_));
}

bool TorsionPoint::operator<(const TorsionPoint& o) const {
    return std::lexicographical_compare(exps_.begin(), exps_.end(), o.exps_.begin(), o.exps_.end());
}

std::string TorsionPoint::to_string() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < exps_.size(); ++i) {
        if (i) os << ", ";
        os << exps_[i].get_num() << '/' << exps_[i].get_den();
    }
    os << ')';
    return os.str();
}

// ---------------------------------------------------------------- cosets

SubgroupCoset::SubgroupCoset(const TorsionPoint& epsilon, Lattice lattice) : lattice_(std::move(lattice)) {
    require_dim(epsilon.ambient_dim(), lattice_.ambient_dim(), "SubgroupCoset");
    eps_ = canonical_epsilon(epsilon, lattice_);
}

SubgroupCoset SubgroupCoset::full(std::size_t n) { return SubgroupCoset(TorsionPoint::identity(n), Lattice::zero(n)); }

SubgroupCoset SubgroupCoset::point(const TorsionPoint& x) {
    return SubgroupCoset(x, Lattice::full(x.ambient_dim()));
}

SubgroupCoset SubgroupCoset::graph(const IntMatrix& a) {
    const std::size_t n = a.cols(), m = a.rows();
    IntMatrix g(m, n + m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) g(i, j) = a(i, j);
        g(i, n + i) = -1;
    }
    return SubgroupCoset(TorsionPoint::identity(n + m), Lattice(n + m, g));
}

Integer SubgroupCoset::component_count() const {
    if (lattice_.rank() == 0) return 1;
    SnfResult s = snf(lattice_.basis());
    Integer c = 1;
    for (std::size_t i = 0; i < lattice_.rank(); ++i) c *= s.D(i, i);
    return c;
}

bool SubgroupCoset::operator<(const SubgroupCoset& o) const {
    if (ambient_dim() != o.ambient_dim()) return ambient_dim() < o.ambient_dim();
    if (eps_ != o.eps_) return eps_ < o.eps_;
    const IntMatrix &a = lattice_.basis(), &b = o.lattice_.basis();
    if (a.rows() != b.rows()) return a.rows() < b.rows();
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (a(i, j) != b(i, j)) return a(i, j) < b(i, j);
    return false;
}

TorsionCoset::TorsionCoset(const TorsionPoint& epsilon, const Lattice& lattice)
    : TorsionCoset(SubgroupCoset(epsilon, lattice)) {}

TorsionCoset::TorsionCoset(const SubgroupCoset& c) : coset_(c) {
    if (!c.is_irreducible()) throw DomainError("TorsionCoset requires a primitive lattice");
}

std::vector<TorsionCoset> components(const SubgroupCoset& c) {
    const std::size_t n = c.ambient_dim();
    const std::size_t r = c.lattice().rank();
    if (r == 0) return {TorsionCoset(c)};
    SnfResult s = snf(c.lattice().basis());
    Lattice sat(n, s.V_inv.row_block(0, r));
    std::vector<TorsionCoset> out;
    for_each_transversal(s.D, r, n, [&](const std::vector<Rational>& y) {
        out.emplace_back(c.epsilon() + TorsionPoint(mat_vec(s.V, y)), sat);
    });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool membership(const TorsionPoint& x, const SubgroupCoset& c) {
    require_dim(x.ambient_dim(), c.ambient_dim(), "membership");
    TorsionPoint d = x - c.epsilon();
    const IntMatrix& b = c.lattice().basis();
    for (std::size_t i = 0; i < b.rows(); ++i) {
        Rational s = 0;
        for (std::size_t j = 0; j < b.cols(); ++j) s += Rational(b(i, j)) * d[j];
        if (frac(s) != 0) return false;
    }
    return true;
}

SubgroupCoset coset_image(const SubgroupCoset& c, const IntMatrix& a) {
    require_square(a, "coset_image");
    require_dim(a.rows(), c.ambient_dim(), "coset_image");
    require_nonsingular(a, "coset_image");
    const std::size_t n = a.rows();
    // Lambda' = { b : b A in Lambda }: y in the left kernel of [A; L].
    IntMatrix k = left_kernel(stack_rows(a, c.lattice().basis()));
    Lattice image_lat = k.rows() == 0 ? Lattice::zero(n) : Lattice(n, k.col_block(0, n));
    return SubgroupCoset(c.epsilon().apply(a), image_lat);
}

SubgroupCoset coset_preimage(const SubgroupCoset& c, const IntMatrix& a) {
    require_square(a, "coset_preimage");
    require_dim(a.rows(), c.ambient_dim(), "coset_preimage");
    require_nonsingular(a, "coset_preimage");
    const std::size_t n = a.rows();
    RatMatrix ai = inverse(to_rational(a));
    std::vector<Rational> e(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) e[i] += ai(i, j) * c.epsilon()[j];
    Lattice lat = c.lattice().rank() == 0 ? Lattice::zero(n) : Lattice(n, c.lattice().basis() * a);
    return SubgroupCoset(TorsionPoint(e), lat);
}

std::optional<SubgroupCoset> coset_intersect_raw(const SubgroupCoset& c1, const SubgroupCoset& c2) {
    require_dim(c1.ambient_dim(), c2.ambient_dim(), "coset_intersect");
    const std::size_t n = c1.ambient_dim();
    const IntMatrix &b1 = c1.lattice().basis(), &b2 = c2.lattice().basis();
    IntMatrix b = stack_rows(b1, b2);
    if (b.rows() == 0) return SubgroupCoset::full(n);
    std::vector<Rational> rhs = mat_vec(b1, c1.epsilon().exponents());
    std::vector<Rational> rhs2 = mat_vec(b2, c2.epsilon().exponents());
    rhs.insert(rhs.end(), rhs2.begin(), rhs2.end());
    auto x = solve_mod_one(b, rhs);
    if (!x) return std::nullopt;
    return SubgroupCoset(TorsionPoint(*x), c1.lattice() + c2.lattice());
}

std::vector<TorsionCoset> coset_intersect(const SubgroupCoset& c1, const SubgroupCoset& c2) {
    auto raw = coset_intersect_raw(c1, c2);
    if (!raw) return {};
    return components(*raw);
}

SubgroupCoset stabilizer(const SubgroupCoset& c) {
    return SubgroupCoset(TorsionPoint::identity(c.ambient_dim()), c.lattice());
}

IntMatrix quotient_map(const Lattice& subtorus) {
    if (!subtorus.is_primitive()) throw DomainError("quotient_map: subtorus lattice is not primitive");
    return subtorus.basis();
}

FixedPoints fixed_points(const IntMatrix& a, unsigned period) {
    require_square(a, "fixed_points");
    if (period == 0) throw std::invalid_argument("fixed_points: period must be positive");
    const std::size_t n = a.rows();
    IntMatrix m = matrix_power(a, period) - IntMatrix::identity(n);
    Integer det = determinant(m);
    if (det == 0) throw DomainError("non-isolated fixed locus");
    SnfResult s = snf(m);
    FixedPoints out;
    out.count = abs(det);
    for_each_transversal(s.D, n, n, [&](const std::vector<Rational>& y) {
        out.points.emplace_back(mat_vec(s.V, y));
    });
    std::sort(out.points.begin(), out.points.end());
    return out;
}

std::vector<TorsionCoset> correspondence_compose(const SubgroupCoset& gamma1, const SubgroupCoset& gamma2,
                                                 std::size_t middle_dim) {
    const std::size_t b = middle_dim;
    if (gamma1.ambient_dim() < b || gamma2.ambient_dim() < b)
        throw std::invalid_argument("correspondence_compose: middle dimension exceeds operand dimension");
    const std::size_t a = gamma1.ambient_dim() - b;
    const std::size_t c = gamma2.ambient_dim() - b;
    const std::size_t n = a + b + c;

    // Gamma1 x G_m^c and G_m^a x Gamma2 inside G_m^{a+b+c}.
    const IntMatrix& l1 = gamma1.lattice().basis();
    const IntMatrix& l2 = gamma2.lattice().basis();
    IntMatrix p1(l1.rows(), n), p2(l2.rows(), n);
    for (std::size_t i = 0; i < l1.rows(); ++i)
        for (std::size_t j = 0; j < a + b; ++j) p1(i, j) = l1(i, j);
    for (std::size_t i = 0; i < l2.rows(); ++i)
        for (std::size_t j = 0; j < b + c; ++j) p2(i, a + j) = l2(i, j);
    std::vector<Rational> e1(n), e2(n);
    for (std::size_t j = 0; j < a + b; ++j) e1[j] = gamma1.epsilon()[j];
    for (std::size_t j = 0; j < b + c; ++j) e2[a + j] = gamma2.epsilon()[j];
    auto meet = coset_intersect_raw(SubgroupCoset(TorsionPoint(e1), Lattice(n, p1)),
                                    SubgroupCoset(TorsionPoint(e2), Lattice(n, p2)));
    if (!meet) return {};

    // Projection to the outer factors: characters of the meet's lattice
    // that vanish on the middle block.
    const IntMatrix& bs = meet->lattice().basis();
    Lattice proj = Lattice::zero(a + c);
    if (bs.rows() > 0) {
        IntMatrix mid = bs.col_block(a, a + b);
        IntMatrix k = left_kernel(mid);
        if (k.rows() > 0) {
            IntMatrix kb = k * bs;
            IntMatrix outer(kb.rows(), a + c);
            for (std::size_t i = 0; i < kb.rows(); ++i) {
                for (std::size_t j = 0; j < a; ++j) outer(i, j) = kb(i, j);
                for (std::size_t j = 0; j < c; ++j) outer(i, a + j) = kb(i, a + b + j);
            }
            proj = Lattice(a + c, outer);
        }
    }
    std::vector<Rational> ep(a + c);
    for (std::size_t j = 0; j < a; ++j) ep[j] = meet->epsilon()[j];
    for (std::size_t j = 0; j < c; ++j) ep[a + j] = meet->epsilon()[a + b + j];
    return components(SubgroupCoset(TorsionPoint(ep), proj));
}

}  // namespace toridyn
