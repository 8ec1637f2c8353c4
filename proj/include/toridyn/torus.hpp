#pragma once

// Algebraic subgroups, torsion points and torsion cosets of the split torus
// G_m^n. Torsion points are kept in exponent coordinates (Q/Z)^n, so the
// group law is addition and a monomial map phi_A acts as x -> A x.

#include "toridyn/intlat.hpp"

#include <string>
#include <vector>

namespace toridyn {

/// A point of G_m^n(C)_tors written as (e^{2 pi i a_1/b_1}, ...). Entries are
/// kept reduced into [0, 1).
class TorsionPoint {
public:
    TorsionPoint() = default;
    explicit TorsionPoint(std::vector<Rational> exponents);

    static TorsionPoint identity(std::size_t n) { return TorsionPoint(std::vector<Rational>(n)); }

    std::size_t ambient_dim() const { return exps_.size(); }
    const std::vector<Rational>& exponents() const { return exps_; }
    const Rational& operator[](std::size_t i) const { return exps_[i]; }

    /// Least common multiple of the denominators.
    Integer order() const;

    TorsionPoint operator+(const TorsionPoint& o) const;
    TorsionPoint operator-(const TorsionPoint& o) const;
    /// phi_A(x): exponent vector A x.
    TorsionPoint apply(const IntMatrix& a) const;

    bool operator==(const TorsionPoint& o) const { return exps_ == o.exps_; }
    bool operator!=(const TorsionPoint& o) const { return !(*this == o); }
    bool operator<(const TorsionPoint& o) const;

    std::string to_string() const;

private:
    std::vector<Rational> exps_;
};

/// epsilon * H_Lambda with Lambda not necessarily primitive. The stored
/// epsilon is canonical: the lexicographically least exponent vector among
/// coset points whose order divides that of a fixed Smith-form transversal
/// representative. Two cosets are equal iff their fields are.
class SubgroupCoset {
public:
    SubgroupCoset() = default;
    SubgroupCoset(const TorsionPoint& epsilon, Lattice lattice);

    /// The whole torus G_m^n.
    static SubgroupCoset full(std::size_t n);
    /// The single torsion point x.
    static SubgroupCoset point(const TorsionPoint& x);
    /// Graph {(u, phi_A(u))} in G_m^{cols + rows}.
    static SubgroupCoset graph(const IntMatrix& a);

    std::size_t ambient_dim() const { return lattice_.ambient_dim(); }
    const TorsionPoint& epsilon() const { return eps_; }
    const Lattice& lattice() const { return lattice_; }
    std::size_t dim() const { return ambient_dim() - lattice_.rank(); }
    /// [saturate(Lambda) : Lambda].
    Integer component_count() const;
    bool is_irreducible() const { return lattice_.is_primitive(); }

    bool operator==(const SubgroupCoset& o) const { return eps_ == o.eps_ && lattice_ == o.lattice_; }
    bool operator!=(const SubgroupCoset& o) const { return !(*this == o); }
    bool operator<(const SubgroupCoset& o) const;

private:
    TorsionPoint eps_;
    Lattice lattice_;
};

/// An irreducible torsion coset: SubgroupCoset whose lattice is primitive.
class TorsionCoset {
public:
    TorsionCoset() = default;
    TorsionCoset(const TorsionPoint& epsilon, const Lattice& lattice);
    explicit TorsionCoset(const SubgroupCoset& c);

    const SubgroupCoset& coset() const { return coset_; }
    const TorsionPoint& epsilon() const { return coset_.epsilon(); }
    const Lattice& lattice() const { return coset_.lattice(); }
    std::size_t ambient_dim() const { return coset_.ambient_dim(); }
    std::size_t dim() const { return coset_.dim(); }

    bool operator==(const TorsionCoset& o) const { return coset_ == o.coset_; }
    bool operator<(const TorsionCoset& o) const { return coset_ < o.coset_; }

private:
    SubgroupCoset coset_;
};

/// Explicit splitting of a reducible coset into its irreducible components.
std::vector<TorsionCoset> components(const SubgroupCoset& c);

bool membership(const TorsionPoint& x, const SubgroupCoset& c);

/// phi_A(C).
SubgroupCoset coset_image(const SubgroupCoset& c, const IntMatrix& a);
/// phi_A^{-1}(C).
SubgroupCoset coset_preimage(const SubgroupCoset& c, const IntMatrix& a);
/// C1 intersected with C2 as a list of torsion cosets; empty iff disjoint.
std::vector<TorsionCoset> coset_intersect(const SubgroupCoset& c1, const SubgroupCoset& c2);
/// Intersection as a single (possibly reducible) subgroup coset.
std::optional<SubgroupCoset> coset_intersect_raw(const SubgroupCoset& c1, const SubgroupCoset& c2);
/// Translation stabilizer H_Lambda.
SubgroupCoset stabilizer(const SubgroupCoset& c);

/// Monomial map G_m^n -> G_m^{rank} whose kernel is the subtorus H_T.
IntMatrix quotient_map(const Lattice& subtorus);

struct FixedPoints {
    Integer count;
    std::vector<TorsionPoint> points;  ///< sorted
};

/// Points with phi_{A^period}(x) = x; refuses non-isolated loci.
FixedPoints fixed_points(const IntMatrix& a, unsigned period);

/// Composition of correspondences Gamma1 in G_m^{a+b}, Gamma2 in G_m^{b+c}
/// through the common middle factor of dimension `middle_dim` = b.
std::vector<TorsionCoset> correspondence_compose(const SubgroupCoset& gamma1, const SubgroupCoset& gamma2,
                                                 std::size_t middle_dim);

}  // namespace toridyn
