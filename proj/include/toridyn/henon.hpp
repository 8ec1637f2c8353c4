#pragma once

// Polynomial automorphisms of Henon type: compositions of elementary maps
// (p(x) - a y, b x) on A^2 and user-supplied invertible pairs on A^N, with
// exact periodic-point scans over bounded cyclotomic candidates.

#include "toridyn/cyclo.hpp"
#include "toridyn/dyndeg.hpp"
#include "toridyn/poly.hpp"

#include <optional>
#include <string>
#include <vector>

namespace toridyn {

/// (x, y) -> (p(x) - a y, b x).
struct ElementaryFactor {
    Poly p;  ///< univariate, degree >= 2
    Rational a;
    Rational b;
};

class HenonMap {
public:
    /// f_1 o ... o f_m with the inverse assembled from the elementary inverses.
    static HenonMap compose_elementary(const std::vector<ElementaryFactor>& factors);

    /// General A^N pair; checks both compositions are the identity, p + q = N
    /// and d^q = d_minus^p.
    HenonMap(PolyMap forward, PolyMap backward, unsigned long p, unsigned long q);

    const PolyMap& forward() const { return forward_; }
    const PolyMap& backward() const { return backward_; }
    std::size_t dim() const { return forward_.dim(); }
    unsigned long d() const { return d_; }
    unsigned long d_minus() const { return d_minus_; }
    unsigned long p() const { return p_; }
    unsigned long q() const { return q_; }
    /// Empty unless built by compose_elementary.
    const std::vector<ElementaryFactor>& factors() const { return factors_; }

    DegreeProfile profile() const;

private:
    HenonMap() = default;
    PolyMap forward_, backward_;
    unsigned long d_ = 0, d_minus_ = 0, p_ = 0, q_ = 0;
    std::vector<ElementaryFactor> factors_;
};

/// Smallest n <= n_max with f^n(z) = z.
std::optional<std::size_t> is_periodic(const PolyMap& f, const std::vector<CycloNumber>& z, std::size_t n_max);
std::optional<std::size_t> is_periodic(const HenonMap& h, const std::vector<CycloNumber>& z, std::size_t n_max);

/// Every periodic point of a planar composition has max(|x|, |y|) <= R in
/// every complex embedding.
double filtration_radius(const HenonMap& h);

struct ScanOptions {
    unsigned long conductor_bound = 24;
    Rational house_bound = 2;
    unsigned long denom = 1;
    std::size_t n_max = 12;
    unsigned workers = 1;
    std::string checkpoint;  ///< resumable progress file; empty disables
    double max_cost = 1e9;   ///< refuse scans whose estimated work exceeds this
};

struct ScanHit {
    std::vector<CycloNumber> point;
    std::size_t period = 0;
    unsigned long conductor = 1;
    double house = 0;
};

struct ScanResult {
    std::vector<ScanHit> hits;
    double estimated_cost = 0;
    std::size_t candidates = 0;  ///< points examined in this run
    std::size_t resumed_classes = 0;
};

/// Integral elements of Z[zeta_n] with house <= bound, sorted by house then
/// coefficients.
std::vector<CycloNumber> integral_elements_with_house(unsigned long n, const Rational& bound);

/// Upper estimate of orbit evaluations a scan would perform.
double scan_cost_estimate(const HenonMap& h, const ScanOptions& opt);

ScanResult cyclo_periodic_scan(const HenonMap& h, const ScanOptions& opt);

/// True iff |det A| = 1 and A has spectral radius exactly claimed_d >= 2.
bool unit_obstruction(const IntMatrix& a, unsigned long claimed_d);

}  // namespace toridyn
