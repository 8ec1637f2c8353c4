#pragma once

// Regular polynomial endomorphisms of A^N over Q: regularity certificates,
// escape radii at every place, Green function estimates and exact orbit
// decisions for points with cyclotomic coordinates.

#include "toridyn/cyclo.hpp"
#include "toridyn/poly.hpp"

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace toridyn {

struct TopPart {
    PolyMap top;    ///< f^+, homogeneous of degree d (components may be zero)
    PolyMap lower;  ///< f - f^+, degree <= d - 1
};

TopPart top_part(const PolyMap& f);

/// z_i^m = sum_j R[i][j] * f_j^+ with R[i][j] homogeneous of degree m - d.
struct RegularityCertificate {
    unsigned m = 0;
    std::vector<std::vector<Poly>> R;

    bool verify(const PolyMap& f) const;
};

/// Searches m = d .. N(d-1)+1; nullopt proves f is not regular.
std::optional<RegularityCertificate> regularity_certificate(const PolyMap& f);

struct BadPrime {
    Integer p;
    Rational log_A;  ///< A_v = p^{log_A}
    long log_B = 0;  ///< B_v = p^{log_B}
    std::optional<long> log_H;  ///< H_v = p^{log_H}; none when h = 0
};

struct EscapeData {
    std::vector<BadPrime> bad_primes;  ///< primes with A_v > 1, ascending
    double arch_radius = 1;            ///< ||z|| > R  =>  ||f(z)|| > ||z||
    double arch_B = 0;                 ///< max_i sum_j ||R_ij||_1
    double arch_H = 0;                 ///< max_i ||h_i||_1
    double arch_C = 0;                 ///< max_i ||f_i^+||_1
    Integer M = 1;                     ///< |M|_v <= 1/A_v for every finite v

    /// log_p A_v; zero for primes that are not bad.
    Rational log_A(const Integer& p) const;
};

EscapeData escape_data(const PolyMap& f, const RegularityCertificate& cert);

/// log_p of max_{w | p} |alpha|_w on Q(zeta_n), normalised by |p| = 1/p;
/// nullopt for alpha = 0.
std::optional<Rational> log_abs_p(const CycloNumber& alpha, const Integer& p);
/// Maximum over the coordinates.
std::optional<Rational> log_abs_p(const std::vector<CycloNumber>& z, const Integer& p);

/// Maximum modulus over all embeddings and coordinates.
RealApprox vector_house(const std::vector<CycloNumber>& z);

struct OrbitDecision {
    enum class Kind { preperiodic, escapes, budget_exceeded, found, orbit_closed, not_found };
    Kind kind = Kind::budget_exceeded;
    std::string place;       ///< prime as decimal, or "infinity", for escapes
    std::size_t tail = 0;    ///< preperiodic / orbit_closed
    std::size_t period = 0;  ///< preperiodic / orbit_closed
    std::size_t steps = 0;   ///< found: n with f^n(z) = x; escapes: iterate index
};

std::string to_string(OrbitDecision::Kind k);

/// Iteration cap: TORIDYN_BUDGET if set, else 10^5.
std::size_t iteration_budget();

/// Holds the certificate and escape data of one map for repeated queries.
class OrbitChecker {
public:
    explicit OrbitChecker(PolyMap f);

    const PolyMap& map() const { return f_; }
    const RegularityCertificate& certificate() const { return cert_; }
    const EscapeData& escape() const { return esc_; }

    OrbitDecision is_preperiodic(const std::vector<CycloNumber>& z) const;
    OrbitDecision backward_orbit_filter(const std::vector<Rational>& x, const std::vector<CycloNumber>& z) const;

    /// Place at which z is certified to escape past `floor` (log_p form per
    /// prime, archimedean radius), if any.
    std::optional<std::string> escape_place(const std::vector<CycloNumber>& z,
                                            const std::map<Integer, Rational>& extra_floor,
                                            double arch_floor) const;

private:
    PolyMap f_;
    RegularityCertificate cert_;
    EscapeData esc_;
};

OrbitDecision is_preperiodic(const PolyMap& f, const std::vector<CycloNumber>& z);
OrbitDecision backward_orbit_filter(const PolyMap& f, const std::vector<Rational>& x,
                                    const std::vector<CycloNumber>& z);

struct GreenEstimate {
    double value = 0;
    double error = 0;
    bool escaped = false;  ///< orbit left the escape ball
    std::size_t iterations = 0;
};

GreenEstimate green_estimate(const PolyMap& f, const std::vector<std::complex<double>>& z, unsigned n_iters);

struct SemiconjugacyResult {
    bool holds = false;
    bool strong = false;  ///< torus dimension equals N
};

/// f^l o phi == phi o phi_A as Laurent polynomial tuples in u_1..u_n.
SemiconjugacyResult verify_semiconjugacy(const PolyMap& f, unsigned l, const PolyMap& phi, const IntMatrix& a);

}  // namespace toridyn
