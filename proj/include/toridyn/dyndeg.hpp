#pragma once

// Dynamical-degree profiles for monomial maps, regular endomorphisms of A^N
// and Henon-type automorphisms, with a three-valued hyperbolicity test.

#include "toridyn/intlat.hpp"

#include <optional>
#include <string>
#include <vector>

namespace toridyn {

enum class HyperbolicStatus { hyperbolic, not_hyperbolic, indeterminate };

struct Hyperbolicity {
    HyperbolicStatus status = HyperbolicStatus::indeterminate;
    std::optional<std::size_t> index;  ///< set iff status == hyperbolic
};

struct DegreeProfile {
    std::vector<double> lambdas;                ///< lambda_0 .. lambda_d
    std::vector<std::optional<Integer>> exact;  ///< exact integer value where known
    std::vector<double> mus;                    ///< mu_1 .. mu_{d+1}, last is 0
    Hyperbolicity hyperbolicity;

    std::size_t dim() const { return lambdas.size() - 1; }
    bool is_log_concave(double rel_tol = 1e-9) const;
    /// Exact entries as integers, others with 12 digits after the point.
    std::string format_lambda(std::size_t i) const;
};

/// Builds mus and hyperbolicity from the lambdas.
DegreeProfile make_profile(std::vector<double> lambdas, std::vector<std::optional<Integer>> exact);

/// Three-valued hyperbolicity of an existing profile.
Hyperbolicity is_cohomologically_hyperbolic(const DegreeProfile& p);

/// i-th exterior power of A in the lexicographic basis of i-subsets.
IntMatrix exterior_power(const IntMatrix& a, std::size_t i);

/// Largest modulus among the roots of p (p nonzero).
double root_modulus_max(const IntPoly& p);

/// Spectral radius of an integer matrix; exact charpoly for small sizes.
double spectral_radius(const IntMatrix& a);

DegreeProfile monomial_degree_profile(const IntMatrix& a);
DegreeProfile regular_profile(std::size_t n, unsigned long d);
DegreeProfile henon_profile(std::size_t n, unsigned long d, unsigned long d_minus, unsigned long p, unsigned long q);

std::string to_string(HyperbolicStatus s);

}  // namespace toridyn
