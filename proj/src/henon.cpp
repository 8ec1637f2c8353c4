#include "toridyn/henon.hpp"

#include "toridyn/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <thread>

namespace toridyn {

namespace {

PolyMap identity_map(std::size_t n) {
    std::vector<Poly> id;
    for (std::size_t i = 0; i < n; ++i) id.push_back(Poly::variable(n, i));
    return PolyMap(n, id);
}

Integer ipow(unsigned long base, unsigned long e) {
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, e);
    return r;
}

long moebius(unsigned long n) {
    long mu = 1;
    for (unsigned long p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        mu = -mu;
    }
    return n > 1 ? -mu : mu;
}

// Tr_{Q(zeta_n)/Q}(zeta_n^k) as a Ramanujan sum.
long trace_of_root(unsigned long n, long k) {
    const unsigned long g = std::gcd(n, static_cast<unsigned long>(std::labs(k)));
    const unsigned long m = n / g;
    return moebius(m) * static_cast<long>(euler_phi(n) / euler_phi(m));
}

double log_discriminant(unsigned long n) {
    const double phi = static_cast<double>(euler_phi(n));
    double v = phi * std::log(static_cast<double>(n));
    for (const auto& p : prime_factors(Integer(n))) {
        const double pd = p.get_d();
        v -= phi / (pd - 1) * std::log(pd);
    }
    return v;
}

bool coeff_less(const std::vector<CycloNumber>& a, const std::vector<CycloNumber>& b) {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i].conductor() != b[i].conductor()) return a[i].conductor() < b[i].conductor();
        const auto& ca = a[i].coeffs();
        const auto& cb = b[i].coeffs();
        for (std::size_t k = 0; k < ca.size(); ++k)
            if (ca[k] != cb[k]) return ca[k] < cb[k];
    }
    return a.size() < b.size();
}

bool hit_less(const ScanHit& a, const ScanHit& b) {
    if (a.conductor != b.conductor) return a.conductor < b.conductor;
    if (a.house != b.house) return a.house < b.house;
    return coeff_less(a.point, b.point);
}

double point_house(const std::vector<CycloNumber>& z) {
    double h = 0;
    for (const auto& x : z) h = std::max(h, house(x).value);
    return h;
}

// Period of z if at most n_max; stops as soon as an iterate is certified to
// leave the box of radius r in some embedding.
std::optional<std::size_t> bounded_period(const PolyMap& f, const std::vector<CycloNumber>& z, std::size_t n_max,
                                          double r) {
    std::vector<CycloNumber> w = z;
    for (std::size_t k = 1; k <= n_max; ++k) {
        w = f.evaluate(w);
        if (w == z) return k;
        if (std::isfinite(r))
            for (const auto& x : w) {
                RealApprox hx = house(x);
                if (hx.value - hx.error > r) return std::nullopt;
            }
    }
    return std::nullopt;
}

Json options_json(const HenonMap& h, const ScanOptions& opt) {
    return {{"map", to_json(h.forward())},
            {"conductor_bound", opt.conductor_bound},
            {"house_bound", to_json(opt.house_bound)},
            {"denom", opt.denom},
            {"n_max", opt.n_max}};
}

void write_checkpoint(const std::string& path, const Json& options, unsigned long last,
                      const std::vector<ScanHit>& hits) {
    Json hj = Json::array();
    for (const auto& hit : hits)
        hj.push_back({{"point", to_json(hit.point)}, {"period", hit.period}, {"conductor", hit.conductor}});
    Json cp = {{"schema", kSchema},
               {"kind", "henon-scan-checkpoint"},
               {"options", options},
               {"last_completed_conductor", last},
               {"hits", hj}};
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw std::runtime_error("cannot write checkpoint " + tmp);
        out << cp.dump() << "\n";
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace

HenonMap HenonMap::compose_elementary(const std::vector<ElementaryFactor>& factors) {
    if (factors.empty()) throw DomainError("compose_elementary: no factors");
    const Poly x = Poly::variable(2, 0), y = Poly::variable(2, 1);
    std::vector<PolyMap> fwd, inv;
    unsigned long d = 1;
    std::vector<ElementaryFactor> canon = factors;
    for (auto& f : canon) {
        f.a.canonicalize();
        f.b.canonicalize();
    }
    for (const auto& f : canon) {
        if (f.p.nvars() != 1) throw DomainError("compose_elementary: p must be univariate");
        if (f.p.degree() < 2) throw DomainError("compose_elementary: deg p must be at least 2");
        if (f.a == 0 || f.b == 0) throw DomainError("compose_elementary: a and b must be nonzero");
        d *= static_cast<unsigned long>(f.p.degree());
        fwd.emplace_back(2, std::vector<Poly>{f.p.substitute({x}) - y * f.a, x * f.b});
        const Poly u = y * (Rational(1) / f.b);
        inv.emplace_back(2, std::vector<Poly>{u, (f.p.substitute({u}) - x) * (Rational(1) / f.a)});
    }
    HenonMap h;
    h.forward_ = fwd.back();
    for (std::size_t i = fwd.size() - 1; i-- > 0;) h.forward_ = fwd[i].compose(h.forward_);
    h.backward_ = inv.front();
    for (std::size_t i = 1; i < inv.size(); ++i) h.backward_ = inv[i].compose(h.backward_);
    const PolyMap id = identity_map(2);
    if (!(h.forward_.compose(h.backward_) == id) || !(h.backward_.compose(h.forward_) == id))
        throw std::logic_error("elementary inverse failed verification");
    if (h.forward_.degree() != static_cast<long>(d)) throw std::logic_error("composition degree mismatch");
    h.d_ = h.d_minus_ = d;
    h.p_ = h.q_ = 1;
    h.factors_ = canon;
    return h;
}

HenonMap::HenonMap(PolyMap forward, PolyMap backward, unsigned long p, unsigned long q)
    : forward_(std::move(forward)), backward_(std::move(backward)), p_(p), q_(q) {
    const std::size_t n = forward_.dim();
    if (n < 2 || forward_.nvars() != n || backward_.dim() != n || backward_.nvars() != n)
        throw std::invalid_argument("HenonMap: forward and backward must be endomorphisms of the same A^N, N >= 2");
    for (const auto* m : {&forward_, &backward_})
        for (const auto& c : m->components())
            if (c.has_negative_exponents()) throw DomainError("HenonMap: Laurent components");
    const PolyMap id = identity_map(n);
    if (!(forward_.compose(backward_) == id) || !(backward_.compose(forward_) == id))
        throw DomainError("HenonMap: maps are not mutually inverse");
    if (forward_.degree() < 2 || backward_.degree() < 2) throw DomainError("HenonMap: degrees must be at least 2");
    d_ = static_cast<unsigned long>(forward_.degree());
    d_minus_ = static_cast<unsigned long>(backward_.degree());
    if (p_ < 1 || q_ < 1 || p_ + q_ != n) throw DomainError("HenonMap: p + q must equal N with p, q >= 1");
    if (ipow(d_, q_) != ipow(d_minus_, p_)) throw DomainError("HenonMap: d^q != d_minus^p");
}

DegreeProfile HenonMap::profile() const { return henon_profile(dim(), d_, d_minus_, p_, q_); }

std::optional<std::size_t> is_periodic(const PolyMap& f, const std::vector<CycloNumber>& z, std::size_t n_max) {
    if (f.nvars() != f.dim() || z.size() != f.dim()) throw std::invalid_argument("is_periodic: dimension mismatch");
    return bounded_period(f, z, n_max, std::numeric_limits<double>::infinity());
}

std::optional<std::size_t> is_periodic(const HenonMap& h, const std::vector<CycloNumber>& z, std::size_t n_max) {
    return is_periodic(h.forward(), z, n_max);
}

double filtration_radius(const HenonMap& h) {
    if (h.factors().empty()) throw DomainError("filtration_radius: needs a planar elementary composition");
    double beta = 1;
    for (const auto& f : h.factors()) beta = std::max(beta, std::abs(f.b.get_d()));
    double r = 1;
    for (const auto& f : h.factors()) {
        const long d = f.p.degree();
        const double lead = std::abs(f.p.coeff({d}).get_d());
        const double lower = f.p.l1_norm() - lead;
        r = std::max(r, (lower + std::abs(f.a.get_d()) * beta + 1) / lead);
    }
    return beta * r * (1 + 1e-12);
}

std::vector<CycloNumber> integral_elements_with_house(unsigned long n, const Rational& bound) {
    if (n == 0) throw std::invalid_argument("integral_elements_with_house: conductor must be positive");
    if (bound < 0) return {};
    const std::size_t m = euler_phi(n);
    // Gram matrix of the trace form on the power basis; sum |sigma(alpha)|^2
    // <= phi(n) * house^2 bounds the search ellipsoid.
    std::vector<std::vector<long double>> g(m, std::vector<long double>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            g[i][j] = trace_of_root(n, static_cast<long>(i) - static_cast<long>(j));
    // Fincke-Pohst form: x^T G x = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2.
    std::vector<std::vector<long double>> q = g;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const long double t = q[i][j];
            q[j][i] = t / q[i][i];
            for (std::size_t k = j; k < m; ++k) q[j][k] -= q[j][i] * q[i][k];
        }
        for (std::size_t j = i + 1; j < m; ++j) q[i][j] = q[j][i];
    }
    const long double t_bound = static_cast<long double>(m) * Rational(bound * bound).get_d() * (1 + 1e-9L) + 1e-9L;

    std::vector<CycloNumber> out;
    std::vector<long> x(m, 0);
    auto rec = [&](auto&& self, std::size_t level, long double remaining) -> void {
        const std::size_t i = level;
        long double c = 0;
        for (std::size_t j = i + 1; j < m; ++j) c -= q[i][j] * x[j];
        const long double rad = std::sqrt(std::max<long double>(remaining, 0) / q[i][i]);
        const long lo = static_cast<long>(std::ceil(c - rad - 1e-9L)), hi = static_cast<long>(std::floor(c + rad + 1e-9L));
        for (long v = lo; v <= hi; ++v) {
            x[i] = v;
            const long double used = q[i][i] * (v - c) * (v - c);
            if (used > remaining + 1e-9L) continue;
            if (i == 0) {
                std::vector<Rational> co(x.begin(), x.end());
                CycloNumber a(n, co);
                if (compare_house(a, bound) <= 0) out.push_back(a);
            } else {
                self(self, i - 1, remaining - used);
            }
        }
        x[i] = 0;
    };
    rec(rec, m - 1, t_bound);

    std::vector<std::pair<double, CycloNumber>> keyed;
    for (auto& a : out) keyed.emplace_back(house(a).value, std::move(a));
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second.coeffs() < b.second.coeffs();
    });
    out.clear();
    for (auto& [h, a] : keyed) out.push_back(std::move(a));
    return out;
}

namespace {

Rational effective_bound(const HenonMap& h, const ScanOptions& opt) {
    Rational b = opt.house_bound;
    if (!h.factors().empty()) {
        Rational r(filtration_radius(h));
        if (r < b) b = r;
    }
    return b * Rational(Integer(opt.denom));
}

std::vector<unsigned long> conductor_classes(unsigned long bound) {
    std::vector<unsigned long> out;
    for (unsigned long n = 1; n <= bound; ++n)
        if (n % 4 != 2) out.push_back(n);
    return out;
}

}  // namespace

double scan_cost_estimate(const HenonMap& h, const ScanOptions& opt) {
    const double b = effective_bound(h, opt).get_d();
    double total = 0;
    for (unsigned long n : conductor_classes(opt.conductor_bound)) {
        const double phi = static_cast<double>(euler_phi(n));
        // lattice points in the trace-form ellipsoid, by volume
        const double log_vol = phi / 2 * std::log(M_PI) - std::lgamma(phi / 2 + 1) +
                               phi / 2 * std::log(std::max(phi * b * b, 1e-300)) - log_discriminant(n) / 2;
        const double pts = std::exp(log_vol) + 1;
        total += std::pow(pts, static_cast<double>(h.dim())) * static_cast<double>(opt.n_max);
    }
    return total;
}

ScanResult cyclo_periodic_scan(const HenonMap& h, const ScanOptions& opt) {
    if (opt.conductor_bound < 1 || opt.denom < 1 || opt.n_max < 1 || opt.workers < 1)
        throw std::invalid_argument("cyclo_periodic_scan: bounds must be positive");
    if (opt.house_bound < 0) throw std::invalid_argument("cyclo_periodic_scan: negative house bound");
    ScanResult result;
    result.estimated_cost = scan_cost_estimate(h, opt);
    if (result.estimated_cost > opt.max_cost) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "scan cost estimate %.3g exceeds limit %.3g", result.estimated_cost, opt.max_cost);
        throw DomainError(buf);
    }
    const double radius = h.factors().empty() ? std::numeric_limits<double>::infinity() : filtration_radius(h);
    const Rational enum_bound = effective_bound(h, opt);
    const Rational scale = Rational(1) / Rational(Integer(opt.denom));
    const std::size_t dim = h.dim();
    const Json options = options_json(h, opt);

    unsigned long last_done = 0;
    if (!opt.checkpoint.empty() && std::filesystem::exists(opt.checkpoint)) {
        std::ifstream in(opt.checkpoint);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        Json cp = parse_json(text);
        if (cp.value("schema", "") != kSchema || cp.value("kind", "") != "henon-scan-checkpoint")
            throw FormatError("not a scan checkpoint: " + opt.checkpoint);
        if (cp.at("options") != options) throw DomainError("checkpoint was written for a different scan");
        last_done = cp.at("last_completed_conductor").get<unsigned long>();
        for (const auto& hj : cp.at("hits")) {
            ScanHit hit;
            hit.point = point_from_json(hj.at("point"));
            hit.period = hj.at("period").get<std::size_t>();
            hit.conductor = hj.at("conductor").get<unsigned long>();
            hit.house = point_house(hit.point);
            result.hits.push_back(std::move(hit));
        }
    }

    for (unsigned long n : conductor_classes(opt.conductor_bound)) {
        if (n <= last_done) {
            ++result.resumed_classes;
            continue;
        }
        std::vector<CycloNumber> cand;
        std::vector<unsigned long> cond;
        for (const auto& a : integral_elements_with_house(n, enum_bound)) {
            CycloNumber x = (a * CycloNumber(scale)).normalize();
            if (compare_house(x, opt.house_bound) > 0) continue;
            cond.push_back(x.conductor());
            cand.push_back(std::move(x));
        }
        const std::size_t k = cand.size();
        std::size_t total = 1;
        for (std::size_t i = 0; i < dim; ++i) total *= k;
        if (k == 0) total = 0;

        const unsigned workers = std::max(1u, std::min<unsigned>(opt.workers, static_cast<unsigned>(std::max<std::size_t>(total, 1))));
        std::vector<std::vector<ScanHit>> found(workers);
        std::vector<std::size_t> examined(workers, 0);
        std::vector<std::exception_ptr> errors(workers);
        auto work = [&](unsigned w) {
            try {
                std::vector<std::size_t> idx(dim);
                for (std::size_t t = w; t < total; t += workers) {
                    std::size_t r = t;
                    unsigned long c = 1;
                    for (std::size_t i = dim; i-- > 0;) {
                        idx[i] = r % k;
                        r /= k;
                        c = lcm_ul(c, cond[idx[i]]);
                    }
                    if (c != n) continue;
                    ++examined[w];
                    std::vector<CycloNumber> z;
                    for (std::size_t i = 0; i < dim; ++i) z.push_back(cand[idx[i]]);
                    auto per = bounded_period(h.forward(), z, opt.n_max, radius);
                    if (!per) continue;
                    // independent confirmation through the inverse map
                    std::vector<CycloNumber> back = z;
                    for (std::size_t s = 0; s < *per; ++s) back = h.backward().evaluate(back);
                    if (back != z) throw std::logic_error("scan hit failed inverse re-verification");
                    found[w].push_back({z, *per, n, point_house(z)});
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        };
        if (workers == 1) {
            work(0);
        } else {
            std::vector<std::thread> pool;
            for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
            for (auto& t : pool) t.join();
        }
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
        for (unsigned w = 0; w < workers; ++w) {
            result.candidates += examined[w];
            for (auto& hit : found[w]) result.hits.push_back(std::move(hit));
        }
        std::sort(result.hits.begin(), result.hits.end(), hit_less);
        if (!opt.checkpoint.empty()) write_checkpoint(opt.checkpoint, options, n, result.hits);
    }
    std::sort(result.hits.begin(), result.hits.end(), hit_less);
    return result;
}

bool unit_obstruction(const IntMatrix& a, unsigned long claimed_d) {
    require_square(a, "unit_obstruction");
    if (claimed_d < 2) return false;
    Integer det = determinant(a);
    if (abs(det) != 1) return false;
    const IntPoly chi = charpoly(a);
    const Integer d(claimed_d);
    if (chi.evaluate(d) != 0 && chi.evaluate(-d) != 0) return false;
    return std::abs(spectral_radius(a) - static_cast<double>(claimed_d)) <= 1e-9 * static_cast<double>(claimed_d);
}

}  // namespace toridyn
