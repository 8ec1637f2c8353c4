#include "toridyn/cli.hpp"

#include "toridyn/affdyn.hpp"
#include "toridyn/classify1d.hpp"
#include "toridyn/dyndeg.hpp"
#include "toridyn/henon.hpp"
#include "toridyn/json_io.hpp"
#include "toridyn/torus.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <functional>
#include <iostream>

namespace toridyn::cli {

namespace {

std::string fmt(double x, const char* spec = "%.12g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, x);
    return buf;
}

Json with_schema(Json j) {
    j["schema"] = kSchema;
    return j;
}

Json torsion_json(const TorsionPoint& x) {
    Json out = Json::array();
    for (const auto& e : x.exponents()) out.push_back(to_json(e));
    return out;
}

TorsionPoint torsion_from_json(const Json& j) {
    if (!j.is_array()) throw FormatError("torsion point must be an array of exponents");
    std::vector<Rational> e;
    for (const auto& x : j) e.push_back(rational_from_json(x));
    return TorsionPoint(e);
}

Json coset_json(const SubgroupCoset& c) {
    return {{"epsilon", torsion_json(c.epsilon())},
            {"lattice", to_json(c.lattice().basis())},
            {"dim", c.dim()},
            {"components", to_json(c.component_count())}};
}

SubgroupCoset coset_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("epsilon") || !j.contains("lattice"))
        throw FormatError("coset must be {epsilon, lattice}");
    TorsionPoint eps = torsion_from_json(j.at("epsilon"));
    const Json& lat = j.at("lattice");
    IntMatrix gens = lat.empty() ? IntMatrix(0, eps.ambient_dim()) : matrix_from_json(lat);
    if (gens.cols() != eps.ambient_dim()) throw FormatError("lattice width differs from epsilon length");
    return SubgroupCoset(eps, Lattice(eps.ambient_dim(), gens));
}

PolyMap map_from_arg(const std::string& text) {
    if (text == "zsq") return PolyMap(1, {univariate({0, 0, 1})});
    if (text == "cheb2") return PolyMap(1, {univariate({-2, 0, 1})});
    Json j = parse_json(text);
    if (j.is_object()) return PolyMap(1, {poly_from_json(j)});
    return polymap_from_json(j);
}

PolyMap laurent_from_arg(const std::string& text) {
    if (text == "id") return PolyMap(1, {Poly::variable(1, 0)});
    if (text == "joukowski") return PolyMap(1, {Poly::monomial({1}, 1) + Poly::monomial({-1}, 1)});
    return map_from_arg(text);
}

std::vector<Rational> rational_point(const Json& j) {
    std::vector<Rational> x;
    if (j.is_array()) {
        for (const auto& v : j) x.push_back(rational_from_json(v));
    } else {
        x.push_back(rational_from_json(j));
    }
    return x;
}

std::complex<double> complex_from_json(const Json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    if (j.is_object()) return embed(cyclo_from_json(j), 1).value;
    return rational_from_json(j).get_d();
}

Json decision_json(const OrbitDecision& d) {
    Json j = {{"kind", to_string(d.kind)}};
    switch (d.kind) {
    case OrbitDecision::Kind::preperiodic:
    case OrbitDecision::Kind::orbit_closed:
        j["tail"] = d.tail;
        j["period"] = d.period;
        break;
    case OrbitDecision::Kind::escapes:
        j["place"] = d.place;
        j["steps"] = d.steps;
        break;
    case OrbitDecision::Kind::found:
        j["steps"] = d.steps;
        break;
    default:
        j["steps"] = d.steps;
        break;
    }
    return j;
}

Json profile_json(const DegreeProfile& p) {
    Json lam = Json::array(), exact = Json::array(), mus = Json::array();
    for (std::size_t i = 0; i < p.lambdas.size(); ++i) {
        lam.push_back(p.format_lambda(i));
        exact.push_back(p.exact[i].has_value());
    }
    for (double m : p.mus) mus.push_back(fmt(m));
    Json j = {{"lambdas", lam},
              {"exact", exact},
              {"mus", mus},
              {"hyperbolic", to_string(p.hyperbolicity.status)},
              {"log_concave", p.is_log_concave()}};
    j["hyperbolic_index"] = p.hyperbolicity.index ? Json(*p.hyperbolicity.index) : Json(nullptr);
    return j;
}

Json hit_json(const ScanHit& h) {
    return {{"point", to_json(h.point)}, {"period", h.period}, {"conductor", h.conductor}, {"house", fmt(h.house)}};
}

Json witness_json(const std::optional<AffineWitness>& w) {
    if (!w) return nullptr;
    return {{"alpha", to_json(w->alpha)}, {"beta", to_json(w->beta)}};
}

struct Args {
    std::string matrix, poly, point, map, phi, target, coset, other, op = "image", torsion, henon, inverse, regular,
        henon_profile;
    unsigned long period = 1, conductor_bound = 24, denom = 1, period_bound = 12, b_max = 3, order_bound = 24,
                  iterate = 1, p = 1, q = 1;
    std::string house_bound = "2";
    unsigned workers = 1, iters = 30;
    std::string checkpoint;
    double max_cost = 1e9;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact dynamics on tori, cyclotomic fields and polynomial maps"};
    app.require_subcommand(1, 1);
    Args a;
    std::function<void()> action;
    auto sub = [&](const char* name, const char* desc) { return app.add_subcommand(name, desc); };
    auto matrix_opt = [&](CLI::App* s, bool required = true) {
        auto* o = s->add_option("--matrix", a.matrix, "integer matrix as JSON rows");
        if (required) o->required();
    };

    auto* hnf_c = sub("hnf", "Hermite normal form");
    matrix_opt(hnf_c);
    hnf_c->callback([&] {
        action = [&] {
            auto r = hnf(matrix_from_json(parse_json(a.matrix)));
            out << with_schema({{"H", to_json(r.H)}, {"U", to_json(r.U)}}).dump() << "\n";
        };
    });

    auto* snf_c = sub("snf", "Smith normal form");
    matrix_opt(snf_c);
    snf_c->callback([&] {
        action = [&] {
            auto r = snf(matrix_from_json(parse_json(a.matrix)));
            out << with_schema({{"U", to_json(r.U)}, {"D", to_json(r.D)}, {"V", to_json(r.V)}}).dump() << "\n";
        };
    });

    auto* pos_c = sub("positive", "no eigenvalue is zero or a root of unity");
    matrix_opt(pos_c);
    pos_c->callback([&] {
        action = [&] {
            IntMatrix m = matrix_from_json(parse_json(a.matrix));
            const IntPoly chi = charpoly(m);
            const auto split = cyclotomic_split(chi);
            Json cp = Json::array(), cyc = Json::array(), rest = Json::array();
            for (const auto& c : chi.coeffs()) cp.push_back(to_json(c));
            for (const auto& c : split.cyclotomic.coeffs()) cyc.push_back(to_json(c));
            for (const auto& c : split.rest.coeffs()) rest.push_back(to_json(c));
            out << with_schema({{"positive", is_positive(m)}, {"charpoly", cp}, {"cyclotomic_part", cyc}, {"rest", rest}})
                       .dump()
                << "\n";
        };
    });

    auto* dec_c = sub("decompose", "split into a finite-order-eigenvalue block and a positive block");
    matrix_opt(dec_c);
    dec_c->callback([&] {
        action = [&] {
            auto r = decompose(matrix_from_json(parse_json(a.matrix)));
            out << with_schema({{"P", to_json(r.P)}, {"A1", to_json(r.A1)}, {"A2", to_json(r.A2)}}).dump() << "\n";
        };
    });

    auto* dyn_c = sub("dyndeg", "dynamical degree profile");
    matrix_opt(dyn_c, false);
    dyn_c->add_option("--regular", a.regular, "{\"N\": dim, \"d\": degree}");
    dyn_c->add_option("--henon", a.henon_profile, "{\"N\", \"d\", \"d_minus\", \"p\", \"q\"}");
    dyn_c->callback([&] {
        action = [&] {
            DegreeProfile p;
            if (!a.matrix.empty()) {
                p = monomial_degree_profile(matrix_from_json(parse_json(a.matrix)));
            } else if (!a.regular.empty()) {
                Json j = parse_json(a.regular);
                p = regular_profile(j.at("N").get<std::size_t>(), j.at("d").get<unsigned long>());
            } else if (!a.henon_profile.empty()) {
                Json j = parse_json(a.henon_profile);
                p = henon_profile(j.at("N").get<std::size_t>(), j.at("d").get<unsigned long>(),
                                  j.at("d_minus").get<unsigned long>(), j.at("p").get<unsigned long>(),
                                  j.at("q").get<unsigned long>());
            } else {
                throw FormatError("dyndeg needs --matrix, --regular or --henon");
            }
            out << with_schema(profile_json(p)).dump() << "\n";
        };
    });

    auto* fix_c = sub("fixed-points", "torsion points fixed by A^period");
    matrix_opt(fix_c);
    fix_c->add_option("--period", a.period, "period")->check(CLI::PositiveNumber);
    fix_c->callback([&] {
        action = [&] {
            auto r = fixed_points(matrix_from_json(parse_json(a.matrix)), static_cast<unsigned>(a.period));
            Json pts = Json::array();
            for (const auto& x : r.points) pts.push_back(torsion_json(x));
            out << with_schema({{"count", to_json(r.count)}, {"points", pts}}).dump() << "\n";
        };
    });

    auto* coset_c = sub("coset", "operations on subgroup cosets");
    coset_c->add_option("--coset", a.coset, "{\"epsilon\": [...], \"lattice\": [[...]]}")->required();
    coset_c->add_option("--op", a.op, "image | preimage | intersect | components | stabilizer | membership")
        ->check(CLI::IsMember({"image", "preimage", "intersect", "components", "stabilizer", "membership"}));
    matrix_opt(coset_c, false);
    coset_c->add_option("--other", a.other, "second coset for intersect");
    coset_c->add_option("--torsion", a.torsion, "torsion point for membership");
    coset_c->callback([&] {
        action = [&] {
            SubgroupCoset c = coset_from_json(parse_json(a.coset));
            Json res;
            auto list = [](const std::vector<TorsionCoset>& cs) {
                Json l = Json::array();
                for (const auto& t : cs) l.push_back(coset_json(t.coset()));
                return l;
            };
            if (a.op == "image" || a.op == "preimage") {
                if (a.matrix.empty()) throw FormatError("--op " + a.op + " needs --matrix");
                IntMatrix m = matrix_from_json(parse_json(a.matrix));
                res = {{"coset", coset_json(a.op == "image" ? coset_image(c, m) : coset_preimage(c, m))}};
            } else if (a.op == "intersect") {
                if (a.other.empty()) throw FormatError("--op intersect needs --other");
                res = {{"cosets", list(coset_intersect(c, coset_from_json(parse_json(a.other))))}};
            } else if (a.op == "components") {
                res = {{"cosets", list(components(c))}};
            } else if (a.op == "stabilizer") {
                res = {{"coset", coset_json(stabilizer(c))}};
            } else {
                if (a.torsion.empty()) throw FormatError("--op membership needs --torsion");
                res = {{"member", membership(torsion_from_json(parse_json(a.torsion)), c)}};
            }
            out << with_schema(res).dump() << "\n";
        };
    });

    auto* quo_c = sub("quotient", "monomial quotient map killing a subtorus");
    matrix_opt(quo_c);
    quo_c->callback([&] {
        action = [&] {
            IntMatrix g = matrix_from_json(parse_json(a.matrix));
            out << with_schema({{"Q", to_json(quotient_map(Lattice(g.cols(), g)))}}).dump() << "\n";
        };
    });

    auto* house_c = sub("house", "largest absolute value over all conjugates");
    house_c->add_option("--point", a.point, "cyclotomic number")->required();
    house_c->callback([&] {
        action = [&] {
            RealApprox h = house(cyclo_from_json(parse_json(a.point)));
            out << with_schema({{"house", fmt(h.value)}, {"error", fmt(h.error, "%.3g")}}).dump() << "\n";
        };
    });

    auto* lox_c = sub("loxton", "shortest sum of roots of unity");
    lox_c->add_option("--point", a.point, "cyclotomic integer")->required();
    lox_c->add_option("--b-max", a.b_max, "maximum number of roots");
    lox_c->add_option("--order-bound", a.order_bound, "roots of order dividing this bound");
    lox_c->callback([&] {
        action = [&] {
            auto r = loxton_decompose(cyclo_from_json(parse_json(a.point)), static_cast<unsigned>(a.b_max), a.order_bound);
            Json roots = nullptr;
            if (r) {
                roots = Json::array();
                for (const auto& x : *r) roots.push_back(x.to_string());
            }
            out << with_schema({{"roots", roots}}).dump() << "\n";
        };
    });

    auto* cert_c = sub("cert", "regularity certificate");
    cert_c->add_option("--map", a.map, "polynomial map")->required();
    cert_c->callback([&] {
        action = [&] {
            auto c = regularity_certificate(map_from_arg(a.map));
            Json res = {{"regular", c.has_value()}};
            if (c) {
                Json r = Json::array();
                for (const auto& row : c->R) {
                    Json jr = Json::array();
                    for (const auto& p : row) jr.push_back(to_json(p));
                    r.push_back(jr);
                }
                res["m"] = c->m;
                res["R"] = r;
            }
            out << with_schema(res).dump() << "\n";
        };
    });

    auto* esc_c = sub("escape", "escape radii at every place");
    esc_c->add_option("--map", a.map, "polynomial map")->required();
    esc_c->callback([&] {
        action = [&] {
            PolyMap f = map_from_arg(a.map);
            auto c = regularity_certificate(f);
            if (!c) throw DomainError("map is not regular");
            EscapeData e = escape_data(f, *c);
            Json bad = Json::array();
            for (const auto& b : e.bad_primes) {
                Json jb = {{"p", to_json(b.p)}, {"log_A", to_json(b.log_A)}, {"log_B", b.log_B}};
                jb["log_H"] = b.log_H ? Json(*b.log_H) : Json(nullptr);
                bad.push_back(jb);
            }
            out << with_schema({{"bad_primes", bad},
                                {"arch_radius", fmt(e.arch_radius)},
                                {"arch_B", fmt(e.arch_B)},
                                {"arch_H", fmt(e.arch_H)},
                                {"arch_C", fmt(e.arch_C)},
                                {"M", to_json(e.M)}})
                       .dump()
                << "\n";
        };
    });

    auto* pre_c = sub("preper", "decide preperiodicity of a cyclotomic point");
    pre_c->add_option("--map", a.map, "polynomial map or zsq / cheb2")->required();
    pre_c->add_option("--point", a.point, "cyclotomic point")->required();
    pre_c->callback([&] {
        action = [&] {
            auto d = is_preperiodic(map_from_arg(a.map), point_from_json(parse_json(a.point)));
            out << with_schema(decision_json(d)).dump() << "\n";
        };
    });

    auto* back_c = sub("backward", "is the rational point x in the forward orbit of z");
    back_c->add_option("--map", a.map, "polynomial map")->required();
    back_c->add_option("--target", a.target, "rational point x")->required();
    back_c->add_option("--point", a.point, "cyclotomic point z")->required();
    back_c->callback([&] {
        action = [&] {
            auto d = backward_orbit_filter(map_from_arg(a.map), rational_point(parse_json(a.target)),
                                           point_from_json(parse_json(a.point)));
            out << with_schema(decision_json(d)).dump() << "\n";
        };
    });

    auto* green_c = sub("green", "Green function estimate");
    green_c->add_option("--map", a.map, "polynomial map")->required();
    green_c->add_option("--point", a.point, "complex point: numbers, [re, im] pairs or cyclotomic numbers")->required();
    green_c->add_option("--iters", a.iters, "iterations (at most 60)");
    green_c->callback([&] {
        action = [&] {
            Json j = parse_json(a.point);
            std::vector<std::complex<double>> z;
            if (j.is_array()) {
                for (const auto& v : j) z.push_back(complex_from_json(v));
            } else {
                z.push_back(complex_from_json(j));
            }
            auto g = green_estimate(map_from_arg(a.map), z, a.iters);
            out << with_schema({{"value", fmt(g.value)},
                                {"error", fmt(g.error, "%.3g")},
                                {"escaped", g.escaped},
                                {"iterations", g.iterations}})
                       .dump()
                << "\n";
        };
    });

    auto* semi_c = sub("semiconj", "check f^l o phi = phi o phi_A");
    semi_c->add_option("--map", a.map, "polynomial map f")->required();
    semi_c->add_option("--phi", a.phi, "Laurent map phi, or id / joukowski")->required();
    matrix_opt(semi_c);
    semi_c->add_option("--iterate", a.iterate, "l")->check(CLI::PositiveNumber);
    semi_c->callback([&] {
        action = [&] {
            auto r = verify_semiconjugacy(map_from_arg(a.map), static_cast<unsigned>(a.iterate),
                                          laurent_from_arg(a.phi), matrix_from_json(parse_json(a.matrix)));
            out << with_schema({{"holds", r.holds}, {"strong", r.strong}}).dump() << "\n";
        };
    });

    auto* scan_c = sub("henon-scan", "periodic points among bounded cyclotomic candidates");
    scan_c->add_option("--henon", a.henon, "[{\"p\": poly, \"a\": q, \"b\": q}, ...]");
    scan_c->add_option("--map", a.map, "forward map of a general pair");
    scan_c->add_option("--inverse", a.inverse, "backward map of a general pair");
    scan_c->add_option("--p", a.p, "indeterminacy dimension p");
    scan_c->add_option("--q", a.q, "indeterminacy dimension q");
    scan_c->add_option("--conductor-bound", a.conductor_bound, "largest conductor");
    scan_c->add_option("--house-bound", a.house_bound, "house bound (rational)");
    scan_c->add_option("--denom", a.denom, "denominator M");
    scan_c->add_option("--period-bound", a.period_bound, "largest period");
    scan_c->add_option("--workers", a.workers, "worker threads")->check(CLI::PositiveNumber);
    scan_c->add_option("--checkpoint", a.checkpoint, "progress file");
    scan_c->add_option("--max-cost", a.max_cost, "refuse larger scans");
    scan_c->callback([&] {
        action = [&] {
            std::optional<HenonMap> h;
            if (!a.henon.empty()) {
                Json j = parse_json(a.henon);
                if (!j.is_array()) throw FormatError("--henon must be an array of factors");
                std::vector<ElementaryFactor> fs;
                for (const auto& f : j)
                    fs.push_back({poly_from_json(f.at("p"), 1), rational_from_json(f.at("a")), rational_from_json(f.at("b"))});
                h = HenonMap::compose_elementary(fs);
            } else if (!a.map.empty() && !a.inverse.empty()) {
                h.emplace(map_from_arg(a.map), map_from_arg(a.inverse), a.p, a.q);
            } else {
                throw FormatError("henon-scan needs --henon or --map with --inverse");
            }
            ScanOptions o;
            o.conductor_bound = a.conductor_bound;
            o.house_bound = rational_from_json(Json(a.house_bound));
            o.denom = a.denom;
            o.n_max = a.period_bound;
            o.workers = a.workers;
            o.checkpoint = a.checkpoint;
            o.max_cost = a.max_cost;
            auto r = cyclo_periodic_scan(*h, o);
            for (const auto& hit : r.hits) out << with_schema(hit_json(hit)).dump() << "\n";
            out << with_schema({{"summary",
                                 {{"hits", r.hits.size()},
                                  {"candidates", r.candidates},
                                  {"resumed_classes", r.resumed_classes},
                                  {"estimated_cost", fmt(r.estimated_cost, "%.3g")}}}})
                       .dump()
                << "\n";
        };
    });

    auto* cls_c = sub("classify", "power / Chebyshev / general up to affine conjugacy");
    cls_c->add_option("--poly", a.poly, "{\"exponent\": \"coefficient\", ...}")->required();
    cls_c->callback([&] {
        action = [&] {
            auto c = classify(poly_from_json(parse_json(a.poly), 1));
            Json res = {{"class", to_string(c.cls)}, {"witness", witness_json(c.witness)}, {"opposite", witness_json(c.opposite)}};
            res["sign"] = c.sign == 0 ? Json(nullptr) : Json(c.sign > 0 ? "+" : "-");
            if (!c.note.empty()) res["note"] = c.note;
            out << with_schema(res).dump() << "\n";
        };
    });

    auto error_json = [&](const char* kind, const std::string& msg) {
        out << with_schema({{"error", {{"kind", kind}, {"message", msg}}}}).dump() << "\n";
    };

    std::vector<const char*> argv{"toridyn"};
    for (const auto& s : args) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        error_json("usage", e.what());
        return 2;
    } catch (const FormatError& e) {
        error_json("usage", e.what());
        return 2;
    }
    try {
        if (action) action();
        return 0;
    } catch (const FormatError& e) {
        error_json("usage", e.what());
        return 2;
    } catch (const nlohmann::json::exception& e) {
        error_json("usage", e.what());
        return 2;
    } catch (const DomainError& e) {
        error_json("domain", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        error_json("usage", e.what());
        return 2;
    }
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace toridyn::cli
