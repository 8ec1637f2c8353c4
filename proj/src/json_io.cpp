#include "toridyn/json_io.hpp"

#include <sstream>

namespace toridyn {

namespace {

std::vector<long> parse_key(const std::string& key) {
    std::vector<long> e;
    std::stringstream ss(key);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            std::size_t used = 0;
            long v = std::stol(part, &used);
            if (used != part.size()) throw FormatError("bad exponent key: " + key);
            e.push_back(v);
        } catch (const std::logic_error&) {
            throw FormatError("bad exponent key: " + key);
        }
    }
    if (e.empty()) throw FormatError("empty exponent key");
    return e;
}

}  // namespace

Json to_json(const Integer& x) { return x.get_str(); }

Json to_json(const Rational& x) { return x.get_str(); }

Json to_json(const IntMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

Json to_json(const CycloNumber& x) {
    Json c = Json::array();
    for (const auto& q : x.coeffs()) c.push_back(to_json(q));
    return {{"conductor", x.conductor()}, {"coeffs", c}};
}

Json to_json(const std::vector<CycloNumber>& z) {
    Json out = Json::array();
    for (const auto& x : z) out.push_back(to_json(x));
    return out;
}

Json to_json(const Poly& p) {
    Json out = Json::object();
    for (const auto& [e, c] : p.terms()) {
        std::string key;
        for (std::size_t i = 0; i < e.size(); ++i) key += (i ? "," : "") + std::to_string(e[i]);
        out[key] = to_json(c);
    }
    return out;
}

Json to_json(const PolyMap& f) {
    Json out = Json::array();
    for (const auto& c : f.components()) out.push_back(to_json(c));
    return out;
}

Integer integer_from_json(const Json& j) {
    if (j.is_number_integer()) return Integer(std::to_string(j.get<long long>()));
    if (j.is_string()) {
        Integer x;
        if (x.set_str(j.get<std::string>(), 10) != 0) throw FormatError("not an integer: " + j.dump());
        return x;
    }
    throw FormatError("expected an integer, got " + j.dump());
}

Rational rational_from_json(const Json& j) {
    if (j.is_number_integer()) return Rational(integer_from_json(j));
    if (j.is_string()) {
        Rational q;
        if (q.set_str(j.get<std::string>(), 10) != 0) throw FormatError("not a rational: " + j.dump());
        if (q.get_den() == 0) throw FormatError("zero denominator: " + j.dump());
        q.canonicalize();
        return q;
    }
    throw FormatError("expected a rational, got " + j.dump());
}

IntMatrix matrix_from_json(const Json& j) {
    if (!j.is_array()) throw FormatError("matrix must be an array of rows");
    const std::size_t rows = j.size();
    const std::size_t cols = rows ? (j[0].is_array() ? j[0].size() : 0) : 0;
    IntMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        const Json& r = j[i];
        if (!r.is_array()) throw FormatError("matrix row must be an array");
        if (r.size() != cols) throw FormatError("ragged matrix");
        for (std::size_t k = 0; k < cols; ++k) m(i, k) = integer_from_json(r[k]);
    }
    return m;
}

CycloNumber cyclo_from_json(const Json& j) {
    if (j.is_object()) {
        if (!j.contains("conductor") || !j.contains("coeffs")) throw FormatError("cyclotomic number needs conductor and coeffs");
        const Json& n = j.at("conductor");
        if (!n.is_number_unsigned() || n.get<unsigned long>() == 0) throw FormatError("conductor must be a positive integer");
        if (!j.at("coeffs").is_array()) throw FormatError("coeffs must be an array");
        std::vector<Rational> c;
        for (const auto& x : j.at("coeffs")) c.push_back(rational_from_json(x));
        return CycloNumber(n.get<unsigned long>(), c);
    }
    return CycloNumber(rational_from_json(j));
}

std::vector<CycloNumber> point_from_json(const Json& j) {
    std::vector<CycloNumber> z;
    if (j.is_array()) {
        for (const auto& x : j) z.push_back(cyclo_from_json(x));
    } else {
        z.push_back(cyclo_from_json(j));
    }
    return z;
}

Poly poly_from_json(const Json& j, std::size_t nvars) {
    if (!j.is_object()) throw FormatError("polynomial must be an object of exponent: coefficient");
    std::vector<std::pair<std::vector<long>, Rational>> terms;
    for (const auto& [k, v] : j.items()) {
        auto e = parse_key(k);
        if (nvars == 0) nvars = e.size();
        if (e.size() != nvars) throw FormatError("inconsistent variable count in key " + k);
        terms.emplace_back(std::move(e), rational_from_json(v));
    }
    if (nvars == 0) nvars = 1;
    Poly p(nvars);
    for (const auto& [e, c] : terms) p.add_term(e, c);
    return p;
}

PolyMap polymap_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw FormatError("map must be a non-empty array of polynomials");
    std::size_t nvars = 0;
    for (const auto& c : j) {
        if (!c.is_object()) throw FormatError("map component must be a polynomial object");
        for (const auto& [k, v] : c.items()) {
            nvars = parse_key(k).size();
            break;
        }
        if (nvars) break;
    }
    if (nvars == 0) nvars = j.size();
    std::vector<Poly> comps;
    for (const auto& c : j) comps.push_back(poly_from_json(c, nvars));
    return PolyMap(nvars, comps);
}

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw FormatError(std::string("malformed JSON: ") + e.what());
    }
}

}  // namespace toridyn
