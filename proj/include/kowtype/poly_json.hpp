#pragma once

#include "kowtype/poly.hpp"

#include "json.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace kow {

using nlohmann::json;

// Serialized form: {"vars": ["x1", ...],
//                   "coeffs": [[[exponents...], numerator, denominator], ...]}
// Zero coefficients are omitted; entries are sorted by exponent tuple so the
// output is canonical. Numerator/denominator are JSON integers when they fit
// in 64 bits and decimal strings otherwise; both are accepted on input.

namespace detail {

inline json int_to_json(const Int& v) {
    if (v >= std::numeric_limits<std::int64_t>::min() &&
        v <= std::numeric_limits<std::int64_t>::max())
        return static_cast<std::int64_t>(v);
    return v.str();
}

inline Int int_from_json(const json& j, const std::string& where) {
    if (j.is_number_integer()) return Int(j.get<std::int64_t>());
    if (j.is_string()) return Int(j.get<std::string>());
    throw ConfigError("expected integer or integer string", where);
}

inline json coeff_entry(std::vector<int> exps, const Rat& q) {
    json e = json::array();
    e.push_back(exps);
    e.push_back(int_to_json(boost::multiprecision::numerator(q)));
    e.push_back(int_to_json(boost::multiprecision::denominator(q)));
    return e;
}

inline json poly_header(const std::vector<std::string>& vars) {
    json j;
    j["vars"] = vars;
    j["coeffs"] = json::array();
    return j;
}

} // namespace detail

inline json to_json(const UniPoly<Rat>& p, const std::string& var = "x") {
    json j = detail::poly_header({var});
    for (int k = 0; k <= kUniMaxDeg; ++k)
        if (p.c[k] != 0) j["coeffs"].push_back(detail::coeff_entry({k}, p.c[k]));
    return j;
}

inline json to_json(const BiPoly<Rat>& p, const std::string& u = "x1",
                    const std::string& v = "x2") {
    json j = detail::poly_header({u, v});
    for (int i = 0; i <= kBiMaxDeg; ++i)
        for (int k = 0; k <= kBiMaxDeg; ++k)
            if (p.c[i][k] != 0) j["coeffs"].push_back(detail::coeff_entry({i, k}, p.c[i][k]));
    return j;
}

inline json to_json(const TriQuad<Rat>& p) {
    json j = detail::poly_header({"x1", "x2", "s"});
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            for (int l = 0; l < 3; ++l)
                if (p.c[i][k][l] != 0)
                    j["coeffs"].push_back(detail::coeff_entry({i, k, l}, p.c[i][k][l]));
    return j;
}

namespace detail {

inline void check_poly_shape(const json& j, size_t arity, const std::string& where) {
    if (!j.is_object() || !j.contains("vars") || !j.contains("coeffs"))
        throw ConfigError("polynomial object needs \"vars\" and \"coeffs\"", where);
    if (!j["vars"].is_array() || j["vars"].size() != arity)
        throw ConfigError("wrong variable count for this polynomial shape", where + "/vars");
    for (const auto& key : j.items())
        if (key.key() != "vars" && key.key() != "coeffs")
            throw ConfigError("unknown key", where + "/" + key.key());
}

struct ParsedEntry {
    std::vector<int> exps;
    Rat value;
};

inline ParsedEntry parse_entry(const json& e, size_t arity, const std::string& where) {
    if (!e.is_array() || e.size() != 3 || !e[0].is_array() || e[0].size() != arity)
        throw ConfigError("coefficient entry must be [[exponents...], num, den]", where);
    ParsedEntry out;
    for (const auto& x : e[0]) {
        if (!x.is_number_integer() || x.get<int>() < 0)
            throw ConfigError("exponents must be non-negative integers", where);
        out.exps.push_back(x.get<int>());
    }
    const Int num = int_from_json(e[1], where);
    const Int den = int_from_json(e[2], where);
    if (den == 0) throw ConfigError("zero denominator", where);
    out.value = Rat(num, den);
    return out;
}

} // namespace detail

inline UniPoly<Rat> unipoly_from_json(const json& j, const std::string& where = "/poly") {
    detail::check_poly_shape(j, 1, where);
    UniPoly<Rat> p;
    for (const auto& e : j["coeffs"]) {
        auto ent = detail::parse_entry(e, 1, where + "/coeffs");
        if (ent.exps[0] > kUniMaxDeg) throw DegreeOverflow("univariate degree cap is 8");
        p.c[ent.exps[0]] = ent.value;
    }
    return p;
}

inline BiPoly<Rat> bipoly_from_json(const json& j, const std::string& where = "/poly") {
    detail::check_poly_shape(j, 2, where);
    BiPoly<Rat> p;
    for (const auto& e : j["coeffs"]) {
        auto ent = detail::parse_entry(e, 2, where + "/coeffs");
        if (ent.exps[0] > kBiMaxDeg || ent.exps[1] > kBiMaxDeg)
            throw DegreeOverflow("bivariate degree cap is 4 per variable");
        p.c[ent.exps[0]][ent.exps[1]] = ent.value;
    }
    return p;
}

inline TriQuad<Rat> triquad_from_json(const json& j, const std::string& where = "/poly") {
    detail::check_poly_shape(j, 3, where);
    TriQuad<Rat> p;
    for (const auto& e : j["coeffs"]) {
        auto ent = detail::parse_entry(e, 3, where + "/coeffs");
        if (ent.exps[0] > kTriMaxDeg || ent.exps[1] > kTriMaxDeg || ent.exps[2] > kTriMaxDeg)
            throw DegreeOverflow("trivariate degree cap is 2 per variable");
        p.c[ent.exps[0]][ent.exps[1]][ent.exps[2]] = ent.value;
    }
    return p;
}

} // namespace kow
