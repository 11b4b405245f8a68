#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "asdforge/asdcheck.hpp"
#include "asdforge/characters.hpp"
#include "asdforge/cyclotomic.hpp"
#include "asdforge/denomscan.hpp"
#include "asdforge/newform.hpp"
#include "asdforge/qexp.hpp"
#include "asdforge/rational.hpp"

namespace asdforge::io {

using json = nlohmann::json;

namespace detail {
inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

inline long to_long(const json& j, const std::string& what) {
    require(j.is_number_integer(), what + " must be an integer");
    return j.get<long>();
}

inline long key_to_index(const std::string& key, const std::string& what) {
    try {
        size_t pos = 0;
        long n = std::stol(key, &pos);
        require(pos == key.size(), what);
        return n;
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument(what + ": bad key \"" + key + "\"");
    } catch (const std::out_of_range&) {
        throw std::invalid_argument(what + ": key out of range \"" + key + "\"");
    }
}
}  // namespace detail

// ---- scalars ---------------------------------------------------------------

inline json rat_to_json(const Rat& r) { return r.str(); }

inline Rat rat_from_json(const json& j) {
    if (j.is_number_integer()) return Rat(j.get<long>());
    detail::require(j.is_string(), "rational scalar must be a \"num/den\" string");
    return Rat::from_string(j.get<std::string>());
}

inline json cyclo_to_json(const CycloElem& c) {
    json coeffs = json::array();
    for (const Rat& r : c.coeffs()) coeffs.push_back(rat_to_json(r));
    return json{{"order", c.order()}, {"coeffs", std::move(coeffs)}};
}

inline CycloElem cyclo_from_json(const json& j) {
    if (j.is_string() || j.is_number_integer()) return CycloElem(rat_from_json(j));
    detail::require(j.is_object() && j.contains("order") && j.contains("coeffs"),
                    "cyclotomic scalar must be {\"order\": L, \"coeffs\": [...]}");
    long order = detail::to_long(j.at("order"), "cyclotomic order");
    detail::require(j.at("coeffs").is_array(), "cyclotomic coeffs must be an array");
    std::vector<Rat> coeffs;
    for (const auto& e : j.at("coeffs")) coeffs.push_back(rat_from_json(e));
    return CycloElem(order, std::move(coeffs));
}

// ---- q-expansions ----------------------------------------------------------

inline json qexp_to_json(const QExp& f) {
    json field = f.rational_field() ? json{{"kind", "rational"}}
                                    : json{{"kind", "cyclotomic"}, {"order", f.field_order()}};
    json coeffs = json::object();
    for (const auto& [n, c] : f.coefficients()) {
        json scalar = f.rational_field() ? rat_to_json(c.coeffs()[0]) : cyclo_to_json(c);
        coeffs[std::to_string(n)] = std::move(scalar);
    }
    return json{{"weight", f.weight()},
                {"width", f.width()},
                {"field", std::move(field)},
                {"trunc", f.trunc()},
                {"coefficients", std::move(coeffs)}};
}

inline QExp qexp_from_json(const json& j) {
    detail::require(j.is_object(), "q-expansion must be a JSON object");
    for (const char* key : {"weight", "width", "field", "trunc", "coefficients"})
        detail::require(j.contains(key), std::string("q-expansion is missing \"") + key + "\"");
    const json& field = j.at("field");
    detail::require(field.is_object() && field.contains("kind"), "field must carry a \"kind\"");
    std::string kind = field.at("kind").get<std::string>();
    long order = 1;
    if (kind == "cyclotomic") {
        detail::require(field.contains("order"), "cyclotomic field needs an \"order\"");
        order = detail::to_long(field.at("order"), "field order");
    } else {
        detail::require(kind == "rational", "field kind must be \"rational\" or \"cyclotomic\"");
    }
    QExp f(static_cast<int>(detail::to_long(j.at("weight"), "weight")),
           detail::to_long(j.at("width"), "width"), order, detail::to_long(j.at("trunc"), "trunc"));
    detail::require(j.at("coefficients").is_object(), "coefficients must be an object");
    for (const auto& [key, value] : j.at("coefficients").items()) {
        long n = detail::key_to_index(key, "coefficient index");
        f.set_coeff(n, cyclo_from_json(value));
    }
    return f;
}

// ---- characters ------------------------------------------------------------

inline json char_to_json(const DirichletChar& chi) {
    json values = json::object();
    for (const auto& [u, v] : chi.exponents()) values[std::to_string(u)] = v;
    return json{{"modulus", chi.modulus()}, {"order", chi.order()}, {"values", std::move(values)}};
}

inline DirichletChar char_from_json(const json& j) {
    detail::require(j.is_object() && j.contains("modulus") && j.contains("order") && j.contains("values"),
                    "character must be {\"modulus\", \"order\", \"values\"}");
    std::map<long, long> table;
    for (const auto& [key, value] : j.at("values").items())
        table[detail::key_to_index(key, "character residue")] = detail::to_long(value, "character exponent");
    return DirichletChar::from_table(detail::to_long(j.at("modulus"), "modulus"),
                                     table, detail::to_long(j.at("order"), "order"));
}

/// "quadratic:N", "trivial:K", or inline character JSON.
inline DirichletChar char_from_shorthand(const std::string& s) {
    auto colon = s.find(':');
    if (colon != std::string::npos) {
        std::string head = s.substr(0, colon);
        std::string tail = s.substr(colon + 1);
        long n = detail::key_to_index(tail, "character shorthand modulus");
        if (head == "quadratic") return quadratic_char(n);
        if (head == "trivial") return trivial_char(n);
        throw std::invalid_argument("unknown character shorthand \"" + head + "\"");
    }
    return char_from_json(json::parse(s));
}

// ---- newforms --------------------------------------------------------------

inline json newform_to_json(const NewformSpec& g) {
    json coeffs = json::object();
    for (const auto& [p, bp] : g.prime_coeffs()) coeffs[std::to_string(p)] = bp.get_str();
    return json{{"weight", g.weight()},
                {"level", g.level()},
                {"character", char_to_json(g.character())},
                {"prime_coeffs", std::move(coeffs)}};
}

inline mpz_class mpz_from_json(const json& j, const std::string& what) {
    if (j.is_number_integer()) return mpz_class(j.get<long>());
    detail::require(j.is_string(), what + " must be an integer or decimal string");
    try {
        return mpz_class(j.get<std::string>());
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument(what + ": bad integer \"" + j.get<std::string>() + "\"");
    }
}

inline DirichletChar char_from_json_or_shorthand(const json& j) {
    if (j.is_string()) return char_from_shorthand(j.get<std::string>());
    return char_from_json(j);
}

inline NewformSpec newform_from_json(const json& j) {
    detail::require(j.is_object(), "newform spec must be a JSON object");
    for (const char* key : {"weight", "level", "character", "prime_coeffs"})
        detail::require(j.contains(key), std::string("newform spec is missing \"") + key + "\"");
    std::map<long, mpz_class> coeffs;
    for (const auto& [key, value] : j.at("prime_coeffs").items())
        coeffs[detail::key_to_index(key, "prime index")] = mpz_from_json(value, "prime coefficient");
    return NewformSpec(static_cast<int>(detail::to_long(j.at("weight"), "weight")),
                       detail::to_long(j.at("level"), "level"),
                       char_from_json_or_shorthand(j.at("character")), std::move(coeffs));
}

// ---- extended Hecke sequences ----------------------------------------------

inline json hecke_to_json(const HeckeSequence& h) {
    json values = json::array();
    for (long n = 1; n <= h.nmax(); ++n) values.push_back(h.at(n).get_str());
    return json{{"weight", h.weight},
                {"level", h.level},
                {"character", char_to_json(h.character)},
                {"nmax", h.nmax()},
                {"values", std::move(values)}};
}

inline HeckeSequence hecke_from_json(const json& j) {
    detail::require(j.is_object(), "sequence must be a JSON object");
    for (const char* key : {"weight", "level", "character", "nmax", "values"})
        detail::require(j.contains(key), std::string("sequence is missing \"") + key + "\"");
    HeckeSequence h;
    h.weight = static_cast<int>(detail::to_long(j.at("weight"), "weight"));
    h.level = detail::to_long(j.at("level"), "level");
    h.character = char_from_json_or_shorthand(j.at("character"));
    long nmax = detail::to_long(j.at("nmax"), "nmax");
    const json& values = j.at("values");
    detail::require(values.is_array() && static_cast<long>(values.size()) == nmax,
                    "values must be an array of length nmax");
    h.values.resize(static_cast<size_t>(nmax) + 1);
    h.values[0] = 0;
    for (long n = 1; n <= nmax; ++n)
        h.values[static_cast<size_t>(n)] = mpz_from_json(values[static_cast<size_t>(n - 1)], "b(n)");
    return h;
}

// ---- files -----------------------------------------------------------------

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
    if (!out) throw std::runtime_error("failed writing " + path);
}

inline void write_json_file(const std::string& path, const json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

/// Reads "p,b_p" lines (blank lines, '#' comments and a header line allowed);
/// weight/level/character come from the JSON sidecar next to the CSV
/// (same stem, .json extension).
inline NewformSpec newform_from_csv(const std::string& csv_path) {
    std::string sidecar = csv_path;
    auto dot = sidecar.find_last_of('.');
    auto slash = sidecar.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        sidecar += ".json";
    else
        sidecar = sidecar.substr(0, dot) + ".json";
    json meta = read_json_file(sidecar);
    for (const char* key : {"weight", "level", "character"})
        detail::require(meta.contains(key), "newform sidecar " + sidecar + " is missing \"" + key + "\"");

    std::ifstream in(csv_path);
    if (!in) throw std::runtime_error("cannot open " + csv_path);
    std::map<long, mpz_class> coeffs;
    std::string line;
    long lineno = 0;
    bool seen_row = false;
    while (std::getline(in, line)) {
        ++lineno;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument(csv_path + ":" + std::to_string(lineno) + ": expected \"p,b_p\"");
        std::string ps = line.substr(0, comma);
        std::string bs = line.substr(comma + 1);
        if (!seen_row && ps.find_first_not_of("0123456789 ") != std::string::npos) continue;  // header
        seen_row = true;
        try {
            coeffs[detail::key_to_index(ps, "prime column")] = mpz_class(bs);
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument(csv_path + ":" + std::to_string(lineno) + ": bad row \"" + line +
                                        "\"");
        }
    }
    return NewformSpec(static_cast<int>(detail::to_long(meta.at("weight"), "weight")),
                       detail::to_long(meta.at("level"), "level"),
                       char_from_json_or_shorthand(meta.at("character")), std::move(coeffs));
}

/// Dispatches on the file extension: .csv reads the prime table with its JSON
/// sidecar, anything else is parsed as newform JSON.
inline NewformSpec newform_from_file(const std::string& path) {
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") return newform_from_csv(path);
    return newform_from_json(read_json_file(path));
}

/// Character argument: shorthand, or a path to character JSON.
inline DirichletChar char_from_arg(const std::string& arg) {
    if (arg.find(':') != std::string::npos) return char_from_shorthand(arg);
    return char_from_json(read_json_file(arg));
}

// ---- reports ---------------------------------------------------------------

inline json verdict_to_json(const AsdVerdict& v) {
    return json{{"p", v.prime},
                {"n", v.n},
                {"lhs", rat_to_json(v.lhs)},
                {"required", v.required},
                {"achieved", v.achieved.is_infinite() ? json("inf") : json(v.achieved.value())},
                {"pass", v.pass},
                {"advisory", v.advisory}};
}

inline json asd_report_to_json(const AsdReport& r) {
    json verdicts = json::array();
    for (const auto& v : r.verdicts) verdicts.push_back(verdict_to_json(v));
    return json{{"verdicts", std::move(verdicts)},
                {"summary",
                 {{"checked", r.checked()},
                  {"passed", r.passed()},
                  {"failed", r.failed()},
                  {"advisory", r.advisory_failed()}}}};
}

inline json lemma_report_to_json(const LemmaReport& r) {
    json violations = json::array();
    for (const auto& v : r.violations)
        violations.push_back(json{{"clause", v.clause},
                                  {"index", v.index},
                                  {"exponents", v.exponents},
                                  {"lhs", rat_to_json(v.lhs)},
                                  {"rhs", rat_to_json(v.rhs)}});
    return json{{"pass", r.pass}, {"cases_checked", r.cases_checked}, {"violations", std::move(violations)}};
}

inline json threshold_to_json(const ThresholdResult& t) {
    return json{{"P", t.P},
                {"analytic_bound", t.analytic_bound},
                {"inputs", {{"C", rat_to_json(t.C)}, {"m", t.m}, {"weight", t.k}, {"n1", t.N1}}},
                {"A_m", {{"base", t.m}, {"exponent", rat_to_json(t.exponent)}}}};
}

inline json boundfit_to_json(const BoundFit& b) {
    json out{{"exponent", rat_to_json(b.exponent)},
             {"argmax", b.argmax},
             {"max_abs", rat_to_json(b.max_abs)}};
    if (b.candidate) out["candidate_C"] = rat_to_json(*b.candidate);
    if (b.holds) out["holds"] = *b.holds;
    if (b.first_violation) out["first_violation"] = *b.first_violation;
    return out;
}

inline json denom_report_to_json(const DenomReport& r) {
    json profiles = json::object();
    for (const auto& [p, seq] : r.profiles) profiles[std::to_string(p)] = seq;
    json lcms = json::array();
    for (const auto& l : r.running_lcm) lcms.push_back(l.get_str());
    json out{{"nmax", r.nmax},
             {"window", r.window},
             {"primes", r.primes},
             {"profiles", std::move(profiles)},
             {"running_lcm", std::move(lcms)},
             {"c_candidate", r.c_candidate.get_str()},
             {"classification", r.bounded ? "bounded_up_to_N" : "growth_detected"}};
    if (!r.bounded) {
        json witnesses = json::object();
        for (const auto& [p, w] : r.growth_witnesses) witnesses[std::to_string(p)] = w;
        out["growth"] = json{{"prime", r.growth_prime}, {"witnesses", std::move(witnesses)}};
    }
    return out;
}

}  // namespace asdforge::io
