#pragma once

#include <algorithm>
#include <complex>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <regex>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "faw/error.hpp"
#include "faw/hilbert.hpp"
#include "faw/measures.hpp"
#include "faw/moments.hpp"

// JSON descriptions of measures, representations, vectors, words and
// polynomials. Parsing is strict: unknown keys and wrong types are
// ValidationErrors. Every to_json output re-parses to an equal value.
namespace faw::io {

using json = nlohmann::json;

namespace detail {

inline void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& what) {
    if (!j.is_object()) throw ValidationError(what + ": expected a JSON object");
    for (const auto& [key, _] : j.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
            throw ValidationError(what + ": unknown key \"" + key + "\"");
        }
    }
}

inline const json& field(const json& j, const char* key, const std::string& what) {
    auto it = j.find(key);
    if (it == j.end()) throw ValidationError(what + ": missing key \"" + key + "\"");
    return *it;
}

inline double number(const json& j, const std::string& what) {
    if (!j.is_number()) throw ValidationError(what + ": expected a number");
    return j.get<double>();
}

inline long integer(const json& j, const std::string& what) {
    if (!j.is_number_integer()) throw ValidationError(what + ": expected an integer");
    return j.get<long>();
}

inline cplx complex_number(const json& j, const std::string& what) {
    if (j.is_number()) return j.get<double>();
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    throw ValidationError(what + ": expected a number or a [re, im] pair");
}

inline json complex_json(cplx z) {
    if (z.imag() == 0.0) return z.real();
    return json::array({z.real(), z.imag()});
}

inline std::string type_of(const json& j, const std::string& what) {
    const json& t = field(j, "type", what);
    if (!t.is_string()) throw ValidationError(what + ": \"type\" must be a string");
    return t.get<std::string>();
}

// "name(a)" or "name(a,b)" with numeric arguments.
inline bool match_call(const std::string& s, std::string& name, std::vector<double>& args) {
    static const std::regex re(R"(^\s*([a-z]+)\s*\(\s*([^()]*)\)\s*$)");
    std::smatch m;
    if (!std::regex_match(s, m, re)) return false;
    name = m[1];
    args.clear();
    std::stringstream ss(m[2]);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            args.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) return false;
        } catch (const std::exception&) {
            return false;
        }
    }
    return true;
}

} // namespace detail

// --- measures -----------------------------------------------------------------

/// Also accepts the shorthands "dirac", "pair(a)", "uniform(a)",
/// "uniform(a,h)" and "bernoulli(theta)".
inline SymmetricMeasure parse_measure(const json& j) {
    const std::string what = "measure spec";
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "dirac") return SymmetricMeasure::dirac();
        std::string name;
        std::vector<double> a;
        if (detail::match_call(s, name, a)) {
            if (name == "pair" && a.size() == 1) return SymmetricMeasure::symmetric_pair(a[0]);
            if (name == "bernoulli" && a.size() == 1) return SymmetricMeasure::bernoulli(a[0]);
            if (name == "uniform" && a.size() == 1) return SymmetricMeasure::uniform(a[0], a[0] / 1000.0);
            if (name == "uniform" && a.size() == 2) return SymmetricMeasure::uniform(a[0], a[1]);
        }
        throw ValidationError(what + ": unknown shorthand \"" + s + "\"");
    }
    const std::string type = detail::type_of(j, what);
    if (type == "atomic") {
        detail::check_keys(j, {"type", "pairs", "w0"}, what);
        std::vector<Atom> atoms;
        const json& pairs = detail::field(j, "pairs", what);
        if (!pairs.is_array()) throw ValidationError(what + ": \"pairs\" must be an array");
        for (const auto& p : pairs) {
            if (!p.is_array() || p.size() != 2) throw ValidationError(what + ": each pair must be [x, weight]");
            atoms.push_back({detail::number(p[0], what), detail::number(p[1], what)});
        }
        const double w0 = j.contains("w0") ? detail::number(j["w0"], what) : 0.0;
        return SymmetricMeasure::atomic(std::move(atoms), w0);
    }
    if (type == "grid") {
        detail::check_keys(j, {"type", "step", "values"}, what);
        const json& values = detail::field(j, "values", what);
        if (!values.is_array()) throw ValidationError(what + ": \"values\" must be an array");
        std::vector<double> v;
        for (const auto& x : values) v.push_back(detail::number(x, what));
        return SymmetricMeasure::grid(detail::number(detail::field(j, "step", what), what), std::move(v));
    }
    if (type == "bernoulli") {
        detail::check_keys(j, {"type", "theta"}, what);
        return SymmetricMeasure::bernoulli(detail::number(detail::field(j, "theta", what), what));
    }
    if (type == "power") {
        detail::check_keys(j, {"type", "base", "n"}, what);
        const long n = detail::integer(detail::field(j, "n", what), what);
        faw::detail::require(n >= 1 && n <= 1000000, what + ": \"n\" must be a positive integer");
        return SymmetricMeasure::power(parse_measure(detail::field(j, "base", what)), static_cast<int>(n));
    }
    throw ValidationError(what + ": unknown type \"" + type + "\"");
}

inline json to_json(const SymmetricMeasure& mu) {
    return std::visit(
        [](const auto& f) -> json {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, SymmetricMeasure::Atomic>) {
                json pairs = json::array();
                for (const auto& a : f.positive) pairs.push_back({a.x, a.weight});
                return {{"type", "atomic"}, {"pairs", pairs}, {"w0", f.w0}};
            } else if constexpr (std::is_same_v<T, SymmetricMeasure::Grid>) {
                return {{"type", "grid"}, {"step", f.step}, {"values", f.half_values}};
            } else if constexpr (std::is_same_v<T, SymmetricMeasure::Bernoulli>) {
                return {{"type", "bernoulli"}, {"theta", f.theta}};
            } else {
                return {{"type", "power"}, {"base", to_json(*f.base)}, {"n", f.n}};
            }
        },
        mu.form());
}

inline bool is_measure_spec(const json& j) {
    if (j.is_string()) return true;
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) return false;
    const auto t = j["type"].get<std::string>();
    return t == "atomic" || t == "grid" || t == "bernoulli" || t == "power";
}

// --- representations ----------------------------------------------------------

/// {"type":"finite","blocks":[w...],"trivial_dim":k}
/// {"type":"measure","measure":<measure>,"bernoulli_levels":K}
/// {"type":"sum","parts":[<rep>...]}
/// A bare measure spec is read as its multiplication representation.
inline Representation parse_representation(const json& j) {
    const std::string what = "representation spec";
    if (is_measure_spec(j)) return Representation::measure(parse_measure(j));
    const std::string type = detail::type_of(j, what);
    if (type == "finite") {
        detail::check_keys(j, {"type", "blocks", "trivial_dim"}, what);
        std::vector<double> blocks;
        if (j.contains("blocks")) {
            if (!j["blocks"].is_array()) throw ValidationError(what + ": \"blocks\" must be an array");
            for (const auto& w : j["blocks"]) blocks.push_back(detail::number(w, what));
        }
        long trivial = 0;
        if (j.contains("trivial_dim")) trivial = detail::integer(j["trivial_dim"], what);
        faw::detail::require(trivial >= 0, what + ": \"trivial_dim\" must be non-negative");
        return Representation::finite(std::move(blocks), static_cast<std::size_t>(trivial));
    }
    if (type == "measure") {
        detail::check_keys(j, {"type", "measure", "bernoulli_levels"}, what);
        long levels = 12;
        if (j.contains("bernoulli_levels")) levels = detail::integer(j["bernoulli_levels"], what);
        faw::detail::require(levels >= 1 && levels <= kMaxBernoulliLevels,
                             what + ": \"bernoulli_levels\" out of range");
        return Representation::measure(parse_measure(detail::field(j, "measure", what)), static_cast<int>(levels));
    }
    if (type == "sum") {
        detail::check_keys(j, {"type", "parts"}, what);
        const json& parts = detail::field(j, "parts", what);
        if (!parts.is_array() || parts.empty()) throw ValidationError(what + ": \"parts\" must be a non-empty array");
        Representation rep = parse_representation(parts[0]);
        for (std::size_t i = 1; i < parts.size(); ++i) rep = direct_sum(rep, parse_representation(parts[i]));
        return rep;
    }
    throw ValidationError(what + ": unknown type \"" + type + "\"");
}

inline json to_json(const Representation& rep) {
    json parts = json::array();
    for (const auto& c : rep.components()) {
        parts.push_back(std::visit(
            [](const auto& p) -> json {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, FiniteRep>) {
                    return {{"type", "finite"}, {"blocks", p.frequencies}, {"trivial_dim", p.trivial_dim}};
                } else {
                    return {{"type", "measure"}, {"measure", to_json(p.measure)},
                            {"bernoulli_levels", p.bernoulli_levels}};
                }
            },
            c));
    }
    if (parts.size() == 1) return parts[0];
    return {{"type", "sum"}, {"parts", parts}};
}

// --- vectors, words, polynomials ---------------------------------------------------

/// An array of numbers or [re, im] pairs, {"atom_values": [...]}, or one of
/// the strings "ones" and "e<k>" (k-th coordinate vector, 1-based).
inline RepVector parse_vector(const Representation& rep, const json& j, bool real) {
    const std::string what = "vector spec";
    std::vector<cplx> coords;
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        coords.assign(rep.dimension(), 0.0);
        if (s == "ones") {
            std::fill(coords.begin(), coords.end(), cplx(1.0));
        } else if (s.size() > 1 && s[0] == 'e' && s.find_first_not_of("0123456789", 1) == std::string::npos) {
            const auto k = std::stoul(s.substr(1));
            faw::detail::require(k >= 1 && k <= rep.dimension(), what + ": coordinate index out of range");
            coords[k - 1] = 1.0;
        } else {
            throw ValidationError(what + ": unknown shorthand \"" + s + "\"");
        }
    } else {
        const json* arr = &j;
        if (j.is_object()) {
            detail::check_keys(j, {"atom_values"}, what);
            arr = &detail::field(j, "atom_values", what);
        }
        if (!arr->is_array()) throw ValidationError(what + ": expected an array of coordinates");
        for (const auto& x : *arr) coords.push_back(detail::complex_number(x, what));
    }
    return real ? rep.real_vector(std::move(coords)) : rep.vector(std::move(coords));
}

inline json to_json(const RepVector& v) {
    json out = json::array();
    for (const auto& z : v.coords) out.push_back(detail::complex_json(z));
    return out;
}

inline Word parse_word(const Representation& rep, const json& j) {
    if (!j.is_array()) throw ValidationError("word spec: expected an array of vectors");
    std::vector<RepVector> letters;
    for (const auto& v : j) letters.push_back(parse_vector(rep, v, true));
    return Word(std::move(letters));
}

inline json to_json(const Word& w) {
    json out = json::array();
    for (const auto& l : w.letters()) out.push_back(to_json(l));
    return out;
}

/// [{"coefficient": c, "word": [...]}, ...]; a bare word is the polynomial 1 * word.
inline WordPolynomial parse_polynomial(const Representation& rep, const json& j) {
    const std::string what = "polynomial spec";
    if (!j.is_array()) throw ValidationError(what + ": expected an array");
    if (j.empty() || !(j[0].is_object() && j[0].contains("word"))) return WordPolynomial(parse_word(rep, j));
    WordPolynomial p;
    for (const auto& term : j) {
        detail::check_keys(term, {"coefficient", "word"}, what);
        p.add(parse_word(rep, detail::field(term, "word", what)),
              detail::complex_number(detail::field(term, "coefficient", what), what));
    }
    return p;
}

inline json to_json(const WordPolynomial& p) {
    json out = json::array();
    for (const auto& [w, c] : p.terms()) out.push_back({{"coefficient", detail::complex_json(c)}, {"word", to_json(w)}});
    return out;
}

// --- loading ---------------------------------------------------------------------

/// Inline JSON text, a measure shorthand, a vector shorthand, or a path to a
/// JSON file.
inline json load(const std::string& arg) {
    const auto first = arg.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[' || arg[first] == '"')) {
        try {
            return json::parse(arg);
        } catch (const json::parse_error& e) {
            throw ValidationError(std::string("malformed JSON argument: ") + e.what());
        }
    }
    std::string name;
    std::vector<double> args;
    if (arg == "dirac" || detail::match_call(arg, name, args)) return json(arg);
    std::ifstream in(arg);
    if (!in) throw ValidationError("cannot open spec file \"" + arg + "\"");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("malformed JSON in \"" + arg + "\": " + e.what());
    }
}

} // namespace faw::io
