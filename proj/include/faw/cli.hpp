#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "faw/combinatorics.hpp"
#include "faw/error.hpp"
#include "faw/fock.hpp"
#include "faw/hilbert.hpp"
#include "faw/io.hpp"
#include "faw/measures.hpp"
#include "faw/moments.hpp"
#include "faw/random.hpp"
#include "faw/sampling.hpp"

namespace faw::cli {

using json = nlohmann::json;

enum class Format { csv, json, table };

/// Exit status: 0 success, 1 validation / parse / cap error, 2 numeric failure.
enum Status : int { kOk = 0, kInvalid = 1, kNumeric = 2 };

using Cell = std::variant<long long, double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

/// What a command produces. `document` replaces the table when set.
struct Result {
    Table table;
    std::optional<json> document;
    Status status = kOk;
    std::string failure; // why status is kNumeric
};

struct RunConfig {
    std::string command;
    std::optional<std::string> out;
    std::optional<Format> format;
    std::optional<std::uint64_t> seed;
    double tolerance = 1e-10;
    bool dump_spec = false;
};

// --- rendering ---------------------------------------------------------------

namespace detail {

inline std::string format_double(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

inline std::string render_cell(const Cell& c, int digits) {
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d, digits);
    return std::get<std::string>(c);
}

inline std::string csv_field(std::string s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + '"';
}

inline json cell_json(const Cell& c) {
    if (const auto* i = std::get_if<long long>(&c)) return *i;
    if (const auto* d = std::get_if<double>(&c)) return *d;
    return std::get<std::string>(c);
}

} // namespace detail

inline std::string render(const Result& r, Format fmt) {
    std::string out;
    if (r.document) return r.document->dump(2) + "\n";
    const Table& t = r.table;
    switch (fmt) {
    case Format::csv:
        for (std::size_t c = 0; c < t.columns.size(); ++c) out += (c ? "," : "") + detail::csv_field(t.columns[c]);
        out += '\n';
        for (const auto& row : t.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                out += (c ? "," : "") + detail::csv_field(detail::render_cell(row[c], 17));
            }
            out += '\n';
        }
        return out;
    case Format::json: {
        json rows = json::array();
        for (const auto& row : t.rows) {
            json obj = json::object();
            for (std::size_t c = 0; c < row.size(); ++c) obj[t.columns[c]] = detail::cell_json(row[c]);
            rows.push_back(std::move(obj));
        }
        return rows.dump(2) + "\n";
    }
    case Format::table: {
        if (t.rows.size() == 1 && t.columns.size() == 1) return detail::render_cell(t.rows[0][0], 17) + "\n";
        std::vector<std::vector<std::string>> cells;
        cells.push_back(t.columns);
        for (const auto& row : t.rows) {
            std::vector<std::string> line;
            for (const auto& c : row) line.push_back(detail::render_cell(c, 12));
            cells.push_back(std::move(line));
        }
        std::vector<std::size_t> width(t.columns.size(), 0);
        for (const auto& line : cells) {
            for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
        }
        for (const auto& line : cells) {
            std::string text;
            for (std::size_t c = 0; c < line.size(); ++c) {
                if (c) text += "  ";
                text += std::string(width[c] - line[c].size(), ' ') + line[c];
            }
            out += text + '\n';
        }
        return out;
    }
    }
    return out;
}

// --- commands ------------------------------------------------------------------

namespace detail {

inline std::vector<double> scan_points(double t0, double t1, long steps) {
    faw::detail::require(std::isfinite(t0) && std::isfinite(t1) && t1 > t0, "scan: need finite t0 < t1");
    faw::detail::require(steps >= 1 && steps <= 10000000, "scan: steps must be in [1, 1e7]");
    std::vector<double> ts;
    ts.reserve(static_cast<std::size_t>(steps) + 1);
    for (long i = 0; i <= steps; ++i) ts.push_back(t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(steps));
    return ts;
}

inline Cell big(const BigInt& v) {
    if (v <= std::numeric_limits<long long>::max()) return v.convert_to<long long>();
    return v.str();
}

inline std::uint64_t resolve_seed(const RunConfig& cfg, const std::optional<std::uint64_t>& positional) {
    if (positional && cfg.seed && *positional != *cfg.seed) {
        throw ValidationError("seed given twice with different values");
    }
    if (positional) return *positional;
    if (cfg.seed) return *cfg.seed;
    throw ValidationError(cfg.command + ": a seed is required (positional or --seed)");
}

inline std::vector<double> parse_s_grid(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double s = 0.0;
        try {
            s = std::stod(item, &used);
        } catch (const std::exception&) {
            throw ValidationError("s-grid: \"" + item + "\" is not a number");
        }
        faw::detail::require(used == item.size(), "s-grid: \"" + item + "\" is not a number");
        faw::detail::require(s > 0.0 && s <= 1.0, "s-grid: every s must lie in (0, 1]");
        out.push_back(s);
    }
    faw::detail::require(!out.empty(), "s-grid: empty list");
    return out;
}

inline void fail(Result& r, const std::string& why) {
    if (r.status == kOk) r.failure = why;
    r.status = kNumeric;
}

} // namespace detail

inline Result cmd_nc_count(int p) {
    Result r;
    r.table.columns = {"catalan"};
    const std::size_t count = enumerate_nc_pairings(p).size();
    const BigInt c = catalan(p);
    if (BigInt(count) != c) detail::fail(r, "enumeration count differs from the Catalan number");
    r.table.rows.push_back({detail::big(c)});
    return r;
}

inline Result cmd_nc_list(int p) {
    Result r;
    r.table.columns = {"index", "pairing"};
    long long i = 0;
    for (const auto& pi : enumerate_nc_pairings(p)) r.table.rows.push_back({++i, pi.to_string()});
    return r;
}

inline Result cmd_moment(const Representation& rep, const WordPolynomial& p) {
    Result r;
    r.table.columns = {"re", "im", "abs"};
    const cplx v = moment_of_polynomial(rep, p);
    r.table.rows.push_back({v.real(), v.imag(), std::abs(v)});
    return r;
}

inline Result cmd_semicircle_table(int p_max, double tol) {
    faw::detail::require(p_max >= 1, "semicircle-table: p_max must be >= 1");
    faw::detail::require(2 * p_max <= kDefaultWordLengthCap,
                         "semicircle-table: p_max above the word-length cap / 2 = " +
                             std::to_string(kDefaultWordLengthCap / 2));
    Result r;
    r.table.columns = {"p", "catalan", "moment"};
    const Representation rep = Representation::finite({}, 1);
    const RepVector xi = rep.real_vector({1.0});
    for (int p = 1; p <= p_max; ++p) {
        const Word w(std::vector<RepVector>(static_cast<std::size_t>(2 * p), xi));
        const double m = quasi_free_moment(rep, w).real();
        const BigInt c = catalan(p);
        const double expected = std::ldexp(c.convert_to<double>(), -2 * p);
        if (std::abs(m - expected) > tol * expected) detail::fail(r, "moment differs from C_p / 4^p");
        r.table.rows.push_back({static_cast<long long>(p), detail::big(c), m});
    }
    return r;
}

inline Result cmd_mixing_scan(const Representation& rep, const WordPolynomial& x, double t0, double t1, long steps) {
    Result r;
    r.table.columns = {"t", "re", "abs"};
    for (double t : detail::scan_points(t0, t1, steps)) {
        const cplx v = mixing_correlation(rep, x, x, t);
        r.table.rows.push_back({t, v.real(), std::abs(v)});
    }
    return r;
}

inline Result cmd_fourier_scan(const SymmetricMeasure& mu, double t0, double t1, long steps) {
    Result r;
    r.table.columns = {"t", "re", "abs"};
    for (double t : detail::scan_points(t0, t1, steps)) {
        const double v = fourier(mu, t);
        r.table.rows.push_back({t, v, std::abs(v)});
    }
    return r;
}

inline Result cmd_conv_power(const SymmetricMeasure& mu, int n, Format fmt) {
    faw::detail::require(n >= 1, "conv-power: n must be >= 1");
    Result r;
    const SymmetricMeasure result = conv_power(mu, n);
    if (fmt == Format::json) {
        r.document = io::to_json(result);
        return r;
    }
    if (!result.is_atomic() && !result.is_grid()) {
        throw ValidationError("conv-power: this measure has no finite node list; use --format json");
    }
    const DiscreteNodes nodes = discretize(result);
    r.table.columns = {"x", "weight"};
    for (std::size_t j = 0; j < nodes.x.size(); ++j) r.table.rows.push_back({nodes.x[j], nodes.weight[j]});
    return r;
}

inline Result cmd_wiener(const SymmetricMeasure& mu, double T) {
    Result r;
    r.table.columns = {"wiener_average"};
    r.table.rows.push_back({wiener_average(mu, T)});
    return r;
}

inline Result cmd_transversality(const Representation& rep, int N, const std::vector<double>& s_grid, long trials,
                                 std::uint64_t seed, double tol) {
    faw::detail::require(trials >= 1, "transversality-test: trials must be >= 1");
    const Representation doubled = direct_sum(rep, rep);
    const TruncatedFock F(doubled, N);
    Rng rng(seed);
    // Draw all vectors first so the stream does not depend on the s grid.
    std::vector<std::vector<FockVector>> zetas(static_cast<std::size_t>(N) + 1);
    for (int k = 0; k <= N; ++k) {
        for (long i = 0; i < trials; ++i) zetas[static_cast<std::size_t>(k)].push_back(random_copy1_fock_vector(F, k, rng));
    }
    Result r;
    r.table.columns = {"s", "level", "trials", "max_excess", "max_abs_gap", "ok"};
    for (double s : s_grid) {
        const FockOperator as = deformation_pair(F, s).alpha;
        const FockOperator a2s = deformation_pair(F, 2.0 * s).alpha;
        for (int k = 0; k <= N; ++k) {
            double excess = -std::numeric_limits<double>::infinity();
            double gap = 0.0;
            for (const auto& z : zetas[static_cast<std::size_t>(k)]) {
                const auto g = transversality_gap(F, z, as, a2s);
                excess = std::max(excess, g.lhs - g.rhs);
                gap = std::max(gap, std::abs(g.lhs - g.rhs));
            }
            // Equality is expected on levels 0 and 1.
            const bool ok = excess <= tol && (k > 1 || gap <= tol);
            if (!ok) detail::fail(r, "transversality inequality violated");
            r.table.rows.push_back({s, static_cast<long long>(k), static_cast<long long>(trials), excess, gap,
                                    static_cast<long long>(ok)});
        }
    }
    return r;
}

inline Result cmd_freeness(const Representation& rep, int max_length, long trials, std::uint64_t seed, double tol) {
    faw::detail::require(max_length >= 1, "freeness-test: max-length must be >= 1");
    faw::detail::require(max_length <= kDefaultWordLengthCap, "freeness-test: max-length above the word-length cap");
    faw::detail::require(trials >= 1, "freeness-test: trials must be >= 1");
    const Representation doubled = direct_sum(rep, rep);
    const TruncatedFock F(doubled, max_length);
    Rng rng(seed);
    Result r;
    r.table.columns = {"trial", "copies", "lengths", "defect", "fock_defect"};
    for (long trial = 1; trial <= trials; ++trial) {
        // Random composition of a total length in [1, max_length].
        const int total = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_length)));
        std::vector<int> lengths;
        for (int left = total; left > 0;) {
            const int l = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(left)));
            lengths.push_back(l);
            left -= l;
        }
        int copy = 1 + static_cast<int>(rng.below(2));
        std::vector<TaggedPolynomial> factors;
        std::string copies, lens;
        for (int l : lengths) {
            const Word w = random_copy_word(doubled, rep, copy, static_cast<std::size_t>(l), rng);
            factors.push_back({copy, centered(doubled, WordPolynomial(w))});
            copies += std::to_string(copy);
            lens += (lens.empty() ? "" : "-") + std::to_string(l);
            copy = 3 - copy;
        }
        const double defect = freeness_defect(doubled, factors);
        WordPolynomial prod = WordPolynomial::unit();
        for (const auto& f : factors) prod = prod * f.poly;
        const double fock_defect = std::abs(fock_moment_of_polynomial(F, prod));
        if (defect > tol || fock_defect > tol || std::abs(defect - fock_defect) > tol) {
            detail::fail(r, "alternating centered product does not vanish");
        }
        r.table.rows.push_back({static_cast<long long>(trial), copies, lens, defect, fock_defect});
    }
    return r;
}

inline Result cmd_fock_vs_formula(const Representation& rep, int N, long trials, std::uint64_t seed, double tol) {
    faw::detail::require(trials >= 1, "fock-vs-formula: trials must be >= 1");
    faw::detail::require(N <= kDefaultWordLengthCap, "fock-vs-formula: N above the word-length cap");
    const TruncatedFock F(rep, N);
    Rng rng(seed);
    Result r;
    r.table.columns = {"trial", "n", "formula_re", "formula_im", "fock_re", "fock_im", "abs_diff"};
    for (long trial = 1; trial <= trials; ++trial) {
        const auto n = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(N) + 1));
        const Word w = random_word(rep, n, rng);
        const cplx a = quasi_free_moment(rep, w);
        const cplx b = fock_moment(F, w);
        const double diff = std::abs(a - b);
        if (diff > tol * (1.0 + std::abs(a))) detail::fail(r, "Fock oracle disagrees with the pairing formula");
        r.table.rows.push_back({static_cast<long long>(trial), static_cast<long long>(n), a.real(), a.imag(), b.real(),
                                b.imag(), diff});
    }
    return r;
}

// --- argument wiring -------------------------------------------------------------

inline constexpr const char* kRngHelp =
    "Randomness: every randomized command takes a mandatory seed (positional or --seed). "
    "The generator is std::mt19937_64 seeded with that value; uniform doubles use the top 53 bits "
    "of each draw, so output is bit-reproducible across platforms.";

/// Parses argv, runs one command and writes its output. Returns the exit status.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Moments, Fock-space oracles and spectral measures for free Araki-Woods factors", "faw"};
    app.footer(kRngHelp);
    app.require_subcommand(1);
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.set_config("--config", "", "Read options from a key=value file (command-line flags take precedence)");

    RunConfig cfg;
    std::string out_path, format_name;
    std::uint64_t seed_flag = 0;
    app.add_option("--out", out_path, "Write output to this path instead of standard output");
    app.add_option("--format", format_name, "Output format")->check(CLI::IsMember({"csv", "json", "table"}));
    auto* seed_opt = app.add_option("--seed", seed_flag, "Seed for randomized commands");
    app.add_option("--tolerance", cfg.tolerance, "Tolerance for numeric checks")->check(CLI::PositiveNumber);
    app.add_flag("--dump-spec", cfg.dump_spec, "Print the parsed input specs as normalized JSON and exit");

    // Positional storage shared by all subcommands.
    std::string spec_a, spec_b, s_grid;
    int p = 0, n = 0, N = 0, max_length = 0;
    long steps = 0, trials = 0;
    double t0 = 0.0, t1 = 0.0, T = 0.0;
    std::uint64_t seed_pos = 0;
    CLI::Option* seed_pos_opt = nullptr;

    auto sub = [&](const char* name, const char* help) {
        auto* s = app.add_subcommand(name, help);
        s->fallthrough();
        s->positionals_at_end(false);
        return s;
    };
    auto* nc_count = sub("nc-count", "Catalan number C_p via enumeration of non-crossing pairings");
    nc_count->add_option("p", p)->required()->check(CLI::NonNegativeNumber);
    auto* nc_list = sub("nc-list", "List the non-crossing pairings of {1..2p} in lexicographic order");
    nc_list->add_option("p", p)->required()->check(CLI::NonNegativeNumber);
    auto* moment = sub("moment", "Free quasi-free state of a word or word polynomial");
    moment->add_option("rep", spec_a, "Representation spec (JSON text or file)")->required();
    moment->add_option("word", spec_b, "Word or polynomial spec (JSON text or file)")->required();
    auto* semicircle = sub("semicircle-table", "phi(s(xi)^{2p}) for a unit vector against C_p / 4^p");
    semicircle->add_option("p_max", p)->required();
    auto* mixing = sub("mixing-scan", "t, phi(sigma_t(x) x) over a t grid");
    mixing->add_option("rep", spec_a, "Representation or measure spec")->required();
    mixing->add_option("word", spec_b, "Word or polynomial spec")->required();
    mixing->add_option("t0", t0)->required();
    mixing->add_option("t1", t1)->required();
    mixing->add_option("steps", steps)->required();
    auto* fscan = sub("fourier-scan", "t, mu~(t) over a t grid");
    fscan->add_option("measure", spec_a)->required();
    fscan->add_option("t0", t0)->required();
    fscan->add_option("t1", t1)->required();
    fscan->add_option("steps", steps)->required();
    auto* convp = sub("conv-power", "n-fold convolution power of a measure");
    convp->add_option("measure", spec_a)->required();
    convp->add_option("n", n)->required();
    auto* wiener = sub("wiener", "Wiener average (1/2T) int_{-T}^{T} |mu~|^2");
    wiener->add_option("measure", spec_a)->required();
    wiener->add_option("T", T)->required();
    auto* trans = sub("transversality-test", "|z - a_{2s} z| <= 2 |a_s z - P a_s z| on random copy-1 Fock vectors");
    trans->add_option("rep", spec_a, "Representation H; the test runs on H + H")->required();
    trans->add_option("N", N)->required();
    trans->add_option("s-grid", s_grid, "Comma-separated values in (0, 1]")->required();
    trans->add_option("trials", trials)->required();
    auto* trans_seed = trans->add_option("seed", seed_pos);
    auto* freeness = sub("freeness-test", "Alternating centered products from the two copies of H + H");
    freeness->add_option("rep", spec_a, "Representation H; the test runs on H + H")->required();
    freeness->add_option("max-length", max_length)->required();
    freeness->add_option("trials", trials)->required();
    auto* free_seed = freeness->add_option("seed", seed_pos);
    auto* fvf = sub("fock-vs-formula", "Pairing formula against the truncated Fock space on random words");
    fvf->add_option("rep", spec_a)->required();
    fvf->add_option("N", N)->required();
    fvf->add_option("trials", trials)->required();
    auto* fvf_seed = fvf->add_option("seed", seed_pos);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kInvalid;
    }

    CLI::App* chosen = app.get_subcommands().front();
    cfg.command = chosen->get_name();
    if (!out_path.empty()) cfg.out = out_path;
    if (!format_name.empty()) {
        cfg.format = format_name == "csv" ? Format::csv : format_name == "json" ? Format::json : Format::table;
    }
    if (seed_opt->count() > 0) cfg.seed = seed_flag;
    if (chosen == trans) seed_pos_opt = trans_seed;
    if (chosen == freeness) seed_pos_opt = free_seed;
    if (chosen == fvf) seed_pos_opt = fvf_seed;
    std::optional<std::uint64_t> positional_seed;
    if (seed_pos_opt && seed_pos_opt->count() > 0) positional_seed = seed_pos;

    const bool scan = chosen == mixing || chosen == fscan;
    const Format fmt = cfg.format.value_or(scan ? Format::csv : Format::table);

    Result result;
    try {
        const auto measure_arg = [&] { return io::parse_measure(io::load(spec_a)); };
        const auto rep_arg = [&] { return io::parse_representation(io::load(spec_a)); };

        if (cfg.dump_spec) {
            json doc = json::object();
            if (chosen == fscan || chosen == convp || chosen == wiener) {
                doc["measure"] = io::to_json(measure_arg());
            } else if (chosen == moment || chosen == mixing) {
                const Representation rep = rep_arg();
                doc["rep"] = io::to_json(rep);
                doc["polynomial"] = io::to_json(io::parse_polynomial(rep, io::load(spec_b)));
            } else if (chosen == trans || chosen == freeness || chosen == fvf) {
                doc["rep"] = io::to_json(rep_arg());
            }
            result.document = std::move(doc);
        } else if (chosen == nc_count) {
            result = cmd_nc_count(p);
        } else if (chosen == nc_list) {
            result = cmd_nc_list(p);
        } else if (chosen == moment) {
            const Representation rep = rep_arg();
            result = cmd_moment(rep, io::parse_polynomial(rep, io::load(spec_b)));
        } else if (chosen == semicircle) {
            result = cmd_semicircle_table(p, cfg.tolerance);
        } else if (chosen == mixing) {
            const Representation rep = rep_arg();
            result = cmd_mixing_scan(rep, io::parse_polynomial(rep, io::load(spec_b)), t0, t1, steps);
        } else if (chosen == fscan) {
            result = cmd_fourier_scan(measure_arg(), t0, t1, steps);
        } else if (chosen == convp) {
            result = cmd_conv_power(measure_arg(), n, fmt);
        } else if (chosen == wiener) {
            result = cmd_wiener(measure_arg(), T);
        } else if (chosen == trans) {
            const auto seed = detail::resolve_seed(cfg, positional_seed);
            result = cmd_transversality(rep_arg(), N, detail::parse_s_grid(s_grid), trials, seed, cfg.tolerance);
        } else if (chosen == freeness) {
            const auto seed = detail::resolve_seed(cfg, positional_seed);
            result = cmd_freeness(rep_arg(), max_length, trials, seed, cfg.tolerance);
        } else if (chosen == fvf) {
            const auto seed = detail::resolve_seed(cfg, positional_seed);
            result = cmd_fock_vs_formula(rep_arg(), N, trials, seed, cfg.tolerance);
        }
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalid;
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kNumeric;
    } catch (const std::bad_alloc&) {
        err << "error: out of memory\n";
        return kNumeric;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInvalid;
    }

    const std::string text = render(result, fmt);
    if (cfg.out) {
        std::ofstream file(*cfg.out, std::ios::binary);
        if (!file) {
            err << "error: cannot write \"" << *cfg.out << "\"\n";
            return kInvalid;
        }
        file << text;
    } else {
        out << text;
    }
    if (result.status != kOk) err << "check failed: " << result.failure << '\n';
    return result.status;
}

} // namespace faw::cli
