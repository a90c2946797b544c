// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <Eigen/Dense>

#include "faw/combinatorics.hpp"
#include "faw/fock.hpp"
#include "faw/hilbert.hpp"
#include "faw/measures.hpp"
#include "faw/moments.hpp"
#include "faw/random.hpp"
#include "faw/sampling.hpp"

#ifndef FAW_CLI_PATH
#error "FAW_CLI_PATH must point at the faw executable"
#endif

using namespace faw;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

double opnorm(const Eigen::MatrixXcd& m) { return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0); }

std::vector<Representation> oracle_reps() {
    return {Representation::finite({}, 2), Representation::finite({1.0}),
            Representation::measure(SymmetricMeasure::atomic({{0.7, 0.3}}, 0.4))};
}

WordPolynomial s(const RepVector& v) { return WordPolynomial(Word({v})); }

// Brute-force count: all perfect matchings of {1..2p}, crossing ones discarded.
long brute_force_nc_count(int p) {
    long count = 0;
    std::vector<IndexPair> cur;
    std::function<void(std::vector<int>)> rec = [&](std::vector<int> open) {
        if (open.empty()) {
            for (const auto& x : cur) {
                for (const auto& y : cur) {
                    if (x.first < y.first && y.first < x.second && x.second < y.second) return;
                }
            }
            ++count;
            return;
        }
        for (std::size_t i = 1; i < open.size(); ++i) {
            std::vector<int> rest;
            for (std::size_t j = 1; j < open.size(); ++j) {
                if (j != i) rest.push_back(open[j]);
            }
            cur.push_back({open[0], open[i]});
            rec(rest);
            cur.pop_back();
        }
    };
    std::vector<int> all;
    for (int i = 1; i <= 2 * p; ++i) all.push_back(i);
    rec(all);
    return count;
}

Outcome catalan_counts() {
    std::vector<BigInt> oracle;
    for (int p = 0; p <= 10; ++p) {
        if (p <= 6) {
            oracle.push_back(brute_force_nc_count(p));
        } else {
            BigInt c = 0;
            for (int k = 0; k < p; ++k) c += oracle[k] * oracle[p - 1 - k];
            oracle.push_back(c);
        }
    }
    for (int p = 0; p <= 10; ++p) {
        const BigInt n = enumerate_nc_pairings(p).size();
        if (n != catalan(p) || n != oracle[p]) return {false, "mismatch at p = " + std::to_string(p)};
    }
    return {oracle[10] == 16796, "C_10 = " + catalan(10).str()};
}

Outcome oracle_equivalence() {
    Rng rng(20260101);
    double worst = 0.0;
    int words = 0;
    for (const auto& rep : oracle_reps()) {
        const TruncatedFock F(rep, 6);
        for (int i = 0; i < 70; ++i, ++words) {
            const Word w = random_word(rep, rng.below(7), rng);
            const cplx a = quasi_free_moment(rep, w);
            worst = std::max(worst, std::abs(a - fock_moment(F, w)) / (1.0 + std::abs(a)));
        }
    }
    return {words >= 200 && worst <= 1e-10, std::to_string(words) + " words, max scaled diff " + sci(worst)};
}

Outcome semicircle() {
    Rng rng(3);
    const auto rep = Representation::finite({}, 2);
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
        const RepVector xi = random_real_vector(rep, rng);
        const double r = norm(rep, xi);
        for (int p = 1; p <= 8; ++p) {
            const Word w(std::vector<RepVector>(2 * static_cast<std::size_t>(p), xi));
            const double ref = catalan(p).convert_to<double>() * std::pow(r / 2.0, 2 * p);
            worst = std::max(worst, std::abs(quasi_free_moment(rep, w) - ref) / ref);
        }
    }
    return {worst <= 1e-12, "max relative error " + sci(worst)};
}

Outcome covariance() {
    Rng rng(4);
    double worst = 0.0;
    const auto reps = oracle_reps();
    for (int i = 0; i < 50; ++i) {
        const auto& rep = reps[static_cast<std::size_t>(i) % reps.size()];
        const auto a = random_real_vector(rep, rng), b = random_real_vector(rep, rng);
        worst = std::max(worst, std::abs(quasi_free_moment(rep, Word({a, b})) - 0.25 * rep.inner_U(a, b)));
    }
    return {worst <= 1e-12, "50 pairs, max diff " + sci(worst)};
}

Outcome modular_invariance() {
    Rng rng(5);
    double worst = 0.0;
    const auto reps = oracle_reps();
    for (int i = 0; i < 50; ++i) {
        const auto& rep = reps[static_cast<std::size_t>(i) % reps.size()];
        const Word w = random_word(rep, 2 + rng.below(5), rng);
        const cplx base = quasi_free_moment(rep, w);
        for (int j = 0; j < 10; ++j) {
            const double t = rng.uniform(-10.0, 10.0);
            worst = std::max(worst, std::abs(quasi_free_moment(rep, modular_flow_word(rep, w, t)) - base));
        }
    }
    return {worst <= 1e-12, "500 word/t pairs, max diff " + sci(worst)};
}

Outcome deformation() {
    const auto h = Representation::finite({1.0});
    const auto hh = direct_sum(h, h);
    const TruncatedFock F(hh, 3);
    const auto D = static_cast<Eigen::Index>(F.dimension());
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(D, D);
    const Eigen::MatrixXcd beta = deformation_pair(F, 0.5).beta.matrix;
    const Eigen::MatrixXcd Ut = modular_unitary(F, 0.9).matrix;
    double worst = opnorm(beta * beta - I);
    const std::vector<double> grid{-1.0, -0.35, 0.2, 0.5, 1.0, 1.7};
    for (double a : grid) {
        const Eigen::MatrixXcd as = deformation_pair(F, a).alpha.matrix;
        worst = std::max(worst, opnorm(beta * as - deformation_pair(F, -a).alpha.matrix * beta));
        worst = std::max(worst, opnorm(as * Ut - Ut * as));
        for (double b : grid) {
            worst = std::max(worst, opnorm(as * deformation_pair(F, b).alpha.matrix -
                                           deformation_pair(F, a + b).alpha.matrix));
        }
    }
    Rng rng(6);
    const Eigen::MatrixXcd a1 = deformation_pair(F, 1.0).alpha.matrix;
    for (int i = 0; i < 5; ++i) {
        const RepVector xi = random_real_vector(h, rng);
        const Eigen::MatrixXcd lhs = a1 * s_op(F, embed_copy(hh, xi, 1)).matrix * a1.adjoint();
        worst = std::max(worst, opnorm(lhs - s_op(F, embed_copy(hh, xi, 2)).matrix));
    }
    return {worst <= 1e-10, "max relation norm " + sci(worst)};
}

Outcome transversality() {
    const auto h = Representation::finite({1.0});
    const auto hh = direct_sum(h, h);
    const TruncatedFock F(hh, 3);
    Rng rng(7);
    double excess = -1.0, gap1 = 0.0;
    for (int si = 1; si <= 9; ++si) {
        const double s = 0.1 * si;
        const FockOperator as = deformation_pair(F, s).alpha, a2s = deformation_pair(F, 2.0 * s).alpha;
        for (int level = 0; level <= 3; ++level) {
            for (int i = 0; i < 100; ++i) {
                const auto g = transversality_gap(F, random_copy1_fock_vector(F, level, rng), as, a2s);
                excess = std::max(excess, g.lhs - g.rhs);
                if (level == 1) gap1 = std::max(gap1, std::abs(g.lhs - g.rhs));
            }
        }
        // Level-1 basis words of copy 1.
        for (std::size_t i = F.offset(1); i < F.offset(2); ++i) {
            if (!F.is_copy1_word(i)) continue;
            FockVector v = FockVector::Zero(static_cast<Eigen::Index>(F.dimension()));
            v(static_cast<Eigen::Index>(i)) = 1.0;
            const auto g = transversality_gap(F, v, as, a2s);
            gap1 = std::max(gap1, std::abs(g.lhs - g.rhs));
        }
    }
    return {excess <= 1e-10 && gap1 <= 1e-10,
            "max(lhs - rhs) " + sci(excess) + ", level-1 |lhs - rhs| " + sci(gap1)};
}

Outcome freeness() {
    const auto h = Representation::finite({1.0});
    const auto hh = direct_sum(h, h);
    const TruncatedFock F(hh, 6);
    Rng rng(8);
    double worst = 0.0, cross = 0.0;
    int cases = 0;
    for (int total = 1; total <= 6; ++total) {
        // Every composition of `total`, encoded by the cut points in a bitmask.
        for (unsigned mask = 0; mask < (1u << (total - 1)); ++mask) {
            std::vector<int> lengths{1};
            for (int b = 0; b < total - 1; ++b) {
                if (mask & (1u << b)) lengths.push_back(1);
                else ++lengths.back();
            }
            for (int start = 1; start <= 2; ++start) {
                for (int sample = 0; sample < 3; ++sample, ++cases) {
                    std::vector<TaggedPolynomial> factors;
                    WordPolynomial prod = WordPolynomial::unit();
                    int copy = start;
                    for (int l : lengths) {
                        const auto p = centered(hh, WordPolynomial(random_copy_word(hh, h, copy, l, rng)));
                        factors.push_back({copy, p});
                        prod = prod * p;
                        copy = 3 - copy;
                    }
                    const double d = freeness_defect(hh, factors);
                    worst = std::max(worst, d);
                    cross = std::max(cross, std::abs(d - std::abs(fock_moment_of_polynomial(F, prod))));
                }
            }
        }
    }
    return {worst <= 1e-10 && cross <= 1e-10, std::to_string(cases) + " alternating products, max defect " +
                                                  sci(worst) + ", Fock cross-check " + sci(cross)};
}

Outcome convolution_duality() {
    Rng rng(9);
    const auto mu = SymmetricMeasure::atomic({{0.3, 0.15}, {1.1, 0.2}, {2.0, 0.05}}, 0.2);
    const auto rep = Representation::measure(mu);
    const RepVector one = rep.real_vector(std::vector<cplx>(rep.dimension(), 1.0));
    double worst_pow = 0.0, worst_tensor = 0.0;
    for (int n = 1; n <= 4; ++n) {
        const auto pw = conv_power(mu, n);
        const std::vector<RepVector> ones(static_cast<std::size_t>(n), one);
        for (int i = 0; i < 100; ++i) {
            const double t = rng.uniform(-50.0, 50.0);
            const double f = fourier(pw, t);
            worst_pow = std::max(worst_pow, std::abs(f - std::pow(fourier(mu, t), n)));
            worst_tensor = std::max(worst_tensor, std::abs(tensor_power_correlation(rep, ones, ones, t) - f));
        }
    }
    return {worst_pow <= 1e-12 && worst_tensor <= 1e-10,
            "power " + sci(worst_pow) + ", tensor correlation " + sci(worst_tensor)};
}

Outcome viete_erdos() {
    const auto b2 = SymmetricMeasure::bernoulli(2.0);
    double viete = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double t = -50.0 + 100.0 * i / 999.0;
        const double sinc = t == 0.0 ? 1.0 : std::sin(t) / t;
        viete = std::max(viete, std::abs(fourier(b2, t) - sinc));
    }
    const auto erdos = SymmetricMeasure::bernoulli(2.5);
    const auto atoms = truncate_bernoulli(2.5, 12);
    double truncated = 0.0, k_term = 0.0;
    for (int i = 0; i <= 40000; ++i) {
        const double t = -20.0 + 40.0 * i / 40000.0;
        const double f = fourier(atoms, t);
        truncated = std::max(truncated, std::abs(f - fourier(erdos, t)));
        k_term = std::max(k_term, std::abs(f - bernoulli_partial_product(2.5, 12, t)));
    }
    return {viete <= 1e-12 && truncated <= 1e-10,
            "Viete " + sci(viete) + "; K=12 atoms vs full product " + sci(truncated) + " (limit 1e-10), vs 12-term product " +
                sci(k_term)};
}

Outcome mixing() {
    const auto uniform = Representation::measure(SymmetricMeasure::uniform(1.0, 1e-3));
    const auto x = s(uniform.real_vector(std::vector<cplx>(uniform.dimension(), 1.0)));
    const double u0 = std::abs(mixing_correlation(uniform, x, x, 0.0));
    const auto uw = sampled_sup([&](double t) { return std::abs(mixing_correlation(uniform, x, x, t)); }, 40.0, 50.0, 256);

    const auto block = Representation::finite({1.0});
    const auto e = s(block.real_vector({1.0, 0.0}));
    const double b0 = std::abs(mixing_correlation(block, e, e, 0.0));
    double worst = 0.0;
    for (double lo = 0.0; lo < 100.0; lo += 10.0) {
        const auto w = sampled_sup([&](double t) { return std::abs(mixing_correlation(block, e, e, t)); }, lo, lo + 10.0,
                                   256);
        worst = std::max(worst, std::abs(w.sup - b0));
    }
    return {uw.sup <= 0.05 * u0 && worst <= 1e-6,
            "uniform window sup / value at 0 = " + sci(uw.sup / u0) + ", block recovery error " + sci(worst)};
}

Outcome wiener() {
    const double w = wiener_average(SymmetricMeasure::symmetric_pair(1.0), 1000.0);
    return {std::abs(w - 0.5) <= 1e-2, "average " + sci(w)};
}

struct Run {
    int status;
    std::string out;
};

Run run_cli(const std::string& args) {
    const std::string cmd = std::string(FAW_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r{-1, {}};
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

Outcome cli_determinism() {
    const std::string block = R"('{"type":"finite","blocks":[1.0]}')";
    const std::vector<std::string> seeded{
        "transversality-test " + block + " 3 0.1,0.5,0.9 20 11",
        "freeness-test " + block + " 6 20 12",
        "fock-vs-formula " + block + " 6 40 13",
        "fock-vs-formula 'pair(1)' 4 40 --seed 14",
    };
    for (const auto& args : seeded) {
        const Run a = run_cli(args), b = run_cli(args);
        if (a.status != 0 || a.out.empty() || a.out != b.out) return {false, "not reproducible: " + args};
    }
    const int ok = run_cli("nc-count 4").status;
    const int invalid = run_cli("nc-count 13").status;
    const int numeric = run_cli("--tolerance 1e-300 fock-vs-formula " + block + " 4 20 5").status;
    return {ok == 0 && invalid == 1 && numeric == 2,
            std::to_string(seeded.size()) + " seeded runs byte-identical; exit codes " + std::to_string(ok) + "/" +
                std::to_string(invalid) + "/" + std::to_string(numeric)};
}

} // namespace

int main() {
    struct Criterion {
        const char* name;
        Outcome (*check)();
        double budget_s;
    };
    const std::vector<Criterion> criteria{
        {"Catalan and non-crossing pairing counts, p <= 10", catalan_counts, 5.0},
        {"pairing formula equals truncated Fock oracle", oracle_equivalence, 60.0},
        {"semicircle moments C_p (|xi|/2)^{2p}, p <= 8", semicircle, 0.0},
        {"covariance phi(s(xi)s(eta)) = <xi,eta>_U / 4", covariance, 0.0},
        {"state invariance under the modular flow", modular_invariance, 0.0},
        {"deformation relations of (alpha_s, beta)", deformation, 0.0},
        {"transversality inequality, equality on level 1", transversality, 0.0},
        {"free independence of the two copies", freeness, 0.0},
        {"Fourier transform of convolution powers", convolution_duality, 0.0},
        {"Viete identity and truncated Erdos measure", viete_erdos, 0.0},
        {"mixing versus almost periodic correlations", mixing, 0.0},
        {"Wiener average of (delta_-1 + delta_1) / 2", wiener, 0.0},
        {"CLI determinism and exit statuses", cli_determinism, 0.0},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& c = criteria[i];
        const auto start = std::chrono::steady_clock::now();
        Outcome o{false, {}};
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.budget_s > 0.0 && secs > c.budget_s) {
            o.pass = false;
            o.detail += "; over the " + sci(c.budget_s) + " s budget";
        }
        if (!o.pass) ++failed;
        std::printf("%s %2zu  %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", i + 1, c.name, o.detail.c_str(), secs);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
