#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "faw/error.hpp"

namespace faw {

struct Atom {
    double x = 0.0;
    double weight = 0.0;

    friend bool operator==(const Atom&, const Atom&) = default;
};

inline constexpr double kAtomMergeTolerance = 1e-12;
inline constexpr double kBernoulliTailEpsilon = 1e-14;
inline constexpr int kMaxBernoulliLevels = 20;

/// Symmetric probability measure on the real line. Only the non-negative
/// half is stored; symmetry is structural.
///
/// Stored weights and density samples are kept exactly as given. Every
/// evaluation divides by the mass computed with the same summation as the
/// evaluation itself, so fourier(mu, 0) == 1 holds bit-exactly.
class SymmetricMeasure {
public:
    struct Atomic {
        std::vector<Atom> positive;   // x > 0, strictly increasing
        double w0 = 0.0;              // mass at the origin
        friend bool operator==(const Atomic&, const Atomic&) = default;
    };
    struct Grid {
        double step = 0.0;
        std::vector<double> half_values;   // density at 0, h, ..., m h
        friend bool operator==(const Grid&, const Grid&) = default;
    };
    struct Bernoulli {
        double theta = 0.0;
        friend bool operator==(const Bernoulli&, const Bernoulli&) = default;
    };
    struct Power {
        std::shared_ptr<const SymmetricMeasure> base;
        int n = 1;
        friend bool operator==(const Power& a, const Power& b) { return a.n == b.n && *a.base == *b.base; }
    };
    using Form = std::variant<Atomic, Grid, Bernoulli, Power>;

    // Atoms with x > 0 plus an optional atom at the origin. Coinciding
    // positions are merged; w0 + 2 sum(w) must equal 1 within 1e-12.
    static SymmetricMeasure atomic(std::vector<Atom> positive, double w0 = 0.0);
    static SymmetricMeasure grid(double step, std::vector<double> half_values);
    static SymmetricMeasure bernoulli(double theta);
    static SymmetricMeasure power(const SymmetricMeasure& base, int n);

    static SymmetricMeasure dirac() { return atomic({}, 1.0); }
    // (delta_{-a} + delta_a) / 2
    static SymmetricMeasure symmetric_pair(double a) { return atomic({{a, 0.5}}); }
    // Uniform density on [-half_width, half_width] sampled with the given step.
    static SymmetricMeasure uniform(double half_width, double step);

    const Form& form() const { return form_; }
    bool is_atomic() const { return std::holds_alternative<Atomic>(form_); }
    bool is_grid() const { return std::holds_alternative<Grid>(form_); }

    // Largest |x| in the support.
    double support_bound() const;

    friend bool operator==(const SymmetricMeasure&, const SymmetricMeasure&) = default;

    // Builds an atomic measure from a list of signed atoms that is symmetric
    // up to rounding: positions are merged within the atom tolerance and the
    // two halves are averaged.
    static SymmetricMeasure from_signed_atoms(std::vector<Atom> atoms);

private:
    explicit SymmetricMeasure(Form f) : form_(std::move(f)) {}
    Form form_;
};

namespace detail {

inline double atomic_sum(const SymmetricMeasure::Atomic& a, double t) {
    double s = 0.0;
    for (const auto& atom : a.positive) s += atom.weight * std::cos(atom.x * t);
    return a.w0 + 2.0 * s;
}

// Trapezoidal integral of cos(t x) f(x) over [-m h, m h] for the even
// extension of the half-grid samples.
inline double grid_sum(const SymmetricMeasure::Grid& g, double t) {
    const auto& v = g.half_values;
    const std::size_t m = v.size() - 1;
    double inner = 0.0;
    for (std::size_t j = 1; j < m; ++j) inner += v[j] * std::cos(static_cast<double>(j) * g.step * t);
    return g.step * (v[0] + 2.0 * inner + v[m] * std::cos(static_cast<double>(m) * g.step * t));
}

inline std::vector<Atom> merge_sorted(std::vector<Atom> atoms) {
    std::vector<Atom> out;
    for (const auto& a : atoms) {
        if (!out.empty() && a.x - out.back().x <= kAtomMergeTolerance) {
            out.back().weight += a.weight;
        } else {
            out.push_back(a);
        }
    }
    return out;
}

// Number of cosine factors so that the tail sum_{n>K} t^2 / (2 theta^{2n})
// drops below eps.
inline int bernoulli_factor_count(double theta, double t, double eps) {
    const double t2 = t * t;
    const double q = 1.0 / (theta * theta);
    // sum_{n>K} q^n = q^{K+1} / (1 - q)
    double tail = t2 / 2.0 * q / (1.0 - q);
    int k = 0;
    while (tail >= eps) {
        tail *= q;
        ++k;
        if (k > 4000) throw NumericError("fourier: Bernoulli product does not converge");
    }
    return k;
}

} // namespace detail

inline SymmetricMeasure SymmetricMeasure::atomic(std::vector<Atom> positive, double w0) {
    detail::require(std::isfinite(w0) && w0 >= 0.0, "atomic measure: weight at zero must be >= 0");
    for (const auto& a : positive) {
        detail::require(std::isfinite(a.x) && a.x > 0.0, "atomic measure: atom positions must be > 0");
        detail::require(std::isfinite(a.weight) && a.weight > 0.0, "atomic measure: atom weights must be > 0");
    }
    std::stable_sort(positive.begin(), positive.end(), [](const Atom& a, const Atom& b) { return a.x < b.x; });
    positive = detail::merge_sorted(std::move(positive));
    Atomic form{std::move(positive), w0};
    const double mass = detail::atomic_sum(form, 0.0);
    if (std::abs(mass - 1.0) > 1e-12) {
        throw ValidationError("atomic measure: total mass w0 + 2*sum(w) = " + std::to_string(mass) + ", expected 1");
    }
    return SymmetricMeasure(std::move(form));
}

inline SymmetricMeasure SymmetricMeasure::from_signed_atoms(std::vector<Atom> atoms) {
    double w0 = 0.0;
    std::vector<Atom> folded;
    folded.reserve(atoms.size());
    for (const auto& a : atoms) {
        const double ax = std::abs(a.x);
        if (ax <= kAtomMergeTolerance) {
            w0 += a.weight;
        } else {
            folded.push_back({ax, a.weight});
        }
    }
    std::sort(folded.begin(), folded.end(), [](const Atom& a, const Atom& b) { return a.x < b.x; });
    folded = detail::merge_sorted(std::move(folded));
    for (auto& a : folded) a.weight *= 0.5;
    return SymmetricMeasure(Atomic{std::move(folded), w0});
}

inline SymmetricMeasure SymmetricMeasure::grid(double step, std::vector<double> half_values) {
    detail::require(std::isfinite(step) && step > 0.0, "grid measure: step must be > 0");
    detail::require(half_values.size() >= 2, "grid measure: need at least two half-grid values");
    for (double v : half_values) {
        detail::require(std::isfinite(v) && v >= 0.0, "grid measure: density values must be finite and >= 0");
    }
    Grid g{step, std::move(half_values)};
    const double mass = detail::grid_sum(g, 0.0);
    detail::require(mass > 0.0, "grid measure: total mass must be positive");
    return SymmetricMeasure(std::move(g));
}

inline SymmetricMeasure SymmetricMeasure::bernoulli(double theta) {
    detail::require(std::isfinite(theta) && theta > 1.0, "Bernoulli convolution: theta must be > 1");
    return SymmetricMeasure(Bernoulli{theta});
}

inline SymmetricMeasure SymmetricMeasure::power(const SymmetricMeasure& base, int n) {
    detail::require(n >= 1, "convolution power: n must be >= 1");
    return SymmetricMeasure(Power{std::make_shared<const SymmetricMeasure>(base), n});
}

inline SymmetricMeasure SymmetricMeasure::uniform(double half_width, double step) {
    detail::require(half_width > 0.0 && step > 0.0, "uniform measure: half width and step must be > 0");
    const auto m = static_cast<std::size_t>(std::llround(half_width / step));
    detail::require(m >= 1, "uniform measure: step larger than half width");
    return grid(half_width / static_cast<double>(m), std::vector<double>(m + 1, 0.5 / half_width));
}

inline double SymmetricMeasure::support_bound() const {
    return std::visit(
        [](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Atomic>) {
                return f.positive.empty() ? 0.0 : f.positive.back().x;
            } else if constexpr (std::is_same_v<T, Grid>) {
                return f.step * static_cast<double>(f.half_values.size() - 1);
            } else if constexpr (std::is_same_v<T, Bernoulli>) {
                return 1.0 / (f.theta - 1.0);
            } else {
                return f.n * f.base->support_bound();
            }
        },
        form_);
}

/// Fourier transform t -> integral of e^{itx} dmu(x). Real and even for
/// symmetric measures; fourier(mu, 0) == 1 exactly.
inline double fourier(const SymmetricMeasure& mu, double t) {
    const double at = std::abs(t);
    return std::visit(
        [at](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, SymmetricMeasure::Atomic>) {
                return detail::atomic_sum(f, at) / detail::atomic_sum(f, 0.0);
            } else if constexpr (std::is_same_v<T, SymmetricMeasure::Grid>) {
                return detail::grid_sum(f, at) / detail::grid_sum(f, 0.0);
            } else if constexpr (std::is_same_v<T, SymmetricMeasure::Bernoulli>) {
                const int k = detail::bernoulli_factor_count(f.theta, at, kBernoulliTailEpsilon);
                double prod = 1.0;
                double scale = at;
                for (int n = 1; n <= k; ++n) {
                    scale /= f.theta;
                    prod *= std::cos(scale);
                }
                return prod;
            } else {
                const double base = fourier(*f.base, at);
                double prod = 1.0;
                for (int i = 0; i < f.n; ++i) prod *= base;
                return prod;
            }
        },
        mu.form());
}

/// Product of the first K cosine factors cos(t / theta^n), n = 1..K.
inline double bernoulli_partial_product(double theta, int k, double t) {
    double prod = 1.0;
    double scale = std::abs(t);
    for (int n = 1; n <= k; ++n) {
        scale /= theta;
        prod *= std::cos(scale);
    }
    return prod;
}

/// Convolution of two atomic measures (exact atom sums, merged) or of two
/// grid measures with the same step (discrete convolution of the trapezoid
/// weights, so Fourier multiplicativity holds up to rounding).
inline SymmetricMeasure convolve(const SymmetricMeasure& mu, const SymmetricMeasure& nu) {
    if (mu.is_atomic() && nu.is_atomic()) {
        const auto& a = std::get<SymmetricMeasure::Atomic>(mu.form());
        const auto& b = std::get<SymmetricMeasure::Atomic>(nu.form());
        const double ma = detail::atomic_sum(a, 0.0);
        const double mb = detail::atomic_sum(b, 0.0);
        auto expand = [](const SymmetricMeasure::Atomic& f, double mass) {
            std::vector<Atom> out;
            out.reserve(2 * f.positive.size() + 1);
            for (auto it = f.positive.rbegin(); it != f.positive.rend(); ++it) out.push_back({-it->x, it->weight / mass});
            if (f.w0 > 0.0) out.push_back({0.0, f.w0 / mass});
            for (const auto& atom : f.positive) out.push_back({atom.x, atom.weight / mass});
            return out;
        };
        const auto sa = expand(a, ma);
        const auto sb = expand(b, mb);
        std::vector<Atom> sums;
        sums.reserve(sa.size() * sb.size());
        for (const auto& x : sa) {
            for (const auto& y : sb) sums.push_back({x.x + y.x, x.weight * y.weight});
        }
        return SymmetricMeasure::from_signed_atoms(std::move(sums));
    }
    if (mu.is_grid() && nu.is_grid()) {
        const auto& f = std::get<SymmetricMeasure::Grid>(mu.form());
        const auto& g = std::get<SymmetricMeasure::Grid>(nu.form());
        if (std::abs(f.step - g.step) > 1e-12 * std::max(f.step, g.step)) {
            throw ValidationError("convolve: grid measures must share the same step");
        }
        const double h = f.step;
        // Full symmetric trapezoid weights, index i <-> x = (i - m) h.
        auto weights = [h](const SymmetricMeasure::Grid& q) {
            const double mass = detail::grid_sum(q, 0.0);
            const std::size_t m = q.half_values.size() - 1;
            std::vector<double> w(2 * m + 1);
            for (std::size_t j = 0; j <= m; ++j) {
                const double wj = (j == m ? 0.5 : 1.0) * h * q.half_values[j] / mass;
                w[m + j] = wj;
                w[m - j] = wj;
            }
            return w;
        };
        const auto wf = weights(f);
        const auto wg = weights(g);
        const std::size_t mf = f.half_values.size() - 1;
        const std::size_t mg = g.half_values.size() - 1;
        const std::size_t m = mf + mg;
        std::vector<double> half(m + 1, 0.0);
        for (std::size_t k = m; k <= 2 * m; ++k) {
            double c = 0.0;
            const std::size_t lo = k > 2 * mg ? k - 2 * mg : 0;
            const std::size_t hi = std::min(k, 2 * mf);
            for (std::size_t i = lo; i <= hi; ++i) c += wf[i] * wg[k - i];
            const std::size_t j = k - m;
            half[j] = (j == m ? 2.0 : 1.0) * c / h;
        }
        return SymmetricMeasure::grid(h, std::move(half));
    }
    throw ValidationError("convolve: both measures must be atomic, or both grid densities");
}

/// n-fold convolution power. Atomic and grid measures are materialized by
/// iterated convolution; other forms stay symbolic.
inline SymmetricMeasure conv_power(const SymmetricMeasure& mu, int n) {
    detail::require(n >= 1, "conv_power: n must be >= 1");
    if (!mu.is_atomic() && !mu.is_grid()) return SymmetricMeasure::power(mu, n);
    SymmetricMeasure acc = mu;
    for (int i = 1; i < n; ++i) acc = convolve(acc, mu);
    return acc;
}

/// Atomic measure (1/2 delta_{-1/theta} + 1/2 delta_{1/theta}) * ... up to
/// theta^{-K}: all signed sums, weight 2^{-K} each, coinciding sums merged.
inline SymmetricMeasure truncate_bernoulli(double theta, int k) {
    detail::require(std::isfinite(theta) && theta > 1.0, "truncate_bernoulli: theta must be > 1");
    detail::require(k >= 1, "truncate_bernoulli: K must be >= 1");
    if (k > kMaxBernoulliLevels) {
        throw CapError("truncate_bernoulli: K = " + std::to_string(k) + " exceeds the cap " +
                       std::to_string(kMaxBernoulliLevels));
    }
    std::vector<Atom> atoms{{0.0, 1.0}};
    double scale = 1.0;
    for (int n = 1; n <= k; ++n) {
        scale /= theta;
        std::vector<Atom> next;
        next.reserve(2 * atoms.size());
        for (const auto& a : atoms) {
            next.push_back({a.x - scale, 0.5 * a.weight});
            next.push_back({a.x + scale, 0.5 * a.weight});
        }
        std::sort(next.begin(), next.end(), [](const Atom& a, const Atom& b) { return a.x < b.x; });
        atoms = detail::merge_sorted(std::move(next));
    }
    return SymmetricMeasure::from_signed_atoms(std::move(atoms));
}

/// Full symmetric node list of a discrete measure, ascending, weights
/// normalized to total mass 1. Node j and node (size - 1 - j) are mirrors.
struct DiscreteNodes {
    std::vector<double> x;
    std::vector<double> weight;
};

inline DiscreteNodes discretize(const SymmetricMeasure& mu, int bernoulli_levels = 12) {
    return std::visit(
        [&](const auto& f) -> DiscreteNodes {
            using T = std::decay_t<decltype(f)>;
            DiscreteNodes out;
            if constexpr (std::is_same_v<T, SymmetricMeasure::Atomic>) {
                const double mass = detail::atomic_sum(f, 0.0);
                for (auto it = f.positive.rbegin(); it != f.positive.rend(); ++it) {
                    out.x.push_back(-it->x);
                    out.weight.push_back(it->weight / mass);
                }
                if (f.w0 > 0.0) {
                    out.x.push_back(0.0);
                    out.weight.push_back(f.w0 / mass);
                }
                for (const auto& a : f.positive) {
                    out.x.push_back(a.x);
                    out.weight.push_back(a.weight / mass);
                }
            } else if constexpr (std::is_same_v<T, SymmetricMeasure::Grid>) {
                const double mass = detail::grid_sum(f, 0.0);
                const std::size_t m = f.half_values.size() - 1;
                out.x.resize(2 * m + 1);
                out.weight.resize(2 * m + 1);
                for (std::size_t j = 0; j <= m; ++j) {
                    const double wj = (j == m ? 0.5 : 1.0) * f.step * f.half_values[j] / mass;
                    const double xj = static_cast<double>(j) * f.step;
                    out.x[m + j] = xj;
                    out.x[m - j] = -xj;
                    out.weight[m + j] = wj;
                    out.weight[m - j] = wj;
                }
            } else if constexpr (std::is_same_v<T, SymmetricMeasure::Bernoulli>) {
                out = discretize(truncate_bernoulli(f.theta, bernoulli_levels));
            } else {
                if (!f.base->is_atomic() && !f.base->is_grid()) {
                    throw ValidationError("discretize: convolution powers need an atomic or grid base");
                }
                out = discretize(conv_power(*f.base, f.n));
            }
            return out;
        },
        mu.form());
}

// ---------------------------------------------------------------------------
// Scans

struct WindowSup {
    double lo = 0.0;
    double hi = 0.0;
    double sup = 0.0;
    double argsup = 0.0;
};

/// Supremum of |f| over [lo, hi] sampled at `samples` equispaced points
/// (endpoints included), optionally refined by golden-section search around
/// the best sample. Sampling only ever underestimates the true supremum.
inline WindowSup sampled_sup(const std::function<double(double)>& f, double lo, double hi, int samples,
                             bool refine = true) {
    detail::require(samples >= 2, "sampled_sup: need at least two samples");
    detail::require(hi > lo, "sampled_sup: empty window");
    const double dt = (hi - lo) / static_cast<double>(samples - 1);
    WindowSup best{lo, hi, -1.0, lo};
    int best_k = 0;
    for (int k = 0; k < samples; ++k) {
        const double t = (k == samples - 1) ? hi : lo + dt * k;
        const double v = std::abs(f(t));
        if (!std::isfinite(v)) throw NumericError("sampled_sup: non-finite value at t = " + std::to_string(t));
        if (v > best.sup) {
            best.sup = v;
            best.argsup = t;
            best_k = k;
        }
    }
    if (refine) {
        double a = std::max(lo, lo + dt * (best_k - 1));
        double b = std::min(hi, lo + dt * (best_k + 1));
        const double g = (std::sqrt(5.0) - 1.0) / 2.0;
        double c = b - g * (b - a);
        double d = a + g * (b - a);
        double fc = std::abs(f(c));
        double fd = std::abs(f(d));
        for (int it = 0; it < 80 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
            if (fc > fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = std::abs(f(c));
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = std::abs(f(d));
            }
        }
        for (auto [t, v] : {std::pair{c, fc}, std::pair{d, fd}}) {
            if (v > best.sup) {
                best.sup = v;
                best.argsup = t;
            }
        }
    }
    return best;
}

/// Per-window suprema of |mu~| over [0, t_max] split into `windows` equal
/// intervals. Decay is reported, never certified.
inline std::vector<WindowSup> mixing_report(const SymmetricMeasure& mu, double t_max, int windows,
                                            int samples_per_window = 64) {
    detail::require(t_max > 0.0, "mixing_report: t_max must be > 0");
    detail::require(windows >= 1, "mixing_report: need at least one window");
    detail::require(samples_per_window >= 64, "mixing_report: sampling density must be >= 64 per window");
    std::vector<WindowSup> out;
    out.reserve(static_cast<std::size_t>(windows));
    const double width = t_max / windows;
    for (int w = 0; w < windows; ++w) {
        const double lo = width * w;
        const double hi = (w == windows - 1) ? t_max : width * (w + 1);
        out.push_back(sampled_sup([&](double t) { return fourier(mu, t); }, lo, hi, samples_per_window));
    }
    return out;
}

inline bool suprema_nonincreasing(const std::vector<WindowSup>& report) {
    for (std::size_t i = 1; i < report.size(); ++i) {
        if (report[i].sup > report[i - 1].sup) return false;
    }
    return true;
}

/// (1/2T) * integral_{-T}^{T} |mu~(t)|^2 dt. Tends to the sum of squared
/// atom weights as T grows (Wiener), so it separates atomic from continuous
/// parts.
inline double wiener_average(const SymmetricMeasure& mu, double T) {
    detail::require(std::isfinite(T) && T > 0.0, "wiener_average: T must be > 0");
    const double bound = mu.support_bound();
    // Panels of width pi / bound keep each Gauss-Kronrod panel within about
    // one oscillation of |mu~|^2.
    double width = T;
    if (bound > 0.0) width = std::min(T, std::numbers::pi / bound);
    const double panels_f = std::ceil(T / width);
    if (panels_f > 2e6) throw CapError("wiener_average: T * support bound too large for quadrature");
    const auto panels = static_cast<long>(panels_f);
    width = T / static_cast<double>(panels);
    auto integrand = [&mu](double t) {
        const double v = fourier(mu, t);
        return v * v;
    };
    double total = 0.0;
    double total_err = 0.0;
    for (long k = 0; k < panels; ++k) {
        const double a = width * static_cast<double>(k);
        const double b = (k == panels - 1) ? T : width * static_cast<double>(k + 1);
        double err = 0.0;
        const double part =
            boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, a, b, 10, 1e-11, &err);
        if (!std::isfinite(part)) throw NumericError("wiener_average: non-finite integrand");
        total += part;
        total_err += err;
    }
    if (total_err > 1e-9 * std::max(1.0, T)) {
        throw NumericError("wiener_average: quadrature error estimate " + std::to_string(total_err) +
                           " exceeds tolerance");
    }
    return total / T;
}

} // namespace faw
