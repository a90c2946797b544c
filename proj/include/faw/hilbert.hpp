#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "faw/error.hpp"
#include "faw/measures.hpp"

namespace faw {

using cplx = std::complex<double>;

/// Coordinates of a vector in a representation space. For finite
/// representations the coordinates refer to the standard real basis
/// (complexified); for measure representations they are the function values
/// on the ascending node list. `real` marks vectors of the real subspace.
struct RepVector {
    std::vector<cplx> coords;
    bool real = false;

    std::size_t size() const { return coords.size(); }
    friend bool operator==(const RepVector&, const RepVector&) = default;
};

/// Orthogonal representation by 2x2 rotation blocks plus fixed directions.
/// Block j rotates (e1, e2) by angle t * frequencies[j]:
///   e1 -> cos(t w) e1 + sin(t w) e2,  e2 -> -sin(t w) e1 + cos(t w) e2.
/// With this orientation e1 - i e2 spans the eigenvalue e^{w} of the generator A.
struct FiniteRep {
    std::vector<double> frequencies;
    std::size_t trivial_dim = 0;

    std::size_t dimension() const { return 2 * frequencies.size() + trivial_dim; }
    friend bool operator==(const FiniteRep&, const FiniteRep&) = default;
};

/// Multiplication representation (U_t f)(x) = e^{itx} f(x) on L^2 of a
/// discretized symmetric measure. The generator A is multiplication by e^x.
struct MeasureRep {
    SymmetricMeasure measure;
    int bernoulli_levels = 12;
    DiscreteNodes nodes;

    std::size_t dimension() const { return nodes.x.size(); }
    friend bool operator==(const MeasureRep& a, const MeasureRep& b) {
        return a.measure == b.measure && a.bernoulli_levels == b.bernoulli_levels;
    }
};

namespace detail {

// w(lambda) = 2 lambda / (1 + lambda) at lambda = e^x, i.e. 2 / (1 + e^{-x}).
inline double deformation_weight(double x) {
    if (x >= 0.0) return 2.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return 2.0 * e / (1.0 + e);
}

inline constexpr double kRealTolerance = 1e-12;

} // namespace detail

/// Direct sum of finite and measure components. All linear-algebra access
/// goes through dimension / apply_Ut / inner / inner_U / direct_sum; callers
/// never look at the components.
///
/// Inner products are linear in the FIRST argument.
class Representation {
public:
    using Component = std::variant<FiniteRep, MeasureRep>;

    static Representation finite(std::vector<double> frequencies, std::size_t trivial_dim = 0) {
        FiniteRep rep;
        rep.trivial_dim = trivial_dim;
        for (double w : frequencies) {
            detail::require(std::isfinite(w), "finite representation: frequencies must be finite");
            if (w == 0.0) {
                rep.trivial_dim += 2;
            } else {
                rep.frequencies.push_back(w);
            }
        }
        detail::require(rep.dimension() >= 1, "finite representation: dimension must be >= 1");
        return Representation({Component(std::move(rep))});
    }

    static Representation measure(const SymmetricMeasure& mu, int bernoulli_levels = 12) {
        MeasureRep rep{mu, bernoulli_levels, discretize(mu, bernoulli_levels)};
        return Representation({Component(std::move(rep))});
    }

    static Representation direct_sum(const Representation& a, const Representation& b) {
        std::vector<Component> parts = a.components_;
        parts.insert(parts.end(), b.components_.begin(), b.components_.end());
        return Representation(std::move(parts));
    }

    std::size_t dimension() const { return dimension_; }
    std::span<const Component> components() const { return components_; }

    friend bool operator==(const Representation& a, const Representation& b) {
        return a.components_ == b.components_;
    }

    RepVector vector(std::vector<cplx> coords) const {
        check_size(coords.size(), "vector");
        return RepVector{std::move(coords), false};
    }

    // Validates the real structure (real coordinates, or f(-x) = conj f(x))
    // within 1e-12 of the largest entry and then enforces it exactly.
    RepVector real_vector(std::vector<cplx> coords) const {
        check_size(coords.size(), "real_vector");
        double scale = 0.0;
        for (const auto& z : coords) scale = std::max(scale, std::abs(z));
        const double tol = detail::kRealTolerance * std::max(1.0, scale);
        for_each_part([&](const auto& part, std::size_t off) {
            using T = std::decay_t<decltype(part)>;
            const std::size_t n = part.dimension();
            if constexpr (std::is_same_v<T, FiniteRep>) {
                for (std::size_t i = 0; i < n; ++i) {
                    detail::require(std::abs(coords[off + i].imag()) <= tol,
                                    "real_vector: coordinates of a real vector must be real");
                    coords[off + i] = cplx(coords[off + i].real(), 0.0);
                }
            } else {
                for (std::size_t j = 0; j < n / 2 + n % 2; ++j) {
                    const std::size_t mirror = n - 1 - j;
                    auto& lo = coords[off + j];
                    auto& hi = coords[off + mirror];
                    if (j == mirror) {
                        detail::require(std::abs(hi.imag()) <= tol, "real_vector: value at x = 0 must be real");
                        hi = cplx(hi.real(), 0.0);
                    } else {
                        detail::require(std::abs(lo - std::conj(hi)) <= tol,
                                        "real_vector: values must satisfy f(-x) = conj(f(x))");
                        lo = std::conj(hi);
                    }
                }
            }
        });
        return RepVector{std::move(coords), true};
    }

    /// A basis of the real subspace H_R (orthogonal for the plain inner
    /// product). Real combinations of it are exactly the real vectors.
    std::vector<RepVector> real_basis() const {
        std::vector<RepVector> out;
        for_each_part([&](const auto& part, std::size_t off) {
            using T = std::decay_t<decltype(part)>;
            const std::size_t n = part.dimension();
            if constexpr (std::is_same_v<T, FiniteRep>) {
                for (std::size_t i = 0; i < n; ++i) {
                    RepVector v{std::vector<cplx>(dimension_), true};
                    v.coords[off + i] = 1.0;
                    out.push_back(std::move(v));
                }
            } else {
                for (std::size_t j = n / 2; j < n; ++j) {
                    const std::size_t mirror = n - 1 - j;
                    RepVector even{std::vector<cplx>(dimension_), true};
                    even.coords[off + j] = 1.0;
                    even.coords[off + mirror] = 1.0;
                    out.push_back(std::move(even));
                    if (mirror != j) {
                        RepVector odd{std::vector<cplx>(dimension_), true};
                        odd.coords[off + j] = cplx(0.0, 1.0);
                        odd.coords[off + mirror] = cplx(0.0, -1.0);
                        out.push_back(std::move(odd));
                    }
                }
            }
        });
        return out;
    }

    RepVector apply_Ut(const RepVector& v, double t) const {
        check_size(v.size(), "apply_Ut");
        RepVector out{std::vector<cplx>(dimension_), v.real};
        for_each_part([&](const auto& part, std::size_t off) {
            using T = std::decay_t<decltype(part)>;
            if constexpr (std::is_same_v<T, FiniteRep>) {
                for (std::size_t b = 0; b < part.frequencies.size(); ++b) {
                    const double c = std::cos(t * part.frequencies[b]);
                    const double s = std::sin(t * part.frequencies[b]);
                    const cplx x = v.coords[off + 2 * b];
                    const cplx y = v.coords[off + 2 * b + 1];
                    out.coords[off + 2 * b] = c * x - s * y;
                    out.coords[off + 2 * b + 1] = s * x + c * y;
                }
                for (std::size_t i = 2 * part.frequencies.size(); i < part.dimension(); ++i) {
                    out.coords[off + i] = v.coords[off + i];
                }
            } else {
                const std::size_t n = part.dimension();
                for (std::size_t j = 0; j < n; ++j) {
                    const double phase = t * part.nodes.x[j];
                    out.coords[off + j] = v.coords[off + j] * cplx(std::cos(phase), std::sin(phase));
                }
                if (v.real) {
                    // e^{-itx} = conj(e^{itx}); keep the real structure exact.
                    for (std::size_t j = 0; j < n / 2 + n % 2; ++j) {
                        const std::size_t mirror = n - 1 - j;
                        if (j == mirror) {
                            out.coords[off + j] = cplx(out.coords[off + j].real(), 0.0);
                        } else {
                            out.coords[off + j] = std::conj(out.coords[off + mirror]);
                        }
                    }
                }
            }
        });
        return out;
    }

    // Plain inner product <xi, eta>, linear in xi.
    cplx inner(const RepVector& xi, const RepVector& eta) const { return pairing(xi, eta, false); }

    // Deformed inner product <2/(1 + A^{-1}) xi, eta>, linear in xi.
    cplx inner_U(const RepVector& xi, const RepVector& eta) const { return pairing(xi, eta, true); }

private:
    explicit Representation(std::vector<Component> parts) : components_(std::move(parts)) {
        for (const auto& c : components_) {
            dimension_ += std::visit([](const auto& p) { return p.dimension(); }, c);
        }
    }

    template <class F>
    void for_each_part(F&& f) const {
        std::size_t off = 0;
        for (const auto& c : components_) {
            std::visit([&](const auto& p) { f(p, off); }, c);
            off += std::visit([](const auto& p) { return p.dimension(); }, c);
        }
    }

    void check_size(std::size_t n, const char* where) const {
        if (n != dimension_) {
            throw ValidationError(std::string(where) + ": dimension mismatch (got " + std::to_string(n) +
                                  ", representation has " + std::to_string(dimension_) + ")");
        }
    }

    cplx pairing(const RepVector& xi, const RepVector& eta, bool deformed) const {
        check_size(xi.size(), deformed ? "inner_U" : "inner");
        check_size(eta.size(), deformed ? "inner_U" : "inner");
        cplx total = 0.0;
        for_each_part([&](const auto& part, std::size_t off) {
            using T = std::decay_t<decltype(part)>;
            if constexpr (std::is_same_v<T, FiniteRep>) {
                for (std::size_t b = 0; b < part.frequencies.size(); ++b) {
                    const cplx x1 = xi.coords[off + 2 * b];
                    const cplx x2 = xi.coords[off + 2 * b + 1];
                    const cplx y1 = eta.coords[off + 2 * b];
                    const cplx y2 = eta.coords[off + 2 * b + 1];
                    if (!deformed) {
                        total += x1 * std::conj(y1) + x2 * std::conj(y2);
                        continue;
                    }
                    // Components along v+ = (e1 - i e2)/sqrt2 (eigenvalue e^w)
                    // and v- = (e1 + i e2)/sqrt2 (eigenvalue e^{-w}).
                    const cplx i{0.0, 1.0};
                    const double r = std::numbers::sqrt2 / 2.0;
                    const cplx xp = r * (x1 + i * x2), xm = r * (x1 - i * x2);
                    const cplx yp = r * (y1 + i * y2), ym = r * (y1 - i * y2);
                    const double w = part.frequencies[b];
                    total += detail::deformation_weight(w) * xp * std::conj(yp) +
                             detail::deformation_weight(-w) * xm * std::conj(ym);
                }
                for (std::size_t k = 2 * part.frequencies.size(); k < part.dimension(); ++k) {
                    total += xi.coords[off + k] * std::conj(eta.coords[off + k]);
                }
            } else {
                for (std::size_t j = 0; j < part.dimension(); ++j) {
                    double w = part.nodes.weight[j];
                    if (deformed) w *= detail::deformation_weight(part.nodes.x[j]);
                    total += w * xi.coords[off + j] * std::conj(eta.coords[off + j]);
                }
            }
        });
        return total;
    }

    std::vector<Component> components_;
    std::size_t dimension_ = 0;
};

inline RepVector apply_Ut(const Representation& rep, const RepVector& v, double t) { return rep.apply_Ut(v, t); }
inline cplx inner(const Representation& rep, const RepVector& a, const RepVector& b) { return rep.inner(a, b); }
inline cplx inner_U(const Representation& rep, const RepVector& a, const RepVector& b) { return rep.inner_U(a, b); }

inline Representation direct_sum(const Representation& a, const Representation& b) {
    return Representation::direct_sum(a, b);
}

inline double norm(const Representation& rep, const RepVector& v) { return std::sqrt(rep.inner(v, v).real()); }
inline double norm_U(const Representation& rep, const RepVector& v) { return std::sqrt(rep.inner_U(v, v).real()); }

/// Product over i of <U_t f_i, g_i> (plain inner product): the positive
/// definite function of the n-fold tensor power U_t^{(x)n}. With all-ones
/// vectors on a measure representation this is mu~(t)^n.
inline cplx tensor_power_correlation(const Representation& rep, std::span<const RepVector> fs,
                                     std::span<const RepVector> gs, double t) {
    detail::require(!fs.empty() && fs.size() == gs.size(),
                    "tensor_power_correlation: need equally many (>= 1) f and g vectors");
    cplx prod = 1.0;
    for (std::size_t i = 0; i < fs.size(); ++i) prod *= rep.inner(rep.apply_Ut(fs[i], t), gs[i]);
    return prod;
}

// --- doubled representations H + H -----------------------------------------

/// True if the representation is a direct sum of two identical halves.
inline bool is_doubled(const Representation& rep) {
    const auto parts = rep.components();
    if (parts.empty() || parts.size() % 2 != 0) return false;
    const std::size_t half = parts.size() / 2;
    for (std::size_t i = 0; i < half; ++i) {
        if (!(parts[i] == parts[half + i])) return false;
    }
    return true;
}

inline void require_doubled(const Representation& rep, const char* where) {
    if (!is_doubled(rep)) throw ValidationError(std::string(where) + ": representation is not of the form H + H");
}

/// Places v in copy 1 ((v, 0)) or copy 2 ((0, v)) of a doubled representation.
inline RepVector embed_copy(const Representation& doubled, const RepVector& v, int copy) {
    require_doubled(doubled, "embed_copy");
    detail::require(copy == 1 || copy == 2, "embed_copy: copy must be 1 or 2");
    const std::size_t half = doubled.dimension() / 2;
    detail::require(v.size() == half, "embed_copy: vector dimension must match one copy");
    RepVector out{std::vector<cplx>(doubled.dimension()), v.real};
    std::copy(v.coords.begin(), v.coords.end(), out.coords.begin() + (copy == 1 ? 0 : half));
    return out;
}

/// 1 or 2 if v is supported in a single copy, 0 if it touches both, -1 if zero.
inline int copy_support(const Representation& doubled, const RepVector& v) {
    const std::size_t half = doubled.dimension() / 2;
    bool first = false, second = false;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v.coords[i] != cplx(0.0, 0.0)) (i < half ? first : second) = true;
    }
    if (first && second) return 0;
    if (first) return 1;
    if (second) return 2;
    return -1;
}

/// V_s (xi, eta) = (cos(pi s/2) xi - sin(pi s/2) eta, sin(pi s/2) xi + cos(pi s/2) eta).
inline RepVector rotate_copies(const Representation& doubled, const RepVector& v, double s) {
    require_doubled(doubled, "rotate_copies");
    const std::size_t half = doubled.dimension() / 2;
    const double c = std::cos(std::numbers::pi / 2.0 * s);
    const double sn = std::sin(std::numbers::pi / 2.0 * s);
    RepVector out{std::vector<cplx>(doubled.dimension()), v.real};
    for (std::size_t i = 0; i < half; ++i) {
        out.coords[i] = c * v.coords[i] - sn * v.coords[half + i];
        out.coords[half + i] = sn * v.coords[i] + c * v.coords[half + i];
    }
    return out;
}

/// (xi, eta) -> (xi, -eta).
inline RepVector reflect_copy2(const Representation& doubled, const RepVector& v) {
    require_doubled(doubled, "reflect_copy2");
    RepVector out = v;
    for (std::size_t i = doubled.dimension() / 2; i < v.size(); ++i) out.coords[i] = -out.coords[i];
    return out;
}

} // namespace faw
