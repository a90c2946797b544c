#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "faw/combinatorics.hpp"
#include "faw/error.hpp"
#include "faw/hilbert.hpp"

namespace faw {

inline constexpr int kDefaultWordLengthCap = 24;
inline constexpr double kCenteringTolerance = 1e-12;

/// s(xi_1) ... s(xi_n) for real letters xi_i. The empty word is the unit.
class Word {
public:
    Word() = default;
    explicit Word(std::vector<RepVector> letters) : letters_(std::move(letters)) {
        for (const auto& l : letters_) {
            detail::require(l.real, "Word: every letter must be a real vector (s(xi) needs xi in H_R)");
            detail::require(l.size() == letters_.front().size(), "Word: letters must share one dimension");
        }
    }

    std::size_t size() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    std::span<const RepVector> letters() const { return letters_; }
    const RepVector& operator[](std::size_t i) const { return letters_[i]; }

    // The adjoint word s(xi_n) ... s(xi_1).
    Word reversed() const {
        Word w;
        w.letters_.assign(letters_.rbegin(), letters_.rend());
        return w;
    }

    friend Word operator*(const Word& a, const Word& b) {
        Word w;
        w.letters_ = a.letters_;
        w.letters_.insert(w.letters_.end(), b.letters_.begin(), b.letters_.end());
        return w;
    }

    friend bool operator==(const Word&, const Word&) = default;

    // Strict weak order on exact coordinates; only used to key polynomials.
    friend bool operator<(const Word& a, const Word& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        for (std::size_t i = 0; i < a.size(); ++i) {
            const auto& x = a.letters_[i].coords;
            const auto& y = b.letters_[i].coords;
            if (x.size() != y.size()) return x.size() < y.size();
            for (std::size_t k = 0; k < x.size(); ++k) {
                if (x[k].real() != y[k].real()) return x[k].real() < y[k].real();
                if (x[k].imag() != y[k].imag()) return x[k].imag() < y[k].imag();
            }
        }
        return false;
    }

private:
    std::vector<RepVector> letters_;
};

/// Finite linear combination of words with complex coefficients. Zero
/// coefficients are never stored.
class WordPolynomial {
public:
    using Terms = std::map<Word, cplx>;

    WordPolynomial() = default;
    explicit WordPolynomial(const Word& w, cplx coeff = 1.0) { add(w, coeff); }

    static WordPolynomial unit(cplx coeff = 1.0) { return WordPolynomial(Word{}, coeff); }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t max_length() const {
        std::size_t n = 0;
        for (const auto& [w, c] : terms_) n = std::max(n, w.size());
        return n;
    }

    void add(const Word& w, cplx coeff) {
        if (coeff == cplx(0.0, 0.0)) return;
        auto [it, inserted] = terms_.emplace(w, coeff);
        if (!inserted) {
            it->second += coeff;
            if (it->second == cplx(0.0, 0.0)) terms_.erase(it);
        }
    }

    WordPolynomial& operator+=(const WordPolynomial& o) {
        for (const auto& [w, c] : o.terms_) add(w, c);
        return *this;
    }
    friend WordPolynomial operator+(WordPolynomial a, const WordPolynomial& b) { return a += b; }
    friend WordPolynomial operator-(WordPolynomial a, const WordPolynomial& b) { return a += b * cplx(-1.0); }
    friend WordPolynomial operator*(const WordPolynomial& p, cplx s) {
        WordPolynomial out;
        for (const auto& [w, c] : p.terms_) out.add(w, c * s);
        return out;
    }
    // Eager expansion by word concatenation.
    friend WordPolynomial operator*(const WordPolynomial& a, const WordPolynomial& b) {
        WordPolynomial out;
        for (const auto& [wa, ca] : a.terms_) {
            for (const auto& [wb, cb] : b.terms_) out.add(wa * wb, ca * cb);
        }
        return out;
    }

    friend bool operator==(const WordPolynomial&, const WordPolynomial&) = default;

private:
    Terms terms_;
};

struct MomentOptions {
    int max_word_length = kDefaultWordLengthCap;
};

/// Free quasi-free state on a word:
///   phi(s(xi_1)...s(xi_n)) = 2^{-n} sum_{NC pairings} prod_k <xi_{b_k}, xi_{g_k}>_U
/// for n even (b_k < g_k) and exactly 0 for n odd. The sum runs over the
/// pairings in lexicographic order so results are bit-stable.
inline cplx quasi_free_moment(const Representation& rep, const Word& w, const MomentOptions& opts = {}) {
    const std::size_t n = w.size();
    if (n > static_cast<std::size_t>(opts.max_word_length)) {
        throw CapError("quasi_free_moment: word length " + std::to_string(n) + " exceeds the cap " +
                       std::to_string(opts.max_word_length));
    }
    for (const auto& l : w.letters()) {
        if (l.size() != rep.dimension()) throw ValidationError("quasi_free_moment: letter dimension mismatch");
    }
    if (n == 0) return 1.0;
    if (n % 2 == 1) return 0.0;

    std::vector<cplx> gram(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) gram[i * n + j] = rep.inner_U(w[i], w[j]);
    }
    cplx sum = 0.0;
    for_each_nc_pairing(
        static_cast<int>(n / 2),
        [&](std::span<const IndexPair> pairs) {
            cplx prod = 1.0;
            for (const auto& pr : pairs) {
                prod *= gram[static_cast<std::size_t>(pr.first - 1) * n + static_cast<std::size_t>(pr.second - 1)];
            }
            sum += prod;
        },
        std::max(kDefaultEnumerationCap, opts.max_word_length / 2));
    return std::ldexp(1.0, -static_cast<int>(n)) * sum;
}

inline cplx moment_of_polynomial(const Representation& rep, const WordPolynomial& p, const MomentOptions& opts = {}) {
    cplx total = 0.0;
    for (const auto& [w, c] : p.terms()) total += c * quasi_free_moment(rep, w, opts);
    return total;
}

/// p - phi(p) 1.
inline WordPolynomial centered(const Representation& rep, const WordPolynomial& p, const MomentOptions& opts = {}) {
    return p - WordPolynomial::unit(moment_of_polynomial(rep, p, opts));
}

/// Modular flow on a word: sigma_t(s(xi)) = s(U_{-t} xi), letterwise.
inline Word modular_flow_word(const Representation& rep, const Word& w, double t) {
    std::vector<RepVector> letters;
    letters.reserve(w.size());
    for (const auto& l : w.letters()) letters.push_back(rep.apply_Ut(l, -t));
    return Word(std::move(letters));
}

inline WordPolynomial modular_flow(const Representation& rep, const WordPolynomial& p, double t) {
    WordPolynomial out;
    for (const auto& [w, c] : p.terms()) out.add(modular_flow_word(rep, w, t), c);
    return out;
}

/// phi(sigma_t(x) y).
inline cplx mixing_correlation(const Representation& rep, const WordPolynomial& x, const WordPolynomial& y, double t,
                               const MomentOptions& opts = {}) {
    return moment_of_polynomial(rep, modular_flow(rep, x, t) * y, opts);
}

/// A polynomial whose letters all live in copy 1 or copy 2 of H + H.
struct TaggedPolynomial {
    int copy = 1;
    WordPolynomial poly;
};

namespace detail {

inline void check_tagged(const Representation& doubled, std::span<const TaggedPolynomial> factors,
                         const MomentOptions& opts) {
    require_doubled(doubled, "freeness_defect");
    for (std::size_t i = 0; i < factors.size(); ++i) {
        const auto& f = factors[i];
        require(f.copy == 1 || f.copy == 2, "freeness_defect: copy tag must be 1 or 2");
        if (i > 0 && factors[i - 1].copy == f.copy) {
            throw ValidationError("freeness_defect: copy tags must strictly alternate");
        }
        for (const auto& [w, c] : f.poly.terms()) {
            for (const auto& l : w.letters()) {
                const int support = copy_support(doubled, l);
                if (support != f.copy && support != -1) {
                    throw ValidationError("freeness_defect: letter outside copy " + std::to_string(f.copy));
                }
            }
        }
        const cplx m = moment_of_polynomial(doubled, f.poly, opts);
        if (std::abs(m) > kCenteringTolerance) {
            throw ValidationError("freeness_defect: factor " + std::to_string(i + 1) + " is not centered (phi = " +
                                  std::to_string(std::abs(m)) + ")");
        }
    }
}

} // namespace detail

/// |phi(p_1 p_2 ... p_k)| for centered polynomials from alternating copies
/// of (M, phi) * (M, phi). Free independence makes this vanish.
inline double freeness_defect(const Representation& doubled, std::span<const TaggedPolynomial> factors,
                              const MomentOptions& opts = {}) {
    detail::check_tagged(doubled, factors, opts);
    WordPolynomial prod = WordPolynomial::unit();
    for (const auto& f : factors) prod = prod * f.poly;
    return std::abs(moment_of_polynomial(doubled, prod, opts));
}

} // namespace faw
