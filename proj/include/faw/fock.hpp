#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "faw/error.hpp"
#include "faw/hilbert.hpp"
#include "faw/moments.hpp"

namespace faw {

using FockVector = Eigen::VectorXcd;

struct FockOptions {
    std::size_t max_dimension = 20000;      // D, the number of basis words
    std::size_t max_dense_dimension = 2048; // D for which D x D matrices may be built
};

/// F(H) truncated to tensor levels 0..N over a <.,.>_U-orthonormal basis
/// u_0, ..., u_{d-1} of H. Basis word (l_1, ..., l_k) sits at
///   offset(k) + l_1 d^{k-1} + ... + l_k,
/// so the first letter is the most significant digit and Omega is index 0.
class TruncatedFock {
public:
    TruncatedFock(Representation rep, int N, FockOptions opts = {}) : rep_(std::move(rep)), N_(N), opts_(opts) {
        detail::require(N_ >= 1, "build_fock: truncation level N must be >= 1");
        d_ = rep_.dimension();
        detail::require(d_ >= 1, "build_fock: empty representation");
        offsets_.push_back(0);
        std::size_t level_size = 1;
        std::size_t total = 0;
        for (int k = 0; k <= N_; ++k) {
            total += level_size;
            if (total > opts_.max_dimension) {
                throw CapError("build_fock: Fock dimension exceeds the budget of " +
                               std::to_string(opts_.max_dimension) + " (d = " + std::to_string(d_) +
                               ", N = " + std::to_string(N_) + ")");
            }
            powers_.push_back(level_size);
            offsets_.push_back(total);
            level_size *= d_;
        }
        dim_ = total;
        orthonormalize();
        build_copy1_mask();
    }

    const Representation& rep() const { return rep_; }
    int level() const { return N_; }
    std::size_t one_particle_dimension() const { return d_; }
    std::size_t dimension() const { return dim_; }
    const FockOptions& options() const { return opts_; }

    // First index of level k, for 0 <= k <= N + 1 (offset(N + 1) == D).
    std::size_t offset(int k) const { return offsets_[static_cast<std::size_t>(k)]; }
    // d^k.
    std::size_t level_size(int k) const { return powers_[static_cast<std::size_t>(k)]; }

    const std::vector<RepVector>& onb() const { return onb_; }
    // max |<u_j, u_k>_U - delta_jk| after orthonormalization.
    double gram_error() const { return gram_error_; }

    // c_k = <xi, u_k>_U, so xi = sum_k c_k u_k.
    std::vector<cplx> coordinates(const RepVector& xi) const {
        std::vector<cplx> c(d_);
        for (std::size_t k = 0; k < d_; ++k) c[k] = rep_.inner_U(xi, onb_[k]);
        return c;
    }

    int level_of(std::size_t index) const {
        detail::require(index < dim_, "level_of: index out of range");
        int k = 0;
        while (offsets_[static_cast<std::size_t>(k) + 1] <= index) ++k;
        return k;
    }

    std::vector<std::size_t> letters_of(std::size_t index) const {
        const int k = level_of(index);
        std::size_t r = index - offset(k);
        std::vector<std::size_t> out(static_cast<std::size_t>(k));
        for (int i = k - 1; i >= 0; --i) {
            out[static_cast<std::size_t>(i)] = r % d_;
            r /= d_;
        }
        return out;
    }

    FockVector vacuum() const {
        FockVector v = FockVector::Zero(static_cast<Eigen::Index>(dim_));
        v(0) = 1.0;
        return v;
    }

    // Only meaningful for doubled representations: true iff every letter of
    // the basis word lies in copy 1.
    bool is_copy1_word(std::size_t index) const { return copy1_word_.at(index); }
    bool doubled() const { return doubled_; }

private:
    void orthonormalize() {
        // Modified Gram-Schmidt, applied twice, on the standard coordinate
        // vectors. Copy-1 and copy-2 coordinates of a doubled representation
        // are exactly U-orthogonal, so every u_k lives in a single copy.
        onb_.reserve(d_);
        for (std::size_t i = 0; i < d_; ++i) {
            RepVector v{std::vector<cplx>(d_), false};
            v.coords[i] = 1.0;
            for (int pass = 0; pass < 2; ++pass) {
                for (const auto& u : onb_) {
                    const cplx proj = rep_.inner_U(v, u);
                    for (std::size_t j = 0; j < d_; ++j) v.coords[j] -= proj * u.coords[j];
                }
            }
            const double nrm = std::sqrt(rep_.inner_U(v, v).real());
            if (!(nrm > 1e-10)) throw NumericError("build_fock: deformed inner product is degenerate");
            for (auto& z : v.coords) z /= nrm;
            onb_.push_back(std::move(v));
        }
        for (std::size_t j = 0; j < d_; ++j) {
            for (std::size_t k = 0; k < d_; ++k) {
                const cplx g = rep_.inner_U(onb_[j], onb_[k]) - (j == k ? 1.0 : 0.0);
                gram_error_ = std::max(gram_error_, std::abs(g));
            }
        }
    }

    void build_copy1_mask() {
        doubled_ = is_doubled(rep_);
        copy1_word_.assign(dim_, true);
        if (!doubled_) return;
        std::vector<bool> letter_in_copy1(d_);
        for (std::size_t l = 0; l < d_; ++l) letter_in_copy1[l] = copy_support(rep_, onb_[l]) == 1;
        for (int k = 1; k <= N_; ++k) {
            // Word (l, w) is copy-1 iff l is and w is.
            const std::size_t below = level_size(k - 1);
            for (std::size_t l = 0; l < d_; ++l) {
                for (std::size_t w = 0; w < below; ++w) {
                    copy1_word_[offset(k) + l * below + w] = letter_in_copy1[l] && copy1_word_[offset(k - 1) + w];
                }
            }
        }
    }

    Representation rep_;
    int N_;
    FockOptions opts_;
    std::size_t d_ = 0;
    std::size_t dim_ = 0;
    std::vector<std::size_t> offsets_;
    std::vector<std::size_t> powers_;
    std::vector<RepVector> onb_;
    double gram_error_ = 0.0;
    bool doubled_ = false;
    std::vector<bool> copy1_word_;
};

inline TruncatedFock build_fock(const Representation& rep, int N, FockOptions opts = {}) {
    return TruncatedFock(rep, N, opts);
}

/// Dense D x D matrix over the basis words of a TruncatedFock. The basis is
/// orthonormal, so adjoints are conjugate transposes.
struct FockOperator {
    Eigen::MatrixXcd matrix;

    FockVector operator*(const FockVector& v) const { return matrix * v; }
    friend FockOperator operator*(const FockOperator& a, const FockOperator& b) { return {a.matrix * b.matrix}; }
    FockOperator adjoint() const { return {matrix.adjoint()}; }
};

namespace detail {

inline void require_dense(const TruncatedFock& F, const char* where) {
    if (F.dimension() > F.options().max_dense_dimension) {
        throw CapError(std::string(where) + ": Fock dimension " + std::to_string(F.dimension()) +
                       " exceeds the dense-matrix limit " + std::to_string(F.options().max_dense_dimension));
    }
}

inline void require_vector(const TruncatedFock& F, const FockVector& v, const char* where) {
    if (static_cast<std::size_t>(v.size()) != F.dimension()) {
        throw ValidationError(std::string(where) + ": Fock vector dimension mismatch");
    }
}

} // namespace detail

// --- matrix-free application ------------------------------------------------

/// l(xi) v. Words of level N are sent to 0.
inline FockVector apply_creation(const TruncatedFock& F, const std::vector<cplx>& c, const FockVector& v) {
    detail::require_vector(F, v, "apply_creation");
    FockVector out = FockVector::Zero(v.size());
    const std::size_t d = F.one_particle_dimension();
    for (int k = 0; k < F.level(); ++k) {
        const std::size_t n = F.level_size(k);
        const std::size_t src = F.offset(k);
        const std::size_t dst = F.offset(k + 1);
        for (std::size_t l = 0; l < d; ++l) {
            if (c[l] == cplx(0.0, 0.0)) continue;
            out.segment(static_cast<Eigen::Index>(dst + l * n), static_cast<Eigen::Index>(n)) +=
                c[l] * v.segment(static_cast<Eigen::Index>(src), static_cast<Eigen::Index>(n));
        }
    }
    return out;
}

/// l(xi)* v: (l(xi)* v)(w) = sum_l conj(c_l) v(l w); Omega is sent to 0.
inline FockVector apply_annihilation(const TruncatedFock& F, const std::vector<cplx>& c, const FockVector& v) {
    detail::require_vector(F, v, "apply_annihilation");
    FockVector out = FockVector::Zero(v.size());
    const std::size_t d = F.one_particle_dimension();
    for (int k = 0; k < F.level(); ++k) {
        const std::size_t n = F.level_size(k);
        const std::size_t dst = F.offset(k);
        const std::size_t src = F.offset(k + 1);
        for (std::size_t l = 0; l < d; ++l) {
            if (c[l] == cplx(0.0, 0.0)) continue;
            out.segment(static_cast<Eigen::Index>(dst), static_cast<Eigen::Index>(n)) +=
                std::conj(c[l]) * v.segment(static_cast<Eigen::Index>(src + l * n), static_cast<Eigen::Index>(n));
        }
    }
    return out;
}

/// s(xi) v = (l(xi) + l(xi)*) v / 2.
inline FockVector apply_s(const TruncatedFock& F, const RepVector& xi, const FockVector& v) {
    detail::require(xi.real, "s_op: s(xi) needs a real vector");
    const auto c = F.coordinates(xi);
    return 0.5 * (apply_creation(F, c, v) + apply_annihilation(F, c, v));
}

/// <Omega, s(xi_1) ... s(xi_n) Omega>_U. Requires N >= n, so no intermediate
/// vector reaches a truncated level.
inline cplx fock_moment(const TruncatedFock& F, const Word& w) {
    if (static_cast<std::size_t>(F.level()) < w.size()) {
        throw ValidationError("fock_moment: truncation level N = " + std::to_string(F.level()) +
                              " is below the word length " + std::to_string(w.size()));
    }
    FockVector v = F.vacuum();
    for (std::size_t i = w.size(); i-- > 0;) v = apply_s(F, w[i], v);
    return std::conj(v(0)) + cplx(0.0, 0.0); // no negative zero
}

inline cplx fock_moment_of_polynomial(const TruncatedFock& F, const WordPolynomial& p) {
    cplx total = 0.0;
    for (const auto& [w, c] : p.terms()) total += c * fock_moment(F, w);
    return total;
}

// --- dense operators ----------------------------------------------------------

inline FockOperator creation_op(const TruncatedFock& F, const RepVector& xi) {
    detail::require_dense(F, "creation_op");
    const auto c = F.coordinates(xi);
    const auto D = static_cast<Eigen::Index>(F.dimension());
    FockOperator op{Eigen::MatrixXcd::Zero(D, D)};
    const std::size_t d = F.one_particle_dimension();
    for (int k = 0; k < F.level(); ++k) {
        const std::size_t n = F.level_size(k);
        for (std::size_t l = 0; l < d; ++l) {
            for (std::size_t w = 0; w < n; ++w) {
                op.matrix(static_cast<Eigen::Index>(F.offset(k + 1) + l * n + w),
                          static_cast<Eigen::Index>(F.offset(k) + w)) = c[l];
            }
        }
    }
    return op;
}

inline FockOperator s_op(const TruncatedFock& F, const RepVector& xi) {
    detail::require(xi.real, "s_op: s(xi) needs a real vector");
    const FockOperator l = creation_op(F, xi);
    return {0.5 * (l.matrix + l.matrix.adjoint())};
}

/// Matrix of a linear map on H in the orthonormal basis:
/// M(j, k) = <T u_k, u_j>_U.
inline Eigen::MatrixXcd onb_matrix(const TruncatedFock& F, const std::function<RepVector(const RepVector&)>& T) {
    const std::size_t d = F.one_particle_dimension();
    Eigen::MatrixXcd M(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t k = 0; k < d; ++k) {
        const RepVector image = T(F.onb()[k]);
        for (std::size_t j = 0; j < d; ++j) {
            M(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = F.rep().inner_U(image, F.onb()[j]);
        }
    }
    return M;
}

/// F(V): identity on Omega and V^{(x)k} on level k.
inline FockOperator second_quantize(const TruncatedFock& F, const Eigen::MatrixXcd& V) {
    detail::require_dense(F, "second_quantize");
    const auto d = static_cast<Eigen::Index>(F.one_particle_dimension());
    if (V.rows() != d || V.cols() != d) throw ValidationError("second_quantize: V must be d x d");
    const auto D = static_cast<Eigen::Index>(F.dimension());
    FockOperator op{Eigen::MatrixXcd::Zero(D, D)};
    Eigen::MatrixXcd block = Eigen::MatrixXcd::Identity(1, 1);
    op.matrix(0, 0) = 1.0;
    for (int k = 1; k <= F.level(); ++k) {
        // First letter outermost: V^{(x)k} = V (x) V^{(x)(k-1)}.
        const Eigen::Index n = block.rows();
        Eigen::MatrixXcd next(d * n, d * n);
        for (Eigen::Index a = 0; a < d; ++a) {
            for (Eigen::Index b = 0; b < d; ++b) next.block(a * n, b * n, n, n) = V(a, b) * block;
        }
        block = std::move(next);
        const auto off = static_cast<Eigen::Index>(F.offset(k));
        op.matrix.block(off, off, block.rows(), block.cols()) = block;
    }
    return op;
}

/// F(U_t); Ad(F(U_{-t})) is the modular flow.
inline FockOperator modular_unitary(const TruncatedFock& F, double t) {
    return second_quantize(F, onb_matrix(F, [&](const RepVector& v) { return F.rep().apply_Ut(v, t); }));
}

struct DeformationPair {
    FockOperator alpha; // F(V_s)
    FockOperator beta;  // F((xi, eta) -> (xi, -eta))
};

inline DeformationPair deformation_pair(const TruncatedFock& F, double s) {
    require_doubled(F.rep(), "deformation_pair");
    const auto& rep = F.rep();
    return {second_quantize(F, onb_matrix(F, [&](const RepVector& v) { return rotate_copies(rep, v, s); })),
            second_quantize(F, onb_matrix(F, [&](const RepVector& v) { return reflect_copy2(rep, v); }))};
}

/// Orthogonal projection onto F(H + 0): zeroes every basis word with a copy-2 letter.
inline FockVector project_copy1(const TruncatedFock& F, const FockVector& v) {
    require_doubled(F.rep(), "project_copy1");
    detail::require_vector(F, v, "project_copy1");
    FockVector out = v;
    for (std::size_t i = 0; i < F.dimension(); ++i) {
        if (!F.is_copy1_word(i)) out(static_cast<Eigen::Index>(i)) = 0.0;
    }
    return out;
}

struct TransversalityGap {
    double lhs; // |zeta - alpha_{2s} zeta|
    double rhs; // 2 |alpha_s zeta - P alpha_s zeta|
};

// Same as below with alpha_s and alpha_{2s} supplied, for sweeps over many zeta.
inline TransversalityGap transversality_gap(const TruncatedFock& F, const FockVector& zeta, const FockOperator& alpha_s,
                                            const FockOperator& alpha_2s) {
    require_doubled(F.rep(), "transversality_gap");
    detail::require_vector(F, zeta, "transversality_gap");
    const double tol = 1e-12 * std::max(1.0, zeta.norm());
    for (std::size_t i = 0; i < F.dimension(); ++i) {
        if (!F.is_copy1_word(i) && std::abs(zeta(static_cast<Eigen::Index>(i))) > tol) {
            throw ValidationError("transversality_gap: zeta has a copy-2 component");
        }
    }
    const FockVector a2s = alpha_2s * zeta;
    const FockVector as = alpha_s * zeta;
    return {(zeta - a2s).norm(), 2.0 * (as - project_copy1(F, as)).norm()};
}

inline TransversalityGap transversality_gap(const TruncatedFock& F, const FockVector& zeta, double s) {
    require_doubled(F.rep(), "transversality_gap");
    detail::require(s > 0.0 && s <= 1.0, "transversality_gap: s must lie in (0, 1]");
    return transversality_gap(F, zeta, deformation_pair(F, s).alpha, deformation_pair(F, 2.0 * s).alpha);
}

} // namespace faw
