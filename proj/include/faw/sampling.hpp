#pragma once

#include <cstddef>
#include <vector>

#include "faw/fock.hpp"
#include "faw/hilbert.hpp"
#include "faw/moments.hpp"
#include "faw/random.hpp"

// Seeded random inputs for property checks. Draw order is part of the
// contract: the same seed always yields the same objects.
namespace faw {

/// Real vector with i.i.d. uniform [-1, 1) coefficients on real_basis().
inline RepVector random_real_vector(const Representation& rep, Rng& rng) {
    std::vector<cplx> coords(rep.dimension());
    for (const auto& b : rep.real_basis()) {
        const double a = rng.uniform(-1.0, 1.0);
        for (std::size_t j = 0; j < coords.size(); ++j) coords[j] += a * b.coords[j];
    }
    return rep.real_vector(std::move(coords));
}

inline Word random_word(const Representation& rep, std::size_t n, Rng& rng) {
    std::vector<RepVector> letters;
    letters.reserve(n);
    for (std::size_t i = 0; i < n; ++i) letters.push_back(random_real_vector(rep, rng));
    return Word(std::move(letters));
}

/// Real vector of a doubled representation supported in one copy.
inline RepVector random_copy_vector(const Representation& doubled, const Representation& half, int copy, Rng& rng) {
    return embed_copy(doubled, random_real_vector(half, rng), copy);
}

inline Word random_copy_word(const Representation& doubled, const Representation& half, int copy, std::size_t n,
                             Rng& rng) {
    std::vector<RepVector> letters;
    letters.reserve(n);
    for (std::size_t i = 0; i < n; ++i) letters.push_back(random_copy_vector(doubled, half, copy, rng));
    return Word(std::move(letters));
}

/// Unit Fock vector on the copy-1 basis words of one level, with
/// coefficients uniform in the square [-1, 1)^2.
inline FockVector random_copy1_fock_vector(const TruncatedFock& F, int level, Rng& rng) {
    detail::require(level >= 0 && level <= F.level(), "random_copy1_fock_vector: level out of range");
    FockVector v = FockVector::Zero(static_cast<Eigen::Index>(F.dimension()));
    for (std::size_t i = F.offset(level); i < F.offset(level + 1); ++i) {
        if (!F.is_copy1_word(i)) continue;
        const double re = rng.uniform(-1.0, 1.0);
        const double im = rng.uniform(-1.0, 1.0);
        v(static_cast<Eigen::Index>(i)) = cplx(re, im);
    }
    const double n = v.norm();
    if (n > 0.0) v /= n;
    return v;
}

} // namespace faw
