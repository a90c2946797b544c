#pragma once

#include <cstdint>
#include <random>

namespace faw {

/// Seeded generator with a platform-stable output stream.
///
/// The engine is std::mt19937_64, whose sequence is fixed by the C++
/// standard. Uniform doubles are built from the top 53 bits of each draw
/// instead of std::uniform_real_distribution, whose algorithm is left to
/// the implementation. Together this makes every seeded computation
/// bit-reproducible across compilers and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1).
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform integer in [0, n). Uses rejection to avoid modulo bias.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace faw
