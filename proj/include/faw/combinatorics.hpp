#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "faw/error.hpp"

namespace faw {

using BigInt = boost::multiprecision::cpp_int;

/// 1-based pair (first < second) of positions in {1, ..., 2p}.
struct IndexPair {
    int first = 0;
    int second = 0;

    friend bool operator==(const IndexPair&, const IndexPair&) = default;
    friend auto operator<=>(const IndexPair&, const IndexPair&) = default;
};

inline constexpr int kDefaultEnumerationCap = 12;

/// A pairing of {1, ..., 2p} with no crossing quadruple. Pairs are kept
/// sorted by their first index.
class NonCrossingPairing {
public:
    NonCrossingPairing() = default;

    // Validates the partition and the non-crossing property.
    explicit NonCrossingPairing(std::vector<IndexPair> pairs);

    std::span<const IndexPair> pairs() const { return pairs_; }
    int size() const { return static_cast<int>(pairs_.size()); }   // p
    int points() const { return 2 * size(); }                       // 2p

    // Mirror i -> 2p + 1 - i.
    NonCrossingPairing reflected() const;

    std::string to_string() const;

    friend bool operator==(const NonCrossingPairing&, const NonCrossingPairing&) = default;
    friend auto operator<=>(const NonCrossingPairing& a, const NonCrossingPairing& b) {
        return std::lexicographical_compare_three_way(a.pairs_.begin(), a.pairs_.end(),
                                                      b.pairs_.begin(), b.pairs_.end());
    }

private:
    struct Trusted {};
    NonCrossingPairing(std::vector<IndexPair> pairs, Trusted) : pairs_(std::move(pairs)) {}

    friend std::vector<NonCrossingPairing> enumerate_nc_pairings(int p, int cap);

    std::vector<IndexPair> pairs_;
};

/// C_p = binom(2p, p) / (p + 1), exact.
inline BigInt catalan(int p) {
    detail::require(p >= 0, "catalan: p must be non-negative");
    BigInt c = 1;
    // C_{k+1} = C_k * 2(2k+1) / (k+2); the division is always exact.
    for (int k = 0; k < p; ++k) {
        c *= 2 * (2 * k + 1);
        c /= (k + 2);
    }
    return c;
}

/// Checks that `pairs` partitions {1, ..., n} into 2-element classes and
/// returns whether it is non-crossing. Pair orientation is irrelevant here.
inline bool is_noncrossing(std::span<const IndexPair> pairs, int n) {
    detail::require(n >= 0 && n % 2 == 0, "is_noncrossing: n must be even and non-negative");
    detail::require(pairs.size() * 2 == static_cast<std::size_t>(n),
                    "is_noncrossing: pair count does not match n");
    std::vector<int> partner(static_cast<std::size_t>(n) + 1, 0);
    for (const auto& pr : pairs) {
        const int a = std::min(pr.first, pr.second);
        const int b = std::max(pr.first, pr.second);
        detail::require(a >= 1 && b <= n && a != b, "is_noncrossing: index out of range");
        detail::require(partner[a] == 0 && partner[b] == 0, "is_noncrossing: repeated index");
        partner[a] = b;
        partner[b] = a;
    }
    // Stack check: a pairing is non-crossing iff closing indices always match
    // the most recently opened one.
    std::vector<int> open;
    open.reserve(static_cast<std::size_t>(n) / 2);
    for (int i = 1; i <= n; ++i) {
        if (partner[i] > i) {
            open.push_back(i);
        } else {
            if (open.empty() || open.back() != partner[i]) return false;
            open.pop_back();
        }
    }
    return true;
}

inline NonCrossingPairing::NonCrossingPairing(std::vector<IndexPair> pairs) : pairs_(std::move(pairs)) {
    for (auto& pr : pairs_) {
        detail::require(pr.first < pr.second, "NonCrossingPairing: expected first < second in every pair");
    }
    std::sort(pairs_.begin(), pairs_.end());
    if (!is_noncrossing(pairs_, static_cast<int>(2 * pairs_.size()))) {
        throw ValidationError("NonCrossingPairing: pairs cross");
    }
}

inline NonCrossingPairing NonCrossingPairing::reflected() const {
    const int n = points();
    std::vector<IndexPair> out;
    out.reserve(pairs_.size());
    for (const auto& pr : pairs_) out.push_back({n + 1 - pr.second, n + 1 - pr.first});
    std::sort(out.begin(), out.end());
    return NonCrossingPairing(std::move(out), Trusted{});
}

inline std::string NonCrossingPairing::to_string() const {
    std::string s;
    for (const auto& pr : pairs_) {
        s += '(';
        s += std::to_string(pr.first);
        s += ',';
        s += std::to_string(pr.second);
        s += ')';
    }
    return s;
}

namespace detail {

struct Interval {
    int lo;
    int hi;
};

template <class Visitor>
void nc_recurse(std::vector<Interval>& pending, std::vector<IndexPair>& pairs, Visitor& visit) {
    if (pending.empty()) {
        visit(std::span<const IndexPair>(pairs));
        return;
    }
    // The top interval always holds the smallest unpaired index, so pairs are
    // produced in sorted order and ascending partners give lexicographic output.
    const Interval top = pending.back();
    pending.pop_back();
    for (int partner = top.lo + 1; partner <= top.hi; partner += 2) {
        const std::size_t mark = pending.size();
        if (partner < top.hi) pending.push_back({partner + 1, top.hi});
        if (partner > top.lo + 1) pending.push_back({top.lo + 1, partner - 1});
        pairs.push_back({top.lo, partner});
        nc_recurse(pending, pairs, visit);
        pairs.pop_back();
        pending.resize(mark);
    }
    pending.push_back(top);
}

} // namespace detail

/// Calls `visit(std::span<const IndexPair>)` once per non-crossing pairing of
/// {1, ..., 2p}, in lexicographic order of the sorted pair lists. Only
/// non-crossing pairings are generated: position 1 is matched with an
/// odd-offset partner and the two remaining intervals are paired recursively.
template <class Visitor>
void for_each_nc_pairing(int p, Visitor&& visit, int cap = kDefaultEnumerationCap) {
    detail::require(p >= 0, "enumerate_nc_pairings: p must be non-negative");
    if (p > cap) {
        throw CapError("enumerate_nc_pairings: p = " + std::to_string(p) + " exceeds the enumeration cap " +
                       std::to_string(cap));
    }
    std::vector<detail::Interval> pending;
    std::vector<IndexPair> pairs;
    pairs.reserve(static_cast<std::size_t>(p));
    if (p > 0) pending.push_back({1, 2 * p});
    detail::nc_recurse(pending, pairs, visit);
}

inline std::vector<NonCrossingPairing> enumerate_nc_pairings(int p, int cap = kDefaultEnumerationCap) {
    std::vector<NonCrossingPairing> out;
    for_each_nc_pairing(
        p,
        [&](std::span<const IndexPair> pairs) {
            out.push_back(NonCrossingPairing(std::vector<IndexPair>(pairs.begin(), pairs.end()),
                                             NonCrossingPairing::Trusted{}));
        },
        cap);
    return out;
}

} // namespace faw
