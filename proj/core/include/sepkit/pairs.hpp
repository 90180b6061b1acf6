#pragma once

#include <compare>
#include <cstddef>
#include <vector>

#include "sepkit/errors.hpp"

namespace sepkit {

using ClassId = std::size_t;

// Unordered pair of distinct classes, stored with lo < hi.
struct PairId {
    ClassId lo = 0;
    ClassId hi = 1;

    PairId() = default;
    PairId(ClassId a, ClassId b) {
        if (a == b) throw DomainError("PairId: classes must be distinct");
        lo = a < b ? a : b;
        hi = a < b ? b : a;
    }

    auto operator<=>(const PairId&) const = default;
};

inline std::size_t pair_count(std::size_t n) { return n * (n - 1) / 2; }

// Lexicographic index of (lo, hi) among all pairs over n classes.
inline std::size_t pair_index(const PairId& p, std::size_t n) {
    if (p.hi >= n) throw DomainError("pair_index: class id out of range");
    return p.lo * n - p.lo * (p.lo + 1) / 2 + (p.hi - p.lo - 1);
}

inline PairId pair_from_index(std::size_t idx, std::size_t n) {
    if (idx >= pair_count(n)) throw DomainError("pair_from_index: index out of range");
    std::size_t lo = 0;
    std::size_t row = n - 1;  // pairs with this lo
    while (idx >= row) {
        idx -= row;
        ++lo;
        --row;
    }
    return PairId(lo, lo + 1 + idx);
}

inline std::vector<PairId> all_pairs(std::size_t n) {
    std::vector<PairId> out;
    out.reserve(pair_count(n));
    for (ClassId i = 0; i < n; ++i)
        for (ClassId j = i + 1; j < n; ++j) out.emplace_back(i, j);
    return out;
}

}  // namespace sepkit
