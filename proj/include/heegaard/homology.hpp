// First homology of a presentation via the Smith normal form of the
// abelianized relator matrix.  Arithmetic is exact: entries live in
// __int128 and every product is range-checked, so an overflow throws
// instead of corrupting an invariant factor.  The matrices occurring here
// are tiny (rank <= 7), far below the checked range.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "freegroup.hpp"

namespace heegaard {

/// Invariant factors > 1 (a divisibility chain) plus the free rank.
struct HomologyResult {
    std::vector<std::int64_t> torsion;
    int free_rank = 0;

    bool operator==(const HomologyResult& o) const {
        return torsion == o.torsion && free_rank == o.free_rank;
    }
};

namespace detail {

using i128 = __int128;

constexpr i128 kCheckedMax = i128(1) << 100;

inline i128 checked_mul(i128 a, i128 b) {
    if (a != 0 && (a > kCheckedMax || a < -kCheckedMax || b > kCheckedMax / (a < 0 ? -a : a) ||
                   b < -(kCheckedMax / (a < 0 ? -a : a))))
        throw std::overflow_error("homology: integer overflow in normal form");
    return a * b;
}

inline i128 abs128(i128 a) { return a < 0 ? -a : a; }

/// Smith normal form diagonal of an integer matrix (rows x cols).
inline std::vector<i128> smith_diagonal(std::vector<std::vector<i128>> m) {
    size_t rows = m.size();
    size_t cols = rows ? m[0].size() : 0;
    std::vector<i128> diag;
    size_t t = 0;
    while (t < rows && t < cols) {
        // find a pivot
        size_t pr = t, pc = t;
        bool found = false;
        for (size_t i = t; i < rows && !found; ++i)
            for (size_t j = t; j < cols && !found; ++j)
                if (m[i][j] != 0) { pr = i; pc = j; found = true; }
        if (!found) break;
        std::swap(m[t], m[pr]);
        for (size_t i = 0; i < rows; ++i) std::swap(m[i][t], m[i][pc]);

        bool dirty = true;
        while (dirty) {
            dirty = false;
            for (size_t i = t + 1; i < rows; ++i) {
                while (m[i][t] != 0) {
                    i128 q = m[t][t] == 0 ? 0 : m[i][t] / m[t][t];
                    for (size_t j = t; j < cols; ++j)
                        m[i][j] -= checked_mul(q, m[t][j]);
                    if (m[i][t] != 0) std::swap(m[i], m[t]);
                }
            }
            for (size_t j = t + 1; j < cols; ++j) {
                while (m[t][j] != 0) {
                    i128 q = m[t][t] == 0 ? 0 : m[t][j] / m[t][t];
                    for (size_t i = t; i < rows; ++i)
                        m[i][j] -= checked_mul(q, m[i][t]);
                    if (m[t][j] != 0) {
                        for (size_t i = t; i < rows; ++i) std::swap(m[i][j], m[i][t]);
                        dirty = true;
                    }
                }
            }
        }

        // enforce divisibility of later entries by the pivot
        i128 piv = abs128(m[t][t]);
        bool fixed = true;
        for (size_t i = t + 1; i < rows && fixed; ++i)
            for (size_t j = t + 1; j < cols && fixed; ++j)
                if (piv != 0 && m[i][j] % piv != 0) {
                    for (size_t jj = t; jj < cols; ++jj) m[t][jj] += m[i][jj];
                    fixed = false;
                }
        if (!fixed) continue;  // redo elimination at the same t

        diag.push_back(piv);
        ++t;
    }
    return diag;
}

} // namespace detail

/// Invariant factors of the abelianized relator matrix; free_rank is the
/// basis rank minus the matrix rank.
inline HomologyResult homology(const std::vector<Word>& relators, const Basis& basis) {
    std::vector<std::vector<detail::i128>> m;
    for (const Word& r : relators) {
        if (r.basis() != basis)
            throw std::invalid_argument("homology: relator over a different basis");
        AbelianVector v = abelianize(r);
        m.emplace_back(v.begin(), v.end());
    }
    HomologyResult res;
    if (m.empty()) {
        res.free_rank = basis.rank();
        return res;
    }
    std::vector<detail::i128> diag = detail::smith_diagonal(std::move(m));
    int rank = 0;
    for (detail::i128 d : diag) {
        if (d == 0) continue;
        ++rank;
        if (d > 1) res.torsion.push_back(static_cast<std::int64_t>(d));
    }
    res.free_rank = basis.rank() - rank;
    return res;
}

inline HomologyResult homology(const std::vector<CyclicWord>& relators, const Basis& basis) {
    std::vector<Word> ws;
    ws.reserve(relators.size());
    for (const CyclicWord& r : relators) ws.emplace_back(r.basis(), r.letters());
    return homology(ws, basis);
}

} // namespace heegaard
