#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "qpval/core/rational.hpp"

namespace qpval::finite {

using RationalMatrix = std::vector<std::vector<Rational>>;

namespace detail {

// Gauss-Jordan elimination in place on an augmented matrix; returns the pivot column of each pivot row.
inline std::vector<std::size_t> row_reduce(RationalMatrix& m, std::size_t num_cols)
{
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < num_cols && row < m.size(); ++col) {
        std::size_t sel = row;
        while (sel < m.size() && m[sel][col] == 0) ++sel;
        if (sel == m.size()) continue;
        std::swap(m[row], m[sel]);
        const Rational inv = 1 / m[row][col];
        for (auto& v : m[row]) v *= inv;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == row || m[r][col] == 0) continue;
            const Rational f = m[r][col];
            for (std::size_t c = col; c < m[r].size(); ++c) m[r][c] -= f * m[row][c];
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

} // namespace detail

// Exact solution of a x = b when it exists and is unique.
inline std::optional<std::vector<Rational>> solve_unique(const RationalMatrix& a, const std::vector<Rational>& b)
{
    if (a.size() != b.size()) return std::nullopt;
    const std::size_t cols = a.empty() ? 0 : a.front().size();
    RationalMatrix m(a.size());
    for (std::size_t r = 0; r < a.size(); ++r) {
        m[r] = a[r];
        m[r].push_back(b[r]);
    }
    const auto pivots = detail::row_reduce(m, cols);
    if (pivots.size() != cols) return std::nullopt;
    for (std::size_t r = pivots.size(); r < m.size(); ++r)
        if (m[r][cols] != 0) return std::nullopt;
    std::vector<Rational> x(cols);
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = m[r][cols];
    return x;
}

inline std::size_t rank(const RationalMatrix& a)
{
    if (a.empty()) return 0;
    RationalMatrix m = a;
    return detail::row_reduce(m, a.front().size()).size();
}

// Indices of a maximal linearly independent subset of the rows, chosen greedily in order.
inline std::vector<std::size_t> independent_rows(const RationalMatrix& rows)
{
    std::vector<std::size_t> chosen;
    RationalMatrix basis;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        basis.push_back(rows[i]);
        if (rank(basis) == basis.size()) chosen.push_back(i);
        else basis.pop_back();
    }
    return chosen;
}

// Calls fn on every k-subset of {0..n-1} in lexicographic order; stops early when fn returns false.
inline void for_each_subset(std::size_t n, std::size_t k, const std::function<bool(const std::vector<std::size_t>&)>& fn)
{
    if (k > n) return;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        if (!fn(idx)) return;
        if (k == 0) return;
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

} // namespace qpval::finite
