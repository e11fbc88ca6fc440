// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <limits>
#include <vector>

#include "i2a/core/error.hpp"

namespace i2a::retrieval {

using Matrix = std::vector<std::vector<double>>;

struct Assignment {
    std::vector<int> rows;
    std::vector<int> cols;
    double total = 0.0;
};

namespace detail {

/// Kuhn-Munkres with potentials, minimizing cost for n <= m (rows <= cols).
/// Returns col_of_row.
inline std::vector<int> min_cost_assignment(const Matrix& cost)
{
    const int n = int(cost.size());
    const int m = n ? int(cost[0].size()) : 0;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(std::size_t(n) + 1, 0.0), v(std::size_t(m) + 1, 0.0);
    std::vector<int> p(std::size_t(m) + 1, 0), way(std::size_t(m) + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(std::size_t(m) + 1, inf);
        std::vector<char> used(std::size_t(m) + 1, 0);
        do {
            used[std::size_t(j0)] = 1;
            const int i0 = p[std::size_t(j0)];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= m; ++j) {
                if (used[std::size_t(j)])
                    continue;
                const double cur = cost[std::size_t(i0 - 1)][std::size_t(j - 1)] - u[std::size_t(i0)] - v[std::size_t(j)];
                if (cur < minv[std::size_t(j)]) {
                    minv[std::size_t(j)] = cur;
                    way[std::size_t(j)] = j0;
                }
                if (minv[std::size_t(j)] < delta) {
                    delta = minv[std::size_t(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[std::size_t(j)]) {
                    u[std::size_t(p[std::size_t(j)])] += delta;
                    v[std::size_t(j)] -= delta;
                } else {
                    minv[std::size_t(j)] -= delta;
                }
            }
            j0 = j1;
        } while (p[std::size_t(j0)] != 0);
        do {
            const int j1 = way[std::size_t(j0)];
            p[std::size_t(j0)] = p[std::size_t(j1)];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> col_of_row(std::size_t(n), -1);
    for (int j = 1; j <= m; ++j)
        if (p[std::size_t(j)] != 0)
            col_of_row[std::size_t(p[std::size_t(j)] - 1)] = j - 1;
    return col_of_row;
}

} // namespace detail

/// Maximum-total-similarity assignment over min(rows, cols) pairs.
/// Pairs are reported in ascending row order.
inline Assignment max_similarity_assignment(const Matrix& sim)
{
    Assignment out;
    if (sim.empty() || sim[0].empty())
        return out;
    const std::size_t n = sim.size(), m = sim[0].size();
    for (const auto& row : sim)
        if (row.size() != m)
            throw DimensionMismatch("ragged similarity matrix");

    const bool transpose = n > m;
    Matrix cost(transpose ? m : n, std::vector<double>(transpose ? n : m));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
            (transpose ? cost[j][i] : cost[i][j]) = -sim[i][j];

    const auto match = detail::min_cost_assignment(cost);
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t k = 0; k < match.size(); ++k)
        pairs.emplace_back(transpose ? match[k] : int(k), transpose ? int(k) : match[k]);
    std::sort(pairs.begin(), pairs.end());
    for (const auto& [r, c] : pairs) {
        out.rows.push_back(r);
        out.cols.push_back(c);
        out.total += sim[std::size_t(r)][std::size_t(c)];
    }
    return out;
}

} // namespace i2a::retrieval
