#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "../error.hpp"

namespace mmtsp::detail {

// Dense two-phase tableau simplex with Bland's rule:
//   minimize c.x  subject to  A x = b,  x >= 0.
// Returns nullopt when infeasible. Intended for small LPs only.
inline std::optional<std::vector<double>> simplex_minimize(std::vector<std::vector<double>> A, std::vector<double> b,
                                                           const std::vector<double>& c) {
    constexpr double eps = 1e-9;
    const std::size_t m = A.size();
    const std::size_t n = c.size();
    const std::size_t cols = n + m;  // originals + artificials
    const std::size_t rhs = cols;

    std::vector<std::vector<double>> T(m, std::vector<double>(cols + 1, 0.0));
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double sign = b[i] < 0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n; ++j) T[i][j] = sign * A[i][j];
        T[i][n + i] = 1.0;
        T[i][rhs] = sign * b[i];
        basis[i] = n + i;
    }

    auto pivot = [&](std::vector<double>& obj, std::size_t row, std::size_t col) {
        const double p = T[row][col];
        for (auto& v : T[row]) v /= p;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == row || T[i][col] == 0.0) continue;
            const double f = T[i][col];
            for (std::size_t j = 0; j <= cols; ++j) T[i][j] -= f * T[row][j];
        }
        const double f = obj[col];
        if (f != 0.0)
            for (std::size_t j = 0; j <= cols; ++j) obj[j] -= f * T[row][j];
        basis[row] = col;
    };

    // Optimizes the given cost vector over columns [0, allowed).
    auto optimize = [&](const std::vector<double>& cost, std::size_t allowed) {
        std::vector<double> obj(cols + 1, 0.0);
        for (std::size_t j = 0; j < cols; ++j) obj[j] = cost[j];
        for (std::size_t i = 0; i < m; ++i) {
            const double cb = cost[basis[i]];
            if (cb == 0.0) continue;
            for (std::size_t j = 0; j <= cols; ++j) obj[j] -= cb * T[i][j];
        }
        for (;;) {
            std::size_t enter = cols;
            for (std::size_t j = 0; j < allowed; ++j)
                if (obj[j] < -eps) {
                    enter = j;
                    break;
                }
            if (enter == cols) return;
            std::size_t leave = m;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m; ++i) {
                if (T[i][enter] <= eps) continue;
                const double ratio = T[i][rhs] / T[i][enter];
                if (ratio < best - eps || (ratio < best + eps && leave < m && basis[i] < basis[leave])) {
                    best = ratio;
                    leave = i;
                }
            }
            if (leave == m) throw InfeasibleError("simplex: unbounded objective");
            pivot(obj, leave, enter);
        }
    };

    std::vector<double> phase1(cols, 0.0);
    for (std::size_t j = n; j < cols; ++j) phase1[j] = 1.0;
    optimize(phase1, cols);
    double infeas = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] >= n) infeas += T[i][rhs];
    if (infeas > 1e-7) return std::nullopt;

    // Drive zero-level artificials out of the basis where possible.
    std::vector<double> scratch(cols + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < n) continue;
        for (std::size_t j = 0; j < n; ++j)
            if (std::abs(T[i][j]) > eps) {
                pivot(scratch, i, j);
                break;
            }
    }

    std::vector<double> phase2(cols, 0.0);
    for (std::size_t j = 0; j < n; ++j) phase2[j] = c[j];
    optimize(phase2, n);

    std::vector<double> x(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < n) x[basis[i]] = T[i][rhs];
    return x;
}

}  // namespace mmtsp::detail
