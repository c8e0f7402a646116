// Copyright (c) 2026 aga contributors
// SPDX-License-Identifier: Apache-2.0

#include "aga/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace aga {

namespace {

void check_matrix(const ScoreMatrix& s) {
    require(s.rows() >= 1, "assignment: matrix must be at least 1x1");
    require(s.rows() == s.cols(), "assignment: matrix must be square");
    require(s.allFinite(), "assignment: all entries must be finite");
}

double row_order_total(const ScoreMatrix& s, const std::vector<int>& perm) {
    double total = 0.0;
    for (int i = 0; i < static_cast<int>(perm.size()); ++i) total += s(i, perm[i]);
    return total;
}

// Minimizing Kuhn-Munkres with row/column potentials, O(N^3). Rows may be
// masked out (already fixed by the caller); masked rows/cols are skipped.
// Returns the column assigned to each active row.
std::vector<int> kuhn_munkres_min(const Eigen::MatrixXd& cost,
                                  const std::vector<int>& rows,
                                  const std::vector<int>& cols) {
    const int n = static_cast<int>(rows.size());
    const double inf = std::numeric_limits<double>::infinity();

    // 1-based internal arrays, the classic potential formulation.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = 0;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(rows[i0 - 1], cols[j - 1]) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= n; ++j) {
        if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
    }
    return row_to_col;
}

// Optimal completion for the submatrix of free rows x free columns, reported
// as a full-length permutation with the fixed prefix already placed.
std::vector<int> complete_optimally(const Eigen::MatrixXd& cost,
                                    const std::vector<int>& fixed_cols,
                                    int n) {
    const int k = static_cast<int>(fixed_cols.size());
    std::vector<int> perm(fixed_cols);
    perm.resize(n, -1);
    if (k == n) return perm;

    std::vector<char> taken(n, 0);
    for (int c : fixed_cols) taken[c] = 1;
    std::vector<int> rows(n - k), cols;
    std::iota(rows.begin(), rows.end(), k);
    for (int c = 0; c < n; ++c) {
        if (!taken[c]) cols.push_back(c);
    }

    const std::vector<int> sub = kuhn_munkres_min(cost, rows, cols);
    for (int r = 0; r < n - k; ++r) perm[k + r] = cols[sub[r]];
    return perm;
}

}  // namespace

AssignmentResult solve_assignment(const ScoreMatrix& scores) {
    check_matrix(scores);
    const int n = static_cast<int>(scores.rows());
    const Eigen::MatrixXd cost = -scores;  // maximize by minimizing the negation

    std::vector<int> best = complete_optimally(cost, {}, n);
    const double best_total = row_order_total(scores, best);

    // Lexicographic refinement: fix columns row by row, keeping the smallest
    // column index that still admits a completion of optimal total.
    std::vector<int> fixed;
    fixed.reserve(n);
    for (int i = 0; i < n; ++i) {
        std::vector<char> taken(n, 0);
        for (int c : fixed) taken[c] = 1;
        for (int j = 0; j < n; ++j) {
            if (taken[j]) continue;
            if (j == best[i]) {  // incumbent column, optimal by construction
                fixed.push_back(j);
                break;
            }
            fixed.push_back(j);
            const std::vector<int> candidate = complete_optimally(cost, fixed, n);
            if (row_order_total(scores, candidate) == best_total) {
                best = candidate;
                break;
            }
            fixed.pop_back();
        }
    }

    return AssignmentResult{best, row_order_total(scores, best)};
}

AssignmentResult brute_force_assignment(const ScoreMatrix& scores) {
    check_matrix(scores);
    const int n = static_cast<int>(scores.rows());
    require(n <= 9, "brute_force_assignment: refusing N > 9");

    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);

    std::vector<int> best;
    double best_total = -std::numeric_limits<double>::infinity();
    do {
        const double total = row_order_total(scores, perm);
        if (total > best_total) {  // strict: the first (lex-smallest) tie wins
            best_total = total;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    return AssignmentResult{best, best_total};
}

}  // namespace aga
