// Copyright (c) 2026 aga contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "aga/types.hpp"

namespace aga {

/// Result of a square linear assignment: permutation[i] is the column chosen
/// for row i, total_score the sum of the selected entries (row order).
struct AssignmentResult {
    std::vector<int> permutation;
    double total_score = 0.0;
};

/// Maximum-total-score assignment over a square, finite score matrix.
/// Among co-optimal assignments the lexicographically smallest permutation is
/// returned, so results are deterministic.
AssignmentResult solve_assignment(const ScoreMatrix& scores);

/// Exhaustive N! enumeration with the same tie-break rule. Test oracle;
/// refuses N > 9.
AssignmentResult brute_force_assignment(const ScoreMatrix& scores);

}  // namespace aga
