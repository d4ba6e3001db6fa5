#pragma once

#include <vector>

namespace rqt {

// Minimum-cost assignment on an n x m cost matrix (n <= m), cost[i][j] >= row
// i assigned to column j. Returns, per row, the assigned column index.
// O(n^2 * m) shortest augmenting path with potentials.
std::vector<int> hungarian_assign(const std::vector<std::vector<double>>& cost);

}  // namespace rqt
