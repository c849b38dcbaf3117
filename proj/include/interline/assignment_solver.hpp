#pragma once

#include <cstddef>
#include <vector>

namespace interline::detail {

/// Minimum-cost perfect assignment on a square matrix (shortest augmenting path with
/// potentials, O(n^3)). `Cost` only needs a zero value, +, - and <, so lexicographic
/// cost tuples work as well as integers. Returns the column chosen for each row.
template <class Cost>
std::vector<std::size_t> solve_square_assignment(const std::vector<std::vector<Cost>>& cost, Cost infinity) {
  const std::size_t n = cost.size();
  std::vector<Cost> u(n + 1, Cost{}), v(n + 1, Cost{});
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);  // match[col] = row, 1-based, 0 = free

  for (std::size_t row = 1; row <= n; ++row) {
    match[0] = row;
    std::size_t col0 = 0;
    std::vector<Cost> minv(n + 1, infinity);
    std::vector<char> used(n + 1, 0);
    do {
      used[col0] = 1;
      const std::size_t row0 = match[col0];
      Cost delta = infinity;
      std::size_t col1 = 0;
      for (std::size_t col = 1; col <= n; ++col) {
        if (used[col]) continue;
        const Cost cur = cost[row0 - 1][col - 1] - u[row0] - v[col];
        if (cur < minv[col]) {
          minv[col] = cur;
          way[col] = col0;
        }
        if (minv[col] < delta) {
          delta = minv[col];
          col1 = col;
        }
      }
      for (std::size_t col = 0; col <= n; ++col) {
        if (used[col]) {
          u[match[col]] = u[match[col]] + delta;
          v[col] = v[col] - delta;
        } else {
          minv[col] = minv[col] - delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      const std::size_t col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }

  std::vector<std::size_t> row_to_col(n, 0);
  for (std::size_t col = 1; col <= n; ++col) row_to_col[match[col] - 1] = col - 1;
  return row_to_col;
}

}  // namespace interline::detail
