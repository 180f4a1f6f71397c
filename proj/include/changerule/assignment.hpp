#pragma once

// Minimum-cost perfect assignment on a square integer cost matrix.
//
// The Hungarian method with row/column potentials finds an optimal
// assignment and an optimal dual. Every optimal assignment uses only edges
// that are tight under that dual, so the lexicographically smallest optimal
// assignment (row 0 to the lowest feasible column, then row 1, ...) is the
// lexicographically smallest perfect matching among tight edges. That
// matching is found greedily: each tentative (row, column) pick is accepted
// iff an alternating cycle through it exists in the tight subgraph.

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace changerule {

using Cost = std::int64_t;

/// Row-major square cost matrix.
class CostMatrix {
 public:
  CostMatrix() = default;
  explicit CostMatrix(std::size_t n, Cost fill = 0) : n_(n), data_(n * n, fill) {}
  CostMatrix(std::initializer_list<std::initializer_list<Cost>> rows) : n_(rows.size()) {
    for (const auto& r : rows) {
      if (r.size() != n_) throw std::invalid_argument("cost matrix must be square");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  std::size_t size() const { return n_; }
  Cost& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
  Cost operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }

 private:
  std::size_t n_ = 0;
  std::vector<Cost> data_;
};

struct Assignment {
  std::vector<std::size_t> column_of_row;
  Cost total = 0;
};

namespace detail {

// Classic O(n^3) shortest augmenting path formulation (1-based internally).
// Returns the assignment and fills the optimal potentials.
inline std::vector<std::size_t> hungarian(const CostMatrix& a, std::vector<Cost>& u, std::vector<Cost>& v) {
  const std::size_t n = a.size();
  constexpr Cost kInf = std::numeric_limits<Cost>::max() / 4;
  u.assign(n + 1, 0);
  v.assign(n + 1, 0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<Cost> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      Cost delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const Cost cur = a(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
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
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> col_of_row(n);
  for (std::size_t j = 1; j <= n; ++j) col_of_row[p[j] - 1] = j - 1;
  return col_of_row;
}

}  // namespace detail

/// Optimal assignment; among optimal assignments the one whose column
/// sequence (by row) is lexicographically smallest.
inline Assignment kuhn_munkres(const CostMatrix& costs) {
  const std::size_t n = costs.size();
  Assignment result;
  if (n == 0) return result;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (costs(r, c) < 0) throw std::invalid_argument("cost matrix entries must be non-negative");

  std::vector<Cost> u, v;
  std::vector<std::size_t> col_of_row = detail::hungarian(costs, u, v);
  auto tight = [&](std::size_t r, std::size_t c) { return costs(r, c) == u[r + 1] + v[c + 1]; };

  std::vector<std::size_t> row_of_col(n);
  for (std::size_t r = 0; r < n; ++r) row_of_col[col_of_row[r]] = r;

  // Rows < `fixed_rows` and their columns are frozen.
  std::vector<char> col_frozen(n, 0);
  std::vector<std::size_t> parent_row(n);
  std::vector<char> visited(n);
  std::vector<std::size_t> queue;
  queue.reserve(n);

  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      if (col_frozen[c] || !tight(r, c)) continue;
      if (col_of_row[r] == c) break;
      // Re-route: row_of_col[c] must move to some other tight column, and
      // the chain must end at r's current column (freed by r taking c).
      const std::size_t target = col_of_row[r];
      const std::size_t start_row = row_of_col[c];
      std::fill(visited.begin(), visited.end(), 0);
      queue.clear();
      queue.push_back(start_row);
      bool found = false;
      std::size_t end_col = 0;
      // BFS over rows; parent_row[col] records the row that reached col.
      for (std::size_t head = 0; head < queue.size() && !found; ++head) {
        const std::size_t row = queue[head];
        for (std::size_t cc = 0; cc < n; ++cc) {
          if (visited[cc] || col_frozen[cc] || cc == c || !tight(row, cc)) continue;
          visited[cc] = 1;
          parent_row[cc] = row;
          if (cc == target) {
            found = true;
            end_col = cc;
            break;
          }
          queue.push_back(row_of_col[cc]);
        }
      }
      if (!found) continue;
      // Shift assignments back along the path.
      std::size_t cc = end_col;
      for (;;) {
        const std::size_t row = parent_row[cc];
        const std::size_t prev = col_of_row[row];
        col_of_row[row] = cc;
        row_of_col[cc] = row;
        if (row == start_row) break;
        cc = prev;
      }
      col_of_row[r] = c;
      row_of_col[c] = r;
      break;
    }
    col_frozen[col_of_row[r]] = 1;
  }

  result.column_of_row = std::move(col_of_row);
  for (std::size_t r = 0; r < n; ++r) result.total += costs(r, result.column_of_row[r]);
  return result;
}

}  // namespace changerule
