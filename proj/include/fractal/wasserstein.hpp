#pragma once

#include <deque>
#include <utility>
#include <vector>

#include "fractal/measure.hpp"

namespace fractal {

struct WassersteinResult {
  Rat value;
  TransportPlan plan;
};

namespace detail {

// Tree-structured basis for the transportation simplex. Rows are nodes
// 0..m-1, columns m..m+n-1.
struct TransportBasis {
  int m, n;
  std::vector<std::vector<char>> basic;
  std::vector<std::vector<Rat>> x;

  TransportBasis(int m_, int n_)
      : m(m_), n(n_), basic(m_, std::vector<char>(n_, 0)), x(m_, std::vector<Rat>(n_, Rat(0))) {}

  // Column-node id for column j.
  int col_node(int j) const { return m + j; }

  std::vector<std::vector<std::pair<int, int>>> adjacency() const {
    // adjacency[node] = list of (neighbor node, flat cell id)
    std::vector<std::vector<std::pair<int, int>>> adj(m + n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j)
        if (basic[i][j]) {
          adj[i].emplace_back(col_node(j), i * n + j);
          adj[col_node(j)].emplace_back(i, i * n + j);
        }
    return adj;
  }
};

}  // namespace detail

// Exact Wasserstein-1 distance with one optimal coupling, solved by the
// transportation simplex on rationals: northwest-corner start, then
// cycle-canceling pivots. Entering cell is the row-major first cell with
// negative reduced cost and ties for the leaving cell break toward the
// smallest row then column index, which makes runs reproducible and rules
// out cycling (Bland's rule).
inline WassersteinResult wasserstein1(const DiscreteMeasure& mu, const DiscreteMeasure& eta) {
  if (mu.space() != eta.space())
    throw validation_error("MixedAmbient", "measures live in different ambient spaces");
  const auto& space = *mu.space();
  const int m = static_cast<int>(mu.size());
  const int n = static_cast<int>(eta.size());

  std::vector<std::vector<Rat>> cost(m, std::vector<Rat>(n));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) cost[i][j] = space.distance(mu.support()[i], eta.support()[j]);

  detail::TransportBasis basis(m, n);

  // Northwest-corner start: yields exactly m + n - 1 basic cells, possibly
  // degenerate (zero mass).
  {
    std::vector<Rat> a = mu.weights();
    std::vector<Rat> b = eta.weights();
    int i = 0, j = 0;
    while (true) {
      const Rat q = a[i] < b[j] ? a[i] : b[j];
      basis.basic[i][j] = 1;
      basis.x[i][j] = q;
      a[i] -= q;
      b[j] -= q;
      if (i == m - 1 && j == n - 1) break;
      if (a[i] == 0 && i < m - 1) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  while (true) {
    // Duals u_i + v_j = c_ij on basic cells, rooted at u_0 = 0.
    std::vector<Rat> pot(m + n);
    std::vector<char> seen(m + n, 0);
    auto adj = basis.adjacency();
    std::deque<int> queue{0};
    seen[0] = 1;
    while (!queue.empty()) {
      const int node = queue.front();
      queue.pop_front();
      for (auto [next, cell] : adj[node]) {
        if (seen[next]) continue;
        seen[next] = 1;
        const int ci = cell / n, cj = cell % n;
        pot[next] = cost[ci][cj] - pot[node];
        queue.push_back(next);
      }
    }

    // Entering cell: first negative reduced cost in row-major order.
    int ei = -1, ej = -1;
    for (int i = 0; i < m && ei < 0; ++i)
      for (int j = 0; j < n; ++j) {
        if (basis.basic[i][j]) continue;
        if (cost[i][j] - pot[i] - pot[basis.col_node(j)] < 0) {
          ei = i;
          ej = j;
          break;
        }
      }
    if (ei < 0) break;  // optimal

    // Unique tree path from the entering column's node back to its row node.
    std::vector<int> parent(m + n, -1), via(m + n, -1);
    std::deque<int> bfs{basis.col_node(ej)};
    std::vector<char> vis(m + n, 0);
    vis[basis.col_node(ej)] = 1;
    while (!bfs.empty()) {
      const int node = bfs.front();
      bfs.pop_front();
      if (node == ei) break;
      for (auto [next, cell] : adj[node]) {
        if (vis[next]) continue;
        vis[next] = 1;
        parent[next] = node;
        via[next] = cell;
        bfs.push_back(next);
      }
    }

    // Cycle cells alternate signs starting with the entering cell (+theta).
    std::vector<std::pair<int, int>> minus_cells, plus_cells;
    {
      bool minus = true;
      for (int node = ei; node != basis.col_node(ej); node = parent[node]) {
        const int cell = via[node];
        (minus ? minus_cells : plus_cells).emplace_back(cell / n, cell % n);
        minus = !minus;
      }
    }

    Rat theta;
    int leave_i = -1, leave_j = -1;
    for (auto [i, j] : minus_cells) {
      if (leave_i < 0 || basis.x[i][j] < theta ||
          (basis.x[i][j] == theta && (i < leave_i || (i == leave_i && j < leave_j)))) {
        theta = basis.x[i][j];
        leave_i = i;
        leave_j = j;
      }
    }

    for (auto [i, j] : minus_cells) basis.x[i][j] -= theta;
    for (auto [i, j] : plus_cells) basis.x[i][j] += theta;
    basis.basic[leave_i][leave_j] = 0;
    basis.x[leave_i][leave_j] = 0;
    basis.basic[ei][ej] = 1;
    basis.x[ei][ej] = theta;
  }

  Rat value(0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      if (basis.x[i][j] != 0) value += basis.x[i][j] * cost[i][j];

  TransportPlan plan(mu.space(), mu.support(), eta.support(), basis.x);
  return {std::move(value), std::move(plan)};
}

}  // namespace fractal
