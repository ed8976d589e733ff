#pragma once

// Test-side oracles, kept independent of the library implementations they
// check: plain loops, no shared algorithm code.

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "fractal/measure.hpp"
#include "fractal/metric_space.hpp"
#include "fractal/modulus.hpp"
#include "fractal/prng.hpp"
#include "fractal/rational.hpp"

namespace oracle {

using fractal::BigInt;
using fractal::Rat;

// Independent metric check by exhaustive scan. Returns the failure class
// ("asymmetric", "diagonal", "zero", "triangle") or nullopt for a metric.
inline std::optional<std::string> triple_scan(const std::vector<std::vector<Rat>>& m) {
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (m[i][j] != m[j][i]) return "asymmetric";
  for (std::size_t i = 0; i < n; ++i)
    if (m[i][i] != 0) return "diagonal";
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && m[i][j] <= 0) return "zero";
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (m[i][j] > m[i][k] + m[k][j]) return "triangle";
  return std::nullopt;
}

// Brute-force double-max Hausdorff distance over point index sets.
inline Rat brute_hausdorff(const fractal::FiniteMetricSpace& s, const std::vector<int>& a,
                           const std::vector<int>& b) {
  Rat worst(0);
  auto directed = [&](const std::vector<int>& from, const std::vector<int>& to) {
    Rat w(0);
    for (int p : from) {
      Rat best = s.distance(p, to[0]);
      for (int q : to)
        if (s.distance(p, q) < best) best = s.distance(p, q);
      if (best > w) w = best;
    }
    return w;
  };
  const Rat ab = directed(a, b);
  const Rat ba = directed(b, a);
  worst = ab > ba ? ab : ba;
  return worst;
}

// Random valid rational metric via min-plus (shortest path) closure of a
// random positive symmetric matrix.
inline std::vector<std::vector<Rat>> random_metric_matrix(fractal::SplitMix64& rng, int n) {
  std::vector<std::vector<Rat>> m(n, std::vector<Rat>(n, Rat(0)));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Rat v(BigInt(1 + rng.below(24)), BigInt(1 + rng.below(6)));
      m[i][j] = v;
      m[j][i] = v;
    }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        if (m[i][k] + m[k][j] < m[i][j]) m[i][j] = m[i][k] + m[k][j];
      }
  return m;
}

inline fractal::FiniteMetricSpace random_space(fractal::SplitMix64& rng, int n) {
  return fractal::validate_metric(random_metric_matrix(rng, n), {});
}

// Minimum average matching cost over all permutations: the assignment oracle
// for W1 between equal-weight measures on supports of the same size.
inline Rat permutation_w1(const fractal::FiniteMetricSpace& s, const std::vector<int>& xs,
                          const std::vector<int>& ys) {
  std::vector<int> perm(ys.size());
  std::iota(perm.begin(), perm.end(), 0);
  bool first = true;
  Rat best(0);
  do {
    Rat total(0);
    for (std::size_t i = 0; i < xs.size(); ++i) total += s.distance(xs[i], ys[perm[i]]);
    if (first || total < best) {
      best = total;
      first = false;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / Rat(BigInt(xs.size()));
}

// Exact minimum over the vertices of the transport polytope, enumerated as
// basic solutions (all cell subsets of size m + n - 1 solved by leaf
// peeling). Practical for the 2x2 and 2x3 cases the tests use.
inline std::optional<Rat> polytope_vertex_minimum(const fractal::FiniteMetricSpace& s,
                                                  const fractal::DiscreteMeasure& mu,
                                                  const fractal::DiscreteMeasure& eta) {
  const int m = static_cast<int>(mu.size());
  const int n = static_cast<int>(eta.size());
  const int cells = m * n;
  const int want = m + n - 1;
  std::optional<Rat> best;

  std::vector<int> pick(want);
  std::iota(pick.begin(), pick.end(), 0);
  auto advance = [&]() {
    int i = want - 1;
    while (i >= 0 && pick[i] == cells - want + i) --i;
    if (i < 0) return false;
    ++pick[i];
    for (int j = i + 1; j < want; ++j) pick[j] = pick[j - 1] + 1;
    return true;
  };

  do {
    std::vector<std::vector<int>> row_cells(m), col_cells(n);
    for (int c : pick) {
      row_cells[c / n].push_back(c);
      col_cells[c % n].push_back(c);
    }
    std::vector<Rat> value(cells, Rat(0));
    std::vector<char> solved(cells, 0);
    std::vector<Rat> row_rem = mu.weights(), col_rem = eta.weights();
    std::vector<int> row_left(m), col_left(n);
    for (int i = 0; i < m; ++i) row_left[i] = static_cast<int>(row_cells[i].size());
    for (int j = 0; j < n; ++j) col_left[j] = static_cast<int>(col_cells[j].size());

    bool progress = true;
    int remaining = want;
    bool feasible = true;
    while (remaining > 0 && progress && feasible) {
      progress = false;
      for (int i = 0; i < m && feasible; ++i) {
        if (row_left[i] != 1) continue;
        for (int c : row_cells[i])
          if (!solved[c]) {
            value[c] = row_rem[i];
            if (value[c] < 0) feasible = false;
            solved[c] = 1;
            row_rem[i] = 0;
            row_left[i] = 0;
            col_rem[c % n] -= value[c];
            --col_left[c % n];
            --remaining;
            progress = true;
          }
      }
      for (int j = 0; j < n && feasible; ++j) {
        if (col_left[j] != 1) continue;
        for (int c : col_cells[j])
          if (!solved[c]) {
            value[c] = col_rem[j];
            if (value[c] < 0) feasible = false;
            solved[c] = 1;
            col_rem[j] = 0;
            col_left[j] = 0;
            row_rem[c / n] -= value[c];
            --row_left[c / n];
            --remaining;
            progress = true;
          }
      }
    }
    if (!feasible || remaining > 0) continue;  // dependent subset or infeasible
    bool balanced = true;
    for (int i = 0; i < m; ++i)
      if (row_rem[i] != 0) balanced = false;
    for (int j = 0; j < n; ++j)
      if (col_rem[j] != 0) balanced = false;
    if (!balanced) continue;
    bool nonneg = true;
    Rat total(0);
    for (int c = 0; c < cells; ++c) {
      if (value[c] < 0) nonneg = false;
      if (value[c] != 0)
        total += value[c] * s.distance(mu.support()[c / n], eta.support()[c % n]);
    }
    if (!nonneg) continue;
    if (!best || total < *best) best = total;
  } while (advance());
  return best;
}

// Sampling of t/(1+t) as a concave piecewise-linear gauge. The unit-slope
// stub below the sampling resolution keeps the finite representation honest
// about the ratio sup being 1 at t -> 0.
inline fractal::ContinuityModulus sampled_reciprocal_modulus() {
  const Rat eps(BigInt(1), BigInt(1000000000000LL));
  return fractal::ContinuityModulus(
      {{Rat(0), Rat(0)},
       {eps, eps},
       {Rat(1), Rat(BigInt(1), BigInt(2))},
       {Rat(2), Rat(BigInt(2), BigInt(3))},
       {Rat(4), Rat(BigInt(4), BigInt(5))}},
      Rat(BigInt(1), BigInt(15)));
}

// Random concave piecewise-linear gauge: slopes drawn descending from a
// small pool (keeps Matkowski iterations short), random breakpoint spacing.
inline fractal::ContinuityModulus random_modulus(fractal::SplitMix64& rng) {
  using fractal::make_rat;
  const std::vector<Rat> pool{make_rat(2),    make_rat(3, 2), Rat(1),         make_rat(3, 4),
                              make_rat(1, 2), make_rat(1, 3), make_rat(1, 4), Rat(0)};
  const std::size_t nseg = 1 + rng.below(4);
  std::vector<std::size_t> idx;
  std::size_t lo = rng.below(3);
  for (std::size_t s = 0; s < nseg; ++s) {
    idx.push_back(std::min(lo, pool.size() - 1));
    lo += 1 + rng.below(2);
  }
  std::vector<std::pair<Rat, Rat>> bps{{Rat(0), Rat(0)}};
  Rat t(0), y(0);
  for (std::size_t s = 0; s + 1 < nseg; ++s) {
    const Rat dt = make_rat(1 + static_cast<long long>(rng.below(6)), 2);
    t += dt;
    y += pool[idx[s]] * dt;
    bps.emplace_back(t, y);
  }
  return fractal::ContinuityModulus(std::move(bps), pool[idx[nseg - 1]]);
}

// Line space on the halving chain 2^0 .. 2^-(n-1); the shift map that fixes
// the last point is exactly (t/2)-contracting.
inline fractal::FiniteMetricSpace halving_line_space(int n) {
  std::vector<Rat> pos(n);
  for (int i = 0; i < n; ++i) pos[i] = Rat(BigInt(1), BigInt(1) << i);
  std::vector<std::vector<Rat>> d(n, std::vector<Rat>(n, Rat(0)));
  std::vector<std::string> labels(n);
  for (int i = 0; i < n; ++i) {
    labels[i] = "h" + std::to_string(i);
    for (int j = 0; j < n; ++j) d[i][j] = pos[i] >= pos[j] ? pos[i] - pos[j] : pos[j] - pos[i];
  }
  return fractal::validate_metric(std::move(d), std::move(labels));
}

inline fractal::TableMap halving_shift_map(int n) {
  std::vector<int> img(n);
  for (int i = 0; i < n; ++i) img[i] = std::min(i + 1, n - 1);
  return fractal::TableMap::total(img);
}

}  // namespace oracle
