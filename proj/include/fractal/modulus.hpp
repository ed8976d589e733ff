#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "fractal/errors.hpp"
#include "fractal/metric_space.hpp"
#include "fractal/rational.hpp"

namespace fractal {

// Piecewise-linear concave gauge phi with phi(0) = 0, nondecreasing, and a
// linear tail beyond the last breakpoint. Concavity plus phi(0)=0 makes the
// gauge subadditive, which the extension machinery relies on.
class ContinuityModulus {
 public:
  ContinuityModulus(std::vector<std::pair<Rat, Rat>> breakpoints, Rat tail_slope)
      : bps_(std::move(breakpoints)), tail_(std::move(tail_slope)) {
    if (bps_.empty() || bps_.front().first != 0 || bps_.front().second != 0)
      throw validation_error("BadModulus", "breakpoints must start at (0, 0)");
    Rat prev_slope;
    bool have_prev = false;
    for (std::size_t i = 1; i < bps_.size(); ++i) {
      const Rat dt = bps_[i].first - bps_[i - 1].first;
      const Rat dy = bps_[i].second - bps_[i - 1].second;
      if (dt <= 0) throw validation_error("BadModulus", "breakpoint arguments must increase");
      if (dy < 0) throw validation_error("BadModulus", "modulus must be nondecreasing");
      const Rat slope = dy / dt;
      if (have_prev && slope > prev_slope)
        throw validation_error("BadModulus", "slopes must be non-increasing (concavity)");
      prev_slope = slope;
      have_prev = true;
    }
    if (tail_ < 0) throw validation_error("BadModulus", "tail slope must be nonnegative");
    if (have_prev && tail_ > prev_slope)
      throw validation_error("BadModulus", "tail slope exceeds last segment slope");
  }

  static ContinuityModulus linear(const Rat& slope) { return ContinuityModulus({{Rat(0), Rat(0)}}, slope); }
  static ContinuityModulus zero() { return linear(Rat(0)); }
  static ContinuityModulus identity() { return linear(Rat(1)); }

  const std::vector<std::pair<Rat, Rat>>& breakpoints() const { return bps_; }
  const Rat& tail_slope() const { return tail_; }

  // Exact evaluation: interpolation between breakpoints, tail beyond.
  Rat operator()(const Rat& t) const {
    if (t < 0) throw validation_error("NegativeArgument", "modulus argument must be >= 0");
    std::size_t i = bps_.size();
    while (i > 0 && bps_[i - 1].first > t) --i;
    // bps_[i-1].first <= t
    if (i == bps_.size()) return bps_.back().second + tail_ * (t - bps_.back().first);
    const auto& [t0, y0] = bps_[i - 1];
    const auto& [t1, y1] = bps_[i];
    return y0 + (y1 - y0) / (t1 - t0) * (t - t0);
  }

  double eval_double(double t) const { return rat_to_double((*this)(rat_from_double(t))); }

  // phi(t) < t for every positive realized distance fed in.
  bool strictly_below_identity(const std::vector<Rat>& distances) const {
    for (const Rat& t : distances)
      if (t > 0 && (*this)(t) >= t) return false;
    return true;
  }

 private:
  std::vector<std::pair<Rat, Rat>> bps_;
  Rat tail_;
};

// Largest fixed point of phi at or below t0. Iterates of phi from t0 are
// bounded below by it, which settles negative Matkowski verdicts without
// running the iteration.
inline Rat largest_fixed_point_below(const ContinuityModulus& phi, const Rat& t0) {
  Rat best(0);
  auto consider_piece = [&](const Rat& a, const Rat& ya, const Rat& slope, const Rat& b) {
    if (a > t0) return;
    const Rat hi = b < t0 ? b : t0;
    if (slope == 1) {
      if (ya == a && hi > best) best = hi;  // the whole piece is fixed
      return;
    }
    // ya + slope*(t - a) = t  =>  t = (ya - slope*a) / (1 - slope)
    const Rat t_star = (ya - slope * a) / (Rat(1) - slope);
    if (t_star >= a && t_star <= hi && t_star > best) best = t_star;
  };
  const auto& bps = phi.breakpoints();
  for (std::size_t i = 1; i < bps.size(); ++i) {
    const Rat slope = (bps[i].second - bps[i - 1].second) / (bps[i].first - bps[i - 1].first);
    consider_piece(bps[i - 1].first, bps[i - 1].second, slope, bps[i].first);
  }
  consider_piece(bps.back().first, bps.back().second, phi.tail_slope(), t0);
  return best;
}

struct ClassifyResult {
  bool banach = false;
  bool rakotch = false;
  bool matkowski = false;
  Rat banach_sup;                // sup of phi(t)/t over the checked candidates
  std::vector<Rat> rakotch_sup;  // per grid delta
  long matkowski_steps = -1;     // iterations until below threshold, -1 if never
};

// Finite-scale classification of a gauge. The Banach/Rakotch ratio suprema
// are evaluated at segment endpoints (exact for concave piecewise-linear
// gauges); the Matkowski verdict iterates phi from d_max with caps
// n_max = 10^4 and threshold d_max * 10^-9. Coherence banach => rakotch =>
// matkowski is enforced on the output.
inline ClassifyResult classify_modulus(const ContinuityModulus& phi, const Rat& d_max,
                                       const std::vector<Rat>& delta_grid) {
  if (d_max <= 0) throw validation_error("BadModulus", "d_max must be positive");
  std::vector<Rat> grid;
  for (const Rat& d : delta_grid)
    if (d > 0 && d <= d_max) grid.push_back(d);
  if (grid.empty()) throw validation_error("EmptyGrid", "no grid deltas inside (0, d_max]");
  std::sort(grid.begin(), grid.end());

  ClassifyResult out;

  auto sup_ratio_over = [&](const Rat& lo) {
    Rat sup(0);
    auto consider = [&](const Rat& t) {
      if (t < lo || t > d_max || t == 0) return;
      const Rat r = phi(t) / t;
      if (r > sup) sup = r;
    };
    consider(lo);
    for (const auto& bp : phi.breakpoints()) consider(bp.first);
    consider(d_max);
    return sup;
  };

  // Banach: endpoints of every segment inside (0, d_max]. The first-segment
  // slope is the t->0+ limit of the ratio and must be included.
  {
    Rat sup = sup_ratio_over(Rat(0));
    const auto& bps = phi.breakpoints();
    if (bps.size() >= 2) {
      const Rat first_slope = bps[1].second / bps[1].first;
      if (first_slope > sup) sup = first_slope;
    } else if (phi.tail_slope() > sup) {
      sup = phi.tail_slope();
    }
    out.banach_sup = sup;
    out.banach = sup < 1;
  }

  out.rakotch = true;
  for (const Rat& d : grid) {
    Rat sup = sup_ratio_over(d);
    out.rakotch_sup.push_back(sup);
    if (sup >= 1) out.rakotch = false;
  }

  {
    const Rat eps = d_max / Rat(BigInt(1000000000));
    const long n_max = 10000;
    if (largest_fixed_point_below(phi, d_max) < eps) {
      Rat t = d_max;
      for (long n = 1; n <= n_max; ++n) {
        Rat next = phi(t);
        if (next < eps) {
          out.matkowski = true;
          out.matkowski_steps = n;
          break;
        }
        if (next >= t) break;  // stalled or growing: iterates cannot vanish
        // Round up coarsely when digit counts explode; only delays the verdict.
        t = rat_bits(next) > 4096 ? rat_ceil_coarse(next) : next;
      }
    }
  }

  if (out.banach) out.rakotch = true;
  if (out.rakotch) out.matkowski = true;
  return out;
}

struct PairCheck {
  bool ok = true;
  int witness_a = -1;
  int witness_b = -1;
};

// d(f x, f x') <= phi(d(x, x')) over every unordered pair of `pts`.
// Returns the first violating pair in scan order otherwise.
template <class S, class Phi>
PairCheck check_phi_contracting(const S& space, const std::vector<typename S::Point>& pts,
                                const typename S::Map& f, Phi&& phi) {
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const auto bound = phi(space.distance(pts[i], pts[j]));
      if (space.distance(space.apply(f, pts[i]), space.apply(f, pts[j])) > bound)
        return {false, static_cast<int>(i), static_cast<int>(j)};
    }
  return {};
}

inline PairCheck check_phi_contracting(const FiniteMetricSpace& space, const TableMap& f,
                                       const ContinuityModulus& phi) {
  std::vector<int> pts(space.size());
  for (int i = 0; i < space.size(); ++i) pts[i] = i;
  return check_phi_contracting(space, pts, f, phi);
}

// Strict inequality d(f x, f x') < d(x, x') on all distinct pairs.
template <class S>
PairCheck check_edelstein(const S& space, const std::vector<typename S::Point>& pts,
                          const typename S::Map& f) {
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (space.same_point(pts[i], pts[j])) continue;
      if (!(space.distance(space.apply(f, pts[i]), space.apply(f, pts[j])) <
            space.distance(pts[i], pts[j])))
        return {false, static_cast<int>(i), static_cast<int>(j)};
    }
  return {};
}

inline PairCheck check_edelstein(const FiniteMetricSpace& space, const TableMap& f) {
  std::vector<int> pts(space.size());
  for (int i = 0; i < space.size(); ++i) pts[i] = i;
  return check_edelstein(space, pts, f);
}

template <class Scalar>
struct OscillationStep {
  std::vector<std::pair<Scalar, Scalar>> steps;  // (delta, omega(delta)), delta ascending

  // Least upper step at or below t; the least gauge bounding the map.
  Scalar operator()(const Scalar& t) const {
    Scalar value{};
    for (const auto& [d, w] : steps) {
      if (d > t) break;
      value = w;
    }
    return value;
  }
};

// omega_f(delta) = max{d(f x, f x') : d(x, x') <= delta} sampled at every
// realized pair distance of the point set.
template <class S>
OscillationStep<typename S::Scalar> empirical_oscillation(const S& space,
                                                          const std::vector<typename S::Point>& pts,
                                                          const typename S::Map& f) {
  using Scalar = typename S::Scalar;
  std::vector<std::pair<Scalar, Scalar>> raw;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      raw.emplace_back(space.distance(pts[i], pts[j]),
                       space.distance(space.apply(f, pts[i]), space.apply(f, pts[j])));
  std::sort(raw.begin(), raw.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  OscillationStep<Scalar> out;
  Scalar running{};
  for (const auto& [d, w] : raw) {
    if (w > running) running = w;
    if (!out.steps.empty() && out.steps.back().first == d) {
      out.steps.back().second = running;
    } else {
      out.steps.emplace_back(d, running);
    }
  }
  return out;
}

inline OscillationStep<Rat> empirical_oscillation(const FiniteMetricSpace& space, const TableMap& f) {
  std::vector<int> pts(space.size());
  for (int i = 0; i < space.size(); ++i) pts[i] = i;
  return empirical_oscillation(space, pts, f);
}

}  // namespace fractal
