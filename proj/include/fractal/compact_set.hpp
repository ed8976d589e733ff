#pragma once

#include <memory>
#include <vector>

#include "fractal/errors.hpp"
#include "fractal/euclidean.hpp"
#include "fractal/metric_space.hpp"

namespace fractal {

// Finite stand-in for a non-empty compact subset of an ambient space.
// Members are deduplicated at construction and keep insertion order.
template <class S>
class CompactSet {
 public:
  using Point = typename S::Point;
  using Scalar = typename S::Scalar;

  CompactSet(std::shared_ptr<const S> space, std::vector<Point> pts) : space_(std::move(space)) {
    if (pts.empty()) throw validation_error("EmptySet", "compact sets must be non-empty");
    space_->dedup(pts);
    pts_ = std::move(pts);
  }

  const std::shared_ptr<const S>& space() const { return space_; }
  const std::vector<Point>& points() const { return pts_; }
  std::size_t size() const { return pts_.size(); }
  const Point& front() const { return pts_.front(); }

  bool contains(const Point& p) const {
    for (const Point& q : pts_)
      if (space_->same_point(p, q)) return true;
    return false;
  }

  // Ambient identity is by value: equal spaces are the same ambient.
  bool same_space(const CompactSet& other) const {
    return space_ == other.space_ || *space_ == *other.space_;
  }

  bool same_set(const CompactSet& other) const {
    if (!same_space(other)) return false;
    for (const Point& p : pts_)
      if (!other.contains(p)) return false;
    for (const Point& p : other.pts_)
      if (!contains(p)) return false;
    return true;
  }

 private:
  std::shared_ptr<const S> space_;
  std::vector<Point> pts_;
};

template <class S>
CompactSet<S> make_set(std::shared_ptr<const S> space, std::vector<typename S::Point> pts) {
  return CompactSet<S>(std::move(space), std::move(pts));
}

// {f(x) : x in K}, duplicates merged.
template <class S>
CompactSet<S> set_image(const typename S::Map& f, const CompactSet<S>& k) {
  std::vector<typename S::Point> out;
  out.reserve(k.size());
  for (const auto& p : k.points()) out.push_back(k.space()->apply(f, p));
  return CompactSet<S>(k.space(), std::move(out));
}

template <class S>
typename S::Scalar set_diameter(const CompactSet<S>& k) {
  typename S::Scalar d{};
  const auto& pts = k.points();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      auto v = k.space()->distance(pts[i], pts[j]);
      if (v > d) d = v;
    }
  return d;
}

namespace detail {

template <class S>
typename S::Scalar directed_brute(const CompactSet<S>& a, const CompactSet<S>& b) {
  typename S::Scalar worst{};
  for (const auto& p : a.points()) {
    bool first = true;
    typename S::Scalar nearest{};
    for (const auto& q : b.points()) {
      auto d = a.space()->distance(p, q);
      if (first || d < nearest) {
        nearest = d;
        first = false;
      }
    }
    if (nearest > worst) worst = nearest;
  }
  return worst;
}

}  // namespace detail

// max_{p in a} dist(p, b); spelled out per space so the Euclidean lane can use
// the grid index on large clouds.
inline Rat hausdorff_directed(const CompactSet<FiniteMetricSpace>& a,
                              const CompactSet<FiniteMetricSpace>& b) {
  return detail::directed_brute(a, b);
}

inline double hausdorff_directed(const CompactSet<EuclideanSpace>& a, const CompactSet<EuclideanSpace>& b) {
  if (a.size() * b.size() <= (std::size_t{1} << 14)) return detail::directed_brute(a, b);
  PointGrid grid(b.points(), b.space()->dim(),
                 PointGrid::suggest_cell(b.points(), b.space()->dim()));
  double worst = 0.0;
  for (const Vec& p : a.points()) worst = std::max(worst, grid.nearest(p));
  return worst;
}

// Hausdorff metric d_H(A,B) = max of the two directed distances.
template <class S>
typename S::Scalar hausdorff_distance(const CompactSet<S>& a, const CompactSet<S>& b) {
  if (!a.same_space(b))
    throw validation_error("MixedAmbient", "sets live in different ambient spaces");
  auto ab = hausdorff_directed(a, b);
  auto ba = hausdorff_directed(b, a);
  return ab > ba ? ab : ba;
}

}  // namespace fractal
