#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>
#include <vector>

#include "fractal/errors.hpp"

namespace fractal {

// Point of a Euclidean space of dimension <= 3. Unused coordinates stay 0,
// so equality and distance are dimension-agnostic.
struct Vec {
  std::array<double, 3> c{0.0, 0.0, 0.0};

  double& operator[](int i) { return c[i]; }
  double operator[](int i) const { return c[i]; }
  bool operator==(const Vec& o) const { return c == o.c; }
};

inline Vec vec1(double x) { return Vec{{x, 0.0, 0.0}}; }
inline Vec vec2(double x, double y) { return Vec{{x, y, 0.0}}; }
inline Vec vec3(double x, double y, double z) { return Vec{{x, y, z}}; }

inline double euclid_dist(const Vec& a, const Vec& b) {
  const double dx = a.c[0] - b.c[0];
  const double dy = a.c[1] - b.c[1];
  const double dz = a.c[2] - b.c[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

// Affine self-map x -> M x + t on R^dim.
struct AffineMap {
  int dim = 2;
  std::array<std::array<double, 3>, 3> mat{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  std::array<double, 3> offset{0, 0, 0};

  Vec operator()(const Vec& v) const {
    Vec out;
    for (int i = 0; i < dim; ++i) {
      double s = offset[i];
      for (int j = 0; j < dim; ++j) s += mat[i][j] * v[j];
      out[i] = s;
    }
    return out;
  }
};

inline AffineMap affine_scale_shift(int dim, double scale, const Vec& shift) {
  AffineMap m;
  m.dim = dim;
  m.mat = {{{scale, 0, 0}, {0, scale, 0}, {0, 0, scale}}};
  m.offset = shift.c;
  return m;
}

// Largest singular value via power iteration on M^T M; used in tests to
// certify Lipschitz constants of affine maps.
inline double affine_lipschitz(const AffineMap& m) {
  std::array<double, 3> v{1.0, 1.0, 1.0};
  double norm = 1.0;
  for (int iter = 0; iter < 200; ++iter) {
    std::array<double, 3> mv{0, 0, 0}, mtmv{0, 0, 0};
    for (int i = 0; i < m.dim; ++i)
      for (int j = 0; j < m.dim; ++j) mv[i] += m.mat[i][j] * v[j];
    for (int i = 0; i < m.dim; ++i)
      for (int j = 0; j < m.dim; ++j) mtmv[j] += m.mat[i][j] * mv[i];
    norm = 0.0;
    for (int i = 0; i < m.dim; ++i) norm += mtmv[i] * mtmv[i];
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    for (int i = 0; i < m.dim; ++i) v[i] = mtmv[i] / norm;
  }
  double quad = 0.0, vv = 0.0;
  std::array<double, 3> mv{0, 0, 0};
  for (int i = 0; i < m.dim; ++i)
    for (int j = 0; j < m.dim; ++j) mv[i] += m.mat[i][j] * v[j];
  for (int i = 0; i < m.dim; ++i) {
    quad += mv[i] * mv[i];
    vv += v[i] * v[i];
  }
  return vv == 0.0 ? 0.0 : std::sqrt(quad / vv);
}

namespace detail {

struct CellKey {
  std::int64_t x = 0, y = 0, z = 0;
  bool operator==(const CellKey& o) const { return x == o.x && y == o.y && z == o.z; }
};

struct CellKeyHash {
  std::size_t operator()(const CellKey& k) const {
    auto mix = [](std::uint64_t v) {
      v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ULL;
      v = (v ^ (v >> 27)) * 0x94d049bb133111ebULL;
      return v ^ (v >> 31);
    };
    return mix(static_cast<std::uint64_t>(k.x) * 0x9e3779b97f4a7c15ULL ^
               mix(static_cast<std::uint64_t>(k.y)) ^ mix(static_cast<std::uint64_t>(k.z)) * 3);
  }
};

inline std::int64_t cell_of(double v, double h) { return static_cast<std::int64_t>(std::floor(v / h)); }

}  // namespace detail

// Uniform hash grid over a point cloud. Supports near-duplicate removal and
// nearest-distance queries; both are exact up to floating-point rounding.
class PointGrid {
 public:
  PointGrid(const std::vector<Vec>& pts, int dim, double cell)
      : pts_(&pts), dim_(dim), h_(cell > 0 ? cell : 1.0) {
    if (pts.empty()) throw malformed_error("EmptyCloud", "grid over no points");
    for (int d = 0; d < 3; ++d) lo_[d] = hi_[d] = pts[0][d];
    buckets_.reserve(pts.size() * 2);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (int d = 0; d < dim_; ++d) {
        lo_[d] = std::min(lo_[d], pts[i][d]);
        hi_[d] = std::max(hi_[d], pts[i][d]);
      }
      buckets_[key_of(pts[i])].push_back(static_cast<int>(i));
    }
  }

  // Cell size targeting ~1 point per cell for evenly spread clouds.
  static double suggest_cell(const std::vector<Vec>& pts, int dim) {
    if (pts.empty()) return 1.0;
    double lo[3] = {pts[0][0], pts[0][1], pts[0][2]};
    double hi[3] = {pts[0][0], pts[0][1], pts[0][2]};
    for (const Vec& p : pts)
      for (int d = 0; d < dim; ++d) {
        lo[d] = std::min(lo[d], p[d]);
        hi[d] = std::max(hi[d], p[d]);
      }
    double extent = 0.0;
    for (int d = 0; d < dim; ++d) extent = std::max(extent, hi[d] - lo[d]);
    if (extent <= 0.0) return 1.0;
    const double per_axis = std::ceil(std::pow(static_cast<double>(pts.size()), 1.0 / dim));
    return std::max(extent / per_axis, 1e-12);
  }

  // Distance from q to the nearest stored point.
  double nearest(const Vec& q) const {
    double best = euclid_dist(q, (*pts_)[0]);
    // Shells at radius below dist(q, bbox)/h - 1 cannot contain points.
    double bbox_gap = 0.0;
    for (int d = 0; d < dim_; ++d) {
      const double g = std::max({lo_[d] - q[d], q[d] - hi_[d], 0.0});
      bbox_gap += g * g;
    }
    bbox_gap = std::sqrt(bbox_gap);
    std::int64_t r = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(bbox_gap / h_)) - 1);
    const detail::CellKey center = key_of(q);
    for (; static_cast<double>(r - 1) * h_ < best; ++r) scan_shell(q, center, r, best);
    return best;
  }

 private:
  detail::CellKey key_of(const Vec& p) const {
    detail::CellKey k;
    k.x = detail::cell_of(p[0], h_);
    if (dim_ > 1) k.y = detail::cell_of(p[1], h_);
    if (dim_ > 2) k.z = detail::cell_of(p[2], h_);
    return k;
  }

  void scan_shell(const Vec& q, const detail::CellKey& c, std::int64_t r, double& best) const {
    auto visit = [&](std::int64_t dx, std::int64_t dy, std::int64_t dz) {
      auto it = buckets_.find(detail::CellKey{c.x + dx, c.y + dy, c.z + dz});
      if (it == buckets_.end()) return;
      for (int idx : it->second) best = std::min(best, euclid_dist(q, (*pts_)[idx]));
    };
    const std::int64_t ylo = dim_ > 1 ? -r : 0, yhi = dim_ > 1 ? r : 0;
    const std::int64_t zlo = dim_ > 2 ? -r : 0, zhi = dim_ > 2 ? r : 0;
    for (std::int64_t dx = -r; dx <= r; ++dx)
      for (std::int64_t dy = ylo; dy <= yhi; ++dy)
        for (std::int64_t dz = zlo; dz <= zhi; ++dz) {
          if (std::max({std::llabs(dx), std::llabs(dy), std::llabs(dz)}) != r) continue;
          visit(dx, dy, dz);
        }
  }

  const std::vector<Vec>* pts_;
  int dim_;
  double h_;
  double lo_[3] = {0, 0, 0};
  double hi_[3] = {0, 0, 0};
  std::unordered_map<detail::CellKey, std::vector<int>, detail::CellKeyHash> buckets_;
};

// The ambient R^dim with the merge tolerance used for set deduplication.
class EuclideanSpace {
 public:
  using Point = Vec;
  using Scalar = double;
  using Map = AffineMap;

  static constexpr double kMergeTol = 1e-12;

  explicit EuclideanSpace(int dim) : dim_(dim) {
    if (dim < 1 || dim > 3) throw malformed_error("BadDimension", std::to_string(dim));
  }

  int dim() const { return dim_; }
  bool operator==(const EuclideanSpace& other) const { return dim_ == other.dim_; }
  double distance(const Vec& a, const Vec& b) const { return euclid_dist(a, b); }
  bool same_point(const Vec& a, const Vec& b) const { return euclid_dist(a, b) < kMergeTol; }
  Vec apply(const AffineMap& f, const Vec& p) const { return f(p); }

  // Keeps first occurrence among points closer than kMergeTol. Cells are much
  // larger than the tolerance, so neighbors need probing only near cell walls.
  void dedup(std::vector<Vec>& pts) const {
    if (pts.size() < 2) return;
    const double h = 4096.0 * kMergeTol;
    std::unordered_map<detail::CellKey, std::vector<int>, detail::CellKeyHash> cells;
    cells.reserve(pts.size() * 2);
    std::vector<Vec> out;
    out.reserve(pts.size());

    auto close_in_cell = [&](const detail::CellKey& k, const Vec& p) {
      auto it = cells.find(k);
      if (it == cells.end()) return false;
      for (int idx : it->second)
        if (euclid_dist(out[idx], p) < kMergeTol) return true;
      return false;
    };

    for (const Vec& p : pts) {
      std::int64_t base[3];
      std::int64_t lo[3], hi[3];
      for (int d = 0; d < 3; ++d) {
        base[d] = d < dim_ ? detail::cell_of(p[d], h) : 0;
        lo[d] = hi[d] = base[d];
        if (d < dim_) {
          const double frac = p[d] - static_cast<double>(base[d]) * h;
          if (frac < kMergeTol) lo[d] = base[d] - 1;
          if (frac > h - kMergeTol) hi[d] = base[d] + 1;
        }
      }
      bool dup = false;
      for (std::int64_t x = lo[0]; x <= hi[0] && !dup; ++x)
        for (std::int64_t y = lo[1]; y <= hi[1] && !dup; ++y)
          for (std::int64_t z = lo[2]; z <= hi[2] && !dup; ++z)
            dup = close_in_cell(detail::CellKey{x, y, z}, p);
      if (!dup) {
        out.push_back(p);
        cells[detail::CellKey{base[0], base[1], base[2]}].push_back(static_cast<int>(out.size()) - 1);
      }
    }
    pts.swap(out);
  }

 private:
  int dim_;
};

}  // namespace fractal
