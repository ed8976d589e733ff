#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fractal/errors.hpp"
#include "fractal/rational.hpp"

namespace fractal {

class FiniteMetricSpace;

// Explicit point-to-point mapping between points of a FiniteMetricSpace.
// May be partial; applying it outside its domain raises DomainMiss.
struct TableMap {
  std::vector<std::optional<int>> image;  // indexed by domain point

  static TableMap total(std::vector<int> images) {
    TableMap m;
    m.image.assign(images.begin(), images.end());
    return m;
  }

  bool defined_at(int p) const {
    return p >= 0 && static_cast<std::size_t>(p) < image.size() && image[p].has_value();
  }
};

// Exact finite metric space: ordered labels plus a rational distance matrix.
// Instances are immutable; growth operations return a new space.
class FiniteMetricSpace {
 public:
  using Point = int;
  using Scalar = Rat;
  using Map = TableMap;

  FiniteMetricSpace() = default;

  int size() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(int i) const { return labels_.at(i); }

  bool operator==(const FiniteMetricSpace& other) const {
    return labels_ == other.labels_ && dist_ == other.dist_;
  }

  const Rat& distance(int i, int j) const { return dist_[i][j]; }
  bool same_point(int i, int j) const { return i == j; }

  int index_of(const std::string& label) const {
    for (int i = 0; i < size(); ++i)
      if (labels_[i] == label) return i;
    throw malformed_error("UnknownLabel", label);
  }

  Point apply(const TableMap& f, Point p) const {
    if (!f.defined_at(p))
      throw validation_error("DomainMiss(" + (p >= 0 && p < size() ? labels_[p] : std::to_string(p)) + ")",
                             "map has no image for this point");
    return *f.image[p];
  }

  void dedup(std::vector<Point>& pts) const {
    std::vector<bool> seen(labels_.size(), false);
    std::vector<Point> out;
    out.reserve(pts.size());
    for (Point p : pts) {
      if (!seen[p]) {
        seen[p] = true;
        out.push_back(p);
      }
    }
    pts.swap(out);
  }

  // All distinct positive distances, ascending.
  std::vector<Rat> realized_distances() const {
    std::set<Rat> s;
    for (int i = 0; i < size(); ++i)
      for (int j = i + 1; j < size(); ++j) s.insert(dist_[i][j]);
    return {s.begin(), s.end()};
  }

  Rat diameter() const {
    Rat d = 0;
    for (int i = 0; i < size(); ++i)
      for (int j = i + 1; j < size(); ++j)
        if (dist_[i][j] > d) d = dist_[i][j];
    return d;
  }

  // New space with one appended point whose distances are `to_existing`.
  // The caller is responsible for metric validity (realize_point checks it).
  FiniteMetricSpace with_point(const std::string& label, const std::vector<Rat>& to_existing) const {
    FiniteMetricSpace out = *this;
    const int n = out.size();
    out.labels_.push_back(label);
    for (int i = 0; i < n; ++i) out.dist_[i].push_back(to_existing[i]);
    std::vector<Rat> row = to_existing;
    row.push_back(Rat(0));
    out.dist_.push_back(std::move(row));
    return out;
  }

  friend FiniteMetricSpace validate_metric(std::vector<std::vector<Rat>> matrix,
                                           std::vector<std::string> labels);

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<Rat>> dist_;
};

// Checks the metric axioms exactly and returns the space. Scan order fixes
// which offending entry each error names: symmetry, diagonal, positivity,
// then triangles (i<j outer, mediator k inner).
inline FiniteMetricSpace validate_metric(std::vector<std::vector<Rat>> matrix,
                                         std::vector<std::string> labels) {
  const std::size_t n = matrix.size();
  if (labels.empty()) {
    for (std::size_t i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
  }
  if (labels.size() != n)
    throw malformed_error("LabelCountMismatch",
                          std::to_string(labels.size()) + " labels for " + std::to_string(n) + " rows");
  for (std::size_t i = 0; i < n; ++i)
    if (matrix[i].size() != n)
      throw malformed_error("NotSquare", "row " + std::to_string(i));

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (matrix[i][j] != matrix[j][i])
        throw validation_error("AsymmetricMatrix(" + std::to_string(i) + "," + std::to_string(j) + ")");
  for (std::size_t i = 0; i < n; ++i)
    if (matrix[i][i] != 0)
      throw validation_error("NonzeroDiagonal(" + std::to_string(i) + ")");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (matrix[i][j] < 0)
        throw validation_error("NegativeEntry(" + std::to_string(i) + "," + std::to_string(j) + ")");
      if (matrix[i][j] == 0)
        throw validation_error("ZeroOffDiagonal(" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        if (matrix[i][j] > matrix[i][k] + matrix[k][j])
          throw validation_error("TriangleViolation(" + std::to_string(i) + "," + std::to_string(j) + "," +
                                     std::to_string(k) + ")",
                                 "dist[" + std::to_string(i) + "][" + std::to_string(j) + "] > dist[" +
                                     std::to_string(i) + "][" + std::to_string(k) + "] + dist[" +
                                     std::to_string(k) + "][" + std::to_string(j) + "]");
      }

  FiniteMetricSpace s;
  s.labels_ = std::move(labels);
  s.dist_ = std::move(matrix);
  return s;
}

// Builds the table map label->label, validating both sides.
inline TableMap table_map_from_labels(const FiniteMetricSpace& space,
                                      const std::map<std::string, std::string>& pairs) {
  TableMap m;
  m.image.assign(space.size(), std::nullopt);
  for (const auto& [from, to] : pairs) m.image[space.index_of(from)] = space.index_of(to);
  return m;
}

// Metric subspace on the given points (insertion order preserved).
inline FiniteMetricSpace subspace(const FiniteMetricSpace& space, const std::vector<int>& pts) {
  std::vector<std::vector<Rat>> d(pts.size(), std::vector<Rat>(pts.size()));
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    labels.push_back(space.label(pts[i]));
    for (std::size_t j = 0; j < pts.size(); ++j) d[i][j] = space.distance(pts[i], pts[j]);
  }
  return validate_metric(std::move(d), std::move(labels));
}

}  // namespace fractal
