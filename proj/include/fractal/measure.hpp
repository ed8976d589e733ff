#pragma once

#include <algorithm>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "fractal/errors.hpp"
#include "fractal/metric_space.hpp"
#include "fractal/prng.hpp"
#include "fractal/rational.hpp"

namespace fractal {

// Finitely supported probability measure with exact positive weights.
class DiscreteMeasure {
 public:
  DiscreteMeasure(std::shared_ptr<const FiniteMetricSpace> space, std::vector<int> support,
                  std::vector<Rat> weights)
      : space_(std::move(space)), support_(std::move(support)), weights_(std::move(weights)) {
    if (support_.empty() || support_.size() != weights_.size())
      throw validation_error("BadMeasure", "support/weight size mismatch or empty");
    Rat total(0);
    for (std::size_t i = 0; i < support_.size(); ++i) {
      if (support_[i] < 0 || support_[i] >= space_->size())
        throw validation_error("BadMeasure", "support point out of range");
      if (weights_[i] <= 0) throw validation_error("BadMeasure", "weights must be positive");
      for (std::size_t j = i + 1; j < support_.size(); ++j)
        if (support_[i] == support_[j])
          throw validation_error("BadMeasure", "duplicate support point");
      total += weights_[i];
    }
    if (total != 1) throw validation_error("BadMeasure", "weights must sum to 1");
  }

  const std::shared_ptr<const FiniteMetricSpace>& space() const { return space_; }
  const std::vector<int>& support() const { return support_; }
  const std::vector<Rat>& weights() const { return weights_; }
  std::size_t size() const { return support_.size(); }

  bool operator==(const DiscreteMeasure& other) const {
    if (space_ != other.space_) return false;
    if (support_.size() != other.support_.size()) return false;
    for (std::size_t i = 0; i < support_.size(); ++i) {
      bool found = false;
      for (std::size_t j = 0; j < other.support_.size(); ++j)
        if (support_[i] == other.support_[j] && weights_[i] == other.weights_[j]) {
          found = true;
          break;
        }
      if (!found) return false;
    }
    return true;
  }

 private:
  std::shared_ptr<const FiniteMetricSpace> space_;
  std::vector<int> support_;
  std::vector<Rat> weights_;
};

inline DiscreteMeasure dirac(std::shared_ptr<const FiniteMetricSpace> space, int point) {
  return DiscreteMeasure(std::move(space), {point}, {Rat(1)});
}

// Image measure Pf(mu): weights of support points with equal image are merged.
inline DiscreteMeasure pushforward(const TableMap& f, const DiscreteMeasure& mu) {
  std::vector<int> support;
  std::vector<Rat> weights;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const int img = mu.space()->apply(f, mu.support()[i]);
    bool merged = false;
    for (std::size_t k = 0; k < support.size(); ++k)
      if (support[k] == img) {
        weights[k] += mu.weights()[i];
        merged = true;
        break;
      }
    if (!merged) {
      support.push_back(img);
      weights.push_back(mu.weights()[i]);
    }
  }
  return DiscreteMeasure(mu.space(), std::move(support), std::move(weights));
}

// Coupling of two measures: exact marginal constraints, total mass 1.
class TransportPlan {
 public:
  TransportPlan(std::shared_ptr<const FiniteMetricSpace> space, std::vector<int> rows,
                std::vector<int> cols, std::vector<std::vector<Rat>> mass)
      : space_(std::move(space)), rows_(std::move(rows)), cols_(std::move(cols)), mass_(std::move(mass)) {
    if (mass_.size() != rows_.size()) throw validation_error("BadPlan", "row count mismatch");
    for (const auto& r : mass_) {
      if (r.size() != cols_.size()) throw validation_error("BadPlan", "column count mismatch");
      for (const Rat& v : r)
        if (v < 0) throw validation_error("BadPlan", "negative mass");
    }
  }

  const std::shared_ptr<const FiniteMetricSpace>& space() const { return space_; }
  const std::vector<int>& rows() const { return rows_; }
  const std::vector<int>& cols() const { return cols_; }
  const std::vector<std::vector<Rat>>& mass() const { return mass_; }

  std::vector<Rat> row_sums() const {
    std::vector<Rat> out(rows_.size(), Rat(0));
    for (std::size_t i = 0; i < rows_.size(); ++i)
      for (const Rat& v : mass_[i]) out[i] += v;
    return out;
  }

  std::vector<Rat> col_sums() const {
    std::vector<Rat> out(cols_.size(), Rat(0));
    for (std::size_t i = 0; i < rows_.size(); ++i)
      for (std::size_t j = 0; j < cols_.size(); ++j) out[j] += mass_[i][j];
    return out;
  }

  // Transport cost sum(mass * distance), exact.
  Rat cost() const {
    Rat total(0);
    for (std::size_t i = 0; i < rows_.size(); ++i)
      for (std::size_t j = 0; j < cols_.size(); ++j)
        if (mass_[i][j] != 0) total += mass_[i][j] * space_->distance(rows_[i], cols_[j]);
    return total;
  }

  // Cost after mapping both coordinates: sum(mass * d(f(x), f(y))).
  Rat cost_under(const TableMap& f) const {
    Rat total(0);
    for (std::size_t i = 0; i < rows_.size(); ++i)
      for (std::size_t j = 0; j < cols_.size(); ++j)
        if (mass_[i][j] != 0)
          total += mass_[i][j] * space_->distance(space_->apply(f, rows_[i]), space_->apply(f, cols_[j]));
    return total;
  }

 private:
  std::shared_ptr<const FiniteMetricSpace> space_;
  std::vector<int> rows_;
  std::vector<int> cols_;
  std::vector<std::vector<Rat>> mass_;
};

// Image coupling (f x f)(lambda); its marginals are exactly the pushforwards
// of lambda's marginals.
inline TransportPlan coupling_pushforward(const TransportPlan& plan, const TableMap& f) {
  std::vector<int> rows, cols;
  std::vector<std::size_t> row_of(plan.rows().size()), col_of(plan.cols().size());
  for (std::size_t i = 0; i < plan.rows().size(); ++i) {
    const int img = plan.space()->apply(f, plan.rows()[i]);
    bool found = false;
    for (std::size_t k = 0; k < rows.size(); ++k)
      if (rows[k] == img) {
        row_of[i] = k;
        found = true;
        break;
      }
    if (!found) {
      row_of[i] = rows.size();
      rows.push_back(img);
    }
  }
  for (std::size_t j = 0; j < plan.cols().size(); ++j) {
    const int img = plan.space()->apply(f, plan.cols()[j]);
    bool found = false;
    for (std::size_t k = 0; k < cols.size(); ++k)
      if (cols[k] == img) {
        col_of[j] = k;
        found = true;
        break;
      }
    if (!found) {
      col_of[j] = cols.size();
      cols.push_back(img);
    }
  }
  std::vector<std::vector<Rat>> mass(rows.size(), std::vector<Rat>(cols.size(), Rat(0)));
  for (std::size_t i = 0; i < plan.rows().size(); ++i)
    for (std::size_t j = 0; j < plan.cols().size(); ++j)
      mass[row_of[i]][col_of[j]] += plan.mass()[i][j];
  return TransportPlan(plan.space(), std::move(rows), std::move(cols), std::move(mass));
}

// Random measure: support of 2..6 distinct points, weights an exact random
// simplex point with denominator 1000 (sorted uniform cuts).
inline DiscreteMeasure random_measure(std::shared_ptr<const FiniteMetricSpace> space, SplitMix64& rng) {
  const int n = space->size();
  if (n < 2) throw validation_error("BadMeasure", "need at least 2 points to sample measures");
  const std::size_t k = std::min<std::size_t>(2 + rng.below(5), static_cast<std::size_t>(n));
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.below(n - i);
    std::swap(all[i], all[j]);
  }
  std::vector<int> support(all.begin(), all.begin() + k);

  std::vector<std::uint64_t> cuts;
  while (cuts.size() + 1 < k) {
    const std::uint64_t c = 1 + rng.below(999);
    if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<Rat> weights;
  std::uint64_t prev = 0;
  for (std::uint64_t c : cuts) {
    weights.push_back(Rat(BigInt(c - prev), BigInt(1000)));
    prev = c;
  }
  weights.push_back(Rat(BigInt(1000 - prev), BigInt(1000)));
  return DiscreteMeasure(std::move(space), std::move(support), std::move(weights));
}

}  // namespace fractal
