#pragma once

#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fractal/compact_set.hpp"
#include "fractal/hutchinson.hpp"
#include "fractal/metric_space.hpp"
#include "fractal/modulus.hpp"
#include "fractal/prng.hpp"

namespace fractal {

// Prescribed distances from a prospective new point to every point of a base
// space. Valid iff |k(z) - k(z')| <= d(z, z') <= k(z) + k(z') for all pairs.
struct KatetovFunction {
  std::shared_ptr<const FiniteMetricSpace> base;
  std::vector<Rat> values;

  // First violating pair, if any.
  std::optional<std::pair<int, int>> violation() const {
    const auto& s = *base;
    for (int i = 0; i < s.size(); ++i)
      for (int j = i + 1; j < s.size(); ++j) {
        const Rat diff = values[i] >= values[j] ? values[i] - values[j] : values[j] - values[i];
        if (diff > s.distance(i, j) || s.distance(i, j) > values[i] + values[j])
          return std::make_pair(i, j);
      }
    return std::nullopt;
  }
};

struct RealizedPoint {
  FiniteMetricSpace space;
  int point;
  bool fresh;  // false when the function collapsed onto an existing point
};

// One-point amalgamation: adjoin a point at the prescribed distances. A zero
// prescription names an existing point; with allow_collapse the function is
// realized by that point instead of erroring.
inline RealizedPoint realize_point(const FiniteMetricSpace& ambient, const KatetovFunction& k,
                                   const std::string& label, bool allow_collapse = false) {
  if (static_cast<int>(k.values.size()) != ambient.size())
    throw malformed_error("BadKatetovArity", "values do not cover the ambient space");
  if (auto bad = k.violation())
    throw validation_error("NotKatetov(" + ambient.label(bad->first) + "," + ambient.label(bad->second) + ")",
                           "prescribed distances violate a one-point triangle constraint");
  for (int z = 0; z < ambient.size(); ++z) {
    if (k.values[z] == 0) {
      if (!allow_collapse)
        throw validation_error("ZeroDistance(" + ambient.label(z) + ")",
                               "prescription coincides with an existing point");
      return {ambient, z, false};
    }
  }
  for (const std::string& l : ambient.labels())
    if (l == label) throw malformed_error("DuplicateLabel", label);
  FiniteMetricSpace grown = ambient.with_point(label, k.values);
  // Construction guarantees the axioms; revalidate to honor the contract.
  validate_metric([&] {
    std::vector<std::vector<Rat>> m(grown.size(), std::vector<Rat>(grown.size()));
    for (int i = 0; i < grown.size(); ++i)
      for (int j = 0; j < grown.size(); ++j) m[i][j] = grown.distance(i, j);
    return m;
  }(), grown.labels());
  const int new_point = grown.size() - 1;
  return {std::move(grown), new_point, true};
}

// Inductive extension state for one map: a partial assignment from domain
// points into a growing ambient approximation, bounded by a gauge.
struct ExtensionState {
  std::shared_ptr<const FiniteMetricSpace> domain;
  FiniteMetricSpace ambient;
  ContinuityModulus modulus;
  std::vector<std::optional<int>> assigned;  // domain point -> ambient point

  std::vector<int> assigned_points() const {
    std::vector<int> out;
    for (int i = 0; i < domain->size(); ++i)
      if (assigned[i]) out.push_back(i);
    return out;
  }

  // omega_f <= phi over currently assigned pairs; witness on failure.
  PairCheck modulus_check() const {
    const auto pts = assigned_points();
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j)
        if (ambient.distance(*assigned[pts[i]], *assigned[pts[j]]) >
            modulus(domain->distance(pts[i], pts[j])))
          return {false, pts[i], pts[j]};
    return {};
  }
};

// The inductive step's prescription: k(z) = min over assigned b of
// d_ambient(z, f(b)) + phi(d_domain(b, a)), evaluated against the whole
// current ambient so the grown space stays a single coherent metric space.
inline KatetovFunction katetov_from_map(const ExtensionState& state, int a) {
  if (a < 0 || a >= state.domain->size()) throw malformed_error("BadPoint", std::to_string(a));
  if (state.assigned[a])
    throw validation_error("AlreadyAssigned(" + state.domain->label(a) + ")");
  const auto pts = state.assigned_points();
  if (pts.empty()) throw validation_error("EmptyBase", "no assigned points to extend from");
  if (auto chk = state.modulus_check(); !chk.ok)
    throw validation_error("ModulusViolation",
                           "assigned map exceeds the gauge on pair (" + state.domain->label(chk.witness_a) +
                               "," + state.domain->label(chk.witness_b) + ")");

  KatetovFunction k;
  k.base = std::make_shared<FiniteMetricSpace>(state.ambient);
  k.values.resize(state.ambient.size());
  for (int z = 0; z < state.ambient.size(); ++z) {
    bool first = true;
    for (int b : pts) {
      const Rat cand = state.ambient.distance(z, *state.assigned[b]) +
                       state.modulus(state.domain->distance(b, a));
      if (first || cand < k.values[z]) {
        k.values[z] = cand;
        first = false;
      }
    }
  }
  return k;
}

struct ExtensionStep {
  std::string domain_label;
  std::string image_label;
  bool fresh = false;
  std::vector<Rat> prescription;
  int ambient_size_after = 0;
};

struct MapExtension {
  FiniteMetricSpace ambient;
  std::vector<int> image;  // total map: domain point -> ambient point
  std::vector<ExtensionStep> transcript;
};

// Extends a partial gauge-bounded map to the whole finite domain, realizing
// image points in (a growth of) the ambient space one enumeration step at a
// time. The restriction to the initial domain is preserved exactly and the
// gauge bound holds on every pair afterwards.
inline MapExtension extend_map(std::shared_ptr<const FiniteMetricSpace> domain,
                               const std::vector<std::optional<int>>& partial,
                               const ContinuityModulus& phi, const FiniteMetricSpace& ambient,
                               std::vector<int> order = {}, bool injective = false) {
  if (static_cast<int>(partial.size()) != domain->size())
    throw malformed_error("BadPartialMap", "assignment arity mismatch");

  ExtensionState state{domain, ambient, phi, partial};
  for (int i = 0; i < domain->size(); ++i)
    if (partial[i] && (*partial[i] < 0 || *partial[i] >= ambient.size()))
      throw malformed_error("BadPartialMap", "image out of range");
  if (state.assigned_points().empty())
    throw validation_error("EmptyBase", "the partial map must cover at least one point");
  if (auto chk = state.modulus_check(); !chk.ok)
    throw validation_error("ModulusViolation",
                           "partial map exceeds the gauge on pair (" + domain->label(chk.witness_a) + "," +
                               domain->label(chk.witness_b) + ")");

  if (injective) {
    for (const Rat& d : domain->realized_distances())
      if (d > 0 && phi(d) == 0)
        throw validation_error("InjectivityUnavailable",
                               "the gauge vanishes at realized distance " + rat_to_string(d));
    const auto pts = state.assigned_points();
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j)
        if (*partial[pts[i]] == *partial[pts[j]])
          throw validation_error("InjectivityUnavailable", "the partial map is not injective");
  }

  if (order.empty()) {
    for (int i = 0; i < domain->size(); ++i)
      if (!partial[i]) order.push_back(i);
  } else {
    std::vector<int> count(domain->size(), 0);
    for (int a : order) {
      if (a < 0 || a >= domain->size() || partial[a])
        throw malformed_error("OrderMismatch", "order must enumerate exactly the unassigned points");
      ++count[a];
    }
    for (int i = 0; i < domain->size(); ++i)
      if ((!partial[i] && count[i] != 1) || (partial[i] && count[i] != 0))
        throw malformed_error("OrderMismatch", "order must enumerate exactly the unassigned points");
  }

  auto fresh_label = [](const FiniteMetricSpace& amb, std::string base) {
    auto exists = [&](const std::string& l) {
      for (const std::string& other : amb.labels())
        if (other == l) return true;
      return false;
    };
    while (exists(base)) base += "'";
    return base;
  };

  MapExtension out;
  for (int a : order) {
    KatetovFunction k = katetov_from_map(state, a);
    const std::string label = fresh_label(state.ambient, domain->label(a) + "'");
    RealizedPoint realized = realize_point(state.ambient, k, label, /*allow_collapse=*/!injective);
    ExtensionStep step;
    step.domain_label = domain->label(a);
    step.image_label = realized.space.label(realized.point);
    step.fresh = realized.fresh;
    step.prescription = k.values;
    step.ambient_size_after = realized.space.size();
    out.transcript.push_back(std::move(step));
    state.ambient = std::move(realized.space);
    state.assigned[a] = realized.point;
  }

  out.image.resize(domain->size());
  for (int i = 0; i < domain->size(); ++i) out.image[i] = *state.assigned[i];
  out.ambient = std::move(state.ambient);

  // The induction guarantees the gauge bound on all pairs; verify exhaustively.
  for (int i = 0; i < domain->size(); ++i)
    for (int j = i + 1; j < domain->size(); ++j)
      if (out.ambient.distance(out.image[i], out.image[j]) > phi(domain->distance(i, j)))
        throw validation_error("ModulusViolation",
                               "internal: extension broke the gauge bound on pair (" + domain->label(i) +
                                   "," + domain->label(j) + ")");
  return out;
}

struct SystemExtension {
  std::shared_ptr<const FiniteMetricSpace> ambient;
  std::vector<TableMap> maps;        // total on the grown ambient
  std::vector<int> embedding;        // domain point -> ambient point (unchanged indices)
  std::vector<ExtensionStep> transcript;
};

// Extends every map of a self-similar table system from an isometric copy of
// its domain to a total system on the grown ambient. Image points realized
// during extension need images themselves, so a closure worklist runs until
// every map is total; prescriptions that land exactly on an existing point
// collapse onto it (a zero gauge collapses immediately), anything else grows
// the space. Systems whose extensions never collapse do not close finitely;
// the growth cap turns that into a structured error.
inline SystemExtension extend_system(std::shared_ptr<const FiniteMetricSpace> domain,
                                     const std::vector<TableMap>& maps,
                                     const std::vector<ContinuityModulus>& phis,
                                     const FiniteMetricSpace& ambient, const std::vector<int>& embedding,
                                     std::vector<int> order = {}, int growth_cap = 64) {
  const int nmaps = static_cast<int>(maps.size());
  if (nmaps == 0) throw validation_error("EmptySystem");
  if (static_cast<int>(phis.size()) != nmaps) throw validation_error("ModulusCountMismatch");
  if (static_cast<int>(embedding.size()) != domain->size())
    throw malformed_error("BadEmbedding", "embedding arity mismatch");

  for (int i = 0; i < domain->size(); ++i)
    for (int j = i + 1; j < domain->size(); ++j)
      if (domain->distance(i, j) != ambient.distance(embedding[i], embedding[j]))
        throw validation_error("EmbeddingNotIsometric",
                               "pair (" + domain->label(i) + "," + domain->label(j) + ")");

  for (int m = 0; m < nmaps; ++m) {
    if (auto chk = check_phi_contracting(*domain, maps[m], phis[m]); !chk.ok)
      throw validation_error("ModulusViolation",
                             "map " + std::to_string(m) + " exceeds its gauge on pair (" +
                                 domain->label(chk.witness_a) + "," + domain->label(chk.witness_b) + ")");
  }

  // Self-similarity: the Hutchinson image of the domain must be the domain.
  {
    std::vector<char> covered(domain->size(), 0);
    for (int m = 0; m < nmaps; ++m)
      for (int i = 0; i < domain->size(); ++i) covered[domain->apply(maps[m], i)] = 1;
    for (int i = 0; i < domain->size(); ++i)
      if (!covered[i])
        throw validation_error("NotSelfSimilar",
                               "point " + domain->label(i) + " is not in the system's image");
  }

  FiniteMetricSpace amb = ambient;
  std::vector<std::vector<std::optional<int>>> assigned(
      nmaps, std::vector<std::optional<int>>(amb.size(), std::nullopt));
  for (int m = 0; m < nmaps; ++m)
    for (int i = 0; i < domain->size(); ++i)
      assigned[m][embedding[i]] = embedding[domain->apply(maps[m], i)];

  std::deque<int> worklist;
  {
    std::vector<char> in_copy(amb.size(), 0);
    for (int e : embedding) in_copy[e] = 1;
    if (order.empty()) {
      for (int p = 0; p < amb.size(); ++p)
        if (!in_copy[p]) order.push_back(p);
    } else {
      std::vector<int> count(amb.size(), 0);
      for (int p : order) {
        if (p < 0 || p >= amb.size() || in_copy[p])
          throw malformed_error("OrderMismatch", "order must enumerate the ambient outside the copy");
        ++count[p];
      }
      for (int p = 0; p < amb.size(); ++p)
        if (!in_copy[p] && count[p] != 1)
          throw malformed_error("OrderMismatch", "order must enumerate the ambient outside the copy");
    }
    worklist.assign(order.begin(), order.end());
  }

  SystemExtension out;
  while (!worklist.empty()) {
    const int p = worklist.front();
    worklist.pop_front();
    for (int m = 0; m < nmaps; ++m) {
      if (assigned[m][p]) continue;
      // Ambient doubles as the extension domain: d_A is the ambient metric.
      auto amb_shared = std::make_shared<const FiniteMetricSpace>(amb);
      ExtensionState state{amb_shared, amb, phis[m], assigned[m]};
      KatetovFunction k = katetov_from_map(state, p);
      const std::string label = "f" + std::to_string(m) + "(" + amb.label(p) + ")";
      RealizedPoint realized = realize_point(amb, k, label, /*allow_collapse=*/true);

      ExtensionStep step;
      step.domain_label = amb.label(p);
      step.image_label = realized.space.label(realized.point);
      step.fresh = realized.fresh;
      step.prescription = k.values;
      step.ambient_size_after = realized.space.size();
      out.transcript.push_back(std::move(step));

      amb = std::move(realized.space);
      if (realized.fresh) {
        if (amb.size() > growth_cap)
          throw Error(ErrorKind::kNonConvergence, "GrowthCapExceeded",
                      "system extension did not close within " + std::to_string(growth_cap) + " points");
        for (int mm = 0; mm < nmaps; ++mm) assigned[mm].emplace_back(std::nullopt);
        worklist.push_back(realized.point);
      }
      assigned[m][p] = realized.point;
    }
  }

  out.ambient = std::make_shared<const FiniteMetricSpace>(std::move(amb));
  out.embedding = embedding;
  out.maps.resize(nmaps);
  for (int m = 0; m < nmaps; ++m) {
    out.maps[m].image.resize(out.ambient->size());
    for (int p = 0; p < out.ambient->size(); ++p) out.maps[m].image[p] = assigned[m][p];
  }
  return out;
}

struct UrysohnGrowth {
  FiniteMetricSpace space;
  int rounds_done = 0;
  int rounds_skipped = 0;
};

// Grows a finite approximation of the universal space: each round samples a
// grid-valued prescription over a random subset, extends it canonically to
// the whole space (k(z) = min over the subset of k(s) + d(s, z)) and adjoins
// the realized point. Invalid candidates are resampled up to 1000 times, then
// the round is skipped.
inline UrysohnGrowth build_urysohn_approx(const FiniteMetricSpace& seed_space, int rounds,
                                          const std::vector<Rat>& distance_grid, std::uint64_t seed) {
  for (const Rat& g : distance_grid)
    if (g <= 0) throw validation_error("BadGrid", "grid values must be positive");
  if (distance_grid.empty()) throw validation_error("EmptyGrid");

  UrysohnGrowth out{seed_space, 0, 0};
  SplitMix64 rng(seed);
  for (int r = 0; r < rounds; ++r) {
    const int n = out.space.size();
    bool realized_this_round = false;
    for (int attempt = 0; attempt < 1000 && !realized_this_round; ++attempt) {
      const std::size_t subset_size = 1 + rng.below(std::min(4, n));
      std::vector<int> all(n);
      for (int i = 0; i < n; ++i) all[i] = i;
      for (std::size_t i = 0; i < subset_size; ++i) std::swap(all[i], all[i + rng.below(n - i)]);
      std::vector<int> subset(all.begin(), all.begin() + subset_size);
      std::vector<Rat> values(subset_size);
      for (auto& v : values) v = distance_grid[rng.below(distance_grid.size())];

      bool ok = true;
      for (std::size_t i = 0; i < subset_size && ok; ++i)
        for (std::size_t j = i + 1; j < subset_size && ok; ++j) {
          const Rat d = out.space.distance(subset[i], subset[j]);
          const Rat diff = values[i] >= values[j] ? values[i] - values[j] : values[j] - values[i];
          if (diff > d || d > values[i] + values[j]) ok = false;
        }
      if (!ok) continue;

      KatetovFunction k;
      k.base = std::make_shared<FiniteMetricSpace>(out.space);
      k.values.resize(n);
      for (int z = 0; z < n; ++z) {
        bool first = true;
        for (std::size_t s = 0; s < subset_size; ++s) {
          const Rat cand = values[s] + out.space.distance(subset[s], z);
          if (first || cand < k.values[z]) {
            k.values[z] = cand;
            first = false;
          }
        }
      }
      RealizedPoint realized =
          realize_point(out.space, k, "u" + std::to_string(out.space.size()), /*allow_collapse=*/false);
      out.space = std::move(realized.space);
      realized_this_round = true;
    }
    if (realized_this_round) {
      ++out.rounds_done;
    } else {
      ++out.rounds_skipped;
    }
  }
  return out;
}

// Universality progress probe: the fraction of sampled grid-valued
// prescriptions over small subsets that some existing point already realizes
// within the given tolerance.
inline double realizable_fraction(const FiniteMetricSpace& space, int n_samples, int subset_size,
                                  const std::vector<Rat>& distance_grid, const Rat& tol,
                                  std::uint64_t seed) {
  if (distance_grid.empty()) throw validation_error("EmptyGrid");
  SplitMix64 rng(seed);
  int realized = 0, valid = 0;
  const int n = space.size();
  for (int s = 0; s < n_samples; ++s) {
    bool got_candidate = false;
    std::vector<int> subset;
    std::vector<Rat> values;
    for (int attempt = 0; attempt < 1000 && !got_candidate; ++attempt) {
      const int k = std::min(subset_size, n);
      std::vector<int> all(n);
      for (int i = 0; i < n; ++i) all[i] = i;
      for (int i = 0; i < k; ++i) std::swap(all[i], all[i + rng.below(n - i)]);
      subset.assign(all.begin(), all.begin() + k);
      values.resize(k);
      for (auto& v : values) v = distance_grid[rng.below(distance_grid.size())];
      got_candidate = true;
      for (int i = 0; i < k && got_candidate; ++i)
        for (int j = i + 1; j < k && got_candidate; ++j) {
          const Rat d = space.distance(subset[i], subset[j]);
          const Rat diff = values[i] >= values[j] ? values[i] - values[j] : values[j] - values[i];
          if (diff > d || d > values[i] + values[j]) got_candidate = false;
        }
    }
    if (!got_candidate) continue;
    ++valid;
    for (int z = 0; z < n; ++z) {
      bool match = true;
      for (std::size_t i = 0; i < subset.size(); ++i) {
        const Rat d = space.distance(z, subset[i]);
        const Rat diff = d >= values[i] ? d - values[i] : values[i] - d;
        if (diff > tol) {
          match = false;
          break;
        }
      }
      if (match) {
        ++realized;
        break;
      }
    }
  }
  return valid == 0 ? 0.0 : static_cast<double>(realized) / static_cast<double>(valid);
}

}  // namespace fractal
