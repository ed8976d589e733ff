#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fractal/compact_set.hpp"
#include "fractal/errors.hpp"
#include "fractal/modulus.hpp"
#include "fractal/prng.hpp"

namespace fractal {

// Finite family of self-maps of one ambient space, optionally with per-map
// gauge claims. Claims on table systems are verified exhaustively at
// construction; Euclidean claims are the caller's responsibility and are
// exercised empirically through hyperspace_contraction_report.
template <class S>
class IFSystem {
 public:
  IFSystem(std::shared_ptr<const S> space, std::vector<typename S::Map> maps,
           std::vector<ContinuityModulus> moduli = {})
      : space_(std::move(space)), maps_(std::move(maps)), moduli_(std::move(moduli)) {
    if (maps_.empty()) throw validation_error("EmptySystem", "a function system needs at least one map");
    if (!moduli_.empty() && moduli_.size() != maps_.size())
      throw validation_error("ModulusCountMismatch");
    if constexpr (std::is_same_v<S, FiniteMetricSpace>) {
      for (std::size_t m = 0; m < moduli_.size(); ++m) {
        auto chk = check_phi_contracting(*space_, maps_[m], moduli_[m]);
        if (!chk.ok)
          throw validation_error("ModulusViolation",
                                 "map " + std::to_string(m) + " exceeds its gauge on pair (" +
                                     space_->label(chk.witness_a) + "," + space_->label(chk.witness_b) + ")");
      }
    }
  }

  const std::shared_ptr<const S>& space() const { return space_; }
  const std::vector<typename S::Map>& maps() const { return maps_; }
  const std::vector<ContinuityModulus>& moduli() const { return moduli_; }
  std::size_t size() const { return maps_.size(); }

 private:
  std::shared_ptr<const S> space_;
  std::vector<typename S::Map> maps_;
  std::vector<ContinuityModulus> moduli_;
};

// The Hutchinson operator: K -> union of f(K) over the system's maps.
template <class S>
CompactSet<S> hutchinson_image(const IFSystem<S>& sys, const CompactSet<S>& k) {
  std::vector<typename S::Point> out;
  out.reserve(k.size() * sys.size());
  for (const auto& f : sys.maps())
    for (const auto& p : k.points()) out.push_back(sys.space()->apply(f, p));
  return CompactSet<S>(k.space(), std::move(out));
}

template <class S>
struct AttractorResult {
  CompactSet<S> set;
  std::vector<typename S::Scalar> history;  // d_H(K_n, K_{n+1}) per step
};

// Iterates the Hutchinson operator from k0 until the successive-step gap
// d_H(K_n, K_{n+1}) falls to tol, returning the latest iterate and the gap
// history. The limit is unknown a priori, so convergence is Cauchy-style.
template <class S>
AttractorResult<S> iterate_to_attractor(const IFSystem<S>& sys, const CompactSet<S>& k0,
                                        const typename S::Scalar& tol, std::size_t max_iter) {
  if (!(tol > typename S::Scalar{})) throw validation_error("BadTolerance", "tol must be positive");
  CompactSet<S> current = k0;
  std::vector<typename S::Scalar> history;
  for (std::size_t n = 0; n < max_iter; ++n) {
    CompactSet<S> next = hutchinson_image(sys, current);
    auto gap = hausdorff_distance(current, next);
    history.push_back(gap);
    if (gap <= tol) return {std::move(next), std::move(history)};
    current = std::move(next);
  }
  std::vector<double> hist_d;
  hist_d.reserve(history.size());
  for (const auto& h : history) {
    if constexpr (std::is_same_v<typename S::Scalar, Rat>) {
      hist_d.push_back(rat_to_double(h));
    } else {
      hist_d.push_back(h);
    }
  }
  throw NonConvergenceError(max_iter, std::move(hist_d));
}

// Finite truncation of an address: indices into the system's map list,
// word[0] outermost.
struct Code {
  std::vector<int> word;
};

template <class S>
void validate_code(const IFSystem<S>& sys, const Code& code) {
  if (code.word.empty()) throw validation_error("EmptyCode");
  for (int i : code.word)
    if (i < 0 || static_cast<std::size_t>(i) >= sys.size())
      throw validation_error("BadCodeIndex", std::to_string(i));
}

// f_{w0} o ... o f_{wn} applied to the first member of D. Representative
// dependence is bounded by code_diameter.
template <class S>
typename S::Point code_point(const IFSystem<S>& sys, const Code& code, const CompactSet<S>& d) {
  validate_code(sys, code);
  typename S::Point x = d.front();
  for (auto it = code.word.rbegin(); it != code.word.rend(); ++it)
    x = sys.space()->apply(sys.maps()[*it], x);
  return x;
}

// Diameter of f_{w0} o ... o f_{wn} (D): the singleton certificate along the
// code. Nonincreasing under code extension whenever D is sub-invariant.
template <class S>
typename S::Scalar code_diameter(const IFSystem<S>& sys, const Code& code, const CompactSet<S>& d) {
  validate_code(sys, code);
  CompactSet<S> img = d;
  for (auto it = code.word.rbegin(); it != code.word.rend(); ++it)
    img = set_image(sys.maps()[*it], img);
  return set_diameter(img);
}

// Random-orbit sampler: applies uniformly chosen maps from x0 and keeps the
// points from step burn_in onward. Deterministic in the seed.
template <class S>
CompactSet<S> chaos_game(const IFSystem<S>& sys, const typename S::Point& x0, std::size_t n_steps,
                         std::size_t burn_in, std::uint64_t seed) {
  if (n_steps <= burn_in) throw validation_error("BadChaosRange", "n_steps must exceed burn_in");
  SplitMix64 rng(seed);
  std::vector<typename S::Point> kept;
  kept.reserve(n_steps - burn_in + 1);
  typename S::Point x = x0;
  if (burn_in == 0) kept.push_back(x);
  for (std::size_t k = 1; k <= n_steps; ++k) {
    const auto& f = sys.maps()[rng.below(sys.size())];
    x = sys.space()->apply(f, x);
    if (k >= burn_in) kept.push_back(x);
  }
  return CompactSet<S>(sys.space(), std::move(kept));
}

struct ContractionReport {
  double max_ratio = 0.0;
  std::size_t pairs_used = 0;
  std::size_t pairs_skipped = 0;  // degenerate draws with d_H(A, B) = 0
};

namespace detail {

inline std::vector<Vec> report_cloud(const IFSystem<EuclideanSpace>& sys, SplitMix64& rng) {
  // Orbit of the system itself: bounded and representative of its geometry.
  Vec x{};
  std::vector<Vec> cloud;
  for (int k = 0; k < 84; ++k) {
    x = sys.maps()[rng.below(sys.size())](x);
    if (k >= 20) cloud.push_back(x);
  }
  return cloud;
}

inline std::vector<int> report_cloud(const IFSystem<FiniteMetricSpace>& sys, SplitMix64&) {
  std::vector<int> cloud(sys.space()->size());
  for (int i = 0; i < sys.space()->size(); ++i) cloud[i] = i;
  return cloud;
}

}  // namespace detail

// Empirical hyperspace Lipschitz probe: max d_H(F(A), F(B)) / d_H(A, B) over
// seeded random compact pairs drawn from a seeded point cloud.
template <class S>
ContractionReport hyperspace_contraction_report(const IFSystem<S>& sys, std::size_t n_pairs,
                                                std::uint64_t seed) {
  SplitMix64 rng(seed);
  auto cloud = detail::report_cloud(sys, rng);
  ContractionReport rep;
  std::size_t attempts = 0;
  const std::size_t max_attempts = n_pairs * 64 + 64;
  while (rep.pairs_used < n_pairs && attempts < max_attempts) {
    ++attempts;
    auto draw = [&] {
      const std::size_t sz = 1 + rng.below(8);
      std::vector<typename S::Point> pts;
      for (std::size_t i = 0; i < sz; ++i) pts.push_back(cloud[rng.below(cloud.size())]);
      return CompactSet<S>(sys.space(), std::move(pts));
    };
    CompactSet<S> a = draw();
    CompactSet<S> b = draw();
    auto base = hausdorff_distance(a, b);
    if (!(base > typename S::Scalar{})) {
      ++rep.pairs_skipped;
      continue;
    }
    auto lifted = hausdorff_distance(hutchinson_image(sys, a), hutchinson_image(sys, b));
    double ratio;
    if constexpr (std::is_same_v<typename S::Scalar, Rat>) {
      ratio = rat_to_double(lifted / base);
    } else {
      ratio = lifted / base;
    }
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    ++rep.pairs_used;
  }
  return rep;
}

}  // namespace fractal
