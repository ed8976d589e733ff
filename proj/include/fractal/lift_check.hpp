#pragma once

#include <utility>
#include <vector>

#include "fractal/modulus.hpp"
#include "fractal/wasserstein.hpp"

namespace fractal {

struct LiftTrial {
  Rat w_before;       // W1(mu, eta)
  Rat w_after;        // W1(Pf mu, Pf eta)
  Rat ratio;          // w_after / w_before
  Rat coupling_gap;   // integral d d(lambda*) - integral d o (f x f) d(lambda*)
  Rat delta;          // smallest positive distance carrying optimal mass
  Rat xdelta_mass;    // lambda*{(x, x') : d(x, x') >= delta}
  bool strict = false;
  bool chain_ok = false;  // w_after <= cost_under(f) <= integral phi d(lambda*)
  bool marginals_ok = false;
};

struct LiftReport {
  std::vector<LiftTrial> trials;
  double strict_fraction = 0.0;
  Rat max_ratio;
  Rat coupling_gap_min;
  bool all_chains_ok = false;
  bool all_marginals_ok = false;
};

// Empirical check that the measure lift Pf contracts W1 whenever f is
// gauge-contracting with a gauge strictly below the identity on realized
// distances. Per trial: draw distinct random measures, solve both transport
// problems exactly, and record the strict inequality, the comparison chain
// W1(Pf mu, Pf eta) <= sum d(f x, f y) lambda* <= sum phi(d(x, y)) lambda*,
// and the exact marginal identity of the pushforward coupling.
inline LiftReport verify_measure_contraction(const TableMap& f, const ContinuityModulus& phi,
                                             std::shared_ptr<const FiniteMetricSpace> space,
                                             std::size_t n_trials, std::uint64_t seed,
                                             bool skip_precondition = false) {
  if (n_trials < 1) throw validation_error("BadTrialCount");
  if (!skip_precondition) {
    const auto chk = check_phi_contracting(*space, f, phi);
    if (!chk.ok)
      throw validation_error("NotContractingInput", "map exceeds the gauge on pair (" +
                                                        space->label(chk.witness_a) + "," +
                                                        space->label(chk.witness_b) + ")");
    if (!phi.strictly_below_identity(space->realized_distances()))
      throw validation_error("NotContractingInput", "gauge is not strictly below identity");
  }

  LiftReport report;
  SplitMix64 master(seed);
  for (std::size_t t = 0; t < n_trials; ++t) {
    SplitMix64 rng = master.split();
    DiscreteMeasure mu = random_measure(space, rng);
    DiscreteMeasure eta = random_measure(space, rng);
    for (int attempt = 0; attempt < 1000 && mu == eta; ++attempt) eta = random_measure(space, rng);
    if (mu == eta) throw validation_error("DegeneratePair", "could not draw distinct measures");

    auto before = wasserstein1(mu, eta);
    auto after = wasserstein1(pushforward(f, mu), pushforward(f, eta));

    LiftTrial trial;
    trial.w_before = before.value;
    trial.w_after = after.value;
    trial.ratio = before.value == 0 ? Rat(0) : after.value / before.value;
    trial.strict = after.value < before.value;

    const Rat mapped_cost = before.plan.cost_under(f);
    trial.coupling_gap = before.value - mapped_cost;

    Rat phi_cost(0);
    for (std::size_t i = 0; i < before.plan.rows().size(); ++i)
      for (std::size_t j = 0; j < before.plan.cols().size(); ++j)
        if (before.plan.mass()[i][j] != 0)
          phi_cost += before.plan.mass()[i][j] *
                      phi(space->distance(before.plan.rows()[i], before.plan.cols()[j]));
    trial.chain_ok = after.value <= mapped_cost && mapped_cost <= phi_cost;

    // The strict-inequality witness: mass on pairs at distance >= delta.
    bool have_delta = false;
    for (std::size_t i = 0; i < before.plan.rows().size(); ++i)
      for (std::size_t j = 0; j < before.plan.cols().size(); ++j) {
        if (before.plan.mass()[i][j] == 0) continue;
        const Rat d = space->distance(before.plan.rows()[i], before.plan.cols()[j]);
        if (d > 0 && (!have_delta || d < trial.delta)) {
          trial.delta = d;
          have_delta = true;
        }
      }
    if (have_delta) {
      for (std::size_t i = 0; i < before.plan.rows().size(); ++i)
        for (std::size_t j = 0; j < before.plan.cols().size(); ++j)
          if (before.plan.mass()[i][j] != 0 &&
              space->distance(before.plan.rows()[i], before.plan.cols()[j]) >= trial.delta)
            trial.xdelta_mass += before.plan.mass()[i][j];
    }

    // Marginal identity of the image coupling, exact.
    {
      TransportPlan pushed = coupling_pushforward(before.plan, f);
      DiscreteMeasure pf_mu = pushforward(f, mu);
      DiscreteMeasure pf_eta = pushforward(f, eta);
      trial.marginals_ok = true;
      auto rows = pushed.row_sums();
      for (std::size_t i = 0; i < pushed.rows().size(); ++i) {
        Rat expect(-1);
        for (std::size_t k = 0; k < pf_mu.size(); ++k)
          if (pf_mu.support()[k] == pushed.rows()[i]) expect = pf_mu.weights()[k];
        if (rows[i] != expect) trial.marginals_ok = false;
      }
      auto cols = pushed.col_sums();
      for (std::size_t j = 0; j < pushed.cols().size(); ++j) {
        Rat expect(-1);
        for (std::size_t k = 0; k < pf_eta.size(); ++k)
          if (pf_eta.support()[k] == pushed.cols()[j]) expect = pf_eta.weights()[k];
        if (cols[j] != expect) trial.marginals_ok = false;
      }
    }

    report.trials.push_back(std::move(trial));
  }

  std::size_t strict = 0;
  report.all_chains_ok = true;
  report.all_marginals_ok = true;
  for (std::size_t t = 0; t < report.trials.size(); ++t) {
    const LiftTrial& trial = report.trials[t];
    if (trial.strict) ++strict;
    if (!trial.chain_ok) report.all_chains_ok = false;
    if (!trial.marginals_ok) report.all_marginals_ok = false;
    if (t == 0 || trial.ratio > report.max_ratio) report.max_ratio = trial.ratio;
    if (t == 0 || trial.coupling_gap < report.coupling_gap_min)
      report.coupling_gap_min = trial.coupling_gap;
  }
  report.strict_fraction = static_cast<double>(strict) / static_cast<double>(report.trials.size());
  return report;
}

}  // namespace fractal
