#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "submod/core.hpp"
#include "submod/objectives.hpp"
#include "submod/oracle.hpp"

namespace submod {

enum class CsExit { lower_crossed, upper_crossed, budget_exhausted };

// Outcome of one adaptive accept/reject decision.
//   lower_crossed:    mean - C_t >= w - eps at exit, accept
//   upper_crossed:    mean + C_t <= w + eps at exit, reject
//   budget_exhausted: t reached N2, accept iff mean >= w
struct CsVerdict {
  bool accept = false;
  std::int64_t samples_used = 0;
  double final_mean = 0.0;
  CsExit exit_kind = CsExit::budget_exhausted;
};

// Observer over the sampler's internal state, for verification suites that
// need every (t, mean, radius) triple. Invoked after each sample, before the
// exit tests.
struct CsProbe {
  virtual ~CsProbe() = default;
  virtual void on_sample(std::int64_t t, double mean, double radius) = 0;
};

// Adaptive sampler: draws one sample at a time with an incremental mean,
// exits at the first t where mean - C_t >= w - eps (accept) or
// mean + C_t <= w + eps (reject), and after N2 samples accepts iff mean >= w.
CsVerdict confident_sample(MarginalOracle& oracle, const ElementSet& s, int u,
                           double w, const AlgoConfig& cfg,
                           CsProbe* probe = nullptr);

// Geometrically decaying threshold schedule: w = d * (1-alpha)^round, active
// while w > alpha * d / kappa.
struct ThresholdState {
  double w = 0.0;
  double d = 0.0;
  int round = 0;

  static ThresholdState start(double d) { return {d, d, 0}; }
  bool active(const AlgoConfig& cfg) const {
    return w > cfg.alpha * d / static_cast<double>(cfg.kappa);
  }
  void decay(double alpha) {
    w *= (1.0 - alpha);
    ++round;
  }
};

// Estimates every singleton value with N1 samples and returns the largest
// sample mean (the d that seeds the threshold schedule).
double estimate_max_singleton(MarginalOracle& oracle, const GroundSet& ground,
                              const AlgoConfig& cfg);

// Confident threshold greedy: max-singleton scan, then threshold rounds where
// each candidate is admitted or skipped by confident_sample. Elements already
// in S are not re-queried (their gain is 0) and the round loop stops as soon
// as |S| = kappa. If every singleton estimate is <= 0 the run returns an
// empty solution flagged degenerate_estimate.
SolutionTrace ctg(MarginalOracle& oracle, const GroundSet& ground,
                  const AlgoConfig& cfg);

// Fixed-precision baseline: identical schedule to ctg but every decision
// spends exactly N2 samples and accepts iff the mean >= w.
SolutionTrace eps_ap(MarginalOracle& oracle, const GroundSet& ground,
                     const AlgoConfig& cfg);

// Threshold greedy with exact gains (w seeded with the exact max singleton).
SolutionTrace threshold_greedy_exact(const Objective& f, const AlgoConfig& cfg);

// Standard greedy with exact gains; ties broken by lowest index.
SolutionTrace greedy_exact(const Objective& f, int kappa);

// Greedy with best-arm-identification selection: each of the kappa iterations
// runs TOP-l selections for l = 1..k_prime over shared per-element sample
// means, sampling the most ambiguous element until some TOP-l instance
// separates its top set from the rest at tolerance epsilon, then adds a
// uniformly random member of the separated set (deterministic for k_prime=1).
SolutionTrace exp_greedy(MarginalOracle& oracle, const GroundSet& ground,
                         const AlgoConfig& cfg, int k_prime);

// Exhaustive optimum over all subsets of size <= kappa. Guarded by
// C(n, kappa) <= 10^6; throws InstanceTooLarge beyond that.
std::pair<std::vector<int>, double> brute_force_opt(const Objective& f,
                                                    int kappa);

}  // namespace submod
